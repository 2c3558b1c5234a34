//! Envelope of the δ-cut lines of a planar polygon.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{check_delta, Caps};
use crate::error::{Error, Result};
use crate::measure::Weight;
use crate::polytope::polygon::P2;
use crate::polytope::Polytope;

/// Closed polyline of tangency points of the lines cutting off weight δ,
/// one per direction 2πk/samples; the last point repeats the first.
/// Each point is the intersection of the cut lines at θ ± h.
pub fn envelope_2d(w: &Weight, p: &Polytope, delta: f64, samples: usize) -> Result<Vec<P2>> {
    if p.dim() != 2 {
        return Err(Error::bad(
            "floating-body",
            "envelope needs a planar polytope",
        ));
    }
    if samples < 3 {
        return Err(Error::bad(
            "floating-body",
            "envelope needs at least 3 samples",
        ));
    }
    let caps = Caps::new(w, p)?;
    check_delta(delta, caps.total)?;
    let h = (0.25 * PI / samples as f64).min(1e-4);
    let pts: Vec<P2> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let th = 2.0 * PI * k as f64 / samples as f64;
            let line = |a: f64| -> Result<(P2, f64)> {
                let u = [a.cos(), a.sin()];
                Ok((u, caps.solve(&u, delta)?.offset))
            };
            let (u1, t1) = line(th - h)?;
            let (u2, t2) = line(th + h)?;
            let det = u1[0] * u2[1] - u1[1] * u2[0];
            Ok([
                (t1 * u2[1] - t2 * u1[1]) / det,
                (u1[0] * t2 - u2[0] * t1) / det,
            ])
        })
        .collect::<Result<_>>()?;
    let mut out = pts;
    out.push(out[0]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::generators;

    #[test]
    fn square_envelope_is_closed_and_convex() {
        let sq = generators::cube(2).unwrap();
        let env = envelope_2d(&Weight::Uniform, &sq, 1e-3, 400).unwrap();
        assert_eq!(env.len(), 401);
        assert!((env[0][0] - env[400][0]).abs() + (env[0][1] - env[400][1]).abs() < 1e-6);
        // the inner region turns left at every vertex
        let mut negative = 0;
        for k in 0..400 {
            let (a, b, c) = (env[k], env[k + 1], env[(k + 2) % 400]);
            let cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if cr < -1e-9 {
                negative += 1;
            }
        }
        assert_eq!(negative, 0);
        // the diagonal direction is tangent to xy = 2δ at the chord midpoint, √(2δ)/2 from the corner along both axes
        let k = 50;
        let s = 0.5 * (2e-3f64).sqrt();
        assert!(
            (env[k][0] - (1.0 - s)).abs() < 1e-6 && (env[k][1] - (1.0 - s)).abs() < 1e-6,
            "{:?}",
            env[k]
        );
    }
}
