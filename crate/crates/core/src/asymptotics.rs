//! δ-schedules, ratio curves, the predicted flag-count limit, limit
//! extraction by least squares, and Monte Carlo checks near a vertex.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flag_simplex::FlagSimplex;
use crate::floating::{
    a_plus_measure_mc, a_plus_restricted_mc, b_plus_measure_mc, floating_body, wet_part_measure,
    DirectionSpec, McEstimate,
};
use crate::measure::Weight;
use crate::polytope::polygon::{annulus_triangles, ConvexPolygon};
use crate::polytope::{point, Polytope};

/// Condition number above which a fit is rejected.
pub const MAX_CONDITION: f64 = 1e12;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// n!·n^{n−1}, the normalizer of the per-flag contribution.
pub fn flag_normalizer(n: usize) -> f64 {
    factorial(n) * (n as f64).powi(n as i32 - 1)
}

/// Σ_v ψ(v)/φ(v)·|flag_v(P)| / (n!·n^{n−1}). Equal densities contribute
/// the ratio 1 even where they blow up, as at ideal vertices.
pub fn predicted_limit(p: &Polytope, phi: &Weight, psi: &Weight) -> Result<f64> {
    let l = p.face_lattice();
    let per_vertex = l.flags_per_vertex();
    let mut sum = 0.0;
    for (v, &count) in p.vertices().iter().zip(&per_vertex) {
        let ratio = if phi == psi {
            1.0
        } else {
            let a = phi.eval(v.as_slice());
            let b = psi.eval(v.as_slice());
            if !(a > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(Error::bad(
                    "asymptotics",
                    "densities must be positive and finite at the vertices",
                ));
            }
            b / a
        };
        sum += ratio * count as f64;
    }
    Ok(sum / flag_normalizer(p.dim()))
}

/// `count` log-spaced values from `from` to `to`, in the given order.
pub fn log_schedule(from: f64, to: f64, count: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && to > 0.0) || count < 2 {
        return Err(Error::bad(
            "asymptotics",
            "schedule needs positive endpoints and at least 2 points",
        ));
    }
    let (a, b) = (from.ln(), to.ln());
    Ok((0..count)
        .map(|k| {
            if k == 0 {
                from
            } else if k + 1 == count {
                to
            } else {
                (a + (b - a) * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// Parse `A:B:COUNT`.
pub fn parse_schedule(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || {
        Error::bad(
            "asymptotics",
            format!("schedule must be A:B:COUNT, got {s:?}"),
        )
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let c: usize = parts[2].trim().parse().map_err(|_| bad())?;
    log_schedule(a, b, c)
}

fn check_decreasing(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() || schedule.windows(2).any(|w| !(w[1] < w[0])) || !(schedule[0] > 0.0) {
        return Err(Error::bad(
            "asymptotics",
            "schedule must be positive and strictly decreasing",
        ));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioEntry {
    pub delta: f64,
    pub wet: f64,
    pub abs_error: f64,
    /// wet / (δ·ln(1/δ)^{n−1})
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioCurve {
    pub dim: usize,
    pub entries: Vec<RatioEntry>,
}

pub fn ratio_of(wet: f64, delta: f64, n: usize) -> f64 {
    wet / (delta * (1.0 / delta).ln().powi(n as i32 - 1))
}

/// One wet-part measurement per δ, sharing the direction strategy.
pub fn ratio_curve(
    phi: &Weight,
    psi: &Weight,
    p: &Polytope,
    schedule: &[f64],
    spec: &DirectionSpec,
    refine_tol: f64,
) -> Result<RatioCurve> {
    check_decreasing(schedule)?;
    let n = p.dim();
    let entries = schedule
        .par_iter()
        .map(|&d| {
            let wp = wet_part_measure(phi, psi, p, d, spec, refine_tol)?;
            Ok(RatioEntry {
                delta: d,
                wet: wp.value,
                abs_error: wp.abs_error_estimate,
                ratio: ratio_of(wp.value, d, n),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioCurve { dim: n, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitFit {
    pub c1: f64,
    pub c2: f64,
    pub residual_rms: f64,
    pub condition: f64,
}

/// Least squares for wet = c1·δ·L^{n−1} + c2·δ·L^{n−2}, L = ln(1/δ), with
/// weights 1/δ, i.e. an unweighted fit of wet/δ.
pub fn fit_limit(curve: &RatioCurve, n: usize) -> Result<LimitFit> {
    let m = curve.entries.len();
    if m < 4 {
        return Err(Error::bad(
            "asymptotics",
            "fit needs at least 4 schedule points",
        ));
    }
    let k = n as i32;
    let a = DMatrix::from_fn(m, 2, |r, c| {
        let l = (1.0 / curve.entries[r].delta).ln();
        l.powi(k - 1 - c as i32)
    });
    let y = DVector::from_iterator(m, curve.entries.iter().map(|e| e.wet / e.delta));
    let svd = a.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned(condition));
    }
    let c = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::bad("asymptotics", e))?;
    let r = &a * &c - &y;
    Ok(LimitFit {
        c1: c[0],
        c2: c[1],
        residual_rms: (r.norm_squared() / m as f64).sqrt(),
        condition,
    })
}

/// Decreasing over the last three values (with `slack` allowed per step)
/// and the final value below `threshold`.
pub fn trend_verdict(values: &[f64], slack: &[f64], threshold: f64) -> bool {
    let m = values.len();
    if m == 0 {
        return false;
    }
    let start = m.saturating_sub(3);
    let decreasing =
        (start + 1..m).all(|i| values[i] <= values[i - 1] + slack.get(i).copied().unwrap_or(0.0));
    decreasing && values[m - 1] < threshold
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub delta: f64,
    pub lower: f64,
    pub upper: f64,
    pub estimate: McEstimate,
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub vertex: usize,
    pub entries: Vec<BoundEntry>,
    /// δ values at or above λ(T)/2, outside the range of the bounds.
    pub skipped: Vec<f64>,
    pub all_within: bool,
}

/// Lower and upper bounds for λ(A⁺(T, z, δ)) of an n-simplex of volume λ.
pub fn simplex_bounds(n: usize, lambda: f64, delta: f64) -> (f64, f64) {
    let nf = n as f64;
    let k = n as i32;
    let lower = delta / nf.powi(k - 1) * (lambda / delta).ln().powi(k - 1);
    let upper = delta / nf.powi(k - 1) * (nf.powi(k) * lambda / delta).ln().powi(k - 1)
        + nf * delta * (factorial(n) * lambda / delta).ln().powi(k - 2);
    (lower, upper)
}

/// Monte Carlo λ(A⁺(T, z, δ)) against the simplex bounds, within 3 standard errors.
pub fn simplex_bound_check(
    t: &Polytope,
    vertex: usize,
    schedule: &[f64],
    samples: usize,
    seed: u64,
) -> Result<BoundReport> {
    let n = t.dim();
    if t.num_vertices() != n + 1 || n > 3 {
        return Err(Error::bad(
            "asymptotics",
            "bound check needs a simplex of dimension at most 3",
        ));
    }
    let lambda = t.volume();
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for &d in schedule {
        if !(d > 0.0 && d < 0.5 * lambda) {
            skipped.push(d);
            continue;
        }
        let (lower, upper) = simplex_bounds(n, lambda, d);
        let estimate = a_plus_measure_mc(t, vertex, d, samples, seed)?;
        let slack = 3.0 * estimate.std_error;
        entries.push(BoundEntry {
            delta: d,
            lower,
            upper,
            estimate,
            within: estimate.value >= lower - slack && estimate.value <= upper + slack,
        });
    }
    let all_within = entries.iter().all(|e| e.within);
    Ok(BoundReport {
        vertex,
        entries,
        skipped,
        all_within,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendEntry {
    pub delta: f64,
    pub estimate: McEstimate,
    /// estimate / (δ·ln(1/δ)^{n−1})
    pub normalized: f64,
    pub normalized_se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendReport {
    pub entries: Vec<TrendEntry>,
    pub decreasing: bool,
}

fn trend_entry(delta: f64, estimate: McEstimate, n: usize) -> TrendEntry {
    let norm = delta * (1.0 / delta).ln().powi(n as i32 - 1);
    TrendEntry {
        delta,
        estimate,
        normalized: estimate.value / norm,
        normalized_se: estimate.std_error / norm,
    }
}

fn strictly_decreasing(entries: &[TrendEntry]) -> bool {
    entries
        .windows(2)
        .all(|w| w[1].normalized < w[0].normalized)
}

/// λ(B⁺(P, v, w, δ))/(δ ln(1/δ)) along the schedule for a polygon.
pub fn b_plus_trend(
    p: &Polytope,
    v: usize,
    w: usize,
    schedule: &[f64],
    samples: usize,
    seed: u64,
) -> Result<TrendReport> {
    check_decreasing(schedule)?;
    let entries = schedule
        .iter()
        .map(|&d| {
            Ok(trend_entry(
                d,
                b_plus_measure_mc(p, v, w, d, samples, seed)?,
                p.dim(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let decreasing = strictly_decreasing(&entries);
    Ok(TrendReport {
        entries,
        decreasing,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlagLimitReport {
    pub target: f64,
    pub entries: Vec<TrendEntry>,
    pub final_relative_gap: f64,
    /// |ratio − target| shrinks along the schedule.
    pub trending: bool,
}

/// λ(S ∩ A⁺(T, z, δ))/(δ ln^{n−1}(1/δ)) along the schedule, compared with 1/(n!·n^{n−1}).
pub fn flag_simplex_limit_check(
    t: &Polytope,
    s: &FlagSimplex,
    vertex: usize,
    schedule: &[f64],
    samples: usize,
    seed: u64,
) -> Result<FlagLimitReport> {
    check_decreasing(schedule)?;
    let n = t.dim();
    let target = 1.0 / flag_normalizer(n);
    let entries = schedule
        .iter()
        .map(|&d| {
            let e = a_plus_restricted_mc(t, vertex, d, samples, seed, |x| s.contains(x, 0.0))?;
            Ok(trend_entry(d, e, n))
        })
        .collect::<Result<Vec<_>>>()?;
    let last = entries.last().expect("nonempty schedule");
    let final_relative_gap = (last.normalized - target).abs() / target;
    let trending = entries
        .windows(2)
        .all(|w| (w[1].normalized - target).abs() < (w[0].normalized - target).abs());
    Ok(FlagLimitReport {
        target,
        entries,
        final_relative_gap,
        trending,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationEntry {
    pub delta: f64,
    pub wet: f64,
    /// λ(wet part outside the family)
    pub outside: f64,
    pub outside_se: f64,
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub entries: Vec<ConcentrationEntry>,
    pub decreasing: bool,
    pub final_value: f64,
}

/// Share of the uniform wet part of a polygon lying outside a family of
/// flag simplices, normalized by δ·ln(1/δ). The wet region is sampled
/// uniformly from its triangulated annulus.
pub fn concentration_check(
    p: &Polytope,
    family: &[FlagSimplex],
    schedule: &[f64],
    spec: &DirectionSpec,
    samples: usize,
    seed: u64,
) -> Result<ConcentrationReport> {
    if p.dim() != 2 {
        return Err(Error::bad(
            "asymptotics",
            "concentration check is planar only",
        ));
    }
    check_decreasing(schedule)?;
    let outer = ConvexPolygon::from_polytope(p);
    let entries = schedule
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let fb = floating_body(&Weight::Uniform, p, d, spec)?;
            let tris = match fb.polygon() {
                Some(inner) => annulus_triangles(&outer, inner),
                None => return Err(Error::bad("asymptotics", "floating body is empty")),
            };
            let sampler = crate::floating::TriangleSampler::new(tris);
            let wet = sampler.area();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let outside = (0..samples)
                .filter(|_| {
                    let q = sampler.sample(&mut rng);
                    let x = point(&q);
                    !family.iter().any(|s| s.contains(&x, 0.0))
                })
                .count();
            let q = outside as f64 / samples as f64;
            let norm = d * (1.0 / d).ln();
            Ok(ConcentrationEntry {
                delta: d,
                wet,
                outside: q * wet,
                outside_se: (q * (1.0 - q) / samples as f64).sqrt() * wet,
                normalized: q * wet / norm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = entries.iter().map(|e| e.normalized).collect();
    let decreasing = values.windows(2).all(|w| w[1] <= w[0]);
    let final_value = *values.last().expect("nonempty schedule");
    Ok(ConcentrationReport {
        entries,
        decreasing,
        final_value,
    })
}

/// Flag simplices of the barycentric subdivision pulled toward their
/// vertex by `factor` ∈ (0, 1]; the result is again an interior-disjoint
/// family of flag simplices.
pub fn shrunken_family(p: &Polytope, factor: f64) -> Result<Vec<FlagSimplex>> {
    if !(factor > 0.0 && factor <= 1.0) {
        return Err(Error::bad(
            "asymptotics",
            "shrink factor must lie in (0, 1]",
        ));
    }
    Ok(crate::flag_simplex::barycenter_subdivision(p)
        .into_iter()
        .map(|s| {
            let v = s.vertices[0].clone();
            let vertices = s.vertices.iter().map(|w| &v + (w - &v) * factor).collect();
            FlagSimplex {
                vertices,
                flag: s.flag,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::generators;

    #[test]
    fn predicted_limits() {
        let sq = generators::cube(2).unwrap();
        assert_eq!(
            predicted_limit(&sq, &Weight::Uniform, &Weight::Uniform).unwrap(),
            2.0
        );
        let psi = Weight::one_plus_coordinate(2, 0);
        assert!((predicted_limit(&sq, &Weight::Uniform, &psi).unwrap() - 3.0).abs() < 1e-15);
        let t = generators::simplex(3).unwrap();
        assert!(
            (predicted_limit(&t, &Weight::Spherical, &Weight::Spherical).unwrap() - 24.0 / 54.0)
                .abs()
                < 1e-15
        );
        // simultaneous scaling leaves the limit unchanged
        let a = predicted_limit(&sq, &Weight::Spherical, &psi).unwrap();
        let b = predicted_limit(&sq, &Weight::Spherical.scaled(3.0), &psi.scaled(3.0)).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn schedule_parsing() {
        let s = parse_schedule("1e-3:1e-7:9").unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s[0], 1e-3);
        assert_eq!(s[8], 1e-7);
        assert!((s[1] - 10f64.powf(-3.5)).abs() < 1e-15);
        assert!(parse_schedule("1e-3:1e-7").is_err());
    }

    #[test]
    fn fit_recovers_its_own_model() {
        let deltas = log_schedule(1e-2, 1e-8, 7).unwrap();
        let entries = deltas
            .iter()
            .map(|&d| {
                let wet = 2.0 * d * (1.0 / d).ln() + 0.5 * d;
                RatioEntry {
                    delta: d,
                    wet,
                    abs_error: 0.0,
                    ratio: ratio_of(wet, d, 2),
                }
            })
            .collect();
        let f = fit_limit(&RatioCurve { dim: 2, entries }, 2).unwrap();
        assert!(
            (f.c1 - 2.0).abs() < 1e-10 && (f.c2 - 0.5).abs() < 1e-10,
            "{f:?}"
        );
    }

    #[test]
    fn fit_rejects_short_or_degenerate_curves() {
        let e = RatioEntry {
            delta: 1e-3,
            wet: 1e-2,
            abs_error: 0.0,
            ratio: 1.0,
        };
        let short = RatioCurve {
            dim: 2,
            entries: vec![e; 3],
        };
        assert!(matches!(
            fit_limit(&short, 2),
            Err(Error::BadParameters { .. })
        ));
        let flat = RatioCurve {
            dim: 2,
            entries: vec![e; 5],
        };
        assert!(matches!(fit_limit(&flat, 2), Err(Error::IllConditioned(_))));
    }

    #[test]
    fn segment_ratio_is_two() {
        let seg = generators::cube(1).unwrap();
        let c = ratio_curve(
            &Weight::Uniform,
            &Weight::Uniform,
            &seg,
            &[1e-2, 1e-3, 1e-4],
            &DirectionSpec::new(2),
            1e-6,
        )
        .unwrap();
        for e in &c.entries {
            assert!((e.ratio - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn simplex_bounds_at_one_percent() {
        let (lower, upper) = simplex_bounds(2, 0.5, 0.01);
        assert!((lower - 0.005 * 50f64.ln()).abs() < 1e-15);
        assert!((upper - (0.005 * 200f64.ln() + 0.02)).abs() < 1e-15);
        assert!((lower - 0.01956).abs() < 1e-5);
    }

    #[test]
    fn trend_verdicts() {
        assert!(trend_verdict(&[0.5, 0.4, 0.3, 0.2], &[], 0.25));
        assert!(!trend_verdict(&[0.5, 0.4, 0.3, 0.35], &[], 0.5));
        assert!(!trend_verdict(&[0.5, 0.4, 0.3], &[], 0.1));
    }

    #[test]
    fn shrunken_family_stays_in_the_barycentric_one() {
        let sq = generators::cube(2).unwrap();
        let fam = shrunken_family(&sq, 0.5).unwrap();
        let bary = crate::flag_simplex::barycenter_subdivision(&sq);
        for (a, b) in fam.iter().zip(&bary) {
            assert_eq!(a.flag, b.flag);
            assert!((a.volume() - 0.25 * b.volume()).abs() < 1e-15);
            for v in &a.vertices {
                assert!(b.contains(v, 1e-12));
            }
        }
    }
}
