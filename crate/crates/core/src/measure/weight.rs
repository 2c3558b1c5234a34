use serde::{Deserialize, Serialize};

use super::IDEAL_TOL;
use crate::error::{Error, Result};
use crate::polytope::{Point, Polytope};

/// c·x^powers
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coef: f64,
    pub powers: Vec<u32>,
}

/// constant + linear·x
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineFactor {
    pub constant: f64,
    pub linear: Vec<f64>,
}

/// Positive density on ℝⁿ (or on the open unit ball for `Hyperbolic`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    Uniform,
    /// (1+‖x‖²)^{−(n+1)/2}, the pull-back of spherical volume under the gnomonic projection.
    Spherical,
    /// (1−‖x‖²)^{−(n+1)/2}, hyperbolic volume in the Klein model.
    Hyperbolic,
    Polynomial {
        coeffs: Vec<Monomial>,
    },
    ProductOfAffine {
        factors: Vec<AffineFactor>,
    },
    Scaled {
        factor: f64,
        inner: Box<Weight>,
    },
}

impl Weight {
    /// Constant density c.
    pub fn constant(c: f64) -> Weight {
        Weight::Polynomial {
            coeffs: vec![Monomial {
                coef: c,
                powers: vec![],
            }],
        }
    }

    /// 1 + x_k (zero-based k) in dimension n.
    pub fn one_plus_coordinate(n: usize, k: usize) -> Weight {
        let mut p = vec![0; n];
        p[k] = 1;
        Weight::Polynomial {
            coeffs: vec![
                Monomial {
                    coef: 1.0,
                    powers: vec![],
                },
                Monomial {
                    coef: 1.0,
                    powers: p,
                },
            ],
        }
    }

    pub fn scaled(&self, c: f64) -> Weight {
        Weight::Scaled {
            factor: c,
            inner: Box::new(self.clone()),
        }
    }

    /// Names accepted on the command line: `uniform`, `spherical`,
    /// `hyperbolic`, `1+xK` (K one-based), `const:C`, `C*uniform`.
    pub fn from_name(name: &str, n: usize) -> Result<Weight> {
        let bad = || Error::bad("weighted-measure", format!("unknown weight {name:?}"));
        match name {
            "uniform" => return Ok(Weight::Uniform),
            "spherical" => return Ok(Weight::Spherical),
            "hyperbolic" => return Ok(Weight::Hyperbolic),
            _ => {}
        }
        if let Some(k) = name.strip_prefix("1+x") {
            let k: usize = k.parse().map_err(|_| bad())?;
            if k == 0 || k > n {
                return Err(bad());
            }
            return Ok(Weight::one_plus_coordinate(n, k - 1));
        }
        if let Some(c) = name.strip_prefix("const:") {
            let c: f64 = c.parse().map_err(|_| bad())?;
            return (c > 0.0).then(|| Weight::constant(c)).ok_or_else(bad);
        }
        if let Some(c) = name.strip_suffix("*uniform") {
            let c: f64 = c.parse().map_err(|_| bad())?;
            return (c > 0.0).then(|| Weight::constant(c)).ok_or_else(bad);
        }
        Err(bad())
    }

    /// Density at x. Outside the hyperbolic domain this is not finite; use
    /// [`Weight::eval_checked`] when the point is not known to be admissible.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Weight::Uniform => 1.0,
            Weight::Spherical => radial(1.0 + norm2(x), x.len()),
            Weight::Hyperbolic => radial(1.0 - norm2(x), x.len()),
            Weight::Polynomial { coeffs } => coeffs
                .iter()
                .map(|m| {
                    m.coef
                        * m.powers
                            .iter()
                            .zip(x)
                            .map(|(&p, &xi)| xi.powi(p as i32))
                            .product::<f64>()
                })
                .sum(),
            Weight::ProductOfAffine { factors } => factors
                .iter()
                .map(|f| f.constant + f.linear.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
                .product(),
            Weight::Scaled { factor, inner } => factor * inner.eval(x),
        }
    }

    pub fn eval_checked(&self, x: &Point) -> Result<f64> {
        if self.is_hyperbolic() && x.norm_squared() >= 1.0 {
            return Err(Error::OutOfDomain(x.iter().copied().collect()));
        }
        let v = self.eval(x.as_slice());
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::OutOfDomain(x.iter().copied().collect()));
        }
        Ok(v)
    }

    pub fn is_hyperbolic(&self) -> bool {
        match self {
            Weight::Hyperbolic => true,
            Weight::Scaled { inner, .. } => inner.is_hyperbolic(),
            _ => false,
        }
    }

    /// Some(c) when the density is the constant c.
    /// c when the density is c times the planar hyperbolic one.
    pub fn hyperbolic_factor(&self) -> Option<f64> {
        match self {
            Weight::Hyperbolic => Some(1.0),
            Weight::Scaled { factor, inner } => inner.hyperbolic_factor().map(|c| c * factor),
            _ => None,
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self {
            Weight::Uniform => Some(1.0),
            Weight::Polynomial { coeffs }
                if coeffs.iter().all(|m| m.powers.iter().all(|&p| p == 0)) =>
            {
                Some(coeffs.iter().map(|m| m.coef).sum())
            }
            Weight::ProductOfAffine { factors }
                if factors.iter().all(|f| f.linear.iter().all(|&a| a == 0.0)) =>
            {
                Some(factors.iter().map(|f| f.constant).product())
            }
            Weight::Scaled { factor, inner } => inner.constant_value().map(|c| c * factor),
            _ => None,
        }
    }

    /// Total degree when the density is a polynomial.
    pub fn polynomial_degree(&self) -> Option<u32> {
        match self {
            Weight::Uniform => Some(0),
            Weight::Polynomial { coeffs } => Some(
                coeffs
                    .iter()
                    .map(|m| m.powers.iter().sum())
                    .max()
                    .unwrap_or(0),
            ),
            Weight::ProductOfAffine { factors } => Some(factors.len() as u32),
            Weight::Scaled { inner, .. } => inner.polynomial_degree(),
            _ => None,
        }
    }

    /// Integrand in coordinates d = x − z around a point z on or near the
    /// unit sphere.
    ///
    /// For the hyperbolic density 1 − ‖z + d‖² is evaluated as
    /// (1 − ‖z‖²) − 2 z·d − ‖d‖², with the first term zero for ideal z, so
    /// that precision is kept right up to the point.
    pub(crate) fn eval_near(&self, z: &[f64], d: &[f64]) -> f64 {
        match self {
            Weight::Hyperbolic => {
                let zz = norm2(z);
                let c0 = if (zz.sqrt() - 1.0).abs() <= IDEAL_TOL {
                    0.0
                } else {
                    1.0 - zz
                };
                let zd: f64 = z.iter().zip(d).map(|(a, b)| a * b).sum();
                radial(c0 - 2.0 * zd - norm2(d), d.len())
            }
            Weight::Scaled { factor, inner } => factor * inner.eval_near(z, d),
            _ => {
                let x: Vec<f64> = z.iter().zip(d).map(|(a, b)| a + b).collect();
                self.eval(&x)
            }
        }
    }

    /// Lower and upper bounds of the density over P from its vertices and
    /// a coarse interior grid. These are sample bounds, not certified optima.
    pub fn bounds(&self, p: &Polytope) -> (f64, f64) {
        if let Some(c) = self.constant_value() {
            return (c, c);
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut see = |x: &Point| {
            let v = self.eval(x.as_slice());
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        };
        for v in p.vertices() {
            see(v);
        }
        let c = p.vertex_centroid();
        see(&c);
        const GRID: usize = 6;
        for s in p.fan_simplices(&c) {
            let n = s.len() - 1;
            for_each_grid_point(n, GRID, |bary| {
                let mut x = Point::zeros(p.dim());
                for (b, v) in bary.iter().zip(&s) {
                    x += v * (*b as f64 / GRID as f64);
                }
                see(&x);
            });
        }
        (lo, hi)
    }
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum()
}

#[inline]
fn radial(s: f64, n: usize) -> f64 {
    match n {
        1 => 1.0 / s,
        2 => 1.0 / (s * s.sqrt()),
        3 => 1.0 / (s * s),
        _ => s.powf(-0.5 * (n as f64 + 1.0)),
    }
}

/// Visit all compositions of `level` into n+1 nonnegative parts.
fn for_each_grid_point(n: usize, level: usize, mut f: impl FnMut(&[usize])) {
    fn rec(parts: &mut Vec<usize>, left: usize, n: usize, f: &mut dyn FnMut(&[usize])) {
        if parts.len() == n {
            parts.push(left);
            f(parts);
            parts.pop();
            return;
        }
        for k in 0..=left {
            parts.push(k);
            rec(parts, left - k, n, f);
            parts.pop();
        }
    }
    rec(&mut Vec::with_capacity(n + 1), level, n, &mut f);
}
