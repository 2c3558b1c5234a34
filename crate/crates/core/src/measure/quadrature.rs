//! Grundmann–Möller cubature of degree 7 with adaptive refinement, and
//! geometric grading toward singular (ideal) vertices.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A simplex as a list of n+1 vertices in ℝⁿ.
pub type SimplexPts = Vec<Vec<f64>>;

const GM_S: usize = 3;
const MAX_RULE_DIM: usize = 8;
const MAX_DEPTH_2D: u32 = 20;
const MAX_DEPTH_ND: u32 = 36;
const GRADING_DEPTH: u32 = 60;
/// Relative floor on requested tolerances: below this, rounding noise in
/// the level-to-level difference would prevent termination.
const REL_FLOOR: f64 = 1e-14;

/// Barycentric nodes and weights, weights summing to one.
pub struct Rule {
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl Rule {
    /// Grundmann–Möller rule with parameter s (exact for degree 2s+1).
    pub fn grundmann_moller(n: usize, s: usize) -> Rule {
        let d = (2 * s + 1) as i32;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let fact = |k: usize| (1..=k).map(|j| j as f64).product::<f64>();
        let nfact = fact(n);
        for i in 0..=s {
            let den = (d as usize + n - 2 * i) as f64;
            let w = if i % 2 == 0 { 1.0 } else { -1.0 } * 2f64.powi(-2 * s as i32) * den.powi(d)
                / (fact(i) * fact(d as usize + n - i))
                * nfact;
            compositions(n + 1, s - i, &mut |beta| {
                nodes.push(beta.iter().map(|&b| (2 * b + 1) as f64 / den).collect());
                weights.push(w);
            });
        }
        Rule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫_S f using the rule mapped affinely onto S.
    pub fn apply(&self, s: &[Vec<f64>], f: &dyn Fn(&[f64]) -> f64) -> f64 {
        self.apply_with_noise(s, f).0
    }

    /// Value and a bound on its rounding noise. The volume of a thin simplex
    /// is a difference of products of edge lengths, so the noise scales with
    /// the Hadamard bound Π|eᵢ|/n! rather than with the volume itself.
    fn apply_with_noise(&self, s: &[Vec<f64>], f: &dyn Fn(&[f64]) -> f64) -> (f64, f64) {
        let n = s.len() - 1;
        let vol = simplex_volume(s);
        if vol == 0.0 {
            return (0.0, 0.0);
        }
        let mut x = vec![0.0; n];
        let mut acc = 0.0;
        let mut abs = 0.0;
        for (lam, w) in self.nodes.iter().zip(&self.weights) {
            for (k, xk) in x.iter_mut().enumerate() {
                *xk = lam.iter().zip(s).map(|(l, v)| l * v[k]).sum();
            }
            let y = w * f(&x);
            acc += y;
            abs += y.abs();
        }
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let hadamard: f64 = s[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&s[0])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .product::<f64>()
            / fact;
        (vol * acc, 16.0 * f64::EPSILON * (hadamard + vol) * abs)
    }
}

fn compositions(parts: usize, total: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(buf: &mut Vec<usize>, parts: usize, left: usize, f: &mut dyn FnMut(&[usize])) {
        if buf.len() + 1 == parts {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for k in (0..=left).rev() {
            buf.push(k);
            rec(buf, parts, left - k, f);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(parts), parts, total, f);
}

pub fn rule(n: usize) -> &'static Rule {
    static RULES: [OnceLock<Rule>; MAX_RULE_DIM + 1] =
        [const { OnceLock::new() }; MAX_RULE_DIM + 1];
    assert!(
        (1..=MAX_RULE_DIM).contains(&n),
        "cubature supports dimensions 1..={MAX_RULE_DIM}"
    );
    RULES[n].get_or_init(|| Rule::grundmann_moller(n, GM_S))
}

pub fn simplex_volume(s: &[Vec<f64>]) -> f64 {
    let n = s.len() - 1;
    let o = &s[0];
    let det = match n {
        1 => s[1][0] - o[0],
        2 => (s[1][0] - o[0]) * (s[2][1] - o[1]) - (s[1][1] - o[1]) * (s[2][0] - o[0]),
        _ => nalgebra::DMatrix::from_fn(n, n, |r, c| s[c + 1][r] - o[r]).determinant(),
    };
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    det.abs() / fact
}

fn midpoint(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

/// Longest-edge bisection.
fn children(s: &[Vec<f64>]) -> Vec<SimplexPts> {
    let mut best = (0, 1, -1.0);
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let l: f64 = s[i].iter().zip(&s[j]).map(|(x, y)| (x - y) * (x - y)).sum();
            if l > best.2 {
                best = (i, j, l);
            }
        }
    }
    let m = midpoint(&s[best.0], &s[best.1]);
    let mut c1 = s.to_vec();
    let mut c2 = s.to_vec();
    c1[best.0] = m.clone();
    c2[best.1] = m;
    vec![c1, c2]
}

/// Gauss–Legendre orders of the collapsed triangle rules.
const COLLAPSED_ORDERS: [usize; 2] = [10, 20];

/// Tensor Gauss–Legendre rule pulled back to the triangle by the collapsed
/// map (s, t) ↦ (s, (1 − s)t), as barycentric nodes and weights summing to one.
fn collapsed_rule(order: usize) -> &'static Rule {
    static RULES: [OnceLock<Rule>; 2] = [OnceLock::new(), OnceLock::new()];
    let slot = COLLAPSED_ORDERS
        .iter()
        .position(|&o| o == order)
        .expect("tabulated order");
    RULES[slot].get_or_init(|| {
        let gl = gauss_quad::legendre::GaussLegendre::new(order).expect("order ≥ 2");
        let pts: Vec<(f64, f64)> = gl.iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
        let mut nodes = Vec::with_capacity(order * order);
        let mut weights = Vec::with_capacity(order * order);
        for &(a, wa) in &pts {
            for &(b, wb) in &pts {
                let l1 = a;
                let l2 = (1.0 - a) * b;
                nodes.push(vec![1.0 - l1 - l2, l1, l2]);
                weights.push(2.0 * wa * wb * (1.0 - a));
            }
        }
        Rule { nodes, weights }
    })
}

/// High-order estimate for smooth integrands on a triangle, converged when
/// two collapsed rules of different order agree to within the tolerance.
fn collapsed_pair(s: &[Vec<f64>], f: &dyn Fn(&[f64]) -> f64, tol: f64) -> Estimate {
    let (lo, _) = collapsed_rule(COLLAPSED_ORDERS[0]).apply_with_noise(s, f);
    let (hi, noise) = collapsed_rule(COLLAPSED_ORDERS[1]).apply_with_noise(s, f);
    let err = (hi - lo).abs();
    let tol_eff = tol.max(REL_FLOOR * hi.abs()).max(2.0 * noise);
    Estimate {
        value: hi,
        error: err,
        converged: err <= tol_eff,
    }
}

/// Running total of value and error estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

impl Estimate {
    fn add(&mut self, o: Estimate) {
        self.value += o.value;
        self.error += o.error;
        self.converged &= o.converged;
    }
}

/// Adaptive h-refinement. Triangles are bisected until the two collapsed
/// rules agree; other simplices are accepted once the rule value and the
/// sum over the children differ by at most their share of the tolerance.
pub fn adaptive(s: &[Vec<f64>], f: &dyn Fn(&[f64]) -> f64, tol: f64) -> Estimate {
    if s.len() == 3 {
        return collapsed_rec(s, f, tol, 0);
    }
    let r = rule(s.len() - 1);
    let (coarse, _) = r.apply_with_noise(s, f);
    adaptive_rec(s, f, coarse, tol, 0, MAX_DEPTH_ND, r)
}

fn collapsed_rec(s: &[Vec<f64>], f: &dyn Fn(&[f64]) -> f64, tol: f64, depth: u32) -> Estimate {
    let e = collapsed_pair(s, f, tol);
    if e.converged || depth >= MAX_DEPTH_2D {
        return e;
    }
    let mut out = Estimate {
        converged: true,
        ..Default::default()
    };
    for k in children(s) {
        out.add(collapsed_rec(&k, f, 0.5 * tol, depth + 1));
    }
    out
}

fn adaptive_rec(
    s: &[Vec<f64>],
    f: &dyn Fn(&[f64]) -> f64,
    coarse: f64,
    tol: f64,
    depth: u32,
    max_depth: u32,
    r: &Rule,
) -> Estimate {
    let kids = children(s);
    let parts: Vec<(f64, f64)> = kids.iter().map(|k| r.apply_with_noise(k, f)).collect();
    let vals: Vec<f64> = parts.iter().map(|p| p.0).collect();
    let fine: f64 = vals.iter().sum();
    let noise: f64 = parts.iter().map(|p| p.1).sum();
    let err = (fine - coarse).abs();
    let tol_eff = tol.max(REL_FLOOR * fine.abs()).max(2.0 * noise);
    if err <= tol_eff {
        return Estimate {
            value: fine,
            error: err,
            converged: true,
        };
    }
    if depth >= max_depth {
        return Estimate {
            value: fine,
            error: err,
            converged: false,
        };
    }
    let share = tol / kids.len() as f64;
    let mut out = Estimate {
        converged: true,
        ..Default::default()
    };
    for (k, v) in kids.iter().zip(vals) {
        out.add(adaptive_rec(k, f, v, share, depth + 1, max_depth, r));
    }
    out
}

/// Integral over a simplex whose vertex 0 carries an integrable point
/// singularity; `f_local` takes coordinates relative to that vertex.
///
/// The simplex is sliced into shells between the copies scaled by 2^{-j}
/// and 2^{-j-1} about the vertex; each shell is a stack of n simplices. Shell
/// contributions decay geometrically, and the remainder after the last
/// shell is extrapolated from the observed ratio.
pub fn graded(s: &[Vec<f64>], f_local: &dyn Fn(&[f64]) -> f64, tol: f64) -> Estimate {
    let n = s.len() - 1;
    let z = &s[0];
    let d: Vec<Vec<f64>> = s[1..]
        .iter()
        .map(|v| v.iter().zip(z).map(|(a, b)| a - b).collect())
        .collect();
    let mut total = Estimate {
        converged: true,
        ..Default::default()
    };
    let mut prev: Option<f64> = None;
    let mut prev_ratio: Option<f64> = None;
    let mut scale = 1.0;
    for j in 0..GRADING_DEPTH {
        let outer: Vec<Vec<f64>> = d
            .iter()
            .map(|v| v.iter().map(|x| x * scale).collect())
            .collect();
        let inner: Vec<Vec<f64>> = outer
            .iter()
            .map(|v| v.iter().map(|x| 0.5 * x).collect())
            .collect();
        let level_tol = tol / 4.0 * 0.5f64.powi(j as i32 / 2 + 1);
        let mut shell = Estimate {
            converged: true,
            ..Default::default()
        };
        for k in 1..=n {
            let mut piece: SimplexPts = inner[..k].to_vec();
            piece.extend_from_slice(&outer[k - 1..]);
            shell.add(adaptive(&piece, f_local, level_tol / n as f64));
        }
        total.add(shell);
        scale *= 0.5;
        let m = shell.value;
        if let Some(p) = prev {
            if p > 0.0 && m >= 0.0 {
                let r = m / p;
                if r < 1.0 && j >= 4 {
                    let tail = m * r / (1.0 - r);
                    let drift = prev_ratio.map_or(1.0, |q: f64| ((r - q) / r).abs());
                    let tail_err = tail * drift / (1.0 - r);
                    if tail <= tol / 4.0 || tail_err <= tol / 4.0 {
                        total.value += tail;
                        total.error += tail_err;
                        return total;
                    }
                }
                prev_ratio = Some(r);
            }
        }
        prev = Some(m);
    }
    total.converged = false;
    total
}

/// Turn an estimate into a result, failing when the tolerance was missed.
pub fn finish(e: Estimate, tol: f64) -> Result<Estimate> {
    let allowed = tol.max(REL_FLOOR * 100.0 * e.value.abs());
    if !e.converged && e.error > allowed {
        return Err(Error::ToleranceNotReached {
            tol,
            estimate: e.error,
        });
    }
    Ok(e)
}
