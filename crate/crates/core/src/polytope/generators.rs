//! Standard polytopes.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{convex_hull, convex_hull_exact, point, polar_body, Point, Polytope};
use crate::error::{Error, Result};

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::bad("polytope", msg))
    }
}

/// Standard simplex conv(0, e₁, …, eₙ).
pub fn simplex(n: usize) -> Result<Polytope> {
    need(n >= 1, "simplex needs n >= 1")?;
    let mut pts = vec![vec![int(0); n]];
    for i in 0..n {
        let mut p = vec![int(0); n];
        p[i] = int(1);
        pts.push(p);
    }
    convex_hull_exact(pts)
}

/// Unit cube [0,1]ⁿ.
pub fn cube(n: usize) -> Result<Polytope> {
    need((1..=12).contains(&n), "cube needs 1 <= n <= 12")?;
    convex_hull_exact(
        (0..1u32 << n)
            .map(|m| (0..n).map(|i| int((m >> i & 1) as i64)).collect())
            .collect(),
    )
}

/// Cube [−1,1]ⁿ, centered at the origin.
pub fn centered_cube(n: usize) -> Result<Polytope> {
    need((1..=12).contains(&n), "cube needs 1 <= n <= 12")?;
    convex_hull_exact(
        (0..1u32 << n)
            .map(|m| (0..n).map(|i| int(2 * (m >> i & 1) as i64 - 1)).collect())
            .collect(),
    )
}

/// conv(±e_i).
pub fn cross_polytope(n: usize) -> Result<Polytope> {
    need(n >= 1, "cross polytope needs n >= 1")?;
    let mut pts = Vec::new();
    for i in 0..n {
        for s in [-1, 1] {
            let mut p = vec![int(0); n];
            p[i] = int(s);
            pts.push(p);
        }
    }
    convex_hull_exact(pts)
}

/// Hull of the moment-curve points (t, t², …, tⁿ), t = 1, …, k.
pub fn cyclic(n: usize, k: usize) -> Result<Polytope> {
    need(n >= 2 && k > n, "cyclic polytope needs n >= 2 and k > n")?;
    convex_hull_exact(
        (1..=k as i64)
            .map(|t| (1..=n as u32).map(|e| int(t.pow(e))).collect())
            .collect(),
    )
}

/// Hanner polytope from an expression over `seg` with `product(A,B)`
/// (Cartesian product) and `sum(A,B)` (free sum).
pub fn hanner(tree: &str) -> Result<Polytope> {
    let pts = HannerParser {
        s: tree.as_bytes(),
        i: 0,
    }
    .parse_all()?;
    convex_hull_exact(
        pts.into_iter()
            .map(|p| p.into_iter().map(int).collect())
            .collect(),
    )
}

struct HannerParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl HannerParser<'_> {
    fn parse_all(mut self) -> Result<Vec<Vec<i64>>> {
        let v = self.expr()?;
        self.ws();
        need(self.i == self.s.len(), "trailing characters in hanner tree")?;
        Ok(v)
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.ws();
        need(self.s.get(self.i) == Some(&c), "malformed hanner tree")?;
        self.i += 1;
        Ok(())
    }

    fn expr(&mut self) -> Result<Vec<Vec<i64>>> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_alphabetic() {
            self.i += 1;
        }
        let word = std::str::from_utf8(&self.s[start..self.i]).unwrap_or("");
        match word {
            "seg" => Ok(vec![vec![-1], vec![1]]),
            "product" | "sum" => {
                self.eat(b'(')?;
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                self.eat(b')')?;
                let (da, db) = (a[0].len(), b[0].len());
                let mut out = Vec::new();
                if word == "product" {
                    for x in &a {
                        for y in &b {
                            out.push(x.iter().chain(y).copied().collect());
                        }
                    }
                } else {
                    for x in &a {
                        out.push(
                            x.iter()
                                .copied()
                                .chain(std::iter::repeat(0).take(db))
                                .collect(),
                        );
                    }
                    for y in &b {
                        out.push(
                            std::iter::repeat(0)
                                .take(da)
                                .chain(y.iter().copied())
                                .collect(),
                        );
                    }
                }
                Ok(out)
            }
            _ => Err(Error::bad(
                "polytope",
                format!("unknown hanner node {word:?}"),
            )),
        }
    }
}

/// Regular m-gon with vertices radius·(cos 2πj/m, sin 2πj/m).
pub fn regular_polygon(m: usize, radius: f64) -> Result<Polytope> {
    need(
        m >= 3 && radius > 0.0 && radius.is_finite(),
        "polygon needs m >= 3 and radius > 0",
    )?;
    let pts: Vec<Point> = (0..m)
        .map(|j| {
            let a = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            point(&[radius * a.cos(), radius * a.sin()])
        })
        .collect();
    convex_hull(&pts)
}

/// Hull of m random points on the unit sphere, translated so that the
/// vertex centroid is the origin.
pub fn random_polytope(n: usize, m: usize, seed: u64) -> Result<Polytope> {
    need(n >= 1 && m > n, "random polytope needs m > n >= 1")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point> = (0..m)
        .map(|_| {
            let g = Point::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
            let len = g.norm();
            g / len
        })
        .collect();
    let p = convex_hull(&pts)?;
    let c = p.vertex_centroid();
    Ok(p.translated(&-c))
}

/// Icosahedron with vertices the cyclic permutations of (0, ±1, ±φ).
pub fn icosahedron() -> Result<Polytope> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-phi, phi] {
            pts.push(point(&[0.0, a, b]));
            pts.push(point(&[a, b, 0.0]));
            pts.push(point(&[b, 0.0, a]));
        }
    }
    convex_hull(&pts)
}

/// Dodecahedron as the polar of the icosahedron; built from the dual
/// incidence so pentagonal facets stay exactly combinatorial.
pub fn dodecahedron() -> Result<Polytope> {
    polar_body(&icosahedron()?)
}

/// Polytope built by name, as used by the CLI.
pub fn by_name(
    name: &str,
    dim: usize,
    k: Option<usize>,
    sides: Option<usize>,
    seed: u64,
) -> Result<Polytope> {
    match name {
        "simplex" => simplex(dim),
        "cube" => cube(dim),
        "centered-cube" => centered_cube(dim),
        "cross" | "cross-polytope" => cross_polytope(dim),
        "cyclic" => cyclic(
            dim,
            k.ok_or_else(|| Error::bad("polytope", "cyclic needs --k"))?,
        ),
        "polygon" => regular_polygon(
            sides.ok_or_else(|| Error::bad("polytope", "polygon needs --sides"))?,
            1.0,
        ),
        "random" => random_polytope(dim, k.unwrap_or(2 * dim + 4), seed),
        "icosahedron" => icosahedron(),
        "dodecahedron" => dodecahedron(),
        t if t.starts_with("seg") || t.starts_with("product") || t.starts_with("sum") => hanner(t),
        _ => Err(Error::bad(
            "polytope",
            format!("unknown generator {name:?}"),
        )),
    }
}
