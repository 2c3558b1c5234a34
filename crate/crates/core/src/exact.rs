//! Exact rational numbers for the hull kernel and literal parsing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parse an exact rational from `p/q`, an integer, or a decimal literal with
/// optional exponent (`-0.125`, `3e-4`).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    if scale.unsigned_abs() > 4096 {
        return Err(bad());
    }
    let ten = BigInt::from(10u32);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * pow)
    } else {
        BigRational::new(num, pow)
    })
}

/// Exact value of a finite double.
pub fn from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite coordinate {x}")))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Convert an integer vector to doubles, shifting away excess magnitude so
/// that only ratios between entries are preserved.
pub(crate) fn scaled_f64(v: &[BigInt]) -> Vec<f64> {
    let bits = v.iter().map(|x| x.bits()).max().unwrap_or(0);
    let shift = bits.saturating_sub(900);
    v.iter()
        .map(|x| {
            let y = if shift > 0 { x >> shift } else { x.clone() };
            y.to_f64().unwrap_or(0.0)
        })
        .collect()
}

/// Divide out the gcd of the entries.
pub(crate) fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x);
        if g.is_one() {
            return v;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut v {
            *x = &*x / &g;
        }
    }
    v
}

/// Integer row (−p·l, l) for a rational point p, with l the lcm of denominators.
pub(crate) fn homogeneous_row(p: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for c in p {
        l = l.lcm(c.denom());
    }
    let mut row: Vec<BigInt> = p.iter().map(|c| -(c.numer() * (&l / c.denom()))).collect();
    row.push(l);
    row
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Determinant by Gaussian elimination over ℚ.
pub fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        let piv = m[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            let src = m[c].clone();
            for (x, y) in m[r].iter_mut().zip(&src).skip(c) {
                *x -= &f * y;
            }
        }
    }
    d
}

/// Exact volume of the simplex spanned by n+1 double-precision points of ℝⁿ.
pub fn simplex_volume(pts: &[&[f64]]) -> Result<BigRational> {
    let n = pts.len() - 1;
    let o: Vec<BigRational> = pts[0].iter().map(|&x| from_f64(x)).collect::<Result<_>>()?;
    let mut m = Vec::with_capacity(n);
    for p in &pts[1..] {
        m.push(
            p.iter()
                .zip(&o)
                .map(|(&x, y)| from_f64(x).map(|x| x - y))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    Ok(det(m).abs() / BigRational::from_integer(fact))
}

pub(crate) fn cmp_points(a: &[BigRational], b: &[BigRational]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn parses_literals() {
        assert_eq!(parse_rational("1/3").unwrap(), r(1, 3));
        assert_eq!(parse_rational("-0.125").unwrap(), r(-1, 8));
        assert_eq!(parse_rational("3e-4").unwrap(), r(3, 10_000));
        assert_eq!(parse_rational("2.5E+2").unwrap(), r(250, 1));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("-").is_err());
    }

    #[test]
    fn float_conversion_is_exact() {
        assert_eq!(from_f64(0.375).unwrap(), r(3, 8));
        assert!(from_f64(f64::NAN).is_err());
    }

    #[test]
    fn homogeneous_rows_clear_denominators() {
        let row = homogeneous_row(&[r(1, 2), r(1, 3)]);
        assert_eq!(
            row,
            vec![BigInt::from(-3), BigInt::from(-2), BigInt::from(6)]
        );
    }

    #[test]
    fn determinant_and_simplex_volume() {
        let m = vec![vec![r(2, 1), r(1, 1)], vec![r(1, 1), r(3, 1)]];
        assert_eq!(det(m), r(5, 1));
        let m = vec![vec![r(0, 1), r(1, 1)], vec![r(1, 1), r(0, 1)]];
        assert_eq!(det(m), r(-1, 1));
        let pts: [&[f64]; 4] = [
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ];
        assert_eq!(simplex_volume(&pts).unwrap(), r(1, 6));
    }
}
