//! Class counts as polynomials in `q`, recovered by exact interpolation over
//! prime-power nodes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::classes::{parabolic_class_count, OrbitCache};
use crate::error::{Error, Result};
use crate::field::{prime_power, Field};

/// Give up after this many nodes.
pub const MAX_NODES: usize = 40;

/// An integer polynomial in `q`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountPoly {
    pub coeffs: Vec<i128>,
    /// Prime powers sampled, held-out checks included.
    pub nodes: Vec<u64>,
}

impl CountPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> i128 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, q: i128) -> i128 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * q + c)
    }
}

impl fmt::Display for CountPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            let mono = match d {
                0 => String::new(),
                1 => String::from("q"),
                _ => format!("q^{d}"),
            };
            match (a, d) {
                (_, 0) => write!(f, "{a}")?,
                (1, _) => f.write_str(&mono)?,
                _ => write!(f, "{a}{mono}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Prime powers in increasing order.
pub fn prime_powers() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&q| prime_power(q).is_ok())
}

/// Monomial coefficients of the interpolating polynomial through `pts`.
pub fn interpolate(pts: &[(u64, u128)]) -> Vec<BigRational> {
    let xs: Vec<BigRational> = pts.iter().map(|&(x, _)| BigRational::from_integer(BigInt::from(x))).collect();
    let mut dd: Vec<BigRational> = pts.iter().map(|&(_, y)| BigRational::from_integer(BigInt::from(y))).collect();
    let n = pts.len();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // Horner on the Newton form.
    let mut coeffs: Vec<BigRational> = Vec::new();
    for i in (0..n).rev() {
        let mut next = Vec::with_capacity(coeffs.len() + 1);
        next.push(BigRational::zero());
        next.extend(coeffs.iter().cloned());
        for (t, c) in coeffs.iter().enumerate() {
            next[t] -= c * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

fn eval_rational(coeffs: &[BigRational], x: u64) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(x));
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
}

/// Interpolates `count` over prime powers, starting from `start_degree + 1`
/// nodes and growing until two consecutive fits agree and the next two
/// nodes are reproduced.
pub fn fit_counts<F>(start_degree: usize, mut count: F) -> Result<CountPoly>
where
    F: FnMut(u64) -> Result<u128>,
{
    let mut nodes = prime_powers();
    let mut pts: Vec<(u64, u128)> = Vec::new();
    let mut sample = |pts: &mut Vec<(u64, u128)>| -> Result<()> {
        let q = nodes.next().expect("infinitely many prime powers");
        pts.push((q, count(q)?));
        Ok(())
    };
    for _ in 0..=start_degree {
        sample(&mut pts)?;
    }
    let mut prev = interpolate(&pts);
    while pts.len() < MAX_NODES {
        sample(&mut pts)?;
        let cur = interpolate(&pts);
        if cur != prev {
            prev = cur;
            continue;
        }
        let fitted = pts.len();
        sample(&mut pts)?;
        sample(&mut pts)?;
        let held_ok = pts[fitted..]
            .iter()
            .all(|&(q, y)| eval_rational(&cur, q) == BigRational::from_integer(BigInt::from(y)));
        if !held_ok {
            prev = interpolate(&pts);
            continue;
        }
        let mut coeffs = Vec::with_capacity(cur.len());
        for (d, c) in cur.iter().enumerate() {
            if !c.denom().is_one() {
                return Err(Error::Interpolation(format!("coefficient of q^{d} is {c}, not an integer")));
            }
            let v = c
                .numer()
                .to_i128()
                .ok_or_else(|| Error::Interpolation(format!("coefficient of q^{d} overflows")))?;
            coeffs.push(v);
        }
        return Ok(CountPoly { coeffs, nodes: pts.iter().map(|&(q, _)| q).collect() });
    }
    Err(Error::NoConvergence)
}

/// The number of conjugacy classes of `P^(m,n)(F_q)` as a polynomial in `q`.
pub fn count_poly(m: usize, n: usize, cache: &mut OrbitCache) -> Result<CountPoly> {
    if m >= 6 && n >= 6 {
        return Err(Error::Unsupported(format!("P^({m},{n}) involves matrix problems of infinite type")));
    }
    fit_counts(m + n + 2, |q| {
        let k = Field::of_order(q)?;
        parabolic_class_count(m, n, &k, cache)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn nodes_are_prime_powers() {
        let first: Vec<u64> = prime_powers().take(12).collect();
        assert_eq!(first, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
    }

    #[test]
    fn recovers_known_polynomials() {
        let p = fit_counts(4, |q| Ok((q * q * q - 2 * q + 7) as u128)).unwrap();
        assert_eq!(p.coeffs, vec![7, -2, 0, 1]);
        assert_eq!(p.to_string(), "q^3 - 2q + 7");
        let half = fit_counts(2, |q| Ok((q * (q + 1) / 2) as u128));
        assert!(matches!(half, Err(Error::Interpolation(_))));
    }

    #[test]
    fn parabolic_one_one() {
        let mut cache = OrbitCache::default();
        let p = count_poly(1, 1, &mut cache).unwrap();
        assert_eq!(p.coeffs, vec![0, -1, 1]);
        assert_eq!(p.to_string(), "q^2 - q");
        let p = count_poly(1, 2, &mut cache).unwrap();
        assert_eq!(p.eval(2), 5);
        assert!(matches!(count_poly(6, 6, &mut cache), Err(Error::Unsupported(_))));
    }
}
