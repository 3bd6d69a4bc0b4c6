//! Univariate polynomials over a [`Field`], with factorization.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Coefficients low-to-high, never with a trailing zero. The zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

/// Seed for the splitting stage of [`factor`].
pub const FACTOR_SEED: u64 = 0x5eed_f00d;
const SPLIT_ATTEMPTS: usize = 512;

impl Poly {
    pub fn new(mut coeffs: Vec<Fe>) -> Poly {
        while coeffs.last() == Some(&Fe::ZERO) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![Fe::ONE] }
    }

    /// The indeterminate `t`.
    pub fn t() -> Poly {
        Poly { coeffs: vec![Fe::ZERO, Fe::ONE] }
    }

    pub fn constant(c: Fe) -> Poly {
        Poly::new(vec![c])
    }

    pub fn monomial(c: Fe, n: usize) -> Poly {
        let mut coeffs = vec![Fe::ZERO; n + 1];
        coeffs[n] = c;
        Poly::new(coeffs)
    }

    /// `t - a`.
    pub fn linear(k: &Field, a: Fe) -> Poly {
        Poly::new(vec![k.neg(a), Fe::ONE])
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fe::ONE]
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    pub fn add(&self, k: &Field, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| k.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, k: &Field, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| k.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn scale(&self, k: &Field, c: Fe) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, k: &Field, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn div_rem(&self, k: &Field, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv_lead = k.inv(d.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = k.mul(rem[i], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = k.sub(rem[i - dd + j], k.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, k: &Field, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(k, d)?.1)
    }

    /// Exact quotient; panics in debug builds if the division is not exact.
    pub fn div_exact(&self, k: &Field, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(k, d).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn monic(&self, k: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(k, k.inv(self.lead()).expect("nonzero lead"))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, k: &Field, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(k, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(k)
    }

    pub fn derivative(&self, k: &Field) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| k.mul(k.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, k: &Field, x: Fe) -> Fe {
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    pub fn mul_mod(&self, k: &Field, o: &Poly, m: &Poly) -> Poly {
        self.mul(k, o).rem(k, m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, k: &Field, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(k, m).expect("nonzero modulus");
        let mut acc = Poly::one().rem(k, m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(k, &base, m);
            }
            base = base.mul_mod(k, &base, m);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, k: &Field, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(k, self))
    }

    /// Order used for canonical listings: degree first, then coefficient
    /// indices compared from the constant term upwards.
    pub fn canonical_cmp(&self, o: &Poly) -> Ordering {
        self.coeffs.len().cmp(&o.coeffs.len()).then_with(|| self.coeffs.cmp(&o.coeffs))
    }

    /// Comma separated coefficients, low-to-high (`1,1,1` is `t^2+t+1`).
    pub fn format(&self, k: &Field) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|&c| k.format(c)).collect();
        parts.join(",")
    }

    pub fn parse(k: &Field, s: &str) -> Result<Poly> {
        let coeffs = s.split(',').map(|c| k.parse(c)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs))
    }
}

/// `x^(Q^n) mod m` by repeated Frobenius.
fn frobenius_power(k: &Field, m: &Poly, n: usize) -> Poly {
    let q = k.order() as u64;
    let mut h = Poly::t().rem(k, m).expect("nonzero modulus");
    for _ in 0..n {
        h = h.pow_mod(k, q, m);
    }
    h
}

/// Rabin's test.
pub fn is_irreducible(k: &Field, f: &Poly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let x = Poly::t();
    if !frobenius_power(k, f, n).sub(k, &x).is_zero() {
        return false;
    }
    let mut m = n;
    let mut r = 2;
    while m > 1 {
        if m % r == 0 {
            while m % r == 0 {
                m /= r;
            }
            let h = frobenius_power(k, f, n / r).sub(k, &x);
            if !h.gcd(k, f).is_one() {
                return false;
            }
        }
        r += 1;
    }
    true
}

/// Monic polynomials of degree `d` in canonical order.
fn monics(k: &Field, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = k.order() as u64;
    let count = q.checked_pow(d as u32).expect("enumeration too large");
    (0..count).map(move |mut idx| {
        // most significant digit is the constant term
        let mut c = vec![Fe::ZERO; d + 1];
        for i in (0..d).rev() {
            c[i] = Fe((idx % q) as u32);
            idx /= q;
        }
        c[d] = Fe::ONE;
        Poly::new(c)
    })
}

/// All monic irreducibles of degree `d` in canonical order, optionally
/// without `t`.
pub fn irreducibles(k: &Field, d: usize, exclude_t: bool) -> Vec<Poly> {
    if d == 0 {
        return Vec::new();
    }
    monics(k, d)
        .filter(|f| !(exclude_t && *f == Poly::t()))
        .filter(|f| is_irreducible(k, f))
        .collect()
}

pub fn first_irreducible(k: &Field, d: usize) -> Result<Poly> {
    monics(k, d).find(|f| is_irreducible(k, f)).ok_or(Error::NotIrreducible)
}

fn squarefree(k: &Field, f: &Poly) -> Vec<(Poly, u32)> {
    let p = k.characteristic() as usize;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative(k);
    if df.is_zero() {
        // f is a p-th power
        let root = Poly::new((0..=f.degree().unwrap_or(0) / p).map(|i| k.pth_root(f.coeff(i * p))).collect());
        for (g, m) in squarefree(k, &root) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(k, &df);
    let mut w = f.div_exact(k, &c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(k, &c);
        let z = w.div_exact(k, &y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(k, &w);
    }
    if !c.is_one() {
        let root = Poly::new((0..=c.degree().unwrap_or(0) / p).map(|j| k.pth_root(c.coeff(j * p))).collect());
        for (g, m) in squarefree(k, &root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn distinct_degree(k: &Field, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = Poly::t();
    let mut h = x.clone();
    let mut d = 0;
    while let Some(n) = rest.degree() {
        if n < 2 * (d + 1) {
            if n > 0 {
                out.push((rest.clone(), n));
            }
            break;
        }
        d += 1;
        h = h.pow_mod(k, k.order() as u64, &rest);
        let g = h.sub(k, &x).gcd(k, &rest);
        if !g.is_one() {
            rest = rest.div_exact(k, &g);
            h = h.rem(k, &rest).expect("nonzero modulus");
            out.push((g, d));
        }
    }
    out
}

fn random_poly(k: &Field, n: usize, rng: &mut ChaCha8Rng) -> Poly {
    Poly::new((0..n).map(|_| Fe(rng.next_u32() % k.order())).collect())
}

fn equal_degree(k: &Field, g: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = g.degree().expect("nonzero");
    if n == d {
        return Ok(vec![g.clone()]);
    }
    let q = k.order() as u64;
    for _ in 0..SPLIT_ATTEMPTS {
        let a = random_poly(k, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if q % 2 == 1 {
            // a^((Q^d - 1)/2) = (a^(1 + Q + .. + Q^(d-1)))^((Q-1)/2)
            let mut t = a.clone();
            let mut acc = a.rem(k, g)?;
            for _ in 1..d {
                t = t.pow_mod(k, q, g);
                acc = acc.mul_mod(k, &t, g);
            }
            acc.pow_mod(k, (q - 1) / 2, g).sub(k, &Poly::one())
        } else {
            // absolute trace to F_2
            let steps = d * k.absolute_degree() as usize;
            let mut t = a.rem(k, g)?;
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.mul_mod(k, &t, g);
                acc = acc.add(k, &t);
            }
            acc
        };
        let h = b.gcd(k, g);
        let hd = h.degree().unwrap_or(0);
        if hd > 0 && hd < n {
            let mut out = equal_degree(k, &h, d, rng)?;
            out.extend(equal_degree(k, &g.div_exact(k, &h), d, rng)?);
            return Ok(out);
        }
    }
    Err(Error::NoConvergence)
}

/// Complete factorization into monic irreducibles with multiplicities, in
/// canonical order. The leading coefficient of `f` is dropped.
pub fn factor(k: &Field, f: &Poly) -> Result<Vec<(Poly, u32)>> {
    factor_seeded(k, f, FACTOR_SEED)
}

pub fn factor_seeded(k: &Field, f: &Poly, seed: u64) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (sq, mult) in squarefree(k, &f.monic(k)) {
        for (g, d) in distinct_degree(k, &sq) {
            for h in equal_degree(k, &g, d, &mut rng)? {
                match out.iter_mut().find(|(e, _)| *e == h) {
                    Some(entry) => entry.1 += mult,
                    None => out.push((h, mult)),
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(k: &Field, s: &str) -> Poly {
        Poly::parse(k, s).unwrap()
    }

    fn expand(k: &Field, fs: &[(Poly, u32)]) -> Poly {
        fs.iter().fold(Poly::one(), |acc, (g, m)| acc.mul(k, &g.pow(k, *m as usize)))
    }

    #[test]
    fn factor_examples() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert_eq!(
            factor(&f2, &p(&f2, "0,1,0,0,1")).unwrap(),
            vec![(p(&f2, "0,1"), 1), (p(&f2, "1,1"), 1), (p(&f2, "1,1,1"), 1)]
        );
        assert_eq!(factor(&f2, &p(&f2, "1,0,1")).unwrap(), vec![(p(&f2, "1,1"), 2)]);
        assert_eq!(factor(&f3, &p(&f3, "1,0,1")).unwrap(), vec![(p(&f3, "1,0,1"), 1)]);
        assert_eq!(factor(&f3, &Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn pth_power_input() {
        // (t^2+t+1)^4 (t+1)^2 over F_2 and (t+1)^3 t^3 over F_3
        let f2 = Field::prime(2).unwrap();
        let f = p(&f2, "1,1,1").pow(&f2, 4).mul(&f2, &p(&f2, "1,1").pow(&f2, 2));
        assert_eq!(factor(&f2, &f).unwrap(), vec![(p(&f2, "1,1"), 2), (p(&f2, "1,1,1"), 4)]);
        let f3 = Field::prime(3).unwrap();
        let g = p(&f3, "1,1").pow(&f3, 3).mul(&f3, &Poly::t().pow(&f3, 3));
        assert_eq!(factor(&f3, &g).unwrap(), vec![(Poly::t(), 3), (p(&f3, "1,1"), 3)]);
    }

    #[test]
    fn irreducible_lists() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert_eq!(irreducibles(&f3, 1, true), vec![p(&f3, "1,1"), p(&f3, "2,1")]);
        assert_eq!(irreducibles(&f2, 2, false), vec![p(&f2, "1,1,1")]);
        assert_eq!(irreducibles(&f3, 2, false).len(), 3);
        // necklace counts: degree 3 and 4 over F_2 and degree 2 over F_4
        assert_eq!(irreducibles(&f2, 3, false).len(), 2);
        assert_eq!(irreducibles(&f2, 4, false).len(), 3);
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(irreducibles(&f4, 2, false).len(), 6);
    }

    /// Irreducibility by trial division against every monic of degree <= n/2.
    fn irreducible_by_trial(k: &Field, f: &Poly) -> bool {
        let n = f.degree().unwrap();
        (1..=n / 2).all(|d| monics(k, d).all(|g| !f.rem(k, &g).unwrap().is_zero()))
    }

    fn any_field() -> impl Strategy<Value = Field> {
        prop_oneof![Just(2u64), Just(3), Just(4), Just(5), Just(9)].prop_map(|q| Field::of_order(q).unwrap())
    }

    proptest! {
        #[test]
        fn factor_product_and_irreducibility(
            k in any_field(),
            raw in proptest::collection::vec(0u32..1000, 1..=9),
        ) {
            let f = Poly::new(raw.iter().map(|&c| Fe(c % k.order())).collect());
            prop_assume!(!f.is_zero());
            let fs = factor(&k, &f).unwrap();
            prop_assert_eq!(expand(&k, &fs).scale(&k, f.lead()), f);
            for (g, _) in &fs {
                prop_assert!(g.is_monic());
                prop_assert!(irreducible_by_trial(&k, g));
                prop_assert!(is_irreducible(&k, g));
            }
        }
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for q in [2u64, 3, 4] {
            let k = Field::of_order(q).unwrap();
            for d in 1..=4 {
                if (q as usize).pow(d as u32) > 300 {
                    continue;
                }
                for f in monics(&k, d) {
                    assert_eq!(is_irreducible(&k, &f), irreducible_by_trial(&k, &f), "{f:?}");
                }
            }
        }
    }
}
