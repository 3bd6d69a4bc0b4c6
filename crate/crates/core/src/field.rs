//! Exact arithmetic in finite fields.
//!
//! A [`Field`] is either a prime field `F_p` or a simple extension
//! `base[w]/(m(w))` of another field by a monic irreducible `m`. Elements
//! are packed as [`Fe`] indices: an element of an extension of degree `d`
//! over a base of order `Q` with coordinates `(c_0, .., c_{d-1})` in the
//! power basis `1, w, .., w^{d-1}` has index `sum c_i Q^i`. Index 0 is zero
//! and index 1 is one in every field.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A packed field element; meaningful only together with its [`Field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Fields up to this order get dense operation tables.
const TABLE_LIMIT: u32 = 1024;
/// Largest order representable by `Fe`.
const ORDER_LIMIT: u128 = 1 << 31;

#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    characteristic: u32,
    order: u32,
    degree: u32,
    base: Option<Field>,
    modulus: Vec<Fe>,
    tables: Option<Tables>,
    primitive: Fe,
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e`, or fails if `q` is not a prime power.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2u64;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 || p > u32::MAX as u64 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, e))
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Self::finish(Inner {
            characteristic: p,
            order: p,
            degree: 1,
            base: None,
            modulus: vec![Fe::ZERO, Fe::ONE],
            tables: None,
            primitive: Fe::ZERO,
        }))
    }

    /// `F_{p^e}` with the lexicographically least monic irreducible modulus
    /// (coefficients compared from the constant term upwards).
    pub fn new(p: u32, e: u32) -> Result<Field> {
        if e < 1 {
            return Err(Error::ZeroDegree);
        }
        let prime = Field::prime(p)?;
        if e == 1 {
            return Ok(prime);
        }
        let modulus = crate::poly::first_irreducible(&prime, e as usize)?;
        Field::extension(&prime, &modulus)
    }

    /// The field of order `q`, for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, e) = prime_power(q)?;
        Field::new(p, e)
    }

    /// `base[w]/(modulus)`; `modulus` must be monic irreducible over `base`.
    pub fn extension(base: &Field, modulus: &crate::poly::Poly) -> Result<Field> {
        let d = modulus.degree().ok_or(Error::ZeroPolynomial)? as u32;
        if d == 0 || !modulus.is_monic() || !crate::poly::is_irreducible(base, modulus) {
            return Err(Error::NotIrreducible);
        }
        let order = (base.order() as u128).pow(d);
        if order > ORDER_LIMIT {
            return Err(Error::FieldTooLarge(order));
        }
        Ok(Self::finish(Inner {
            characteristic: base.characteristic(),
            order: order as u32,
            degree: d,
            base: Some(base.clone()),
            modulus: modulus.coeffs().to_vec(),
            tables: None,
            primitive: Fe::ZERO,
        }))
    }

    fn finish(mut inner: Inner) -> Field {
        if inner.base.is_some() && inner.order <= TABLE_LIMIT {
            let partial = Field(Arc::new(Inner {
                characteristic: inner.characteristic,
                order: inner.order,
                degree: inner.degree,
                base: inner.base.clone(),
                modulus: inner.modulus.clone(),
                tables: None,
                primitive: Fe::ZERO,
            }));
            inner.tables = Some(partial.build_tables());
        }
        let mut field = Field(Arc::new(inner));
        let primitive = field.find_primitive();
        Arc::get_mut(&mut field.0).expect("fresh field").primitive = primitive;
        field
    }

    fn build_tables(&self) -> Tables {
        let n = self.order() as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        let mut neg = vec![0u16; n];
        let mut inv = vec![0u16; n];
        for a in 0..n {
            let fa = Fe(a as u32);
            neg[a] = self.raw_neg(fa).0 as u16;
            for b in a..n {
                let fb = Fe(b as u32);
                let s = self.raw_add(fa, fb).0 as u16;
                let m = self.raw_mul(fa, fb).0 as u16;
                add[a * n + b] = s;
                add[b * n + a] = s;
                mul[a * n + b] = m;
                mul[b * n + a] = m;
            }
        }
        for a in 1..n {
            for b in 1..n {
                if mul[a * n + b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    fn find_primitive(&self) -> Fe {
        let q = self.order() as u64;
        if q == 2 {
            return Fe::ONE;
        }
        let factors = distinct_prime_factors(q - 1);
        (2..q as u32)
            .map(Fe)
            .find(|&g| factors.iter().all(|&r| self.pow(g, (q - 1) / r) != Fe::ONE))
            .expect("finite fields have primitive elements")
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.order
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.characteristic
    }

    /// Degree over the immediate base (1 for a prime field).
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> u32 {
        self.0.degree * self.base().map_or(1, |b| b.absolute_degree())
    }

    pub fn base(&self) -> Option<&Field> {
        self.0.base.as_ref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    /// Modulus over the base, low-to-high; `t` for a prime field.
    pub fn modulus(&self) -> &[Fe] {
        &self.0.modulus
    }

    /// A generator of the multiplicative group (smallest such index).
    pub fn primitive(&self) -> Fe {
        self.0.primitive
    }

    /// The adjoined generator `w` (index `Q` for base order `Q`); `None` for prime fields.
    pub fn generator(&self) -> Option<Fe> {
        self.base().map(|b| Fe(b.order()))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.order()).map(Fe)
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.order()
    }

    pub fn check(&self, a: Fe) -> Result<Fe> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        let p = self.characteristic() as i64;
        Fe(n.rem_euclid(p) as u32)
    }

    /// Coordinates over the base field in the power basis.
    pub fn coords(&self, a: Fe) -> Vec<Fe> {
        match self.base() {
            None => vec![a],
            Some(b) => {
                let q = b.order();
                let mut x = a.0;
                (0..self.degree())
                    .map(|_| {
                        let c = Fe(x % q);
                        x /= q;
                        c
                    })
                    .collect()
            }
        }
    }

    pub fn from_coords(&self, coords: &[Fe]) -> Fe {
        match self.base() {
            None => coords.first().copied().unwrap_or(Fe::ZERO),
            Some(b) => {
                let q = b.order();
                Fe(coords.iter().rev().fold(0, |acc, c| acc * q + c.0))
            }
        }
    }

    /// Embeds a base-field element.
    pub fn lift_from_base(&self, a: Fe) -> Fe {
        a
    }

    fn raw_add(&self, a: Fe, b: Fe) -> Fe {
        match self.base() {
            None => Fe((a.0 + b.0) % self.0.characteristic),
            Some(base) => {
                let (x, y) = (self.coords(a), self.coords(b));
                let s: Vec<Fe> = x.iter().zip(&y).map(|(&u, &v)| base.add(u, v)).collect();
                self.from_coords(&s)
            }
        }
    }

    fn raw_neg(&self, a: Fe) -> Fe {
        match self.base() {
            None => Fe((self.0.characteristic - a.0) % self.0.characteristic),
            Some(base) => {
                let s: Vec<Fe> = self.coords(a).into_iter().map(|u| base.neg(u)).collect();
                self.from_coords(&s)
            }
        }
    }

    fn raw_mul(&self, a: Fe, b: Fe) -> Fe {
        match self.base() {
            None => Fe(((a.0 as u64 * b.0 as u64) % self.0.characteristic as u64) as u32),
            Some(base) => {
                let d = self.degree() as usize;
                let (x, y) = (self.coords(a), self.coords(b));
                let mut prod = vec![Fe::ZERO; 2 * d - 1];
                for (i, &u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, &v) in y.iter().enumerate() {
                        prod[i + j] = base.add(prod[i + j], base.mul(u, v));
                    }
                }
                let m = &self.0.modulus;
                for k in (d..prod.len()).rev() {
                    let c = prod[k];
                    if c.is_zero() {
                        continue;
                    }
                    for i in 0..d {
                        prod[k - d + i] = base.sub(prod[k - d + i], base.mul(c, m[i]));
                    }
                    prod[k] = Fe::ZERO;
                }
                self.from_coords(&prod[..d])
            }
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.0.tables {
            Some(t) => Fe(t.add[a.index() * self.order() as usize + b.index()] as u32),
            None => self.raw_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        match &self.0.tables {
            Some(t) => Fe(t.neg[a.index()] as u32),
            None => self.raw_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.0.tables {
            Some(t) => Fe(t.mul[a.index() * self.order() as usize + b.index()] as u32),
            None => self.raw_mul(a, b),
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.tables {
            Some(t) => Fe(t.inv[a.index()] as u32),
            // a^(q-2), valid for every finite field
            None => self.pow(a, self.order() as u64 - 2),
        })
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The `p`-th root (inverse Frobenius).
    pub fn pth_root(&self, a: Fe) -> Fe {
        self.pow(a, self.order() as u64 / self.characteristic() as u64)
    }

    /// A basis of the field as a vector space over its prime subfield.
    pub fn additive_basis(&self) -> Vec<Fe> {
        match self.base() {
            None => vec![Fe::ONE],
            Some(base) => {
                let inner = base.additive_basis();
                let d = self.degree() as usize;
                let mut out = Vec::with_capacity(d * inner.len());
                for i in 0..d {
                    for &b in &inner {
                        let mut c = vec![Fe::ZERO; d];
                        c[i] = b;
                        out.push(self.from_coords(&c));
                    }
                }
                out
            }
        }
    }

    /// Human readable element: integers for prime fields, `a0+a1*w+..` for
    /// extensions of a prime field, `[b0|b1|..]` (base coordinates) otherwise.
    pub fn format(&self, a: Fe) -> String {
        match self.base() {
            None => a.0.to_string(),
            Some(base) if base.is_prime_field() => {
                let mut terms = Vec::new();
                for (i, c) in self.coords(a).into_iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let coeff = c.0.to_string();
                    terms.push(match (i, c.0) {
                        (0, _) => coeff,
                        (1, 1) => "w".to_string(),
                        (1, _) => alloc::format!("{coeff}*w"),
                        (_, 1) => alloc::format!("w^{i}"),
                        _ => alloc::format!("{coeff}*w^{i}"),
                    });
                }
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
            Some(base) => {
                let parts: Vec<String> = self.coords(a).into_iter().map(|c| base.format(c)).collect();
                alloc::format!("[{}]", parts.join("|"))
            }
        }
    }

    pub fn parse(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        let bad = || Error::Invalid(alloc::format!("bad field element `{s}`"));
        match self.base() {
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Ok(self.from_int(n))
            }
            Some(base) if base.is_prime_field() => {
                let d = self.degree() as usize;
                let mut coords = vec![Fe::ZERO; d];
                for term in s.split('+') {
                    let term = term.trim();
                    let (coeff, power) = match term.split_once('w') {
                        None => (term, 0usize),
                        Some((c, rest)) => {
                            let c = c.trim_end_matches('*');
                            let power = match rest.strip_prefix('^') {
                                Some(e) => e.parse().map_err(|_| bad())?,
                                None if rest.is_empty() => 1,
                                None => return Err(bad()),
                            };
                            (if c.is_empty() { "1" } else { c }, power)
                        }
                    };
                    let c: i64 = coeff.parse().map_err(|_| bad())?;
                    if power >= d {
                        return Err(bad());
                    }
                    coords[power] = base.add(coords[power], base.from_int(c));
                }
                Ok(self.from_coords(&coords))
            }
            Some(base) => {
                let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
                let coords = inner.split('|').map(|c| base.parse(c)).collect::<Result<Vec<_>>>()?;
                if coords.len() != self.degree() as usize {
                    return Err(bad());
                }
                Ok(self.from_coords(&coords))
            }
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.order == other.0.order
                && self.0.modulus == other.0.modulus
                && self.0.base == other.0.base)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order())?;
        if let Some(base) = self.base() {
            write!(f, "[over {:?}, modulus {:?}]", base, self.modulus())?;
        }
        Ok(())
    }
}
