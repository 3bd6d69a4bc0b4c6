//! The centralizer algebra `M[K,x]_lambda` of `J_lambda(C_p)`.
//!
//! An element is an `s x s` grid (`s` = number of parts) whose `(i,j)` entry
//! lies in `K[x]_{lambda_i}` and is divisible by `x^{lambda_i - lambda_j}`
//! when `lambda_i > lambda_j`. Only the `min(lambda_i, lambda_j)` legal
//! coefficients are stored, starting at exponent `max(0, lambda_i - lambda_j)`.

use alloc::vec;
use alloc::vec::Vec;
use core::hash::{Hash, Hasher};

use crate::canonical::EigenField;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::partition::Partition;

/// Exponent of the first stored coefficient of block `(i,j)`.
#[inline]
pub fn window_offset(li: usize, lj: usize) -> usize {
    li.saturating_sub(lj)
}

/// Adds `x^{ao} a(x) * x^{bo} b(x)` into `acc` (coefficients from exponent
/// `acc_off`), dropping exponents `>= limit`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn mul_acc(
    k: &Field,
    acc: &mut [Fe],
    acc_off: usize,
    a: &[Fe],
    ao: usize,
    b: &[Fe],
    bo: usize,
    limit: usize,
) {
    for (s, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (t, &y) in b.iter().enumerate() {
            let e = ao + s + bo + t;
            if e >= limit {
                break;
            }
            if y.is_zero() {
                continue;
            }
            debug_assert!(e >= acc_off, "divisibility violated");
            let slot = &mut acc[e - acc_off];
            *slot = k.add(*slot, k.mul(x, y));
        }
    }
}

#[derive(Clone, Debug)]
pub struct TruncAlgElement {
    lambda: Partition,
    k: Field,
    windows: Vec<Vec<Fe>>,
}

impl PartialEq for TruncAlgElement {
    fn eq(&self, o: &Self) -> bool {
        self.lambda == o.lambda && self.k.order() == o.k.order() && self.windows == o.windows
    }
}

impl Eq for TruncAlgElement {}

impl Hash for TruncAlgElement {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.windows.hash(h);
    }
}

impl TruncAlgElement {
    pub fn zero(lambda: &Partition, k: &Field) -> TruncAlgElement {
        let l = lambda.parts();
        let windows = l.iter().flat_map(|&li| l.iter().map(move |&lj| vec![Fe::ZERO; li.min(lj)])).collect();
        TruncAlgElement { lambda: lambda.clone(), k: k.clone(), windows }
    }

    pub fn identity(lambda: &Partition, k: &Field) -> TruncAlgElement {
        let mut e = Self::zero(lambda, k);
        for i in 0..lambda.len() {
            e.window_mut(i, i)[0] = Fe::ONE;
        }
        e
    }

    /// Dimension over `K`: `sum_{i,j} min(lambda_i, lambda_j)`.
    pub fn dim(lambda: &Partition) -> usize {
        let l = lambda.parts();
        l.iter().map(|&a| l.iter().map(|&b| a.min(b)).sum::<usize>()).sum()
    }

    /// Builds from all window coefficients in row-major block order.
    pub fn from_flat(lambda: &Partition, k: &Field, flat: &[Fe]) -> Result<TruncAlgElement> {
        if flat.len() != Self::dim(lambda) {
            return Err(Error::Dimension(alloc::format!(
                "expected {} coefficients, got {}",
                Self::dim(lambda),
                flat.len()
            )));
        }
        let mut e = Self::zero(lambda, k);
        let mut it = flat.iter();
        for w in &mut e.windows {
            for c in w.iter_mut() {
                *c = k.check(*it.next().expect("length checked"))?;
            }
        }
        Ok(e)
    }

    /// The element with index `n` in a mixed-radix enumeration of all `q^dim` elements.
    pub fn from_index(lambda: &Partition, k: &Field, mut n: u64) -> TruncAlgElement {
        let q = k.order() as u64;
        let flat: Vec<Fe> = (0..Self::dim(lambda))
            .map(|_| {
                let c = Fe((n % q) as u32);
                n /= q;
                c
            })
            .collect();
        Self::from_flat(lambda, k, &flat).expect("in range")
    }

    pub fn flat(&self) -> Vec<Fe> {
        self.windows.concat()
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn field(&self) -> &Field {
        &self.k
    }

    fn s(&self) -> usize {
        self.lambda.len()
    }

    fn part(&self, i: usize) -> usize {
        self.lambda.parts()[i]
    }

    pub fn offset(&self, i: usize, j: usize) -> usize {
        window_offset(self.part(i), self.part(j))
    }

    pub fn window(&self, i: usize, j: usize) -> &[Fe] {
        &self.windows[i * self.s() + j]
    }

    pub fn window_mut(&mut self, i: usize, j: usize) -> &mut [Fe] {
        let s = self.s();
        &mut self.windows[i * s + j]
    }

    /// Coefficient of `x^a` in block `(i,j)`.
    pub fn coeff(&self, i: usize, j: usize, a: usize) -> Fe {
        let o = self.offset(i, j);
        if a < o {
            return Fe::ZERO;
        }
        self.window(i, j).get(a - o).copied().unwrap_or(Fe::ZERO)
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, a: usize, c: Fe) -> Result<()> {
        let o = self.offset(i, j);
        let k = self.k.clone();
        let w = self.window_mut(i, j);
        if a < o || a >= o + w.len() {
            return Err(Error::Invalid(alloc::format!("x^{a} outside block ({i},{j})")));
        }
        w[a - o] = k.check(c)?;
        Ok(())
    }

    fn same_shape(&self, o: &TruncAlgElement) -> Result<()> {
        if self.lambda != o.lambda {
            return Err(Error::Dimension(alloc::format!("shapes {} and {}", self.lambda, o.lambda)));
        }
        if self.k.order() != o.k.order() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &TruncAlgElement) -> Result<TruncAlgElement> {
        self.same_shape(o)?;
        let mut out = self.clone();
        for (w, v) in out.windows.iter_mut().zip(&o.windows) {
            for (x, &y) in w.iter_mut().zip(v) {
                *x = self.k.add(*x, y);
            }
        }
        Ok(out)
    }

    /// Block `(i,j)` of the product is `sum_k a_ik b_kj mod x^{lambda_i}`.
    pub fn mul(&self, o: &TruncAlgElement) -> Result<TruncAlgElement> {
        self.same_shape(o)?;
        let s = self.s();
        let mut out = Self::zero(&self.lambda, &self.k);
        for i in 0..s {
            let li = self.part(i);
            for j in 0..s {
                let off = out.offset(i, j);
                let acc = &mut out.windows[i * s + j];
                for m in 0..s {
                    mul_acc(
                        &self.k,
                        acc,
                        off,
                        self.window(i, m),
                        self.offset(i, m),
                        o.window(m, j),
                        o.offset(m, j),
                        li,
                    );
                }
            }
        }
        Ok(out)
    }

    /// Constant-term diagonal blocks `B_ii`, one square matrix over `K` per distinct part size.
    pub fn constant_blocks(&self) -> Vec<(usize, Matrix)> {
        self.lambda
            .multiplicities()
            .into_iter()
            .map(|(size, count)| {
                let first = self.lambda.index_of(size, 0).expect("present");
                let mut m = Matrix::zeros(count, count);
                for r in 0..count {
                    for c in 0..count {
                        m.set(r, c, self.window(first + r, first + c)[0]);
                    }
                }
                (size, m)
            })
            .collect()
    }

    /// Invertible iff every `B_ii` is.
    pub fn is_unit(&self) -> bool {
        self.constant_blocks().iter().all(|(_, m)| m.is_invertible(&self.k))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.lambda, &self.k)
    }
}

/// An element of `M[K,x]_lambda^t`: block `(i,j)` lies in `K[x]_{lambda_j}`
/// and is divisible by `x^{lambda_j - lambda_i}`.
#[derive(Clone, Debug)]
pub struct TwistedElement {
    lambda: Partition,
    k: Field,
    windows: Vec<Vec<Fe>>,
}

impl PartialEq for TwistedElement {
    fn eq(&self, o: &Self) -> bool {
        self.lambda == o.lambda && self.windows == o.windows
    }
}

impl Eq for TwistedElement {}

impl TwistedElement {
    fn part(&self, i: usize) -> usize {
        self.lambda.parts()[i]
    }

    pub fn offset(&self, i: usize, j: usize) -> usize {
        window_offset(self.part(j), self.part(i))
    }

    pub fn window(&self, i: usize, j: usize) -> &[Fe] {
        &self.windows[i * self.lambda.len() + j]
    }

    pub fn coeff(&self, i: usize, j: usize, a: usize) -> Fe {
        let o = self.offset(i, j);
        if a < o {
            return Fe::ZERO;
        }
        self.window(i, j).get(a - o).copied().unwrap_or(Fe::ZERO)
    }

    /// Block `(i,j)` of the product is `sum_k a_ik b_kj mod x^{lambda_j}`.
    pub fn mul(&self, o: &TwistedElement) -> Result<TwistedElement> {
        if self.lambda != o.lambda {
            return Err(Error::Dimension(alloc::format!("shapes {} and {}", self.lambda, o.lambda)));
        }
        let s = self.lambda.len();
        let mut windows = self.windows.iter().map(|w| vec![Fe::ZERO; w.len()]).collect::<Vec<_>>();
        for i in 0..s {
            for j in 0..s {
                let off = self.offset(i, j);
                for m in 0..s {
                    mul_acc(
                        &self.k,
                        &mut windows[i * s + j],
                        off,
                        self.window(i, m),
                        self.offset(i, m),
                        o.window(m, j),
                        o.offset(m, j),
                        self.part(j),
                    );
                }
            }
        }
        Ok(TwistedElement { lambda: self.lambda.clone(), k: self.k.clone(), windows })
    }

    /// Block transpose; lands back in `M[K,x]_lambda`.
    pub fn transpose(&self) -> TruncAlgElement {
        let s = self.lambda.len();
        let windows = (0..s * s).map(|n| self.windows[(n % s) * s + n / s].clone()).collect();
        TruncAlgElement { lambda: self.lambda.clone(), k: self.k.clone(), windows }
    }
}

/// The isomorphism `D: M[K,x]_lambda -> M[K,x]_lambda^t`: each block keeps
/// its position and its stored coefficients, and the power of `x` it is
/// divisible by moves from `x^{lambda_i - lambda_j}` to `x^{lambda_j - lambda_i}`.
/// It is multiplicative.
pub fn d_twist(b: &TruncAlgElement) -> TwistedElement {
    TwistedElement { lambda: b.lambda.clone(), k: b.k.clone(), windows: b.windows.clone() }
}

/// `D` followed by block transpose: an anti-automorphism of `M[K,x]_lambda`
/// that is the plain transpose when all parts are equal.
pub fn anti_twist(b: &TruncAlgElement) -> TruncAlgElement {
    d_twist(b).transpose()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `a` (a unit of `K[x]_i`) in the diagonal entry of the `l`-th part of size `i`.
    M { size: usize, copy: usize, a: Vec<Fe> },
    /// Swap of the `l`-th and `m`-th parts of size `i`.
    E { size: usize, l: usize, m: usize },
    /// `a` in the entry (`l`-th part of size `i`, `m`-th part of size `j`), `i <= j`.
    ALe { i: usize, j: usize, l: usize, m: usize, a: Vec<Fe> },
    /// `x^{i-j} a` in the entry (`l`-th part of size `i`, `m`-th part of size `j`), `i > j`.
    AGe { i: usize, j: usize, l: usize, m: usize, a: Vec<Fe> },
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub realized: TruncAlgElement,
}

fn realize(lambda: &Partition, k: &Field, kind: &GeneratorKind) -> TruncAlgElement {
    let pos = |size: usize, copy: usize| lambda.index_of(size, copy).expect("copy exists");
    let mut e = TruncAlgElement::identity(lambda, k);
    match kind {
        GeneratorKind::M { size, copy, a } => {
            let p = pos(*size, *copy);
            e.window_mut(p, p).copy_from_slice(a);
        }
        GeneratorKind::E { size, l, m } => {
            let (pl, pm) = (pos(*size, *l), pos(*size, *m));
            e.window_mut(pl, pl)[0] = Fe::ZERO;
            e.window_mut(pm, pm)[0] = Fe::ZERO;
            e.window_mut(pl, pm)[0] = Fe::ONE;
            e.window_mut(pm, pl)[0] = Fe::ONE;
        }
        GeneratorKind::ALe { i, j, l, m, a } | GeneratorKind::AGe { i, j, l, m, a } => {
            let (r, c) = (pos(*i, *l), pos(*j, *m));
            e.window_mut(r, c).copy_from_slice(a);
        }
    }
    e
}

impl Generator {
    pub fn new(lambda: &Partition, k: &Field, kind: GeneratorKind) -> Result<Generator> {
        let exists = |size: usize, copy: usize| lambda.index_of(size, copy).is_some();
        let bad = |why: &str| Err(Error::Invalid(alloc::format!("{why}: {kind:?}")));
        match &kind {
            GeneratorKind::M { size, copy, a } => {
                if !exists(*size, *copy) || a.len() != *size || a[0].is_zero() {
                    return bad("M needs a unit of K[x]_i");
                }
            }
            GeneratorKind::E { size, l, m } => {
                if !exists(*size, *l) || !exists(*size, *m) || l == m {
                    return bad("E needs two distinct copies");
                }
            }
            GeneratorKind::ALe { i, j, l, m, a } => {
                if i > j || !exists(*i, *l) || !exists(*j, *m) || (i == j && l == m) || a.len() != *i {
                    return bad("invalid A(i<=j)");
                }
            }
            GeneratorKind::AGe { i, j, l, m, a } => {
                if i <= j || !exists(*i, *l) || !exists(*j, *m) || a.len() != *j {
                    return bad("invalid A(i>=j)");
                }
            }
        }
        let a_ok = match &kind {
            GeneratorKind::M { a, .. } | GeneratorKind::ALe { a, .. } | GeneratorKind::AGe { a, .. } => {
                a.iter().all(|&c| k.contains(c))
            }
            GeneratorKind::E { .. } => true,
        };
        if !a_ok {
            return Err(Error::FieldMismatch);
        }
        let realized = realize(lambda, k, &kind);
        Ok(Generator { kind, realized })
    }
}

/// All `q^len` coefficient vectors.
fn all_vectors(k: &Field, len: usize) -> impl Iterator<Item = Vec<Fe>> + '_ {
    let q = k.order() as u64;
    (0..q.pow(len as u32)).map(move |mut n| {
        (0..len)
            .map(|_| {
                let c = Fe((n % q) as u32);
                n /= q;
                c
            })
            .collect()
    })
}

/// Ordered pairs of block positions `(size_i, copy_l, size_j, copy_m)` other than the diagonal.
fn off_diagonal(lambda: &Partition) -> Vec<(usize, usize, usize, usize)> {
    let mult = lambda.multiplicities();
    let mut out = Vec::new();
    for &(i, li) in &mult {
        for &(j, lj) in &mult {
            for l in 0..li {
                for m in 0..lj {
                    if i != j || l != m {
                        out.push((i, l, j, m));
                    }
                }
            }
        }
    }
    out
}

fn a_kind(i: usize, l: usize, j: usize, m: usize, a: Vec<Fe>) -> GeneratorKind {
    if i <= j {
        GeneratorKind::ALe { i, j, l, m, a }
    } else {
        GeneratorKind::AGe { i, j, l, m, a }
    }
}

/// Every generator of the four families with every admissible parameter.
pub fn generators(lambda: &Partition, k: &Field) -> Vec<Generator> {
    let mut kinds = Vec::new();
    for (size, count) in lambda.multiplicities() {
        for copy in 0..count {
            for a in all_vectors(k, size).filter(|a| !a[0].is_zero()) {
                kinds.push(GeneratorKind::M { size, copy, a });
            }
        }
        for l in 0..count {
            for m in l + 1..count {
                kinds.push(GeneratorKind::E { size, l, m });
            }
        }
    }
    for (i, l, j, m) in off_diagonal(lambda) {
        for a in all_vectors(k, i.min(j)) {
            kinds.push(a_kind(i, l, j, m, a));
        }
    }
    kinds.into_iter().map(|kind| Generator::new(lambda, k, kind).expect("admissible")).collect()
}

/// A small generating set of the same group: a primitive constant and
/// `1 + b x^t` for `M`, adjacent swaps for `E`, and `b x^t` for `A`, with
/// `b` running over an additive basis of `K`. Swaps conjugate the first copy
/// of each size onto the others, so `M` and `A` use first copies only (and
/// the first two copies for `A` within one size).
pub fn group_generators(lambda: &Partition, k: &Field) -> Vec<Generator> {
    let basis = k.additive_basis();
    let mut kinds = Vec::new();
    for (size, count) in lambda.multiplicities() {
        for copy in 0..count.min(1) {
            let mut a = vec![Fe::ZERO; size];
            a[0] = k.primitive();
            if a[0] != Fe::ONE {
                kinds.push(GeneratorKind::M { size, copy, a });
            }
            for t in 1..size {
                for &b in &basis {
                    let mut a = vec![Fe::ZERO; size];
                    a[0] = Fe::ONE;
                    a[t] = b;
                    kinds.push(GeneratorKind::M { size, copy, a });
                }
            }
        }
        for l in 0..count.saturating_sub(1) {
            kinds.push(GeneratorKind::E { size, l, m: l + 1 });
        }
    }
    let first = |i: usize, l: usize, j: usize, m: usize| if i == j { (l, m) == (0, 1) } else { l == 0 && m == 0 };
    for (i, l, j, m) in off_diagonal(lambda).into_iter().filter(|&(i, l, j, m)| first(i, l, j, m)) {
        for t in 0..i.min(j) {
            for &b in &basis {
                let mut a = vec![Fe::ZERO; i.min(j)];
                a[t] = b;
                kinds.push(a_kind(i, l, j, m, a));
            }
        }
    }
    kinds.into_iter().map(|kind| Generator::new(lambda, k, kind).expect("admissible")).collect()
}

/// Realizes `b` as a matrix over `k` commuting with `J_lambda(C_p)`: the
/// coefficient `c` of `x^a` in block `(i,j)` becomes `X^a_{lambda_i x lambda_j}`
/// tensored with multiplication by `c`.
pub fn embed(b: &TruncAlgElement, ef: &EigenField) -> Result<Matrix> {
    if b.field().order() != ef.field().order() {
        return Err(Error::FieldMismatch);
    }
    let k = ef.base();
    let d = ef.degree();
    let parts = b.lambda().parts();
    let n = b.lambda().total() * d;
    let starts: Vec<usize> = parts.iter().scan(0, |acc, &p| {
        let s = *acc;
        *acc += p;
        Some(s)
    }).collect();
    let mut out = Matrix::zeros(n, n);
    for (i, &li) in parts.iter().enumerate() {
        for (j, &lj) in parts.iter().enumerate() {
            let o = b.offset(i, j);
            for (t, &c) in b.window(i, j).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let m = ef.mult_matrix(c);
                let a = o + t;
                for s in 0..lj {
                    if s + a >= li {
                        break;
                    }
                    let (r0, c0) = ((starts[i] + s + a) * d, (starts[j] + s) * d);
                    for u in 0..d {
                        for v in 0..d {
                            let cur = out.get(r0 + u, c0 + v);
                            out.set(r0 + u, c0 + v, k.add(cur, m.get(u, v)));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `k`-dimension of the centralizer of `J_lambda(C_p)` with `deg p = d`.
pub fn centralizer_dim(lambda: &Partition, d: usize) -> usize {
    TruncAlgElement::dim(lambda) * d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::jordan_matrix;
    use crate::poly::Poly;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn closure_order(gens: &[Generator], lambda: &Partition, k: &Field) -> usize {
        let id = TruncAlgElement::identity(lambda, k);
        let mut seen = HashSet::new();
        seen.insert(id.clone());
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = x.mul(&g.realized).unwrap();
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
        seen.len()
    }

    fn unit_count(lambda: &Partition, k: &Field) -> usize {
        let total = (k.order() as u64).pow(TruncAlgElement::dim(lambda) as u32);
        (0..total).filter(|&n| TruncAlgElement::from_index(lambda, k, n).is_unit()).count()
    }

    /// `n^2 - rank` of `X -> XJ - JX`.
    fn commutant_dim(k: &Field, j: &Matrix) -> usize {
        let n = j.rows();
        let mut sys = Matrix::zeros(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                let mut e = Matrix::zeros(n, n);
                e.set(a, b, Fe::ONE);
                let c = e.mul(k, j).unwrap().sub(k, &j.mul(k, &e).unwrap()).unwrap();
                for (idx, &v) in c.data().iter().enumerate() {
                    sys.set(idx, a * n + b, v);
                }
            }
        }
        n * n - sys.rank(k)
    }

    #[test]
    fn products() {
        let f2 = Field::prime(2).unwrap();
        let l = part(&[2]);
        let mut x = TruncAlgElement::zero(&l, &f2);
        x.set_coeff(0, 0, 1, Fe::ONE).unwrap();
        assert!(x.mul(&x).unwrap().flat().iter().all(|c| c.is_zero()));
        let l = part(&[3, 1]);
        let b = TruncAlgElement::from_index(&l, &f2, 0b101101);
        assert_eq!(TruncAlgElement::identity(&l, &f2).mul(&b).unwrap(), b);
        let mut c = b.clone();
        assert!(c.set_coeff(0, 1, 1, Fe::ONE).is_err());
        assert!(c.set_coeff(0, 1, 2, Fe::ONE).is_ok());
    }

    #[test]
    fn units() {
        let f2 = Field::prime(2).unwrap();
        let l = part(&[2, 2]);
        assert!(TruncAlgElement::identity(&l, &f2).is_unit());
        assert!(!TruncAlgElement::zero(&l, &f2).is_unit());
        let mut b = TruncAlgElement::zero(&l, &f2);
        for i in 0..2 {
            for j in 0..2 {
                b.set_coeff(i, j, 0, Fe::ONE).unwrap();
                b.set_coeff(i, j, 1, Fe((i + j) as u32 % 2)).unwrap();
            }
        }
        assert!(!b.is_unit());
    }

    #[test]
    fn twists() {
        let f3 = Field::prime(3).unwrap();
        let l = part(&[2, 1]);
        let id = TruncAlgElement::identity(&l, &f3);
        assert_eq!(d_twist(&id).transpose(), id);
        let eq = part(&[2, 2]);
        let b = TruncAlgElement::from_index(&eq, &f3, 4321);
        let t = anti_twist(&b);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(t.window(i, j), b.window(j, i));
            }
        }
    }

    #[test]
    fn generator_lists() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let one = part(&[1]);
        let g = generators(&one, &f2);
        assert_eq!(g.len(), 1);
        assert!(g[0].realized.is_identity());
        assert_eq!(closure_order(&generators(&one, &f3), &one, &f3), 2);
        let two = part(&[2]);
        assert_eq!(closure_order(&generators(&two, &f2), &two, &f2), 2);
        assert!(Generator::new(&two, &f2, GeneratorKind::M { size: 2, copy: 0, a: vec![Fe(0), Fe(1)] }).is_err());
        let l = part(&[2, 2]);
        let bad = GeneratorKind::ALe { i: 2, j: 2, l: 0, m: 0, a: vec![Fe(1), Fe(0)] };
        assert!(Generator::new(&l, &f2, bad).is_err());
    }

    #[test]
    fn generation() {
        for q in [2, 3] {
            let k = Field::prime(q).unwrap();
            for p in [&[1, 1][..], &[2], &[2, 1], &[3], &[2, 2]] {
                let l = part(p);
                let units = unit_count(&l, &k);
                assert_eq!(closure_order(&generators(&l, &k), &l, &k), units, "{l} over F_{q}");
                assert_eq!(closure_order(&group_generators(&l, &k), &l, &k), units, "{l} over F_{q}");
            }
        }
        let f4 = Field::of_order(4).unwrap();
        let l = part(&[2, 1]);
        assert_eq!(closure_order(&group_generators(&l, &f4), &l, &f4), unit_count(&l, &f4));
    }

    #[test]
    fn commutation() {
        let f2 = Field::prime(2).unwrap();
        for (p, shape) in [("1,1,1", &[2, 1][..]), ("0,1", &[3, 1, 1]), ("1,1", &[2, 2, 1])] {
            let p = Poly::parse(&f2, p).unwrap();
            let l = part(shape);
            let ef = EigenField::new(&f2, &p).unwrap();
            let j = jordan_matrix(&f2, &p, &l);
            for g in generators(&l, ef.field()) {
                assert!(g.realized.is_unit());
                let e = embed(&g.realized, &ef).unwrap();
                assert_eq!(e.mul(&f2, &j).unwrap(), j.mul(&f2, &e).unwrap());
            }
        }
    }

    #[test]
    fn embedding_is_onto_the_commutant() {
        let f2 = Field::prime(2).unwrap();
        let zero = Poly::parse(&f2, "0,1").unwrap();
        let ef = EigenField::new(&f2, &zero).unwrap();
        let mut x = TruncAlgElement::zero(&part(&[2]), &f2);
        x.set_coeff(0, 0, 1, Fe::ONE).unwrap();
        assert_eq!(embed(&x, &ef).unwrap(), jordan_matrix(&f2, &zero, &part(&[2])));
        assert_eq!(centralizer_dim(&part(&[1, 1]), 1), 4);
        assert_eq!(centralizer_dim(&part(&[2]), 2), 4);
        let cases = [("0,1", &[5, 3, 3, 2][..], 43), ("1,1,1", &[2, 1], 10), ("1,1", &[3, 2, 2], 19)];
        for (p, shape, dim) in cases {
            let p = Poly::parse(&f2, p).unwrap();
            let l = part(shape);
            let ef = EigenField::new(&f2, &p).unwrap();
            assert_eq!(centralizer_dim(&l, ef.degree()), dim);
            let j = jordan_matrix(&f2, &p, &l);
            assert_eq!(commutant_dim(&f2, &j), dim);
            // images of a k-basis are independent
            let n = j.rows();
            let kdim = TruncAlgElement::dim(&l);
            let mut span = Matrix::zeros(dim, n * n);
            let mut row = 0;
            for pos in 0..kdim {
                for &b in &ef.field().additive_basis() {
                    let mut flat = vec![Fe::ZERO; kdim];
                    flat[pos] = b;
                    let e = embed(&TruncAlgElement::from_flat(&l, ef.field(), &flat).unwrap(), &ef).unwrap();
                    for (c, &v) in e.data().iter().enumerate() {
                        span.set(row, c, v);
                    }
                    row += 1;
                }
            }
            assert_eq!(span.rank(&f2), dim);
        }
    }

    #[test]
    fn unit_criterion_matches_invertibility() {
        let f2 = Field::prime(2).unwrap();
        let l = part(&[2, 1]);
        for p in ["1,1", "1,1,1"] {
            let ef = EigenField::new(&f2, &Poly::parse(&f2, p).unwrap()).unwrap();
            let total = (ef.field().order() as u64).pow(TruncAlgElement::dim(&l) as u32);
            for n in 0..total {
                let b = TruncAlgElement::from_index(&l, ef.field(), n);
                assert_eq!(b.is_unit(), embed(&b, &ef).unwrap().is_invertible(&f2));
            }
        }
    }

    fn shape_and_pair() -> impl Strategy<Value = (Vec<usize>, u64, u64)> {
        (
            prop::sample::select(vec![vec![2, 1], vec![3, 1], vec![2, 2, 1], vec![3, 2, 1], vec![4, 2]]),
            any::<u64>(),
            any::<u64>(),
        )
    }

    proptest! {
        #[test]
        fn embedding_is_a_homomorphism((shape, x, y) in shape_and_pair(), irrational in any::<bool>()) {
            let f2 = Field::prime(2).unwrap();
            let p = Poly::parse(&f2, if irrational { "1,1,1" } else { "1,1" }).unwrap();
            let ef = EigenField::new(&f2, &p).unwrap();
            let l = part(&shape);
            let a = TruncAlgElement::from_index(&l, ef.field(), x);
            let b = TruncAlgElement::from_index(&l, ef.field(), y);
            let (ea, eb) = (embed(&a, &ef).unwrap(), embed(&b, &ef).unwrap());
            prop_assert_eq!(embed(&a.mul(&b).unwrap(), &ef).unwrap(), ea.mul(&f2, &eb).unwrap());
            prop_assert_eq!(embed(&a.add(&b).unwrap(), &ef).unwrap(), ea.add(&f2, &eb).unwrap());
        }

        #[test]
        fn twist_laws((shape, x, y) in shape_and_pair(), q in prop::sample::select(vec![2u64, 3, 4])) {
            let k = Field::of_order(q).unwrap();
            let l = part(&shape);
            let a = TruncAlgElement::from_index(&l, &k, x);
            let b = TruncAlgElement::from_index(&l, &k, y);
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(d_twist(&ab), d_twist(&a).mul(&d_twist(&b)).unwrap());
            prop_assert_eq!(anti_twist(&ab), anti_twist(&b).mul(&anti_twist(&a)).unwrap());
        }
    }
}
