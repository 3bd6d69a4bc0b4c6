//! Orbits of `G_mu x G_nu` on `M[K,x]_{mu x nu}` over a finite `K`.
//!
//! Elements are coded densely: the flat coefficient vector `(c_0, .., c_{D-1})`
//! becomes `sum c_t q^{D-1-t}`, so numeric order on codes is lexicographic
//! order on coefficient vectors. Each group generator is compiled once into
//! a sparse `K`-linear map on coefficient vectors; applying it only rewrites
//! the digits it changes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::centralizer::{group_generators, Generator, GeneratorKind, TruncAlgElement};
use crate::cocentralizer::{act_left, act_right, CocentElement, CocentShape};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::partition::Partition;

/// Default cap on `|K|^dim` for exhaustive enumeration.
pub const DEFAULT_BUDGET: u64 = 1 << 22;
/// Hard cap imposed by 32-bit codes.
pub const MAX_BUDGET: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSet {
    pub shape: CocentShape,
    /// Lexicographic minima, in increasing order.
    pub reps: Vec<CocentElement>,
    pub sizes: Vec<u64>,
    pub total: u64,
}

impl OrbitSet {
    pub fn count(&self) -> usize {
        self.reps.len()
    }
}

/// `K`-arithmetic through dense tables when `K` is small.
struct Arith {
    k: Field,
    q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl Arith {
    fn new(k: &Field) -> Arith {
        let q = k.order() as usize;
        let (mut add, mut mul) = (Vec::new(), Vec::new());
        if q <= 256 {
            add = vec![0; q * q];
            mul = vec![0; q * q];
            for a in 0..q {
                for b in 0..q {
                    add[a * q + b] = k.add(Fe(a as u32), Fe(b as u32)).0;
                    mul[a * q + b] = k.mul(Fe(a as u32), Fe(b as u32)).0;
                }
            }
        }
        Arith { k: k.clone(), q, add, mul }
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.add.is_empty() {
            self.k.add(Fe(a), Fe(b)).0
        } else {
            self.add[a as usize * self.q + b as usize]
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.mul.is_empty() {
            self.k.mul(Fe(a), Fe(b)).0
        } else {
            self.mul[a as usize * self.q + b as usize]
        }
    }
}

/// Rows of a linear map that differ from the identity.
struct SparseMap {
    rows: Vec<(usize, Vec<(usize, u32)>)>,
}

/// Codes and digits for one shape.
struct Space {
    arith: Arith,
    dim: usize,
    size: u64,
    weights: Vec<u64>,
    chunk: usize,
    chunk_size: u64,
    chunk_table: Vec<u32>,
    maps: Vec<SparseMap>,
}

fn required_size(q: u64, dim: usize) -> u128 {
    (q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX)
}

impl Space {
    fn new(shape: &CocentShape, budget: u64) -> Result<Space> {
        let k = shape.field();
        let q = k.order() as u64;
        let dim = shape.dim();
        let budget = budget.min(MAX_BUDGET);
        let req = required_size(q, dim);
        if req > budget as u128 {
            return Err(Error::BudgetExceeded { required: req, budget: budget as u128 });
        }
        let size = req as u64;
        let weights: Vec<u64> = (0..dim).map(|t| q.pow((dim - 1 - t) as u32)).collect();
        let mut chunk = 1;
        while chunk < dim && q.pow(chunk as u32 + 1) <= 1 << 16 {
            chunk += 1;
        }
        let chunk = chunk.min(dim.max(1));
        let chunk_size = q.pow(chunk as u32);
        let mut chunk_table = vec![0u32; chunk_size as usize * chunk];
        for c in 0..chunk_size {
            let mut x = c;
            for t in (0..chunk).rev() {
                chunk_table[c as usize * chunk + t] = (x % q) as u32;
                x /= q;
            }
        }
        let mut space =
            Space { arith: Arith::new(k), dim, size, weights, chunk, chunk_size, chunk_table, maps: Vec::new() };
        space.maps = compile_generators(shape, &space)?;
        Ok(space)
    }

    fn decode(&self, mut code: u64, out: &mut [u32]) {
        let mut end = self.dim;
        while end > 0 {
            let len = self.chunk.min(end);
            let (c, rest) = if len == self.chunk {
                (code % self.chunk_size, code / self.chunk_size)
            } else {
                (code, 0)
            };
            let row = &self.chunk_table[c as usize * self.chunk..(c as usize + 1) * self.chunk];
            out[end - len..end].copy_from_slice(&row[self.chunk - len..]);
            code = rest;
            end -= len;
        }
    }

    fn encode(&self, digits: &[u32]) -> u64 {
        digits.iter().zip(&self.weights).map(|(&d, &w)| d as u64 * w).sum()
    }

    #[inline]
    fn apply(&self, map: &SparseMap, code: u64, digits: &[u32]) -> u64 {
        let mut out = code as i64;
        for (t, row) in &map.rows {
            let mut acc = 0u32;
            for &(s, c) in row {
                acc = self.arith.add(acc, self.arith.mul(c, digits[s]));
            }
            out += (acc as i64 - digits[*t] as i64) * self.weights[*t] as i64;
        }
        out as u64
    }

    fn element(&self, shape: &CocentShape, code: u64) -> CocentElement {
        let mut d = vec![0u32; self.dim];
        self.decode(code, &mut d);
        let flat: Vec<Fe> = d.into_iter().map(Fe).collect();
        CocentElement::from_flat(shape, &flat).expect("code in range")
    }

    /// Visits the orbit of `start`, marking `seen`; returns its size.
    fn close(&self, start: u64, seen: &mut Bitset, stack: &mut Vec<u32>, mut visit: impl FnMut(u64)) -> u64 {
        let mut digits = vec![0u32; self.dim];
        seen.set(start);
        stack.push(start as u32);
        let mut size = 0;
        while let Some(c) = stack.pop() {
            let c = c as u64;
            size += 1;
            visit(c);
            self.decode(c, &mut digits);
            for m in &self.maps {
                let n = self.apply(m, c, &digits);
                if !seen.get(n) {
                    seen.set(n);
                    stack.push(n as u32);
                }
            }
        }
        size
    }
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn new(n: u64) -> Bitset {
        Bitset(vec![0; n.div_ceil(64) as usize])
    }

    #[inline]
    fn get(&self, i: u64) -> bool {
        self.0[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: u64) {
        self.0[(i >> 6) as usize] |= 1 << (i & 63);
    }

    /// First clear bit at or after `from`.
    fn next_clear(&self, from: u64, limit: u64) -> Option<u64> {
        let mut i = from;
        while i < limit {
            let w = self.0[(i >> 6) as usize] | ((1u64 << (i & 63)) - 1);
            if w != u64::MAX {
                let j = (i & !63) + (!w).trailing_zeros() as u64;
                return (j < limit).then_some(j);
            }
            i = (i & !63) + 64;
        }
        None
    }
}

fn compile_generators(shape: &CocentShape, space: &Space) -> Result<Vec<SparseMap>> {
    let k = shape.field();
    let dim = space.dim;
    let images = |f: &dyn Fn(&CocentElement) -> Result<CocentElement>| -> Result<SparseMap> {
        let mut cols = Vec::with_capacity(dim);
        for s in 0..dim {
            let mut flat = vec![Fe::ZERO; dim];
            flat[s] = Fe::ONE;
            cols.push(f(&CocentElement::from_flat(shape, &flat)?)?.flat());
        }
        let mut rows = Vec::new();
        for t in 0..dim {
            let row: Vec<(usize, u32)> =
                (0..dim).filter(|&s| !cols[s][t].is_zero()).map(|s| (s, cols[s][t].0)).collect();
            if row.len() != 1 || row[0] != (t, 1) {
                rows.push((t, row));
            }
        }
        Ok(SparseMap { rows })
    };
    let mut maps = Vec::new();
    for g in group_generators(shape.mu(), k) {
        maps.push(images(&|v| act_left(&g.realized, v))?);
    }
    for h in group_generators(shape.nu(), k) {
        maps.push(images(&|v| act_right(v, &h.realized))?);
    }
    maps.retain(|m| !m.rows.is_empty());
    Ok(maps)
}

/// Complete orbit partition; representatives are orbit minima in increasing order.
pub fn enumerate_orbits(shape: &CocentShape, budget: u64) -> Result<OrbitSet> {
    let space = Space::new(shape, budget)?;
    let mut seen = Bitset::new(space.size);
    let mut stack = Vec::new();
    let (mut reps, mut sizes) = (Vec::new(), Vec::new());
    let mut next = 0;
    while let Some(start) = seen.next_clear(next, space.size) {
        sizes.push(space.close(start, &mut seen, &mut stack, |_| {}));
        reps.push(space.element(shape, start));
        next = start + 1;
    }
    Ok(OrbitSet { shape: shape.clone(), reps, sizes, total: space.size })
}

/// Number of orbits only.
pub fn count_orbits(shape: &CocentShape, budget: u64) -> Result<usize> {
    let space = Space::new(shape, budget)?;
    let mut seen = Bitset::new(space.size);
    let mut stack = Vec::new();
    let (mut count, mut next) = (0, 0);
    while let Some(start) = seen.next_clear(next, space.size) {
        space.close(start, &mut seen, &mut stack, |_| {});
        count += 1;
        next = start + 1;
    }
    Ok(count)
}

/// The lexicographic minimum of the orbit of `v`.
pub fn canonical_form(v: &CocentElement, budget: u64) -> Result<CocentElement> {
    let shape = v.shape();
    let space = Space::new(shape, budget)?;
    let digits: Vec<u32> = v.flat().iter().map(|c| c.0).collect();
    let start = space.encode(&digits);
    let mut seen = Bitset::new(space.size);
    let mut min = start;
    space.close(start, &mut seen, &mut Vec::new(), |c| min = min.min(c));
    Ok(space.element(shape, min))
}

/// Which side of `v` a reduction step acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Row,
    Column,
}

#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub side: Side,
    pub generator: Generator,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub result: CocentElement,
    pub steps: Vec<ReductionStep>,
}

/// `(size, copy)` of position `i`.
fn size_copy(l: &Partition, i: usize) -> (usize, usize) {
    let size = l.parts()[i];
    (size, l.parts()[..i].iter().filter(|&&p| p == size).count())
}

/// Inverse of a unit `w` of `K[x]_n` (missing coefficients read as 0).
fn trunc_inverse(k: &Field, w: &[Fe], n: usize) -> Result<Vec<Fe>> {
    let w0 = k.inv(w.first().copied().unwrap_or(Fe::ZERO))?;
    let mut out = vec![Fe::ZERO; n];
    for t in 0..n {
        let mut s = if t == 0 { Fe::ONE } else { Fe::ZERO };
        for i in 1..=t.min(w.len().saturating_sub(1)) {
            s = k.sub(s, k.mul(w[i], out[t - i]));
        }
        out[t] = k.mul(s, w0);
    }
    Ok(out)
}

fn a_kind(i: usize, l: usize, j: usize, m: usize, a: Vec<Fe>) -> GeneratorKind {
    if i <= j {
        GeneratorKind::ALe { i, j, l, m, a }
    } else {
        GeneratorKind::AGe { i, j, l, m, a }
    }
}

struct Reducer {
    k: Field,
    mu: Partition,
    nu: Partition,
    v: CocentElement,
    steps: Vec<ReductionStep>,
}

impl Reducer {
    fn apply(&mut self, side: Side, kind: GeneratorKind) -> Result<()> {
        let g = match side {
            Side::Row => Generator::new(&self.mu, &self.k, kind)?,
            Side::Column => Generator::new(&self.nu, &self.k, kind)?,
        };
        self.v = match side {
            Side::Row => act_left(&g.realized, &self.v)?,
            Side::Column => act_right(&self.v, &g.realized)?,
        };
        self.steps.push(ReductionStep { side, generator: g });
        Ok(())
    }

    fn at(&self, i: usize, j: usize, a: usize) -> Fe {
        self.v.entry(i, j).get(a).copied().unwrap_or(Fe::ZERO)
    }

    /// Row `i` times a unit `a` of `K[x]_{mu_i}`.
    fn scale_row(&mut self, i: usize, a: Vec<Fe>) -> Result<()> {
        let (size, copy) = size_copy(&self.mu, i);
        self.apply(Side::Row, GeneratorKind::M { size, copy, a })
    }

    /// Row `i` += `x^{max(0, mu_i - mu_m)} a` times row `m`.
    fn add_row(&mut self, m: usize, i: usize, a: Vec<Fe>) -> Result<()> {
        let (si, li) = size_copy(&self.mu, i);
        let (sm, lm) = size_copy(&self.mu, m);
        self.apply(Side::Row, a_kind(si, li, sm, lm, a))
    }

    fn scale_col(&mut self, j: usize, a: Vec<Fe>) -> Result<()> {
        let (size, copy) = size_copy(&self.nu, j);
        self.apply(Side::Column, GeneratorKind::M { size, copy, a })
    }

    /// Column `k` += column `j` times `x^{max(0, nu_k - nu_j)} a`.
    fn add_col(&mut self, j: usize, k: usize, a: Vec<Fe>) -> Result<()> {
        let (sj, lj) = size_copy(&self.nu, j);
        let (sk, lk) = size_copy(&self.nu, k);
        self.apply(Side::Column, a_kind(sj, lj, sk, lk, a))
    }

    fn monomial(&self, len: usize, t: usize, c: Fe) -> Vec<Fe> {
        let mut a = vec![Fe::ZERO; len];
        a[t] = c;
        a
    }
}

/// Greedy pivoting for `mu = (r)` and `mu = (r, 1^a)`.
///
/// The constant rows of size 1 are brought to a partial permutation first
/// (columns may only be added to columns of equal or smaller size). The top
/// row is then made monomial by column scaling, with row scaling repairing
/// any pivot in a size-1 row, and its entries are killed greedily from the
/// lowest level and leftmost column, using only additions that leave the
/// size-1 rows untouched.
pub fn reduce_structured(v: &CocentElement) -> Result<Reduction> {
    let shape = v.shape();
    let mu = shape.mu().clone();
    let big = mu.parts().iter().filter(|&&p| p > 1).count();
    if big > 1 {
        return Err(Error::Unsupported(format!("structured reduction needs mu = (r) or (r,1^a), got ({mu})")));
    }
    let mut red = Reducer { k: shape.field().clone(), mu: mu.clone(), nu: shape.nu().clone(), v: v.clone(), steps: Vec::new() };
    let k = red.k.clone();
    let r = mu.largest();
    let top = if r > 1 { Some(0) } else { None };
    let ones: Vec<usize> = (0..mu.len()).filter(|&i| Some(i) != top).collect();
    let cols = shape.cols();
    let nu = shape.nu().parts().to_vec();

    // constant part carried by the size-1 rows
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; mu.len()];
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    for j in 0..cols {
        for &p in &ones {
            if let Some(pj) = pivot_of_row[p] {
                let c = red.at(p, j, 0);
                if !c.is_zero() {
                    red.add_col(pj, j, red.monomial(nu[j].min(nu[pj]), 0, k.neg(c)))?;
                }
            }
        }
        let Some(&p) = ones.iter().find(|&&p| pivot_of_row[p].is_none() && !red.at(p, j, 0).is_zero()) else {
            continue;
        };
        let inv = k.inv(red.at(p, j, 0))?;
        red.scale_row(p, vec![inv])?;
        for &o in &ones {
            let c = red.at(o, j, 0);
            if o != p && pivot_of_row[o].is_none() && !c.is_zero() {
                red.add_row(p, o, vec![k.neg(c)])?;
            }
        }
        pivot_of_row[p] = Some(j);
        pivot_of_col[j] = Some(p);
    }

    let Some(t) = top else {
        return Ok(Reduction { result: red.v, steps: red.steps });
    };
    // make each top-row entry a monomial
    let mut level: Vec<Option<usize>> = vec![None; cols];
    for j in 0..cols {
        let w = red.v.entry(t, j).to_vec();
        let Some(e) = w.iter().position(|c| !c.is_zero()) else { continue };
        level[j] = Some(e);
        if w[e] == Fe::ONE && w[e + 1..].iter().all(|c| c.is_zero()) {
            continue;
        }
        let a = trunc_inverse(&k, &w[e..], nu[j])?;
        let a0 = a[0];
        red.scale_col(j, a)?;
        if let Some(p) = pivot_of_col[j] {
            red.scale_row(p, vec![k.inv(a0)?])?;
        }
    }
    // top-level entries above a size-1 pivot
    for j in 0..cols {
        if let (Some(p), Some(e)) = (pivot_of_col[j], level[j]) {
            if e == r - 1 && nu[j] >= r {
                red.add_row(p, t, vec![k.neg(Fe::ONE)])?;
                level[j] = None;
            }
        }
    }
    // greedy kills
    let mut order: Vec<usize> = (0..cols).filter(|&j| level[j].is_some()).collect();
    order.sort_by_key(|&j| (level[j], j));
    for &j in &order {
        let Some(ej) = level[j] else { continue };
        for kk in 0..cols {
            let Some(ek) = level[kk] else { continue };
            if kk == j {
                continue;
            }
            let shift = nu[kk].saturating_sub(nu[j]);
            if ek < ej + shift {
                continue;
            }
            let exp = ek - ej - shift;
            if pivot_of_col[j].is_some() && shift == 0 && exp == 0 {
                continue;
            }
            red.add_col(j, kk, red.monomial(nu[j].min(nu[kk]), exp, k.neg(Fe::ONE)))?;
            level[kk] = None;
        }
    }
    Ok(Reduction { result: red.v, steps: red.steps })
}

/// Replays logged steps from `v`.
pub fn replay(v: &CocentElement, steps: &[ReductionStep]) -> Result<CocentElement> {
    let mut cur = v.clone();
    for s in steps {
        cur = match s.side {
            Side::Row => act_left(&s.generator.realized, &cur)?,
            Side::Column => act_right(&cur, &s.generator.realized)?,
        };
    }
    Ok(cur)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeKind {
    Finite,
    Infinite,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeVerdict {
    pub kind: TypeKind,
    pub rule: String,
}

fn finite_family(l: &Partition) -> Option<&'static str> {
    let p = l.parts();
    if l.total() < 6 {
        Some("size below 6")
    } else if p.iter().all(|&x| x <= 2) {
        Some("(2^a,1^b)")
    } else if p.iter().skip(1).all(|&x| x == 1) {
        Some("(r,1^b)")
    } else if p == [3, 2] {
        Some("(3,2)")
    } else {
        None
    }
}

fn contains_four_two(l: &Partition) -> bool {
    let p = l.parts();
    p.len() >= 2 && p[0] >= 4 && p[1] >= 2
}

pub fn type_classify(mu: &Partition, nu: &Partition) -> TypeVerdict {
    for (name, side) in [("mu", mu), ("nu", nu)] {
        if let Some(rule) = finite_family(side) {
            return TypeVerdict { kind: TypeKind::Finite, rule: format!("{name} is {rule}") };
        }
    }
    if contains_four_two(mu) && contains_four_two(nu) {
        return TypeVerdict { kind: TypeKind::Infinite, rule: String::from("both sides contain the (4,2) pattern") };
    }
    TypeVerdict { kind: TypeKind::Unknown, rule: String::from("no family applies") }
}

/// For `mu = nu = (4,2)` and `v = [[a x^2 + .., b x + ..], [c x + .., d + ..]]`
/// with `a, b, c, d` nonzero (lower coefficients zero): `a b^-1 c^-1 d`.
pub fn wild_invariant(v: &CocentElement) -> Option<Fe> {
    let sh = v.shape();
    if sh.mu().parts() != [4, 2] || sh.nu().parts() != [4, 2] {
        return None;
    }
    let k = sh.field();
    let e = |i, j| v.entry(i, j);
    let lead = |w: &[Fe], at: usize| -> Option<Fe> {
        (w[..at].iter().all(|c| c.is_zero()) && !w[at].is_zero()).then_some(w[at])
    };
    let a = lead(e(0, 0), 2)?;
    let b = lead(e(0, 1), 1)?;
    let c = lead(e(1, 0), 1)?;
    let d = lead(e(1, 1), 0)?;
    Some(k.mul(k.mul(a, d), k.inv(k.mul(b, c)).ok()?))
}

/// The generators acting on each side, for callers that drive their own walks.
pub fn side_generators(shape: &CocentShape) -> (Vec<TruncAlgElement>, Vec<TruncAlgElement>) {
    let k = shape.field();
    (
        group_generators(shape.mu(), k).into_iter().map(|g| g.realized).collect(),
        group_generators(shape.nu(), k).into_iter().map(|g| g.realized).collect(),
    )
}
