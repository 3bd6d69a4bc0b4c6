//! Conjugacy classes of `P^(m,n)(F_q)` and `AGL_n(F_q)`.
//!
//! A class of `P^(m,n)` is a Levi class `(A, B)` (a pair of normal forms)
//! together with an orbit of `C_L(A (+) B)` on the cocentralizer, which
//! splits into one matrix problem per generalized eigenvalue shared by `A`
//! and `B`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::canonical::{assemble, enumerate_gjnf, EigenField, Gjnf};
use crate::cocentralizer::{lift, reduce_levi_pair, CocentElement, CocentShape};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matproblem::{count_orbits, enumerate_orbits, type_classify, OrbitSet, TypeKind, DEFAULT_BUDGET};
use crate::matrix::Matrix;
use crate::partition::Partition;
use crate::poly::Poly;

/// How orbit counts of a matrix problem over `K` are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Counting {
    /// Enumerate over `K` itself.
    Exact,
    /// Problems of finite type are counted once over `F_2` (their orbit
    /// count does not depend on the field); the rest are enumerated over `K`.
    FieldIndependent,
}

/// Memoized orbit data shared across Levi pairs and calls.
pub struct OrbitCache {
    pub budget: u64,
    pub counting: Counting,
    counts: BTreeMap<(Partition, Partition, Vec<u32>), usize>,
    sets: BTreeMap<(Partition, Partition, Vec<u32>), OrbitSet>,
    fields: BTreeMap<Vec<u32>, EigenField>,
    f2: Field,
}

impl Default for OrbitCache {
    fn default() -> Self {
        OrbitCache::new(DEFAULT_BUDGET, Counting::FieldIndependent)
    }
}

fn field_key(k: &Field, p: &Poly) -> Vec<u32> {
    let mut key = vec![k.order()];
    key.extend(k.modulus().iter().map(|c| c.0));
    key.extend(p.coeffs().iter().map(|c| c.0));
    key
}

impl OrbitCache {
    pub fn new(budget: u64, counting: Counting) -> OrbitCache {
        OrbitCache {
            budget,
            counting,
            counts: BTreeMap::new(),
            sets: BTreeMap::new(),
            fields: BTreeMap::new(),
            f2: Field::prime(2).expect("2 is prime"),
        }
    }

    pub fn eigen_field(&mut self, k: &Field, p: &Poly) -> Result<EigenField> {
        let key = field_key(k, p);
        if let Some(e) = self.fields.get(&key) {
            return Ok(e.clone());
        }
        let e = EigenField::new(k, p)?;
        self.fields.insert(key, e.clone());
        Ok(e)
    }

    /// Orbit count of `M[K,x]_{mu x nu}` with `K = k[t]/(p)`.
    pub fn orbit_count(&mut self, k: &Field, p: &Poly, mu: &Partition, nu: &Partition) -> Result<usize> {
        let finite = type_classify(mu, nu).kind == TypeKind::Finite;
        let key = if self.counting == Counting::FieldIndependent && finite {
            (mu.clone(), nu.clone(), vec![2])
        } else {
            (mu.clone(), nu.clone(), field_key(k, p))
        };
        if let Some(&c) = self.counts.get(&key) {
            return Ok(c);
        }
        let big = if key.2 == [2] { self.f2.clone() } else { self.eigen_field(k, p)?.field().clone() };
        let c = count_orbits(&CocentShape::new(mu, nu, &big)?, self.budget)?;
        self.counts.insert(key, c);
        Ok(c)
    }

    pub fn orbit_set(&mut self, ef: &EigenField, mu: &Partition, nu: &Partition) -> Result<OrbitSet> {
        let key = (mu.clone(), nu.clone(), field_key(ef.base(), ef.poly()));
        if let Some(s) = self.sets.get(&key) {
            return Ok(s.clone());
        }
        let s = enumerate_orbits(&CocentShape::new(mu, nu, ef.field())?, self.budget)?;
        self.sets.insert(key, s.clone());
        Ok(s)
    }
}

/// Pairs of `GL_m` and `GL_n` normal forms.
pub fn levi_reps(m: usize, n: usize, k: &Field) -> Vec<(Gjnf, Gjnf)> {
    let a = enumerate_gjnf(k, m, true);
    let b = enumerate_gjnf(k, n, true);
    a.iter().flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

/// `c_n`, the number of classes of `GL_n(F_q)` (`c_0 = 1`).
pub fn gl_class_count(n: usize, k: &Field) -> usize {
    enumerate_gjnf(k, n, true).len()
}

/// Rejects `m = 0` or `n = 0`.
pub fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Invalid("m and n must be positive".into()));
    }
    Ok(())
}

/// Classes of `P^(m,n)` lying over one Levi class.
pub fn pair_class_count(k: &Field, ga: &Gjnf, gb: &Gjnf, cache: &mut OrbitCache) -> Result<u128> {
    let mut prod: u128 = 1;
    for (p, mu) in ga.factors() {
        if let Some(nu) = gb.partition_of(p) {
            prod *= cache.orbit_count(k, p, mu, nu)? as u128;
        }
    }
    Ok(prod)
}

pub fn parabolic_class_count(m: usize, n: usize, k: &Field, cache: &mut OrbitCache) -> Result<u128> {
    check_dims(m, n)?;
    let b_forms = enumerate_gjnf(k, n, true);
    let mut total: u128 = 0;
    for ga in enumerate_gjnf(k, m, true) {
        for gb in &b_forms {
            total += pair_class_count(k, &ga, gb, cache)?;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct ClassRep {
    pub levi_a: Gjnf,
    pub levi_b: Gjnf,
    /// Orbit representative for each shared eigenvalue.
    pub blocks: Vec<(Poly, CocentElement)>,
    /// `[[A, V], [0, B]]`.
    pub matrix: Matrix,
}

/// `[[A, V], [0, B]]` with `V` the sum of lifted blocks at the eigenvalue offsets.
pub fn assemble_class(k: &Field, ga: &Gjnf, gb: &Gjnf, blocks: &[(EigenField, CocentElement)]) -> Result<Matrix> {
    let a = assemble(k, ga);
    let b = assemble(k, gb);
    let (m, n) = (a.rows(), b.rows());
    let mut v = Matrix::zeros(m, n);
    for (ef, rep) in blocks {
        let (Some(r0), Some(c0)) = (ga.offset_of(ef.poly()), gb.offset_of(ef.poly())) else {
            return Err(Error::Invalid("block eigenvalue not shared by both factors".into()));
        };
        v.set_block(r0, c0, &lift(rep, ef)?);
    }
    Matrix::from_blocks(&[vec![a, v], vec![Matrix::zeros(n, m), b]])
}

/// Representatives of the classes lying over the Levi class `(ga, gb)`.
pub fn pair_class_reps(k: &Field, ga: &Gjnf, gb: &Gjnf, cache: &mut OrbitCache) -> Result<Vec<ClassRep>> {
    let probs = reduce_levi_pair(k, ga, gb)?;
    let mut sets = Vec::with_capacity(probs.len());
    for pr in &probs {
        let ef = cache.eigen_field(k, pr.poly())?;
        sets.push((ef.clone(), cache.orbit_set(&ef, &pr.mu, &pr.nu)?));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; sets.len()];
    loop {
        let blocks: Vec<(EigenField, CocentElement)> =
            sets.iter().zip(&idx).map(|((ef, s), &i)| (ef.clone(), s.reps[i].clone())).collect();
        let matrix = assemble_class(k, ga, gb, &blocks)?;
        out.push(ClassRep {
            levi_a: ga.clone(),
            levi_b: gb.clone(),
            blocks: blocks.into_iter().map(|(ef, r)| (ef.poly().clone(), r)).collect(),
            matrix,
        });
        // odometer over the per-eigenvalue orbit lists
        let mut t = 0;
        while t < idx.len() {
            idx[t] += 1;
            if idx[t] < sets[t].1.count() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
        if t == idx.len() {
            return Ok(out);
        }
    }
}

pub fn parabolic_class_reps(m: usize, n: usize, k: &Field, cache: &mut OrbitCache) -> Result<Vec<ClassRep>> {
    check_dims(m, n)?;
    let mut out = Vec::new();
    for (ga, gb) in levi_reps(m, n, k) {
        out.extend(pair_class_reps(k, &ga, &gb, cache)?);
    }
    Ok(out)
}

/// Classes of `AGL_n` inside `GL_{n+1}` as `[[1, w], [0, g]]`: for each
/// `GL_n` form `g = N (+) J_lambda(1)`, the form with `w = 0` and, for each
/// distinct part size `d` of `lambda`, `w` with a single 1 at the last
/// coordinate of the first Jordan block of size `d` for eigenvalue 1.
pub fn agl_class_reps(n: usize, k: &Field) -> Result<Vec<Matrix>> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let t1 = Poly::linear(k, Fe::ONE);
    let mut out = Vec::new();
    for g in enumerate_gjnf(k, n, true) {
        let a = assemble(k, &g);
        let with = |w: Matrix| Matrix::from_blocks(&[vec![Matrix::identity(1), w], vec![Matrix::zeros(n, 1), a.clone()]]);
        out.push(with(Matrix::zeros(1, n))?);
        if let (Some(lambda), Some(off)) = (g.partition_of(&t1), g.offset_of(&t1)) {
            for (d, _) in lambda.multiplicities() {
                let first = lambda.index_of(d, 0).expect("present");
                let start: usize = lambda.parts()[..first].iter().sum();
                let mut w = Matrix::zeros(1, n);
                w.set(0, off + start + d - 1, Fe::ONE);
                out.push(with(w)?);
            }
        }
    }
    Ok(out)
}

/// Counted from the construction: one class per form plus one per distinct
/// Jordan block size for eigenvalue 1.
pub fn agl_class_count(n: usize, k: &Field) -> Result<usize> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let t1 = Poly::linear(k, Fe::ONE);
    Ok(enumerate_gjnf(k, n, true)
        .iter()
        .map(|g| 1 + g.partition_of(&t1).map_or(0, |l| l.multiplicities().len()))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levi_pairs_and_gl_counts() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert_eq!(levi_reps(1, 1, &f2).len(), 1);
        assert_eq!(levi_reps(1, 2, &f2).len(), 3);
        assert_eq!(levi_reps(1, 1, &f3).len(), 4);
        assert_eq!(gl_class_count(0, &f2), 1);
        for q in [2, 3, 4, 5, 7] {
            assert_eq!(gl_class_count(1, &Field::of_order(q).unwrap()), q as usize - 1);
        }
        assert_eq!(gl_class_count(2, &f2), 3);
        // q^2 - 1 classes in GL_2(F_q)
        assert_eq!(gl_class_count(2, &Field::of_order(4).unwrap()), 15);
    }

    #[test]
    fn parabolic_counts() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let mut cache = OrbitCache::default();
        assert_eq!(parabolic_class_count(1, 1, &f2, &mut cache).unwrap(), 2);
        assert_eq!(parabolic_class_count(1, 1, &f3, &mut cache).unwrap(), 6);
        assert_eq!(parabolic_class_count(1, 2, &f2, &mut cache).unwrap(), 5);
        let mut exact = OrbitCache::new(DEFAULT_BUDGET, Counting::Exact);
        for (m, n, q) in [(1, 2, 3), (2, 2, 2), (2, 1, 4), (1, 3, 2)] {
            let k = Field::of_order(q).unwrap();
            let fast = parabolic_class_count(m, n, &k, &mut cache).unwrap();
            assert_eq!(fast, parabolic_class_count(m, n, &k, &mut exact).unwrap());
            assert_eq!(fast, parabolic_class_reps(m, n, &k, &mut cache).unwrap().len() as u128);
        }
    }

    #[test]
    fn parabolic_reps() {
        let f2 = Field::prime(2).unwrap();
        let reps = parabolic_class_reps(1, 1, &f2, &mut OrbitCache::default()).unwrap();
        let ms: Vec<&[Fe]> = reps.iter().map(|r| r.matrix.data()).collect();
        assert_eq!(ms, vec![&[Fe(1), Fe(0), Fe(0), Fe(1)][..], &[Fe(1), Fe(1), Fe(0), Fe(1)][..]]);
        let f3 = Field::prime(3).unwrap();
        for r in parabolic_class_reps(2, 2, &f3, &mut OrbitCache::default()).unwrap() {
            assert!(r.matrix.is_invertible(&f3));
            assert_eq!(r.matrix.submatrix(0, 0, 2, 2), assemble(&f3, &r.levi_a));
            assert_eq!(r.matrix.submatrix(2, 2, 2, 2), assemble(&f3, &r.levi_b));
            assert!(r.matrix.submatrix(2, 0, 2, 2).is_zero());
        }
    }

    #[test]
    fn agl_counts() {
        for q in [2, 3] {
            let k = Field::of_order(q).unwrap();
            for n in 1..=4 {
                let sum: usize = (0..=n).map(|d| gl_class_count(n - d, &k)).sum();
                assert_eq!(agl_class_count(n, &k).unwrap(), sum);
                if n <= 3 {
                    assert_eq!(agl_class_reps(n, &k).unwrap().len(), sum);
                }
            }
        }
        let f2 = Field::prime(2).unwrap();
        assert_eq!(agl_class_count(1, &f2).unwrap(), 2);
        assert_eq!(agl_class_count(2, &f2).unwrap(), 5);
        let reps = agl_class_reps(1, &f2).unwrap();
        assert_eq!(reps[0].data(), &[Fe(1), Fe(0), Fe(0), Fe(1)]);
        assert_eq!(reps[1].data(), &[Fe(1), Fe(1), Fe(0), Fe(1)]);
    }
}
