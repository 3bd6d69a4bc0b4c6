//! Generalized Jordan normal form: `A ~ (+)_p J_{lambda_p}(C_p)`.
//!
//! Jordan blocks carry the companion matrix on the diagonal and identity
//! blocks on the block *sub*diagonal. The companion matrix `C_p` is the
//! matrix of multiplication by a root of `p` in the basis `1, a, .., a^{d-1}`
//! acting on column vectors.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::partition::Partition;
use crate::poly::{self, Poly};

pub fn companion(k: &Field, p: &Poly) -> Matrix {
    let d = p.degree().unwrap_or(0);
    let mut c = Matrix::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            c.set(i + 1, i, Fe::ONE);
        }
        c.set(i, d - 1, k.neg(p.coeff(i)));
    }
    c
}

fn check_irreducible(k: &Field, p: &Poly) -> Result<()> {
    if p.is_monic() && poly::is_irreducible(k, p) {
        Ok(())
    } else {
        Err(Error::NotIrreducible)
    }
}

/// `J_n(C_p)`.
pub fn jordan_block(k: &Field, p: &Poly, n: usize) -> Result<Matrix> {
    check_irreducible(k, p)?;
    Ok(jordan_block_unchecked(k, p, n))
}

fn jordan_block_unchecked(k: &Field, p: &Poly, n: usize) -> Matrix {
    let c = companion(k, p);
    let d = c.rows();
    let mut j = Matrix::zeros(n * d, n * d);
    for b in 0..n {
        j.set_block(b * d, b * d, &c);
        if b + 1 < n {
            j.set_block((b + 1) * d, b * d, &Matrix::identity(d));
        }
    }
    j
}

/// `J_lambda(C_p) = (+)_i J_{lambda_i}(C_p)`.
pub fn jordan_matrix(k: &Field, p: &Poly, lambda: &Partition) -> Matrix {
    let blocks: Vec<Matrix> = lambda.parts().iter().map(|&n| jordan_block_unchecked(k, p, n)).collect();
    Matrix::direct_sum(&blocks)
}

/// Generalized Jordan data: distinct monic irreducibles with partitions,
/// sorted by degree and then coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Gjnf {
    factors: Vec<(Poly, Partition)>,
}

impl Gjnf {
    pub fn new(k: &Field, mut factors: Vec<(Poly, Partition)>) -> Result<Gjnf> {
        for (p, l) in &factors {
            check_irreducible(k, p)?;
            if l.is_empty() {
                return Err(Error::InvalidPartition("empty partition in normal form".into()));
            }
        }
        factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Invalid("repeated generalized eigenvalue".into()));
        }
        Ok(Gjnf { factors })
    }

    pub fn factors(&self) -> &[(Poly, Partition)] {
        &self.factors
    }

    pub fn dimension(&self) -> usize {
        self.factors.iter().map(|(p, l)| l.total() * p.degree().unwrap_or(0)).sum()
    }

    pub fn partition_of(&self, p: &Poly) -> Option<&Partition> {
        self.factors.iter().find(|(q, _)| q == p).map(|(_, l)| l)
    }

    /// Row offset of the block for `p` inside [`assemble`]'s output.
    pub fn offset_of(&self, p: &Poly) -> Option<usize> {
        let mut off = 0;
        for (q, l) in &self.factors {
            if q == p {
                return Some(off);
            }
            off += l.total() * q.degree().unwrap_or(0);
        }
        None
    }

    pub fn is_invertible(&self) -> bool {
        self.factors.iter().all(|(p, _)| *p != Poly::t())
    }
}

/// Reads the normal form off the ranks of `p(A)^i`: the number of parts
/// `>= i` in `lambda_p` is `(rank p(A)^{i-1} - rank p(A)^i) / deg p`.
pub fn gjnf(k: &Field, a: &Matrix) -> Result<Gjnf> {
    let cp = a.char_poly(k)?;
    let n = a.rows();
    let mut factors = Vec::new();
    for (p, mult) in poly::factor(k, &cp)? {
        let d = p.degree().expect("irreducible");
        let mut prev = n;
        let mut at_least = Vec::new();
        for r in crate::matrix::rank_profile(k, a, &p, mult as usize)? {
            let c = (prev - r) / d;
            if c == 0 {
                break;
            }
            at_least.push(c);
            prev = r;
        }
        factors.push((p, Partition::from_unsorted(at_least).conjugate()));
    }
    Ok(Gjnf { factors })
}

pub fn assemble(k: &Field, g: &Gjnf) -> Matrix {
    let blocks: Vec<Matrix> = g.factors.iter().map(|(p, l)| jordan_matrix(k, p, l)).collect();
    Matrix::direct_sum(&blocks)
}

/// Every normal form of dimension `n`, each exactly once, in a fixed order.
pub fn enumerate_gjnf(k: &Field, n: usize, invertible_only: bool) -> Vec<Gjnf> {
    let irr: Vec<Poly> = (1..=n).flat_map(|d| poly::irreducibles(k, d, invertible_only)).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    enumerate_rec(&irr, 0, n, &mut cur, &mut out);
    out
}

fn enumerate_rec(
    irr: &[Poly],
    start: usize,
    remaining: usize,
    cur: &mut Vec<(Poly, Partition)>,
    out: &mut Vec<Gjnf>,
) {
    if remaining == 0 {
        out.push(Gjnf { factors: cur.clone() });
        return;
    }
    for (i, p) in irr.iter().enumerate().skip(start) {
        let d = p.degree().expect("irreducible");
        if d > remaining {
            break;
        }
        for s in 1..=remaining / d {
            for l in Partition::all(s) {
                cur.push((p.clone(), l));
                enumerate_rec(irr, i + 1, remaining - s * d, cur, out);
                cur.pop();
            }
        }
    }
}

/// The field `K = k[a]/(p)` attached to a generalized eigenvalue `p`.
/// For linear `p` this is `k` itself.
#[derive(Clone, Debug)]
pub struct EigenField {
    base: Field,
    p: Poly,
    big: Field,
}

impl EigenField {
    pub fn new(k: &Field, p: &Poly) -> Result<EigenField> {
        check_irreducible(k, p)?;
        let big = if p.degree() == Some(1) { k.clone() } else { Field::extension(k, p)? };
        Ok(EigenField { base: k.clone(), p: p.clone(), big })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn poly(&self) -> &Poly {
        &self.p
    }

    pub fn field(&self) -> &Field {
        &self.big
    }

    pub fn degree(&self) -> usize {
        self.p.degree().expect("irreducible")
    }

    /// Matrix over `k` of multiplication by `c` on `K`, in the basis
    /// `1, a, .., a^{d-1}`; `a` itself maps to `C_p`.
    pub fn mult_matrix(&self, c: Fe) -> Matrix {
        let d = self.degree();
        if d == 1 {
            return Matrix::from_vec(1, 1, alloc::vec![c]).expect("1x1");
        }
        let alpha = self.big.generator().expect("extension");
        let mut m = Matrix::zeros(d, d);
        let mut basis = Fe::ONE;
        for col in 0..d {
            let image = self.big.mul(c, basis);
            for (row, x) in self.big.coords(image).into_iter().enumerate() {
                m.set(row, col, x);
            }
            basis = self.big.mul(basis, alpha);
        }
        m
    }

    /// The root of `p` in `K`.
    pub fn root(&self) -> Fe {
        match self.p.degree() {
            Some(1) => self.base.neg(self.p.coeff(0)),
            _ => self.big.generator().expect("extension"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn poly(k: &Field, s: &str) -> Poly {
        Poly::parse(k, s).unwrap()
    }

    #[test]
    fn blocks() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let j = jordan_block(&f2, &poly(&f2, "1,1"), 2).unwrap();
        assert_eq!(j.data(), &[Fe(1), Fe(0), Fe(1), Fe(1)]);
        let j = jordan_block(&f3, &poly(&f3, "1,0,1"), 2).unwrap();
        let c = companion(&f3, &poly(&f3, "1,0,1"));
        assert_eq!(c.data(), &[Fe(0), Fe(2), Fe(1), Fe(0)]);
        assert_eq!(j.submatrix(0, 0, 2, 2), c);
        assert_eq!(j.submatrix(2, 2, 2, 2), c);
        assert_eq!(j.submatrix(2, 0, 2, 2), Matrix::identity(2));
        assert!(j.submatrix(0, 2, 2, 2).is_zero());
        assert!(jordan_block(&f2, &poly(&f2, "1,0,1"), 1).is_err());
        // C_p is annihilated by p
        assert!(c.eval_poly(&f3, &poly(&f3, "1,0,1")).unwrap().is_zero());
        let e = EigenField::new(&f3, &poly(&f3, "1,0,1")).unwrap();
        assert_eq!(e.mult_matrix(e.root()), c);
        assert_eq!(e.field().order(), 9);
    }

    #[test]
    fn normal_forms() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let g = gjnf(&f2, &Matrix::identity(3)).unwrap();
        assert_eq!(g.factors(), &[(poly(&f2, "1,1"), Partition::new(vec![1, 1, 1]).unwrap())]);
        assert_eq!(assemble(&f2, &g), Matrix::identity(3));
        let c = companion(&f2, &poly(&f2, "1,1,1"));
        assert_eq!(gjnf(&f2, &c).unwrap().factors(), &[(poly(&f2, "1,1,1"), Partition::new(vec![1]).unwrap())]);
        let swap = Matrix::from_vec(2, 2, vec![Fe(0), Fe(1), Fe(1), Fe(0)]).unwrap();
        let g = gjnf(&f3, &swap).unwrap();
        assert_eq!(g.factors().len(), 2);
        assert_eq!(g.factors()[0].0, poly(&f3, "1,1"));
        assert_eq!(g.factors()[1].0, poly(&f3, "2,1"));
        let g = Gjnf::new(&f3, vec![(poly(&f3, "1,1"), Partition::new(vec![2]).unwrap())]).unwrap();
        assert_eq!(assemble(&f3, &g).data(), &[Fe(2), Fe(0), Fe(1), Fe(2)]);
    }

    #[test]
    fn enumeration_counts() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert_eq!(enumerate_gjnf(&f3, 1, true).len(), 2);
        assert_eq!(enumerate_gjnf(&f2, 2, true).len(), 3);
        assert_eq!(enumerate_gjnf(&f2, 2, false).len(), 6);
        assert_eq!(enumerate_gjnf(&f2, 0, true), vec![Gjnf::default()]);
        for g in enumerate_gjnf(&f3, 3, false) {
            assert_eq!(g.dimension(), 3);
            assert_eq!(gjnf(&f3, &assemble(&f3, &g)).unwrap(), g);
        }
    }

    #[test]
    fn rank_spectrum_of_assembled_forms() {
        let f2 = Field::prime(2).unwrap();
        for g in enumerate_gjnf(&f2, 4, false) {
            let a = assemble(&f2, &g);
            for (p, l) in g.factors() {
                let d = p.degree().unwrap();
                let ranks = crate::matrix::rank_profile(&f2, &a, p, l.largest() + 1).unwrap();
                for (i, r) in ranks.into_iter().enumerate() {
                    let lost: usize = l.parts().iter().map(|&part| part.min(i + 1)).sum();
                    assert_eq!(r, 4 - d * lost);
                }
            }
        }
    }
}
