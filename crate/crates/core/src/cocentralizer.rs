//! The matrix problem `M[K,x]_{mu x nu}` attached to a Levi representative
//! `h = A (+) B` and a generalized eigenvalue shared by `A` and `B`.
//!
//! Conjugating `[[A, v], [0, B]]` by the unipotent radical changes `v` by
//! `wB - Aw`, so classes over `h` are orbits of `C_L(h)` on the quotient
//! `U/[U,h]`. For `A = J_mu(C_p)`, `B = J_nu(C_p)` that quotient is the grid
//! of truncated polynomials with `(i,j)` entry in `K[x]_{min(mu_i, nu_j)}`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::canonical::{EigenField, Gjnf};
use crate::centralizer::{d_twist, mul_acc, TruncAlgElement};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::partition::Partition;
use crate::poly::Poly;

#[derive(Clone, Debug)]
pub struct CocentShape {
    mu: Partition,
    nu: Partition,
    k: Field,
}

impl PartialEq for CocentShape {
    fn eq(&self, o: &Self) -> bool {
        self.mu == o.mu && self.nu == o.nu && self.k.order() == o.k.order()
    }
}

impl Eq for CocentShape {}

impl CocentShape {
    pub fn new(mu: &Partition, nu: &Partition, k: &Field) -> Result<CocentShape> {
        if mu.is_empty() || nu.is_empty() {
            return Err(Error::InvalidPartition("empty partition in matrix problem".into()));
        }
        Ok(CocentShape { mu: mu.clone(), nu: nu.clone(), k: k.clone() })
    }

    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    pub fn nu(&self) -> &Partition {
        &self.nu
    }

    pub fn field(&self) -> &Field {
        &self.k
    }

    pub fn rows(&self) -> usize {
        self.mu.len()
    }

    pub fn cols(&self) -> usize {
        self.nu.len()
    }

    /// `l_ij = min(mu_i, nu_j)`.
    pub fn l(&self, i: usize, j: usize) -> usize {
        self.mu.parts()[i].min(self.nu.parts()[j])
    }

    pub fn grid(&self) -> Vec<Vec<usize>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.l(i, j)).collect()).collect()
    }

    /// Dimension over `K`.
    pub fn dim(&self) -> usize {
        self.grid().iter().flatten().sum()
    }

    /// Start of entry `(i,j)` in the flat coefficient vector.
    pub fn entry_start(&self, i: usize, j: usize) -> usize {
        let mut off = 0;
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                if (r, c) == (i, j) {
                    return off;
                }
                off += self.l(r, c);
            }
        }
        off
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocentElement {
    shape: CocentShape,
    entries: Vec<Vec<Fe>>,
}

impl CocentElement {
    pub fn zero(shape: &CocentShape) -> CocentElement {
        let entries = shape.grid().into_iter().flatten().map(|l| vec![Fe::ZERO; l]).collect();
        CocentElement { shape: shape.clone(), entries }
    }

    /// Entries in row-major order, each low-to-high.
    pub fn from_flat(shape: &CocentShape, flat: &[Fe]) -> Result<CocentElement> {
        if flat.len() != shape.dim() {
            return Err(Error::Dimension(format!("expected {} coefficients, got {}", shape.dim(), flat.len())));
        }
        let mut e = Self::zero(shape);
        let mut it = flat.iter();
        for w in &mut e.entries {
            for c in w.iter_mut() {
                *c = shape.k.check(*it.next().expect("length checked"))?;
            }
        }
        Ok(e)
    }

    pub fn from_entries(shape: &CocentShape, entries: Vec<Vec<Vec<Fe>>>) -> Result<CocentElement> {
        if entries.len() != shape.rows() || entries.iter().any(|r| r.len() != shape.cols()) {
            return Err(Error::Dimension(format!("expected a {}x{} grid", shape.rows(), shape.cols())));
        }
        let mut e = Self::zero(shape);
        for (i, row) in entries.into_iter().enumerate() {
            for (j, mut coeffs) in row.into_iter().enumerate() {
                let l = shape.l(i, j);
                if coeffs.len() > l {
                    if coeffs[l..].iter().any(|c| !c.is_zero()) {
                        return Err(Error::Invalid(format!("entry ({i},{j}) has degree >= {l}")));
                    }
                    coeffs.truncate(l);
                }
                coeffs.resize(l, Fe::ZERO);
                for &c in &coeffs {
                    shape.k.check(c)?;
                }
                e.entries[i * shape.cols() + j] = coeffs;
            }
        }
        Ok(e)
    }

    pub fn from_index(shape: &CocentShape, mut n: u64) -> CocentElement {
        let q = shape.k.order() as u64;
        let flat: Vec<Fe> = (0..shape.dim())
            .map(|_| {
                let c = Fe((n % q) as u32);
                n /= q;
                c
            })
            .collect();
        Self::from_flat(shape, &flat).expect("in range")
    }

    pub fn shape(&self) -> &CocentShape {
        &self.shape
    }

    pub fn flat(&self) -> Vec<Fe> {
        self.entries.concat()
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Fe] {
        &self.entries[i * self.shape.cols() + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut [Fe] {
        let c = self.shape.cols();
        &mut self.entries[i * c + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|c| c.is_zero())
    }
}

fn check_acting(v: &CocentElement, g: &TruncAlgElement, side: &Partition) -> Result<()> {
    if g.lambda() != side {
        return Err(Error::Dimension(format!("acting element has shape {}, expected {}", g.lambda(), side)));
    }
    if g.field().order() != v.shape.k.order() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// `(g v)_ij = sum_k g_ik v_kj mod x^{l_ij}`.
pub fn act_left(g: &TruncAlgElement, v: &CocentElement) -> Result<CocentElement> {
    check_acting(v, g, &v.shape.mu)?;
    let sh = &v.shape;
    let mut out = CocentElement::zero(sh);
    for i in 0..sh.rows() {
        for j in 0..sh.cols() {
            let l = sh.l(i, j);
            let acc = out.entry_mut(i, j);
            for m in 0..sh.rows() {
                mul_acc(&sh.k, acc, 0, g.window(i, m), g.offset(i, m), v.entry(m, j), 0, l);
            }
        }
    }
    Ok(out)
}

/// `(v D(h))_ij = sum_k v_ik D(h)_kj mod x^{l_ij}`.
pub fn act_right(v: &CocentElement, h: &TruncAlgElement) -> Result<CocentElement> {
    check_acting(v, h, &v.shape.nu)?;
    let sh = &v.shape;
    let dh = d_twist(h);
    let mut out = CocentElement::zero(sh);
    for i in 0..sh.rows() {
        for j in 0..sh.cols() {
            let l = sh.l(i, j);
            let acc = out.entry_mut(i, j);
            for m in 0..sh.cols() {
                mul_acc(&sh.k, acc, 0, v.entry(i, m), 0, dh.window(m, j), dh.offset(m, j), l);
            }
        }
    }
    Ok(out)
}

/// One shared generalized eigenvalue of a Levi pair.
#[derive(Clone, Debug)]
pub struct EigenBlockProblem {
    pub eigen: EigenField,
    pub mu: Partition,
    pub nu: Partition,
}

impl EigenBlockProblem {
    pub fn poly(&self) -> &Poly {
        self.eigen.poly()
    }

    pub fn shape(&self) -> CocentShape {
        CocentShape::new(&self.mu, &self.nu, self.eigen.field()).expect("nonempty partitions")
    }
}

/// Eigenvalues occurring in only one of `A`, `B` contribute nothing.
pub fn reduce_levi_pair(k: &Field, ga: &Gjnf, gb: &Gjnf) -> Result<Vec<EigenBlockProblem>> {
    let mut out = Vec::new();
    for (p, mu) in ga.factors() {
        if let Some(nu) = gb.partition_of(p) {
            out.push(EigenBlockProblem { eigen: EigenField::new(k, p)?, mu: mu.clone(), nu: nu.clone() });
        }
    }
    Ok(out)
}

fn starts(l: &Partition) -> Vec<usize> {
    l.parts()
        .iter()
        .scan(0, |acc, &p| {
            let s = *acc;
            *acc += p;
            Some(s)
        })
        .collect()
}

fn check_lift(v: &CocentElement, ef: &EigenField) -> Result<()> {
    if v.shape.k.order() != ef.field().order() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

fn place(out: &mut Matrix, k: &Field, r0: usize, c0: usize, m: &Matrix) {
    for u in 0..m.rows() {
        for w in 0..m.cols() {
            let cur = out.get(r0 + u, c0 + w);
            out.set(r0 + u, c0 + w, k.add(cur, m.get(u, w)));
        }
    }
}

/// A section of `U -> U/[U,h]`: the coefficient `c` of `x^a` in entry
/// `(i,j)` becomes multiplication by `c` placed in block-row `a` and the
/// last block-column of the `mu_i x nu_j` block.
pub fn lift(v: &CocentElement, ef: &EigenField) -> Result<Matrix> {
    check_lift(v, ef)?;
    let sh = &v.shape;
    let (k, d) = (ef.base(), ef.degree());
    let (rs, cs) = (starts(&sh.mu), starts(&sh.nu));
    let mut out = Matrix::zeros(sh.mu.total() * d, sh.nu.total() * d);
    for i in 0..sh.rows() {
        for j in 0..sh.cols() {
            let last = cs[j] + sh.nu.parts()[j] - 1;
            for (a, &c) in v.entry(i, j).iter().enumerate() {
                if !c.is_zero() {
                    place(&mut out, k, (rs[i] + a) * d, last * d, &ef.mult_matrix(c));
                }
            }
        }
    }
    Ok(out)
}

/// The bottom-aligned diagonal placement: `x^a` in entry `(i,j)` becomes the
/// pattern `X^{a + max(0, mu_i - nu_j)}`. Useful for display; it is not a
/// complement of `[U,h]` in general (for `mu = nu = (2)` the identity block
/// is `2x`), so [`lift`] is the one used for class representatives.
pub fn lift_diagonal(v: &CocentElement, ef: &EigenField) -> Result<Matrix> {
    check_lift(v, ef)?;
    let sh = &v.shape;
    let (k, d) = (ef.base(), ef.degree());
    let (rs, cs) = (starts(&sh.mu), starts(&sh.nu));
    let mut out = Matrix::zeros(sh.mu.total() * d, sh.nu.total() * d);
    for i in 0..sh.rows() {
        for j in 0..sh.cols() {
            let (mi, nj) = (sh.mu.parts()[i], sh.nu.parts()[j]);
            let shift = mi.saturating_sub(nj);
            for (a, &c) in v.entry(i, j).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let m = ef.mult_matrix(c);
                for s in 0..nj {
                    let r = s + a + shift;
                    if r >= mi {
                        break;
                    }
                    place(&mut out, k, (rs[i] + r) * d, (cs[j] + s) * d, &m);
                }
            }
        }
    }
    Ok(out)
}

/// Rows are `wB - Aw` for the matrix units `w` of `M_{m x n}(k)`, flattened row-major.
pub fn commutator_images(k: &Field, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let (m, n) = (a.rows(), b.rows());
    let mut out = Matrix::zeros(m * n, m * n);
    for r in 0..m {
        for s in 0..n {
            let mut w = Matrix::zeros(m, n);
            w.set(r, s, Fe::ONE);
            let img = w.mul(k, b)?.sub(k, &a.mul(k, &w)?)?;
            for (c, &x) in img.data().iter().enumerate() {
                out.set(r * n + s, c, x);
            }
        }
    }
    Ok(out)
}

/// Whether `v` (flattened like the rows of `span`) lies in the row space of `span`.
pub fn in_row_span(k: &Field, span: &Matrix, v: &[Fe]) -> bool {
    let r = span.rank(k);
    let mut rows: Vec<Vec<Fe>> = (0..span.rows()).map(|i| span.row(i).to_vec()).collect();
    rows.push(v.to_vec());
    Matrix::from_rows(&rows).expect("same width").rank(k) == r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{jordan_matrix, Gjnf};
    use crate::centralizer::{embed, generators, group_generators};

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn setup(q: u64, p: &str, mu: &[usize], nu: &[usize]) -> (Field, EigenField, CocentShape, Matrix, Matrix) {
        let k = Field::of_order(q).unwrap();
        let p = Poly::parse(&k, p).unwrap();
        let ef = EigenField::new(&k, &p).unwrap();
        let (mu, nu) = (part(mu), part(nu));
        let sh = CocentShape::new(&mu, &nu, ef.field()).unwrap();
        let a = jordan_matrix(&k, &p, &mu);
        let b = jordan_matrix(&k, &p, &nu);
        (k, ef, sh, a, b)
    }

    #[test]
    fn shapes() {
        let f2 = Field::prime(2).unwrap();
        let s = CocentShape::new(&part(&[4, 2]), &part(&[4, 2]), &f2).unwrap();
        assert_eq!(s.grid(), vec![vec![4, 2], vec![2, 2]]);
        assert_eq!(s.dim(), 10);
        let s = CocentShape::new(&part(&[1]), &part(&[5]), &f2).unwrap();
        assert_eq!((s.grid(), s.dim()), (vec![vec![1]], 1));
        let s = CocentShape::new(&part(&[3, 1]), &part(&[2, 2, 1]), &f2).unwrap();
        assert_eq!(s.grid(), vec![vec![2, 2, 1], vec![1, 1, 1]]);
        assert_eq!(s.dim(), 8);
        assert_eq!(s.entry_start(1, 0), 5);
    }

    #[test]
    fn small_actions() {
        let f3 = Field::prime(3).unwrap();
        let one = part(&[1]);
        let sh = CocentShape::new(&one, &one, &f3).unwrap();
        let v = CocentElement::from_flat(&sh, &[Fe(1)]).unwrap();
        let g = TruncAlgElement::from_flat(&one, &f3, &[Fe(2)]).unwrap();
        assert_eq!(act_left(&g, &v).unwrap().flat(), vec![Fe(2)]);
        assert_eq!(act_right(&v, &g).unwrap().flat(), vec![Fe(2)]);
        let id = TruncAlgElement::identity(&one, &f3);
        assert_eq!(act_left(&id, &v).unwrap(), v);
        let two = part(&[2]);
        let sh = CocentShape::new(&two, &two, &f3).unwrap();
        let v = CocentElement::from_flat(&sh, &[Fe(1), Fe(0)]).unwrap();
        let u = TruncAlgElement::from_flat(&two, &f3, &[Fe(1), Fe(1)]).unwrap();
        assert_eq!(act_left(&u, &v).unwrap().flat(), vec![Fe(1), Fe(1)]);
        assert!(act_left(&u, &CocentElement::zero(&CocentShape::new(&one, &two, &f3).unwrap())).is_err());
    }

    #[test]
    fn actions_compose_and_commute() {
        let f2 = Field::prime(2).unwrap();
        let l = part(&[2, 1]);
        let sh = CocentShape::new(&l, &l, &f2).unwrap();
        let gens = generators(&l, &f2);
        for n in 0..(1u64 << sh.dim()) {
            let v = CocentElement::from_index(&sh, n);
            for g in &gens {
                for h in &gens {
                    let (g, h) = (&g.realized, &h.realized);
                    let gh = g.mul(h).unwrap();
                    assert_eq!(act_left(g, &act_left(h, &v).unwrap()).unwrap(), act_left(&gh, &v).unwrap());
                    assert_eq!(act_right(&act_right(&v, g).unwrap(), h).unwrap(), act_right(&v, &gh).unwrap());
                    let lr = act_right(&act_left(g, &v).unwrap(), h).unwrap();
                    assert_eq!(lr, act_left(g, &act_right(&v, h).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn lift_is_equivariant() {
        let cases = [
            (2, "1,1", &[1][..], &[1, 1][..]),
            (2, "1,1", &[2], &[2]),
            (2, "1,1", &[3, 1], &[2, 1]),
            (3, "1,1", &[2, 1], &[2, 2]),
            (2, "1,1,1", &[2], &[1, 1]),
            (2, "1,1,1", &[2, 1], &[2]),
        ];
        for (q, p, mu, nu) in cases {
            let (k, ef, sh, a, b) = setup(q, p, mu, nu);
            let comm = commutator_images(&k, &a, &b).unwrap();
            let total = (ef.field().order() as u64).pow(sh.dim() as u32).min(256);
            for n in 0..total {
                let v = CocentElement::from_index(&sh, n * 7919 % (ef.field().order() as u64).pow(sh.dim() as u32));
                let lv = lift(&v, &ef).unwrap();
                for g in group_generators(&sh.mu, ef.field()) {
                    let lhs = embed(&g.realized, &ef).unwrap().mul(&k, &lv).unwrap();
                    let rhs = lift(&act_left(&g.realized, &v).unwrap(), &ef).unwrap();
                    assert!(in_row_span(&k, &comm, lhs.sub(&k, &rhs).unwrap().data()), "left {mu:?} {nu:?}");
                }
                for h in group_generators(&sh.nu, ef.field()) {
                    let lhs = lv.mul(&k, &embed(&h.realized, &ef).unwrap()).unwrap();
                    let rhs = lift(&act_right(&v, &h.realized).unwrap(), &ef).unwrap();
                    assert!(in_row_span(&k, &comm, lhs.sub(&k, &rhs).unwrap().data()), "right {mu:?} {nu:?}");
                }
            }
        }
    }

    /// The lifted basis together with `[U,h]` spans `U`, and `dim U/[U,h]` is the coefficient count.
    #[test]
    fn lift_is_a_complement() {
        for m in 1..=4 {
            for n in 1..=4 {
                for mu in Partition::all(m) {
                    for nu in Partition::all(n) {
                        let (k, ef, sh, a, b) = setup(2, "1,1", mu.parts(), nu.parts());
                        let comm = commutator_images(&k, &a, &b).unwrap();
                        assert_eq!(m * n - comm.rank(&k), sh.dim());
                        let mut rows: Vec<Vec<Fe>> = (0..comm.rows()).map(|i| comm.row(i).to_vec()).collect();
                        for pos in 0..sh.dim() {
                            let mut flat = vec![Fe::ZERO; sh.dim()];
                            flat[pos] = Fe::ONE;
                            rows.push(lift(&CocentElement::from_flat(&sh, &flat).unwrap(), &ef).unwrap().data().to_vec());
                        }
                        assert_eq!(Matrix::from_rows(&rows).unwrap().rank(&k), m * n);
                    }
                }
            }
        }
        let (k, ef, sh, a, b) = setup(2, "1,1,1", &[2, 1], &[1, 1]);
        let comm = commutator_images(&k, &a, &b).unwrap();
        assert_eq!(a.rows() * b.rows() - comm.rank(&k), sh.dim() * ef.degree());
    }

    #[test]
    fn distinct_eigenvalues_have_no_cocentralizer() {
        let f3 = Field::prime(3).unwrap();
        let a = jordan_matrix(&f3, &Poly::parse(&f3, "1,1").unwrap(), &part(&[2, 1]));
        let b = jordan_matrix(&f3, &Poly::parse(&f3, "2,1").unwrap(), &part(&[2]));
        assert_eq!(commutator_images(&f3, &a, &b).unwrap().rank(&f3), 6);
        let ga = Gjnf::new(&f3, vec![(Poly::parse(&f3, "1,1").unwrap(), part(&[1]))]).unwrap();
        let gb = Gjnf::new(&f3, vec![(Poly::parse(&f3, "2,1").unwrap(), part(&[1]))]).unwrap();
        assert!(reduce_levi_pair(&f3, &ga, &gb).unwrap().is_empty());
        let gb = Gjnf::new(&f3, vec![(Poly::parse(&f3, "1,1").unwrap(), part(&[1, 1]))]).unwrap();
        let probs = reduce_levi_pair(&f3, &ga, &gb).unwrap();
        assert_eq!((probs.len(), &probs[0].mu, &probs[0].nu), (1, &part(&[1]), &part(&[1, 1])));
        let f2 = Field::prime(2).unwrap();
        let g = Gjnf::new(&f2, vec![(Poly::parse(&f2, "1,1,1").unwrap(), part(&[2]))]).unwrap();
        let probs = reduce_levi_pair(&f2, &g, &g).unwrap();
        assert_eq!(probs[0].eigen.field().order(), 4);
    }

    #[test]
    fn diagonal_placement() {
        let (k, ef, sh, a, b) = setup(2, "1,1", &[2], &[2]);
        let one = CocentElement::from_flat(&sh, &[Fe(1), Fe(0)]).unwrap();
        assert_eq!(lift_diagonal(&one, &ef).unwrap(), Matrix::identity(2));
        assert!(lift(&CocentElement::zero(&sh), &ef).unwrap().is_zero());
        // both diagonal patterns lie in [U,h] over F_2
        let x = CocentElement::from_flat(&sh, &[Fe(0), Fe(1)]).unwrap();
        let comm = commutator_images(&k, &a, &b).unwrap();
        assert!(in_row_span(&k, &comm, lift_diagonal(&x, &ef).unwrap().data()));
        let diff = lift_diagonal(&one, &ef).unwrap();
        assert!(in_row_span(&k, &comm, diff.data()));
        assert!(!in_row_span(&k, &comm, lift(&one, &ef).unwrap().data()));
    }
}
