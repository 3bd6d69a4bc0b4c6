//! Dense matrices over a finite field.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::{self, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

/// Outcome of [`conjugator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Similarity {
    /// `X` with `X A X^-1 = B`.
    Similar(Matrix),
    /// The rank invariants of `A` and `B` differ.
    NotSimilar,
    /// Invariants agree but the search ran out of attempts.
    Undetermined,
}

/// Exhaustive certificate search is used while `q^dim` stays below this.
const EXHAUSTIVE_LIMIT: u128 = 1 << 20;
const RANDOM_ATTEMPTS: usize = 256;

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Fe>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Column vector.
    pub fn column(v: &[Fe]) -> Matrix {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn same_shape(&self, o: &Matrix) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, k: &Field, o: &Matrix) -> Result<Matrix> {
        self.same_shape(o)?;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| k.add(a, b)).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn sub(&self, k: &Field, o: &Matrix) -> Result<Matrix> {
        self.same_shape(o)?;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| k.sub(a, b)).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn scale(&self, k: &Field, c: Fe) -> Matrix {
        Matrix { data: self.data.iter().map(|&a| k.mul(a, c)).collect(), ..*self }
    }

    pub fn mul(&self, k: &Field, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = k.add(out.data[idx], k.mul(a, o.get(l, j)));
                }
            }
        }
        Ok(out)
    }

    /// Parses rows separated by `;` with entries separated by whitespace.
    pub fn parse(k: &Field, s: &str) -> Result<Matrix> {
        let rows = s
            .split(';')
            .map(|r| r.split_whitespace().map(|e| k.parse(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.iter().any(|r| r.is_empty()) {
            return Err(Error::Dimension(format!("empty row in `{s}`")));
        }
        Matrix::from_rows(&rows)
    }

    /// Inverse of [`Matrix::parse`]: `a b;c d`.
    pub fn format(&self, k: &Field) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|&c| k.format(c)).collect::<Vec<_>>().join(" "))
            .collect();
        rows.join(";")
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self, k: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = k.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = k.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let f = m.get(i, c);
                if i == r || f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = k.sub(m.get(i, j), k.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn rank(&self, k: &Field) -> usize {
        self.rref(k).1.len()
    }

    pub fn is_invertible(&self, k: &Field) -> bool {
        self.is_square() && self.rank(k) == self.rows
    }

    /// Basis of the right null space `{v : A v = 0}`.
    pub fn kernel(&self, k: &Field) -> Vec<Vec<Fe>> {
        let (r, pivots) = self.rref(k);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Fe::ZERO; self.cols];
            v[free] = Fe::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self, k: &Field) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let (r, pivots) = aug.rref(k);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Ok(out)
    }

    /// Copies `m` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Matrix) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.set(r0 + i, c0 + j, m.get(i, j));
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    /// Block matrix from a grid of blocks with consistent row and column sizes.
    pub fn from_blocks(grid: &[Vec<Matrix>]) -> Result<Matrix> {
        let heights: Vec<usize> = grid.iter().map(|row| row.first().map_or(0, |b| b.rows)).collect();
        let widths: Vec<usize> = grid.first().map(|row| row.iter().map(|b| b.cols).collect()).unwrap_or_default();
        for (row, &h) in grid.iter().zip(&heights) {
            if row.len() != widths.len() || row.iter().zip(&widths).any(|(b, &w)| b.rows != h || b.cols != w) {
                return Err(Error::Dimension("inconsistent block sizes".into()));
            }
        }
        let mut out = Matrix::zeros(heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (row, &h) in grid.iter().zip(&heights) {
            let mut c0 = 0;
            for (b, &w) in row.iter().zip(&widths) {
                out.set_block(r0, c0, b);
                c0 += w;
            }
            r0 += h;
        }
        Ok(out)
    }

    /// Block diagonal sum.
    pub fn direct_sum(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Kronecker product `self (x) o`.
    pub fn kron(&self, k: &Field, o: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                out.set_block(i * o.rows, j * o.cols, &o.scale(k, a));
            }
        }
        out
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_poly(&self, k: &Field, p: &Poly) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Dimension("polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut acc = Matrix::zeros(n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(k, self)?.add(k, &Matrix::identity(n).scale(k, c))?;
        }
        Ok(acc)
    }

    pub fn pow(&self, k: &Field, e: usize) -> Result<Matrix> {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(k, self)?;
        }
        Ok(acc)
    }

    /// `det(tI - A)` via reduction to upper Hessenberg form.
    pub fn char_poly(&self, k: &Field) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::Dimension("characteristic polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(p) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            h.swap_rows(p, m);
            h.swap_cols(p, m);
            let inv = k.inv(h.get(m, m - 1))?;
            for i in m + 1..n {
                let t = k.mul(h.get(i, m - 1), inv);
                if t.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = k.sub(h.get(i, j), k.mul(t, h.get(m, j)));
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = k.add(h.get(j, m), k.mul(t, h.get(j, i)));
                    h.set(j, m, v);
                }
            }
        }
        // 1-based recurrence: p_m = (t - h_mm) p_{m-1} - sum_i h_{m-i,m} prod_j h_{j,j-1} p_{m-i-1}
        let hh = |i: usize, j: usize| h.get(i - 1, j - 1);
        let mut ps: Vec<Poly> = vec![Poly::one()];
        for m in 1..=n {
            let mut pm = Poly::linear(k, hh(m, m)).mul(k, &ps[m - 1]);
            let mut prod = Fe::ONE;
            for i in 1..m {
                prod = k.mul(prod, hh(m - i + 1, m - i));
                let c = k.mul(hh(m - i, m), prod);
                pm = pm.sub(k, &ps[m - i - 1].scale(k, c));
            }
            ps.push(pm);
        }
        Ok(ps.pop().expect("nonempty"))
    }
}

/// Ranks of `p(A)^i` for `i = 1..=upto`.
pub fn rank_profile(k: &Field, a: &Matrix, p: &Poly, upto: usize) -> Result<Vec<usize>> {
    let pa = a.eval_poly(k, p)?;
    let mut acc = Matrix::identity(a.rows());
    let mut out = Vec::with_capacity(upto);
    for _ in 0..upto {
        acc = acc.mul(k, &pa)?;
        out.push(acc.rank(k));
    }
    Ok(out)
}

fn same_similarity_invariants(k: &Field, a: &Matrix, b: &Matrix) -> Result<bool> {
    let ca = a.char_poly(k)?;
    if ca != b.char_poly(k)? {
        return Ok(false);
    }
    for (p, mult) in poly::factor(k, &ca)? {
        let m = mult as usize;
        if rank_profile(k, a, &p, m)? != rank_profile(k, b, &p, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for an invertible `X` with `X A X^-1 = B` inside the solution
/// space of `X A = B X`.
pub fn conjugator(k: &Field, a: &Matrix, b: &Matrix, seed: u64) -> Result<Similarity> {
    if !a.is_square() || a.rows != b.rows || a.cols != b.cols {
        return Err(Error::Dimension("conjugator needs square matrices of one size".into()));
    }
    if !same_similarity_invariants(k, a, b)? {
        return Ok(Similarity::NotSimilar);
    }
    let n = a.rows;
    // unknown x_{ij} at column i*n+j; equation (XA - BX)_{rc} at row r*n+c
    let mut sys = Matrix::zeros(n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            let row = r * n + c;
            for j in 0..n {
                let col = r * n + j;
                let v = k.add(sys.get(row, col), a.get(j, c));
                sys.set(row, col, v);
                let col = j * n + c;
                let v = k.sub(sys.get(row, col), b.get(r, j));
                sys.set(row, col, v);
            }
        }
    }
    let basis = sys.kernel(k);
    let combine = |coeffs: &[Fe]| -> Matrix {
        let mut x = vec![Fe::ZERO; n * n];
        for (c, v) in coeffs.iter().zip(&basis) {
            if c.is_zero() {
                continue;
            }
            for (xi, &vi) in x.iter_mut().zip(v) {
                *xi = k.add(*xi, k.mul(*c, vi));
            }
        }
        Matrix { rows: n, cols: n, data: x }
    };
    let q = k.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let coeffs: Vec<Fe> = (0..basis.len()).map(|_| Fe(rng.next_u32() % q)).collect();
        let x = combine(&coeffs);
        if x.is_invertible(k) {
            return Ok(Similarity::Similar(x));
        }
    }
    let space = (q as u128).checked_pow(basis.len() as u32);
    if space.is_some_and(|s| s <= EXHAUSTIVE_LIMIT) {
        let mut coeffs = vec![Fe::ZERO; basis.len()];
        for _ in 0..space.unwrap_or(0) {
            let x = combine(&coeffs);
            if x.is_invertible(k) {
                return Ok(Similarity::Similar(x));
            }
            for c in coeffs.iter_mut() {
                c.0 += 1;
                if c.0 < q {
                    break;
                }
                c.0 = 0;
            }
        }
    }
    Ok(Similarity::Undetermined)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(k: &Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| k.from_int(x)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn basics() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let j2 = m(&f2, &[&[0, 0], &[1, 0]]);
        assert_eq!(j2.rank(&f2), 1);
        assert_eq!(Matrix::identity(3).inverse(&f2).unwrap(), Matrix::identity(3));
        let d = Matrix::direct_sum(&[m(&f3, &[&[1]]), m(&f3, &[&[2]])]);
        assert_eq!(d, m(&f3, &[&[1, 0], &[0, 2]]));
        assert_eq!(j2.inverse(&f2), Err(Error::Singular));
        assert!(j2.mul(&f2, &Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn text_format() {
        let f4 = Field::of_order(4).unwrap();
        let a = Matrix::parse(&f4, "0 1; w 1+w").unwrap();
        assert_eq!(a.format(&f4), "0 1;w 1+w");
        assert_eq!(Matrix::parse(&f4, &a.format(&f4)).unwrap(), a);
        assert!(Matrix::parse(&f4, "1 0;1").is_err());
        assert!(Matrix::parse(&f4, "1 x").is_err());
    }

    #[test]
    fn char_poly_examples() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert_eq!(m(&f2, &[&[0, 0], &[1, 0]]).char_poly(&f2).unwrap(), Poly::parse(&f2, "0,0,1").unwrap());
        assert_eq!(m(&f3, &[&[1, 0], &[0, 2]]).char_poly(&f3).unwrap(), Poly::parse(&f3, "2,0,1").unwrap());
        assert_eq!(m(&f2, &[&[0, 1], &[1, 1]]).char_poly(&f2).unwrap(), Poly::parse(&f2, "1,1,1").unwrap());
        assert!(Matrix::zeros(2, 3).char_poly(&f2).is_err());
    }

    #[test]
    fn conjugator_examples() {
        let f2 = Field::prime(2).unwrap();
        let a = m(&f2, &[&[0, 0], &[1, 0]]);
        let b = m(&f2, &[&[0, 1], &[0, 0]]);
        match conjugator(&f2, &a, &b, 0).unwrap() {
            Similarity::Similar(x) => {
                assert_eq!(x.mul(&f2, &a).unwrap(), b.mul(&f2, &x).unwrap());
                assert!(x.is_invertible(&f2));
            }
            other => panic!("{other:?}"),
        }
        let i2 = Matrix::identity(2);
        let j = m(&f2, &[&[1, 0], &[1, 1]]);
        assert_eq!(conjugator(&f2, &i2, &j, 0).unwrap(), Similarity::NotSimilar);
        assert!(matches!(conjugator(&f2, &i2, &i2, 0).unwrap(), Similarity::Similar(_)));
    }

    /// Leibniz expansion, independent of the Hessenberg route.
    fn det_leibniz(k: &Field, a: &Matrix) -> Fe {
        fn rec(k: &Field, a: &Matrix, row: usize, used: &mut Vec<bool>, sign: bool) -> Fe {
            let n = a.rows();
            if row == n {
                return if sign { k.neg(Fe::ONE) } else { Fe::ONE };
            }
            let mut acc = Fe::ZERO;
            for c in 0..n {
                if used[c] || a.get(row, c).is_zero() {
                    continue;
                }
                let inversions = used[c + 1..].iter().filter(|&&u| u).count();
                used[c] = true;
                let sub = rec(k, a, row + 1, used, sign ^ (inversions % 2 == 1));
                used[c] = false;
                acc = k.add(acc, k.mul(a.get(row, c), sub));
            }
            acc
        }
        rec(k, a, 0, &mut vec![false; a.rows()], false)
    }

    fn mat_strategy(q: u64, n: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(0u32..q as u32, n * n)
            .prop_map(move |d| Matrix::from_vec(n, n, d.into_iter().map(Fe).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn char_poly_matches_determinant(a in mat_strategy(3, 4), x in 0u32..3) {
            let k = Field::prime(3).unwrap();
            let cp = a.char_poly(&k).unwrap();
            let shifted = Matrix::identity(4).scale(&k, Fe(x)).sub(&k, &a).unwrap();
            prop_assert_eq!(cp.eval(&k, Fe(x)), det_leibniz(&k, &shifted));
            prop_assert_eq!(cp.degree(), Some(4));
        }

        #[test]
        fn similarity_invariance(a in mat_strategy(2, 4), p in mat_strategy(2, 4)) {
            let k = Field::prime(2).unwrap();
            prop_assume!(p.is_invertible(&k));
            let b = p.mul(&k, &a).unwrap().mul(&k, &p.inverse(&k).unwrap()).unwrap();
            prop_assert_eq!(a.char_poly(&k).unwrap(), b.char_poly(&k).unwrap());
            match conjugator(&k, &a, &b, 7).unwrap() {
                Similarity::Similar(x) => {
                    prop_assert!(x.is_invertible(&k));
                    let back = x.mul(&k, &a).unwrap().mul(&k, &x.inverse(&k).unwrap()).unwrap();
                    prop_assert_eq!(back, b);
                }
                other => prop_assert!(false, "{:?}", other),
            }
        }

        #[test]
        fn rank_nullity(a in proptest::collection::vec(0u32..5, 12)) {
            let k = Field::prime(5).unwrap();
            let a = Matrix::from_vec(3, 4, a.into_iter().map(Fe).collect()).unwrap();
            let ker = a.kernel(&k);
            prop_assert_eq!(a.rank(&k) + ker.len(), 4);
            for v in ker {
                prop_assert!(a.mul(&k, &Matrix::column(&v)).unwrap().is_zero());
            }
        }
    }
}
