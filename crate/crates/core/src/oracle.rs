//! Brute-force conjugacy classes of `P^(m,n)(F_q)` and `AGL_n(F_q)`.
//!
//! Every element `[[A, v], [0, B]]` gets a dense index; classes are closed
//! under conjugation by generators of the group: transvections and one
//! diagonal matrix for each `GL` factor, and the unipotent elements with a
//! single additive-basis entry in the corner.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::matrix::Matrix;

/// Default cap on the group order.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1_000_000;

/// All matrices of one size with an index lookup.
struct GlList {
    n: usize,
    mats: Vec<Matrix>,
    /// Code of a matrix (entries as base-q digits, row-major) to index.
    index: Vec<u32>,
}

fn code_of(k: &Field, data: &[Fe]) -> usize {
    let q = k.order() as usize;
    data.iter().fold(0, |acc, c| acc * q + c.index())
}

impl GlList {
    fn full(k: &Field, n: usize) -> GlList {
        let q = k.order() as usize;
        let total = q.pow((n * n) as u32);
        let mut index = vec![u32::MAX; total];
        let mut mats = Vec::new();
        for code in 0..total {
            let mut x = code;
            let mut data = vec![Fe::ZERO; n * n];
            for slot in data.iter_mut().rev() {
                *slot = Fe((x % q) as u32);
                x /= q;
            }
            let m = Matrix::from_vec(n, n, data).expect("square");
            if m.is_invertible(k) {
                index[code] = mats.len() as u32;
                mats.push(m);
            }
        }
        GlList { n, mats, index }
    }

    fn identity_only(n: usize) -> GlList {
        let m = Matrix::identity(n);
        GlList { n, mats: vec![m], index: Vec::new() }
    }

    fn find(&self, k: &Field, m: &Matrix) -> Option<usize> {
        if self.index.is_empty() {
            return (*m == self.mats[0]).then_some(0);
        }
        match self.index.get(code_of(k, m.data())) {
            Some(&i) if i != u32::MAX => Some(i as usize),
            _ => None,
        }
    }

    /// Generators of `GL_n`: `I + c E_ij` over an additive basis and `diag(g, 1, ..)`.
    fn generators(&self, k: &Field) -> Vec<Matrix> {
        let n = self.n;
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        if k.primitive() != Fe::ONE {
            let mut d = Matrix::identity(n);
            d.set(0, 0, k.primitive());
            out.push(d);
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    for &c in &k.additive_basis() {
                        let mut t = Matrix::identity(n);
                        t.set(i, j, c);
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

/// The class partition of `P^(m,n)(F_q)` (or of `AGL_n` when built with [`Oracle::agl`]).
pub struct Oracle {
    k: Field,
    m: usize,
    n: usize,
    gl_a: GlList,
    gl_b: GlList,
    class: Vec<u32>,
    count: usize,
}

impl Oracle {
    pub fn parabolic(m: usize, n: usize, k: &Field, budget: u64) -> Result<Oracle> {
        if m == 0 || n == 0 {
            return Err(Error::Invalid("m and n must be positive".into()));
        }
        Self::build(k, m, n, false, budget)
    }

    /// `AGL_n` as the matrices `[[1, w], [0, g]]`.
    pub fn agl(n: usize, k: &Field, budget: u64) -> Result<Oracle> {
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        Self::build(k, 1, n, true, budget)
    }

    fn build(k: &Field, m: usize, n: usize, agl: bool, budget: u64) -> Result<Oracle> {
        let q = k.order() as u128;
        let exact = gl_order(q, m) * gl_order(q, n) * q.pow((m * n) as u32);
        if exact > budget as u128 {
            return Err(Error::BudgetExceeded { required: exact, budget: budget as u128 });
        }
        let gl_a = if agl { GlList::identity_only(m) } else { GlList::full(k, m) };
        let gl_b = GlList::full(k, n);
        let mut o = Oracle { k: k.clone(), m, n, gl_a, gl_b, class: Vec::new(), count: 0 };
        o.close_all()?;
        Ok(o)
    }

    fn vsize(&self) -> usize {
        (self.k.order() as usize).pow((self.m * self.n) as u32)
    }

    fn len(&self) -> usize {
        self.gl_a.mats.len() * self.gl_b.mats.len() * self.vsize()
    }

    fn encode(&self, a: usize, b: usize, v: &Matrix) -> usize {
        (a * self.gl_b.mats.len() + b) * self.vsize() + code_of(&self.k, v.data())
    }

    fn decode(&self, id: usize) -> (usize, usize, Matrix) {
        let vs = self.vsize();
        let (ab, mut vc) = (id / vs, id % vs);
        let q = self.k.order() as usize;
        let mut data = vec![Fe::ZERO; self.m * self.n];
        for slot in data.iter_mut().rev() {
            *slot = Fe((vc % q) as u32);
            vc /= q;
        }
        let v = Matrix::from_vec(self.m, self.n, data).expect("shape");
        (ab / self.gl_b.mats.len(), ab % self.gl_b.mats.len(), v)
    }

    fn close_all(&mut self) -> Result<()> {
        let k = self.k.clone();
        let total = self.len();
        let gens_a: Vec<(Matrix, Matrix)> = self
            .gl_a
            .generators(&k)
            .into_iter()
            .filter(|_| !self.gl_a.index.is_empty())
            .map(|x| {
                let xi = x.inverse(&k).expect("generator");
                (x, xi)
            })
            .collect();
        let gens_b: Vec<(Matrix, Matrix)> = self
            .gl_b
            .generators(&k)
            .into_iter()
            .map(|y| {
                let yi = y.inverse(&k).expect("generator");
                (y, yi)
            })
            .collect();
        let mut units = Vec::new();
        for r in 0..self.m {
            for s in 0..self.n {
                for &c in &k.additive_basis() {
                    let mut u = Matrix::zeros(self.m, self.n);
                    u.set(r, s, c);
                    units.push(u);
                }
            }
        }
        let mut class = vec![u32::MAX; total];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for start in 0..total {
            if class[start] != u32::MAX {
                continue;
            }
            class[start] = count;
            stack.push(start);
            while let Some(id) = stack.pop() {
                let (ia, ib, v) = self.decode(id);
                let (a, b) = (&self.gl_a.mats[ia], &self.gl_b.mats[ib]);
                let mut next = Vec::new();
                for (x, xi) in &gens_a {
                    let a2 = x.mul(&k, a)?.mul(&k, xi)?;
                    let ia2 = self.gl_a.find(&k, &a2).expect("conjugate is invertible");
                    next.push(self.encode(ia2, ib, &x.mul(&k, &v)?));
                }
                for (y, yi) in &gens_b {
                    let b2 = y.mul(&k, b)?.mul(&k, yi)?;
                    let ib2 = self.gl_b.find(&k, &b2).expect("conjugate is invertible");
                    next.push(self.encode(ia, ib2, &v.mul(&k, yi)?));
                }
                for u in &units {
                    let v2 = v.add(&k, &u.mul(&k, b)?)?.sub(&k, &a.mul(&k, u)?)?;
                    next.push(self.encode(ia, ib, &v2));
                }
                for nid in next {
                    if class[nid] == u32::MAX {
                        class[nid] = count;
                        stack.push(nid);
                    }
                }
            }
            count += 1;
        }
        self.class = class;
        self.count = count as usize;
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn group_order(&self) -> usize {
        self.len()
    }

    /// Class sizes indexed by class id.
    pub fn class_sizes(&self) -> Vec<u64> {
        let mut s = vec![0u64; self.count];
        for &c in &self.class {
            s[c as usize] += 1;
        }
        s
    }

    /// Class id of an `(m+n) x (m+n)` group element.
    pub fn class_of(&self, g: &Matrix) -> Result<usize> {
        let (m, n) = (self.m, self.n);
        if g.rows() != m + n || g.cols() != m + n || !g.submatrix(m, 0, n, m).is_zero() {
            return Err(Error::Invalid("not an element of the parabolic subgroup".into()));
        }
        let ia = self.gl_a.find(&self.k, &g.submatrix(0, 0, m, m));
        let ib = self.gl_b.find(&self.k, &g.submatrix(m, m, n, n));
        let (Some(ia), Some(ib)) = (ia, ib) else {
            return Err(Error::Invalid("diagonal blocks are not in the group".into()));
        };
        Ok(self.class[self.encode(ia, ib, &g.submatrix(0, m, m, n))] as usize)
    }
}

fn gl_order(q: u128, n: usize) -> u128 {
    let qn = q.pow(n as u32);
    (0..n).map(|i| qn - q.pow(i as u32)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let o = Oracle::parabolic(1, 1, &f2, DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!((o.group_order(), o.count()), (2, 2));
        let o = Oracle::parabolic(1, 2, &f2, DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!((o.group_order(), o.count()), (24, 5));
        let o = Oracle::parabolic(1, 1, &f3, DEFAULT_ORACLE_BUDGET).unwrap();
        assert_eq!((o.group_order(), o.count()), (12, 6));
        // AGL_2(F_2) is S_4, AGL_1(F_3) is S_3
        assert_eq!(Oracle::agl(2, &f2, DEFAULT_ORACLE_BUDGET).unwrap().count(), 5);
        assert_eq!(Oracle::agl(1, &f3, DEFAULT_ORACLE_BUDGET).unwrap().count(), 3);
        let sizes = Oracle::agl(2, &f2, DEFAULT_ORACLE_BUDGET).unwrap().class_sizes();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 3, 6, 6, 8]);
        assert!(matches!(Oracle::parabolic(3, 3, &f3, 1000), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn class_lookup() {
        let f2 = Field::prime(2).unwrap();
        let o = Oracle::parabolic(1, 1, &f2, DEFAULT_ORACLE_BUDGET).unwrap();
        let id = Matrix::identity(2);
        let t = Matrix::from_vec(2, 2, vec![Fe(1), Fe(1), Fe(0), Fe(1)]).unwrap();
        assert_ne!(o.class_of(&id).unwrap(), o.class_of(&t).unwrap());
        let bad = Matrix::from_vec(2, 2, vec![Fe(1), Fe(0), Fe(1), Fe(1)]).unwrap();
        assert!(o.class_of(&bad).is_err());
    }
}
