//! Conjugacy classes of maximal parabolic subgroups `P^(m,n)` of `GL_{m+n}(F_q)`
//! and of affine general linear groups.
//!
//! The pipeline: Levi representatives in generalized Jordan normal form
//! ([`canonical`]), their centralizer algebras and generators
//! ([`centralizer`]), the cocentralizer matrix problem ([`cocentralizer`]),
//! orbit enumeration ([`matproblem`]) and class assembly ([`classes`]).
//! [`oracle`] is an independent brute-force check.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod canonical;
pub mod centralizer;
pub mod classes;
pub mod cocentralizer;
pub mod error;
pub mod field;
pub mod interp;
pub mod matproblem;
pub mod matrix;
pub mod oracle;
pub mod partition;
pub mod poly;

pub use error::{Error, Result};
pub use field::{Fe, Field};
pub use partition::Partition;
pub use poly::Poly;
