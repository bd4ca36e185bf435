//! Exact arithmetic: coefficient rings, dense matrices, Smith normal form,
//! polynomials and Gröbner bases.

mod bigsnf;
pub mod fp;
pub mod groebner;
pub mod matrix;
pub mod poly;
pub mod ring;
pub mod snf;
pub mod sparse;

pub use groebner::{groebner, GroebnerBasis};
pub use matrix::Matrix;
pub use poly::{Monomial, Poly, PolyRing};
pub use ring::{CoeffRing, Elem};
pub use snf::{smith_normal_form, kernel_basis, rank, solve_linear, solve_mod, AbelianGroup, EchelonSpan, QuotientModule, SmithDecomposition, Solver};
pub use sparse::SparseSmith;
