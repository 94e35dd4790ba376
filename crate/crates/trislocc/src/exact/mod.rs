//! Exact scalars, univariate polynomials and homogeneous binary forms over ℚ(i).

mod form;
mod gauss_int;
mod matrix;
mod poly;
mod scalar;

pub use form::{factor_form, form_gcd, BinaryForm, Eigenvalue, Factorization};
pub use matrix::Matrix;
pub use poly::Poly;
pub use scalar::{gc, gr, GaussianRational, ParseScalarError};
