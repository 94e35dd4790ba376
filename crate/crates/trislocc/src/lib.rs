//! Exact Kronecker canonical forms of matrix pencils μR + λS over ℚ(i), and their use
//! for classifying and transforming tripartite 2×m×n states.
//!
//! A state `|0⟩|R⟩ + |1⟩|S⟩` is identified with the pencil `μR + λS`. Local invertible
//! operators of the second and third party act as `B(μR + λS)Cᵀ`; the first party acts by an
//! invertible substitution of (μ, λ).

pub mod error;
pub mod exact;
pub mod hierarchy;
pub mod kcf;
pub mod pencil;
pub mod slocc;
pub mod transform;

pub use error::{Error, Result};
pub use exact::{BinaryForm, Eigenvalue, GaussianRational, Matrix};
pub use kcf::KroneckerStructure;
pub use pencil::{MoebiusMap, Pencil, StateTensor};
