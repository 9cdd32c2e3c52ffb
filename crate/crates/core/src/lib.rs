//! Exact symbolic computation in the quantized coordinate algebras
//! `O_q(M_N)`, `O_q(GL_N)` and `O_q(SL_N)`.
//!
//! - [`scalar`]: Laurent polynomials in `s = q^{1/N}` and exact linear algebra
//! - [`qmatrix`]: PBW normal forms, quantum minors, `det_q`, `sigma_i`, `tau_i`
//! - [`hopf`]: coproduct, counit, antipode, the `Z`-grading and the passage to `SL_q`
//! - [`coact`]: the coactions `lambda`, `rho`, `alpha`, `beta` and their adjoint versions
//! - [`rform`]: the universal r-form and the intertwiners `psi`, `phi`
//! - [`coinv`]: per-degree coinvariant bases, Hilbert series prefixes, generators
//! - [`cli`]: expression parser, JSON encoding and the command-line driver

pub mod cli;
pub mod coact;
pub mod coinv;
pub mod error;
pub mod hopf;
pub mod qmatrix;
pub mod rform;
pub mod scalar;

pub use error::{Error, Result};
pub use hopf::{GLElem, Slot, TensorElem};
pub use qmatrix::{AlgElem, Gen, Monomial};
pub use scalar::{QFraction, QScalar};
