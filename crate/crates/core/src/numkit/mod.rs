//! Self-contained dense linear algebra and ODE numerics for desk-scale
//! control problems (dimensions up to 16).

pub mod eig;
pub mod expm;
pub mod lu;
pub mod lyapunov;
mod matrix;
pub mod ode;

pub use eig::{eig, sym_eigenvalues, ComplexSpectrum, SpectrumEntry, MAX_EIG_DIM};
pub use expm::mat_exp;
pub use lu::{invert, lu_solve, lu_solve_vec, LuFactors};
pub use lyapunov::{is_positive_definite, lyapunov_residual, solve_lyapunov, HURWITZ_MARGIN};
pub use matrix::{Matrix, Vector};
pub use ode::rk4_step;
