//! Numerical kernels shared by the physics modules. Nothing here knows about
//! solitons or phonons.

mod fft;
mod grid;
mod linalg;
mod ode;
mod quad;
mod roots;
mod special;

pub use fft::{fft, ifft, FftPlan};
pub use grid::Grid1D;
pub use linalg::{solve_dense, CMatrix};
pub use ode::rk4_evolve;
pub use quad::{integrate_line, integrate_line_real, QUAD_TOL};
pub use roots::{find_root, ROOT_TOL};
pub use special::{gamma_fn, hyp2f1};

/// Residual tolerance for steady-state linear solves.
pub const STEADY_TOL: f64 = 1e-10;
