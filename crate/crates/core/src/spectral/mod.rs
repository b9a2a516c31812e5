//! Grids, basis transforms, projections and projection-kernel bounds on the
//! circle ℝ/2πℤ, the interval (-1, 1) and the sphere S².

mod function;
mod grid;
mod kernel;
pub mod legendre;

pub use function::{
    analyze, chebyshev_sum, legendre_to_chebyshev, project, synthesize, SpectralFunction,
    NORM_OVERSAMPLING,
};
pub use grid::{Grid, Manifold, ManifoldKind, Point};
pub(crate) use grid::check_len;
pub use kernel::{addition_formula_kernel, average_operator, kernel_sup_bound};
pub use legendre::legendre_eval;
