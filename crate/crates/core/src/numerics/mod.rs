//! Dense symmetric linear algebra, PSD testing and seeded sampling.

mod eigen;
mod linalg;
mod sampling;

pub use eigen::{is_psd, min_eigenvalue, project_psd, psd_threshold, sym_eigen, Eigen};
pub use linalg::{
    add, axpy, binomial, cholesky_lower, dot, is_finite, norm2, norm_inf, scaled, sub, unit,
    Matrix, SymMatrix, Vector,
};
pub use sampling::{gaussian_vector, sample_unit_sphere, uniform_at, unit_vector, Seed};
