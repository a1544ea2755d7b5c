//! Shared numerical kernels: periodic spectral calculus, Gauss–Legendre
//! rules, barycentric differentiation, and a small sparse linear solver.

pub mod diffmat;
pub mod quad;
pub mod spectral;
pub mod sparse;
