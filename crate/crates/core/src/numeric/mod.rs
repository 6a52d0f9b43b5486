//! Small numerical kernels shared by the physics modules.

pub mod interp;
pub mod quadrature;
pub mod roots;
