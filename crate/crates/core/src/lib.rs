pub mod basis;
pub mod bounds;
pub mod discretization;
pub mod geometry;
pub mod qo;
pub mod specfun;
pub mod tension;
