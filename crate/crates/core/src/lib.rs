pub mod arith;
pub mod dgalgebra;
pub mod multivec;
pub mod schouten;
pub mod poisson;
pub mod homology;
pub mod cli;
