pub mod capacity;
pub mod cli;
pub mod ffpoly;
pub mod heights;
pub mod logsum;
pub mod padic;
pub mod place;
pub mod poly;
pub mod search;
pub mod splitting;

pub use logsum::LogSum;
pub use place::LocalFieldSpec;
pub use poly::IntPolynomial;
