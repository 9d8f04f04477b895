pub mod cli;
pub mod coords;
pub mod engine;
pub mod error;
pub mod invertible;
pub mod symmetry;
pub mod torsion;
