pub mod algebra;
pub mod reps;
pub mod suite;
pub mod tdo;
pub mod weyl;
