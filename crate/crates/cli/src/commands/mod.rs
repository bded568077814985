pub mod algebra;
pub mod curves;
pub mod export;
pub mod reps;
