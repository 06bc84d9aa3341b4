//! Odd-part accelerated Collatz iteration over arbitrary-precision
//! naturals, checked against a brute-force classical oracle.

pub mod accelerated;
pub mod classical;
pub mod cli;
mod decimal;
pub mod diophantine;
pub mod error;
pub mod export;
pub mod harness;
pub mod natural;

pub use accelerated::{
    accelerated_trace, cardinality_formula, cross_check, verify_eta_relation, AcceleratedTrace,
    CrossCheck, EtaReport, TraceRow,
};
pub use classical::{
    check_parity_sign_law, classical_trajectory, discrete_derivatives, total_stopping_time,
    trajectory_set, ClassicalTrajectory, ParityReport,
};
pub use diophantine::{
    solve_linear_diophantine, verify_collatz_solvability, DiophantineSolution, SolvabilityReport,
};
pub use error::{Error, Result};
pub use harness::{powers_of_three, scan_range, PowerOfThree, ScanConfig, ScanSummary};
pub use natural::{collatz_step, even_part, odd_part, two_adic_split, Natural, TwoAdicSplit};
