//! Special functions: the complex dilogarithm family and the discrete
//! quantum dilogarithm with its factorial tables.

mod dilog;
mod faddeev;
mod tables;

pub use dilog::{bloch_wigner, dilog, dilog_unchecked, f_asymptote, lobachevsky};
pub use faddeev::quantum_dilog;
pub use tables::{build_quantum_tables, QuantumTables};
