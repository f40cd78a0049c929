//! Exact and quasi Knill-Laflamme analysis on encoding isometries.

mod checks;
mod code;
mod kl;
mod physical_op;
mod recovery;
mod subsystem;

pub use checks::{logical_operator_check, transversal_collapse_check, CollapseCheck, LogicalCheck, LOGICAL_TOL};
pub use code::{CodeIsometry, ISOMETRY_TOL};
pub use kl::{
    correctability_epsilon, decompose, detect_condition, encoded_errors, epsilon_from_gram, kl_decompose,
    kl_report_from_gram, recovery_from_kl, span_transform, ErrorGram, KLReport, KlDecomposition, EIGEN_CUTOFF, TP_TOL,
};
pub use physical_op::{depolarizing_pauli_noise, pauli, pauli_string, weight_one_paulis, PhysicalOp};
pub use recovery::{
    logical_channel_from_gram, recovered_logical_channel, recovery_error, RecoveryChannel, RecoveryError,
    DENSE_RECOVERY_CAP,
};
pub use subsystem::{subsystem_gate_factorization, subsystem_kl_check, SubsystemKl, SubsystemSplit};
