//! Symmetry and symmetrizability analysis for square LTI systems.
//!
//! A system `G(s)` is symmetrizable when a static gain `K` makes
//! `K^-1 G(s) K` symmetric up to a signature matrix. This crate decides
//! that question, produces certificates and gains, enumerates achievable
//! system signatures and builds the closed-form output-feedback controller
//! for relaxation-type systems.

pub mod cli;
pub mod control;
pub mod error;
pub mod linalg;
pub mod par;
pub mod spectral;
pub mod statespace;
pub mod symmetrizability;
pub mod symmetry;

pub use error::{Error, Result};
pub use spectral::{eig_structure, inertia, kernel, khatri_rao, EigStructure, Inertia};
pub use statespace::{
    apply_io_transform, load_system, quadruple_tank, random_symmetric_system, system_matrix, transfer_eval,
    StateSpace, SystemMatrix, TankParams,
};
pub use symmetrizability::{
    achievable_signatures, complete_symmetrizability, decide_distinct_real, gains_from_q, necessary_test,
    solution_subspace, symmetrize, Gains, NecessaryReport, NecessaryVerdict, SolutionSubspace,
    SymmetrizabilityCertificate,
};
pub use symmetry::{
    check_external_symmetry, check_internal_symmetry, sign_consistency, SignConstraintGraph, SignatureMatrix,
    SystemSignature,
};
