//! Ground truth independent of the path model.
//!
//! [`expr`] unrolls the automorphism recursion as a rational-expression DAG
//! and evaluates it on random matrices over `F_p`; [`comm`] runs the
//! commutative rank-2 recurrence with exact Laurent division; [`verify`]
//! compares both against the model.

pub mod comm;
pub mod expr;
pub mod verify;

pub use comm::{comm_cluster, comm_cluster_values, CommLaurentPoly};
pub use expr::{seq_xy, ExprGraph, ExprId, Node};
pub use verify::{
    verify_abelian, verify_main, verify_model_poly, verify_poly_against, verify_zrec, Verdict,
    VerifyConfig, VerifyMode,
};
