//! Single-swap local search laboratory.
//!
//! The crate bundles four layers:
//!
//! * [`satcore`] — weighted Max-2-SAT and positive NAE-Max-2-SAT instances
//!   together with the Flip neighbourhood.
//! * [`facility`] — uncapacitated facility location (MUFL), discrete K-means
//!   (DKM) and discrete fuzzy K-means (DFKM) objectives over a unified
//!   instance representation, plus the single-swap neighbourhoods.
//! * [`reduce`] — constructions turning a SAT instance into a MUFL/DKM/DFKM
//!   instance whose swap local optima mirror the Flip local optima, and the
//!   solution mappings back and forth.
//! * [`verify`] — brute-force oracles that audit the structural properties of
//!   the reduced instances (reasonableness of local optima, cost-order
//!   equivalence, closed forms, transition-graph containment) on enumerable
//!   instances.
//!
//! [`search`] provides the generic strict-improvement engine and transition
//! graphs, [`embed`] realizes abstract squared-distance matrices as point sets
//! in Euclidean space, and [`generate`] produces seeded random instances for
//! benchmarks and randomized audits.
//!
//! All instance data is kept in exact rational arithmetic
//! ([`rational::Rat`]); floating point only enters through the embedding path
//! and the fuzzy membership matrices.

pub mod embed;
pub mod facility;
pub mod generate;
pub mod rational;
pub mod reduce;
pub mod satcore;
pub mod search;
#[cfg(test)]
pub(crate) mod testutil;
pub mod verify;

pub use facility::{Kind, LocationInstance, MembershipMatrix, PointLabel, Solution};
pub use rational::Rat;
pub use reduce::{
    double_clauses, lift_assignment, map_solution_back, reduce_pnaesat_to_dfkm, reduce_sat_to_dkm,
    reduce_sat_to_mufl, ReductionArtifact,
};
pub use satcore::{Assignment, Literal, Mode, SatInstance};
pub use search::{
    build_transition_graph, enumerate_local_optima, local_search, Direction, FacilitySwap, Move,
    Pivot, SatFlip, SearchProblem, SearchTrace, TransitionGraph, DEFAULT_NODE_GUARD,
};
pub use verify::{run_all_checks, CheckResult, CheckStatus, VerificationReport, VerifyOptions};
