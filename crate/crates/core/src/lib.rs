//! Star colorings of tensor products of paths and cycles.
//!
//! The crate builds product graphs, verifies star colorings, computes star
//! chromatic numbers exactly by backtracking search, stores a bank of
//! periodic coloring patterns, and assembles verified colorings of
//! `Pm x Pn`, `Cm x Cn` and `Cm x Pn` for arbitrary sizes from them.

pub mod bank;
pub mod coloring;
pub mod constructions;
pub mod derived;
pub mod error;
pub mod graph;
pub mod pattern;
pub mod solver;
pub mod stitch;
pub mod subgraph;
pub mod table;

pub use bank::{builtin_bank, load_bank, PatternBank, PatternBankEntry};
pub use coloring::{
    canonical_form, verify, verify_star_forest, Coloring, VerificationReport, Violation,
};
pub use constructions::{
    chi_formula, chi_kmn, construct_cc, construct_cp, construct_pp, product_upper_bound,
    Constructor, Factor, ProductSpec, Shape, KNOWN_COUNTEREXAMPLES,
};
pub use error::{Error, Result};
pub use graph::{
    build_family, cartesian_product, connected_components, tensor_product, Family, Graph,
};
pub use pattern::{pattern_to_coloring, tile, Pattern};
pub use solver::{
    chi_star, decide_k, enumerate_canonical, ChiKind, ChiResult, Decision, Provenance, SolverBudget,
};
pub use stitch::{block_compose, hstitch, sylvester_represent, vstitch, Axis, StitchPlan};
pub use subgraph::contains_subgraph;
