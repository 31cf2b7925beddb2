//! Solver-derived witnesses and refutations, cached as data.
//!
//! Each record is one `decide_k` run on a named product. The shipped cache
//! (`data/derived/derived.json`) is regenerated by [`regenerate`] and must
//! match it byte for byte.

use serde::{Deserialize, Serialize};

use crate::coloring::{verify, Coloring};
use crate::error::{Error, Result};
use crate::graph::{build_family, Family, Graph};
use crate::solver::{decide_k_counted, Decision, SolverBudget};

/// Node budget used for every cache item.
pub const DERIVED_MAX_NODES: u64 = 1_000_000_000;

const BUILTIN_CACHE: &str = include_str!("../data/derived/derived.json");

/// `(product, k)` pairs the cache holds. Witness items sit at the star
/// chromatic number, refutation items one below it.
pub const DERIVED_ITEMS: &[(&str, usize)] = &[
    ("P2xP2", 1),
    ("P2xP2", 2),
    ("P2xP3", 1),
    ("P2xP3", 2),
    ("P4xP4", 3),
    ("P6xP6", 3),
    ("P6xP6", 4),
    ("P6xP7", 4),
    ("P6xP8", 4),
    ("P7xP7", 4),
    ("C3xC3", 5),
    ("C3xC3", 6),
    ("C3xC5", 5),
    ("C3xC5", 6),
    ("C4xC4", 4),
    ("C3xP6", 4),
    ("C4xP4", 4),
    ("C5xP4", 3),
    ("C5xP4", 4),
    ("C5xP5", 4),
    ("C6xP6", 4),
    ("C6xP7", 4),
    ("C7xP4", 3),
    ("C7xP4", 4),
    ("C7xP5", 4),
    ("C7xP6", 4),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedRecord {
    pub graph: String,
    pub k: usize,
    pub answer: Answer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u32>>,
    pub nodes: u64,
    pub max_nodes: u64,
}

impl DerivedRecord {
    pub fn witness(&self) -> Option<Coloring> {
        self.colors.clone().and_then(|c| Coloring::new(c).ok())
    }
}

fn graph_of(label: &str) -> Result<Graph> {
    build_family(&label.parse::<Family>()?)
}

/// Runs one item; `Err(BudgetExceeded)` if the search did not finish.
pub fn compute(label: &str, k: usize, max_nodes: u64) -> Result<DerivedRecord> {
    let g = graph_of(label)?;
    let out = decide_k_counted(&g, k, &SolverBudget::nodes(max_nodes));
    let (answer, colors) = match out.decision {
        Decision::Yes(c) => (Answer::Yes, Some(c.colors().to_vec())),
        Decision::No => (Answer::No, None),
        Decision::Unknown => return Err(Error::BudgetExceeded { nodes: out.nodes }),
    };
    Ok(DerivedRecord {
        graph: label.to_string(),
        k,
        answer,
        colors,
        nodes: out.nodes,
        max_nodes,
    })
}

/// Recomputes every item. Finished records come first; the second list
/// names items whose budget ran out.
pub fn regenerate(max_nodes: u64) -> (Vec<DerivedRecord>, Vec<(String, usize)>) {
    let mut done = Vec::new();
    let mut incomplete = Vec::new();
    for &(label, k) in DERIVED_ITEMS {
        match compute(label, k, max_nodes) {
            Ok(r) => done.push(r),
            Err(_) => incomplete.push((label.to_string(), k)),
        }
    }
    (done, incomplete)
}

pub fn records_to_json(records: &[DerivedRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

pub fn records_from_json(text: &str) -> Result<Vec<DerivedRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("derived cache: {e}")))
}

/// The shipped cache.
pub fn builtin_records() -> Vec<DerivedRecord> {
    records_from_json(BUILTIN_CACHE).expect("builtin derived cache parses")
}

pub fn builtin_cache_text() -> &'static str {
    BUILTIN_CACHE
}

/// Cached witness for `label` with at most `k` colors, re-verified.
pub fn cached_witness(label: &str, k: usize) -> Option<Coloring> {
    let g = graph_of(label).ok()?;
    builtin_records()
        .into_iter()
        .filter(|r| r.graph == label && r.k <= k && r.answer == Answer::Yes)
        .filter_map(|r| r.witness())
        .find(|c| verify(&g, c).map(|rep| rep.is_star).unwrap_or(false))
}

/// Witness from the cache, else from a fresh solver run at `k`.
pub fn witness(label: &str, k: usize) -> Result<Coloring> {
    if let Some(c) = cached_witness(label, k) {
        return Ok(c);
    }
    match compute(label, k, DERIVED_MAX_NODES)? {
        DerivedRecord {
            colors: Some(c), ..
        } => Coloring::new(c),
        _ => Err(Error::Unreachable(format!(
            "{label} has no star coloring with {k} colors"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_is_complete_and_sound() {
        let records = builtin_records();
        assert_eq!(records.len(), DERIVED_ITEMS.len());
        for (r, &(label, k)) in records.iter().zip(DERIVED_ITEMS) {
            assert_eq!((r.graph.as_str(), r.k), (label, k));
            if let Some(c) = r.witness() {
                let g = graph_of(label).unwrap();
                assert!(verify(&g, &c).unwrap().is_star, "{label}");
                assert!(c.num_colors() <= k);
            }
        }
    }

    #[test]
    fn regeneration_is_byte_identical() {
        let (records, incomplete) = regenerate(DERIVED_MAX_NODES);
        assert!(incomplete.is_empty());
        assert_eq!(records_to_json(&records), builtin_cache_text());
    }

    #[test]
    fn tiny_budget_is_reported() {
        let (_, incomplete) = regenerate(5);
        assert!(incomplete.contains(&("C3xC5".to_string(), 5)));
    }

    #[test]
    fn witness_lookup() {
        assert_eq!(cached_witness("C3xC3", 6).unwrap().num_colors(), 6);
        assert!(cached_witness("C3xC3", 5).is_none());
        assert_eq!(witness("P2xP3", 2).unwrap().num_colors(), 2);
    }
}
