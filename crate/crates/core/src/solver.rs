//! Exact star-coloring search: k-colorability decisions, the star chromatic
//! number, and enumeration of colorings up to color permutation.
//!
//! The search is plain backtracking over a fixed vertex order (BFS from the
//! lowest vertex of each component) with first-occurrence symmetry breaking,
//! incremental rejection of monochromatic edges and bicolored P4s, and
//! forward checking on the radius-3 neighborhood of each assignment once all
//! `k` colors are in play.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::coloring::{canonical_form, verify, Coloring};
use crate::graph::{connected_components, Graph};
use crate::subgraph::contains_subgraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverBudget {
    /// Cap on search nodes (candidate assignments) per decision.
    pub max_nodes: u64,
    /// Optional wall-clock cap per decision. Hitting it is not reproducible.
    pub max_seconds: Option<f64>,
}

impl SolverBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SolverBudget {
            max_nodes: max_nodes.max(1),
            max_seconds: None,
        }
    }

    pub fn with_seconds(mut self, seconds: f64) -> Self {
        self.max_seconds = Some(seconds);
        self
    }
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget::nodes(1_000_000_000)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Yes(Coloring),
    No,
    Unknown,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

/// A decision together with the number of search nodes it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub decision: Decision,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Solver,
    Formula,
    Construction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiKind {
    Exact(usize),
    Range(usize, usize),
}

impl ChiKind {
    pub fn lo(self) -> usize {
        match self {
            ChiKind::Exact(k) | ChiKind::Range(k, _) => k,
        }
    }

    pub fn hi(self) -> usize {
        match self {
            ChiKind::Exact(k) | ChiKind::Range(_, k) => k,
        }
    }
}

impl std::fmt::Display for ChiKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChiKind::Exact(k) => write!(f, "{k}"),
            ChiKind::Range(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

/// Star chromatic number, exact or bracketed, with an optional witness
/// achieving the upper value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiResult {
    pub kind: ChiKind,
    pub witness: Option<Coloring>,
    pub provenance: Provenance,
}

impl ChiResult {
    pub fn is_exact(&self) -> bool {
        matches!(self.kind, ChiKind::Exact(_))
    }
}

#[derive(Serialize, Deserialize)]
struct ChiResultJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exact: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    range: Option<[usize; 2]>,
    provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<u32>>,
}

impl Serialize for ChiResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (exact, range) = match self.kind {
            ChiKind::Exact(k) => (Some(k), None),
            ChiKind::Range(lo, hi) => (None, Some([lo, hi])),
        };
        ChiResultJson {
            exact,
            range,
            provenance: self.provenance,
            witness: self.witness.as_ref().map(|w| w.colors().to_vec()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChiResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ChiResultJson::deserialize(d)?;
        let kind = match (doc.exact, doc.range) {
            (Some(k), None) => ChiKind::Exact(k),
            (None, Some([lo, hi])) if lo <= hi => ChiKind::Range(lo, hi),
            _ => {
                return Err(D::Error::custom(
                    "expected exactly one of `exact` or a well-ordered `range`",
                ))
            }
        };
        let witness = doc
            .witness
            .map(Coloring::new)
            .transpose()
            .map_err(D::Error::custom)?;
        Ok(ChiResult {
            kind,
            witness,
            provenance: doc.provenance,
        })
    }
}

struct Clock {
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    expired: bool,
}

impl Clock {
    fn new(budget: &SolverBudget) -> Self {
        Clock {
            nodes: 0,
            max_nodes: budget.max_nodes,
            deadline: budget
                .max_seconds
                .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
            expired: false,
        }
    }

    #[inline]
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.expired = true;
        } else if self.nodes & 0xfff == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.expired = true;
                }
            }
        }
        !self.expired
    }
}

/// Backtracking state over one graph and one vertex order.
struct Search {
    k: usize,
    offs: Vec<usize>,
    nbrs: Vec<usize>,
    order: Vec<usize>,
    /// Positions where first-occurrence symmetry breaking restarts.
    comp_start: Vec<bool>,
    /// Vertices within distance 3 that come later in the order.
    ahead: Vec<Vec<usize>>,
    col: Vec<u8>,
    /// cnt[v * (k+1) + c]: colored neighbors of v having color c
    cnt: Vec<u8>,
    clock: Clock,
}

impl Search {
    fn new(
        graph: &Graph,
        k: usize,
        order: Vec<usize>,
        comp_start: Vec<bool>,
        budget: &SolverBudget,
    ) -> Self {
        let n = graph.n();
        let mut offs = Vec::with_capacity(n + 1);
        let mut nbrs = Vec::with_capacity(2 * graph.edge_count());
        offs.push(0);
        for v in 0..n {
            nbrs.extend_from_slice(graph.neighbors(v));
            offs.push(nbrs.len());
        }
        let mut pos = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let ahead = (0..n)
            .map(|v| {
                let mut ball = BTreeSet::new();
                let mut frontier = vec![v];
                for _ in 0..3 {
                    let mut next = Vec::new();
                    for &u in &frontier {
                        for &w in graph.neighbors(u) {
                            if w != v && ball.insert(w) {
                                next.push(w);
                            }
                        }
                    }
                    frontier = next;
                }
                ball.into_iter().filter(|&w| pos[w] > pos[v]).collect()
            })
            .collect();
        Search {
            k,
            offs,
            nbrs,
            order,
            comp_start,
            ahead,
            col: vec![0; n],
            cnt: vec![0; n * (k + 1)],
            clock: Clock::new(budget),
        }
    }

    #[inline]
    fn nb(&self, v: usize) -> &[usize] {
        &self.nbrs[self.offs[v]..self.offs[v + 1]]
    }

    #[inline]
    fn count(&self, v: usize, c: u8) -> u8 {
        self.cnt[v * (self.k + 1) + c as usize]
    }

    /// Whether uncolored `v` can take color `c` without creating a
    /// monochromatic edge or a bicolored P4 among colored vertices.
    fn admissible(&self, v: usize, c: u8) -> bool {
        if self.count(v, c) != 0 {
            return false;
        }
        for &u in self.nb(v) {
            let cu = self.col[u];
            if cu == 0 {
                continue;
            }
            // v inside the path: w - v - u - x
            if self.count(v, cu) >= 2 && self.count(u, c) >= 1 {
                return false;
            }
            // v at an end: v - u - w - x
            for &w in self.nb(u) {
                if w != v && self.col[w] == c && self.count(w, cu) >= 2 {
                    return false;
                }
            }
        }
        true
    }

    fn assign(&mut self, v: usize, c: u8) {
        self.col[v] = c;
        let stride = self.k + 1;
        for i in self.offs[v]..self.offs[v + 1] {
            let u = self.nbrs[i];
            self.cnt[u * stride + c as usize] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.col[v];
        let stride = self.k + 1;
        for i in self.offs[v]..self.offs[v + 1] {
            let u = self.nbrs[i];
            self.cnt[u * stride + c as usize] -= 1;
        }
        self.col[v] = 0;
    }

    /// Every later vertex near `v` still has an admissible color.
    fn forward_ok(&self, v: usize) -> bool {
        self.ahead[v]
            .iter()
            .all(|&y| (1..=self.k as u8).any(|c| self.admissible(y, c)))
    }

    /// Depth-first search from position `depth`; `on_leaf` returns `true` to
    /// stop. Returns `true` if stopped by `on_leaf`.
    fn run(&mut self, depth: usize, max_used: u8, on_leaf: &mut dyn FnMut(&[u8]) -> bool) -> bool {
        if depth == self.order.len() {
            return on_leaf(&self.col);
        }
        let v = self.order[depth];
        let max_used = if self.comp_start[depth] { 0 } else { max_used };
        let limit = (max_used as usize + 1).min(self.k) as u8;
        for c in 1..=limit {
            if !self.clock.tick() {
                return false;
            }
            if !self.admissible(v, c) {
                continue;
            }
            self.assign(v, c);
            let used = max_used.max(c);
            if (used as usize) < self.k || self.forward_ok(v) {
                if self.run(depth + 1, used, on_leaf) {
                    self.unassign(v);
                    return true;
                }
                if self.clock.expired {
                    self.unassign(v);
                    return false;
                }
            }
            self.unassign(v);
        }
        false
    }
}

fn bfs_components(g: &Graph) -> (Vec<usize>, Vec<bool>) {
    let order = g.bfs_order();
    let comps = connected_components(g);
    let roots: BTreeSet<usize> = comps.iter().map(|c| c.vertices[0]).collect();
    let starts = order.iter().map(|v| roots.contains(v)).collect();
    (order, starts)
}

fn decide_connected(g: &Graph, k: usize, budget: &SolverBudget, nodes: &mut u64) -> Decision {
    if g.n() == 0 {
        return Decision::Yes(Coloring::new(Vec::new()).unwrap());
    }
    if k == 0 {
        return Decision::No;
    }
    if k >= g.n() {
        return Decision::Yes(Coloring::new((1..=g.n() as u32).collect()).unwrap());
    }
    let (order, starts) = bfs_components(g);
    let remaining = SolverBudget {
        max_nodes: budget.max_nodes.saturating_sub(*nodes).max(1),
        ..*budget
    };
    let mut search = Search::new(g, k, order, starts, &remaining);
    let mut found: Option<Vec<u32>> = None;
    search.run(0, 0, &mut |col| {
        found = Some(col.iter().map(|&c| c as u32).collect());
        true
    });
    *nodes += search.clock.nodes.min(remaining.max_nodes);
    match found {
        Some(colors) => Decision::Yes(Coloring::new(colors).unwrap()),
        None if search.clock.expired => Decision::Unknown,
        None => Decision::No,
    }
}

/// Decides whether `g` has a star coloring with at most `k` colors; see
/// [`decide_k_counted`].
pub fn decide_k(g: &Graph, k: usize, budget: &SolverBudget) -> Decision {
    decide_k_counted(g, k, budget).decision
}

/// Decides k-star-colorability component by component. `Yes` carries a
/// verified witness, `No` is exhaustive, `Unknown` means the budget ran out.
pub fn decide_k_counted(g: &Graph, k: usize, budget: &SolverBudget) -> Outcome {
    let mut nodes = 0u64;
    let comps = connected_components(g);
    let mut colors = vec![0u32; g.n()];
    let mut unknown = false;
    for comp in &comps {
        if nodes >= budget.max_nodes {
            unknown = true;
            break;
        }
        match decide_connected(&comp.graph, k, budget, &mut nodes) {
            Decision::Yes(w) => {
                for (local, &v) in comp.vertices.iter().enumerate() {
                    colors[v] = w.color(local);
                }
            }
            Decision::No => {
                return Outcome {
                    decision: Decision::No,
                    nodes,
                }
            }
            Decision::Unknown => unknown = true,
        }
    }
    if unknown {
        return Outcome {
            decision: Decision::Unknown,
            nodes,
        };
    }
    let witness = Coloring::new(colors).expect("every vertex colored");
    let report = verify(g, &witness).expect("lengths agree");
    assert!(
        report.is_star,
        "solver produced an invalid witness: {:?}",
        report.first_violation()
    );
    Outcome {
        decision: Decision::Yes(witness),
        nodes,
    }
}

/// Lower bound available without search: 1 for a nonempty graph, 2 with an
/// edge, 3 with a triangle or a path on four vertices.
pub fn trivial_lower_bound(g: &Graph) -> usize {
    if g.n() == 0 {
        0
    } else if g.edge_count() == 0 {
        1
    } else if g.has_triangle() || has_p4(g) {
        3
    } else {
        2
    }
}

fn has_p4(g: &Graph) -> bool {
    g.edges().iter().any(|&(u, v)| {
        g.neighbors(u)
            .iter()
            .any(|&w| w != v && g.neighbors(v).iter().any(|&x| x != u && x != w))
    })
}

/// Star chromatic number by ascending search from a proven lower bound.
///
/// `budget` applies to each k-probe separately. The answer is `Exact` when
/// the witness size meets a certified lower bound, otherwise a `Range`.
pub fn chi_star(g: &Graph, budget: &SolverBudget) -> ChiResult {
    chi_star_from(g, trivial_lower_bound(g), budget)
}

fn chi_star_from(g: &Graph, seed: usize, budget: &SolverBudget) -> ChiResult {
    let mut lo = seed;
    let mut k = seed;
    loop {
        match decide_k(g, k, budget) {
            Decision::Yes(w) => {
                let hi = w.num_colors();
                let kind = if lo >= hi {
                    ChiKind::Exact(hi)
                } else {
                    ChiKind::Range(lo, hi)
                };
                return ChiResult {
                    kind,
                    witness: Some(w),
                    provenance: Provenance::Solver,
                };
            }
            Decision::No => {
                lo = k + 1;
            }
            Decision::Unknown => {}
        }
        k += 1;
    }
}

/// As [`chi_star`], with the lower bound raised by any gadget of known star
/// chromatic number that embeds in `g` as a subgraph.
pub fn chi_star_with_lower_bound_gadgets(
    g: &Graph,
    gadgets: &[(Graph, usize)],
    budget: &SolverBudget,
) -> ChiResult {
    let mut seed = trivial_lower_bound(g);
    for (gadget, chi) in gadgets {
        if *chi > seed {
            if let Ok(Some(_)) = contains_subgraph(g, gadget, budget.max_nodes) {
                seed = *chi;
            }
        }
    }
    chi_star_from(g, seed, budget)
}

/// Result of [`enumerate_canonical`]; `complete` is false when the budget
/// ran out and `colorings` is a prefix of the full list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub colorings: Vec<Coloring>,
    pub complete: bool,
    pub nodes: u64,
}

/// All star colorings of `g` with at most `k` colors, one per
/// color-permutation class, in canonical form and sorted.
pub fn enumerate_canonical(g: &Graph, k: usize, budget: &SolverBudget) -> Enumeration {
    if g.n() == 0 {
        return Enumeration {
            colorings: vec![Coloring::new(Vec::new()).unwrap()],
            complete: true,
            nodes: 0,
        };
    }
    let order = g.bfs_order();
    let mut starts = vec![false; order.len()];
    starts[0] = true;
    let mut search = Search::new(g, k, order, starts, budget);
    let mut found = BTreeSet::new();
    search.run(0, 0, &mut |col| {
        let c = Coloring::new(col.iter().map(|&c| c as u32).collect()).unwrap();
        found.insert(canonical_form(&c));
        false
    });
    Enumeration {
        colorings: found.into_iter().collect(),
        complete: !search.clock.expired,
        nodes: search.clock.nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_star_coloring;
    use crate::graph::{build_family, Family};

    fn g(label: &str) -> Graph {
        build_family(&label.parse::<Family>().unwrap()).unwrap()
    }

    fn budget() -> SolverBudget {
        SolverBudget::nodes(100_000_000)
    }

    #[test]
    fn c5_needs_four() {
        assert_eq!(decide_k(&g("C5"), 3, &budget()), Decision::No);
        assert!(decide_k(&g("C5"), 4, &budget()).is_yes());
    }

    #[test]
    fn c3xc3_needs_six() {
        assert_eq!(decide_k(&g("C3xC3"), 5, &budget()), Decision::No);
        match decide_k(&g("C3xC3"), 6, &budget()) {
            Decision::Yes(w) => assert!(is_star_coloring(&g("C3xC3"), &w)),
            other => panic!("expected Yes, got {other:?}"),
        }
    }

    #[test]
    fn single_edge() {
        assert!(decide_k(&g("P2"), 2, &budget()).is_yes());
        assert_eq!(decide_k(&g("P2"), 1, &budget()), Decision::No);
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_star(&g("P7"), &budget()).kind, ChiKind::Exact(3));
        assert_eq!(chi_star(&g("C3xC5"), &budget()).kind, ChiKind::Exact(6));
        assert_eq!(chi_star(&g("K1,4"), &budget()).kind, ChiKind::Exact(2));
    }

    #[test]
    fn tiny_budget_gives_unknown_and_range() {
        assert_eq!(
            decide_k(&g("C3xC5"), 5, &SolverBudget::nodes(10)),
            Decision::Unknown
        );
        let r = chi_star(&g("C3xC5"), &SolverBudget::nodes(10));
        assert!(!r.is_exact());
        assert!(is_star_coloring(&g("C3xC5"), r.witness.as_ref().unwrap()));
    }

    #[test]
    fn enumeration_examples() {
        let c3p3 = enumerate_canonical(&g("C3xP3"), 3, &budget());
        assert!(c3p3.complete);
        assert_eq!(c3p3.colorings.len(), 1);
        assert_eq!(c3p3.colorings[0].colors(), &[1, 1, 1, 2, 2, 2, 3, 3, 3]);
        assert!(enumerate_canonical(&g("P2"), 1, &budget())
            .colorings
            .is_empty());
    }

    #[test]
    fn gadget_seeding() {
        let p4p4 = g("P4#P4");
        let r = chi_star_with_lower_bound_gadgets(&g("C7xC7"), &[(p4p4, 5)], &budget());
        assert_eq!(r.kind, ChiKind::Exact(5));
        let r = chi_star_with_lower_bound_gadgets(&g("P3xP4"), &[(g("C4"), 3)], &budget());
        assert_eq!(r.kind, ChiKind::Exact(3));
        let plain = chi_star(&g("P5"), &budget());
        assert_eq!(
            chi_star_with_lower_bound_gadgets(&g("P5"), &[(g("C3"), 3)], &budget()),
            plain
        );
    }

    #[test]
    fn chi_result_json() {
        let r = ChiResult {
            kind: ChiKind::Exact(4),
            witness: None,
            provenance: Provenance::Formula,
        };
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(text, "{\"exact\":4,\"provenance\":\"formula\"}");
        assert_eq!(serde_json::from_str::<ChiResult>(&text).unwrap(), r);
        let r = ChiResult {
            kind: ChiKind::Range(4, 5),
            witness: None,
            provenance: Provenance::Formula,
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            "{\"range\":[4,5],\"provenance\":\"formula\"}"
        );
        assert!(serde_json::from_str::<ChiResult>("{\"provenance\":\"solver\"}").is_err());
    }
}
