//! Vertex colorings and the star-coloring verifier.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A total vertex coloring with 1-based colors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(colors: Vec<u32>) -> Result<Self> {
        if let Some(pos) = colors.iter().position(|&c| c == 0) {
            return Err(Error::InvalidInputColoring(format!(
                "vertex {pos} has color 0; colors are 1-based"
            )));
        }
        Ok(Coloring { colors })
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    /// Number of distinct colors used.
    pub fn num_colors(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn max_color(&self) -> u32 {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    /// Restriction to `vertices` (in the given order).
    pub fn restrict(&self, vertices: &[usize]) -> Coloring {
        Coloring {
            colors: vertices.iter().map(|&v| self.colors[v]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ColoringJson {
            k: self.num_colors(),
            colors: self.colors.clone(),
        })
        .expect("coloring serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ColoringJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("coloring JSON: {e}")))?;
        let c = Coloring::new(doc.colors).map_err(|e| Error::Parse(e.to_string()))?;
        if c.num_colors() != doc.k {
            return Err(Error::Parse(format!(
                "coloring JSON: k={} but {} distinct colors",
                doc.k,
                c.num_colors()
            )));
        }
        Ok(c)
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringJson {
    k: usize,
    colors: Vec<u32>,
}

/// Relabels colors by order of first occurrence along the vertex order.
pub fn canonical_form(c: &Coloring) -> Coloring {
    let mut map: HashMap<u32, u32> = HashMap::new();
    let colors = c
        .colors
        .iter()
        .map(|&x| {
            let next = map.len() as u32 + 1;
            *map.entry(x).or_insert(next)
        })
        .collect();
    Coloring { colors }
}

/// Applies `perm` to every color; colors absent from `perm` are kept.
pub fn permute_colors(c: &Coloring, perm: &HashMap<u32, u32>) -> Coloring {
    Coloring {
        colors: c.colors.iter().map(|x| *perm.get(x).unwrap_or(x)).collect(),
    }
}

/// First violation found by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    Monochromatic([usize; 2]),
    /// `w - u - v - x` with `c(w) = c(v)` and `c(u) = c(x)`.
    BicoloredP4([usize; 4]),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Monochromatic([u, v]) => write!(f, "edge {u}-{v} is monochromatic"),
            Violation::BicoloredP4([w, u, v, x]) => write!(f, "path {w}-{u}-{v}-{x} is bicolored"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub proper_violation: Option<[usize; 2]>,
    pub star_violation: Option<[usize; 4]>,
    pub is_star: bool,
}

impl VerificationReport {
    pub fn first_violation(&self) -> Option<Violation> {
        self.proper_violation
            .map(Violation::Monochromatic)
            .or(self.star_violation.map(Violation::BicoloredP4))
    }
}

/// Checks properness and the absence of bicolored paths on four vertices.
///
/// Every P4 is visited through its middle edge: for each ordered edge
/// `(u, v)` with `u` ascending and `v` ascending in `u`'s list, each neighbor
/// `w` of `u` other than `v`, and each neighbor `x` of `v` other than `u`
/// and `w`. The first hit in that order is reported.
pub fn verify(g: &Graph, c: &Coloring) -> Result<VerificationReport> {
    if c.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: c.len(),
        });
    }
    let col = c.colors();
    let proper_violation = g
        .edges()
        .iter()
        .find(|&&(u, v)| col[u] == col[v])
        .map(|&(u, v)| [u, v]);
    let star_violation = first_bicolored_p4(g, col);
    Ok(VerificationReport {
        is_star: proper_violation.is_none() && star_violation.is_none(),
        proper_violation,
        star_violation,
    })
}

fn first_bicolored_p4(g: &Graph, col: &[u32]) -> Option<[usize; 4]> {
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            if col[u] == col[v] {
                continue;
            }
            for &w in g.neighbors(u) {
                if w == v || col[w] != col[v] {
                    continue;
                }
                for &x in g.neighbors(v) {
                    if x != u && x != w && col[x] == col[u] {
                        return Some([w, u, v, x]);
                    }
                }
            }
        }
    }
    None
}

/// Convenience wrapper: `true` iff `c` is a star coloring of `g`.
pub fn is_star_coloring(g: &Graph, c: &Coloring) -> bool {
    verify(g, c).map(|r| r.is_star).unwrap_or(false)
}

/// Star check through the star-forest characterization: every two color
/// classes induce a forest of stars, i.e. no edge of a two-colored induced
/// subgraph joins two vertices of induced degree at least two.
pub fn verify_star_forest(g: &Graph, c: &Coloring) -> Result<bool> {
    if c.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: c.len(),
        });
    }
    let col = c.colors();
    if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| col[u] == col[v]) {
        return Err(Error::NotProper(u, v));
    }
    // deg_into[v][color] = neighbors of v with that color
    let deg_into: Vec<HashMap<u32, usize>> = (0..g.n())
        .map(|v| {
            let mut m = HashMap::new();
            for &w in g.neighbors(v) {
                *m.entry(col[w]).or_insert(0) += 1;
            }
            m
        })
        .collect();
    Ok(g.edges()
        .iter()
        .all(|&(u, v)| !(deg_into[u][&col[v]] >= 2 && deg_into[v][&col[u]] >= 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_family, tensor_product, Family};

    fn col(v: &[u32]) -> Coloring {
        Coloring::new(v.to_vec()).unwrap()
    }

    fn c3xc4() -> Graph {
        build_family(&"C3xC4".parse().unwrap()).unwrap()
    }

    #[test]
    fn c3xc4_row_pattern_is_star() {
        let c = col(&[1, 1, 1, 1, 3, 2, 2, 3, 5, 4, 4, 5]);
        let r = verify(&c3xc4(), &c).unwrap();
        assert!(r.is_star);
        assert_eq!(r.first_violation(), None);
        assert!(verify_star_forest(&c3xc4(), &c).unwrap());
    }

    #[test]
    fn p4_alternating_is_rejected() {
        let p4 = build_family(&Family::Path(4)).unwrap();
        let c = col(&[1, 2, 1, 2]);
        let r = verify(&p4, &c).unwrap();
        assert!(!r.is_star);
        assert_eq!(r.proper_violation, None);
        assert_eq!(r.star_violation, Some([0, 1, 2, 3]));
        assert!(!verify_star_forest(&p4, &c).unwrap());
    }

    #[test]
    fn c5_has_no_star_3_coloring() {
        let c5 = build_family(&Family::Cycle(5)).unwrap();
        assert!(!verify(&c5, &col(&[1, 2, 3, 1, 2])).unwrap().is_star);
        // brute force over all 3^5 assignments
        let mut stars = 0;
        for code in 0..3u32.pow(5) {
            let colors: Vec<u32> = (0..5).map(|i| code / 3u32.pow(i) % 3 + 1).collect();
            if verify(&c5, &col(&colors)).unwrap().is_star {
                stars += 1;
            }
        }
        assert_eq!(stars, 0);
    }

    #[test]
    fn reports_monochromatic_edge() {
        let p3 = build_family(&Family::Path(3)).unwrap();
        let r = verify(&p3, &col(&[1, 1, 2])).unwrap();
        assert_eq!(r.proper_violation, Some([0, 1]));
        assert!(!r.is_star);
        assert!(matches!(
            verify_star_forest(&p3, &col(&[1, 1, 2])),
            Err(Error::NotProper(0, 1))
        ));
    }

    #[test]
    fn length_mismatch() {
        let p3 = build_family(&Family::Path(3)).unwrap();
        assert!(matches!(
            verify(&p3, &col(&[1, 2])),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn edgeless_graph_is_star_forest() {
        let g = Graph::from_edges(4, [], Family::Custom).unwrap();
        assert!(verify_star_forest(&g, &col(&[1, 1, 2, 1])).unwrap());
    }

    #[test]
    fn c4xc4_pattern_star_forest() {
        let g = tensor_product(
            &build_family(&Family::Cycle(4)).unwrap(),
            &build_family(&Family::Cycle(4)).unwrap(),
        );
        let c = col(&[1, 1, 1, 1, 3, 2, 4, 5, 1, 1, 1, 1, 5, 4, 2, 3]);
        assert!(verify_star_forest(&g, &c).unwrap());
        assert!(verify(&g, &c).unwrap().is_star);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_form(&col(&[3, 1, 3, 2])), col(&[1, 2, 1, 3]));
        assert_eq!(canonical_form(&col(&[1, 2, 3])), col(&[1, 2, 3]));
        let perm = HashMap::from([(1, 3), (2, 1), (3, 2)]);
        let c = col(&[2, 3, 1, 1, 2]);
        assert_eq!(
            canonical_form(&permute_colors(&c, &perm)),
            canonical_form(&c)
        );
    }

    #[test]
    fn json_round_trip_and_errors() {
        let c = col(&[1, 3, 2, 3]);
        assert_eq!(c.to_json(), "{\"k\":3,\"colors\":[1,3,2,3]}");
        assert_eq!(Coloring::from_json(&c.to_json()).unwrap(), c);
        assert!(Coloring::from_json("{\"k\":2,\"colors\":[1,2,3]}").is_err());
        assert!(Coloring::from_json("{\"k\":1,\"colors\":[0]}").is_err());
    }
}
