//! Small-pattern subgraph (monomorphism) search.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest gadget accepted by [`contains_subgraph`].
pub const MAX_GADGET_VERTICES: usize = 20;

/// Searches for an injective map `gadget -> host` sending every gadget edge
/// to a host edge (the image need not be induced).
///
/// Returns `Ok(None)` only after an exhaustive search; running out of
/// `node_budget` yields `Err(BudgetExceeded)`.
pub fn contains_subgraph(
    host: &Graph,
    gadget: &Graph,
    node_budget: u64,
) -> Result<Option<Vec<usize>>> {
    if gadget.n() > MAX_GADGET_VERTICES {
        return Err(Error::Unsupported(format!(
            "gadget has {} vertices, limit is {MAX_GADGET_VERTICES}",
            gadget.n()
        )));
    }
    if gadget.n() > host.n()
        || gadget.edge_count() > host.edge_count()
        || gadget.max_degree() > host.max_degree()
    {
        return Ok(None);
    }
    let order = match_order(gadget);
    let mut search = Search {
        host,
        gadget,
        order: &order,
        map: vec![usize::MAX; gadget.n()],
        used: vec![false; host.n()],
        nodes: 0,
        budget: node_budget,
    };
    if search.extend(0)? {
        debug_assert!(gadget
            .edges()
            .iter()
            .all(|&(a, b)| host.has_edge(search.map[a], search.map[b])));
        Ok(Some(search.map))
    } else {
        Ok(None)
    }
}

/// Gadget vertices ordered so that each one after a component root has an
/// earlier neighbor; roots are the highest-degree unvisited vertices.
fn match_order(gadget: &Graph) -> Vec<usize> {
    let n = gadget.n();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let root = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (gadget.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed[root] = true;
        order.push(root);
        // greedily pick the unplaced vertex with most placed neighbors
        loop {
            let next = (0..n)
                .filter(|&v| !placed[v])
                .map(|v| {
                    (
                        gadget.neighbors(v).iter().filter(|&&w| placed[w]).count(),
                        gadget.degree(v),
                        v,
                    )
                })
                .filter(|&(links, _, _)| links > 0)
                .max_by_key(|&(links, deg, v)| (links, deg, std::cmp::Reverse(v)));
            match next {
                Some((_, _, v)) => {
                    placed[v] = true;
                    order.push(v);
                }
                None => break,
            }
        }
    }
    order
}

struct Search<'a> {
    host: &'a Graph,
    gadget: &'a Graph,
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let v = self.order[depth];
        let anchor = self
            .gadget
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| self.map[w] != usize::MAX);
        let candidates: Vec<usize> = match anchor {
            Some(w) => self.host.neighbors(self.map[w]).to_vec(),
            None => (0..self.host.n()).collect(),
        };
        for h in candidates {
            if self.used[h] || self.host.degree(h) < self.gadget.degree(v) {
                continue;
            }
            let consistent = self
                .gadget
                .neighbors(v)
                .iter()
                .all(|&w| self.map[w] == usize::MAX || self.host.has_edge(self.map[w], h));
            if !consistent {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded { nodes: self.nodes });
            }
            self.map[v] = h;
            self.used[h] = true;
            if self.extend(depth + 1)? {
                return Ok(true);
            }
            self.map[v] = usize::MAX;
            self.used[h] = false;
        }
        Ok(false)
    }
}
