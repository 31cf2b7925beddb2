//! Simple undirected graphs, the path/cycle/star/bipartite families, and
//! their tensor and Cartesian products.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Family tag carried by a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    /// `K_{1,n}`: a center and `n` leaves.
    Star(usize),
    CompleteBipartite(usize, usize),
    Tensor(Box<Family>, Box<Family>),
    Cartesian(Box<Family>, Box<Family>),
    Custom,
}

impl Family {
    pub fn tensor(a: Family, b: Family) -> Family {
        Family::Tensor(Box::new(a), Box::new(b))
    }

    pub fn cartesian(a: Family, b: Family) -> Family {
        Family::Cartesian(Box::new(a), Box::new(b))
    }

    fn is_product(&self) -> bool {
        matches!(self, Family::Tensor(..) | Family::Cartesian(..))
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_product() {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path(n) => write!(f, "P{n}"),
            Family::Cycle(n) => write!(f, "C{n}"),
            Family::Star(n) => write!(f, "S{n}"),
            Family::CompleteBipartite(a, b) => write!(f, "K{a},{b}"),
            Family::Tensor(a, b) => {
                a.fmt_factor(f)?;
                f.write_str("x")?;
                b.fmt_factor(f)
            }
            Family::Cartesian(a, b) => {
                a.fmt_factor(f)?;
                f.write_str("#")?;
                b.fmt_factor(f)
            }
            Family::Custom => f.write_str("custom"),
        }
    }
}

/// Parses the label grammar produced by `Display`:
/// `P4`, `C5`, `S3`, `K2,3`, `AxB` (tensor), `A#B` (Cartesian), parentheses
/// for nesting, and `custom`. Products associate to the left.
impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = LabelParser {
            s: s.trim().as_bytes(),
            pos: 0,
            src: s,
        };
        let fam = p.product()?;
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(fam)
    }
}

struct LabelParser<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl LabelParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "graph label {:?}: {what} at offset {}",
            self.src, self.pos
        ))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn product(&mut self) -> Result<Family> {
        let mut left = self.atom()?;
        loop {
            match self.peek() {
                Some(b'x') | Some(b'X') => {
                    self.pos += 1;
                    left = Family::tensor(left, self.atom()?);
                }
                Some(b'#') => {
                    self.pos += 1;
                    left = Family::cartesian(left, self.atom()?);
                }
                _ => return Ok(left),
            }
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn atom(&mut self) -> Result<Family> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match c.to_ascii_uppercase() {
            b'(' => {
                let inner = self.product()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            b'P' => Ok(Family::Path(self.number()?)),
            b'C' if self.s[self.pos..].starts_with(b"ustom") => {
                self.pos += 5;
                Ok(Family::Custom)
            }
            b'C' => Ok(Family::Cycle(self.number()?)),
            b'S' => Ok(Family::Star(self.number()?)),
            b'K' => {
                let a = self.number()?;
                if self.peek() != Some(b',') {
                    return Err(self.err("expected ','"));
                }
                self.pos += 1;
                Ok(Family::CompleteBipartite(a, self.number()?))
            }
            _ => {
                self.pos -= 1;
                Err(self.err("unknown family"))
            }
        }
    }
}

/// Vertex of a product graph, addressed by its factor coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductVertex {
    pub i: usize,
    pub j: usize,
}

impl ProductVertex {
    /// Row-major index in a product whose second factor has `n2` vertices.
    pub fn flat(self, n2: usize) -> usize {
        self.i * n2 + self.j
    }

    pub fn from_flat(flat: usize, n2: usize) -> Self {
        ProductVertex {
            i: flat / n2,
            j: flat % n2,
        }
    }
}

/// Immutable simple undirected graph on vertices `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted lexicographically;
/// adjacency lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    label: Family,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicate
    /// edges and out-of-range endpoints.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        label: Family,
    ) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unique(n, norm, label))
    }

    fn from_sorted_unique(n: usize, edges: Vec<(usize, usize)>, label: Family) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            n,
            edges,
            adj,
            label,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn label(&self) -> &Family {
        &self.label
    }

    pub fn with_label(mut self, label: Family) -> Self {
        self.label = label;
        self
    }

    pub fn has_triangle(&self) -> bool {
        self.edges.iter().any(|&(u, v)| {
            let (a, b) = (&self.adj[u], &self.adj[v]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => return true,
                }
            }
            false
        })
    }

    /// Induced subgraph on `vertices` (in the given order); vertex `k` of the
    /// result is `vertices[k]` of `self`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            index[v] = k;
        }
        let mut edges = Vec::new();
        for (k, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let kw = index[w];
                if kw != usize::MAX && k < kw {
                    edges.push((k, kw));
                }
            }
        }
        edges.sort_unstable();
        Self::from_sorted_unique(vertices.len(), edges, Family::Custom)
    }

    /// Vertices in BFS order, starting each component at its lowest index.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        order
    }
}

/// A connected component together with its vertex map into the parent graph.
#[derive(Debug, Clone)]
pub struct Component {
    pub graph: Graph,
    /// `vertices[k]` is the parent vertex of component vertex `k`, ascending.
    pub vertices: Vec<usize>,
}

/// Splits `g` into connected components, ordered by lowest vertex.
pub fn connected_components(g: &Graph) -> Vec<Component> {
    let mut comp = vec![usize::MAX; g.n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for root in 0..g.n {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut stack = vec![root];
        comp[root] = id;
        let mut list = Vec::new();
        while let Some(v) = stack.pop() {
            list.push(v);
            for &w in &g.adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        list.sort_unstable();
        members.push(list);
    }
    if members.len() == 1 {
        return vec![Component {
            graph: g.clone(),
            vertices: members.pop().unwrap(),
        }];
    }
    members
        .into_iter()
        .map(|vertices| Component {
            graph: g.induced(&vertices),
            vertices,
        })
        .collect()
}

/// Builds the canonical member of a family.
///
/// Path and cycle vertices follow the path/cycle order; a star has its center
/// at 0; `K_{a,b}` has parts `0..a` and `a..a+b`.
pub fn build_family(family: &Family) -> Result<Graph> {
    let too_small = |what: &str| Err(Error::SizeTooSmall(format!("{what} in {family}")));
    let g = match *family {
        Family::Path(n) => {
            if n < 1 {
                return too_small("path needs n >= 1");
            }
            Graph::from_sorted_unique(n, (1..n).map(|i| (i - 1, i)).collect(), family.clone())
        }
        Family::Cycle(n) => {
            if n < 3 {
                return too_small("cycle needs n >= 3");
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)), family.clone())?
        }
        Family::Star(n) => {
            if n < 1 {
                return too_small("star needs n >= 1");
            }
            Graph::from_sorted_unique(n + 1, (1..=n).map(|i| (0, i)).collect(), family.clone())
        }
        Family::CompleteBipartite(a, b) => {
            if a < 1 || b < 1 {
                return too_small("complete bipartite needs a, b >= 1");
            }
            let edges = (0..a)
                .flat_map(|u| (a..a + b).map(move |v| (u, v)))
                .collect();
            Graph::from_sorted_unique(a + b, edges, family.clone())
        }
        Family::Tensor(ref x, ref y) => tensor_product(&build_family(x)?, &build_family(y)?),
        Family::Cartesian(ref x, ref y) => cartesian_product(&build_family(x)?, &build_family(y)?),
        Family::Custom => {
            return Err(Error::Unsupported(
                "cannot build a custom graph from its label".into(),
            ))
        }
    };
    Ok(g)
}

/// Tensor (direct) product: `(i,j) ~ (i',j')` iff `i ~ i'` in `g` and
/// `j ~ j'` in `h`. Vertex `(i,j)` has index `i * h.n() + j`.
pub fn tensor_product(g: &Graph, h: &Graph) -> Graph {
    let n2 = h.n;
    let mut edges = Vec::with_capacity(2 * g.edges.len() * h.edges.len());
    for &(a, b) in &g.edges {
        for &(c, d) in &h.edges {
            let e1 = (a * n2 + c, b * n2 + d);
            let e2 = (a * n2 + d, b * n2 + c);
            edges.push((e1.0.min(e1.1), e1.0.max(e1.1)));
            edges.push((e2.0.min(e2.1), e2.0.max(e2.1)));
        }
    }
    edges.sort_unstable();
    Graph::from_sorted_unique(
        g.n * n2,
        edges,
        Family::tensor(g.label.clone(), h.label.clone()),
    )
}

/// Cartesian product: equal in one coordinate and adjacent in the other.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let n2 = h.n;
    let mut edges = Vec::with_capacity(g.n * h.edges.len() + h.n * g.edges.len());
    for i in 0..g.n {
        for &(c, d) in &h.edges {
            edges.push((i * n2 + c, i * n2 + d));
        }
    }
    for &(a, b) in &g.edges {
        for j in 0..n2 {
            edges.push((a * n2 + j, b * n2 + j));
        }
    }
    edges.sort_unstable();
    Graph::from_sorted_unique(
        g.n * n2,
        edges,
        Family::cartesian(g.label.clone(), h.label.clone()),
    )
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl Graph {
    /// DIMACS edge format with 1-based vertices, edges in sorted order.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("c {}\np edge {} {}\n", self.label, self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut label = Family::Custom;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let bad = |msg: &str| Error::Parse(format!("DIMACS line {}: {msg}", lineno + 1));
            let mut parts = line.split_whitespace();
            match parts.next() {
                None => {}
                Some("c") => {
                    if header.is_none() {
                        if let Some(Ok(fam)) = parts.next().map(str::parse::<Family>) {
                            label = fam;
                        }
                    }
                }
                Some("p") => {
                    if parts.next() != Some("edge") {
                        return Err(bad("expected 'p edge <n> <m>'"));
                    }
                    let n = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| bad("bad vertex count"))?;
                    let m = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| bad("bad edge count"))?;
                    header = Some((n, m));
                }
                Some("e") => {
                    let mut endpoint = || -> Result<usize> {
                        let t: usize = parts
                            .next()
                            .and_then(|t| t.parse().ok())
                            .ok_or_else(|| bad("bad endpoint"))?;
                        t.checked_sub(1).ok_or_else(|| bad("vertices are 1-based"))
                    };
                    let u = endpoint()?;
                    let v = endpoint()?;
                    edges.push((u, v));
                }
                Some(other) => return Err(bad(&format!("unknown line type {other:?}"))),
            }
        }
        let (n, m) =
            header.ok_or_else(|| Error::Parse("DIMACS: missing 'p edge' header".into()))?;
        if m != edges.len() {
            return Err(Error::Parse(format!(
                "DIMACS: header declares {m} edges, found {}",
                edges.len()
            )));
        }
        let g = Graph::from_edges(n, edges, Family::Custom)?;
        Ok(g.relabel_if_consistent(label))
    }

    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            label: Some(self.label.to_string()),
        };
        serde_json::to_string(&doc).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
        let g = Graph::from_edges(
            doc.n,
            doc.edges.into_iter().map(|[u, v]| (u, v)),
            Family::Custom,
        )?;
        let label = match doc.label {
            Some(s) => s.parse().unwrap_or(Family::Custom),
            None => Family::Custom,
        };
        Ok(g.relabel_if_consistent(label))
    }

    /// Keeps a family label read from a file only when rebuilding the family
    /// reproduces this exact graph.
    fn relabel_if_consistent(self, label: Family) -> Self {
        if label == Family::Custom {
            return self;
        }
        match build_family(&label) {
            Ok(built) if built.n == self.n && built.edges == self.edges => self.with_label(label),
            _ => self,
        }
    }
}
