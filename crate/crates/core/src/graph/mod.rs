//! Decorated graphs, their equivalence classes and the coboundary operator.
//!
//! Two flavors are supported. A *manifold* graph is an oriented multigraph
//! with numbered vertices. A *knot* graph additionally carries a distinguished
//! oriented loop through its external vertices `1..=n_ext`; only the internal
//! (non-knot) edges are stored, the knot arcs `k -> k+1` and `n_ext -> 1` are
//! implicit.

mod canon;
mod contract;
mod enumerate;
mod sum;

pub use canon::{canonicalize, CanonicalResult, Sign};
pub use contract::{admissible_edges, contract_edge, delta, delta_sum, EdgeRef};
pub use enumerate::{enumerate, grade_counts};
pub use sum::{format_rational, parse_rational, Grade, GraphSum, SumTermJson};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {0} -> {1} connects a vertex to itself")]
    SelfLoop(usize, usize),
    #[error("edge {0} -> {1} references a vertex outside 1..={2}")]
    LabelOutOfRange(usize, usize, usize),
    #[error("knot graphs need at least two external vertices, got {0}")]
    TooFewExternal(usize),
    #[error("manifold graphs have no external vertices, got {0}")]
    ManifoldWithExternal(usize),
    #[error("edge endpoints are connected more than once")]
    NotRegular,
    #[error("internal edges joining two external vertices are never contracted")]
    NotContractible,
    #[error("no such edge or knot arc: {0:?}")]
    NoSuchEdge(EdgeRef),
    #[error(
        "graph has {vertices} vertices and {edges} edges, limit is {max_vertices} / {max_edges}"
    )]
    ResourceLimit {
        vertices: usize,
        edges: usize,
        max_vertices: usize,
        max_edges: usize,
    },
    #[error("order {0} exceeds the configured maximum {1}")]
    OrderLimit(i64, i64),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Manifold,
    Knot,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Manifold => f.write_str("manifold"),
            Flavor::Knot => f.write_str("knot"),
        }
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "manifold" => Ok(Flavor::Manifold),
            "knot" => Ok(Flavor::Knot),
            other => Err(format!("unknown flavor '{other}'")),
        }
    }
}

/// Size guards for the factorial-cost searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_order: i64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 10,
            max_edges: 15,
            max_order: 3,
        }
    }
}

/// A decorated graph in either flavor.
///
/// Labels are 1-based. The derived ordering compares
/// `(flavor, n_ext, n_int, edges)` lexicographically, which is the order used
/// to pick canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedGraph {
    flavor: Flavor,
    n_ext: usize,
    n_int: usize,
    edges: Vec<(usize, usize)>,
}

impl DecoratedGraph {
    pub fn new(
        flavor: Flavor,
        n_ext: usize,
        n_int: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        match flavor {
            Flavor::Manifold if n_ext != 0 => return Err(GraphError::ManifoldWithExternal(n_ext)),
            Flavor::Knot if n_ext < 2 => return Err(GraphError::TooFewExternal(n_ext)),
            _ => {}
        }
        let v = n_ext + n_int;
        for &(i, j) in &edges {
            if i == 0 || j == 0 || i > v || j > v {
                return Err(GraphError::LabelOutOfRange(i, j, v));
            }
            if i == j {
                return Err(GraphError::SelfLoop(i, j));
            }
        }
        Ok(DecoratedGraph {
            flavor,
            n_ext,
            n_int,
            edges,
        })
    }

    /// Manifold graph on `vertices` vertices.
    pub fn manifold(vertices: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(Flavor::Manifold, 0, vertices, edges.to_vec())
    }

    /// Knot graph; `edges` lists the internal edges only.
    pub fn knot(n_ext: usize, n_int: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(Flavor::Knot, n_ext, n_int, edges.to_vec())
    }

    /// Builds a graph whose invariants the caller already guarantees.
    pub(crate) fn from_parts(
        flavor: Flavor,
        n_ext: usize,
        n_int: usize,
        edges: Vec<(usize, usize)>,
    ) -> Self {
        debug_assert!(Self::new(flavor, n_ext, n_int, edges.clone()).is_ok());
        DecoratedGraph {
            flavor,
            n_ext,
            n_int,
            edges,
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn n_ext(&self) -> usize {
        self.n_ext
    }

    pub fn n_int(&self) -> usize {
        self.n_int
    }

    pub fn n_vertices(&self) -> usize {
        self.n_ext + self.n_int
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_external(&self, v: usize) -> bool {
        v <= self.n_ext
    }

    /// `(ord, deg)` of the graph.
    pub fn grade(&self) -> (i64, i64) {
        let e = self.edges.len() as i64;
        match self.flavor {
            Flavor::Manifold => {
                let v = self.n_vertices() as i64;
                (e - v, 2 * e - 3 * v)
            }
            Flavor::Knot => {
                let vi = self.n_int as i64;
                let ve = self.n_ext as i64;
                (e - vi, 2 * e - 3 * vi - ve)
            }
        }
    }

    /// Number of stored edges incident to each vertex (index 0 is label 1).
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.n_vertices()];
        for &(i, j) in &self.edges {
            val[i - 1] += 1;
            val[j - 1] += 1;
        }
        val
    }

    /// Manifold: every vertex meets three edges. Knot: internal vertices are
    /// trivalent and external vertices univalent with respect to internal edges.
    pub fn is_trivalent(&self) -> bool {
        self.valences().iter().enumerate().all(|(idx, &d)| {
            if self.flavor == Flavor::Knot && self.is_external(idx + 1) {
                d == 1
            } else {
                d == 3
            }
        })
    }

    /// The knot arcs `(k, k+1)` and `(n_ext, 1)`; empty for manifold graphs.
    pub fn knot_arcs(&self) -> Vec<(usize, usize)> {
        if self.flavor != Flavor::Knot {
            return Vec::new();
        }
        (1..=self.n_ext).map(|k| (k, k % self.n_ext + 1)).collect()
    }

    /// Number of edges, knot arcs included, joining `a` and `b`.
    pub fn connections(&self, a: usize, b: usize) -> usize {
        let joins = |&(i, j): &(usize, usize)| (i == a && j == b) || (i == b && j == a);
        self.edges.iter().filter(|e| joins(e)).count()
            + self.knot_arcs().iter().filter(|e| joins(e)).count()
    }

    /// Manifold: the underlying graph is connected. Knot: the graph including
    /// the knot stays connected after removing any pair of knot arcs.
    pub fn is_connected(&self) -> bool {
        let v = self.n_vertices();
        match self.flavor {
            Flavor::Manifold => components(v, self.edges.iter().copied()) <= 1,
            Flavor::Knot => {
                let arcs = self.knot_arcs();
                for a in 0..arcs.len() {
                    for b in (a + 1)..arcs.len() {
                        let kept = arcs
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != a && k != b)
                            .map(|(_, &e)| e);
                        if components(v, self.edges.iter().copied().chain(kept)) > 1 {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }

    /// True if some cycle runs entirely through edges joining internal
    /// vertices (a doubled internal edge counts as a cycle).
    pub fn has_internal_loop(&self) -> bool {
        let internal: Vec<(usize, usize)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(i, j)| !self.is_external(i) && !self.is_external(j))
            .collect();
        // a forest on the touched vertices has exactly (#vertices - #components) edges
        let v = self.n_vertices();
        let comps = components(v, internal.iter().copied());
        internal.len() > v - comps
    }

    /// Text form: `flavor`, `ext`, `int`, then one `edge i j` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "flavor {}\next {}\nint {}\n",
            self.flavor, self.n_ext, self.n_int
        );
        for &(i, j) in &self.edges {
            out.push_str(&format!("edge {i} {j}\n"));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, GraphError> {
        let mut flavor = None;
        let mut ext = None;
        let mut int = None;
        let mut edges = Vec::new();
        let perr = |line: usize, msg: String| GraphError::Parse { line, msg };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |w: &str| -> Result<usize, GraphError> {
                w.parse::<usize>().map_err(|_| {
                    perr(
                        line_no,
                        format!("expected a non-negative integer, got '{w}'"),
                    )
                })
            };
            match words.as_slice() {
                ["flavor", f] => flavor = Some(f.parse::<Flavor>().map_err(|m| perr(line_no, m))?),
                ["ext", n] => ext = Some(num(n)?),
                ["int", n] => int = Some(num(n)?),
                ["edge", i, j] => edges.push((num(i)?, num(j)?)),
                _ => return Err(perr(line_no, format!("unrecognized line '{line}'"))),
            }
        }
        let flavor = flavor.ok_or_else(|| perr(0, "missing 'flavor' line".into()))?;
        let ext = ext.unwrap_or(0);
        let int = int.ok_or_else(|| perr(0, "missing 'int' line".into()))?;
        Self::new(flavor, ext, int, edges)
    }
}

impl fmt::Display for DecoratedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}+{}](", self.flavor, self.n_ext, self.n_int)?;
        for (k, (i, j)) in self.edges.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}>{j}")?;
        }
        f.write_str(")")
    }
}

/// JSON shape of a graph: `{"flavor": .., "ext": .., "int": .., "edges": [[i, j], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub flavor: Flavor,
    pub ext: usize,
    pub int: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&DecoratedGraph> for GraphJson {
    fn from(g: &DecoratedGraph) -> Self {
        GraphJson {
            flavor: g.flavor,
            ext: g.n_ext,
            int: g.n_int,
            edges: g.edges.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for DecoratedGraph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        DecoratedGraph::new(
            j.flavor,
            j.ext,
            j.int,
            j.edges.into_iter().map(|[a, b]| (a, b)).collect(),
        )
    }
}

impl Serialize for DecoratedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DecoratedGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        DecoratedGraph::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Connected components of a graph on vertices `1..=n` (isolated vertices count).
fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n;
    for (i, j) in edges {
        let (a, b) = (find(&mut parent, i - 1), find(&mut parent, j - 1));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

/// Named graphs of order one and two, external vertices first.
pub mod examples {
    use super::DecoratedGraph;

    pub fn theta() -> DecoratedGraph {
        DecoratedGraph::manifold(2, &[(1, 2), (1, 2), (1, 2)]).unwrap()
    }

    /// The complete graph K4, edges oriented around the square then across.
    pub fn manifold_k4() -> DecoratedGraph {
        DecoratedGraph::manifold(4, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3), (2, 4)]).unwrap()
    }

    /// Square with two opposite doubled sides.
    pub fn manifold_double_square() -> DecoratedGraph {
        DecoratedGraph::manifold(4, &[(1, 4), (4, 1), (1, 2), (2, 3), (2, 3), (3, 4)]).unwrap()
    }

    /// The order 2, degree 1 manifold graph both of the above contract to.
    pub fn manifold_contracted() -> DecoratedGraph {
        DecoratedGraph::manifold(3, &[(1, 2), (1, 2), (3, 1), (1, 3), (2, 3)]).unwrap()
    }

    /// Knot theta: two external vertices joined by one chord.
    pub fn knot_theta() -> DecoratedGraph {
        DecoratedGraph::knot(2, 0, &[(1, 2)]).unwrap()
    }

    /// Two crossing chords on four external vertices.
    pub fn knot_chords() -> DecoratedGraph {
        DecoratedGraph::knot(4, 0, &[(1, 3), (2, 4)]).unwrap()
    }

    /// Tripod: three external vertices joined to one internal vertex.
    pub fn knot_tripod() -> DecoratedGraph {
        DecoratedGraph::knot(3, 1, &[(1, 4), (2, 4), (3, 4)]).unwrap()
    }

    /// Two external vertices joined through a doubled internal edge.
    ///
    /// Labelling the external vertices 1 and 4 instead is the even
    /// relabelling 2->3, 3->4, 4->2 and keeps the sign.
    pub fn knot_bubble() -> DecoratedGraph {
        DecoratedGraph::knot(2, 2, &[(1, 3), (3, 4), (3, 4), (4, 2)]).unwrap()
    }

    /// Three external vertices, vertex 1 carrying two chords.
    pub fn knot_fork() -> DecoratedGraph {
        DecoratedGraph::knot(3, 0, &[(1, 3), (1, 2)]).unwrap()
    }

    /// Two external vertices, one internal vertex, doubled edge from 1.
    ///
    /// Labelling the internal vertex 2 instead is a transposition and
    /// negates the graph.
    pub fn knot_fork_bubble() -> DecoratedGraph {
        DecoratedGraph::knot(2, 1, &[(1, 3), (1, 3), (3, 2)]).unwrap()
    }
}
