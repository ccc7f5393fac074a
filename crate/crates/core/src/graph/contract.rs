use num_bigint::BigInt;
use num_rational::BigRational;

use super::canon::Sign;
use super::{DecoratedGraph, Flavor, GraphError, GraphSum};

/// Something that can be contracted: a stored edge (by index) or, for knot
/// graphs, the knot arc leaving external vertex `k` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeRef {
    Edge(usize),
    Arc(usize),
}

/// `sigma(i, j)` for the oriented pair `i -> j`.
fn contraction_sign(i: usize, j: usize) -> Sign {
    if j > i {
        Sign::from_parity(j % 2 == 1)
    } else {
        Sign::from_parity((i + 1) % 2 == 1)
    }
}

/// Contracts one regular edge or knot arc.
///
/// The endpoints merge into `min(i, j)` and every label above `max(i, j)`
/// drops by one. Merging into an external vertex keeps the merged vertex
/// external.
pub fn contract_edge(g: &DecoratedGraph, e: EdgeRef) -> Result<(DecoratedGraph, Sign), GraphError> {
    let (i, j, skip) = match e {
        EdgeRef::Edge(idx) => {
            let &(i, j) = g.edges().get(idx).ok_or(GraphError::NoSuchEdge(e))?;
            if g.flavor() == Flavor::Knot && g.is_external(i) && g.is_external(j) {
                return Err(GraphError::NotContractible);
            }
            (i, j, Some(idx))
        }
        EdgeRef::Arc(k) => {
            if g.flavor() != Flavor::Knot || k == 0 || k > g.n_ext() {
                return Err(GraphError::NoSuchEdge(e));
            }
            (k, k % g.n_ext() + 1, None)
        }
    };
    if g.connections(i, j) != 1 {
        return Err(GraphError::NotRegular);
    }
    let (lo, hi) = (i.min(j), i.max(j));
    let relabel = |v: usize| -> usize {
        if v == hi {
            lo
        } else if v > hi {
            v - 1
        } else {
            v
        }
    };
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(idx, _)| Some(idx) != skip)
        .map(|(_, &(a, b))| (relabel(a), relabel(b)))
        .collect();
    let (n_ext, n_int) = match g.flavor() {
        Flavor::Manifold => (0, g.n_int() - 1),
        Flavor::Knot if g.is_external(hi) => (g.n_ext() - 1, g.n_int()),
        Flavor::Knot => (g.n_ext(), g.n_int() - 1),
    };
    let graph = DecoratedGraph::from_parts(g.flavor(), n_ext, n_int, edges);
    Ok((graph, contraction_sign(i, j)))
}

/// Every edge or arc that the coboundary contracts.
pub fn admissible_edges(g: &DecoratedGraph) -> Vec<EdgeRef> {
    let mut out = Vec::new();
    for (idx, &(i, j)) in g.edges().iter().enumerate() {
        let both_external = g.flavor() == Flavor::Knot && g.is_external(i) && g.is_external(j);
        if !both_external && g.connections(i, j) == 1 {
            out.push(EdgeRef::Edge(idx));
        }
    }
    for (k, (i, j)) in g.knot_arcs().into_iter().enumerate() {
        if g.connections(i, j) == 1 {
            out.push(EdgeRef::Arc(k + 1));
        }
    }
    out
}

/// The coboundary of a single graph.
pub fn delta(g: &DecoratedGraph) -> GraphSum {
    let mut out = GraphSum::new();
    for e in admissible_edges(g) {
        let (h, s) = contract_edge(g, e).expect("admissible edges contract");
        out.add_graph(&h, BigRational::from_integer(BigInt::from(s.to_i64())));
    }
    out
}

/// The coboundary extended linearly.
pub fn delta_sum(s: &GraphSum) -> GraphSum {
    let mut out = GraphSum::new();
    for (g, c) in s.iter() {
        out.add_scaled(&delta(g), c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonicalize, examples};
    use num_traits::Signed;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn sign_rule() {
        assert_eq!(contraction_sign(1, 2), Sign::Plus);
        assert_eq!(contraction_sign(1, 3), Sign::Minus);
        assert_eq!(contraction_sign(2, 1), Sign::Minus);
        assert_eq!(contraction_sign(3, 1), Sign::Plus);
        // sigma(i, j) = -sigma(j, i)
        for i in 1..6 {
            for j in 1..6 {
                if i != j {
                    assert_eq!(contraction_sign(i, j), -contraction_sign(j, i));
                }
            }
        }
    }

    #[test]
    fn contract_k4_edge() {
        let (h, s) = contract_edge(&examples::manifold_k4(), EdgeRef::Edge(0)).unwrap();
        assert_eq!(s, Sign::Plus);
        // 2->3 becomes 1->2, 3->4 -> 2->3, 4->1 -> 3->1, 1->3 -> 1->2, 2->4 -> 1->3
        assert_eq!(h.edges(), &[(1, 2), (2, 3), (3, 1), (1, 2), (1, 3)]);
        assert_eq!(h.grade(), (2, 1));
    }

    #[test]
    fn contract_tripod_leg() {
        let (h, s) = contract_edge(&examples::knot_tripod(), EdgeRef::Edge(0)).unwrap();
        assert_eq!(s, Sign::Plus);
        assert_eq!((h.n_ext(), h.n_int()), (3, 0));
        assert_eq!(h.edges(), &[(2, 1), (3, 1)]);
    }

    #[test]
    fn contract_knot_arc() {
        let (h, s) = contract_edge(&examples::knot_chords(), EdgeRef::Arc(1)).unwrap();
        assert_eq!(s, Sign::Plus);
        assert_eq!(h.edges(), &[(1, 2), (1, 3)]);
        assert_eq!(canonicalize(&h), canonicalize(&examples::knot_fork()));
        // closing arc 4 -> 1 merges into 1 with sign (-1)^(4+1)
        let (h, s) = contract_edge(&examples::knot_chords(), EdgeRef::Arc(4)).unwrap();
        assert_eq!(s, Sign::Minus);
        assert_eq!(h.edges(), &[(1, 3), (2, 1)]);
    }

    #[test]
    fn contraction_errors() {
        let g = examples::knot_chords();
        assert_eq!(
            contract_edge(&g, EdgeRef::Edge(0)),
            Err(GraphError::NotContractible)
        );
        assert_eq!(
            contract_edge(&examples::theta(), EdgeRef::Edge(0)),
            Err(GraphError::NotRegular)
        );
        // with two external vertices both arcs join the same pair
        assert_eq!(
            contract_edge(&examples::knot_bubble(), EdgeRef::Arc(1)),
            Err(GraphError::NotRegular)
        );
        assert_eq!(
            contract_edge(&examples::theta(), EdgeRef::Arc(1)),
            Err(GraphError::NoSuchEdge(EdgeRef::Arc(1)))
        );
    }

    #[test]
    fn theta_is_closed() {
        assert!(delta(&examples::theta()).is_empty());
        assert!(delta(&examples::knot_theta()).is_empty());
    }

    #[test]
    fn manifold_order_two_coefficients() {
        let target = canonicalize(&examples::manifold_contracted())
            .into_parts()
            .unwrap()
            .0;
        let d1 = delta(&examples::manifold_k4());
        let d2 = delta(&examples::manifold_double_square());
        assert_eq!(d1.len(), 1);
        assert_eq!(d2.len(), 1);
        let c1 = d1.coefficient(&target);
        let c2 = d2.coefficient(&target);
        assert_eq!(c1.abs(), int(6));
        assert_eq!(c2.abs(), int(2));
    }

    #[test]
    fn two_external_vertices_never_contract_arcs() {
        let g = examples::knot_bubble();
        assert!(admissible_edges(&g)
            .iter()
            .all(|e| matches!(e, EdgeRef::Edge(_))));
        assert_eq!(admissible_edges(&g).len(), 2);
    }
}
