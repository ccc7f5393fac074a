use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use super::canon::canonicalize;
use super::{DecoratedGraph, Flavor, GraphError, Limits};

/// Every `(n_ext, n_int, n_edges)` compatible with the grade.
pub fn grade_counts(flavor: Flavor, ord: i64, deg: i64) -> Vec<(usize, usize, usize)> {
    let total = 2 * ord - deg;
    match flavor {
        Flavor::Manifold => {
            let e = 3 * ord - deg;
            if total >= 1 && e >= 0 {
                vec![(0, total as usize, e as usize)]
            } else {
                Vec::new()
            }
        }
        Flavor::Knot => (0..=total - 2)
            .filter_map(|vi| {
                let ve = total - vi;
                let e = ord + vi;
                (ve >= 2 && e >= 0).then_some((ve as usize, vi as usize, e as usize))
            })
            .collect(),
    }
}

/// All nonvanishing canonical graphs of the given grade, sorted.
pub fn enumerate(
    flavor: Flavor,
    ord: i64,
    deg: i64,
    connected: bool,
    limits: &Limits,
) -> Result<Vec<DecoratedGraph>, GraphError> {
    if ord > limits.max_order {
        return Err(GraphError::OrderLimit(ord, limits.max_order));
    }
    let counts = grade_counts(flavor, ord, deg);
    for &(ne, ni, e) in &counts {
        if ne + ni > limits.max_vertices || e > limits.max_edges {
            return Err(GraphError::ResourceLimit {
                vertices: ne + ni,
                edges: e,
                max_vertices: limits.max_vertices,
                max_edges: limits.max_edges,
            });
        }
    }
    let mut out = BTreeSet::new();
    for (ne, ni, e) in counts {
        out.extend(enumerate_counts(flavor, ne, ni, e, connected));
    }
    Ok(out.into_iter().collect())
}

fn enumerate_counts(
    flavor: Flavor,
    n_ext: usize,
    n_int: usize,
    n_edges: usize,
    connected: bool,
) -> HashSet<DecoratedGraph> {
    let v = n_ext + n_int;
    let pairs: Vec<(usize, usize)> = (1..=v)
        .flat_map(|a| ((a + 1)..=v).map(move |b| (a, b)))
        .collect();
    if n_edges == 0 {
        let g = DecoratedGraph::from_parts(flavor, n_ext, n_int, Vec::new());
        return keep(&g, connected).into_iter().collect();
    }
    // split the search on the first (smallest) pair
    (0..pairs.len())
        .into_par_iter()
        .map(|first| {
            let mut found = HashSet::new();
            let mut chosen = vec![pairs[first]];
            extend(&pairs, first, n_edges, &mut chosen, &mut |edges| {
                let g = DecoratedGraph::from_parts(flavor, n_ext, n_int, edges.to_vec());
                if let Some(c) = keep(&g, connected) {
                    found.insert(c);
                }
            });
            found
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

/// Multisets of pairs with indices `>= from`, in nondecreasing index order.
type Edge = (usize, usize);

fn extend(
    pairs: &[(usize, usize)],
    from: usize,
    n_edges: usize,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[Edge]),
) {
    if chosen.len() == n_edges {
        visit(chosen);
        return;
    }
    for idx in from..pairs.len() {
        chosen.push(pairs[idx]);
        extend(pairs, idx, n_edges, chosen, visit);
        chosen.pop();
    }
}

fn keep(g: &DecoratedGraph, connected: bool) -> Option<DecoratedGraph> {
    if connected && !g.is_connected() {
        return None;
    }
    canonicalize(g).into_parts().map(|(c, _)| c)
}
