use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use super::{DecoratedGraph, Flavor};

/// A sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.to_i64() as f64
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Outcome of [`canonicalize`]: either the class vanishes, or
/// `g = sign * graph` with `graph` the canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalResult {
    Zero,
    Canonical { graph: DecoratedGraph, sign: Sign },
}

impl CanonicalResult {
    pub fn is_zero(&self) -> bool {
        matches!(self, CanonicalResult::Zero)
    }

    pub fn into_parts(self) -> Option<(DecoratedGraph, Sign)> {
        match self {
            CanonicalResult::Zero => None,
            CanonicalResult::Canonical { graph, sign } => Some((graph, sign)),
        }
    }
}

/// Canonical representative under relabelings and edge reversals.
///
/// Manifold graphs admit every vertex permutation; knot graphs admit the
/// cyclic rotations of the external labels combined with any permutation of
/// the internal labels. A transformation with vertex-permutation parity `p`
/// and `l` reversed edges carries the sign `(-1)^(p+l)`. The representative
/// is the lexicographically smallest edge list (edges written as ascending
/// pairs, then sorted).
///
/// Only relabelings that list vertices in the order of an
/// isomorphism-invariant refinement are searched. That set is a union of
/// cosets of the automorphism group, so the minimum and the vanishing test
/// agree with the full search.
pub fn canonicalize(g: &DecoratedGraph) -> CanonicalResult {
    let search = Search::new(g);
    search.run()
}

struct Search<'a> {
    g: &'a DecoratedGraph,
    /// Internal vertices grouped by refined class, in class order.
    classes: Vec<Vec<usize>>,
    best: Option<Vec<(u8, u8)>>,
    seen_plus: bool,
    seen_minus: bool,
    scratch: Vec<(u8, u8)>,
}

impl<'a> Search<'a> {
    fn new(g: &'a DecoratedGraph) -> Self {
        let keys = refined_keys(g);
        let first_free = match g.flavor() {
            Flavor::Manifold => 1,
            Flavor::Knot => g.n_ext() + 1,
        };
        let mut free: Vec<usize> = (first_free..=g.n_vertices()).collect();
        free.sort_by_key(|&v| keys[v - 1]);
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in free {
            match classes.last_mut() {
                Some(c) if keys[c[0] - 1] == keys[v - 1] => c.push(v),
                _ => classes.push(vec![v]),
            }
        }
        Search {
            g,
            classes,
            best: None,
            seen_plus: false,
            seen_minus: false,
            scratch: Vec::with_capacity(g.edges().len()),
        }
    }

    fn run(mut self) -> CanonicalResult {
        let v = self.g.n_vertices();
        let mut new_label = vec![0usize; v + 1];
        let rotations = match self.g.flavor() {
            Flavor::Manifold => 1,
            Flavor::Knot => self.g.n_ext(),
        };
        let n_ext = match self.g.flavor() {
            Flavor::Manifold => 0,
            Flavor::Knot => self.g.n_ext(),
        };
        // slot -> class index
        let slot_class: Vec<usize> = self
            .classes
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| std::iter::repeat_n(ci, c.len()))
            .collect();
        for k in 0..rotations {
            // rotate so that old label k+1 becomes 1
            for (e, label) in new_label.iter_mut().enumerate().take(n_ext + 1).skip(1) {
                *label = (e + n_ext - 1 - k) % n_ext + 1;
            }
            let mut used = vec![false; v + 1];
            self.assign(0, n_ext, &slot_class, &mut new_label, &mut used);
        }
        if self.seen_plus && self.seen_minus {
            return CanonicalResult::Zero;
        }
        let edges = self
            .best
            .expect("at least one relabeling is searched")
            .into_iter()
            .map(|(a, b)| (a as usize, b as usize))
            .collect();
        let graph =
            DecoratedGraph::from_parts(self.g.flavor(), self.g.n_ext(), self.g.n_int(), edges);
        let sign = if self.seen_minus {
            Sign::Minus
        } else {
            Sign::Plus
        };
        CanonicalResult::Canonical { graph, sign }
    }

    fn assign(
        &mut self,
        slot: usize,
        offset: usize,
        slot_class: &[usize],
        new_label: &mut [usize],
        used: &mut [bool],
    ) {
        if slot == slot_class.len() {
            self.leaf(new_label);
            return;
        }
        let class = slot_class[slot];
        for idx in 0..self.classes[class].len() {
            let old = self.classes[class][idx];
            if used[old] {
                continue;
            }
            used[old] = true;
            new_label[old] = offset + slot + 1;
            self.assign(slot + 1, offset, slot_class, new_label, used);
            used[old] = false;
        }
    }

    fn leaf(&mut self, new_label: &[usize]) {
        let mut flips = 0usize;
        self.scratch.clear();
        for &(i, j) in self.g.edges() {
            let (a, b) = (new_label[i], new_label[j]);
            if a < b {
                self.scratch.push((a as u8, b as u8));
            } else {
                flips += 1;
                self.scratch.push((b as u8, a as u8));
            }
        }
        self.scratch.sort_unstable();
        let odd = (permutation_parity(new_label) + flips) % 2 == 1;
        let ord = match &self.best {
            None => Ordering::Less,
            Some(b) => self.scratch.as_slice().cmp(b.as_slice()),
        };
        match ord {
            Ordering::Less => {
                self.best = Some(self.scratch.clone());
                self.seen_plus = !odd;
                self.seen_minus = odd;
            }
            Ordering::Equal => {
                if odd {
                    self.seen_minus = true;
                } else {
                    self.seen_plus = true;
                }
            }
            Ordering::Greater => {}
        }
    }
}

/// Parity (0 or 1) of the permutation `v -> perm[v]` on `1..perm.len()`.
fn permutation_parity(perm: &[usize]) -> usize {
    let n = perm.len() - 1;
    let mut seen = vec![false; n + 1];
    let mut transpositions = 0;
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2
}

/// Colour refinement on the underlying multigraph; externality is part of
/// the initial colour.
fn refined_keys(g: &DecoratedGraph) -> Vec<u32> {
    let v = g.n_vertices();
    let mut mult = vec![vec![0u32; v]; v];
    for &(i, j) in g.edges() {
        mult[i - 1][j - 1] += 1;
        mult[j - 1][i - 1] += 1;
    }
    let initial: Vec<(bool, u32)> = (0..v)
        .map(|x| {
            (
                g.is_external(x + 1) && g.flavor() == Flavor::Knot,
                mult[x].iter().sum(),
            )
        })
        .collect();
    let mut keys = dense_ranks(&initial);
    for _ in 0..v {
        let sig: Vec<(u32, Vec<(u32, u32)>)> = (0..v)
            .map(|x| {
                let mut nb: Vec<(u32, u32)> = (0..v)
                    .filter(|&y| mult[x][y] > 0)
                    .map(|y| (mult[x][y], keys[y]))
                    .collect();
                nb.sort_unstable();
                (keys[x], nb)
            })
            .collect();
        let next = dense_ranks(&sig);
        let stable = distinct(&next) == distinct(&keys);
        keys = next;
        if stable {
            break;
        }
    }
    keys
}

fn dense_ranks<T: Ord + Clone>(items: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    sorted.dedup();
    items
        .iter()
        .map(|it| sorted.binary_search(it).expect("present") as u32)
        .collect()
}

fn distinct(keys: &[u32]) -> usize {
    let mut k = keys.to_vec();
    k.sort_unstable();
    k.dedup();
    k.len()
}
