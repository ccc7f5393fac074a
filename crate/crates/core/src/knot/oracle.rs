use std::fmt;

use super::{project_to_diagram, CurveError, GaussDiagram, KnotCurve};

/// The Casson invariant from the based Gauss diagram.
///
/// Counts ordered crossing pairs `(a, b)` met in the order
/// `under a, over b, over a, under b` from the base point, weighted by the
/// product of their signs. The count is repeated with the base point moved
/// past every crossing and must not change.
pub fn a2_oracle(d: &GaussDiagram) -> Result<i64, CurveError> {
    d.validate()?;
    let code = d.gauss_code();
    let signs: Vec<i64> = d.crossings.iter().map(|c| c.sign as i64).collect();
    let value = based_count(&code, &signs);
    for shift in 1..code.len() {
        let rotated: Vec<(usize, bool)> = code[shift..]
            .iter()
            .chain(&code[..shift])
            .copied()
            .collect();
        let other = based_count(&rotated, &signs);
        if other != value {
            return Err(CurveError::InconsistentDiagram(format!(
                "base-point dependence: {value} at the original base point, {other} after {shift} steps"
            )));
        }
    }
    Ok(value)
}

/// Generic projection directions used by [`casson_invariant`].
pub const DEFAULT_DIRECTIONS: [[f64; 3]; 3] =
    [[0.1, 0.2, 1.0], [0.83, -0.31, 0.47], [-0.27, 0.91, 0.33]];

/// The Casson invariant of a curve, read from projections along each of
/// `directions`. All projections must agree.
pub fn casson_invariant(k: &KnotCurve, directions: &[[f64; 3]]) -> Result<i64, CurveError> {
    let mut value = None;
    for &d in directions {
        let a2 = a2_oracle(&project_to_diagram(k, d)?)?;
        match value {
            Some(v) if v != a2 => {
                return Err(CurveError::InconsistentDiagram(format!(
                    "projections disagree: {v} and {a2} (direction {d:?})"
                )))
            }
            _ => value = Some(a2),
        }
    }
    value.ok_or_else(|| CurveError::InvalidParams("no projection directions".into()))
}

fn based_count(code: &[(usize, bool)], signs: &[i64]) -> i64 {
    let n = signs.len();
    let mut over = vec![0; n];
    let mut under = vec![0; n];
    for (pos, &(k, o)) in code.iter().enumerate() {
        if o {
            over[k] = pos;
        } else {
            under[k] = pos;
        }
    }
    let mut total = 0;
    for a in 0..n {
        if under[a] > over[a] {
            continue;
        }
        for b in 0..n {
            if under[a] < over[b] && over[b] < over[a] && over[a] < under[b] {
                total += signs[a] * signs[b];
            }
        }
    }
    total
}

/// Integer polynomial in `z`, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial(Vec<i64>);

impl Polynomial {
    pub fn constant(c: i64) -> Self {
        Polynomial(vec![c]).trimmed()
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn coefficient(&self, power: usize) -> i64 {
        self.0.get(power).copied().unwrap_or(0)
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    /// `self + c z other`.
    fn add_shifted(mut self, c: i64, other: &Polynomial) -> Self {
        if self.0.len() < other.0.len() + 1 {
            self.0.resize(other.0.len() + 1, 0);
        }
        for (k, x) in other.0.iter().enumerate() {
            self.0[k + 1] += c * x;
        }
        self.trimmed()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}z"),
                _ => format!("{c}z^{k}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// Conway polynomial by skein recursion on the diagram.
pub fn conway_polynomial(d: &GaussDiagram) -> Result<Polynomial, CurveError> {
    d.validate()?;
    let signs: Vec<i64> = d.crossings.iter().map(|c| c.sign as i64).collect();
    Ok(skein(vec![d.gauss_code()], signs))
}

/// Components are traversed in order, each from its own base point. A
/// diagram in which every crossing is first met from above is a split
/// unlink. Otherwise the first crossing met from below is resolved with
/// `C(D) = C(D switched) + sign z C(D smoothed)`.
fn skein(comps: Vec<Vec<(usize, bool)>>, signs: Vec<i64>) -> Polynomial {
    let mut seen = vec![false; signs.len()];
    let mut bad = None;
    'scan: for comp in &comps {
        for &(k, o) in comp {
            if !seen[k] {
                seen[k] = true;
                if !o {
                    bad = Some(k);
                    break 'scan;
                }
            }
        }
    }
    let Some(c) = bad else {
        return Polynomial::constant(i64::from(comps.len() == 1));
    };
    let sign = signs[c];
    let switched: Vec<Vec<(usize, bool)>> = comps
        .iter()
        .map(|comp| {
            comp.iter()
                .map(|&(k, o)| (k, if k == c { !o } else { o }))
                .collect()
        })
        .collect();
    let mut switched_signs = signs.clone();
    switched_signs[c] = -sign;
    let smoothed = smooth(comps, c);
    skein(switched, switched_signs).add_shifted(sign, &skein(smoothed, signs))
}

/// Oriented smoothing at crossing `c`.
fn smooth(mut comps: Vec<Vec<(usize, bool)>>, c: usize) -> Vec<Vec<(usize, bool)>> {
    let hits: Vec<(usize, usize)> = comps
        .iter()
        .enumerate()
        .flat_map(|(i, comp)| {
            comp.iter()
                .enumerate()
                .filter(|(_, &(k, _))| k == c)
                .map(move |(p, _)| (i, p))
        })
        .collect();
    let [(i, p), (j, q)] = hits[..] else {
        unreachable!("a crossing occurs exactly twice");
    };
    if i == j {
        // A c B c C  ->  (C A) and (B)
        let comp = std::mem::take(&mut comps[i]);
        let inner = comp[p + 1..q].to_vec();
        let outer: Vec<(usize, bool)> = comp[q + 1..].iter().chain(&comp[..p]).copied().collect();
        comps[i] = outer;
        comps.push(inner);
    } else {
        // A c B and C c D  ->  A D C B
        let y = comps.remove(j);
        let x = std::mem::take(&mut comps[i]);
        let merged = x[..p]
            .iter()
            .chain(&y[q + 1..])
            .chain(&y[..q])
            .chain(&x[p + 1..])
            .copied()
            .collect();
        comps[i] = merged;
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::Crossing;

    /// Diagram from a Gauss word like `O1 U2 O3 U1 O2 U3` and per-crossing signs.
    fn word(code: &str, signs: &[i8]) -> GaussDiagram {
        let tokens: Vec<&str> = code.split_whitespace().collect();
        let n = tokens.len() as f64;
        let mut crossings = vec![
            Crossing {
                over: 0.0,
                under: 0.0,
                sign: 1
            };
            signs.len()
        ];
        for (pos, tok) in tokens.iter().enumerate() {
            let k: usize = tok[1..].parse::<usize>().unwrap() - 1;
            let t = pos as f64 / n;
            if tok.starts_with('O') {
                crossings[k].over = t;
            } else {
                crossings[k].under = t;
            }
            crossings[k].sign = signs[k];
        }
        GaussDiagram::new(crossings).unwrap()
    }

    fn trefoil() -> GaussDiagram {
        word("O1 U2 O3 U1 O2 U3", &[1, 1, 1])
    }

    fn figure_eight() -> GaussDiagram {
        word("O1 U2 O3 U1 O4 U3 O2 U4", &[-1, 1, 1, -1])
    }

    #[test]
    fn unknot_is_zero() {
        assert_eq!(a2_oracle(&GaussDiagram::default()).unwrap(), 0);
        assert_eq!(
            conway_polynomial(&GaussDiagram::default()).unwrap(),
            Polynomial::constant(1)
        );
    }

    #[test]
    fn trefoil_values() {
        assert_eq!(a2_oracle(&trefoil()).unwrap(), 1);
        assert_eq!(
            conway_polynomial(&trefoil()).unwrap().coefficients(),
            &[1, 0, 1]
        );
        assert_eq!(a2_oracle(&trefoil().mirrored()).unwrap(), 1);
    }

    #[test]
    fn figure_eight_values() {
        assert_eq!(a2_oracle(&figure_eight()).unwrap(), -1);
        assert_eq!(
            conway_polynomial(&figure_eight()).unwrap().coefficients(),
            &[1, 0, -1]
        );
    }

    #[test]
    fn hopf_link_smoothing() {
        // two one-crossing twists: a positive Hopf link has Conway polynomial z
        let comps = vec![vec![(0, true), (1, false)], vec![(0, false), (1, true)]];
        assert_eq!(skein(comps, vec![1, 1]).coefficients(), &[0, 1]);
    }

    #[test]
    fn kinks_do_not_change_a2() {
        let d = trefoil()
            .with_kink(0.1, -1, false)
            .unwrap()
            .with_kink(0.55, 1, true)
            .unwrap();
        assert_eq!(d.writhe(), 3);
        assert_eq!(a2_oracle(&d).unwrap(), 1);
        assert_eq!(conway_polynomial(&d).unwrap().coefficient(2), 1);
    }

    #[test]
    fn virtual_code_is_rejected() {
        // a single classical crossing pattern that is not planar
        let d = word("O1 O2 U1 U2", &[1, 1]);
        assert!(matches!(
            a2_oracle(&d),
            Err(CurveError::InconsistentDiagram(_))
        ));
    }
}
