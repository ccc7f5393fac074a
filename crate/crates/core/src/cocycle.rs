//! Exact linear algebra for the coboundary between graded pieces.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{
    delta, delta_sum, enumerate, DecoratedGraph, Flavor, GraphError, GraphSum, Limits,
};

#[derive(Debug, Error)]
pub enum CocycleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("terms have different grades: {0:?} and {1:?}")]
    GradeMismatch((i64, i64), (i64, i64)),
    #[error("graph {0} is not in the basis")]
    NotInBasis(DecoratedGraph),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, CocycleError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(CocycleError::Dimension("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self, CocycleError> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>, CocycleError> {
        if v.len() != self.cols {
            return Err(CocycleError::Dimension(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| !v[c].is_zero())
                    .fold(BigRational::zero(), |acc, c| acc + self.get(r, c) * &v[c])
            })
            .collect())
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix, CocycleError> {
        if self.cols != rhs.rows {
            return Err(CocycleError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + a * b;
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        echelon(self).pivots.len()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced echelon form kept over the integers: each pivot row is primitive
/// and pivot columns are zero outside their pivot row.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn echelon(m: &RationalMatrix) -> Echelon {
    // clear denominators row by row
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let row = &m.entries[r * m.cols..(r + 1) * m.cols];
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            primitive(ints)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..m.cols {
        let Some(p) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let pivot_row = rows[next].clone();
        let a = &pivot_row[col];
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let b = row[col].clone();
            let combined: Vec<BigInt> = row
                .iter()
                .zip(&pivot_row)
                .map(|(x, y)| a * x - &b * y)
                .collect();
            *row = primitive(combined);
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    rows.truncate(pivots.len());
    Echelon { rows, pivots }
}

/// Divides out the content of an integer row.
fn primitive(row: Vec<BigInt>) -> Vec<BigInt> {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        row
    } else {
        row.into_iter().map(|x| x / &g).collect()
    }
}

/// Basis of the right kernel, one vector per free column in column order,
/// each scaled so that its first nonzero entry is 1.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
    let ech = echelon(m);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.cols];
        for &p in &ech.pivots {
            v[p] = true;
        }
        v
    };
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![BigRational::zero(); m.cols];
            v[free] = BigRational::one();
            for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
                if !row[free].is_zero() {
                    v[pc] = -BigRational::new(row[free].clone(), row[pc].clone());
                }
            }
            let lead = v
                .iter()
                .find(|x| !x.is_zero())
                .cloned()
                .expect("free column entry is one");
            v.into_iter().map(|x| x / &lead).collect()
        })
        .collect()
}

/// Matrix of `delta` from degree `deg` to `deg + 1` at fixed order, on
/// connected graphs. Column `k` holds `delta(basis0[k])` in `basis1`.
#[derive(Debug, Clone)]
pub struct DeltaMatrix {
    pub flavor: Flavor,
    pub ord: i64,
    pub deg: i64,
    pub basis0: Vec<DecoratedGraph>,
    pub basis1: Vec<DecoratedGraph>,
    pub matrix: RationalMatrix,
}

impl DeltaMatrix {
    pub fn coordinates(&self, s: &GraphSum) -> Result<Vec<BigRational>, CocycleError> {
        coordinates(&self.basis0, s)
    }

    pub fn sum_from(&self, v: &[BigRational]) -> GraphSum {
        let mut s = GraphSum::new();
        for (g, c) in self.basis0.iter().zip(v) {
            s.add_graph(g, c.clone());
        }
        s
    }

    /// Kernel basis as graph sums.
    pub fn cocycles(&self) -> Vec<GraphSum> {
        kernel_basis(&self.matrix)
            .iter()
            .map(|v| self.sum_from(v))
            .collect()
    }
}

/// Coordinates of `s` in a basis of canonical graphs.
pub fn coordinates(
    basis: &[DecoratedGraph],
    s: &GraphSum,
) -> Result<Vec<BigRational>, CocycleError> {
    let mut v = vec![BigRational::zero(); basis.len()];
    for (g, c) in s.iter() {
        let idx = basis
            .binary_search(g)
            .map_err(|_| CocycleError::NotInBasis(g.clone()))?;
        v[idx] = c.clone();
    }
    Ok(v)
}

/// The degree 0 to degree 1 matrix at the given order.
pub fn delta_matrix(
    flavor: Flavor,
    ord: i64,
    limits: &Limits,
) -> Result<DeltaMatrix, CocycleError> {
    delta_matrix_at(flavor, ord, 0, limits)
}

pub fn delta_matrix_at(
    flavor: Flavor,
    ord: i64,
    deg: i64,
    limits: &Limits,
) -> Result<DeltaMatrix, CocycleError> {
    let basis0 = enumerate(flavor, ord, deg, true, limits)?;
    let basis1 = enumerate(flavor, ord, deg + 1, true, limits)?;
    let mut matrix = RationalMatrix::zeros(basis1.len(), basis0.len());
    for (col, g) in basis0.iter().enumerate() {
        let image = coordinates(&basis1, &delta(g))?;
        for (row, c) in image.into_iter().enumerate() {
            matrix.set(row, col, c);
        }
    }
    Ok(DeltaMatrix {
        flavor,
        ord,
        deg,
        basis0,
        basis1,
        matrix,
    })
}

/// True iff `delta(s)` vanishes. All terms must share one grade.
pub fn verify_cocycle(s: &GraphSum) -> Result<bool, CocycleError> {
    s.grade()
        .map_err(|(a, b)| CocycleError::GradeMismatch(a, b))?;
    Ok(delta_sum(s).is_empty())
}

/// `numerator/denominator` as a rational, for tests and examples.
pub fn q(numerator: i64, denominator: i64) -> BigRational {
    BigRational::new(numerator.into(), denominator.into())
}

/// Primitive integer direction of a rational vector, sign fixed by the first
/// nonzero entry; used to compare directions.
pub fn direction(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut p = primitive(ints);
    if p.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        p = p.into_iter().map(|x| -x).collect();
    }
    p
}
