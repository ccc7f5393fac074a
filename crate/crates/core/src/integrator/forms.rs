use std::f64::consts::PI;

use nalgebra::Vector3;

use super::IntegratorError;

/// Largest configuration dimension handled by [`TwoForm`] and [`wedge_top`].
pub const MAX_DIM: usize = 12;

/// A vertex of a configuration: a point on a knot (one coordinate, moving
/// with the tangent) or a free point of space (three coordinates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigPoint {
    pub position: Vector3<f64>,
    pub tangent: Option<Vector3<f64>>,
}

impl ConfigPoint {
    pub fn on_knot(position: Vector3<f64>, tangent: Vector3<f64>) -> Self {
        ConfigPoint {
            position,
            tangent: Some(tangent),
        }
    }

    pub fn free(position: Vector3<f64>) -> Self {
        ConfigPoint {
            position,
            tangent: None,
        }
    }

    fn dof(&self) -> usize {
        if self.tangent.is_some() {
            1
        } else {
            3
        }
    }
}

/// Vertices with their coordinate offsets, in vertex order.
#[derive(Debug, Clone)]
pub struct Configuration {
    points: Vec<ConfigPoint>,
    offsets: Vec<usize>,
    dim: usize,
    eps_coll: f64,
}

impl Configuration {
    pub fn new(points: Vec<ConfigPoint>, eps_coll: f64) -> Result<Self, IntegratorError> {
        let mut offsets = Vec::with_capacity(points.len());
        let mut dim = 0;
        for p in &points {
            offsets.push(dim);
            dim += p.dof();
        }
        if dim > MAX_DIM {
            return Err(IntegratorError::DimensionMismatch { forms: 0, dim });
        }
        Ok(Configuration {
            points,
            offsets,
            dim,
            eps_coll,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[ConfigPoint] {
        &self.points
    }

    /// Coordinate indices of vertex `v` and the derivative of its position
    /// along each of them.
    fn jacobian(&self, v: usize) -> impl Iterator<Item = (usize, Vector3<f64>)> + '_ {
        let p = &self.points[v];
        let base = self.offsets[v];
        let cols: [Option<Vector3<f64>>; 3] = match p.tangent {
            Some(t) => [Some(t), None, None],
            None => [Some(Vector3::x()), Some(Vector3::y()), Some(Vector3::z())],
        };
        cols.into_iter()
            .enumerate()
            .filter_map(move |(c, col)| col.map(|v| (base + c, v)))
    }
}

/// Antisymmetric coefficient matrix of a 2-form on the configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoForm {
    dim: usize,
    a: [[f64; MAX_DIM]; MAX_DIM],
}

impl TwoForm {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        TwoForm {
            dim,
            a: [[0.0; MAX_DIM]; MAX_DIM],
        }
    }

    /// Form with `A[i][j] = c` and `A[j][i] = -c`.
    pub fn elementary(dim: usize, i: usize, j: usize, c: f64) -> Self {
        let mut f = Self::zero(dim);
        f.set(i, j, c);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: f64) {
        self.a[i][j] = c;
        self.a[j][i] = -c;
    }

    pub fn negated(&self) -> Self {
        let mut f = *self;
        for row in f.a.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        f
    }
}

/// `det(f, u, v) / (4 pi |f|^3)`: the unit area form of the sphere pulled
/// back by `x -> x / |x|` at `f`, evaluated on `u` and `v`.
#[inline]
pub(crate) fn gauss_density(f: &Vector3<f64>, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    let r = f.norm();
    f.dot(&u.cross(v)) / (4.0 * PI * r * r * r)
}

/// Pullback of the Gauss form by the direction from vertex `i` to vertex
/// `j` (0-based vertex indices).
pub fn gauss_two_form(
    conf: &Configuration,
    i: usize,
    j: usize,
) -> Result<TwoForm, IntegratorError> {
    let f = conf.points[j].position - conf.points[i].position;
    let distance = f.norm();
    if distance.is_nan() || distance < conf.eps_coll || i == j {
        return Err(IntegratorError::CoincidentPoints { i, j, distance });
    }
    let cols: Vec<(usize, Vector3<f64>)> = conf
        .jacobian(i)
        .map(|(c, v)| (c, -v))
        .chain(conf.jacobian(j))
        .collect();
    let mut form = TwoForm::zero(conf.dim);
    for (x, (a, u)) in cols.iter().enumerate() {
        for (b, v) in &cols[x + 1..] {
            let c = gauss_density(&f, u, v);
            if *a < *b {
                form.set(*a, *b, c);
            } else {
                form.set(*b, *a, -c);
            }
        }
    }
    Ok(form)
}

/// Coefficient of `dx_1 ^ ... ^ dx_d` in the wedge product of the forms.
pub fn wedge_top(forms: &[TwoForm], d: usize) -> Result<f64, IntegratorError> {
    if 2 * forms.len() != d || d > MAX_DIM || forms.iter().any(|f| f.dim != d) {
        return Err(IntegratorError::DimensionMismatch {
            forms: forms.len(),
            dim: d,
        });
    }
    Ok(expand(forms, d, 0, 0))
}

/// Pairs the lowest free coordinate with a later free coordinate and an
/// unused form. The sign counts the free coordinates jumped over.
fn expand(forms: &[TwoForm], d: usize, used_coords: u32, used_forms: u32) -> f64 {
    if used_coords.count_ones() as usize == d {
        return 1.0;
    }
    let a = used_coords.trailing_ones() as usize;
    let mut total = 0.0;
    let mut between = 0;
    for b in a + 1..d {
        if used_coords & (1 << b) != 0 {
            continue;
        }
        let sign = if between % 2 == 0 { 1.0 } else { -1.0 };
        between += 1;
        let coords = used_coords | (1 << a) | (1 << b);
        for (k, f) in forms.iter().enumerate() {
            if used_forms & (1 << k) != 0 {
                continue;
            }
            let c = f.a[a][b];
            if c != 0.0 {
                total += sign * c * expand(forms, d, coords, used_forms | (1 << k));
            }
        }
    }
    total
}
