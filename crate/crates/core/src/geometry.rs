//! Points, slabs, circumcenters and unit-equidistant circles.
//!
//! Points carry [`Scalar`] coordinates so that rational constructions keep
//! exact distances. Circles are irrational in general and live in `f64`.

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest ambient dimension used by any construction.
pub const MAX_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<Scalar>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point { coords }
    }

    pub fn real(coords: &[f64]) -> Self {
        Point {
            coords: coords.iter().map(|&x| Scalar::Real(x)).collect(),
        }
    }

    pub fn exact(coords: Vec<BigRational>) -> Self {
        Point {
            coords: coords.into_iter().map(Scalar::Exact).collect(),
        }
    }

    pub fn ratios(coords: &[(i64, i64)]) -> Self {
        Point {
            coords: coords.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_exact(&self) -> bool {
        self.coords.iter().all(Scalar::is_exact)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Scalar::to_f64).collect()
    }
}

/// `R^n x [0, epsilon]^k`; the bounded coordinates come last.
#[derive(Clone, Debug, PartialEq)]
pub struct SlabSpec {
    pub n: usize,
    pub k: usize,
    pub epsilon: Scalar,
}

impl SlabSpec {
    pub fn new(n: usize, k: usize, epsilon: Scalar) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("slab needs n >= 1".into()));
        }
        if n + k > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "ambient dimension {} exceeds {MAX_DIM}",
                n + k
            )));
        }
        if epsilon <= Scalar::zero() {
            return Err(Error::InvalidParameter("slab width must be positive".into()));
        }
        Ok(SlabSpec { n, k, epsilon })
    }

    pub fn dim(&self) -> usize {
        self.n + self.k
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub fn distance_squared(p: &Point, q: &Point) -> Result<Scalar> {
    check_dims(p.dim(), q.dim())?;
    if p.is_exact() && q.is_exact() {
        let mut acc = BigRational::zero();
        for (a, b) in p.coords.iter().zip(&q.coords) {
            let d = a.as_exact().unwrap() - b.as_exact().unwrap();
            acc += &d * &d;
        }
        Ok(Scalar::Exact(acc))
    } else {
        let a = p.to_f64();
        let b = q.to_f64();
        Ok(Scalar::Real(dist2(&a, &b)))
    }
}

/// Euclidean distance. Exact whenever both points are exact and the squared
/// distance is a rational square.
pub fn distance(p: &Point, q: &Point) -> Result<Scalar> {
    Ok(distance_squared(p, q)?.sqrt())
}

/// Closed-interval membership of the bounded coordinates.
pub fn slab_contains(slab: &SlabSpec, p: &Point) -> Result<bool> {
    check_dims(slab.dim(), p.dim())?;
    let zero = Scalar::zero();
    Ok(p.coords[slab.n..]
        .iter()
        .all(|c| *c >= zero && *c <= slab.epsilon))
}

/// Signed distance of the bounded coordinates to the nearest slab face;
/// negative when outside. Infinite when the slab has no bounded dims.
pub fn slab_margin(slab: &SlabSpec, p: &[f64]) -> f64 {
    let eps = slab.epsilon.to_f64();
    p[slab.n..]
        .iter()
        .map(|&c| c.min(eps - c))
        .fold(f64::INFINITY, f64::min)
}

/// Exact membership check that is also valid for irrational widths given
/// by their square, e.g. `h = sqrt(3/4)`.
pub fn within_sqrt_bound(value: &BigRational, bound_sq: &BigRational) -> bool {
    !value.is_negative() && &(value * value) <= bound_sq
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

/// Circumcenter of 2 to `d+1` affinely independent points, inside their
/// affine hull, and the circumradius.
pub fn circumcenter(points: &[Vec<f64>]) -> Result<(Vec<f64>, f64)> {
    if points.len() < 2 {
        return Err(Error::InvalidParameter("circumcenter needs at least two points".into()));
    }
    let d = points[0].len();
    for p in points {
        check_dims(d, p.len())?;
    }
    let m = points.len() - 1;
    if m > d {
        return Err(Error::AffinelyDependent);
    }
    let origin = &points[0];
    let rows: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, origin)).collect();
    let gram = DMatrix::from_fn(m, m, |i, j| dot(&rows[i], &rows[j]));
    let diag_prod: f64 = (0..m).map(|i| gram[(i, i)]).product();
    let det = gram.determinant();
    if diag_prod == 0.0 || det.abs() <= 1e-12 * diag_prod {
        return Err(Error::AffinelyDependent);
    }
    let rhs = DVector::from_fn(m, |i, _| 0.5 * gram[(i, i)]);
    let lambda = gram
        .lu()
        .solve(&rhs)
        .ok_or(Error::AffinelyDependent)?;
    let mut center = origin.clone();
    for (i, row) in rows.iter().enumerate() {
        center = axpy(lambda[i], row, &center);
    }
    let radius = dist2(&center, origin).sqrt();
    Ok((center, radius))
}

/// A circle embedded in `R^d` via an orthonormal pair spanning its plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub center: Vec<f64>,
    pub radius: f64,
    pub basis: [Vec<f64>; 2],
}

impl Circle {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Interval swept by coordinate `axis` over the whole circle.
    pub fn coordinate_range(&self, axis: usize) -> (f64, f64) {
        let spread = self.radius * self.basis[0][axis].hypot(self.basis[1][axis]);
        (self.center[axis] - spread, self.center[axis] + spread)
    }

    /// Smallest slab margin over the circle; negative if it leaves the slab.
    pub fn slab_margin(&self, slab: &SlabSpec) -> f64 {
        let eps = slab.epsilon.to_f64();
        (slab.n..self.dim())
            .map(|axis| {
                let (lo, hi) = self.coordinate_range(axis);
                lo.min(eps - hi)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Orthonormal basis of the orthogonal complement of `span(rows)`.
pub(crate) fn orthogonal_complement(rows: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for b in &basis {
            v = axpy(-dot(&v, b), b, &v);
        }
        let n = norm(&v);
        if n > 1e-14 {
            basis.push(v.iter().map(|x| x / n).collect());
        }
    }
    let span = basis.len();
    // Greedily add the coordinate axis with the largest residual; this
    // keeps the result deterministic and well conditioned.
    while basis.len() < d {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for axis in 0..d {
            let mut v = vec![0.0; d];
            v[axis] = 1.0;
            for b in &basis {
                v = axpy(-dot(&v, b), b, &v);
            }
            let n = norm(&v);
            if best.as_ref().is_none_or(|(bn, _)| n > *bn + 1e-12) {
                best = Some((n, v));
            }
        }
        let (n, v) = best.expect("d > 0");
        basis.push(v.iter().map(|x| x / n).collect());
    }
    basis.split_off(span)
}

/// Points at distance exactly 1 from each of `d - 1` centers in `R^d`.
pub fn unit_equidistant_circle(centers: &[Vec<f64>]) -> Result<Circle> {
    let d = centers
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidParameter("no centers given".into()))?;
    if !(2..=MAX_DIM).contains(&d) {
        return Err(Error::InvalidParameter(format!("unsupported dimension {d}")));
    }
    check_dims(d - 1, centers.len())?;
    let (center, big_r) = if centers.len() == 1 {
        (centers[0].clone(), 0.0)
    } else {
        circumcenter(centers)?
    };
    if big_r >= 1.0 {
        return Err(Error::SpheresDoNotMeet(big_r));
    }
    let rows: Vec<Vec<f64>> = centers[1..].iter().map(|p| sub(p, &centers[0])).collect();
    let comp = orthogonal_complement(&rows, d);
    debug_assert_eq!(comp.len(), 2);
    let mut it = comp.into_iter();
    let b0 = it.next().unwrap();
    let b1 = it.next().unwrap();
    Ok(Circle {
        center,
        radius: (1.0 - big_r * big_r).sqrt(),
        basis: [b0, b1],
    })
}

/// `center + r cos(theta) b0 + r sin(theta) b1`.
pub fn circle_point(c: &Circle, theta: f64) -> Vec<f64> {
    let (s, co) = theta.sin_cos();
    c.center
        .iter()
        .zip(c.basis[0].iter().zip(&c.basis[1]))
        .map(|(x, (a, b))| x + c.radius * (co * a + s * b))
        .collect()
}
