//! Pentagon configuration in `R^2 x [0, eps]^2` and the radius map.
//!
//! Three points `v_1, v_2, v_3` are taken over vertices of a small regular
//! pentagon in the bounded `(z, t)` plane, with tiny planar offsets so they
//! are affinely independent in `R^4`. For `w` near `u_1` (the circumcenter
//! lifted off the triangle's plane) the circles at unit distance from
//! `w` and two of the `v`'s have radii `r_i(w)`; the map `w -> r` is a local
//! diffeomorphism on a hyperplane, so `w` can be chosen to make all three
//! radii forbidden simultaneously.

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::constructions::forbidden::{enumerate_forbidden_radii, ForbiddenRadius};
use crate::error::{invalid, Error, Result};
use crate::geometry::{circumcenter, dot, norm, orthogonal_complement, sub, unit_equidistant_circle, Circle, SlabSpec};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct PentagonParams {
    pub epsilon: f64,
    /// Circumradius of the pentagon.
    pub epsilon1: f64,
    /// Mutual planar distance of the three points.
    pub planar_offset: f64,
    /// Distance of `u_1` from the triangle's plane.
    pub lift: f64,
    /// Radius of the ball around `u_1` searched for `w`.
    pub ball_radius: f64,
    pub epsilon2: f64,
    pub epsilon3: f64,
    /// Rotation of the pentagon inside the bounded square.
    pub phase: f64,
    pub vertices: [usize; 3],
}

impl PentagonParams {
    /// Defaults scaled to `epsilon1`: planar offset `1e-4 epsilon1`, lift
    /// `5e-3 epsilon1`, ball radius a third of the lift.
    pub fn new(epsilon: f64, epsilon1: f64) -> Self {
        let lift = 5e-3 * epsilon1;
        PentagonParams {
            epsilon,
            epsilon1,
            planar_offset: 1e-4 * epsilon1,
            lift,
            ball_radius: lift / 3.0,
            epsilon2: 0.01,
            epsilon3: 0.01,
            phase: std::f64::consts::PI / 20.0,
            vertices: [0, 1, 3],
        }
    }

    /// `epsilon = 0.3`, `epsilon1 = 0.06`.
    pub fn reference() -> Self {
        PentagonParams::new(0.3, 0.06)
    }

    pub fn slab(&self) -> Result<SlabSpec> {
        SlabSpec::new(2, 2, Scalar::Real(self.epsilon))
    }
}

#[derive(Clone, Debug)]
pub struct PentagonConfig {
    pub params: PentagonParams,
    /// Pentagon vertices in the bounded plane.
    pub pentagon: [[f64; 2]; 5],
    pub points: [Vec<f64>; 3],
    pub u0: Vec<f64>,
    pub circumradius: f64,
    pub normal: Vec<f64>,
    pub u1: Vec<f64>,
    /// Orthonormal basis of the hyperplane through `u_1` and the `v_i`.
    pub basis: [Vec<f64>; 3],
    /// Largest principal angle between the triangle's plane and the
    /// bounded plane.
    pub plane_angle: f64,
    /// Angles of the triangle `v_1 v_2 v_3`.
    pub angles: [f64; 3],
    /// `sin(eps2) - 16 (d/eps1 + 2 d^2/eps1^2)`; nonnegative when the
    /// sufficient tilt condition holds.
    pub tilt_slack: f64,
    /// `(eps1/2) sin(eps3/2) - d`; nonnegative when the sufficient angle
    /// condition holds.
    pub angle_slack: f64,
}

fn pentagon_vertices(p: &PentagonParams) -> [[f64; 2]; 5] {
    let c = p.epsilon / 2.0;
    std::array::from_fn(|j| {
        let a = p.phase + 2.0 * std::f64::consts::PI * j as f64 / 5.0;
        [c + p.epsilon1 * a.cos(), c + p.epsilon1 * a.sin()]
    })
}

fn gram_schmidt(vectors: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut x = v.clone();
        for b in &out {
            let d = dot(&x, b);
            x = x.iter().zip(b).map(|(xi, bi)| xi - d * bi).collect();
        }
        let n = norm(&x);
        if n <= 1e-14 * norm(v).max(1e-300) {
            return Err(Error::AffinelyDependent);
        }
        out.push(x.iter().map(|xi| xi / n).collect());
    }
    Ok(out)
}

fn triangle_angles(p: &[Vec<f64>; 3]) -> [f64; 3] {
    std::array::from_fn(|i| {
        let a = sub(&p[(i + 1) % 3], &p[i]);
        let b = sub(&p[(i + 2) % 3], &p[i]);
        (dot(&a, &b) / (norm(&a) * norm(&b))).clamp(-1.0, 1.0).acos()
    })
}

/// Largest principal angle between `span(plane)` (orthonormal) and the
/// coordinate plane of axes 2 and 3.
fn angle_to_bounded_plane(plane: &[Vec<f64>]) -> f64 {
    let m = Matrix2::from_fn(|i, j| plane[i][2 + j]);
    let sv = m.svd(false, false).singular_values;
    sv.min().clamp(-1.0, 1.0).acos()
}

pub fn pentagon_config(epsilon: f64, epsilon1: f64) -> Result<PentagonConfig> {
    PentagonConfig::new(PentagonParams::new(epsilon, epsilon1))
}

impl PentagonConfig {
    pub fn new(params: PentagonParams) -> Result<Self> {
        let p = &params;
        if !(p.epsilon > 0.0) || p.epsilon >= 1.0 {
            return Err(invalid(format!("slab width {} must lie in (0, 1)", p.epsilon)));
        }
        if !(p.epsilon1 > 0.0) || p.epsilon1 >= p.epsilon / 2.0 {
            return Err(invalid(format!("pentagon radius {} must lie in (0, eps/2)", p.epsilon1)));
        }
        if !(p.planar_offset > 0.0 && p.lift > 0.0 && p.ball_radius > 0.0) {
            return Err(invalid("planar offset, lift and ball radius must be positive"));
        }
        if p.ball_radius >= p.lift {
            return Err(invalid("ball radius must be below the lift"));
        }
        let mut seen = p.vertices;
        seen.sort_unstable();
        if seen[2] >= 5 || seen[0] == seen[1] || seen[1] == seen[2] {
            return Err(invalid(format!("need three distinct pentagon vertices, got {:?}", p.vertices)));
        }
        let pentagon = pentagon_vertices(p);
        let d = p.planar_offset;
        let planar = [[0.0, 0.0], [d, 0.0], [d / 2.0, d * 3f64.sqrt() / 2.0]];
        let points: [Vec<f64>; 3] = std::array::from_fn(|i| {
            let m = pentagon[p.vertices[i]];
            vec![planar[i][0], planar[i][1], m[0], m[1]]
        });
        let (u0, circumradius) = circumcenter(&points)?;
        let rows = vec![sub(&points[1], &points[0]), sub(&points[2], &points[0])];
        let normal = orthogonal_complement(&rows, 4).swap_remove(0);
        let u1: Vec<f64> = u0.iter().zip(&normal).map(|(a, n)| a + p.lift * n).collect();
        let basis = gram_schmidt(&points.iter().map(|v| sub(v, &u1)).collect::<Vec<_>>())?;
        let basis: [Vec<f64>; 3] = [basis[0].clone(), basis[1].clone(), basis[2].clone()];
        let plane = gram_schmidt(&rows)?;
        let plane_angle = angle_to_bounded_plane(&plane);
        let angles = triangle_angles(&points);
        let ratio = d / p.epsilon1;
        let tilt_slack = p.epsilon2.sin() - 16.0 * (ratio + 2.0 * ratio * ratio);
        let angle_slack = p.epsilon1 / 2.0 * (p.epsilon3 / 2.0).sin() - d;
        let config = PentagonConfig {
            params,
            pentagon,
            points,
            u0,
            circumradius,
            normal,
            u1,
            basis,
            plane_angle,
            angles,
            tilt_slack,
            angle_slack,
        };
        if config.plane_angle > config.params.epsilon2 {
            return Err(Error::Infeasible(format!(
                "triangle plane tilted by {:.3e} > eps2 = {}",
                config.plane_angle, config.params.epsilon2
            )));
        }
        let min_angle = config.angles.iter().copied().fold(f64::INFINITY, f64::min);
        if min_angle < std::f64::consts::PI / 5.0 - config.params.epsilon3 {
            return Err(Error::Infeasible(format!("triangle angle {min_angle:.6} below pi/5 - eps3")));
        }
        Ok(config)
    }

    /// `u_1 + sum s_j e_j`.
    pub fn point(&self, s: &[f64; 3]) -> Vec<f64> {
        let mut w = self.u1.clone();
        for (sj, e) in s.iter().zip(&self.basis) {
            for (wi, ei) in w.iter_mut().zip(e) {
                *wi += sj * ei;
            }
        }
        w
    }

    /// The two `v`'s other than `v_i`.
    pub fn pair(&self, i: usize) -> (&[f64], &[f64]) {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let (j, k) = (j.min(k), j.max(k));
        (&self.points[j], &self.points[k])
    }

    /// Circle of points at unit distance from `w` and the pair opposite `v_i`.
    pub fn circle(&self, w: &[f64], i: usize) -> Result<Circle> {
        let (a, b) = self.pair(i);
        unit_equidistant_circle(&[w.to_vec(), a.to_vec(), b.to_vec()])
    }
}

struct TriangleTerms {
    big_r2: f64,
    grad_r2: Vec<f64>,
}

/// Squared circumradius of `(w, a, b)` and its gradient in `w`.
fn triangle_terms(w: &[f64], a: &[f64], b: &[f64]) -> Result<TriangleTerms> {
    let av = sub(a, w);
    let bv = sub(b, w);
    let cv = sub(&av, &bv);
    let aa = dot(&av, &av);
    let bb = dot(&bv, &bv);
    let ab = dot(&av, &bv);
    let cc = dot(&cv, &cv);
    let g = aa * bb - ab * ab;
    if g <= 1e-24 * aa * bb {
        return Err(Error::AffinelyDependent);
    }
    let n = aa * bb * cc;
    let big_r2 = n / (4.0 * g);
    let grad_r2 = (0..w.len())
        .map(|k| {
            let dg = -2.0 * av[k] * bb - 2.0 * bv[k] * aa + 2.0 * ab * (av[k] + bv[k]);
            let dn = cc * (-2.0 * av[k] * bb - 2.0 * bv[k] * aa);
            (dn * g - n * dg) / (4.0 * g * g)
        })
        .collect();
    Ok(TriangleTerms { big_r2, grad_r2 })
}

/// `r_i(w) = sqrt(1 - R_i^2)` where `R_i` is the circumradius of `w` and the
/// pair opposite `v_i`.
pub fn radius_map(config: &PentagonConfig, w: &[f64]) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (i, r) in out.iter_mut().enumerate() {
        let (a, b) = config.pair(i);
        let t = triangle_terms(w, a, b)?;
        if t.big_r2 >= 1.0 {
            return Err(Error::SpheresDoNotMeet(t.big_r2.sqrt()));
        }
        *r = (1.0 - t.big_r2).sqrt();
    }
    Ok(out)
}

/// Full gradients of the `r_i` in `R^4`.
pub fn radius_gradients(config: &PentagonConfig, w: &[f64]) -> Result<[Vec<f64>; 3]> {
    let mut out: [Vec<f64>; 3] = Default::default();
    for (i, g) in out.iter_mut().enumerate() {
        let (a, b) = config.pair(i);
        let t = triangle_terms(w, a, b)?;
        if t.big_r2 >= 1.0 {
            return Err(Error::SpheresDoNotMeet(t.big_r2.sqrt()));
        }
        let r = (1.0 - t.big_r2).sqrt();
        *g = t.grad_r2.iter().map(|d| -d / (2.0 * r)).collect();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobianReport {
    /// `J[i][j] = d r_i / d s_j` in hyperplane coordinates.
    pub matrix: [[f64; 3]; 3],
    pub det: f64,
    pub singular_values: [f64; 3],
}

impl JacobianReport {
    pub fn nonsingular(&self) -> bool {
        self.singular_values[2] > 1e-12 * self.singular_values[0]
    }
}

pub fn radius_map_jacobian(config: &PentagonConfig, w: &[f64]) -> Result<JacobianReport> {
    let grads = radius_gradients(config, w)?;
    let matrix: [[f64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| dot(&grads[i], &config.basis[j])));
    let m = Matrix3::from_fn(|i, j| matrix[i][j]);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(JacobianReport {
        matrix,
        det: m.determinant(),
        singular_values: [sv[0], sv[1], sv[2]],
    })
}

#[derive(Clone, Debug)]
pub struct TripleSolution {
    pub targets: [f64; 3],
    pub coords: [f64; 3],
    pub w: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub circles: [Circle; 3],
    pub slab_margins: [f64; 3],
}

impl TripleSolution {
    pub fn inside_slab(&self) -> bool {
        self.slab_margins.iter().all(|&m| m >= 0.0)
    }

    pub fn distance_from_u1(&self) -> f64 {
        self.coords.iter().map(|s| s * s).sum::<f64>().sqrt()
    }
}

fn jacobian_at(config: &PentagonConfig, s: &[f64; 3]) -> Result<Matrix3<f64>> {
    let j = radius_map_jacobian(config, &config.point(s))?;
    Ok(Matrix3::from_fn(|a, b| j.matrix[a][b]))
}

fn residual_at(config: &PentagonConfig, s: &[f64; 3], targets: &[f64; 3]) -> Result<Vector3<f64>> {
    let r = radius_map(config, &config.point(s))?;
    Ok(Vector3::from_fn(|i, _| r[i] - targets[i]))
}

/// Linearized step `J^{-1} (targets - r(u_1))` at `u_1`.
pub fn predicted_step(config: &PentagonConfig, targets: &[f64; 3]) -> Result<f64> {
    let j = jacobian_at(config, &[0.0; 3])?;
    let f = residual_at(config, &[0.0; 3], targets)?;
    let inv = j
        .try_inverse()
        .ok_or_else(|| Error::NewtonFailed("singular Jacobian at u1".into()))?;
    Ok((inv * f).norm())
}

/// Damped Newton solve of `r(w) = targets` for `w` in the hyperplane,
/// starting at `u_1`.
pub fn solve_radius_targets(config: &PentagonConfig, targets: [f64; 3]) -> Result<TripleSolution> {
    const TOL: f64 = 1e-14;
    let ball = config.params.ball_radius;
    let step = predicted_step(config, &targets)?;
    if step > ball {
        return Err(Error::OutsideNeighborhood { step, radius: ball });
    }
    let mut s = [0.0; 3];
    let mut f = residual_at(config, &s, &targets)?;
    let mut iterations = 0;
    while f.amax() > TOL {
        if iterations >= 50 {
            return Err(Error::NewtonFailed(format!("no convergence after 50 steps, residual {:.3e}", f.amax())));
        }
        let j = jacobian_at(config, &s)?;
        let delta = j
            .lu()
            .solve(&(-f))
            .ok_or_else(|| Error::NewtonFailed("singular Jacobian".into()))?;
        let mut lambda = 1.0;
        let mut halvings = 0;
        loop {
            let trial = [s[0] + lambda * delta[0], s[1] + lambda * delta[1], s[2] + lambda * delta[2]];
            let ft = residual_at(config, &trial, &targets)?;
            if ft.norm() < f.norm() {
                s = trial;
                f = ft;
                break;
            }
            halvings += 1;
            if halvings > 60 {
                if f.amax() < 1e-12 {
                    // Stalled at rounding level.
                    return finish(config, targets, s, iterations, f.amax());
                }
                return Err(Error::NewtonFailed(format!("line search stalled at residual {:.3e}", f.amax())));
            }
            lambda /= 2.0;
        }
        iterations += 1;
    }
    finish(config, targets, s, iterations, f.amax())
}

fn finish(config: &PentagonConfig, targets: [f64; 3], s: [f64; 3], iterations: usize, residual: f64) -> Result<TripleSolution> {
    let dist = s.iter().map(|x| x * x).sum::<f64>().sqrt();
    if dist > config.params.ball_radius {
        return Err(Error::NewtonFailed(format!(
            "solution left the ball: |w - u1| = {dist:.3e} > {:.3e}",
            config.params.ball_radius
        )));
    }
    let w = config.point(&s);
    let slab = config.params.slab()?;
    let circles: [Circle; 3] = [config.circle(&w, 0)?, config.circle(&w, 1)?, config.circle(&w, 2)?];
    let slab_margins = std::array::from_fn(|i| circles[i].slab_margin(&slab));
    Ok(TripleSolution {
        targets,
        coords: s,
        w,
        iterations,
        residual,
        circles,
        slab_margins,
    })
}

/// Solves for a triple of forbidden radii.
pub fn solve_forbidden_triple(config: &PentagonConfig, radii: &[ForbiddenRadius; 3]) -> Result<TripleSolution> {
    solve_radius_targets(config, [radii[0].radius, radii[1].radius, radii[2].radius])
}

#[derive(Clone, Debug)]
pub struct ForbiddenTriple {
    pub radii: [ForbiddenRadius; 3],
    pub predicted_step: f64,
    pub solution: TripleSolution,
}

/// Searches, for each coordinate, the `per_axis` forbidden radii with
/// `m <= max_m` nearest to `r_i(u_1)`, and solves for the combination with
/// the smallest linearized step.
pub fn find_forbidden_triple(config: &PentagonConfig, max_m: u64, per_axis: usize) -> Result<ForbiddenTriple> {
    if per_axis == 0 {
        return Err(invalid("need at least one candidate per axis"));
    }
    let r0 = radius_map(config, &config.u1)?;
    let j = jacobian_at(config, &[0.0; 3])?;
    let inv = j
        .try_inverse()
        .ok_or_else(|| Error::NewtonFailed("singular Jacobian at u1".into()))?;
    let mut lists: Vec<Vec<ForbiddenRadius>> = Vec::new();
    for &r in &r0 {
        let mut width = 1e-7;
        let found = loop {
            let lo = (r - width).max(0.5 + 1e-12);
            let found = enumerate_forbidden_radii(lo, r + width, max_m)?;
            if found.len() >= per_axis || width > 0.25 {
                break found;
            }
            width *= 4.0;
        };
        let mut found = found;
        found.sort_by(|a, b| (a.radius - r).abs().total_cmp(&(b.radius - r).abs()));
        found.truncate(per_axis);
        if found.is_empty() {
            return Err(Error::Infeasible(format!("no forbidden radius near {r} with m <= {max_m}")));
        }
        lists.push(found);
    }
    let mut best: Option<([ForbiddenRadius; 3], f64)> = None;
    for a in &lists[0] {
        for b in &lists[1] {
            for c in &lists[2] {
                let f = Vector3::new(a.radius - r0[0], b.radius - r0[1], c.radius - r0[2]);
                let step = (inv * f).norm();
                if best.as_ref().is_none_or(|(_, s)| step < *s) {
                    best = Some(([*a, *b, *c], step));
                }
            }
        }
    }
    let (radii, predicted_step) = best.expect("candidate lists are nonempty");
    let solution = solve_forbidden_triple(config, &radii)?;
    Ok(ForbiddenTriple {
        radii,
        predicted_step,
        solution,
    })
}
