//! Five-chromatic witness for the slab `R^2 x [0, epsilon]`.
//!
//! The planar chain of the strip witness is lifted into the vertical plane
//! `y = 0`; each pair `(p_i, w_i)` or `(p_{i+1}, w_i)` at distance
//! `epsilon1` is now surrounded by a whole circle of unit-distance points.
//! With `epsilon1 = 2 sqrt(1 - r^2)` for a forbidden radius `r` that circle
//! carries an odd cycle, so in a 4-coloring it needs three colors, leaving
//! the pair the same single color.

use crate::constructions::forbidden::{circle_odd_cycle, enumerate_forbidden_radii, forbidden_radius, ForbiddenRadius};
use crate::error::{invalid, Error, Result};
use crate::geometry::{unit_equidistant_circle, Circle, Point, SlabSpec};
use crate::scalar::Scalar;
use crate::udgraph::UnitDistanceGraph;

/// Margin every circle keeps from the slab faces when parameters are
/// searched automatically.
pub const SEARCH_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpindleParams {
    pub epsilon: f64,
    pub steps: u64,
    pub radius: ForbiddenRadius,
}

impl SpindleParams {
    pub fn new(epsilon: f64, steps: u64, l: u64, m: u64) -> Result<Self> {
        let p = SpindleParams {
            epsilon,
            steps,
            radius: forbidden_radius(l, m)?,
        };
        p.check()?;
        Ok(p)
    }

    /// `epsilon = 0.65`, `delta = 1/4`, `q = 3/17`.
    pub fn reference() -> Self {
        SpindleParams::new(0.65, 4, 3, 17).expect("reference parameters are admissible")
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.steps as f64
    }

    /// Leg length `2 sqrt(1 - r^2)` of every apex triangle.
    pub fn epsilon1(&self) -> f64 {
        let r = self.radius.radius;
        2.0 * (1.0 - r * r).sqrt()
    }

    pub fn apex_height(&self) -> f64 {
        let e1 = self.epsilon1();
        let d = self.delta();
        (e1 * e1 - d * d / 4.0).sqrt()
    }

    pub fn vertex_count(&self) -> usize {
        let n = self.steps as usize;
        2 * n + 1 + 2 * n * self.radius.m as usize
    }

    pub fn edge_count(&self) -> usize {
        1 + 6 * self.steps as usize * self.radius.m as usize
    }

    fn check(&self) -> Result<()> {
        let eps = self.epsilon;
        if !(eps > 0.0) || eps >= 1.0 {
            return Err(invalid(format!("slab width {eps} must lie in (0, 1)")));
        }
        if self.steps == 0 {
            return Err(invalid("need at least one chain step"));
        }
        let delta = self.delta();
        if delta >= eps * eps {
            return Err(invalid(format!("delta = 1/{} must be below epsilon^2 = {}", self.steps, eps * eps)));
        }
        if self.radius.radius >= 1.0 {
            return Err(invalid(format!("forbidden radius {} is not below 1", self.radius.radius)));
        }
        let e1 = self.epsilon1();
        if e1 < delta.sqrt() || e1 >= eps {
            return Err(invalid(format!(
                "leg 2 sqrt(1 - r^2) = {e1:.6} for q = {}/{} must lie in [sqrt(delta), epsilon) = [{:.6}, {eps})",
                self.radius.l,
                self.radius.m,
                delta.sqrt()
            )));
        }
        Ok(())
    }

    /// Admissible parameters for `epsilon` with the smallest cycle length,
    /// then the shortest chain, keeping every circle at least `min_margin`
    /// inside the slab. The result is minimal among the scanned candidates
    /// only, not a proof of optimality.
    pub fn search(epsilon: f64, max_m: u64, min_margin: f64) -> Result<Self> {
        if !(epsilon > 0.0) || epsilon >= 1.0 {
            return Err(invalid(format!("slab width {epsilon} must lie in (0, 1)")));
        }
        let first = (1.0 / (epsilon * epsilon)).floor() as u64 + 1;
        let mut best: Option<SpindleParams> = None;
        for steps in first..first + 16 {
            let delta = 1.0 / steps as f64;
            // epsilon1 in [sqrt(delta), epsilon) maps to r in (r_lo, r_hi].
            let r_lo = (1.0 - epsilon * epsilon / 4.0).sqrt();
            let r_hi = (1.0 - delta / 4.0).sqrt();
            for fr in enumerate_forbidden_radii(r_lo, r_hi, max_m)? {
                let p = SpindleParams { epsilon, steps, radius: fr };
                if p.check().is_err() || p.min_circle_margin()? < min_margin {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some(b) => (p.radius.m, p.steps, p.radius.l) < (b.radius.m, b.steps, b.radius.l),
                };
                if better {
                    best = Some(p);
                }
            }
        }
        best.ok_or_else(|| Error::Infeasible(format!("no forbidden radius with m <= {max_m} fits epsilon = {epsilon}")))
    }

    fn slab(&self) -> Result<SlabSpec> {
        SlabSpec::new(2, 1, Scalar::Real(self.epsilon))
    }

    /// All `2 * steps` circles, in construction order.
    pub fn circles(&self) -> Result<Vec<Circle>> {
        let delta = self.delta();
        let a = self.apex_height();
        let mut out = Vec::new();
        for i in 0..self.steps {
            let apex = vec![(i as f64 + 0.5) * delta, 0.0, a];
            for j in [i, i + 1] {
                let base = vec![j as f64 * delta, 0.0, 0.0];
                out.push(unit_equidistant_circle(&[base, apex.clone()])?);
            }
        }
        Ok(out)
    }

    pub fn min_circle_margin(&self) -> Result<f64> {
        let slab = self.slab()?;
        Ok(self
            .circles()?
            .iter()
            .map(|c| c.slab_margin(&slab))
            .fold(f64::INFINITY, f64::min))
    }
}

/// Builds the witness: chain `p_i = (i delta, 0, 0)` closed by the unit
/// edge `(p_0, p_steps)`, apexes `w_i` at height `apex_height`, and on each
/// of the `2 * steps` circles an `m`-cycle whose vertices are joined to both
/// circle centers.
pub fn slab_chi5_witness(params: &SpindleParams) -> Result<UnitDistanceGraph> {
    params.check()?;
    let slab = params.slab()?;
    let delta = params.delta();
    let a = params.apex_height();
    let n = params.steps as usize;
    let mut g = UnitDistanceGraph::new(slab.clone());
    let chain: Vec<usize> = (0..=n)
        .map(|i| g.add_point(Point::real(&[i as f64 * delta, 0.0, 0.0]), format!("chain:{i}")))
        .collect::<Result<_>>()?;
    g.add_edge(chain[0], chain[n])?;
    let apex: Vec<usize> = (0..n)
        .map(|i| g.add_point(Point::real(&[(i as f64 + 0.5) * delta, 0.0, a]), format!("apex:{i}")))
        .collect::<Result<_>>()?;
    let circles = params.circles()?;
    for (c, circle) in circles.iter().enumerate() {
        let margin = circle.slab_margin(&slab);
        if margin < 0.0 {
            return Err(Error::Infeasible(format!("circle {c} leaves the slab by {:.3e}", -margin)));
        }
        let i = c / 2;
        let base = chain[i + c % 2];
        let cycle = circle_odd_cycle(circle, &params.radius, 1e-12, 0.0)?;
        let ids: Vec<usize> = cycle
            .points
            .iter()
            .enumerate()
            .map(|(j, p)| g.add_point(Point::real(p), format!("circle:{c}:{j}")))
            .collect::<Result<_>>()?;
        for &(x, y) in &cycle.edges {
            g.add_edge(ids[x], ids[y])?;
        }
        for &v in &ids {
            g.add_edge(v, base)?;
            g.add_edge(v, apex[i])?;
        }
    }
    Ok(g)
}
