//! Witnesses for strips `R x [0, h]`.

use crate::error::{invalid, Error, Result};
use crate::geometry::{Point, SlabSpec};
use crate::scalar::Scalar;
use crate::udgraph::UnitDistanceGraph;

/// The two points at distance 1 from both `a` and `b` in the plane.
pub(crate) fn unit_circle_intersections(a: [f64; 2], b: [f64; 2]) -> Option<[[f64; 2]; 2]> {
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let d = dx.hypot(dy);
    if d == 0.0 || d >= 2.0 {
        return None;
    }
    let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let s = (1.0 - d * d / 4.0).sqrt();
    let perp = [-dy / d, dx / d];
    Some([
        [mid[0] + s * perp[0], mid[1] + s * perp[1]],
        [mid[0] - s * perp[0], mid[1] - s * perp[1]],
    ])
}

/// Converts a chain spacing `delta` into the integer `1/delta`.
pub fn steps_from_delta(delta: &Scalar) -> Result<u64> {
    if *delta <= Scalar::zero() {
        return Err(invalid("delta must be positive"));
    }
    let inv = 1.0 / delta.to_f64();
    let steps = inv.round();
    if steps < 1.0 || (inv - steps).abs() > 1e-9 * steps {
        return Err(invalid(format!("1/delta = {inv} is not an integer")));
    }
    Ok(steps as u64)
}

/// Three-chromatic witness in `R x [0, epsilon]` with chain spacing `1/steps`
/// and apex leg halfway between `sqrt(delta)` and `epsilon`.
pub fn strip_chi3_witness(epsilon: f64, steps: u64) -> Result<UnitDistanceGraph> {
    let delta = 1.0 / steps as f64;
    strip_chi3_witness_with_leg(epsilon, steps, (delta.sqrt() + epsilon) / 2.0)
}

/// Chain `p_i = (i delta, 0)`, closed by the unit edge `(p_0, p_steps)`;
/// an apex `w_i` above each consecutive pair with legs `epsilon1`; and for
/// each of the pairs `(p_i, w_i)`, `(p_{i+1}, w_i)` a point `xi` at unit
/// distance from both. Among the two candidates for `xi`, the one inside
/// the strip with the smaller height is used.
pub fn strip_chi3_witness_with_leg(epsilon: f64, steps: u64, epsilon1: f64) -> Result<UnitDistanceGraph> {
    if !(epsilon > 0.0) || epsilon >= 1.0 {
        return Err(invalid(format!("strip width {epsilon} must lie in (0, 1)")));
    }
    if steps == 0 {
        return Err(invalid("need at least one chain step"));
    }
    let delta = 1.0 / steps as f64;
    if delta > epsilon * epsilon {
        return Err(invalid(format!("delta = 1/{steps} exceeds epsilon^2 = {}", epsilon * epsilon)));
    }
    if epsilon1 < delta.sqrt() || epsilon1 >= epsilon {
        return Err(invalid(format!(
            "leg {epsilon1} must lie in [sqrt(delta), epsilon) = [{}, {epsilon})",
            delta.sqrt()
        )));
    }
    let apex_height = (epsilon1 * epsilon1 - delta * delta / 4.0).sqrt();
    let slab = SlabSpec::new(1, 1, Scalar::Real(epsilon))?;
    let mut g = UnitDistanceGraph::new(slab);
    let n = steps as usize;
    let chain: Vec<usize> = (0..=n)
        .map(|i| g.add_point(Point::real(&[i as f64 * delta, 0.0]), format!("chain:{i}")))
        .collect::<Result<_>>()?;
    g.add_edge(chain[0], chain[n])?;
    for i in 0..n {
        let left = [i as f64 * delta, 0.0];
        let right = [(i + 1) as f64 * delta, 0.0];
        let apex = [(i as f64 + 0.5) * delta, apex_height];
        let w = g.add_point(Point::real(&apex), format!("apex:{i}"))?;
        for (side, base, base_idx) in [("left", left, chain[i]), ("right", right, chain[i + 1])] {
            let candidates = unit_circle_intersections(base, apex)
                .ok_or_else(|| Error::Infeasible("apex pair has no unit-distance point".into()))?;
            let xi = candidates
                .into_iter()
                .filter(|p| p[1] >= 0.0 && p[1] <= epsilon)
                .min_by(|a, b| a[1].total_cmp(&b[1]))
                .ok_or_else(|| {
                    Error::Infeasible(format!(
                        "both unit-distance points for apex {i} ({side}) leave the strip; delta/epsilon combination infeasible"
                    ))
                })?;
            let x = g.add_point(Point::real(&xi), format!("xi:{i}:{side}"))?;
            g.add_edge(x, base_idx)?;
            g.add_edge(x, w)?;
        }
    }
    Ok(g)
}

/// Tilt window of a single unit rhombus (two unit triangles glued along
/// the short diagonal) fitting a strip of height `h`: the cosine of its long
/// diagonal's angle to the strip ranges over `[sqrt(1 - h^2/3), h]`.
pub fn rhombus_cos_window(h: f64) -> (f64, f64) {
    ((1.0 - h * h / 3.0).sqrt(), h)
}

/// Upper bound on the advance of one gadget from the single-rhombus window
/// alone; the gadget as a whole is more constrained.
pub fn max_gadget_offset(h: f64) -> f64 {
    let (lo, hi) = rhombus_cos_window(h);
    2.0 * 3f64.sqrt() * (hi - lo)
}

fn check_chi4_height(h: f64) -> Result<()> {
    let lo = 3f64.sqrt() / 2.0;
    let hi = (8.0f64 / 9.0).sqrt();
    if !(h > lo && h <= hi) {
        return Err(invalid(format!("strip height {h} must lie in (sqrt(3)/2, sqrt(8/9)] = ({lo:.6}, {hi:.6}]")));
    }
    Ok(())
}

/// Heights of a rhombus' vertices relative to its lower anchor, for a long
/// diagonal at angle `acos(c)`: `(lowest, highest)`.
fn rhombus_span(c: f64) -> (f64, f64) {
    let sqrt3 = 3f64.sqrt();
    let s = (1.0 - c * c).sqrt();
    ((sqrt3 / 2.0 * s - 0.5 * c).min(0.0), (sqrt3 * s).max(sqrt3 / 2.0 * s + 0.5 * c))
}

/// Tilt cosines `(forward, backward)` and anchor height of a gadget
/// advancing by `offset`, with the smallest total vertical extent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GadgetShape {
    pub forward_cos: f64,
    pub backward_cos: f64,
    pub extent: f64,
    pub anchor_height: f64,
}

fn gadget_extent(cb: f64, gap: f64) -> (f64, f64, f64) {
    let (lf, hf) = rhombus_span(cb + gap);
    let (lb, hb) = rhombus_span(cb);
    let low = lf.min(lb);
    let high = hf.max(hb);
    (high - low, low, high)
}

/// Minimizes the gadget's extent over the backward cosine by a grid scan
/// followed by golden-section refinement.
pub fn gadget_shape(h: f64, offset: f64) -> Option<GadgetShape> {
    let gap = offset / (2.0 * 3f64.sqrt());
    let (lo, hi) = (0.5, 1.0 - gap);
    if lo >= hi {
        return None;
    }
    let f = |cb: f64| gadget_extent(cb, gap).0;
    let n = 4000;
    let step = (hi - lo) / n as f64;
    let best = (0..=n)
        .map(|i| lo + i as f64 * step)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .expect("nonempty grid");
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let x1 = b - golden * (b - a);
        let x2 = a + golden * (b - a);
        if f(x1) <= f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let cb = (a + b) / 2.0;
    let (extent, low, high) = gadget_extent(cb, gap);
    if extent > h {
        return None;
    }
    // Center the gadget vertically.
    let anchor_height = (h - high - low) / 2.0;
    Some(GadgetShape {
        forward_cos: cb + gap,
        backward_cos: cb,
        extent,
        anchor_height,
    })
}

/// Smallest number of gadgets that fit the strip.
pub fn min_admissible_gadgets(h: f64) -> Result<u64> {
    check_chi4_height(h)?;
    let start = (1.0 / max_gadget_offset(h)).ceil() as u64;
    (start..start + 100_000)
        .find(|&m| gadget_shape(h, 1.0 / m as f64).is_some())
        .ok_or_else(|| Error::Infeasible(format!("no gadget count fits h = {h}")))
}

pub fn strip_chi4_witness_minimal(h: f64) -> Result<UnitDistanceGraph> {
    strip_chi4_witness(h, min_admissible_gadgets(h)?)
}

/// Four-chromatic witness in `R x [0, h]`.
///
/// A unit rhombus `a, p, q, b` (all of `ap, aq, pb, qb, pq` unit) forces
/// `c(a) = c(b)` under three colors. Each gadget chains four rhombi: two
/// advancing at tilt `acos(forward_cos)`, two returning at
/// `acos(backward_cos)`, so the anchor moves right by exactly `1/m`. After
/// `m` gadgets the last anchor sits at distance 1 from the first and the two
/// are joined.
pub fn strip_chi4_witness(h: f64, m: u64) -> Result<UnitDistanceGraph> {
    check_chi4_height(h)?;
    if m == 0 {
        return Err(invalid("need at least one gadget"));
    }
    let shape = gadget_shape(h, 1.0 / m as f64).ok_or_else(|| {
        invalid(format!("m = {m} too small: a gadget advancing by 1/m does not fit height {h}"))
    })?;
    let sqrt3 = 3f64.sqrt();
    let forward = shape.forward_cos.acos();
    let backward = shape.backward_cos.acos();
    let y0 = shape.anchor_height;

    let slab = SlabSpec::new(1, 1, Scalar::Real(h))?;
    let mut g = UnitDistanceGraph::new(slab);
    let mut anchor = [0.0, y0];
    let first = g.add_point(Point::real(&anchor), "anchor:0")?;
    let mut current = first;
    for gadget in 0..m {
        let moves = [(forward, 1.0, 1.0), (forward, 1.0, -1.0), (backward, -1.0, 1.0), (backward, -1.0, -1.0)];
        for (step, &(phi, dir, rise)) in moves.iter().enumerate() {
            let (s, c) = phi.sin_cos();
            let axis = [dir * c, rise * s];
            let end = [anchor[0] + sqrt3 * axis[0], anchor[1] + sqrt3 * axis[1]];
            let center = [(anchor[0] + end[0]) / 2.0, (anchor[1] + end[1]) / 2.0];
            let normal = [-axis[1], axis[0]];
            let p = [center[0] + 0.5 * normal[0], center[1] + 0.5 * normal[1]];
            let q = [center[0] - 0.5 * normal[0], center[1] - 0.5 * normal[1]];
            let pi = g.add_point(Point::real(&p), format!("rhombus:{gadget}:{step}:p"))?;
            let qi = g.add_point(Point::real(&q), format!("rhombus:{gadget}:{step}:q"))?;
            let label = if step == 3 {
                format!("anchor:{}", gadget + 1)
            } else {
                format!("rhombus:{gadget}:{step}:end")
            };
            let ei = g.add_point(Point::real(&end), label)?;
            for (a, b) in [(current, pi), (current, qi), (pi, qi), (pi, ei), (qi, ei)] {
                g.add_edge(a, b)?;
            }
            current = ei;
            anchor = end;
        }
    }
    g.add_edge(first, current)?;
    Ok(g)
}
