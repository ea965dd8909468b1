//! Odd cycles inside the `eps`-neighborhood of a planar curve.
//!
//! Any two points `u`, `t` closer than `gamma(eps) = sin(eps/2) sin(eps/4)`
//! are joined by a unit path of four steps staying near them; chaining such
//! paths along the curve from `u` to a point `v` at distance 1 and closing
//! with the edge `uv` yields a cycle of length `4s + 1`.

use crate::error::{invalid, Error, Result};
use crate::geometry::{Point, SlabSpec};
use crate::scalar::Scalar;
use crate::udgraph::UnitDistanceGraph;

type P2 = [f64; 2];

fn add(a: P2, b: P2) -> P2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn scale(s: f64, a: P2) -> P2 {
    [s * a[0], s * a[1]]
}

fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn len(a: P2) -> f64 {
    a[0].hypot(a[1])
}

pub fn gamma(epsilon: f64) -> f64 {
    (epsilon / 2.0).sin() * (epsilon / 4.0).sin()
}

/// `u = v0, v1, v2, v3, v4 = t` with every consecutive distance 1.
#[derive(Clone, Debug, PartialEq)]
pub struct FourStepPath {
    pub points: [P2; 5],
    pub l1: f64,
    pub l2: f64,
}

impl FourStepPath {
    pub fn max_step_error(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (len(sub(w[1], w[0])) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest distance of an interior vertex from `u`'s unit offset along
    /// the heading, or from `u` itself for the even vertices.
    pub fn max_drift(&self, heading: P2) -> f64 {
        let u = self.points[0];
        let h = normalize(heading).unwrap_or([1.0, 0.0]);
        self.points
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let anchor = if i % 2 == 1 { add(u, h) } else { u };
                len(sub(p, anchor))
            })
            .fold(0.0, f64::max)
    }
}

fn normalize(a: P2) -> Option<P2> {
    let l = len(a);
    (l > 0.0).then(|| scale(1.0 / l, a))
}

/// The point at distance 1 from both `a` and `b` on the side `+side`.
fn apex(a: P2, b: P2, side: P2) -> Result<P2> {
    let d = sub(b, a);
    let dl = len(d);
    if dl >= 2.0 {
        return Err(Error::Infeasible("unit circles do not meet".into()));
    }
    let mid = scale(0.5, add(a, b));
    let s = (1.0 - dl * dl / 4.0).sqrt();
    if dl == 0.0 {
        return Ok(add(a, side));
    }
    let mut perp = [-d[1] / dl, d[0] / dl];
    if dot(perp, side) < 0.0 {
        perp = scale(-1.0, perp);
    }
    Ok(add(mid, scale(s, perp)))
}

/// Four unit steps from `u` to `t` with the default heading `(1, 0)`.
pub fn four_step_path(u: P2, t: P2, epsilon: f64) -> Result<FourStepPath> {
    four_step_path_with_heading(u, t, epsilon, [1.0, 0.0])
}

/// Four unit steps from `u` to `t`, leaving `u` roughly along `heading`.
///
/// Writing `D = t - u` in the frame `(h, n)` with `n` chosen so that
/// `D_n <= 0`: `v2 = u - l1 n`, `v4 = t`, where
/// `l2 = max(|D_h| / sin(eps/4), gamma)`, `cos(beta) = sqrt(1 - (D_h/l2)^2)`
/// and `l1 = l2 cos(beta) - D_n`, so that `|v2 t| = l2`. The odd vertices are
/// the apexes of the isosceles unit triangles over `u v2` and `v2 t` on the
/// heading side.
pub fn four_step_path_with_heading(u: P2, t: P2, epsilon: f64, heading: P2) -> Result<FourStepPath> {
    if !(epsilon > 0.0) || epsilon >= 1.0 {
        return Err(invalid(format!("epsilon {epsilon} must lie in (0, 1)")));
    }
    let h = normalize(heading).ok_or_else(|| invalid("heading must be nonzero"))?;
    let g = gamma(epsilon);
    let d = sub(t, u);
    if len(d) > g {
        return Err(invalid(format!("points {:.3e} apart exceed gamma(eps) = {g:.3e}", len(d))));
    }
    if d == [0.0, 0.0] {
        let v1 = add(u, h);
        return Ok(FourStepPath {
            points: [u, v1, u, v1, t],
            l1: 0.0,
            l2: 0.0,
        });
    }
    let mut n = [-h[1], h[0]];
    if dot(d, n) > 0.0 {
        n = scale(-1.0, n);
    }
    let dh = dot(d, h);
    let dn = dot(d, n);
    let l2 = (dh.abs() / (epsilon / 4.0).sin()).max(g);
    let cos_beta = (1.0 - (dh / l2).powi(2)).sqrt();
    let l1 = l2 * cos_beta - dn;
    let v2 = sub(u, scale(l1, n));
    let v1 = apex(u, v2, h)?;
    let v3 = apex(v2, t, h)?;
    Ok(FourStepPath {
        points: [u, v1, v2, v3, t],
        l1,
        l2,
    })
}

/// Polyline parametrized by arclength.
struct Polyline<'a> {
    pts: &'a [P2],
    cum: Vec<f64>,
}

impl<'a> Polyline<'a> {
    fn new(pts: &'a [P2]) -> Self {
        let mut cum = vec![0.0];
        for w in pts.windows(2) {
            cum.push(cum.last().unwrap() + len(sub(w[1], w[0])));
        }
        Polyline { pts, cum }
    }

    fn at(&self, s: f64) -> P2 {
        let i = match self.cum.iter().position(|&c| c >= s) {
            Some(0) => return self.pts[0],
            Some(i) => i,
            None => return *self.pts.last().unwrap(),
        };
        let seg = self.cum[i] - self.cum[i - 1];
        let f = if seg > 0.0 { (s - self.cum[i - 1]) / seg } else { 0.0 };
        add(self.pts[i - 1], scale(f, sub(self.pts[i], self.pts[i - 1])))
    }

    /// Arclength of the first point after `from` at distance exactly 1 from
    /// `c`, scanning forward along the polyline.
    fn first_unit_crossing(&self, c: P2, from: f64) -> Option<f64> {
        for i in 1..self.pts.len() {
            if self.cum[i] < from {
                continue;
            }
            let s0 = self.cum[i - 1].max(from);
            let a = self.at(s0);
            let b = self.pts[i];
            let seg = self.cum[i] - s0;
            if seg <= 0.0 {
                continue;
            }
            // Solve |a + f (b - a) - c| = 1 for the smallest f in [0, 1]
            // at which the distance crosses 1.
            let dir = sub(b, a);
            let w = sub(a, c);
            let qa = dot(dir, dir);
            let qb = 2.0 * dot(w, dir);
            let qc = dot(w, w) - 1.0;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                continue;
            }
            let r = disc.sqrt();
            let mut roots = [(-qb - r) / (2.0 * qa), (-qb + r) / (2.0 * qa)];
            roots.sort_by(f64::total_cmp);
            if let Some(f) = roots.into_iter().find(|f| (0.0..=1.0).contains(f)) {
                return Some(s0 + f * seg);
            }
        }
        None
    }

    fn distance_to(&self, p: P2) -> f64 {
        self.pts
            .windows(2)
            .map(|w| {
                let d = sub(w[1], w[0]);
                let l2 = dot(d, d);
                let f = if l2 > 0.0 { (dot(sub(p, w[0]), d) / l2).clamp(0.0, 1.0) } else { 0.0 };
                len(sub(p, add(w[0], scale(f, d))))
            })
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn polyline_diameter(pts: &[P2]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max(len(sub(*a, *b)));
        }
    }
    best
}

#[derive(Clone, Debug)]
pub struct CurveCycle {
    pub graph: UnitDistanceGraph,
    /// Number of four-step segments `s`; the cycle has `4s + 1` edges.
    pub segments: usize,
    /// Largest distance of a vertex from the polyline.
    pub max_offset: f64,
}

/// Odd cycle in the open `eps`-neighborhood of a planar polyline of
/// diameter at least 2.
pub fn curve_odd_cycle(polyline: &[P2], epsilon: f64) -> Result<CurveCycle> {
    if !(epsilon > 0.0) || epsilon >= 1.0 {
        return Err(invalid(format!("epsilon {epsilon} must lie in (0, 1)")));
    }
    if polyline.len() < 2 {
        return Err(invalid("polyline needs at least two points"));
    }
    let diam = polyline_diameter(polyline);
    if diam < 2.0 {
        return Err(invalid(format!("polyline diameter {diam} is below 2")));
    }
    let curve = Polyline::new(polyline);
    let u = polyline[0];
    let s_v = curve
        .first_unit_crossing(u, 0.0)
        .ok_or_else(|| Error::Infeasible("no curve point at distance 1 from the start".into()))?;
    let step = gamma(epsilon) * (1.0 - 1e-9);
    let segments = (s_v / step).ceil().max(1.0) as usize;
    let stations: Vec<P2> = (0..=segments)
        .map(|j| curve.at(s_v * j as f64 / segments as f64))
        .collect();

    let slab = SlabSpec::new(2, 0, Scalar::Real(epsilon))?;
    let mut g = UnitDistanceGraph::new(slab);
    let first = g.add_point(Point::real(&u), "station:0")?;
    let mut prev = first;
    for j in 0..segments {
        let t0 = stations[j];
        let t1 = stations[j + 1];
        let s0 = s_v * j as f64 / segments as f64;
        let target = curve
            .first_unit_crossing(t0, s0)
            .or_else(|| curve.first_unit_crossing(t0, 0.0))
            .ok_or_else(|| Error::Infeasible(format!("no curve point at unit distance from station {j}")))?;
        let heading = sub(curve.at(target), t0);
        let path = four_step_path_with_heading(t0, t1, epsilon, heading)?;
        let mut ids = vec![prev];
        for (k, p) in path.points[1..4].iter().enumerate() {
            ids.push(g.add_point(Point::real(p), format!("path:{j}:{}", k + 1))?);
        }
        ids.push(g.add_point(Point::real(&t1), format!("station:{}", j + 1))?);
        for w in ids.windows(2) {
            g.add_edge(w[0], w[1])?;
        }
        prev = ids[4];
    }
    g.add_edge(prev, first)?;

    let max_offset = g
        .points()
        .iter()
        .map(|p| {
            let c = p.to_f64();
            curve.distance_to([c[0], c[1]])
        })
        .fold(0.0, f64::max);
    if max_offset >= epsilon {
        return Err(Error::Infeasible(format!(
            "vertex at distance {max_offset:.6} leaves the {epsilon}-neighborhood"
        )));
    }
    Ok(CurveCycle {
        graph: g,
        segments,
        max_offset,
    })
}
