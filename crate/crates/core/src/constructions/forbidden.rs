//! Forbidden radii: circles whose unit-distance graph contains an odd cycle.
//!
//! For `q = l/m` with `m` odd and `0 < q < 1/2`, the circle of radius
//! `1 / (2 sin(pi q))` carries `m` points spaced by the angle `2 pi q`,
//! consecutive ones exactly 1 apart; the walk closes after winding `l` times.

use num_integer::Integer;

use crate::error::{invalid, Error, Result};
use crate::extended::DoubleDouble;
use crate::geometry::{circle_point, dist2, Circle};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForbiddenRadius {
    pub l: u64,
    pub m: u64,
    pub radius: f64,
}

impl ForbiddenRadius {
    pub fn q(&self) -> f64 {
        self.l as f64 / self.m as f64
    }

    /// Radius in double-double precision.
    pub fn radius_extended(&self) -> DoubleDouble {
        let s = DoubleDouble::sin_pi_ratio(self.l, self.m);
        DoubleDouble::ONE / (DoubleDouble::from_f64(2.0) * s)
    }
}

/// `r = 1/(2 sin(pi l/m))`. The fraction is reduced first.
pub fn forbidden_radius(l: u64, m: u64) -> Result<ForbiddenRadius> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(invalid(format!("denominator must be odd and >= 3, got {m}")));
    }
    if l == 0 || 2 * l >= m {
        return Err(invalid(format!("q = {l}/{m} is not in (0, 1/2)")));
    }
    let g = l.gcd(&m);
    let (l, m) = (l / g, m / g);
    let s = DoubleDouble::sin_pi_ratio(l, m);
    let radius = (DoubleDouble::ONE / (DoubleDouble::from_f64(2.0) * s)).to_f64();
    Ok(ForbiddenRadius { l, m, radius })
}

/// Every reduced `l/m` with odd `m <= max_m` whose radius lies in
/// `[r_lo, r_hi]`, sorted by radius then denominator.
pub fn enumerate_forbidden_radii(r_lo: f64, r_hi: f64, max_m: u64) -> Result<Vec<ForbiddenRadius>> {
    if !(r_lo > 0.5) {
        return Err(invalid(format!("lower radius {r_lo} must exceed 1/2")));
    }
    if !(r_lo < r_hi) {
        return Err(invalid(format!("empty radius interval [{r_lo}, {r_hi}]")));
    }
    if max_m < 3 {
        return Err(invalid("max_m must be at least 3"));
    }
    // r decreases in q on (0, 1/2), so the window maps to a q-interval.
    let q_lo = (0.5 / r_hi).min(1.0).asin() / std::f64::consts::PI;
    let q_hi = (0.5 / r_lo).min(1.0).asin() / std::f64::consts::PI;
    let mut out = Vec::new();
    for m in (3..=max_m).step_by(2) {
        let lo = ((q_lo * m as f64).floor() as i64 - 1).max(1) as u64;
        let hi = (q_hi * m as f64).ceil() as u64 + 1;
        for l in lo..=hi {
            if 2 * l >= m || l.gcd(&m) != 1 {
                continue;
            }
            let fr = forbidden_radius(l, m)?;
            if fr.radius >= r_lo && fr.radius <= r_hi {
                out.push(fr);
            }
        }
    }
    out.sort_by(|a, b| a.radius.total_cmp(&b.radius).then(a.m.cmp(&b.m)));
    Ok(out)
}

/// Odd cycle inscribed in a circle of (approximately) forbidden radius.
#[derive(Clone, Debug, PartialEq)]
pub struct OddCycle {
    pub points: Vec<Vec<f64>>,
    pub edges: Vec<(usize, usize)>,
    pub winding: u64,
}

impl OddCycle {
    pub fn max_chord_error(&self) -> f64 {
        self.edges
            .iter()
            .map(|&(a, b)| (dist2(&self.points[a], &self.points[b]).sqrt() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `m` points at angles `theta0 + 2 pi l j / m`, joined consecutively and
/// closed by `(m-1, 0)`.
pub fn circle_odd_cycle(circle: &Circle, fr: &ForbiddenRadius, tol: f64, theta0: f64) -> Result<OddCycle> {
    if (circle.radius - fr.radius).abs() > tol {
        return Err(Error::InvalidParameter(format!(
            "circle radius {} does not match forbidden radius {} for {}/{}",
            circle.radius, fr.radius, fr.l, fr.m
        )));
    }
    let m = fr.m as usize;
    let step = DoubleDouble::from_f64(2.0) * crate::extended::PI * DoubleDouble::from_f64(fr.l as f64)
        / DoubleDouble::from_f64(fr.m as f64);
    let points = (0..m)
        .map(|j| {
            let angle = (step * DoubleDouble::from_f64(j as f64)).to_f64() + theta0;
            circle_point(circle, angle)
        })
        .collect();
    let edges = (0..m).map(|j| (j, (j + 1) % m)).collect();
    Ok(OddCycle {
        points,
        edges,
        winding: fr.l,
    })
}
