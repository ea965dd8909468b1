//! Odd cycles in `Q x [0, eps]^3` with exact rational coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::geometry::{Point, SlabSpec};
use crate::scalar::Scalar;
use crate::udgraph::UnitDistanceGraph;

/// `n = 6l^2 + 6l + 2`, `b = 2l + 1`, so that `3 b^2 = 2n - 1` and the
/// steps `e = (1 - 1/n, b/n, b/n, b/n)`, `e' = (1 - 1/n, -b/n, -b/n, -b/n)`
/// are exact unit vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalCycleParams {
    pub l: u64,
    pub n: u64,
    pub b: u64,
}

impl RationalCycleParams {
    pub fn new(l: u64) -> Result<Self> {
        if l == 0 {
            return Err(invalid("l must be positive"));
        }
        Ok(RationalCycleParams {
            l,
            n: 6 * l * l + 6 * l + 2,
            b: 2 * l + 1,
        })
    }

    fn q(num: i64, den: u64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn step(&self, sign: i64) -> Vec<BigRational> {
        let n = self.n;
        let lead = BigRational::one() - Self::q(1, n);
        let side = Self::q(sign * self.b as i64, n);
        vec![lead, side.clone(), side.clone(), side]
    }

    /// Checks `n > 2/eps^2` and `b/n < eps`.
    pub fn admits(&self, epsilon: &BigRational) -> bool {
        let n = BigRational::from_integer(BigInt::from(self.n));
        let two = BigRational::from_integer(BigInt::from(2));
        &n * epsilon * epsilon > two && Self::q(self.b as i64, self.n) < *epsilon
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n as usize - 1
    }
}

/// Smallest `l` whose cycle fits `Q x [0, eps]^3`.
pub fn min_admissible_l(epsilon: &Scalar) -> Result<u64> {
    let eps = exact_epsilon(epsilon)?;
    (1..=1_000_000)
        .find(|&l| RationalCycleParams::new(l).map(|p| p.admits(&eps)).unwrap_or(false))
        .ok_or_else(|| invalid("epsilon too small for any l up to 10^6"))
}

fn exact_epsilon(epsilon: &Scalar) -> Result<BigRational> {
    let eps = epsilon
        .as_exact()
        .cloned()
        .ok_or_else(|| invalid("slab width must be an exact rational"))?;
    if !(eps > BigRational::zero() && eps < BigRational::one()) {
        return Err(invalid(format!("slab width {eps} must lie in (0, 1)")));
    }
    Ok(eps)
}

/// The alternating walk `A_0 = 0`, `A_{2j+1} = A_{2j} + e`,
/// `A_{2j+2} = A_{2j+1} + e'` ends at `A_n = (n-1, 0, 0, 0)`; the cycle closes
/// through the axis points `(n-2, 0, 0, 0), ..., (1, 0, 0, 0)`. Its length
/// is `2n - 1`, odd.
pub fn rational_odd_cycle(l: u64, epsilon: &Scalar) -> Result<UnitDistanceGraph> {
    let eps = exact_epsilon(epsilon)?;
    let params = RationalCycleParams::new(l)?;
    if !params.admits(&eps) {
        return Err(invalid(format!(
            "l = {l} (n = {}) does not satisfy n > 2/eps^2 and (2l+1)/n < eps for eps = {eps}",
            params.n
        )));
    }
    let slab = SlabSpec::new(1, 3, Scalar::Exact(eps))?;
    let mut g = UnitDistanceGraph::new(slab);
    let e = params.step(1);
    let e_prime = params.step(-1);
    let mut current = vec![BigRational::zero(); 4];
    let mut prev = g.add_point(Point::exact(current.clone()), "walk:0")?;
    let first = prev;
    let n = params.n as usize;
    for j in 1..=n {
        let step = if j % 2 == 1 { &e } else { &e_prime };
        current = current.iter().zip(step).map(|(a, b)| a + b).collect();
        let id = g.add_point(Point::exact(current.clone()), format!("walk:{j}"))?;
        g.add_edge(prev, id)?;
        prev = id;
    }
    for x in (1..n - 1).rev() {
        let mut coords = vec![BigRational::zero(); 4];
        coords[0] = BigRational::from_integer(BigInt::from(x));
        let id = g.add_point(Point::exact(coords), format!("axis:{x}"))?;
        g.add_edge(prev, id)?;
        prev = id;
    }
    g.add_edge(prev, first)?;
    Ok(g)
}
