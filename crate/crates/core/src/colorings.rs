//! Upper-bound colorings and their verifiers.
//!
//! * `hex7`: the plane tiled by regular hexagons of side `1/sqrt(7)`, cells
//!   colored by the index-7 residue `(q + 3r) mod 7` of their axial
//!   coordinates. Same-colored cells are at distance exactly 1 and a cell
//!   has diameter `2/sqrt(7)`.
//! * `slab7`: `hex7` of the planar projection; proper on
//!   `R^2 x [0, eps]^k` when `4/7 + k eps^2 < 1`.
//! * `stripe3` / `stripe4`: half-open cells of length `1/2` (resp. `1/3`)
//!   along the free axis, colored cyclically.
//! * `qmod3`: `2j/3 < x <= 2(j+1)/3` gets color `j mod 3`, on `Q x [0, eps]^3`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::geometry::{Point, SlabSpec};
use crate::scalar::{exact_sqrt, rational_to_f64, Scalar};

/// Side of the hexagons in the seven-coloring.
pub fn hex7_side() -> f64 {
    1.0 / 7f64.sqrt()
}

/// Axial coordinates of the lattice generators of one color class.
pub const SAME_COLOR_TRANSLATIONS: [(i64, i64); 2] = [(1, 2), (3, -1)];

pub fn hex_center(side: f64, cell: (i64, i64)) -> [f64; 2] {
    let (q, r) = cell;
    [3f64.sqrt() * side * (q as f64 + r as f64 / 2.0), 1.5 * side * r as f64]
}

/// Vertices of a pointy-top cell, counterclockwise from angle 30 degrees.
pub fn hex_vertices(side: f64, cell: (i64, i64)) -> [[f64; 2]; 6] {
    let c = hex_center(side, cell);
    std::array::from_fn(|j| {
        let a = (30.0 + 60.0 * j as f64).to_radians();
        [c[0] + side * a.cos(), c[1] + side * a.sin()]
    })
}

const NEIGHBORS: [(i64, i64); 7] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// Cell owning `p`. Points equidistant from several centers (up to
/// `1e-9 side`) belong to the incident cell with the lexicographically
/// smallest center.
pub fn hex_cell(side: f64, p: [f64; 2]) -> (i64, i64) {
    let r = p[1] / (1.5 * side);
    let q = p[0] / (3f64.sqrt() * side) - r / 2.0;
    // Cube rounding.
    let (x, z) = (q, r);
    let y = -x - z;
    let (mut rx, ry, mut rz) = (x.round(), y.round(), z.round());
    let (dx, dy, dz) = ((rx - x).abs(), (ry - y).abs(), (rz - z).abs());
    if dx > dy && dx > dz {
        rx = -ry - rz;
    } else if dy <= dz {
        rz = -rx - ry;
    }
    let base = (rx as i64, rz as i64);
    let cands: Vec<((i64, i64), f64)> = NEIGHBORS
        .iter()
        .map(|&(a, b)| {
            let cell = (base.0 + a, base.1 + b);
            let c = hex_center(side, cell);
            (cell, (p[0] - c[0]).hypot(p[1] - c[1]))
        })
        .collect();
    let best = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    cands
        .into_iter()
        .filter(|c| c.1 <= best + 1e-9 * side)
        // Center x is proportional to 2q + r and y to r.
        .min_by_key(|&((q, r), _)| (2 * q + r, r))
        .map(|c| c.0)
        .expect("seven candidates")
}

pub fn hex_cell_color(cell: (i64, i64)) -> usize {
    (cell.0 + 3 * cell.1).rem_euclid(7) as usize
}

pub fn hex_color_with_side(side: f64, p: [f64; 2]) -> usize {
    hex_cell_color(hex_cell(side, p))
}

/// Seven-coloring of the plane; the origin's cell has color 0.
pub fn hex7_color(p: [f64; 2]) -> usize {
    hex_color_with_side(hex7_side(), p)
}

/// `4/7 + k eps^2`; the slab coloring is proper when this is below 1.
pub fn slab7_condition(k: usize, epsilon: &Scalar) -> Scalar {
    let spread = &(&Scalar::int(k as i64) * epsilon) * epsilon;
    &Scalar::ratio(4, 7) + &spread
}

fn check_slab7(k: usize, epsilon: &Scalar) -> Result<()> {
    let lhs = slab7_condition(k, epsilon);
    let one = if lhs.is_exact() { Scalar::int(1) } else { Scalar::Real(1.0) };
    if lhs >= one {
        return Err(invalid(format!(
            "4/7 + k eps^2 = {} is not below 1 for k = {k}, eps = {epsilon}",
            lhs.render()
        )));
    }
    Ok(())
}

pub fn slab7_color(slab: &SlabSpec, p: &Point) -> Result<usize> {
    if slab.n != 2 {
        return Err(invalid(format!("slab coloring needs n = 2, got {}", slab.n)));
    }
    check_slab7(slab.k, &slab.epsilon)?;
    let c = p.to_f64();
    Ok(hex7_color([c[0], c[1]]))
}

fn floor_mod(x: &Scalar, scale: i64, modulus: i64) -> usize {
    match x {
        Scalar::Exact(q) => {
            let f = (q * BigRational::from_integer(BigInt::from(scale))).floor().to_integer();
            f.mod_floor(&BigInt::from(modulus)).to_usize().expect("small residue")
        }
        Scalar::Real(v) => ((v * scale as f64).floor() as i64).rem_euclid(modulus) as usize,
    }
}

/// Cyclic coloring of half-open cells of length `1/2` (3 colors) or
/// `1/3` (4 colors).
pub fn stripe_color(x: &Scalar, colors: usize) -> Result<usize> {
    match colors {
        3 => Ok(floor_mod(x, 2, 3)),
        4 => Ok(floor_mod(x, 3, 4)),
        _ => Err(invalid(format!("stripe colorings use 3 or 4 colors, not {colors}"))),
    }
}

/// Color `j mod 3` for the unique `j` with `2j/3 < x <= 2(j+1)/3`.
pub fn qmod3_color(x: &BigRational) -> usize {
    let three_halves = BigRational::new(BigInt::from(3), BigInt::from(2));
    let j = (x * three_halves).ceil().to_integer() - BigInt::one();
    j.mod_floor(&BigInt::from(3)).to_usize().expect("small residue")
}

/// Largest admissible squared height: `3/(4k)` for 3 colors, `8/(9k)` for 4.
pub fn stripe_max_height_squared(colors: usize, k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(invalid("need at least one bounded dimension"));
    }
    let (num, den) = match colors {
        3 => (3, 4),
        4 => (8, 9),
        _ => return Err(invalid(format!("stripe colorings use 3 or 4 colors, not {colors}"))),
    };
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den * k as i64)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    Hex7,
    Slab7,
    Stripe3,
    Stripe4,
    Qmod3,
}

impl SchemeKind {
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Hex7 => "hex7",
            SchemeKind::Slab7 => "slab7",
            SchemeKind::Stripe3 => "stripe3",
            SchemeKind::Stripe4 => "stripe4",
            SchemeKind::Qmod3 => "qmod3",
        }
    }

    fn is_exact(self) -> bool {
        matches!(self, SchemeKind::Stripe3 | SchemeKind::Stripe4 | SchemeKind::Qmod3)
    }
}

/// A coloring together with the space it colors.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoringScheme {
    pub kind: SchemeKind,
    /// Number of bounded dimensions.
    pub k: usize,
    /// Bounded width; for exact schemes `sqrt(height_squared)`.
    pub epsilon: f64,
    /// Exact squared width for the exact schemes.
    pub height_squared: Option<BigRational>,
    /// Hexagon side for the hexagonal schemes.
    pub side: f64,
}

impl ColoringScheme {
    pub fn hex7() -> Self {
        ColoringScheme {
            kind: SchemeKind::Hex7,
            k: 0,
            epsilon: 0.0,
            height_squared: None,
            side: hex7_side(),
        }
    }

    pub fn slab7(k: usize, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(invalid("slab width must be positive"));
        }
        check_slab7(k, &Scalar::Real(epsilon))?;
        Ok(ColoringScheme {
            kind: SchemeKind::Slab7,
            k,
            epsilon,
            height_squared: None,
            side: hex7_side(),
        })
    }

    /// Hexagonal coloring with an arbitrary side and no validity check;
    /// used as a negative control.
    pub fn hex_with_side(side: f64, k: usize, epsilon: f64) -> Self {
        ColoringScheme {
            kind: if k == 0 { SchemeKind::Hex7 } else { SchemeKind::Slab7 },
            k,
            epsilon,
            height_squared: None,
            side,
        }
    }

    /// Stripe coloring on `R x [0, h]^k` with `h^2 = height_squared`.
    pub fn stripe(colors: usize, k: usize, height_squared: BigRational) -> Result<Self> {
        let max = stripe_max_height_squared(colors, k)?;
        if !height_squared.is_positive() || height_squared > max {
            return Err(invalid(format!("h^2 = {height_squared} must lie in (0, {max}]")));
        }
        Ok(ColoringScheme {
            kind: if colors == 3 { SchemeKind::Stripe3 } else { SchemeKind::Stripe4 },
            k,
            epsilon: rational_to_f64(&height_squared).sqrt(),
            height_squared: Some(height_squared),
            side: 0.0,
        })
    }

    pub fn stripe_max(colors: usize, k: usize) -> Result<Self> {
        Self::stripe(colors, k, stripe_max_height_squared(colors, k)?)
    }

    /// `qmod3` on `Q x [0, eps]^3`; needs `1 - 3 eps^2 > 4/9`, i.e. every
    /// unit pair moves `x` by more than `2/3`.
    pub fn qmod3(epsilon: BigRational) -> Result<Self> {
        let three = BigRational::from_integer(BigInt::from(3));
        let lhs = BigRational::one() - &three * &epsilon * &epsilon;
        let bound = BigRational::new(BigInt::from(4), BigInt::from(9));
        if !epsilon.is_positive() || lhs <= bound {
            return Err(invalid(format!("eps = {epsilon} too large for the mod-3 coloring")));
        }
        Ok(ColoringScheme {
            kind: SchemeKind::Qmod3,
            k: 3,
            epsilon: rational_to_f64(&epsilon),
            height_squared: Some(&epsilon * &epsilon),
            side: 0.0,
        })
    }

    fn free_dims(&self) -> usize {
        match self.kind {
            SchemeKind::Hex7 | SchemeKind::Slab7 => 2,
            _ => 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.free_dims() + self.k
    }

    /// Color of a point with `dim()` coordinates.
    pub fn color(&self, p: &Point) -> Result<usize> {
        if p.dim() != self.dim() {
            return Err(crate::Error::DimensionMismatch {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        let x = &p.coords()[0];
        match self.kind {
            SchemeKind::Hex7 | SchemeKind::Slab7 => {
                let c = p.to_f64();
                Ok(hex_color_with_side(self.side, [c[0], c[1]]))
            }
            SchemeKind::Stripe3 => stripe_color(x, 3),
            SchemeKind::Stripe4 => stripe_color(x, 4),
            SchemeKind::Qmod3 => match x {
                Scalar::Exact(q) => Ok(qmod3_color(q)),
                Scalar::Real(v) => Ok(qmod3_color(&BigRational::from_float(*v).ok_or_else(|| invalid("non-finite x"))?)),
            },
        }
    }
}

/// Unit vector `((1 - |t|^2), 2 t_1, ..., 2 t_k) / (1 + |t|^2)`: inverse
/// stereographic projection, exact for rational `t`.
pub fn rational_unit_vector(t: &[BigRational]) -> Vec<BigRational> {
    let s: BigRational = t.iter().map(|x| x * x).sum();
    let den = BigRational::one() + &s;
    let mut out = vec![(BigRational::one() - &s) / &den];
    let two = BigRational::from_integer(BigInt::from(2));
    out.extend(t.iter().map(|x| &two * x / &den));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct HistogramBucket {
    pub lo: f64,
    pub hi: f64,
    pub pairs: u64,
    pub same_color: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub scheme: SchemeKind,
    pub k: usize,
    pub epsilon: f64,
    pub side: f64,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub exact: bool,
    /// Deterministic boundary cases checked before sampling.
    pub corner_cases: u64,
    /// Directions rejected because the endpoint left the slab.
    pub rejected: u64,
    pub monochromatic: u64,
    /// Up to five monochromatic pairs.
    pub examples: Vec<(Vec<f64>, Vec<f64>)>,
    /// Same-colored pairs among random pairs at random distances.
    pub histogram: Vec<HistogramBucket>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.monochromatic == 0
    }

    /// Smallest same-color distance at or above `from` seen in the
    /// histogram, as a bucket lower edge.
    pub fn same_color_buckets_between(&self, lo: f64, hi: f64) -> u64 {
        self.histogram
            .iter()
            .filter(|b| b.lo >= lo && b.hi <= hi)
            .map(|b| b.same_color)
            .sum()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "scheme {} k={} eps={} side={:.6} mode={}",
            self.scheme.name(),
            self.k,
            self.epsilon,
            self.side,
            if self.exact { "exact" } else { "real" }
        )?;
        writeln!(
            f,
            "samples {} seed {} workers {} corner cases {} rejected directions {}",
            self.samples, self.seed, self.workers, self.corner_cases, self.rejected
        )?;
        writeln!(f, "monochromatic unit pairs: {}", self.monochromatic)?;
        for (a, b) in &self.examples {
            writeln!(f, "  e.g. {a:?} ~ {b:?}")?;
        }
        writeln!(f, "same-color distance histogram (bucket: same/total):")?;
        for b in &self.histogram {
            writeln!(f, "  [{:.2}, {:.2}): {}/{}", b.lo, b.hi, b.same_color, b.pairs)?;
        }
        write!(f, "{}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

const BUCKET: f64 = 0.05;
const BUCKETS: usize = 24;

struct Tally {
    samples: u64,
    rejected: u64,
    monochromatic: u64,
    examples: Vec<(Vec<f64>, Vec<f64>)>,
    pairs: [u64; BUCKETS],
    same: [u64; BUCKETS],
}

impl Tally {
    fn new() -> Self {
        Tally {
            samples: 0,
            rejected: 0,
            monochromatic: 0,
            examples: Vec::new(),
            pairs: [0; BUCKETS],
            same: [0; BUCKETS],
        }
    }

    fn record(&mut self, same: bool, a: &Point, b: &Point) {
        self.samples += 1;
        if same {
            self.monochromatic += 1;
            if self.examples.len() < 5 {
                self.examples.push((a.to_f64(), b.to_f64()));
            }
        }
    }

    fn merge(&mut self, o: Tally) {
        self.samples += o.samples;
        self.rejected += o.rejected;
        self.monochromatic += o.monochromatic;
        for e in o.examples {
            if self.examples.len() < 5 {
                self.examples.push(e);
            }
        }
        for i in 0..BUCKETS {
            self.pairs[i] += o.pairs[i];
            self.same[i] += o.same[i];
        }
    }
}

fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.05 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Random base point: free coordinates in a fundamental domain of the
/// coloring's period, bounded ones uniform in `[0, eps]`.
fn random_base(scheme: &ColoringScheme, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut p = Vec::with_capacity(scheme.dim());
    match scheme.kind {
        SchemeKind::Hex7 | SchemeKind::Slab7 => {
            let [g1, g2] = SAME_COLOR_TRANSLATIONS.map(|c| hex_center(scheme.side, c));
            let (a, b): (f64, f64) = (rng.random(), rng.random());
            p.push(a * g1[0] + b * g2[0]);
            p.push(a * g1[1] + b * g2[1]);
        }
        SchemeKind::Stripe3 => p.push(rng.random_range(0.0..1.5)),
        SchemeKind::Stripe4 => p.push(rng.random_range(0.0..4.0 / 3.0)),
        SchemeKind::Qmod3 => p.push(rng.random_range(0.0..2.0)),
    }
    for _ in 0..scheme.k {
        p.push(rng.random_range(0.0..=scheme.epsilon));
    }
    p
}

fn in_bounds(scheme: &ColoringScheme, p: &[f64]) -> bool {
    p[scheme.free_dims()..].iter().all(|&z| (0.0..=scheme.epsilon).contains(&z))
}

fn real_point(scheme: &ColoringScheme, p: &[f64]) -> Result<Point> {
    if scheme.kind.is_exact() {
        let coords = p
            .iter()
            .map(|&x| BigRational::from_float(x).ok_or_else(|| invalid("non-finite coordinate")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Point::exact(coords))
    } else {
        Ok(Point::real(p))
    }
}

fn histogram_sample(scheme: &ColoringScheme, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let d = scheme.dim();
    let base = random_base(scheme, rng);
    let dist = rng.random_range(0.0..BUCKET * BUCKETS as f64);
    let dir = random_direction(rng, d);
    let other: Vec<f64> = base.iter().zip(&dir).map(|(b, u)| b + dist * u).collect();
    if !in_bounds(scheme, &other) {
        return Ok(());
    }
    let bucket = ((dist / BUCKET) as usize).min(BUCKETS - 1);
    t.pairs[bucket] += 1;
    let a = scheme.color(&real_point(scheme, &base)?)?;
    let b = scheme.color(&real_point(scheme, &other)?)?;
    if a == b {
        t.same[bucket] += 1;
    }
    Ok(())
}

fn random_rational(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> BigRational {
    let den: i64 = rng.random_range(1..=997);
    let lo_n = (lo * den as f64).ceil() as i64;
    let hi_n = (hi * den as f64).floor() as i64;
    let num = if hi_n >= lo_n { rng.random_range(lo_n..=hi_n) } else { lo_n };
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn exact_in_bounds(h2: &BigRational, z: &BigRational) -> bool {
    !z.is_negative() && z * z <= *h2
}

/// One exact unit pair in `R x [0, h]^k`; `None` if rounding pushed a
/// coordinate out of the slab. The direction is drawn first and each bounded
/// coordinate is then drawn from the range that keeps both ends inside.
fn exact_unit_pair(scheme: &ColoringScheme, rng: &mut ChaCha8Rng) -> Option<(Point, Point)> {
    let h2 = scheme.height_squared.as_ref().expect("exact scheme");
    let x_hi = match scheme.kind {
        SchemeKind::Stripe3 => 1.5,
        SchemeKind::Stripe4 => 4.0 / 3.0,
        _ => 2.0,
    };
    let reach = scheme.epsilon.min(1.0) / 2.0;
    let t: Vec<BigRational> = (0..scheme.k).map(|_| random_rational(rng, -reach, reach)).collect();
    let mut u = rational_unit_vector(&t);
    if rng.random::<bool>() {
        u[0] = -u[0].clone();
    }
    let mut base = vec![random_rational(rng, 0.0, x_hi)];
    for d in &u[1..] {
        let df = rational_to_f64(d);
        let z = random_rational(rng, (-df).max(0.0), (scheme.epsilon - df).min(scheme.epsilon));
        if !exact_in_bounds(h2, &z) {
            return None;
        }
        base.push(z);
    }
    let other: Vec<BigRational> = base.iter().zip(&u).map(|(a, b)| a + b).collect();
    if !other[1..].iter().all(|z| exact_in_bounds(h2, z)) {
        return None;
    }
    Some((Point::exact(base), Point::exact(other)))
}

fn worker(scheme: &ColoringScheme, samples: u64, seed: u64, stream: u64) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut t = Tally::new();
    let d = scheme.dim();
    let mut attempts = 0u64;
    while t.samples < samples {
        attempts += 1;
        if attempts > samples.saturating_mul(1000).max(1000) {
            return Err(crate::Error::Infeasible("unit directions keep leaving the slab".into()));
        }
        if scheme.kind.is_exact() {
            match exact_unit_pair(scheme, &mut rng) {
                Some((a, b)) => {
                    let same = scheme.color(&a)? == scheme.color(&b)?;
                    t.record(same, &a, &b);
                }
                None => t.rejected += 1,
            }
        } else {
            let base = random_base(scheme, &mut rng);
            let dir = random_direction(&mut rng, d);
            let other: Vec<f64> = base.iter().zip(&dir).map(|(b, u)| b + u).collect();
            if !in_bounds(scheme, &other) {
                t.rejected += 1;
                continue;
            }
            let (a, b) = (Point::real(&base), Point::real(&other));
            let same = scheme.color(&a)? == scheme.color(&b)?;
            t.record(same, &a, &b);
        }
    }
    let hist_samples = samples.min(100_000);
    for _ in 0..hist_samples {
        histogram_sample(scheme, &mut rng, &mut t)?;
    }
    Ok(t)
}

/// Rational vectors of squared length `s` in `k` coordinates, each at
/// most `h` in absolute value: `j` equal coordinates `sqrt(s/j)` when that
/// is rational.
fn rational_splits(s: &BigRational, k: usize, h2: &BigRational) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    if s.is_zero() {
        out.push(vec![BigRational::zero(); k]);
        return out;
    }
    for j in 1..=k {
        let part = s / BigRational::from_integer(BigInt::from(j));
        if &part > h2 {
            continue;
        }
        if let Some(root) = exact_sqrt(&part) {
            let mut v = vec![root; j];
            v.resize(k, BigRational::zero());
            out.push(v);
        }
    }
    out
}

/// Exact unit pairs at the extreme horizontal offsets: `dx` in
/// `{1/2, 1/3, 1}`, whenever the vertical remainder splits rationally, from
/// base points on and next to cell boundaries.
fn stripe_corner_cases(scheme: &ColoringScheme) -> Vec<(Point, Point)> {
    let h2 = scheme.height_squared.as_ref().expect("exact scheme");
    let bases: Vec<BigRational> = [(0, 1), (1, 2), (1, 3), (2, 3), (1, 6), (-1, 2), (-1, 3), (5, 4), (3, 2)]
        .iter()
        .map(|&(a, b)| BigRational::new(BigInt::from(a), BigInt::from(b)))
        .collect();
    let mut out = Vec::new();
    for (a, b) in [(1, 2), (1, 3), (1, 1)] {
        let dx = BigRational::new(BigInt::from(a), BigInt::from(b));
        let rest = BigRational::one() - &dx * &dx;
        for split in rational_splits(&rest, scheme.k, h2) {
            for x in &bases {
                for sign in [1, -1] {
                    let mut p = vec![x.clone()];
                    let mut q = vec![x + &dx * BigRational::from_integer(BigInt::from(sign))];
                    for d in &split {
                        p.push(BigRational::zero());
                        q.push(d.clone());
                    }
                    out.push((Point::exact(p), Point::exact(q)));
                }
            }
        }
    }
    out
}

pub fn verify_scheme(scheme: &ColoringScheme, samples: u64, seed: u64) -> Result<VerificationReport> {
    verify_scheme_parallel(scheme, samples, seed, 1)
}

/// Splits the samples across `workers` threads, worker `i` using stream
/// `i` of the seeded generator; counts are deterministic for fixed seed and
/// worker count.
pub fn verify_scheme_parallel(scheme: &ColoringScheme, samples: u64, seed: u64, workers: usize) -> Result<VerificationReport> {
    let workers = workers.max(1);
    let mut total = Tally::new();
    let mut corner_cases = 0;
    if matches!(scheme.kind, SchemeKind::Stripe3 | SchemeKind::Stripe4) {
        for (a, b) in stripe_corner_cases(scheme) {
            corner_cases += 1;
            let same = scheme.color(&a)? == scheme.color(&b)?;
            total.record(same, &a, &b);
        }
        total.samples = 0;
    }
    let share = |w: usize| samples / workers as u64 + u64::from((w as u64) < samples % workers as u64);
    let tallies: Vec<Result<Tally>> = if workers == 1 {
        vec![worker(scheme, samples, seed, 0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| s.spawn(move || worker(scheme, share(w), seed, w as u64)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    for t in tallies {
        total.merge(t?);
    }
    let histogram = (0..BUCKETS)
        .map(|i| HistogramBucket {
            lo: i as f64 * BUCKET,
            hi: (i + 1) as f64 * BUCKET,
            pairs: total.pairs[i],
            same_color: total.same[i],
        })
        .collect();
    Ok(VerificationReport {
        scheme: scheme.kind,
        k: scheme.k,
        epsilon: scheme.epsilon,
        side: scheme.side,
        samples: total.samples,
        seed,
        workers,
        exact: scheme.kind.is_exact(),
        corner_cases,
        rejected: total.rejected,
        monochromatic: total.monochromatic,
        examples: total.examples,
        histogram,
    })
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let l2 = d[0] * d[0] + d[1] * d[1];
    let t = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l2).clamp(0.0, 1.0);
    (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
}

/// Distance between two disjoint convex polygons.
pub fn polygon_distance(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let one_way = |p: &[[f64; 2]], q: &[[f64; 2]]| {
        p.iter()
            .flat_map(|&v| (0..q.len()).map(move |i| point_segment_distance(v, q[i], q[(i + 1) % q.len()])))
            .fold(f64::INFINITY, f64::min)
    };
    one_way(a, b).min(one_way(b, a))
}

/// Smallest distance between two distinct same-colored cells, over every
/// cell of one period and all cells within `rings` of it.
pub fn hex_same_color_gap(side: f64, rings: i64) -> f64 {
    let mut best = f64::INFINITY;
    let period: Vec<(i64, i64)> = (0..7).map(|q| (q, 0)).collect();
    for &c in &period {
        let pc = hex_vertices(side, c);
        for dq in -rings..=rings {
            for dr in -rings..=rings {
                if (dq + dr).abs() > rings || (dq, dr) == (0, 0) {
                    continue;
                }
                let other = (c.0 + dq, c.1 + dr);
                if hex_cell_color(other) == hex_cell_color(c) {
                    best = best.min(polygon_distance(&pc, &hex_vertices(side, other)));
                }
            }
        }
    }
    best
}

/// Largest distance between corners of one cell.
pub fn hex_cell_diameter(side: f64) -> f64 {
    let v = hex_vertices(side, (0, 0));
    let mut best = 0.0f64;
    for a in &v {
        for b in &v {
            best = best.max((a[0] - b[0]).hypot(a[1] - b[1]));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn hex_basics() {
        assert_eq!(hex7_color([0.0, 0.0]), 0);
        let colors: std::collections::BTreeSet<usize> = (0..7).map(|i| hex_cell_color((i, 0))).collect();
        assert_eq!(colors.len(), 7);
        for &t in &SAME_COLOR_TRANSLATIONS {
            let v = hex_center(hex7_side(), t);
            for p in [[0.1, 0.05], [0.3, -0.2], [-0.7, 1.1]] {
                assert_eq!(hex7_color(p), hex7_color([p[0] + v[0], p[1] + v[1]]));
            }
        }
    }

    #[test]
    fn hex_gap_and_diameter() {
        let s = hex7_side();
        assert!((hex_cell_diameter(s) - 2.0 * s).abs() < 1e-15);
        let gap = hex_same_color_gap(s, 4);
        assert!((gap - 1.0).abs() < 1e-9, "{gap}");
    }

    #[test]
    fn vertex_pairs_at_unit_distance_differ() {
        let s = hex7_side();
        let mut verts = Vec::new();
        for qq in -4..=4 {
            for r in -4..=4 {
                verts.extend(hex_vertices(s, (qq, r)));
            }
        }
        verts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        verts.dedup_by(|a, b| (a[0] - b[0]).hypot(a[1] - b[1]) < 1e-9);
        let mut unit = 0;
        for (i, a) in verts.iter().enumerate() {
            for b in &verts[i + 1..] {
                if ((a[0] - b[0]).hypot(a[1] - b[1]) - 1.0).abs() < 1e-9 {
                    unit += 1;
                    assert_ne!(hex7_color(*a), hex7_color(*b), "{a:?} {b:?}");
                }
            }
        }
        assert!(unit > 100);
    }

    #[test]
    fn slab7_condition_examples() {
        assert!(ColoringScheme::slab7(1, 0.3).is_ok());
        assert!(ColoringScheme::slab7(2, 0.46).is_ok());
        assert!(ColoringScheme::slab7(2, 0.5).is_err());
        let slab = SlabSpec::new(2, 2, Scalar::ratio(1, 2)).unwrap();
        assert!(slab7_color(&slab, &Point::real(&[0.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn stripe_examples() {
        let c = |x: f64| stripe_color(&Scalar::Real(x), 3).unwrap();
        assert_eq!((c(0.1), c(0.6), c(1.2)), (0, 1, 2));
        assert_eq!(stripe_color(&Scalar::ratio(1, 2), 3).unwrap(), 1);
        assert_eq!(stripe_color(&Scalar::ratio(-1, 10), 3).unwrap(), 2);
        for a in -20..20 {
            let x = Scalar::ratio(a, 7);
            let y = &x + &Scalar::int(1);
            assert_ne!(stripe_color(&x, 3).unwrap(), stripe_color(&y, 3).unwrap());
        }
        assert!(stripe_color(&Scalar::int(0), 5).is_err());
    }

    #[test]
    fn qmod3_examples() {
        assert_eq!(qmod3_color(&q(1, 2)), 0);
        assert_eq!(qmod3_color(&q(2, 3)), 0);
        assert_eq!(qmod3_color(&(q(2, 3) + q(1, 1_000_000))), 1);
        assert_eq!(qmod3_color(&q(0, 1)), 2);
        for a in -30..30 {
            let x = q(a, 11);
            assert_eq!(qmod3_color(&x), qmod3_color(&(&x + q(2, 1))));
        }
    }

    #[test]
    fn rational_units_are_exact() {
        let u = rational_unit_vector(&[q(1, 3), q(-2, 7), q(5, 11)]);
        let s: BigRational = u.iter().map(|x| x * x).sum();
        assert!(s.is_one());
    }

    #[test]
    fn stripe_corner_cases_hit_boundaries() {
        let s = ColoringScheme::stripe_max(3, 3).unwrap();
        let cases = stripe_corner_cases(&s);
        assert!(cases.iter().any(|(a, b)| {
            let dx = (b.coords()[0].clone() - a.coords()[0].clone()).abs();
            dx == Scalar::ratio(1, 2)
        }));
        for (a, b) in cases {
            assert_ne!(s.color(&a).unwrap(), s.color(&b).unwrap());
        }
    }

    #[test]
    fn small_verifications() {
        let r = verify_scheme(&ColoringScheme::hex7(), 20_000, 1).unwrap();
        assert!(r.pass(), "{r}");
        assert_eq!(r.same_color_buckets_between(0.8, 0.95), 0);
        let r = verify_scheme(&ColoringScheme::stripe_max(3, 1).unwrap(), 2_000, 1).unwrap();
        assert!(r.pass(), "{r}");
        let r = verify_scheme(&ColoringScheme::qmod3(q(1, 10)).unwrap(), 2_000, 1).unwrap();
        assert!(r.pass(), "{r}");
        let bad = ColoringScheme::hex_with_side(0.5, 2, 0.46);
        assert!(!verify_scheme(&bad, 100_000, 1).unwrap().pass());
    }

    #[test]
    fn parallel_is_deterministic() {
        let s = ColoringScheme::slab7(1, 0.3).unwrap();
        let a = verify_scheme_parallel(&s, 5_000, 9, 3).unwrap();
        let b = verify_scheme_parallel(&s, 5_000, 9, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 5_000);
    }
}
