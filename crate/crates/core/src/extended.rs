//! Double-double arithmetic (about 106 significand bits).
//!
//! Only what the forbidden-radius evaluation needs: the four field
//! operations, square root, and `sin`/`cos` on a reduced range.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

pub const PI: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::ZERO;
        }
        // One Newton step on the f64 root doubles the accurate bits.
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let r = ((self.hi - p) - e + self.lo) / (2.0 * x);
        let (hi, lo) = quick_two_sum(x, r);
        DoubleDouble { hi, lo }
    }

    fn sin_taylor(self) -> Self {
        let x2 = self * self;
        let mut term = self;
        let mut sum = self;
        let mut k = 1.0;
        while term.hi.abs() > 1e-34 {
            term = -(term * x2) / DoubleDouble::from_f64((k + 1.0) * (k + 2.0));
            sum = sum + term;
            k += 2.0;
        }
        sum
    }

    fn cos_taylor(self) -> Self {
        let x2 = self * self;
        let mut term = Self::ONE;
        let mut sum = Self::ONE;
        let mut k = 0.0;
        while term.hi.abs() > 1e-34 {
            term = -(term * x2) / DoubleDouble::from_f64((k + 1.0) * (k + 2.0));
            sum = sum + term;
            k += 2.0;
        }
        sum
    }

    /// Sine for arguments in `[0, pi/2]`.
    pub fn sin_quadrant(self) -> Self {
        let quarter = PI / DoubleDouble::from_f64(4.0);
        if self.hi <= quarter.hi {
            self.sin_taylor()
        } else {
            (PI / DoubleDouble::from_f64(2.0) - self).cos_taylor()
        }
    }

    /// `sin(pi * num / den)` for `0 <= num/den <= 1/2`.
    pub fn sin_pi_ratio(num: u64, den: u64) -> Self {
        let x = PI * DoubleDouble::from_f64(num as f64) / DoubleDouble::from_f64(den as f64);
        x.sin_quadrant()
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * DoubleDouble::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * DoubleDouble::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::from_f64(q3)
    }
}
