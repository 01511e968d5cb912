//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`s,
//! good for about 31 significant decimal digits.
//!
//! Only what the diagonal-ratio certification needs is here: add, sub, mul,
//! division by a small integer, and `sin` on `[0, π/2]`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
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
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const FRAC_PI_2: Self = Self {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123_233_995_736_766e-17,
    };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
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

    /// Division by an exactly representable integer.
    pub fn div_int(self, d: u64) -> Self {
        let d = d as f64;
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let (s, t) = two_sum(self.hi, -p);
        let t = t - e + self.lo;
        let q2 = (s + t) / d;
        Self::new(q1, q2)
    }

    pub fn mul_int(self, m: u64) -> Self {
        self * Self::from_f64(m as f64)
    }

    /// `sin(x)` for `x ∈ [0, π/2]` (wider arguments are folded by `sin(π - x)`).
    pub fn sin(self) -> Self {
        let mut x = self;
        if x.hi > Self::FRAC_PI_2.hi {
            x = Self::PI - x;
        }
        // Taylor series; |x| ≤ π/2 so 30 terms leave the remainder far below 1e-33.
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 1u64;
        loop {
            term = -(term * x2).div_int((2 * k) * (2 * k + 1));
            sum = sum + term;
            k += 1;
            if term.hi.abs() < 1e-36 || k > 40 {
                break;
            }
        }
        sum
    }

    /// `sin(jπ/n)` evaluated in double-double.
    pub fn sin_pi_fraction(j: u64, n: u64) -> Self {
        Self::PI.mul_int(j).div_int(n).sin()
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Self { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}
