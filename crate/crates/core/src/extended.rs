//! Compact double-double arithmetic: an unevaluated sum of two `f64`s
//! giving ≈106 bits of significand. Used as the optional extended-precision
//! backend for the state-sum accumulation. Note this widens the mantissa,
//! not the exponent range.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Double-double scalar `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    /// Leading component.
    pub hi: f64,
    /// Trailing correction.
    pub lo: f64,
}

/// Error-free sum of two doubles (Knuth two-sum).
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Error-free product via FMA.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    /// Zero.
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    /// One.
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// π to double-double precision.
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    /// Lifts a double.
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Renormalized construction from an unevaluated pair.
    #[inline]
    fn quick(hi: f64, lo: f64) -> Dd {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    /// Rounds to the nearest double.
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `self²`.
    pub fn sqr(self) -> Dd {
        self * self
    }

    /// Absolute value.
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Square root (one Newton step on the double estimate).
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        let approx = self.hi.sqrt();
        let a = Dd::from_f64(approx);
        // x_{n+1} = (x + s/x) / 2
        (a + self / a) * Dd::from_f64(0.5)
    }

    /// `sin(πx)` and `cos(πx)` for a double-double `x`, by exact reduction of
    /// `x` modulo 2 and Taylor series on `[−π/4, π/4]`.
    pub fn sin_cos_pi(x: Dd) -> (Dd, Dd) {
        // k = round(2x), so that πx = kπ/2 + πu with |u| ≤ 1/4
        let k = (2.0 * x.hi).round();
        let u = x - Dd::from_f64(k / 2.0);
        let a = u * Dd::PI; // |a| ≤ π/4 + tiny
        let (s, c) = Dd::sin_cos_small(a);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// Taylor sin/cos for `|a| ≲ 0.8`.
    fn sin_cos_small(a: Dd) -> (Dd, Dd) {
        let a2 = a.sqr();
        let mut s = Dd::ZERO;
        let mut c = Dd::ZERO;
        let mut term_s = a;
        let mut term_c = Dd::ONE;
        // sin: a^{2k+1}/(2k+1)!, cos: a^{2k}/(2k)!, 17 terms ≫ 106 bits
        for k in 0..17u32 {
            if k % 2 == 0 {
                s = s + term_s;
                c = c + term_c;
            } else {
                s = s - term_s;
                c = c - term_c;
            }
            let d1 = f64::from(2 * k + 2) * f64::from(2 * k + 3);
            let d2 = f64::from(2 * k + 1) * f64::from(2 * k + 2);
            term_s = term_s * a2 / Dd::from_f64(d1);
            term_c = term_c * a2 / Dd::from_f64(d2);
        }
        (s, c)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        Dd::quick(s, e + self.lo + rhs.lo)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        Dd::quick(p, e + self.hi * rhs.lo + self.lo * rhs.hi)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Dd::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r2 = r - rhs * Dd::from_f64(q2);
        let q3 = r2.hi / rhs.hi;
        Dd::quick(q1, q2) + Dd::from_f64(q3)
    }
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DdComplex {
    /// Real part.
    pub re: Dd,
    /// Imaginary part.
    pub im: Dd,
}

impl DdComplex {
    /// Zero.
    pub const ZERO: DdComplex = DdComplex {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    /// Lifts a double complex.
    pub fn from_f64(re: f64, im: f64) -> DdComplex {
        DdComplex {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    /// Rounds to a double complex.
    pub fn to_complex(self) -> crate::Complex {
        crate::Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `e^{iπx}` for double-double `x`.
    pub fn cis_pi(x: Dd) -> DdComplex {
        let (s, c) = Dd::sin_cos_pi(x);
        DdComplex { re: c, im: s }
    }

    /// Squared magnitude.
    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }
}

impl Add for DdComplex {
    type Output = DdComplex;
    fn add(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for DdComplex {
    type Output = DdComplex;
    fn sub(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = DdComplex;
    fn mul(self, rhs: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Mul<Dd> for DdComplex {
    type Output = DdComplex;
    fn mul(self, rhs: Dd) -> DdComplex {
        DdComplex {
            re: self.re * rhs,
            im: self.im * rhs,
        }
    }
}

impl Div for DdComplex {
    type Output = DdComplex;
    fn div(self, rhs: DdComplex) -> DdComplex {
        let d = rhs.norm_sqr();
        DdComplex {
            re: (self.re * rhs.re + self.im * rhs.im) / d,
            im: (self.im * rhs.re - self.re * rhs.im) / d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_tightness() {
        let a = Dd::from_f64(1.0) / Dd::from_f64(3.0);
        let b = a * Dd::from_f64(3.0);
        assert!((b - Dd::ONE).abs().to_f64() < 1e-31);
        let s = Dd::from_f64(2.0).sqrt();
        assert!((s * s - Dd::from_f64(2.0)).abs().to_f64() < 1e-30);
    }

    #[test]
    fn sin_cos_pi_exact_points() {
        let (s, c) = Dd::sin_cos_pi(Dd::from_f64(0.5));
        assert!((s - Dd::ONE).abs().to_f64() < 1e-30);
        assert!(c.abs().to_f64() < 1e-30);
        let (s, c) = Dd::sin_cos_pi(Dd::from_f64(1.0 / 3.0));
        assert!((s.to_f64() - (std::f64::consts::PI / 3.0).sin()).abs() < 1e-15);
        assert!((c.to_f64() - 0.5).abs() < 1e-15);
        // Pythagorean identity in dd precision
        let (s, c) = Dd::sin_cos_pi(Dd::from_f64(0.123_456_789));
        assert!((s.sqr() + c.sqr() - Dd::ONE).abs().to_f64() < 1e-30);
    }

    #[test]
    fn pi_constant() {
        // sin(π·1) = 0 to dd accuracy confirms the π split
        let (s, _) = Dd::sin_cos_pi(Dd::ONE);
        assert!(s.abs().to_f64() < 1e-30);
    }
}
