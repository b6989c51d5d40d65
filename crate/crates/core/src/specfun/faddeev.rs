//! Discrete quantum dilogarithm `φ_r(z)`, defined for odd `r ≥ 3` on the
//! strip `−π/r < Re z < π + π/r` by the contour integral
//!
//! ```text
//! φ_r(z) = (4πi/r) ∫_Ω  e^{(2z−π)x} / (4x sinh(πx) sinh(2πx/r)) dx
//! ```
//!
//! where `Ω` runs along the real axis from `−∞` to `∞`, detouring over the
//! origin on the upper semicircle of radius `ε = 1/2` (the integrand has a
//! third-order pole at `x = 0`).

use crate::error::{Error, Result};
use crate::Complex;
use std::f64::consts::PI;

const EPS_RADIUS: f64 = 0.5;

/// The contour integrand `e^{(2z−π)x} / (4x sinh(πx) sinh(2πx/r))` at a
/// complex contour point `x`, stable against `sinh` overflow for large
/// real `|x|` (where `sinh` is replaced by its exponential asymptote).
fn integrand(x: Complex, z: Complex, r: f64) -> Complex {
    let re = x.re.abs();
    if x.im == 0.0 && re > 100.0 {
        // rewrite sinh a = sign(a) e^{|a|}(1 − e^{−2|a|})/2 to avoid overflow;
        // the correction factors matter (e^{−4π·100/r} ≈ 4e-6 at r = 101)
        let c = (1.0 - (-2.0 * PI * re).exp()) * (1.0 - (-4.0 * PI * re / r).exp());
        if x.re > 0.0 {
            ((z * 2.0 - Complex::new(2.0 * PI + 2.0 * PI / r, 0.0)) * x.re).exp() / (x.re * c)
        } else {
            ((z * 2.0 + Complex::new(2.0 * PI / r, 0.0)) * x.re).exp() / (x.re * c)
        }
    } else {
        let num = ((z * 2.0 - Complex::new(PI, 0.0)) * x).exp();
        let den = 4.0 * x * (PI * x).sinh() * (2.0 * PI / r * x).sinh();
        num / den
    }
}

/// Double-exponential (exp-sinh) quadrature of `g` over `(a, ∞)` for an
/// analytic integrand with (possibly slow) exponential decay.
fn exp_sinh_quad(
    g: &dyn Fn(f64) -> Complex,
    a: f64,
    tol: f64,
) -> Result<Complex> {
    let node = |t: f64| -> (f64, f64) {
        let e = (0.5 * PI * t.sinh()).exp();
        (a + e, e * 0.5 * PI * t.cosh())
    };
    let eval = |h: f64| -> Complex {
        let mut sum = {
            let (x, w) = node(0.0);
            g(x) * w
        };
        // march outward until terms stay negligible
        for dir in [1.0f64, -1.0] {
            let mut small = 0;
            let mut k = 1usize;
            while small < 4 && k < 10_000 {
                let (x, w) = node(dir * h * k as f64);
                let term = g(x) * w;
                if term.re.is_finite() && term.im.is_finite() {
                    sum += term;
                    if term.norm() < 1e-22 * sum.norm().max(1e-280) {
                        small += 1;
                    } else {
                        small = 0;
                    }
                } else {
                    small += 1;
                }
                k += 1;
            }
        }
        sum * h
    };
    let mut h = 0.5;
    let mut prev = eval(h);
    for _ in 0..8 {
        h *= 0.5;
        let cur = eval(h);
        if (cur - prev).norm() <= tol * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Tolerance(format!(
        "exp-sinh quadrature did not converge (last h = {h})"
    )))
}

/// Adaptive Simpson quadrature on a real interval for a complex integrand.
fn simpson_quad(g: &dyn Fn(f64) -> Complex, a: f64, b: f64, tol: f64) -> Complex {
    fn recurse(
        g: &dyn Fn(f64) -> Complex,
        a: f64,
        fa: Complex,
        b: f64,
        fb: Complex,
        m: f64,
        fm: Complex,
        whole: Complex,
        tol: f64,
        depth: u32,
    ) -> Complex {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = g(lm);
        let frm = g(rm);
        let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
        let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() < 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(g, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
                + recurse(g, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (g(a), g(m), g(b));
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    recurse(g, a, fa, b, fb, m, fm, whole, tol, 24)
}

/// Discrete quantum dilogarithm `φ_r(z)` for odd `r ≥ 3` and
/// `−π/r < Re z < π + π/r` (open strip; the integral diverges on the
/// boundary). Quadrature tolerance `1e-10`.
pub fn quantum_dilog(r: u64, z: Complex) -> Result<Complex> {
    if r < 3 || r % 2 == 0 {
        return Err(Error::Domain(format!("r = {r} must be odd and ≥ 3")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite(format!("quantum_dilog argument {z}")));
    }
    let rf = r as f64;
    let (lo, hi) = (-PI / rf, PI + PI / rf);
    // The integral diverges logarithmically on the strip boundary (the ray
    // integrand loses its exponential decay there), so the boundary itself
    // is excluded; every formula that consumes φ_r stays strictly inside.
    if z.re <= lo || z.re >= hi {
        return Err(Error::Domain(format!(
            "Re z = {} outside the strip ({lo}, {hi})",
            z.re
        )));
    }

    let tol = 1e-12;
    // positive ray [ε, ∞)
    let pos = exp_sinh_quad(&|x| integrand(Complex::new(x, 0.0), z, rf), EPS_RADIUS, tol)?;
    // negative ray (−∞, −ε] as ∫_ε^∞ f(−u) du
    let neg = exp_sinh_quad(
        &|u| integrand(Complex::new(-u, 0.0), z, rf),
        EPS_RADIUS,
        tol,
    )?;
    // upper semicircle |x| = ε traversed from angle π to 0
    let semi = -simpson_quad(
        &|theta| {
            let x = Complex::from_polar(EPS_RADIUS, theta);
            integrand(x, z, rf) * Complex::new(0.0, 1.0) * x
        },
        0.0,
        PI,
        1e-13,
    );

    let total = (pos + neg + semi) * Complex::new(0.0, 4.0 * PI / rf);
    if total.re.is_finite() && total.im.is_finite() {
        Ok(total)
    } else {
        Err(Error::NonFinite(format!("quantum_dilog({r}, {z})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::dilog_unchecked;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn phi_at_pi_over_r(r: u64) -> Complex {
        let rf = r as f64;
        Complex::new(PI * PI / 6.0, 0.0)
            + Complex::new(0.0, 2.0 * PI * rf.ln() / rf)
            - Complex::new(PI * PI, 2.0 * PI * 2f64.ln()) / rf
            + Complex::new(2.0 * PI * PI / (3.0 * rf * rf), 0.0)
    }

    #[test]
    fn closed_form_at_pi_over_r() {
        for r in [5u64, 13, 101] {
            let got = quantum_dilog(r, Complex::new(PI / r as f64, 0.0)).unwrap();
            let want = phi_at_pi_over_r(r);
            assert!((got - want).norm() < 1e-8, "r = {r}: {got} vs {want}");
        }
    }

    #[test]
    fn reflection_functional_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for r in [7u64, 51] {
            let rf = r as f64;
            for _ in 0..6 {
                let z = Complex::new(rng.gen_range(0.1..PI - 0.1), rng.gen_range(-0.4..0.4));
                let lhs = quantum_dilog(r, z).unwrap() + quantum_dilog(r, Complex::new(PI, 0.0) - z).unwrap();
                let rhs = 2.0 * z * (z - PI) + PI * PI / 3.0 - 2.0 * PI * PI / (3.0 * rf * rf);
                assert!((lhs - rhs).norm() < 1e-8, "r = {r}, z = {z}");
            }
        }
    }

    #[test]
    fn large_r_convergence_to_dilog() {
        // r²(φ_r(z) − Li₂(e^{2iz})) → 2π²e^{2iz}/(3(1−e^{2iz})), within 5% at r = 501
        let r = 501u64;
        let rf = r as f64;
        for z in [Complex::new(1.0, 0.3), Complex::new(2.0, -0.2), Complex::new(0.7, 0.0)] {
            let e2iz = (Complex::new(0.0, 2.0) * z).exp();
            let lhs = rf * rf * (quantum_dilog(r, z).unwrap() - dilog_unchecked(e2iz));
            let rhs = 2.0 * PI * PI * e2iz / (3.0 * (Complex::new(1.0, 0.0) - e2iz));
            assert!(
                (lhs - rhs).norm() < 0.05 * rhs.norm(),
                "z = {z}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn strip_enforced() {
        assert!(quantum_dilog(11, Complex::new(-1.0, 0.0)).is_err());
        assert!(quantum_dilog(11, Complex::new(4.0, 0.0)).is_err());
        assert!(quantum_dilog(10, Complex::new(1.0, 0.0)).is_err());
        // the exact boundary is excluded (the contour integral diverges there)
        assert!(quantum_dilog(11, Complex::new(-PI / 11.0, 0.5)).is_err());
        // …but points strictly inside, arbitrarily close to Re z = π, work
        assert!(quantum_dilog(11, Complex::new(PI, 0.0)).is_ok());
    }
}
