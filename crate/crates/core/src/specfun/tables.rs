//! Quantum factorial tables at the root of unity `t = e^{4πi/r}`, `r` odd.
//!
//! With `t^{1/2} = e^{2πi/r}` the braced integer is
//! `{n} = t^{n/2} − t^{−n/2} = 2i sin(2πn/r)`, and the tables hold
//!
//! * `(t)_n  = Π_{k=1}^n (1 − t^k)`          (Pochhammer),
//! * `{n}!   = Π_{k=1}^n {k}`                (braced factorial),
//! * `[n]    = {n}/{1}`                      (quantum integer),
//!
//! for `n = 0 … r−1`, linked by `{n}! = (−1)^n t^{−n(n+1)/4} (t)_n`.

use crate::error::{Error, Result};
use crate::Complex;
use std::f64::consts::PI;

/// Maximum supported root order; table sizes and double-precision exponent
/// range are comfortable below this (state-sum terms reach `e^{0.29 r}`).
pub const R_CAP: u64 = 2001;

/// Immutable per-`r` tables shared read-only across threads.
#[derive(Debug, Clone)]
pub struct QuantumTables {
    /// Odd root order `r ≥ 3`.
    pub r: u64,
    /// `t = e^{4πi/r}`.
    pub t: Complex,
    /// `(t)_n` for `n = 0 … r−1`.
    pub pochhammer: Vec<Complex>,
    /// `{n}!` for `n = 0 … r−1`.
    pub braced_factorial: Vec<Complex>,
    /// `[n] = sin(2πn/r)/sin(2π/r)` for `n = 0 … r−1`.
    pub quantum_int: Vec<f64>,
}

impl QuantumTables {
    /// `{n} = 2i sin(2πn/r)`.
    pub fn braced(&self, n: u64) -> Complex {
        Complex::new(0.0, 2.0 * (2.0 * PI * n as f64 / self.r as f64).sin())
    }

    /// Integer power `t^k` evaluated from the reduced angle (no error
    /// accumulation for large `k`; `k` may be negative).
    pub fn t_pow(&self, k: i64) -> Complex {
        let r = self.r as i64;
        let k = k.rem_euclid(r);
        Complex::from_polar(1.0, 4.0 * PI * k as f64 / self.r as f64)
    }

    /// Quarter-integer power `(t^{1/4})^k = e^{πik/r}` with the principal
    /// choice `t^{1/4} = e^{πi/r}`.
    pub fn t_quarter_pow(&self, k: i64) -> Complex {
        let k = k.rem_euclid(2 * self.r as i64);
        Complex::from_polar(1.0, PI * k as f64 / self.r as f64)
    }
}

/// Builds the tables for odd `3 ≤ r ≤ 2001`.
pub fn build_quantum_tables(r: u64) -> Result<QuantumTables> {
    if r < 3 || r % 2 == 0 {
        return Err(Error::Domain(format!("r = {r} must be odd and ≥ 3")));
    }
    if r > R_CAP {
        return Err(Error::Domain(format!("r = {r} exceeds the cap {R_CAP}")));
    }
    let rf = r as f64;
    let n = r as usize;
    let mut pochhammer = Vec::with_capacity(n);
    let mut braced_factorial = Vec::with_capacity(n);
    let mut quantum_int = Vec::with_capacity(n);
    pochhammer.push(Complex::new(1.0, 0.0));
    braced_factorial.push(Complex::new(1.0, 0.0));
    quantum_int.push(0.0);
    let sin1 = (2.0 * PI / rf).sin();
    for k in 1..n {
        let kf = k as f64;
        let tk = Complex::from_polar(1.0, 4.0 * PI * kf / rf);
        pochhammer.push(pochhammer[k - 1] * (Complex::new(1.0, 0.0) - tk));
        let braced_k = Complex::new(0.0, 2.0 * (2.0 * PI * kf / rf).sin());
        braced_factorial.push(braced_factorial[k - 1] * braced_k);
        quantum_int.push((2.0 * PI * kf / rf).sin() / sin1);
    }
    Ok(QuantumTables {
        r,
        t: Complex::from_polar(1.0, 4.0 * PI / rf),
        pochhammer,
        braced_factorial,
        quantum_int,
    })
}
