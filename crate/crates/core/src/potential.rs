//! The potential function `V`, its discrete counterpart `V_r`, the sister
//! potential `W`, their gradients and Hessian, and the region bookkeeping
//! used by all of the asymptotic estimates.
//!
//! `V(x, y, z, s, m, n, l)` is a sum of five principal-branch dilogarithms
//! of the form `Li₂(e^{2iw})` plus a real-coefficient quadratic; its
//! critical points encode hyperbolic structure equations and its critical
//! values give `i·(Vol + i·CS)` modulo `π²`. `W` differs only in the
//! quadratic part and plays the same role for the sister filling.
//! `V_r` replaces each dilogarithm by the discrete quantum dilogarithm and
//! converges to `V` uniformly at rate `log r / r`.

use crate::contfrac::{FourierData, SurgerySpec};
use crate::error::{Error, Result};
use crate::specfun::{dilog, quantum_dilog};
use crate::Complex;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

/// Default margin `ε` for the shrunken region `D_ε`. Any positive value
/// small enough to contain the critical points works; this one keeps all
/// desk-scale critical points comfortably interior.
pub const DEFAULT_EPS: f64 = 0.02;

/// Tolerance band on the linear inequalities defining the regions.
/// Boundary points are classified as inside (the estimates use closures).
const REGION_BAND: f64 = 1e-12;

/// How close a dilogarithm argument may come to the cut `[1, ∞)` (or a
/// `log(1−·)` / `h(·)` argument to its singularity) before we refuse to
/// pick a branch silently.
const CUT_BAND: f64 = 1e-12;

/// Region flag for the real part of an evaluation point, most specific
/// first. `DH` and `DEps` overlap; membership in each can be re-tested
/// directly with [`in_dh`] and [`in_d_eps`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Inside the octahedron `D_H` (Hessian-definiteness region, ⊂ D₀).
    DH,
    /// Inside the shrunken region `D_ε` (ε = [`DEFAULT_EPS`]) but not `D_H`.
    DEps,
    /// Inside `D₀` but outside both `D_ε` and `D_H`.
    D0,
    /// Inside the full summation region `D` only.
    D,
    /// Outside `D`.
    Outside,
}

/// `Re(x,y,z) ∈ D = {y ∈ [|x|, π), z ∈ (0, π−y)}` (closure, banded).
pub fn in_d(x: f64, y: f64, z: f64) -> bool {
    y >= x.abs() - REGION_BAND
        && y <= PI + REGION_BAND
        && z >= -REGION_BAND
        && z <= PI - y + REGION_BAND
}

/// `Re(x,y,z) ∈ D_ε` for the given margin (closure, banded):
/// `−π/4+ε < x < π/4−ε`, `y−x > ε`, `x+y > ε`, `z−y > ε`,
/// `y+z < π−ε`, `y+2z < 7π/4−ε`, `2z−y > π/4−ε`.
pub fn in_d_eps(x: f64, y: f64, z: f64, eps: f64) -> bool {
    let b = REGION_BAND;
    x >= -PI / 4.0 + eps - b
        && x <= PI / 4.0 - eps + b
        && y - x >= eps - b
        && x + y >= eps - b
        && z - y >= eps - b
        && y + z <= PI - eps + b
        && y + 2.0 * z <= 7.0 * PI / 4.0 - eps + b
        && 2.0 * z - y >= PI / 4.0 - eps - b
}

/// `Re(x,y,z) ∈ D₀` (the ε = 0 region).
pub fn in_d0(x: f64, y: f64, z: f64) -> bool {
    in_d_eps(x, y, z, 0.0)
}

/// `Re(x,y,z) ∈ D_H = {y−x, y+x, z−y ∈ (0, π/2), z+y ∈ (π/2, π)}`
/// (closure, banded).
pub fn in_dh(x: f64, y: f64, z: f64) -> bool {
    let b = REGION_BAND;
    let half = PI / 2.0;
    y - x >= -b
        && y - x <= half + b
        && y + x >= -b
        && y + x <= half + b
        && z + y >= half - b
        && z + y <= PI + b
        && z - y >= -b
        && z - y <= half + b
}

/// Classifies a real point, most specific region first.
pub fn classify_region(x: f64, y: f64, z: f64, eps: f64) -> Region {
    if !in_d(x, y, z) {
        Region::Outside
    } else if in_dh(x, y, z) {
        Region::DH
    } else if in_d_eps(x, y, z, eps) {
        Region::DEps
    } else if in_d0(x, y, z) {
        Region::D0
    } else {
        Region::D
    }
}

/// An evaluation point for the potentials, carrying the region flag of its
/// real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialPoint {
    /// First coordinate (radians).
    pub x: Complex,
    /// Second coordinate (radians).
    pub y: Complex,
    /// Third coordinate (radians).
    pub z: Complex,
    /// Region of `Re(x, y, z)` with margin [`DEFAULT_EPS`].
    pub region: Region,
}

impl PotentialPoint {
    /// Builds a point and classifies its real part with [`DEFAULT_EPS`].
    pub fn new(x: Complex, y: Complex, z: Complex) -> Self {
        Self::with_eps(x, y, z, DEFAULT_EPS)
    }

    /// Builds a point with an explicit `D_ε` margin.
    pub fn with_eps(x: Complex, y: Complex, z: Complex, eps: f64) -> Self {
        let region = classify_region(x.re, y.re, z.re, eps);
        Self { x, y, z, region }
    }

    /// Convenience constructor from real coordinates.
    pub fn from_real(x: f64, y: f64, z: f64) -> Self {
        Self::new(Complex::new(x, 0.0), Complex::new(y, 0.0), Complex::new(z, 0.0))
    }
}

/// The discrete index data `(s, m, n, l)` of one Fourier sector, together
/// with the exact values `k(s, m)`, `J(s)`, `K(s)` it feeds into the
/// potentials.
#[derive(Debug, Clone)]
pub struct IndexData {
    /// Sector index `s ∈ {0 … |q|−1}`.
    pub s: i64,
    /// Frequency in `x`.
    pub m: i64,
    /// Frequency in `y`.
    pub n: i64,
    /// Frequency in `z`.
    pub l: i64,
    /// `k(s, m) = I(s)/q + 1 − 2m`, exact.
    pub kvalue: BigRational,
    /// `J(s)`, exact.
    pub jval: BigRational,
    /// `K(s)`, exact.
    pub kval: BigRational,
    /// `I(s)` as an integer.
    pub ival: i64,
}

impl IndexData {
    /// Materializes the index data for sector `s` and frequencies
    /// `(m, n, l)` from the exact index maps.
    pub fn new(fd: &FourierData, s: i64, m: i64, n: i64, l: i64) -> Result<Self> {
        let aq = fd.q.unsigned_abs() as i64;
        if s < 0 || s >= aq {
            return Err(Error::Domain(format!("sector s = {s} outside 0..{aq}")));
        }
        Ok(Self {
            s,
            m,
            n,
            l,
            kvalue: fd.k_of(s, m),
            jval: fd.jmap[s as usize].clone(),
            kval: fd.kmap[s as usize].clone(),
            ival: fd.i_of(s),
        })
    }

    /// `k(s, m)` as a double.
    pub fn k_f64(&self) -> f64 {
        self.kvalue.to_f64().expect("k(s,m) fits in f64")
    }

    /// `K(s)` as a double.
    pub fn kval_f64(&self) -> f64 {
        self.kval.to_f64().expect("K(s) fits in f64")
    }

    /// `J(s)` as a double.
    pub fn jval_f64(&self) -> f64 {
        self.jval.to_f64().expect("J(s) fits in f64")
    }
}

const I_UNIT: Complex = Complex::new(0.0, 1.0);

/// `e^{2iw}`.
fn e2i(w: Complex) -> Complex {
    (2.0 * I_UNIT * w).exp()
}

/// Rejects arguments within [`CUT_BAND`] of the dilogarithm cut `[1, ∞)`.
fn check_cut(term: usize, arg: Complex) -> Result<Complex> {
    if arg.im.abs() < CUT_BAND && arg.re > 1.0 - CUT_BAND {
        return Err(Error::BranchCut {
            term,
            arg: format!("{arg}"),
        });
    }
    Ok(arg)
}

/// The five dilogarithm arguments of `V` and `W`, in the fixed order
/// `e^{2i(y+x)}, e^{2i(y−x)}, e^{2i(−y+z)}, e^{2i(−y−z)}, e^{−2iy}`
/// (the last one enters with a minus sign).
fn li2_args(pt: &PotentialPoint) -> [Complex; 5] {
    let (x, y, z) = (pt.x, pt.y, pt.z);
    [e2i(y + x), e2i(y - x), e2i(z - y), e2i(-y - z), e2i(-y)]
}

/// `Σ ±Li₂` over the five standard arguments, cut-checked.
fn li2_sum(pt: &PotentialPoint) -> Result<Complex> {
    let args = li2_args(pt);
    let mut sum = Complex::new(0.0, 0.0);
    for (i, &a) in args.iter().enumerate() {
        check_cut(i, a)?;
        let term = dilog(a)?;
        if i == 4 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    Ok(sum)
}

/// The potential function `V(x, y, z, s, m, n, l)`:
/// five dilogarithms plus the quadratic
/// `−((p+2q)/q)x² − 4y² − (4p′+2)z² + 2πk(s,m)x − 4πny − 2π(2l+1)z
///  + K(s)π² − π²/2`.
///
/// Analytic for `Re(x,y,z) ∈ D₀`; defined by the same principal branches
/// wherever none of the five arguments touches the cut `[1, ∞)`
/// (a collision raises [`Error::BranchCut`] with the term index).
pub fn eval_v(pt: &PotentialPoint, idx: &IndexData, spec: &SurgerySpec) -> Result<Complex> {
    let (x, y, z) = (pt.x, pt.y, pt.z);
    let (p, q, pp) = (spec.p as f64, spec.q as f64, spec.twist as f64);
    let quad = -((p + 2.0 * q) / q) * x * x - 4.0 * y * y - (4.0 * pp + 2.0) * z * z
        + 2.0 * PI * idx.k_f64() * x
        - 4.0 * PI * (idx.n as f64) * y
        - 2.0 * PI * (2.0 * idx.l as f64 + 1.0) * z
        + Complex::new((idx.kval_f64() - 0.5) * PI * PI, 0.0);
    Ok(li2_sum(pt)? + quad)
}

/// The sister potential `W(x, y, z, s, m, n, l)`: the same five
/// dilogarithms with the quadratic
/// `+((p+2q)/q)x² − 4y² + 4(p′−1)z² − 2πk(s,m)x − 4πny + 4πlz
///  − π²/2 − K(s)π²`.
pub fn eval_w(pt: &PotentialPoint, idx: &IndexData, spec: &SurgerySpec) -> Result<Complex> {
    let (x, y, z) = (pt.x, pt.y, pt.z);
    let (p, q, pp) = (spec.p as f64, spec.q as f64, spec.twist as f64);
    let quad = ((p + 2.0 * q) / q) * x * x - 4.0 * y * y + 4.0 * (pp - 1.0) * z * z
        - 2.0 * PI * idx.k_f64() * x
        - 4.0 * PI * (idx.n as f64) * y
        + 4.0 * PI * (idx.l as f64) * z
        + Complex::new((-idx.kval_f64() - 0.5) * PI * PI, 0.0);
    Ok(li2_sum(pt)? + quad)
}

/// `log(1 − e^{2iw})` on the principal branch, cut-checked
/// (`e^{2iw}` within [`CUT_BAND`] of `[1, ∞)` is rejected as term `term`).
fn log1me(term: usize, w: Complex) -> Result<Complex> {
    let a = check_cut(term, e2i(w))?;
    Ok((Complex::new(1.0, 0.0) - a).ln())
}

/// Closed-form gradient `(V_x′, V_y′, V_z′)`.
///
/// `V_x′ = (i/q)((p+4q)(2ix) − q(4ix + 2L(y+x) − 2L(y−x)) − q·k(s,m)·2πi)`
/// with `L(w) = log(1−e^{2iw})`, and similarly for the other components.
pub fn grad_v(pt: &PotentialPoint, idx: &IndexData, spec: &SurgerySpec) -> Result<[Complex; 3]> {
    let (x, y, z) = (pt.x, pt.y, pt.z);
    let (p, q, pp) = (spec.p as f64, spec.q as f64, spec.twist as f64);
    let lpx = log1me(0, y + x)?;
    let lmx = log1me(1, y - x)?;
    let lpz = log1me(2, z - y)?;
    let lmz = log1me(3, -y - z)?;
    let ly = log1me(4, -y)?;
    let two_pi_i = 2.0 * PI * I_UNIT;

    let vx = (I_UNIT / q)
        * ((p + 4.0 * q) * (2.0 * I_UNIT * x)
            - q * (4.0 * I_UNIT * x + 2.0 * lpx - 2.0 * lmx)
            - q * idx.k_f64() * two_pi_i);
    // the −4πny frequency term contributes +n·2πi inside the parentheses
    // (2i · n·2πi = −4πn)
    let vy = 2.0
        * I_UNIT
        * (4.0 * I_UNIT * y - lpx - lmx - ly + lpz + lmz + (idx.n as f64) * two_pi_i);
    let vz = 2.0
        * I_UNIT
        * ((4.0 * I_UNIT * z - two_pi_i + lmz - lpz)
            + (pp - 0.5) * (4.0 * I_UNIT * z - two_pi_i)
            + (pp + idx.l as f64 + 1.0) * two_pi_i);
    Ok([vx, vy, vz])
}

/// Closed-form gradient `(W_x′, W_y′, W_z′)`; `W_y′ = V_y′`.
pub fn grad_w(pt: &PotentialPoint, idx: &IndexData, spec: &SurgerySpec) -> Result<[Complex; 3]> {
    let (x, y, z) = (pt.x, pt.y, pt.z);
    let (p, q, pp) = (spec.p as f64, spec.q as f64, spec.twist as f64);
    let lpx = log1me(0, y + x)?;
    let lmx = log1me(1, y - x)?;
    let lpz = log1me(2, z - y)?;
    let lmz = log1me(3, -y - z)?;
    let ly = log1me(4, -y)?;
    let two_pi_i = 2.0 * PI * I_UNIT;

    let wx = (I_UNIT / q)
        * (-p * (2.0 * I_UNIT * x) - q * (4.0 * I_UNIT * x + 2.0 * lpx - 2.0 * lmx)
            + q * idx.k_f64() * two_pi_i);
    let wy = 2.0
        * I_UNIT
        * (4.0 * I_UNIT * y - lpx - lmx - ly + lpz + lmz + (idx.n as f64) * two_pi_i);
    let wz = 2.0
        * I_UNIT
        * ((4.0 * I_UNIT * z - two_pi_i + lmz - lpz) - pp * (4.0 * I_UNIT * z - two_pi_i)
            + (-pp - idx.l as f64 + 1.0) * two_pi_i);
    Ok([wx, wy, wz])
}

/// `h(w) = 1/(e^{2iw} − 1)`, the building block of the Hessian.
fn hfun(term: usize, w: Complex) -> Result<Complex> {
    let d = e2i(w) - Complex::new(1.0, 0.0);
    if d.norm() < CUT_BAND {
        return Err(Error::BranchCut {
            term,
            arg: format!("h pole at w = {w}"),
        });
    }
    Ok(1.0 / d)
}

/// The symmetric 3×3 Hessian of `V` in `(x, y, z)`:
///
/// ```text
/// V_xx = 8 + 4h(y+x) + 4h(y−x) − 2(p+2q)/q          V_xz = 0
/// V_xy = 4(h(y+x) − h(y−x))
/// V_yy = 4 + 4h(y+x) + 4h(y−x) + 4h(z−y) + 4h(−y−z) − 4h(−y)
/// V_yz = 4(h(y−z) − h(y+z))
/// V_zz = −4h(y−z) − 4h(y+z) − 2(4p′+2)
/// ```
///
/// `Im Hess(V)` is negative definite for `Re(x,y,z) ∈ D_H`, which is what
/// the saddle-point bound and the `t(M)` determinant rely on.
pub fn hessian_v(
    pt: &PotentialPoint,
    _idx: &IndexData,
    spec: &SurgerySpec,
) -> Result<[[Complex; 3]; 3]> {
    let (x, y, z) = (pt.x, pt.y, pt.z);
    let (p, q, pp) = (spec.p as f64, spec.q as f64, spec.twist as f64);
    let hpx = hfun(0, y + x)?;
    let hmx = hfun(1, y - x)?;
    let hzy = hfun(2, z - y)?;
    let hyz = hfun(3, -y - z)?;
    let hy = hfun(4, -y)?;
    // h(y−z) = −1 − h(z−y), h(y+z) = −1 − h(−y−z)
    let hymz = -1.0 - hzy;
    let hypz = -1.0 - hyz;

    let vxx = 8.0 + 4.0 * (hpx + hmx) - 2.0 * (p + 2.0 * q) / q;
    let vxy = 4.0 * (hpx - hmx);
    let vyy = 4.0 + 4.0 * (hpx + hmx + hzy + hyz - hy);
    let vyz = 4.0 * (hymz - hypz);
    let vzz = -4.0 * (hymz + hypz) - 2.0 * (4.0 * pp + 2.0);
    let zero = Complex::new(0.0, 0.0);
    Ok([[vxx, vxy, zero], [vxy, vyy, vyz], [zero, vyz, vzz]])
}

/// The discrete potential `V_r(x, y, z, s, m, n, l)`:
///
/// `φ_r(y+x+π/r) + φ_r(y−x+π/r) + φ_r(−y+z) + φ_r(−y+π−z) − φ_r(π−y−π/r)
///  − ((p+2q)/q)x² − 4y² − (4p′+2)z² + 2π(I(s)/q+1)x − 2πz + K(s)π²
///  − φ_r(π/r) − π²/3 − 4π(x+y)/r + 2π²/r − π²/(3r²)
///  − 4πmx − 4πny − 4πlz`.
///
/// Every `φ_r` argument must lie in the open strip `0 < Re < π` extended
/// by `π/r` on both sides; violations propagate as [`Error::Domain`].
pub fn eval_vr(
    r: u64,
    pt: &PotentialPoint,
    idx: &IndexData,
    spec: &SurgerySpec,
) -> Result<Complex> {
    if r < 3 || r % 2 == 0 {
        return Err(Error::Domain(format!("r = {r} must be odd and ≥ 3")));
    }
    let (x, y, z) = (pt.x, pt.y, pt.z);
    let (p, q, pp) = (spec.p as f64, spec.q as f64, spec.twist as f64);
    let rf = r as f64;
    let shift = PI / rf;
    let phi = |w: Complex| quantum_dilog(r, w);

    let dilogs = phi(y + x + shift)? + phi(y - x + shift)? + phi(z - y)?
        + phi(PI - z - y)?
        - phi(PI - y - shift)?
        - phi(Complex::new(shift, 0.0))?;
    let iq = BigRational::new(idx.ival.into(), spec.q.into())
        .to_f64()
        .expect("I(s)/q fits in f64");
    let quad = -((p + 2.0 * q) / q) * x * x - 4.0 * y * y - (4.0 * pp + 2.0) * z * z
        + 2.0 * PI * (iq + 1.0) * x
        - 2.0 * PI * z
        + Complex::new(idx.kval_f64() * PI * PI, 0.0);
    let tail = -(4.0 * PI / rf) * (x + y)
        + Complex::new(
            -PI * PI / 3.0 + 2.0 * PI * PI / rf - PI * PI / (3.0 * rf * rf),
            0.0,
        );
    let freq = -4.0 * PI
        * ((idx.m as f64) * x + (idx.n as f64) * y + (idx.l as f64) * z);
    Ok(dilogs + quad + tail + freq)
}

/// `Im V` on the shifted slice `(x, y + i·shift, z)` with real `x, y, z` —
/// the quantity every region estimate bounds.
pub fn im_v_surface(
    x: f64,
    y: f64,
    z: f64,
    shift: f64,
    idx: &IndexData,
    spec: &SurgerySpec,
) -> Result<f64> {
    let pt = PotentialPoint::new(
        Complex::new(x, 0.0),
        Complex::new(y, shift),
        Complex::new(z, 0.0),
    );
    Ok(eval_v(&pt, idx, spec)?.im)
}

/// The two roots `y₁, y₂` of the critical-point equation `V_y′ = 0` at
/// fixed `(x, z)` under the substitution `a = e^{2ix}`, `b = e^{2iy}`,
/// `c = e^{2iz}`: the quadratic
/// `(1/b)² − (a + 1/a)(1/b) + (1 + a + 1/a − c − 1/c) = 0`
/// solved for `1/b`, with `y = (i/2)·Log(1/b)` on the principal branch.
///
/// Ordered so that at `(x, z) = (0, π/2)` the first root continues
/// `arctan(2)/2 + i·log(5)/4` (positive real part). Valid on the branch
/// neighbourhood of that point; a double root raises
/// [`Error::Degenerate`].
pub fn critical_y_roots(x: Complex, z: Complex) -> Result<(Complex, Complex)> {
    let a = e2i(x);
    let c = e2i(z);
    let one = Complex::new(1.0, 0.0);
    let sum = a + one / a; // u₁ + u₂
    let prod = one + a + one / a - c - one / c; // u₁ u₂
    let disc = sum * sum - 4.0 * prod;
    if disc.norm() < 1e-14 {
        return Err(Error::Degenerate(format!(
            "double critical root at x = {x}, z = {z}"
        )));
    }
    let sq = disc.sqrt();
    let u1 = (sum + sq) / 2.0;
    let u2 = (sum - sq) / 2.0;
    let to_y = |u: Complex| (I_UNIT / 2.0) * u.ln();
    let (y1, y2) = (to_y(u1), to_y(u2));
    // order by real part: y₁ continues arctan(2)/2 + i·log(5)/4
    if y1.re >= y2.re {
        Ok((y1, y2))
    } else {
        Ok((y2, y1))
    }
}
