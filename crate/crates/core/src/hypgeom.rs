//! Hyperbolic geometry engine for the twisted Whitehead fillings.
//!
//! The Whitehead link complement carries an ideal triangulation by five
//! tetrahedra arranged as a pentagonal bipyramid; its shapes are rational
//! functions of three coordinates `(a, b, c)`.  This module solves the
//! gluing and Dehn-surgery equations by Newton continuation from the
//! complete structure, computes hyperbolic volume and the Chern–Simons
//! representative, produces the sister solution sharing the same volume,
//! and exports the critical points that tie the geometry to the potential
//! function.

use crate::contfrac::{expand_slope, fourier_maps, FourierData, SurgerySpec};
use crate::error::{Error, Result};
use crate::potential::{eval_v, eval_w, grad_v, IndexData, PotentialPoint};
use crate::specfun::{bloch_wigner, lobachevsky};
use crate::Complex;
use std::f64::consts::PI;

/// Newton step tolerance per continuation step.
const NEWTON_STEP_TOL: f64 = 1e-13;
/// Residual tolerance for a converged solution.
const RESIDUAL_TOL: f64 = 1e-12;
/// Iteration cap per continuation step.
const MAX_NEWTON_ITERS: usize = 50;
/// Number of continuation steps along the filling path.
const CONTINUATION_STEPS: usize = 32;
/// Largest allowed Newton step in log coordinates; bigger steps risk a
/// silent branch jump of one of the logarithms.
const MAX_LOG_STEP: f64 = PI / 2.0;

/// Outcome of the hyperbolicity test for a filling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// The filled manifold is closed hyperbolic.
    Hyperbolic,
    /// One of the finitely many exceptional fillings; the reason names the
    /// condition that fired.
    Exceptional(String),
}

/// Decides hyperbolicity of the filling from the finite exception list:
/// exceptional iff `p′ ∈ {0, −1}`, or `p/q ∈ {0, 1, 2, 3, 4}` as a
/// rational number, or `p′ = 1` with `p/q ∈ {−2, −3, −4}`.
pub fn classify(spec: &SurgerySpec) -> Classification {
    if spec.twist == 0 || spec.twist == -1 {
        return Classification::Exceptional(format!("twist p′ = {} in {{0, −1}}", spec.twist));
    }
    // p/q is an integer k iff q | p (then k = p/q); q ≠ 0 always holds.
    if spec.p % spec.q == 0 {
        let k = spec.p / spec.q;
        if (0..=4).contains(&k) {
            return Classification::Exceptional(format!("slope p/q = {k} in {{0, 1, 2, 3, 4}}"));
        }
        if spec.twist == 1 && (-4..=-2).contains(&k) {
            return Classification::Exceptional(format!(
                "twist p′ = 1 with slope p/q = {k} in {{−2, −3, −4}}"
            ));
        }
    }
    Classification::Hyperbolic
}

/// The three edge invariants of an ideal tetrahedron.
#[derive(Debug, Clone, Copy)]
pub struct TetraShape {
    /// Primary shape parameter.
    pub z1: Complex,
    /// `z₂ = 1/(1 − z₁)`.
    pub z2: Complex,
    /// `z₃ = 1 − 1/z₁`.
    pub z3: Complex,
}

impl TetraShape {
    /// Builds the full edge-invariant triple from the primary parameter.
    /// Rejects the degenerate shapes `z ∈ {0, 1}`.
    pub fn new(z1: Complex) -> Result<Self> {
        if z1.norm() < 1e-300 || (z1 - 1.0).norm() < 1e-300 {
            return Err(Error::Degenerate(format!("tetrahedron shape {z1} is ideal-degenerate")));
        }
        Ok(Self { z1, z2: 1.0 / (1.0 - z1), z3: 1.0 - 1.0 / z1 })
    }

    /// Signed hyperbolic volume `D₂(z₁)`.
    pub fn volume(&self) -> f64 {
        bloch_wigner(self.z1)
    }

    /// The same volume as a sum of Lobachevsky values of the dihedral
    /// angles, `Λ(arg z₁) + Λ(arg z₂) + Λ(arg z₃)`.
    pub fn angle_volume(&self) -> f64 {
        lobachevsky(self.z1.arg()) + lobachevsky(self.z2.arg()) + lobachevsky(self.z3.arg())
    }
}

/// A solved hyperbolic structure on the five-tetrahedron triangulation.
#[derive(Debug, Clone)]
pub struct HyperbolicSolution {
    /// Shape coordinates `(a, b, c)`.
    pub abc: (Complex, Complex, Complex),
    /// Tetrahedron shapes `c₁ … c₅` (cross-ratio convention
    /// `c₁ = b/(b−c)`, `c₂ = (b−a)/b`, `c₃ = (b−1)/b`,
    /// `c₄ = (ab−1)/(ab)`, `c₅ = bc/(bc−1)`).
    pub shapes: [Complex; 5],
    /// Thurston coordinates `(w, x, y, z)` of the four-tetrahedron
    /// triangulation, computed through [`thurston_shapes`].
    pub wxyz: (Complex, Complex, Complex, Complex),
    /// Holonomies `(m₁, l₁, m₂, l₂)` of the two cusps.
    pub holonomies: (Complex, Complex, Complex, Complex),
    /// Hyperbolic volume.  For a positively oriented solution this is the
    /// plain `D₂`-sum over the five shapes; for a consistently reversed
    /// solution (all `Im cᵢ < 0`, as the sister produces) the sign is
    /// corrected so the field stores the volume of the manifold.
    pub volume: f64,
    /// Chern–Simons representative in `[0, π²)` (normalization: the
    /// critical value of the sister potential is `CS + i·Vol`).  `NaN`
    /// when the solution is not geometric and no reading is attempted.
    pub cs: f64,
    /// Whether every tetrahedron is positively oriented (`Im cᵢ > 0`).
    pub geometric: bool,
    /// Largest equation residual at the returned point.
    pub residual: f64,
    /// The log coordinates `(log a, log b, log(−c))` on the branch tracked
    /// by the continuation; downstream consumers need these branches, not
    /// the principal ones.
    pub logs: (Complex, Complex, Complex),
}

/// Log coordinates of the complete structure: `a = 1`, `b = (1+2i)/5`,
/// `c = −1`.
fn complete_logs() -> [Complex; 3] {
    [Complex::ZERO, Complex::new(0.2, 0.4).ln(), Complex::ZERO]
}

/// Evaluates the holonomies and the gluing function at log coordinates
/// `v = (log a, log b, log(−c))`, all principal-branch.
/// Returns `(m₁, l₁, m₂, l₂, g)`.
fn holonomy_system(v: [Complex; 3]) -> Result<[Complex; 5]> {
    let (la, lb, lc) = (v[0], v[1], v[2]);
    let a = la.exp();
    let b = lb.exp();
    let c = -lc.exp();
    let terms = [a * b, b / a, 1.0 / b, c / b, 1.0 / (b * c)];
    for t in terms {
        if (1.0 - t).norm() < 1e-14 {
            return Err(Error::Degenerate(format!(
                "holonomy logarithm argument 1 − {t} vanished"
            )));
        }
    }
    let [lab, lba, lib_, lcb, libc] = terms.map(|t| (1.0 - t).ln());
    let m1 = la;
    let l1 = 2.0 * la + 2.0 * lab - 2.0 * lba;
    let m2 = 2.0 * lc + libc - lcb;
    let l2 = 2.0 * lc;
    let g = 2.0 * lb - lab - lba - lib_ + lcb + libc;
    Ok([m1, l1, m2, l2, g])
}

/// The Newton system for filling parameter `u ∈ [0, 1]`:
/// `F = (p·m₁ + q·l₁ − 2πi·u, m₂ − p′·l₂ − 2πi·u, g)`, together with its
/// analytic Jacobian in `(log a, log b, log(−c))`.
fn newton_system(
    v: [Complex; 3],
    u: f64,
    spec: &SurgerySpec,
) -> Result<([Complex; 3], [[Complex; 3]; 3])> {
    let [m1, l1, m2, l2, g] = holonomy_system(v)?;
    let (p, q, pp) = (spec.p as f64, spec.q as f64, spec.twist as f64);
    let target = Complex::new(0.0, 2.0 * PI * u);
    let f = [p * m1 + q * l1 - target, m2 - pp * l2 - target, g];

    let a = v[0].exp();
    let b = v[1].exp();
    let c = -v[2].exp();
    // For a factor t with ∂t/∂(log·) = ±t, the log-derivative of
    // log(1 − t) is ∓ t/(1 − t); abbreviate h(t) = t/(1 − t).
    let h = |t: Complex| t / (1.0 - t);
    let (ha, hb, hib, hcb, hibc) = (h(a * b), h(b / a), h(1.0 / b), h(c / b), h(1.0 / (b * c)));
    let dl1 = [2.0 - 2.0 * ha - 2.0 * hb, -2.0 * ha + 2.0 * hb, Complex::ZERO];
    let dm2 = [Complex::ZERO, hibc - hcb, 2.0 + hibc + hcb];
    let dg = [ha - hb, 2.0 + ha + hb - hib + hcb + hibc, hibc - hcb];
    let jac = [
        [p + q * dl1[0], q * dl1[1], Complex::ZERO],
        [dm2[0], dm2[1], dm2[2] - 2.0 * pp],
        dg,
    ];
    Ok((f, jac))
}

/// Solves the 3×3 complex linear system `J·d = −f` by Gaussian elimination
/// with partial pivoting.
fn solve3(jac: [[Complex; 3]; 3], f: [Complex; 3]) -> Result<[Complex; 3]> {
    let mut m = [[Complex::ZERO; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&jac[i]);
        m[i][3] = -f[i];
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap();
        if m[pivot][col].norm() < 1e-250 {
            return Err(Error::Degenerate("singular Jacobian in structure solver".into()));
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..4 {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
        }
    }
    let mut d = [Complex::ZERO; 3];
    for i in (0..3).rev() {
        let mut acc = m[i][3];
        for k in i + 1..3 {
            acc -= m[i][k] * d[k];
        }
        d[i] = acc / m[i][i];
    }
    Ok(d)
}

/// One Newton solve at fixed filling parameter `u`.  Returns the refined
/// coordinates and the final residual, or `None` when it fails to converge
/// (the continuation driver then halves its step).
fn newton_at(v0: [Complex; 3], u: f64, spec: &SurgerySpec) -> Option<([Complex; 3], f64)> {
    let mut v = v0;
    for _ in 0..MAX_NEWTON_ITERS {
        let (f, jac) = newton_system(v, u, spec).ok()?;
        let res = f.iter().map(|t| t.norm()).fold(0.0, f64::max);
        let mut d = solve3(jac, f).ok()?;
        let step = d.iter().map(|t| t.norm()).fold(0.0, f64::max);
        if step > MAX_LOG_STEP {
            let scale = MAX_LOG_STEP / step;
            for t in &mut d {
                *t *= scale;
            }
        }
        for i in 0..3 {
            v[i] += d[i];
        }
        if step < NEWTON_STEP_TOL && res < RESIDUAL_TOL {
            return Some((v, res));
        }
    }
    // converged residual may still be acceptable if only the step test failed
    let (f, _) = newton_system(v, u, spec).ok()?;
    let res = f.iter().map(|t| t.norm()).fold(0.0, f64::max);
    (res < RESIDUAL_TOL).then_some((v, res))
}

/// Continuation core: tracks the solution of the structure equations from
/// the complete structure (`u = 0`) to the target filling (`u = 1`),
/// halving the step adaptively when Newton fails.
fn solve_logs(spec: &SurgerySpec) -> Result<([Complex; 3], f64)> {
    let mut v = complete_logs();
    let mut u = 0.0f64;
    let mut residual = 0.0;
    let base = 1.0 / CONTINUATION_STEPS as f64;
    let mut step = base;
    while u < 1.0 {
        let target = (u + step).min(1.0);
        match newton_at(v, target, spec) {
            Some((vt, res)) => {
                v = vt;
                u = target;
                residual = res;
                step = (step * 2.0).min(base);
            }
            None => {
                step /= 2.0;
                if step < base / 1024.0 {
                    return Err(Error::Continuation {
                        last_good: u,
                        detail: "Newton refused every step size".into(),
                    });
                }
            }
        }
    }
    Ok((v, residual))
}

/// The five tetrahedron shapes as cross-ratios of `(a, b, c)`.
fn shapes_from_abc(a: Complex, b: Complex, c: Complex) -> [Complex; 5] {
    [
        b / (b - c),
        (b - a) / b,
        (b - 1.0) / b,
        (a * b - 1.0) / (a * b),
        b * c / (b * c - 1.0),
    ]
}

/// `D₂`-sum over five shapes (signed by orientation).
fn d2_sum(shapes: &[Complex; 5]) -> f64 {
    shapes.iter().map(|&z| bloch_wigner(z)).sum()
}

/// Reduces a Chern–Simons reading to the representative in `[0, π²)`.
fn cs_representative(raw: f64) -> f64 {
    let pi2 = PI * PI;
    raw.rem_euclid(pi2)
}

/// Distance between two readings modulo `π²`.
fn mod_pi2_distance(x: f64, y: f64) -> f64 {
    let pi2 = PI * PI;
    let d = (x - y).rem_euclid(pi2);
    d.min(pi2 - d)
}

/// Index context derived from a spec: the Fourier data plus the
/// distinguished pairs `(s⁺, m⁺)` and `(s⁻, m⁻)`.
fn fourier_for(spec: &SurgerySpec) -> Result<FourierData> {
    fourier_maps(&expand_slope(spec.p, spec.q)?)
}

/// The sister potential's critical point `(x₀, y₁, z₀)` from the log
/// coordinates: `x₀ = log a / 2i`, `y₁ = log b / 2i`,
/// `z₀ = log(−c)/2i + π/2`.
fn base_point(logs: [Complex; 3]) -> (Complex, Complex, Complex) {
    let half_i = Complex::new(0.0, 2.0);
    (logs[0] / half_i, logs[1] / half_i, logs[2] / half_i + PI / 2.0)
}

/// Solves the unfilled (complete) structure, i.e. the equations at filling
/// parameter `0`.  Newton starts from a deliberately perturbed guess so
/// this is a genuine root-find, not a read-back of the closed form
/// `a = 1`, `b = (1+2i)/5`, `c = −1`.  No Chern–Simons reading is
/// attempted (the normalization is tied to a filling).
pub fn complete_structure() -> Result<HyperbolicSolution> {
    // Any non-exceptional coefficients give the same u = 0 equations up to
    // an invertible recombination; the solution set is identical.
    let spec = SurgerySpec::new(19, 1, 10)?;
    let mut v0 = complete_logs();
    v0[0] += Complex::new(0.04, -0.03);
    v0[1] += Complex::new(-0.05, 0.04);
    v0[2] += Complex::new(0.03, 0.05);
    let (logs, res) = newton_at(v0, 0.0, &spec).ok_or_else(|| {
        Error::Degenerate("Newton failed to reach the complete structure".into())
    })?;
    build_solution(logs, res, &spec, false)
}

/// Solves the hyperbolic structure equations for a filling by Newton
/// continuation from the complete structure.  The returned solution is
/// flagged `geometric` when every tetrahedron is positively oriented.
pub fn solve_structure(spec: &SurgerySpec) -> Result<HyperbolicSolution> {
    if let Classification::Exceptional(reason) = classify(spec) {
        return Err(Error::Domain(format!("exceptional filling: {reason}")));
    }
    let (logs, newton_res) = solve_logs(spec)?;
    build_solution(logs, newton_res, spec, true)
}

/// Assembles a [`HyperbolicSolution`] from solved log coordinates.
/// `read_cs` controls whether the Chern–Simons evaluation is attempted.
fn build_solution(
    logs: [Complex; 3],
    newton_res: f64,
    spec: &SurgerySpec,
    read_cs: bool,
) -> Result<HyperbolicSolution> {
    let a = logs[0].exp();
    let b = logs[1].exp();
    let c = -logs[2].exp();
    let shapes = shapes_from_abc(a, b, c);
    let geometric = shapes.iter().all(|z| z.im > 0.0);
    let wxyz = thurston_shapes((a, b, c))?;
    let [m1, l1, m2, l2, _] = holonomy_system(logs)?;
    let volume = d2_sum(&shapes);
    let cs = if read_cs && geometric {
        let fd = fourier_for(spec)?;
        let (x0, y1, z0) = base_point(logs);
        let idx = IndexData::new(&fd, fd.splus.0, fd.splus.1, 0, -spec.twist + 2)?;
        let w_crit = eval_w(&PotentialPoint::new(x0, y1, z0), &idx, spec)?;
        if (w_crit.im - volume).abs() > 1e-8 {
            return Err(Error::Consistency(format!(
                "critical value imaginary part {} vs shape-sum volume {volume}",
                w_crit.im
            )));
        }
        cs_representative(w_crit.re)
    } else {
        f64::NAN
    };
    Ok(HyperbolicSolution {
        abc: (a, b, c),
        shapes,
        wxyz,
        holonomies: (m1, l1, m2, l2),
        volume,
        cs,
        geometric,
        residual: newton_res,
        logs: (logs[0], logs[1], logs[2]),
    })
}

/// Hyperbolic volume of a solved structure as the `D₂`-sum over the five
/// tetrahedra, cross-checked shape by shape against the Lobachevsky
/// angle-sum formula.
pub fn volume(sol: &HyperbolicSolution) -> Result<f64> {
    if sol.residual > 1e-9 {
        return Err(Error::Domain(format!(
            "solution residual {} too large for a volume reading",
            sol.residual
        )));
    }
    let mut total = 0.0;
    for &z in &sol.shapes {
        if z.im.abs() < 1e-14 {
            return Err(Error::Degenerate(format!("flat tetrahedron shape {z}")));
        }
        let tet = TetraShape::new(z)?;
        let (d2, angles) = (tet.volume(), tet.angle_volume());
        if (d2 - angles).abs() > 1e-9 {
            return Err(Error::Consistency(format!(
                "dilogarithm volume {d2} vs angle volume {angles} for shape {z}"
            )));
        }
        total += d2;
    }
    Ok(total)
}

/// Volume and Chern–Simons representative of a hyperbolic filling, read
/// from the critical value of the sister potential and cross-checked
/// against all four critical values of the primary potential.
pub fn complex_volume(spec: &SurgerySpec) -> Result<(f64, f64)> {
    let sol = solve_structure(spec)?;
    if !sol.geometric {
        return Err(Error::Domain("complex volume requires a geometric solution".into()));
    }
    let vol = volume(&sol)?;
    let cs = sol.cs;
    if (vol - sol.volume).abs() > 1e-9 {
        return Err(Error::Consistency(format!(
            "volume re-read {vol} vs stored {}",
            sol.volume
        )));
    }
    // The four critical values of the primary potential all equal
    // i·(Vol + i·CS) modulo π²: imaginary part Vol, real part ≡ −CS.
    for (pt, idx) in critical_point(&sol, spec)? {
        let val = eval_v(&pt, &idx, spec)?;
        if (val.im - vol).abs() > 1e-8 || mod_pi2_distance(val.re, -cs) > 1e-8 {
            return Err(Error::Consistency(format!(
                "critical value {val} disagrees with (vol, cs) = ({vol}, {cs})"
            )));
        }
    }
    Ok((vol, cs))
}

/// The sister solution: same `a` and `c`, with `b` replaced by the other
/// root `b₂` of the shared quadratic (`1/b₁ + 1/b₂ = a + 1/a`,
/// `1/(b₁b₂) = 1 + a + 1/a − c − 1/c`).  It satisfies the Dehn equations
/// of the `((p+4q, −q), (1, p′−1/2))` filling.  The triple is consistently
/// reversed in orientation (`Im cᵢ < 0`), so the raw `D₂`-sum over its
/// shapes is `−Vol`; the stored `volume` is sign-corrected and the
/// Chern–Simons field carries over from the primary solution.
pub fn sister_solution(sol: &HyperbolicSolution, spec: &SurgerySpec) -> Result<HyperbolicSolution> {
    let (a, b1, c) = sol.abc;
    let inv_b2 = a + 1.0 / a - 1.0 / b1;
    if inv_b2.norm() < 1e-250 {
        return Err(Error::Degenerate("sister root at infinity".into()));
    }
    let b2 = 1.0 / inv_b2;
    if (b2 - b1).norm() < 1e-10 {
        return Err(Error::Degenerate("double root: sister coincides with the solution".into()));
    }
    // Vieta cross-check that b₁ actually sits on the quadratic: the
    // product of the roots must be 1 + a + 1/a − c − 1/c.
    let prod_target = 1.0 + a + 1.0 / a - c - 1.0 / c;
    if (1.0 / (b1 * b2) - prod_target).norm() > 1e-10 {
        return Err(Error::Consistency(format!(
            "root product {} off the quadratic target {prod_target}",
            1.0 / (b1 * b2)
        )));
    }
    let logs = [sol.logs.0, b2.ln(), sol.logs.2];
    let [m1, l1, m2, l2, g] = holonomy_system(logs)?;
    // Dehn equations of the sister filling ((p+4q, −q), (1, p′ − 1/2)).
    let two_pi_i = Complex::new(0.0, 2.0 * PI);
    let (p, q, pp) = (spec.p as f64, spec.q as f64, spec.twist as f64);
    let r1 = (p + 4.0 * q) * m1 - q * l1 - two_pi_i;
    let r2 = m2 + (pp - 0.5) * l2 + two_pi_i;
    let residual = r1.norm().max(r2.norm()).max(g.norm());
    if residual > 1e-9 {
        return Err(Error::Consistency(format!(
            "sister Dehn residual {residual} exceeds tolerance"
        )));
    }
    let shapes = shapes_from_abc(a, b2, c);
    let geometric = shapes.iter().all(|z| z.im > 0.0);
    let raw = d2_sum(&shapes);
    let volume = if shapes.iter().all(|z| z.im < 0.0) { -raw } else { raw };
    Ok(HyperbolicSolution {
        abc: (a, b2, c),
        shapes,
        wxyz: thurston_shapes((a, b2, c))?,
        holonomies: (m1, l1, m2, l2),
        volume,
        cs: sol.cs,
        geometric,
        residual,
        logs: (logs[0], logs[1], logs[2]),
    })
}

/// The four critical points of the primary potential attached to a
/// geometric solution: `(±x̄₀, −ȳ₂, z̄₀)` with frequencies
/// `(s^±, m^±, 0, −p′)` and `(±x̄₀, −ȳ₂, π−z̄₀)` with `(s^±, m^±, 0, −p′−2)`,
/// where `y₂` is the sister root coordinate.  Every returned point is
/// verified to be a genuine zero of the gradient.
pub fn critical_point(
    sol: &HyperbolicSolution,
    spec: &SurgerySpec,
) -> Result<Vec<(PotentialPoint, IndexData)>> {
    if !sol.geometric {
        return Err(Error::Domain("critical points require a geometric solution".into()));
    }
    let sister = sister_solution(sol, spec)?;
    let (x0, _, z0) = base_point([sol.logs.0, sol.logs.1, sol.logs.2]);
    let (_, y2, _) = base_point([sister.logs.0, sister.logs.1, sister.logs.2]);
    let fd = fourier_for(spec)?;
    let mut out = Vec::with_capacity(4);
    for (sign, zval, l) in [
        (1.0, z0.conj(), -spec.twist),
        (-1.0, z0.conj(), -spec.twist),
        (1.0, PI - z0.conj(), -spec.twist - 2),
        (-1.0, PI - z0.conj(), -spec.twist - 2),
    ] {
        let (s, m) = if sign > 0.0 { fd.splus } else { fd.sminus };
        let idx = IndexData::new(&fd, s, m, 0, l)?;
        let pt = PotentialPoint::new(sign * x0.conj(), -y2.conj(), zval);
        let grad = grad_v(&pt, &idx, spec)?;
        let gnorm = grad.iter().map(|t| t.norm()).fold(0.0, f64::max);
        if gnorm > 1e-9 {
            return Err(Error::Consistency(format!(
                "gradient residual {gnorm} at claimed critical point"
            )));
        }
        out.push((pt, idx));
    }
    Ok(out)
}

/// Converts `(a, b, c)` coordinates to the Thurston coordinates
/// `(w, x, y, z)` of the four-tetrahedron triangulation.
pub fn thurston_shapes(abc: (Complex, Complex, Complex)) -> Result<(Complex, Complex, Complex, Complex)> {
    let [c1, c2, c3, c4, c5] = shapes_from_abc(abc.0, abc.1, abc.2);
    let denoms = [c1 * c2 * (c4 - 1.0), c1 - 1.0, c2 - 1.0, (c1 * c2 - 1.0) * (1.0 / c5 - 1.0)];
    if denoms.iter().any(|d| d.norm() < 1e-250) {
        return Err(Error::Degenerate("vanishing denominator in coordinate change".into()));
    }
    let x = (1.0 - c1 * c2) / (c1 * c2 * (c4 - 1.0));
    let y = -c1 * (c2 - 1.0) * (c3 - 1.0) / ((c1 - 1.0) * (1.0 / (c4 * c5) - 1.0));
    let z = -c1 * c2 * (c3 - 1.0) * (c4 - 1.0) / ((c1 * c2 - 1.0) * (1.0 / c5 - 1.0));
    let w = (1.0 / (c4 * c5) - 1.0) / (c2 - 1.0);
    Ok((w, x, y, z))
}

/// Converts Thurston coordinates `(w, x, y, z)` to the five pentagonal-
/// bipyramid shapes; inverse of [`thurston_shapes`] on the solution
/// variety.  The shapes always satisfy `c₁c₂c₃c₄c₅ = 1`.
pub fn cross_ratio_shapes(
    wxyz: (Complex, Complex, Complex, Complex),
) -> Result<[Complex; 5]> {
    let (w, x, y, z) = wxyz;
    let s1 = y * z + x * z - y - z;
    let s2 = w * y + y * z - y - z;
    let denoms = [
        (w * y - 1.0) * s1,
        w * z * (x - 1.0) * (y - 1.0),
        (y - 1.0) * (z - 1.0),
        x * y * (z - 1.0) * (w - 1.0),
        (x * z - 1.0) * s2,
    ];
    if denoms.iter().any(|d| d.norm() < 1e-250) {
        return Err(Error::Degenerate("vanishing denominator in cross-ratio map".into()));
    }
    Ok([
        w * y * (y - 1.0) * (z - 1.0) / denoms[0],
        -(w - 1.0) * s1 / denoms[1],
        (w * y - 1.0) * (x * z - 1.0) / denoms[2],
        -(x - 1.0) * s2 / denoms[3],
        x * z * (y - 1.0) * (z - 1.0) / denoms[4],
    ])
}
