//! Continued-fraction expansion of the surgery slope `p/q` and the exact
//! index maps `I`, `J`, `K` feeding the state sum.
//!
//! The slope is decomposed as `p/q = a_k − 1/(a_{k−1} − ⋯ − 1/a_1)`,
//! equivalently as a word `U = T^{a_k} S ⋯ T^{a_1} S` in
//! `SL(2, ℤ)` with `S = [[0,−1],[1,0]]`, `T = [[1,1],[0,1]]`, whose first
//! column is `(p, q)`. All index maps are kept in exact rational arithmetic
//! because the congruences they satisfy are exact statements.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// The surgery description `(p, q, p′)`: `p/q` filling on the twist knot
/// with twist parameter `p′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurgerySpec {
    /// Filling numerator (coprime to `q`).
    pub p: i64,
    /// Filling denominator (nonzero).
    pub q: i64,
    /// Twist parameter `p′`.
    pub twist: i64,
}

impl SurgerySpec {
    /// Validating constructor: requires `gcd(p, q) = 1` and `q ≠ 0`.
    pub fn new(p: i64, q: i64, twist: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("q must be nonzero".into()));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::Domain(format!("gcd({p}, {q}) ≠ 1")));
        }
        Ok(Self { p, q, twist })
    }
}

/// Which deterministic expansion of `p/q` to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionStyle {
    /// Ceiling-based subtractive expansion (the default everywhere).
    Canonical,
    /// Floor-based expansion; if it coincides with the canonical one it is
    /// extended by six `a_i = 1` steps (the relation `(TS)^6 = 1`), so the
    /// two expansions are always distinct. Used for invariance tests.
    Alternate,
}

/// A continued-fraction expansion of `p/q` together with the matrix word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionExpansion {
    /// Coefficients `a_1 … a_k`.
    pub a: Vec<i64>,
    /// Partial products `U_0 = 1, U_i = T^{a_i} S · U_{i−1}` stored as
    /// `[A_i, B_i, C_i, D_i]` (row-major `[[A, B], [C, D]]`).
    pub u: Vec<[i64; 4]>,
    /// `p̃` with `p·p̃ + q·q̃ = 1` (read off `U_k`).
    pub ptilde: i64,
    /// `q̃` companion of `p̃`.
    pub qtilde: i64,
    /// Signature of the `k×k` tridiagonal linking matrix `diag(a_1…a_k)`
    /// with unit off-diagonal entries.
    pub sigma: i64,
}

impl FractionExpansion {
    /// Number of coefficients `k`.
    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// Target slope numerator `p = A_k`.
    pub fn p(&self) -> i64 {
        self.u[self.k()][0]
    }

    /// Target slope denominator `q = C_k`.
    pub fn q(&self) -> i64 {
        self.u[self.k()][2]
    }

    /// `C_i` for `i = 0 … k`.
    pub fn c(&self, i: usize) -> i64 {
        self.u[i][2]
    }
}

/// One backward step of the subtractive expansion: maps the state
/// `(A, C)` to `(C, aC − A)` for the chosen coefficient `a`.
fn step(state: (i64, i64), ceil: bool) -> (i64, (i64, i64)) {
    let (a_big, c) = state;
    debug_assert!(c != 0);
    let a = if c == -1 {
        // The plain quotient would terminate at (−1, 0); this choice routes
        // through (−1, 1) and then (1, 0) instead.
        -a_big - 1
    } else if ceil {
        num_integer::Integer::div_ceil(&a_big, &c)
    } else {
        num_integer::Integer::div_floor(&a_big, &c)
    };
    (a, (c, a * c - a_big))
}

/// Expands `p/q` (coprime, `q ≠ 0`) in the requested style.
pub fn expand_slope_with(p: i64, q: i64, style: ExpansionStyle) -> Result<FractionExpansion> {
    if q == 0 {
        return Err(Error::Domain("q must be nonzero".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Domain(format!("gcd({p}, {q}) ≠ 1")));
    }
    let run = |ceil_default: bool| -> Result<Vec<i64>> {
        let mut state = (p, q);
        let mut rev = Vec::new();
        while state != (1, 0) {
            if state.1 == 0 {
                return Err(Error::Internal(format!(
                    "expansion of ({p}, {q}) stalled at {state:?}"
                )));
            }
            // the C = −1 special case and C < 0 both use the ceiling rule in
            // canonical style; alternate style uses floors for C > 0
            let ceil = ceil_default || state.1 < 0;
            let (a, next) = step(state, ceil);
            rev.push(a);
            state = next;
            if rev.len() > 10_000 {
                return Err(Error::Internal("expansion did not terminate".into()));
            }
        }
        rev.reverse();
        Ok(rev)
    };
    let mut a = match style {
        ExpansionStyle::Canonical => run(true)?,
        ExpansionStyle::Alternate => {
            let alt = run(false)?;
            if alt == run(true)? {
                // (TS)^6 = 1: appending six unit coefficients gives a second,
                // genuinely different word for the same slope
                let mut ext = alt;
                ext.extend_from_slice(&[1, 1, 1, 1, 1, 1]);
                ext
            } else {
                alt
            }
        }
    };
    if a.is_empty() {
        // p/q = 1/0 never occurs (q ≠ 0), but guard anyway
        a.push(0);
    }
    build_expansion(a, p, q)
}

/// Canonical (ceiling-based) expansion of `p/q`.
pub fn expand_slope(p: i64, q: i64) -> Result<FractionExpansion> {
    expand_slope_with(p, q, ExpansionStyle::Canonical)
}

fn build_expansion(a: Vec<i64>, p: i64, q: i64) -> Result<FractionExpansion> {
    // forward matrix word: U_i = T^{a_i} S · U_{i−1}, T^a S = [[a, −1], [1, 0]]
    let mut u = vec![[1i64, 0, 0, 1]];
    for &ai in &a {
        let [pa, pb, pc, pd] = *u.last().unwrap();
        let row1 = [ai * pa - pc, ai * pb - pd];
        let row2 = [pa, pb];
        u.push([row1[0], row1[1], row2[0], row2[1]]);
    }
    let [ak, bk, ck, dk] = *u.last().unwrap();
    if ak != p || ck != q {
        return Err(Error::Internal(format!(
            "expansion invariant violated: U_k first column ({ak}, {ck}) ≠ ({p}, {q})"
        )));
    }
    let ptilde = dk;
    let qtilde = -bk;
    debug_assert_eq!(p * ptilde + q * qtilde, 1);
    let sigma = tridiagonal_signature(&a);
    Ok(FractionExpansion {
        a,
        u,
        ptilde,
        qtilde,
        sigma,
    })
}

/// Signature of the tridiagonal matrix `diag(a_1…a_k)` with unit
/// off-diagonals, via the exact Sturm sequence `d_i = a_i d_{i−1} − d_{i−2}`.
fn tridiagonal_signature(a: &[i64]) -> i64 {
    let k = a.len();
    let mut d_prev = BigInt::one(); // d_0
    let mut d_prev_sign = 1i64;
    let mut d = BigInt::from(a[0]); // d_1
    let mut n_neg = 0i64;
    let mut last_nonzero_sign = 1i64;
    for i in 0..k {
        if i > 0 {
            let next = BigInt::from(a[i]) * &d - &d_prev;
            d_prev = std::mem::replace(&mut d, next);
        }
        // sign of d_i, with a zero taking the sign opposite to d_{i−1}
        let s = if d.is_zero() {
            -d_prev_sign
        } else if d.is_negative() {
            -1
        } else {
            1
        };
        if s != last_nonzero_sign {
            n_neg += 1;
        }
        last_nonzero_sign = s;
        d_prev_sign = s;
        let _ = &d_prev; // d_prev now holds d_{i−1} for the next round
    }
    let n_zero = i64::from(d.is_zero());
    k as i64 - 2 * n_neg - n_zero
}

/// The exact index maps `I`, `J`, `K` on `s ∈ {0 … |q|−1}` together with
/// the distinguished index pairs `(s⁺, m⁺)`, `(s⁻, m⁻)`.
#[derive(Debug, Clone)]
pub struct FourierData {
    /// Slope denominator `q` (signed).
    pub q: i64,
    /// `p̃` from the expansion (valid modulo `q`).
    pub ptilde: i64,
    /// `K_1 … K_{k−1}` (with `K_0 = 0` implicit).
    pub kseq: Vec<BigRational>,
    /// `I(s)`, integer-valued.
    pub imap: Vec<BigInt>,
    /// `J(s)`.
    pub jmap: Vec<BigRational>,
    /// `K(s)`.
    pub kmap: Vec<BigRational>,
    /// `(s⁺, m⁺)`: the unique pair with `I(s⁺) = 1 − q + 2m⁺q`.
    pub splus: (i64, i64),
    /// `(s⁻, m⁻)`: the unique pair with `I(s⁻) = −1 − q + 2m⁻q`.
    pub sminus: (i64, i64),
}

impl FourierData {
    /// `k(s, m) = I(s)/q + 1 − 2m`.
    pub fn k_of(&self, s: i64, m: i64) -> BigRational {
        BigRational::new(self.imap[s as usize].clone(), BigInt::from(self.q))
            + BigRational::from_integer(BigInt::from(1 - 2 * m))
    }

    /// `I(s)` as an `i64` (fits for the supported slope sizes).
    pub fn i_of(&self, s: i64) -> i64 {
        use num_traits::ToPrimitive;
        self.imap[s as usize].to_i64().expect("I(s) fits in i64")
    }
}

fn ratio(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Materializes the index maps of an expansion and locates `(s^±, m^±)`.
pub fn fourier_maps(exp: &FractionExpansion) -> Result<FourierData> {
    let k = exp.k();
    let q = exp.q();
    let aq = q.unsigned_abs() as i64;

    // K_i = (−1)^{i+1} (Σ_{j≤i} a_j C_j) / C_i for i = 1 … k−1,
    // with partial sums Σ_{j=1}^{i} a_j C_j accumulated exactly
    let mut sums = Vec::with_capacity(k + 1);
    sums.push(BigInt::zero());
    for j in 1..=k {
        let next = sums[j - 1].clone() + BigInt::from(exp.a[j - 1]) * BigInt::from(exp.c(j));
        sums.push(next);
    }
    let mut kseq = Vec::with_capacity(k.saturating_sub(1));
    for i in 1..k {
        if exp.c(i) == 0 {
            return Err(Error::Domain(format!(
                "expansion has C_{i} = 0; index maps undefined"
            )));
        }
        let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
        kseq.push(BigRational::new(
            sums[i].clone() * BigInt::from(sign),
            BigInt::from(exp.c(i)),
        ));
    }

    let k_km1 = if k >= 2 {
        kseq[k - 2].clone()
    } else {
        BigRational::zero()
    };
    let c_km1 = exp.c(k - 1);

    let mut imap = Vec::with_capacity(aq as usize);
    let mut jmap = Vec::with_capacity(aq as usize);
    let mut kmap = Vec::with_capacity(aq as usize);
    // s-independent tail of J(s): (−1)^k Σ_{i=1}^{k−1} (−1)^{i+1} K_i / C_{i+1}
    let mut jtail = BigRational::zero();
    for i in 1..k {
        let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
        jtail += BigRational::new(BigInt::from(sign), BigInt::from(exp.c(i + 1))) * &kseq[i - 1];
    }
    if k % 2 != 0 {
        jtail = -jtail;
    }
    // s-independent tail of K(s): Σ_{i=1}^{k−2} C_i K_i² / C_{i+1}
    let mut ktail = BigRational::zero();
    for i in 1..k.saturating_sub(1) {
        ktail += BigRational::new(BigInt::from(exp.c(i)), BigInt::from(exp.c(i + 1)))
            * &kseq[i - 1]
            * &kseq[i - 1];
    }

    for s in 0..aq {
        let two_s1 = ratio(2 * s + 1) + &k_km1;
        let i_s = -&two_s1 * ratio(c_km1);
        if !i_s.is_integer() {
            return Err(Error::Internal(format!("I({s}) = {i_s} is not an integer")));
        }
        imap.push(i_s.to_integer());
        jmap.push(BigRational::new(BigInt::from(2 * s + 1), BigInt::from(q)) + &jtail);
        kmap.push(
            BigRational::new(BigInt::from(c_km1), BigInt::from(q)) * &two_s1 * &two_s1 + &ktail,
        );
    }

    // locate (s⁺, m⁺) and (s⁻, m⁻): I(s) = ±1 − q + 2mq with m ∈ ℤ
    let locate = |target_sign: i64| -> Result<(i64, i64)> {
        let mut found = None;
        for s in 0..aq {
            let num = imap[s as usize].clone() - BigInt::from(target_sign - q);
            let (quot, rem) = num.div_rem(&BigInt::from(2 * q));
            if rem.is_zero() {
                use num_traits::ToPrimitive;
                let m = quot.to_i64().ok_or_else(|| {
                    Error::Internal("m out of i64 range".into())
                })?;
                if found.is_some() {
                    return Err(Error::Internal(format!(
                        "duplicate s{} solutions",
                        if target_sign > 0 { "+" } else { "-" }
                    )));
                }
                found = Some((s, m));
            }
        }
        found.ok_or_else(|| {
            Error::Internal(format!(
                "no s{} found (would falsify the uniqueness lemma)",
                if target_sign > 0 { "+" } else { "-" }
            ))
        })
    };
    let splus = locate(1)?;
    let sminus = locate(-1)?;

    Ok(FourierData {
        q,
        ptilde: exp.ptilde,
        kseq,
        imap,
        jmap,
        kmap,
        splus,
        sminus,
    })
}
