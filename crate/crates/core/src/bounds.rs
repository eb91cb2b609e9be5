//! Evaluators for the explicit constants comparing homological norms, and
//! assembly of verification reports.
//!
//! Each evaluator computes one closed-form bound: the curvature inputs to
//! the Bochner term, Margulis-style orbit counts, Moser sup bounds, the
//! comass-vs-harmonic and harmonic-vs-l1 coefficients, Gromov's mass and
//! comass multipliers, the Sobolev/Cheeger/Buser/Cheng/Croke chain, and
//! Li's mean-value constant. Dimensional constants the underlying results
//! leave unspecified are surfaced as parameters defaulting to 1, and every
//! report entry records its provenance.
//!
//! Verification is direction-safe: an inequality between true norms is
//! only asserted through computed bounds when the implication survives the
//! substitution (computed lower bound on the left, computed upper bound on
//! the right).

use crate::complex::ComplexError;
use crate::metric::{factorial, MetricComplex, MetricError};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("descriptor validation failed: {0}")]
    Validation(String),
    #[error("matrix must be {expected}x{expected}, got {rows}x{cols}")]
    MatrixSize {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("index {k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("curvature term K_p must be <= 0, got {0}")]
    PositiveKp(f64),
    #[error("the multiplier with (p-1)! needs p >= 1")]
    DegreeZeroFactorial,
    #[error("Sobolev constant C_S needs n >= 3, got {0}")]
    NeedsDimensionThree(usize),
    #[error("no Sobolev input supplied: need at least one of h, C1, C0")]
    NoSobolevInput,
    #[error("exhaustive Cheeger search is limited to 20 vertices, got {0}; use a sweep-cut estimate instead")]
    TooManyVertices(usize),
    #[error("no vertex bipartition separates the top cells")]
    NoSeparatingCut,
    #[error("Cheeger constant needs a connected complex")]
    Disconnected,
    #[error("missing required computed inputs: {0}")]
    MissingInputs(String),
    #[error("quadrature orders disagree beyond 1e-9 relative: {0:e}")]
    QuadratureDisagreement(f64),
    #[error("descriptor JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Geometric situation selecting the exponent l in the orbit-count and
/// comass bounds and the hypotheses of the straightening estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    NegativelyCurved,
    HigherRankSymmetric { rank: usize, srk: usize },
    RankOneRicK { k: usize },
    Generic,
}

impl CaseTag {
    /// Exponent l: 1 pinched negative, k-1 under Ric_k < 0, the rank for
    /// higher-rank symmetric spaces, n otherwise.
    pub fn ell(&self, n: usize) -> usize {
        match self {
            CaseTag::NegativelyCurved => 1,
            CaseTag::RankOneRicK { k } => k.saturating_sub(1),
            CaseTag::HigherRankSymmetric { rank, .. } => *rank,
            CaseTag::Generic => n,
        }
    }

    fn describe(&self) -> String {
        match self {
            CaseTag::NegativelyCurved => "negatively curved".into(),
            CaseTag::HigherRankSymmetric { rank, srk } => {
                format!("higher rank symmetric (rank {rank}, srk {srk})")
            }
            CaseTag::RankOneRicK { k } => format!("rank one with Ric_{k} < 0"),
            CaseTag::Generic => "generic".into(),
        }
    }
}

/// Manifold invariants feeding the bound evaluators. Curvature enters
/// through `a`, `b` (sectional pinching -b^2 <= K <= -a^2) and `K_p` (the
/// degree-p Bochner curvature term, nonpositive). Constants the classical
/// results leave as "C(n)" live in `constants` and default to 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    pub n: usize,
    pub p: usize,
    pub vol: f64,
    pub inj: f64,
    pub diam: f64,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: f64,
    #[serde(rename = "K_p", default)]
    pub k_p: f64,
    pub case_tag: CaseTag,
    pub mu: f64,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub lambda1: Option<f64>,
    #[serde(rename = "C0", default)]
    pub c0: Option<f64>,
    #[serde(rename = "C1", default)]
    pub c1: Option<f64>,
    #[serde(rename = "CS", default)]
    pub cs: Option<f64>,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
}

impl ManifoldDescriptor {
    pub fn from_json(text: &str) -> Result<Self, BoundsError> {
        let desc: ManifoldDescriptor = serde_json::from_str(text)?;
        desc.validate()?;
        Ok(desc)
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        let fail = |msg: String| Err(BoundsError::Validation(msg));
        if self.p > self.n {
            return fail(format!("degree p = {} exceeds dimension n = {}", self.p, self.n));
        }
        for (name, v) in [("vol", self.vol), ("inj", self.inj), ("diam", self.diam), ("mu", self.mu)] {
            if !(v > 0.0) {
                return fail(format!("{name} must be positive, got {v}"));
            }
        }
        if self.inj > self.diam {
            return fail(format!("inj = {} exceeds diam = {}", self.inj, self.diam));
        }
        if self.a < 0.0 || self.b < 0.0 || self.a > self.b {
            return fail(format!(
                "curvature pinching needs 0 <= a <= b, got a = {}, b = {}",
                self.a, self.b
            ));
        }
        if self.k_p > 0.0 {
            return fail(format!("K_p must be <= 0, got {}", self.k_p));
        }
        if self.p == 0 && self.k_p != 0.0 {
            return fail("degree 0 forces K_p = 0".into());
        }
        for (name, v) in [("h", self.h), ("lambda1", self.lambda1)] {
            if let Some(v) = v {
                if v < 0.0 {
                    return fail(format!("{name} must be nonnegative, got {v}"));
                }
            }
        }
        for (name, v) in [("C0", self.c0), ("C1", self.c1), ("CS", self.cs)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return fail(format!("{name} must be positive, got {v}"));
                }
            }
        }
        if let Some((name, v)) = self
            .constants
            .iter()
            .find(|(_, v)| !(**v > 0.0))
            .map(|(n, v)| (n.clone(), *v))
        {
            return fail(format!("constant {name} must be positive, got {v}"));
        }
        if let CaseTag::HigherRankSymmetric { rank, .. } = self.case_tag {
            if rank < 2 {
                return fail(format!("higher rank symmetric needs rank >= 2, got {rank}"));
            }
        }
        if let CaseTag::RankOneRicK { k } = self.case_tag {
            if k < 2 {
                return fail(format!("Ric_k < 0 needs k >= 2, got {k}"));
            }
        }
        Ok(())
    }

    /// Named dimensional constant, defaulting to 1 when unspecified.
    pub fn constant(&self, name: &str) -> f64 {
        self.constants.get(name).copied().unwrap_or(1.0)
    }

    /// b_p = sqrt(-K_p), the curvature scale in the Bochner bounds.
    pub fn b_p(&self) -> f64 {
        (-self.k_p).max(0.0).sqrt()
    }
}

/// Degree-p curvature term: 0 in degree 0, smallest Ricci eigenvalue over
/// n-1 in degree 1, smallest curvature-operator eigenvalue in degree >= 2.
pub fn kp_from_curvature_operator(
    r: &DMatrix<f64>,
    p: usize,
    n: usize,
) -> Result<f64, BoundsError> {
    if p == 0 {
        return Ok(0.0);
    }
    let expected = if p == 1 { n } else { n * (n - 1) / 2 };
    if r.nrows() != expected || r.ncols() != expected {
        return Err(BoundsError::MatrixSize {
            expected,
            rows: r.nrows(),
            cols: r.ncols(),
        });
    }
    let eigen = r.clone().symmetric_eigen();
    let min = eigen.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if p == 1 {
        Ok(min / (n as f64 - 1.0))
    } else {
        Ok(min)
    }
}

/// k-directional Ricci sup: the largest trace of the restriction of the
/// symmetric form to a k-plane, i.e. the sum of the k largest eigenvalues.
pub fn ric_k(ru: &DMatrix<f64>, k: usize) -> Result<f64, BoundsError> {
    let n = ru.nrows();
    if ru.ncols() != n {
        return Err(BoundsError::MatrixSize {
            expected: n,
            rows: ru.nrows(),
            cols: ru.ncols(),
        });
    }
    if k == 0 || k > n {
        return Err(BoundsError::IndexOutOfRange { k, n });
    }
    let mut eigs: Vec<f64> = ru.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(eigs[..k].iter().sum())
}

/// Zeroth-order term of the Bochner subsolution inequality.
pub fn li_lambda(n: usize, p: usize, k_p: f64) -> f64 {
    -((p * (n - p)) as f64) * k_p
}

/// Orbit-count bound from the thick-thin decomposition: (mu/eps)^l with
/// eps = min(inj, mu/2), times the parametric constant (forced to 1 in
/// the negatively curved case, where the count is simply mu/eps).
pub fn margulis_count(
    case: &CaseTag,
    mu: f64,
    inj: f64,
    n: usize,
    c: f64,
) -> Result<f64, BoundsError> {
    if !(mu > 0.0) {
        return Err(BoundsError::NonPositive { name: "mu", value: mu });
    }
    if !(inj > 0.0) {
        return Err(BoundsError::NonPositive { name: "inj", value: inj });
    }
    let eps = inj.min(mu / 2.0);
    let ratio = mu / eps;
    Ok(match case {
        CaseTag::NegativelyCurved => ratio,
        other => c * ratio.powi(other.ell(n) as i32),
    })
}

/// Moser-type sup bound for subsolutions of (Laplace - lambda) on a ball:
/// C1 (1 + lambda r^2)^(1/2 + n/4) exp(C2 sqrt((n-1)K) r) vol^(-1/2) |f|_2.
#[allow(clippy::too_many_arguments)]
pub fn moser_rhs(
    n: usize,
    k: f64,
    lambda: f64,
    r: f64,
    vol_ball: f64,
    norm2_f: f64,
    c1: f64,
    c2: f64,
) -> Result<f64, BoundsError> {
    if !(vol_ball > 0.0) {
        return Err(BoundsError::NonPositive {
            name: "vol_ball",
            value: vol_ball,
        });
    }
    let nf = n as f64;
    let growth = (1.0 + lambda * r * r).powf(0.5 + nf / 4.0);
    let expo = (c2 * ((nf - 1.0) * k.max(0.0)).sqrt() * r).exp();
    Ok(c1 * growth * expo * vol_ball.powf(-0.5) * norm2_f)
}

/// Coefficient bounding the comass of a harmonic form by its harmonic
/// norm: C b_p^((n-l)/2) / inj^(l/2).
pub fn comass_harmonic_rhs(
    case: &CaseTag,
    n: usize,
    b_p: f64,
    inj: f64,
    c: f64,
) -> Result<f64, BoundsError> {
    if !(inj > 0.0) {
        return Err(BoundsError::NonPositive { name: "inj", value: inj });
    }
    if b_p < 0.0 {
        return Err(BoundsError::NonPositive { name: "b_p", value: b_p });
    }
    let ell = case.ell(n);
    Ok(c * b_p.powf((n - ell.min(n)) as f64 / 2.0) * inj.powf(-(ell as f64) / 2.0))
}

/// Coefficient bounding the l1 norm of the dual class by the harmonic
/// norm under Ric >= -(n-1): (n-p)! (n-1)^(n-p) sqrt(vol) |beta|_H.
pub fn thm_upper_rhs(n: usize, p: usize, vol: f64, harmonic_norm: f64) -> f64 {
    factorial(n - p) * ((n as f64) - 1.0).powi((n - p) as i32) * vol.sqrt() * harmonic_norm
}

/// Coefficient of |beta*|_1 in the straightening lower-bound theorem, or
/// None when the case hypotheses fail (reported as not_applicable). In
/// the pinched negative case the constant is explicit:
/// C(n) b_p^((n-1)/2) a^(p-n) / inj^(1/2).
#[allow(clippy::too_many_arguments)]
pub fn thm_lower_const(
    case: &CaseTag,
    n: usize,
    p: usize,
    b_p: f64,
    a: f64,
    inj: f64,
    c: f64,
) -> Result<Option<f64>, BoundsError> {
    if !(inj > 0.0) {
        return Err(BoundsError::NonPositive { name: "inj", value: inj });
    }
    if n < 3 {
        return Ok(None);
    }
    match case {
        CaseTag::NegativelyCurved => {
            if !(a > 0.0) || !(b_p > 0.0) || p + 2 > n {
                return Ok(None);
            }
            let coeff = c * b_p.powf((n as f64 - 1.0) / 2.0) * a.powi(p as i32 - n as i32);
            Ok(Some(coeff / inj.sqrt()))
        }
        CaseTag::HigherRankSymmetric { rank, srk } => {
            if *rank < 2 || p + 2 + srk > n {
                return Ok(None);
            }
            Ok(Some(c / inj.powf(*rank as f64 / 2.0)))
        }
        CaseTag::RankOneRicK { k } => {
            let l = k - 1; // Ric_{l+1} < 0 in the theorem's indexing
            if l < 1 || l > n / 4 || p + 4 * l > n {
                return Ok(None);
            }
            Ok(Some(c / inj.powf(l as f64 / 2.0)))
        }
        CaseTag::Generic => Ok(None),
    }
}

/// Which of the five norm-comparison multipliers to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormComparison {
    /// |alpha|_1 <= p!(n-1)^p mass(alpha), Ric >= -(n-1)
    L1FromMass,
    /// comass(beta) <= p!(n-1)^p |beta|_inf, Ric >= -(n-1)
    ComassFromLinf,
    /// mass(alpha) <= pi a^-p/(p-1)! |alpha|_1, K <= -a^2
    MassFromL1,
    /// |beta|_inf <= pi a^-p/(p-1)! comass(beta), K <= -a^2
    LinfFromComass,
    /// the sup-norm route: comass(phi) <= p!(n-1)^p |phi|_inf
    ComassFromLinfSup,
}

/// Gromov's mass/comass multipliers: p!(n-1)^p under a Ricci lower bound,
/// pi a^-p/(p-1)! under pinched negative curvature.
pub fn gromov_multiplier(
    n: usize,
    p: usize,
    a: f64,
    mode: NormComparison,
) -> Result<f64, BoundsError> {
    match mode {
        NormComparison::L1FromMass
        | NormComparison::ComassFromLinf
        | NormComparison::ComassFromLinfSup => {
            Ok(factorial(p) * ((n as f64) - 1.0).powi(p as i32))
        }
        NormComparison::MassFromL1 | NormComparison::LinfFromComass => {
            if p == 0 {
                return Err(BoundsError::DegreeZeroFactorial);
            }
            if !(a > 0.0) {
                return Err(BoundsError::NonPositive { name: "a", value: a });
            }
            Ok(PI * a.powi(-(p as i32)) / factorial(p - 1))
        }
    }
}

/// One-sided interval: what is known about a constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl Interval {
    fn exact(v: f64) -> Self {
        Interval { lo: Some(v), hi: Some(v) }
    }
    fn unknown() -> Self {
        Interval { lo: None, hi: None }
    }
}

/// Propagated Sobolev-chain constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SobolevChain {
    pub c1: Interval,
    pub c0: Interval,
    /// None when n < 3, where the Sobolev exponent degenerates.
    pub cs: Interval,
}

/// Propagates C1 <= h^n vol/2, C1 <= C0 <= 2 C1 and
/// C_S = (2(n-1)/(n-2))^(2/n) C0^(2/n) from whichever inputs are present.
pub fn sobolev_chain(
    h: Option<f64>,
    c1: Option<f64>,
    c0: Option<f64>,
    n: usize,
    vol: f64,
) -> Result<SobolevChain, BoundsError> {
    if h.is_none() && c1.is_none() && c0.is_none() {
        return Err(BoundsError::NoSobolevInput);
    }
    if !(vol > 0.0) {
        return Err(BoundsError::NonPositive { name: "vol", value: vol });
    }
    let mut c1_iv = match c1 {
        Some(v) => Interval::exact(v),
        None => Interval::unknown(),
    };
    if let Some(h) = h {
        let cap = h.powi(n as i32) * vol / 2.0;
        c1_iv.hi = Some(c1_iv.hi.map_or(cap, |x| x.min(cap)));
    }
    let c0_iv = match c0 {
        Some(v) => Interval::exact(v),
        None => Interval {
            lo: c1_iv.lo,
            hi: c1_iv.hi.map(|x| 2.0 * x),
        },
    };
    let cs_iv = if n >= 3 {
        let nf = n as f64;
        let lead = (2.0 * (nf - 1.0) / (nf - 2.0)).powf(2.0 / nf);
        let f = |c0: f64| lead * c0.powf(2.0 / nf);
        Interval {
            lo: c0_iv.lo.map(f),
            hi: c0_iv.hi.map(f),
        }
    } else {
        Interval::unknown()
    };
    Ok(SobolevChain {
        c1: c1_iv,
        c0: c0_iv,
        cs: cs_iv,
    })
}

/// Spectral-gap bounds from the Cheeger constant: (h^2/4, 2(n-1)h + 10h^2).
/// The upper (Buser) bound presumes Ric >= -(n-1).
pub fn cheeger_buser(h: f64, n: usize) -> (f64, f64) {
    (h * h / 4.0, 2.0 * ((n as f64) - 1.0) * h + 10.0 * h * h)
}

/// Cheng's eigenvalue comparison: lambda_1 <= (n-1)^2 K/4 + C(n)/diam^2
/// under Ric >= -(n-1)K.
pub fn cheng_lambda1_upper(n: usize, k: f64, d: f64, c_n: f64) -> Result<f64, BoundsError> {
    if !(d > 0.0) {
        return Err(BoundsError::NonPositive { name: "diam", value: d });
    }
    if k < 0.0 {
        return Err(BoundsError::NonPositive { name: "K", value: k });
    }
    let nf = n as f64;
    Ok((nf - 1.0) * (nf - 1.0) * k / 4.0 + c_n / (d * d))
}

/// Croke's isoperimetric lower bound:
/// C(n) (vol / int_0^d (sinh(sqrt(-K) r)/sqrt(-K))^(n-1) dr)^(n+1),
/// with the K -> 0 limit integrand r^(n-1). Needs K <= 0.
pub fn croke_c1_lower(
    n: usize,
    k: f64,
    d: f64,
    vol: f64,
    c_n: f64,
) -> Result<f64, BoundsError> {
    if !(d > 0.0) {
        return Err(BoundsError::NonPositive { name: "diam", value: d });
    }
    if !(vol > 0.0) {
        return Err(BoundsError::NonPositive { name: "vol", value: vol });
    }
    if k > 0.0 {
        return Err(BoundsError::PositiveKp(k));
    }
    let s = (-k).sqrt();
    let integrand = |r: f64| -> f64 {
        let base = if s * r < 1e-8 {
            // sinh(sr)/s -> r with relative error (sr)^2/6
            r
        } else {
            (s * r).sinh() / s
        };
        base.powi(n as i32 - 1)
    };
    let integral = checked_integral(&integrand, d)?;
    Ok(c_n * (vol / integral).powi(n as i32 + 1))
}

/// Integrates a smooth function on [0, d] with two Gauss orders and
/// insists they agree to 1e-9 relative.
fn checked_integral(f: &dyn Fn(f64) -> f64, d: f64) -> Result<f64, BoundsError> {
    let eval = |g: usize| -> f64 {
        let (nodes, weights) = crate::hyperbolic::gauss_unit(g);
        nodes
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| w * f(d * x))
            .sum::<f64>()
            * d
    };
    let coarse = eval(48);
    let fine = eval(64);
    let diff = (fine - coarse).abs();
    if diff > 1e-9 * fine.abs().max(1.0) {
        return Err(BoundsError::QuadratureDisagreement(diff));
    }
    Ok(fine)
}

/// Symmetric-space family for the splitting-rank closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetricFamily {
    SlR,
    SlC,
}

/// Splitting rank: dim - rank for SL(m,R)/SO(m), dim - 2 rank for the
/// SL(m,C) symmetric space, from the standard dimension and rank formulas.
pub fn srk_closed_form(family: SymmetricFamily, m: usize) -> Result<i64, BoundsError> {
    if m < 2 {
        return Err(BoundsError::IndexOutOfRange { k: m, n: 2 });
    }
    let m = m as i64;
    Ok(match family {
        SymmetricFamily::SlR => m * (m + 1) / 2 - 1 - (m - 1),
        SymmetricFamily::SlC => (m * m - 1) - 2 * (m - 1),
    })
}

/// Default dimensional constant in Li's mean-value bound: 1 for n = 3,
/// 2^((n^2-4n)/2) otherwise.
pub fn li_default_cn(n: usize) -> f64 {
    if n == 3 {
        1.0
    } else {
        let e = (n as f64) * (n as f64 - 4.0) / 2.0;
        2f64.powf(e)
    }
}

/// The constant C with comass(omega) <= sqrt(C) |omega|_2 for harmonic
/// p-forms: V when K_p = 0, otherwise
/// C(n) (-p(n-p)K_p/C_S)^(n/2) exp(C(n) C_S / (-p(n-p)K_p V^(2/n))).
pub fn li_corollary_constant(
    n: usize,
    p: usize,
    k_p: f64,
    c_s: f64,
    v: f64,
    c_n: Option<f64>,
) -> Result<f64, BoundsError> {
    if n < 3 {
        return Err(BoundsError::NeedsDimensionThree(n));
    }
    if p == 0 || p >= n {
        return Err(BoundsError::IndexOutOfRange { k: p, n: n - 1 });
    }
    if !(c_s > 0.0) {
        return Err(BoundsError::NonPositive { name: "C_S", value: c_s });
    }
    if !(v > 0.0) {
        return Err(BoundsError::NonPositive { name: "V", value: v });
    }
    if k_p > 0.0 {
        return Err(BoundsError::PositiveKp(k_p));
    }
    if k_p == 0.0 {
        return Ok(v);
    }
    let c_n = c_n.unwrap_or_else(|| li_default_cn(n));
    let lambda = li_lambda(n, p, k_p);
    let nf = n as f64;
    Ok(c_n * (lambda / c_s).powf(nf / 2.0) * (c_n * c_s / (lambda * v.powf(2.0 / nf))).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Holds,
    Violated,
    NotApplicable,
}

/// One verified inequality: lhs <= rhs expected, margin = rhs - lhs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundEntry {
    pub inequality_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub status: BoundStatus,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn any_violated(&self) -> bool {
        self.entries.iter().any(|e| e.status == BoundStatus::Violated)
    }
}

fn checked_entry(id: &str, lhs: f64, rhs: f64, rel_tol: f64, provenance: String) -> BoundEntry {
    let margin = rhs - lhs;
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    let status = if margin >= -rel_tol * scale {
        BoundStatus::Holds
    } else {
        BoundStatus::Violated
    };
    BoundEntry {
        inequality_id: id.into(),
        lhs: Some(lhs),
        rhs: Some(rhs),
        margin: Some(margin),
        status,
        provenance,
    }
}

fn inapplicable_entry(id: &str, why: String) -> BoundEntry {
    BoundEntry {
        inequality_id: id.into(),
        lhs: None,
        rhs: None,
        margin: None,
        status: BoundStatus::NotApplicable,
        provenance: why,
    }
}

/// Norm values computed from a mesh, feeding the report. The first four
/// are required; the spectral and isoperimetric entries degrade to
/// not_applicable when their inputs are absent.
#[derive(Debug, Clone, Default)]
pub struct ComputedNorms {
    pub harmonic_norm: Option<f64>,
    pub l1_upper: Option<f64>,
    pub gromov_lower: Option<f64>,
    pub comass: Option<f64>,
    pub lambda1: Option<f64>,
    pub cheeger: Option<f64>,
}

/// Assembles the verification report: each entry checks one inequality
/// with computed bounds substituted only in the direction that keeps the
/// implication valid (lower bounds on the left, upper bounds on the
/// right). `discretized_tol` is the relative slack for entries involving
/// mesh-computed norms; the Cheeger entry doubles it.
pub fn verify_report(
    desc: &ManifoldDescriptor,
    computed: &ComputedNorms,
    discretized_tol: f64,
) -> Result<BoundReport, BoundsError> {
    desc.validate()?;
    let mut missing = Vec::new();
    for (name, v) in [
        ("harmonic_norm", computed.harmonic_norm),
        ("l1_upper", computed.l1_upper),
        ("gromov_lower", computed.gromov_lower),
        ("comass", computed.comass),
    ] {
        if v.is_none() {
            missing.push(name);
        }
    }
    if !missing.is_empty() {
        return Err(BoundsError::MissingInputs(missing.join(", ")));
    }
    let harmonic = computed.harmonic_norm.unwrap();
    let l1_upper = computed.l1_upper.unwrap();
    let gromov_lower = computed.gromov_lower.unwrap();
    let comass = computed.comass.unwrap();
    let tol = discretized_tol;
    let (n, p) = (desc.n, desc.p);
    let mut entries = Vec::new();

    entries.push(checked_entry(
        "sandwich",
        gromov_lower,
        l1_upper,
        tol,
        "computed lower bound vs LP upper bound for the simplicial l1 seminorm".into(),
    ));

    entries.push(checked_entry(
        "gromov_l1_upper",
        gromov_lower,
        thm_upper_rhs(n, p, desc.vol, harmonic),
        tol,
        format!(
            "l1 norm of the dual <= (n-p)!(n-1)^(n-p) sqrt(vol) x harmonic norm \
             under Ric >= -(n-1), via the duality principle (Benedetti-Petronio) \
             and Gromov's comass bound; checked against the computed lower bound \
             (n = {n}, p = {p})"
        ),
    ));

    let c_general = desc.constant("C");
    match thm_lower_const(&desc.case_tag, n, p, desc.b_p(), desc.a, desc.inj, c_general)? {
        Some(coeff) => entries.push(checked_entry(
            "harmonic_l1_general",
            harmonic,
            coeff * l1_upper,
            tol,
            format!(
                "straightening estimate: harmonic norm <= C/inj^(l/2) x l1 norm of \
                 the dual ({}; C parametric, default 1); checked against the LP \
                 upper bound",
                desc.case_tag.describe()
            ),
        )),
        None => entries.push(inapplicable_entry(
            "harmonic_l1_general",
            format!(
                "straightening estimate hypotheses not met for {} with n = {n}, \
                 p = {p}, a = {}, b_p = {}",
                desc.case_tag.describe(),
                desc.a,
                desc.b_p()
            ),
        )),
    }

    let comass_coeff = comass_harmonic_rhs(
        &desc.case_tag,
        n,
        desc.b_p(),
        desc.inj,
        desc.constant("C"),
    )?;
    if desc.b_p() > 0.0 || desc.case_tag.ell(n) >= n {
        entries.push(checked_entry(
            "comass_harmonic",
            comass,
            comass_coeff * harmonic,
            tol,
            format!(
                "Moser/Margulis sup bound: comass <= C b_p^((n-l)/2)/inj^(l/2) x \
                 harmonic norm ({}, l = {}; C parametric, default 1)",
                desc.case_tag.describe(),
                desc.case_tag.ell(n)
            ),
        ));
    } else {
        entries.push(inapplicable_entry(
            "comass_harmonic",
            "comass bound degenerates at b_p = 0 when the exponent (n-l)/2 is positive".into(),
        ));
    }

    if n >= 3 && p >= 1 && p < n && desc.cs.is_some() && desc.k_p < 0.0 {
        let c = li_corollary_constant(n, p, desc.k_p, desc.cs.unwrap(), desc.vol, None)?;
        entries.push(checked_entry(
            "li_corollary",
            comass,
            c.sqrt() * harmonic,
            tol,
            "Li's mean-value inequality: comass <= sqrt(C) x harmonic norm, \
             C explicit in K_p, C_S and vol"
                .into(),
        ));
    } else {
        entries.push(inapplicable_entry(
            "li_corollary",
            "needs n >= 3, 1 <= p <= n-1, a supplied Sobolev constant C_S and K_p < 0".into(),
        ));
    }

    let bd_applicable = desc.case_tag == CaseTag::NegativelyCurved && n == 3 && p == 1;
    if bd_applicable {
        entries.push(checked_entry(
            "bd_harmonic_lower",
            PI / (2.0 * desc.vol.sqrt()) * gromov_lower,
            harmonic,
            tol,
            "Brock-Dunfield lower bound for hyperbolic 3-manifolds: \
             pi/(2 sqrt(vol)) x l1 norm of the dual <= harmonic norm"
                .into(),
        ));
        entries.push(checked_entry(
            "bd_harmonic_upper",
            harmonic,
            5.0 * PI / desc.inj.sqrt() * l1_upper,
            tol,
            "Brock-Dunfield upper bound for hyperbolic 3-manifolds: \
             harmonic norm <= 5 pi/sqrt(inj) x l1 norm of the dual"
                .into(),
        ));
    } else {
        let why = format!(
            "Brock-Dunfield needs a hyperbolic 3-manifold and degree 1, got {} \
             with n = {n}, p = {p}",
            desc.case_tag.describe()
        );
        entries.push(inapplicable_entry("bd_harmonic_lower", why.clone()));
        entries.push(inapplicable_entry("bd_harmonic_upper", why));
    }

    let h_for_cheeger = computed.cheeger.or(desc.h);
    match (h_for_cheeger, computed.lambda1) {
        (Some(h), Some(lambda1)) => entries.push(checked_entry(
            "cheeger_lambda1",
            cheeger_buser(h, n).0,
            lambda1,
            2.0 * tol,
            "Cheeger's inequality: lambda_1 >= h^2/4 (discrete h from the \
             bipartition enumeration when available)"
                .into(),
        )),
        _ => entries.push(inapplicable_entry(
            "cheeger_lambda1",
            "needs both a Cheeger constant and a computed lambda_1".into(),
        )),
    }

    Ok(BoundReport { entries })
}

/// Exhaustive discrete Cheeger constant: minimum over vertex bipartitions
/// of cut codimension-1 volume over the smaller side's top volume. Top
/// cells join the side holding the majority of their vertices (ties go to
/// the side of the lowest-labeled vertex). Exponential in the vertex
/// count, hence the hard cap.
pub fn cheeger_bruteforce(m: &MetricComplex) -> Result<f64, BoundsError> {
    let complex = m.complex();
    if !complex.is_connected() {
        return Err(BoundsError::Disconnected);
    }
    let v = complex.size(0);
    if v > 20 {
        return Err(BoundsError::TooManyVertices(v));
    }
    let n = complex.dimension();
    if n == 0 {
        return Err(BoundsError::NoSeparatingCut);
    }
    let label_to_idx: std::collections::HashMap<usize, usize> = complex
        .simplices(0)
        .iter()
        .enumerate()
        .map(|(i, s)| (s.vertices()[0], i))
        .collect();
    let tops = complex.simplices(n);
    let top_masks: Vec<u32> = tops
        .iter()
        .map(|s| {
            s.vertices()
                .iter()
                .fold(0u32, |acc, l| acc | 1 << label_to_idx[l])
        })
        .collect();
    let top_vols: Vec<f64> = (0..tops.len()).map(|t| m.geometry(t).volume).collect();
    // interior codimension-1 faces with their (at most two counted) cofaces
    let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); complex.size(n - 1)];
    for (t, s) in tops.iter().enumerate() {
        for i in 0..=n {
            let mut verts: Vec<usize> = s.vertices().to_vec();
            verts.remove(i);
            if let Some(f) = complex.simplex_index(n - 1, &verts) {
                cofaces[f].push(t);
            }
        }
    }
    let face_vols: Vec<f64> = complex
        .simplices(n - 1)
        .iter()
        .map(|s| m.simplex_volume(s.vertices()))
        .collect::<Result<Vec<f64>, MetricError>>()?;
    let mut best = f64::INFINITY;
    // vertex 0 stays on side 0; sweep assignments of the rest
    for mask in 0u32..(1 << (v - 1)) {
        let assignment = mask << 1;
        // majority of the n+1 vertices; ties join side 0
        let side = |tmask: u32| -> usize {
            usize::from(2 * (tmask & assignment).count_ones() as usize > n + 1)
        };
        let mut vols = [0.0f64; 2];
        for (t, &tm) in top_masks.iter().enumerate() {
            vols[side(tm)] += top_vols[t];
        }
        if vols[0] <= 0.0 || vols[1] <= 0.0 {
            continue;
        }
        let mut cut = 0.0;
        for (f, cf) in cofaces.iter().enumerate() {
            if cf.len() >= 2 {
                let s0 = side(top_masks[cf[0]]);
                if cf.iter().any(|&t| side(top_masks[t]) != s0) {
                    cut += face_vols[f];
                }
            }
        }
        let quotient = cut / vols[0].min(vols[1]);
        if quotient < best {
            best = quotient;
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(BoundsError::NoSeparatingCut)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use approx::assert_relative_eq;
    use nalgebra::DVector;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let a = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
        (&a + a.transpose()) * 0.5
    }

    /// Independent check of the smallest eigenvalue: best random Rayleigh
    /// quotient refined by projected gradient descent on the sphere.
    fn rayleigh_min_oracle(mat: &DMatrix<f64>, seed: u64) -> f64 {
        let d = mat.nrows();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = f64::INFINITY;
        let mut best_vec = DVector::zeros(d);
        for _ in 0..10_000 {
            let x = DVector::from_fn(d, |_, _| rng.gen_range(-1.0f64..1.0));
            let x = &x / x.norm();
            let q = (mat * &x).dot(&x);
            if q < best {
                best = q;
                best_vec = x;
            }
        }
        let mut x = best_vec;
        for _ in 0..2000 {
            let grad = mat * &x - (mat * &x).dot(&x) * &x;
            x -= 0.1 * grad;
            x /= x.norm();
        }
        (mat * &x).dot(&x)
    }

    /// Independent check of the top-k eigenvalue sum: subspace iteration
    /// on a positive shift, started from a random frame.
    fn topk_trace_oracle(mat: &DMatrix<f64>, k: usize, seed: u64) -> f64 {
        let d = mat.nrows();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = mat.abs().sum() + 1.0;
        let shifted = mat + DMatrix::identity(d, d) * shift;
        let mut v = DMatrix::from_fn(d, k, |_, _| rng.gen_range(-1.0f64..1.0)).qr().q();
        for _ in 0..4000 {
            v = (&shifted * v).qr().q();
        }
        (v.transpose() * mat * &v).trace()
    }

    #[test]
    fn curvature_term_by_degree() {
        let n = 4;
        let two_forms = n * (n - 1) / 2;
        let r = DMatrix::identity(two_forms, two_forms) * -1.0;
        assert_eq!(kp_from_curvature_operator(&r, 2, n).unwrap(), -1.0);
        assert_eq!(kp_from_curvature_operator(&r, 0, n).unwrap(), 0.0);
        let ricci = DMatrix::identity(n, n) * -((n as f64) - 1.0);
        assert_relative_eq!(kp_from_curvature_operator(&ricci, 1, n).unwrap(), -1.0);
        assert!(matches!(
            kp_from_curvature_operator(&ricci, 2, n),
            Err(BoundsError::MatrixSize { .. })
        ));
    }

    #[test]
    fn curvature_term_matches_sampling_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [4usize, 5, 6] {
            let d = n * (n - 1) / 2;
            let mut r = random_symmetric(d, &mut rng);
            r -= DMatrix::identity(d, d); // keep it nonpositive-leaning
            let direct = kp_from_curvature_operator(&r, 2, n).unwrap();
            let oracle = rayleigh_min_oracle(&r, 100 + n as u64);
            assert!(
                (direct - oracle).abs() < 1e-3,
                "n = {n}: {direct} vs {oracle}"
            );
        }
    }

    #[test]
    fn directional_ricci_sums_top_eigenvalues() {
        let r = DMatrix::identity(5, 5) * -1.0;
        assert_relative_eq!(ric_k(&r, 3).unwrap(), -3.0);
        let diag = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -2.0, -3.0]));
        assert_relative_eq!(ric_k(&diag, 2).unwrap(), -3.0);
        assert_relative_eq!(ric_k(&diag, 3).unwrap(), diag.trace());
        assert!(ric_k(&diag, 0).is_err());
        assert!(ric_k(&diag, 4).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [4usize, 6] {
            let ru = random_symmetric(n, &mut rng);
            for k in [1usize, 2, n - 1] {
                let direct = ric_k(&ru, k).unwrap();
                let oracle = topk_trace_oracle(&ru, k, 200 + (n * 10 + k) as u64);
                assert!(
                    (direct - oracle).abs() < 1e-3,
                    "n = {n}, k = {k}: {direct} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn bochner_zero_order_term() {
        assert_eq!(li_lambda(3, 1, -1.0), 2.0);
        assert_eq!(li_lambda(5, 0, -3.0), 0.0);
        assert_eq!(li_lambda(4, 2, -2.0), 8.0);
    }

    #[test]
    fn orbit_count_cases() {
        // mu/eps = 4 via inj = mu/4
        let c = margulis_count(&CaseTag::NegativelyCurved, 2.0, 0.5, 3, 1.0).unwrap();
        assert_relative_eq!(c, 4.0);
        let sym = CaseTag::HigherRankSymmetric { rank: 2, srk: 1 };
        assert_relative_eq!(margulis_count(&sym, 3.0, 1.0, 5, 1.0).unwrap(), 9.0);
        assert_relative_eq!(
            margulis_count(&CaseTag::Generic, 2.0, 1.0, 3, 1.0).unwrap(),
            8.0
        );
        // eps caps at inj when inj < mu/2; l = k-1 under Ric_k < 0
        let ric = CaseTag::RankOneRicK { k: 3 };
        assert_relative_eq!(margulis_count(&ric, 2.0, 0.5, 8, 2.0).unwrap(), 32.0);
    }

    #[test]
    fn moser_sup_bound() {
        assert_relative_eq!(
            moser_rhs(3, 0.0, 0.0, 1.0, 4.0, 3.0, 1.0, 1.0).unwrap(),
            1.5
        );
        let v = moser_rhs(3, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(v, 2f64.powf(1.25) * (2f64.sqrt()).exp(), epsilon = 1e-14);
        let doubled = moser_rhs(3, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(doubled, 2.0 * v, epsilon = 1e-14);
        assert!(moser_rhs(3, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn comass_coefficient_cases() {
        let neg = comass_harmonic_rhs(&CaseTag::NegativelyCurved, 3, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(neg, 1.0);
        let halved = comass_harmonic_rhs(&CaseTag::NegativelyCurved, 3, 1.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(halved, 2f64.sqrt(), epsilon = 1e-14);
        let generic = comass_harmonic_rhs(&CaseTag::Generic, 4, 0.7, 0.25, 2.0).unwrap();
        // l = n makes b_p drop out entirely
        assert_relative_eq!(generic, 2.0 * 0.25f64.powf(-2.0), epsilon = 1e-12);
    }

    #[test]
    fn dual_l1_upper_coefficient() {
        assert_relative_eq!(thm_upper_rhs(3, 1, 1.0, 1.0), 8.0);
        assert_relative_eq!(thm_upper_rhs(3, 3, 7.3, 2.0), 7.3f64.sqrt() * 2.0);
        assert_relative_eq!(thm_upper_rhs(3, 1, 4.0, 2.0), 32.0);
        // linear in the harmonic norm, linear in sqrt(vol)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (n, p) = (4usize, 2usize);
            let vol: f64 = rng.gen_range(0.1..5.0);
            let h: f64 = rng.gen_range(0.1..5.0);
            let s: f64 = rng.gen_range(0.5..3.0);
            assert_relative_eq!(
                thm_upper_rhs(n, p, vol, s * h),
                s * thm_upper_rhs(n, p, vol, h),
                epsilon = 1e-12
            );
            assert_relative_eq!(
                thm_upper_rhs(n, p, s * s * vol, h),
                s * thm_upper_rhs(n, p, vol, h),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn straightening_coefficient_gates() {
        let neg = CaseTag::NegativelyCurved;
        let c = thm_lower_const(&neg, 3, 1, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(c.unwrap(), 1.0);
        // p = n-1 fails the p <= n-2 hypothesis
        assert!(thm_lower_const(&neg, 3, 2, 1.0, 1.0, 1.0, 1.0).unwrap().is_none());
        let sym = CaseTag::HigherRankSymmetric { rank: 2, srk: 1 };
        let at1 = thm_lower_const(&sym, 6, 1, 1.0, 0.0, 1.0, 1.0).unwrap().unwrap();
        let at4 = thm_lower_const(&sym, 6, 1, 1.0, 0.0, 4.0, 1.0).unwrap().unwrap();
        // l = rank = 2: halving comes from inj^{-1}
        assert_relative_eq!(at1 / at4, 4.0, epsilon = 1e-12);
        let ric = CaseTag::RankOneRicK { k: 2 };
        assert!(thm_lower_const(&ric, 5, 1, 1.0, 0.0, 1.0, 1.0).unwrap().is_some());
        assert!(thm_lower_const(&ric, 5, 2, 1.0, 0.0, 1.0, 1.0).unwrap().is_none());
        assert!(thm_lower_const(&CaseTag::Generic, 5, 1, 1.0, 0.0, 1.0, 1.0)
            .unwrap()
            .is_none());
    }

    #[test]
    fn gromov_multipliers() {
        assert_relative_eq!(
            gromov_multiplier(3, 1, 0.0, NormComparison::L1FromMass).unwrap(),
            2.0
        );
        assert_relative_eq!(
            gromov_multiplier(4, 2, 1.0, NormComparison::MassFromL1).unwrap(),
            PI
        );
        assert_relative_eq!(
            gromov_multiplier(4, 1, 2.0, NormComparison::LinfFromComass).unwrap(),
            PI / 2.0
        );
        assert!(matches!(
            gromov_multiplier(4, 0, 1.0, NormComparison::MassFromL1),
            Err(BoundsError::DegreeZeroFactorial)
        ));
    }

    #[test]
    fn sobolev_chain_propagation() {
        let from_h = sobolev_chain(Some(1.0), None, None, 3, 2.0).unwrap();
        assert_relative_eq!(from_h.c1.hi.unwrap(), 1.0);
        assert!(from_h.c1.lo.is_none());
        assert_relative_eq!(from_h.c0.hi.unwrap(), 2.0);
        let from_c1 = sobolev_chain(None, Some(1.0), None, 3, 1.0).unwrap();
        assert_relative_eq!(from_c1.c0.lo.unwrap(), 1.0);
        assert_relative_eq!(from_c1.c0.hi.unwrap(), 2.0);
        let from_c0 = sobolev_chain(None, None, Some(1.0), 4, 1.0).unwrap();
        assert_relative_eq!(from_c0.cs.lo.unwrap(), 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(from_c0.cs.hi.unwrap(), 3f64.sqrt(), epsilon = 1e-14);
        let flat = sobolev_chain(Some(1.0), None, None, 2, 1.0).unwrap();
        assert!(flat.cs.lo.is_none() && flat.cs.hi.is_none());
        assert!(matches!(
            sobolev_chain(None, None, None, 3, 1.0),
            Err(BoundsError::NoSobolevInput)
        ));
    }

    #[test]
    fn spectral_gap_bounds() {
        assert_eq!(cheeger_buser(1.0, 3), (0.25, 14.0));
        assert_eq!(cheeger_buser(0.0, 5), (0.0, 0.0));
        assert_eq!(cheeger_buser(2.0, 2), (1.0, 44.0));
        assert_relative_eq!(cheng_lambda1_upper(4, 0.0, 2.0, 3.0).unwrap(), 0.75);
        assert_relative_eq!(cheng_lambda1_upper(3, 1.0, 1.0, 1.0).unwrap(), 2.0);
        let base = cheng_lambda1_upper(3, 0.0, 1.0, 1.0).unwrap();
        let far = cheng_lambda1_upper(3, 0.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(base / far, 4.0);
    }

    #[test]
    fn croke_isoperimetric_lower_bound() {
        // flat limit at n = 2: integral of r over [0,1] is 1/2
        let flat = croke_c1_lower(2, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(flat, 8.0, epsilon = 1e-12);
        let tiny = croke_c1_lower(2, -1e-12, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(tiny, flat, epsilon = 1e-6);
        // homogeneity of degree n+1 in vol
        let v1 = croke_c1_lower(3, -1.0, 2.0, 1.0, 1.0).unwrap();
        let v2 = croke_c1_lower(3, -1.0, 2.0, 2.0, 1.0).unwrap();
        assert_relative_eq!(v2 / v1, 16.0, epsilon = 1e-9);
        assert!(croke_c1_lower(3, 1.0, 1.0, 1.0, 1.0).is_err());
        // at K = -1 the integrand is sinh^2: int_0^1 sinh^2 = (sinh(2)-2)/4
        let direct = croke_c1_lower(3, -1.0, 1.0, 1.0, 1.0).unwrap();
        let integral = (2f64.sinh() - 2.0) / 4.0;
        assert_relative_eq!(direct, integral.powi(-4), epsilon = 1e-9);
    }

    #[test]
    fn splitting_rank_closed_forms() {
        assert_eq!(srk_closed_form(SymmetricFamily::SlR, 3).unwrap(), 3);
        assert_eq!(srk_closed_form(SymmetricFamily::SlR, 2).unwrap(), 1);
        assert_eq!(srk_closed_form(SymmetricFamily::SlC, 3).unwrap(), 4);
        assert!(srk_closed_form(SymmetricFamily::SlR, 1).is_err());
    }

    #[test]
    fn li_constant_cases() {
        assert_relative_eq!(li_corollary_constant(3, 1, 0.0, 1.0, 7.0, None).unwrap(), 7.0);
        assert_relative_eq!(li_default_cn(3), 1.0);
        assert_relative_eq!(li_default_cn(5), 2f64.powf(2.5), epsilon = 1e-14);
        let c = li_corollary_constant(3, 1, -1.0, 1.0, 1.0, None).unwrap();
        // lambda = 2: C = (2/1)^{3/2} e^{1/2}
        assert_relative_eq!(c, 2f64.powf(1.5) * 0.5f64.exp(), epsilon = 1e-13);
        assert!(li_corollary_constant(3, 1, 1.0, 1.0, 1.0, None).is_err());
        assert!(li_corollary_constant(2, 1, -1.0, 1.0, 1.0, None).is_err());
        assert!(li_corollary_constant(3, 0, -1.0, 1.0, 1.0, None).is_err());
    }

    fn hyperbolic_surface_descriptor() -> ManifoldDescriptor {
        ManifoldDescriptor {
            n: 2,
            p: 1,
            vol: 4.0 * PI,
            inj: 0.3,
            diam: 3.0,
            a: 1.0,
            b: 1.0,
            k_p: -1.0,
            case_tag: CaseTag::NegativelyCurved,
            mu: 0.5,
            h: None,
            lambda1: None,
            c0: None,
            c1: None,
            cs: None,
            constants: BTreeMap::new(),
        }
    }

    #[test]
    fn descriptor_validation_and_json() {
        let d = hyperbolic_surface_descriptor();
        assert!(d.validate().is_ok());
        let text = serde_json::to_string(&d).unwrap();
        let back = ManifoldDescriptor::from_json(&text).unwrap();
        assert_eq!(back.case_tag, CaseTag::NegativelyCurved);
        assert_relative_eq!(back.vol, 4.0 * PI);
        let mut bad = hyperbolic_surface_descriptor();
        bad.inj = 5.0; // exceeds diam
        assert!(bad.validate().is_err());
        bad = hyperbolic_surface_descriptor();
        bad.k_p = 0.5;
        assert!(bad.validate().is_err());
        // tagged case variants survive the round trip
        let sym = ManifoldDescriptor {
            case_tag: CaseTag::HigherRankSymmetric { rank: 2, srk: 3 },
            n: 8,
            k_p: 0.0,
            a: 0.0,
            b: 0.0,
            ..hyperbolic_surface_descriptor()
        };
        let text = serde_json::to_string(&sym).unwrap();
        assert!(text.contains("higher_rank_symmetric"));
        let back = ManifoldDescriptor::from_json(&text).unwrap();
        assert_eq!(back.case_tag, CaseTag::HigherRankSymmetric { rank: 2, srk: 3 });
    }

    #[test]
    fn report_on_zero_class_holds_trivially() {
        let desc = hyperbolic_surface_descriptor();
        let computed = ComputedNorms {
            harmonic_norm: Some(0.0),
            l1_upper: Some(0.0),
            gromov_lower: Some(0.0),
            comass: Some(0.0),
            lambda1: None,
            cheeger: None,
        };
        let report = verify_report(&desc, &computed, 0.05).unwrap();
        assert!(!report.any_violated());
        for entry in &report.entries {
            if entry.status != BoundStatus::NotApplicable {
                assert_eq!(entry.lhs, Some(0.0), "{}", entry.inequality_id);
                assert_eq!(entry.status, BoundStatus::Holds);
            }
            assert!(!entry.provenance.is_empty());
        }
        // missing required inputs are reported by name
        let err = verify_report(&desc, &ComputedNorms::default(), 0.05).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("harmonic_norm") && msg.contains("comass"));
    }

    #[test]
    fn report_flags_violations_and_gates() {
        let mut desc = hyperbolic_surface_descriptor();
        desc.n = 3;
        desc.p = 2; // fails p <= n-2
        let computed = ComputedNorms {
            harmonic_norm: Some(1.0),
            l1_upper: Some(2.0),
            gromov_lower: Some(1.0),
            comass: Some(50.0),
            lambda1: None,
            cheeger: None,
        };
        let report = verify_report(&desc, &computed, 0.05).unwrap();
        let general = report
            .entries
            .iter()
            .find(|e| e.inequality_id == "harmonic_l1_general")
            .unwrap();
        assert_eq!(general.status, BoundStatus::NotApplicable);
        // comass 50 against coefficient b_p^{1/2}/sqrt(inj) x harmonic = violation
        let comass_entry = report
            .entries
            .iter()
            .find(|e| e.inequality_id == "comass_harmonic")
            .unwrap();
        assert_eq!(comass_entry.status, BoundStatus::Violated);
        assert!(report.any_violated());
    }

    #[test]
    fn bd_entries_gate_on_hyperbolic_three_manifolds() {
        let mut desc = hyperbolic_surface_descriptor();
        desc.n = 3;
        desc.p = 1;
        let computed = ComputedNorms {
            harmonic_norm: Some(1.0),
            l1_upper: Some(1.0),
            gromov_lower: Some(0.1),
            comass: Some(1.0),
            lambda1: None,
            cheeger: None,
        };
        let report = verify_report(&desc, &computed, 0.05).unwrap();
        let lower = report
            .entries
            .iter()
            .find(|e| e.inequality_id == "bd_harmonic_lower")
            .unwrap();
        assert_eq!(lower.status, BoundStatus::Holds);
        assert_relative_eq!(
            lower.lhs.unwrap(),
            PI / (2.0 * desc.vol.sqrt()) * 0.1,
            epsilon = 1e-14
        );
        // surfaces fall outside the hypotheses
        let surf = verify_report(&hyperbolic_surface_descriptor(), &computed, 0.05).unwrap();
        assert!(surf
            .entries
            .iter()
            .filter(|e| e.inequality_id.starts_with("bd_"))
            .all(|e| e.status == BoundStatus::NotApplicable));
    }

    #[test]
    fn exhaustive_cheeger_on_two_triangles() {
        let m = builtin::two_triangles();
        let h = cheeger_bruteforce(&m).unwrap();
        // the only separating cut is the shared edge
        let shared_len = m.edge_length(1, 2).unwrap();
        let area = m.geometry(0).volume.min(m.geometry(1).volume);
        assert_relative_eq!(h, shared_len / area, epsilon = 1e-12);
    }

    #[test]
    fn exhaustive_cheeger_cuts_the_dumbbell_neck() {
        let m = builtin::dumbbell_surface();
        let h = cheeger_bruteforce(&m).unwrap();
        assert!(h > 0.0);
        // the cross edge is short: cutting there beats halving a lobe
        let balanced_guess = m.total_volume() / 2.0;
        assert!(h < 1.0 / balanced_guess);
    }

    #[test]
    fn cheeger_rejects_degenerate_inputs() {
        // single simplex: every bipartition leaves one side empty
        let single = crate::complex::SimplicialComplex::from_top_cells(&[vec![0, 1, 2]]).unwrap();
        let single = builtin::equilateral(single, 1.0).unwrap();
        assert!(matches!(
            cheeger_bruteforce(&single),
            Err(BoundsError::NoSeparatingCut)
        ));
        let big = builtin::cubic_torus(3).0;
        assert!(matches!(
            cheeger_bruteforce(&big),
            Err(BoundsError::TooManyVertices(27))
        ));
    }
}
