//! Exact rational classification of `(m, alpha, lambda)` parameter points.
//!
//! The scaling conventions are `eta = eps^alpha r0` (uniform cover distance;
//! `|log eps|^{-alpha} r0` in the two-dimensional fading-I scale) and
//! `ell = eps^lambda` (handle length).  Four results can apply at a point:
//!
//! * fading I — cut-off comparison with the unperturbed Laplacian;
//! * fading II — harmonic-extension comparison with the unperturbed
//!   Laplacian;
//! * adhering (general) — identification of two isometric regions;
//! * adhering (two identical copies) — the simplified two-copy situation.
//!
//! All region conditions are evaluated in exact rational arithmetic so that
//! boundary cases land exactly as the strict/non-strict inequalities demand.

use crate::constants::{ConstantsError, ManifoldConstants};
use crate::handles::{delta_bundle, DeltaBundle, HandleError, HandleGeometry};
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Exact rational scalar used throughout the classification.
pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn q_str(x: Q) -> String {
    if x.denom() == &1 {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Parses `p/q`, integers, or finite decimals exactly.
pub fn parse_rational(s: &str) -> Result<Q, RegimeError> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: i64 = a.trim().parse().map_err(|_| RegimeError::Parse(s.into()))?;
        let d: i64 = b.trim().parse().map_err(|_| RegimeError::Parse(s.into()))?;
        if d == 0 {
            return Err(RegimeError::Parse(s.into()));
        }
        return Ok(q(n, d));
    }
    if let Some((a, b)) = s.split_once('.') {
        let neg = a.trim_start().starts_with('-');
        let whole: i64 = if a.is_empty() || a == "-" {
            0
        } else {
            a.parse().map_err(|_| RegimeError::Parse(s.into()))?
        };
        if b.len() > 15 {
            return Err(RegimeError::Parse(s.into()));
        }
        let frac: i64 = if b.is_empty() { 0 } else { b.parse().map_err(|_| RegimeError::Parse(s.into()))? };
        let scale = 10i64.pow(b.len() as u32);
        let sign = if neg { -1 } else { 1 };
        return Ok(q(whole * scale + sign * frac, scale));
    }
    let n: i64 = s.parse().map_err(|_| RegimeError::Parse(s.into()))?;
    Ok(Q::from_integer(n))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegimeError {
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("dimension m={0} must be >= 2")]
    Dimension(u32),
    #[error("alpha={0} outside [0, 1)")]
    Alpha(String),
    #[error("lambda={0} must be > 0")]
    Lambda(String),
    #[error("log cover scale is defined only for m = 2")]
    LogScale,
    #[error("alpha4 choice {0} outside (0, 1/2)")]
    Alpha4(String),
    #[error("theorem {0:?} is not applicable at this parameter point")]
    NotApplicable(Theorem),
    #[error("point name {0:?} is not defined in figure {1:?}")]
    UnknownPoint(String, Figure),
    #[error(transparent)]
    Handles(#[from] HandleError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
}

/// Scale convention for the cover distance `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// `eta = eps^alpha r0`.
    Power,
    /// `eta = |log eps|^{-alpha} r0` (fading I at `m = 2` only).
    Log,
}

/// A parameter point `(m, alpha, lambda)` with its scale convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    pub m: u32,
    pub alpha: Q,
    pub lambda: Q,
    pub scale: Scale,
}

impl ParamPoint {
    pub fn new(m: u32, alpha: Q, lambda: Q, scale: Scale) -> Result<Self, RegimeError> {
        if m < 2 {
            return Err(RegimeError::Dimension(m));
        }
        if alpha < Q::zero() || alpha >= Q::one() {
            return Err(RegimeError::Alpha(q_str(alpha)));
        }
        if lambda <= Q::zero() {
            return Err(RegimeError::Lambda(q_str(lambda)));
        }
        if scale == Scale::Log && m != 2 {
            return Err(RegimeError::LogScale);
        }
        Ok(ParamPoint { m, alpha, lambda, scale })
    }

    pub fn power(m: u32, alpha: Q, lambda: Q) -> Result<Self, RegimeError> {
        ParamPoint::new(m, alpha, lambda, Scale::Power)
    }
}

/// Default choice for the free parameter `alpha_4 in (0, 1/2)`.
pub fn alpha4_default() -> Q {
    q(49, 100)
}

/// The dimension-dependent constant `alpha_m`:
/// `1/2` for `m >= 5`, a configurable value in `(0, 1/2)` for `m = 4`,
/// `1/3` for `m = 3`, `1/2` for `m = 2`.
pub fn alpha_m(m: u32, alpha4_choice: Option<Q>) -> Result<Q, RegimeError> {
    if m < 2 {
        return Err(RegimeError::Dimension(m));
    }
    Ok(match m {
        2 => q(1, 2),
        3 => q(1, 3),
        4 => {
            let a = alpha4_choice.unwrap_or_else(alpha4_default);
            if a <= Q::zero() || a >= q(1, 2) {
                return Err(RegimeError::Alpha4(q_str(a)));
            }
            a
        }
        _ => q(1, 2),
    })
}

/// `alpha_m^* = alpha_m^2 / (2 - alpha_m)`; equals `1/15` at `m = 3` and
/// `1/6` for `m >= 5`.
pub fn alpha_star(m: u32, alpha4_choice: Option<Q>) -> Result<Q, RegimeError> {
    let a = alpha_m(m, alpha4_choice)?;
    Ok(a * a / (Q::from_integer(2) - a))
}

/// Convergence rate of a theorem at a parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rate {
    /// `O(eps^exponent)`.
    Power { exponent: String },
    /// `O(|log eps|^{-log_power} |log|log eps||^{loglog_power})`
    /// (two-dimensional fading-I scale).
    LogRate { log_power: String, loglog_power: String },
}

impl Rate {
    fn power(e: Q) -> Rate {
        Rate::Power { exponent: q_str(e) }
    }

    /// Exponent as rational, when this is a power rate.
    pub fn exponent(&self) -> Option<Q> {
        match self {
            Rate::Power { exponent } => parse_rational(exponent).ok(),
            Rate::LogRate { .. } => None,
        }
    }

    /// Order by convergence speed: any positive power beats a log rate.
    fn speed_key(&self) -> (u8, Q) {
        match self {
            Rate::Power { exponent } => (1, parse_rational(exponent).unwrap()),
            Rate::LogRate { log_power, .. } => (0, parse_rational(log_power).unwrap()),
        }
    }
}

/// The four convergence results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Cut-off comparison with the unperturbed operator.
    FadingI,
    /// Harmonic-extension comparison with the unperturbed operator.
    FadingII,
    /// Identification of two isometric regions of one manifold.
    AdheringGeneral,
    /// Two identical copies glued along all handles.
    AdheringTwoCopies,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [
        Theorem::FadingI,
        Theorem::FadingII,
        Theorem::AdheringGeneral,
        Theorem::AdheringTwoCopies,
    ];

    /// Tie-break priority: fewer geometric hypotheses first.
    fn tie_rank(self) -> u8 {
        match self {
            Theorem::AdheringTwoCopies => 0,
            Theorem::AdheringGeneral => 1,
            Theorem::FadingII => 2,
            Theorem::FadingI => 3,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::FadingI => "fading_i",
            Theorem::FadingII => "fading_ii",
            Theorem::AdheringGeneral => "adhering_general",
            Theorem::AdheringTwoCopies => "adhering_two_copies",
        };
        f.write_str(s)
    }
}

/// Outcome of one classifier at one point.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub theorem: Theorem,
    pub applicable: bool,
    /// Each region condition by name with its truth value.
    pub conditions: Vec<(String, bool)>,
    /// Rate when applicable.
    pub rate: Option<Rate>,
    pub note: Option<String>,
}

fn cond(name: &str, val: bool) -> (String, bool) {
    (name.to_string(), val)
}

fn qmin(vals: &[Q]) -> Q {
    *vals.iter().min().unwrap()
}

/// Fading I: applicable for `alpha in [0, alpha_m)`; for `m >= 3` the rate
/// exponent is
/// `min{lambda, (alpha_m - alpha)/(4(1-alpha_m)), (alpha_m + alpha)/2}` as
/// stated in the corollary.  The corollary's middle denominator
/// `4(1-alpha_m)` disagrees with the proof's `gamma_m = 1/(2(1-alpha_m))`;
/// `use_proof_gamma` switches to the proof variant (both are reported by the
/// regime report, neither is silently preferred).  For `m = 2` the rate is
/// the log-scale descriptor.
pub fn classify_fading1(
    p: &ParamPoint,
    alpha4_choice: Option<Q>,
    use_proof_gamma: bool,
) -> Result<Classification, RegimeError> {
    let am = alpha_m(p.m, alpha4_choice)?;
    let mut conditions = vec![cond("lambda > 0", p.lambda > Q::zero())];
    if p.m == 2 {
        let scale_ok = p.scale == Scale::Log;
        conditions.push(cond("scale = log (m = 2 cover distance)", scale_ok));
        conditions.push(cond("alpha < alpha_m = 1/2", p.alpha < am));
        let applicable = conditions.iter().all(|c| c.1);
        let rate = applicable.then(|| Rate::LogRate {
            log_power: q_str((q(1, 2) + p.alpha) / Q::from_integer(2)),
            loglog_power: q_str(q(1, 2)),
        });
        return Ok(Classification {
            theorem: Theorem::FadingI,
            applicable,
            conditions,
            rate,
            note: None,
        });
    }
    let scale_ok = p.scale == Scale::Power;
    conditions.push(cond("scale = power", scale_ok));
    conditions.push(cond("alpha < alpha_m", p.alpha < am));
    let applicable = conditions.iter().all(|c| c.1);
    let denom_factor = if use_proof_gamma { 2 } else { 4 };
    let mid = (am - p.alpha) / (Q::from_integer(denom_factor) * (Q::one() - am));
    let rate =
        applicable.then(|| Rate::power(qmin(&[p.lambda, mid, (am + p.alpha) / Q::from_integer(2)])));
    Ok(Classification {
        theorem: Theorem::FadingI,
        applicable,
        conditions,
        rate,
        note: (p.m == 4).then(|| format!("free parameter alpha_4 = {}", q_str(am))),
    })
}

/// Fading II: conditions
/// `(i) lambda > 0` and
/// `(ii) {0 <= alpha <= (m-2)/m and lambda < 1} or
///       {(m-2)/m <= alpha < 1 and lambda < (m-1) - m alpha}`;
/// rate exponent `min{lambda, (-lambda + (m-1) - m alpha)/2, (1-lambda)/2}`.
pub fn classify_fading2(p: &ParamPoint) -> Result<Classification, RegimeError> {
    let m = Q::from_integer(p.m as i64);
    let mm2_over_m = (m - Q::from_integer(2)) / m;
    let slack = m - Q::one() - m * p.alpha;
    let branch_low = p.alpha <= mm2_over_m && p.lambda < Q::one();
    let branch_high = p.alpha >= mm2_over_m && p.lambda < slack;
    let conditions = vec![
        cond("scale = power", p.scale == Scale::Power),
        cond("lambda > 0", p.lambda > Q::zero()),
        cond(
            "(alpha <= (m-2)/m and lambda < 1) or (alpha >= (m-2)/m and lambda < (m-1)-m alpha)",
            branch_low || branch_high,
        ),
    ];
    let applicable = conditions.iter().all(|c| c.1);
    let rate = applicable.then(|| {
        Rate::power(qmin(&[
            p.lambda,
            (slack - p.lambda) / Q::from_integer(2),
            (Q::one() - p.lambda) / Q::from_integer(2),
        ]))
    });
    Ok(Classification { theorem: Theorem::FadingII, applicable, conditions, rate, note: None })
}

/// Exact rational asymptotic exponents of the delta-family (power scale).
struct QDeltaExponents {
    ball: Q,
    handle: Q,
    perp: Q,
    antisym: Q,
}

fn q_delta_exponents(m: u32, alpha: Q, lambda: Q) -> QDeltaExponents {
    let two = Q::from_integer(2);
    let mq = Q::from_integer(m as i64);
    let p = (mq * (Q::one() - alpha)).min(two);
    let lam_m1_min0 = (lambda - Q::one()).min(Q::zero());
    let ball = p / two;
    let harm = (lam_m1_min0 + p) / two;
    let handle = lambda.min(harm);
    let perp = ((Q::one() - lambda).min(Q::zero()) + p) / two;
    let antisym = (lam_m1_min0 + mq * alpha - (mq - two)) / two;
    QDeltaExponents { ball, handle, perp, antisym }
}

/// Adhering (general): the five conditions of the adhering corollary.  The
/// rate exponent is derived from the total-error formula
/// `O(delta_antisym/sqrt(eps~) + sqrt(eps~)) + O(C_m) + O(delta_handle) +
/// O(delta_harm_perp)` with `eps~ = eps^alpha r1`, expressed through the
/// delta-family exponents (power part only; at `m = 2` log factors are
/// dropped from the exponent).
pub fn classify_adhering(p: &ParamPoint) -> Result<Classification, RegimeError> {
    let m = Q::from_integer(p.m as i64);
    let one = Q::one();
    let two = Q::from_integer(2);
    let lam = p.lambda;
    let al = p.alpha;
    let branch = (lam < one || al >= (m - two) / (m - one))
        && (lam > one || lam > (m - one) * (one - al));
    let conditions = vec![
        cond("scale = power", p.scale == Scale::Power),
        cond("0 <= alpha < 1", al >= Q::zero() && al < one),
        cond("lambda > 0", lam > Q::zero()),
        cond("lambda > m alpha - (m-1)", lam > m * al - (m - one)),
        cond(
            "if lambda >= 1 then alpha >= (m-2)/(m-1); if lambda <= 1 then lambda > (m-1)(1-alpha)",
            branch,
        ),
        cond("lambda < (m+1) - m alpha", lam < m + one - m * al),
    ];
    let applicable = conditions.iter().all(|c| c.1);
    let rate = applicable.then(|| {
        let e = q_delta_exponents(p.m, al, lam);
        let half_alpha = al / two;
        Rate::power(qmin(&[e.antisym - half_alpha, half_alpha, e.ball, e.handle, e.perp]))
    });
    Ok(Classification {
        theorem: Theorem::AdheringGeneral,
        applicable,
        conditions,
        rate,
        note: Some("limit operator: weighted Kirchhoff identification of the two regions".into()),
    })
}

/// Adhering with two identical copies; strictly weaker conditions than the
/// general adhering case.
pub fn classify_adhering_two_copies(p: &ParamPoint) -> Result<Classification, RegimeError> {
    let m = Q::from_integer(p.m as i64);
    let one = Q::one();
    let two = Q::from_integer(2);
    let lam = p.lambda;
    let al = p.alpha;
    let branch = (lam < one || al >= (m - two) / m) && (lam > one || lam > m - one - m * al);
    let conditions = vec![
        cond("scale = power", p.scale == Scale::Power),
        cond("0 <= alpha < 1", al >= Q::zero() && al < one),
        cond("lambda > 0", lam > Q::zero()),
        cond("lambda > m alpha - (m-1)", lam > m * al - (m - one)),
        cond(
            "if lambda >= 1 then alpha >= (m-2)/m; if lambda <= 1 then lambda > m-1-m alpha",
            branch,
        ),
        cond("lambda < (m+1) - m alpha", lam < m + one - m * al),
    ];
    let applicable = conditions.iter().all(|c| c.1);
    let rate = applicable.then(|| {
        let e = q_delta_exponents(p.m, al, lam);
        Rate::power(qmin(&[e.antisym, e.ball, e.handle, e.perp]))
    });
    Ok(Classification {
        theorem: Theorem::AdheringTwoCopies,
        applicable,
        conditions,
        rate,
        note: None,
    })
}

/// Full regime report at one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeReport {
    pub m: u32,
    pub alpha: String,
    pub lambda: String,
    pub scale: Scale,
    pub alpha_m: String,
    pub alpha_star: String,
    pub classifications: Vec<Classification>,
    /// Fading-I rate with the proof's `gamma_m = 1/(2(1-alpha_m))` instead
    /// of the corollary's denominator (the two differ; both are reported).
    pub fading1_rate_proof_gamma: Option<Rate>,
    pub best: Option<(Theorem, Rate)>,
    pub uncovered: bool,
    /// Set when the point lies on the coupled-operator boundary segment
    /// C-E-F of the two-copy comparison figure (out of scope here).
    pub coupled_boundary_case: bool,
}

/// Options of [`build_report`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub alpha4_choice: Option<Q>,
    pub use_proof_gamma: bool,
}

/// Runs all four classifiers and aggregates the report.
pub fn build_report(p: &ParamPoint, opts: &ReportOptions) -> Result<RegimeReport, RegimeError> {
    let f1 = classify_fading1(p, opts.alpha4_choice, opts.use_proof_gamma)?;
    let f1_proof = classify_fading1(p, opts.alpha4_choice, true)?;
    let f2 = classify_fading2(p)?;
    let a3 = classify_adhering(p)?;
    let a4 = classify_adhering_two_copies(p)?;
    let classifications = vec![f1, f2, a3, a4];
    let mut best: Option<(Theorem, Rate)> = None;
    for c in &classifications {
        if let (true, Some(rate)) = (c.applicable, &c.rate) {
            let better = match &best {
                None => true,
                Some((bt, br)) => {
                    let (ka, ea) = rate.speed_key();
                    let (kb, eb) = br.speed_key();
                    (ka, ea) > (kb, eb)
                        || ((ka, ea) == (kb, eb) && c.theorem.tie_rank() < bt.tie_rank())
                }
            };
            if better {
                best = Some((c.theorem, rate.clone()));
            }
        }
    }
    let uncovered = classifications.iter().all(|c| !c.applicable);
    Ok(RegimeReport {
        m: p.m,
        alpha: q_str(p.alpha),
        lambda: q_str(p.lambda),
        scale: p.scale,
        alpha_m: q_str(alpha_m(p.m, opts.alpha4_choice)?),
        alpha_star: q_str(alpha_star(p.m, opts.alpha4_choice)?),
        classifications,
        fading1_rate_proof_gamma: f1_proof.rate,
        best,
        uncovered,
        coupled_boundary_case: kh_segment_contains(p.m, p.alpha, p.lambda),
    })
}

/// The coupled-operator boundary polyline C-E-F of the two-copy comparison:
/// the segment from `C = ((m-1)/m, 0)` to `E = ((m-2)/m, 1)` followed by the
/// vertical ray `alpha = (m-2)/m`, `lambda >= 1`.
pub fn kh_segment_contains(m: u32, alpha: Q, lambda: Q) -> bool {
    let mq = Q::from_integer(m as i64);
    let one = Q::one();
    let on_ce = lambda >= Q::zero() && lambda <= one && lambda == (mq - one) - mq * alpha;
    let on_ef = alpha == (mq - Q::from_integer(2)) / mq && lambda >= one;
    on_ce || on_ef
}

/// Figures whose named points [`region_vertices`] reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    /// Fading-I parameter range.
    FadingI,
    /// Comparison of the two fading results.
    FadingCompare,
    /// General adhering range.
    Adhering,
    /// Two-copy adhering range.
    AdheringSimple,
    /// Per-delta-constant convergence ranges.
    DeltaRanges,
}

impl Figure {
    pub fn parse(s: &str) -> Option<Figure> {
        Some(match s {
            "fading1" | "fading_i" => Figure::FadingI,
            "fading_compare" | "fading" => Figure::FadingCompare,
            "adhering" => Figure::Adhering,
            "adhering_simple" | "two_copies" => Figure::AdheringSimple,
            "delta_ranges" | "delta" => Figure::DeltaRanges,
            _ => return None,
        })
    }
}

/// A coordinate that may be infinite (open vertical rays in the figures).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Coord {
    Finite(String),
    Infinity,
}

impl Coord {
    fn fin(x: Q) -> Coord {
        Coord::Finite(q_str(x))
    }

    pub fn rational(&self) -> Option<Q> {
        match self {
            Coord::Finite(s) => parse_rational(s).ok(),
            Coord::Infinity => None,
        }
    }
}

/// A named `(alpha, lambda)` vertex of one of the parameter-range figures.
#[derive(Debug, Clone, Serialize)]
pub struct NamedPoint {
    pub name: String,
    pub alpha: String,
    pub lambda: Coord,
}

fn np(name: &str, alpha: Q, lambda: Q) -> NamedPoint {
    NamedPoint { name: name.into(), alpha: q_str(alpha), lambda: Coord::fin(lambda) }
}

fn np_inf(name: &str, alpha: Q) -> NamedPoint {
    NamedPoint { name: name.into(), alpha: q_str(alpha), lambda: Coord::Infinity }
}

/// Exact rational coordinates of the named points of the requested figure.
pub fn region_vertices(
    m: u32,
    figure: Figure,
    alpha4_choice: Option<Q>,
) -> Result<Vec<NamedPoint>, RegimeError> {
    if m < 2 {
        return Err(RegimeError::Dimension(m));
    }
    let mq = Q::from_integer(m as i64);
    let one = Q::one();
    let two = Q::from_integer(2);
    let three = Q::from_integer(3);
    let am = alpha_m(m, alpha4_choice)?;
    let astar = alpha_star(m, alpha4_choice)?;
    Ok(match figure {
        Figure::FadingI | Figure::FadingCompare => {
            let mut pts = vec![
                np("C", (mq - two) / mq, Q::zero()),
                np("C'", am, Q::zero()),
                np("C^", (mq - two) / mq, q(1, 3)),
                np("D", Q::zero(), Q::zero()),
                np("D'", Q::zero(), one),
                np("D-", Q::zero(), am / two),
                np("D^", Q::zero(), q(1, 3)),
                np("E", (mq - two) / mq, one),
                np("E'", am, one),
                np("H", astar, am / (two - am)),
            ];
            if figure == Figure::FadingCompare {
                pts.push(np("D+", Q::zero(), one - am));
                pts.push(np("H+", astar, (two - three * am) / (two - am)));
                pts.push(np_inf("F", (mq - two) / mq));
            }
            pts
        }
        Figure::Adhering | Figure::AdheringSimple => {
            let mut pts = vec![
                np_inf("A", one),
                np("B", one, one),
                np("C", (mq - one) / mq, Q::zero()),
                np("D", Q::zero(), Q::zero()),
                np("D'", Q::zero(), one),
                np("E", (mq - two) / mq, one),
                np_inf("F", (mq - two) / mq),
            ];
            if figure == Figure::Adhering {
                pts.push(np(
                    "C~",
                    two * (mq - one) / (two * mq - one),
                    (mq - one) / (two * mq - one),
                ));
                pts.push(np("E~", (mq - two) / (mq - one), one));
                pts.push(np("F~", (mq - two) / (mq - one), (two * mq - one) / (mq - one)));
            } else {
                pts.push(np("F'", (mq - two) / mq, three));
            }
            pts
        }
        Figure::DeltaRanges => vec![
            np("B", one, one),
            np("C", (mq - one) / mq, Q::zero()),
            np("D", Q::zero(), Q::zero()),
            np("D'", Q::zero(), one),
            np("E", (mq - two) / mq, one),
            np("F'", (mq - two) / mq, three),
            np("G'", Q::zero(), three),
        ],
    })
}

/// Looks one named point up in a figure.
pub fn region_vertex(
    m: u32,
    figure: Figure,
    name: &str,
    alpha4_choice: Option<Q>,
) -> Result<NamedPoint, RegimeError> {
    region_vertices(m, figure, alpha4_choice)?
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| RegimeError::UnknownPoint(name.to_string(), figure))
}

/// Vertices `B, F~, E~, C~` of the general adhering region.
pub fn adhering_polygon(m: u32) -> Result<[(Q, Q); 4], RegimeError> {
    if m < 2 {
        return Err(RegimeError::Dimension(m));
    }
    let mq = Q::from_integer(m as i64);
    let one = Q::one();
    let two = Q::from_integer(2);
    Ok([
        (one, one),
        ((mq - two) / (mq - one), (two * mq - one) / (mq - one)),
        ((mq - two) / (mq - one), one),
        (two * (mq - one) / (two * mq - one), (mq - one) / (two * mq - one)),
    ])
}

/// Membership in the adhering region described by the polygon `B-F~-E~-C~`:
/// the open interior plus the open edge `F~E~` (the corollary's non-strict
/// `alpha >= (m-2)/(m-1)` branch at `lambda > 1`).
pub fn adhering_polygon_contains(m: u32, alpha: Q, lambda: Q) -> Result<bool, RegimeError> {
    let poly = adhering_polygon(m)?;
    // strict interior of the convex polygon, traversed B -> F~ -> E~ -> C~
    // (counterclockwise: every point strictly left of each directed edge)
    let mut strictly_inside = true;
    for i in 0..4 {
        let (x1, y1) = poly[i];
        let (x2, y2) = poly[(i + 1) % 4];
        let cross = (x2 - x1) * (lambda - y1) - (y2 - y1) * (alpha - x1);
        if cross <= Q::zero() {
            strictly_inside = false;
            break;
        }
    }
    if strictly_inside {
        return Ok(true);
    }
    let mq = Q::from_integer(m as i64);
    let edge_alpha = (mq - Q::from_integer(2)) / (mq - Q::one());
    let edge_top = (Q::from_integer(2) * mq - Q::one()) / (mq - Q::one());
    Ok(alpha == edge_alpha && lambda > Q::one() && lambda < edge_top)
}

/// Counts cells where the rasterized classifier disagrees with the polygon
/// membership, on the grid `alpha = i/res`, `lambda = j/res`.
pub fn rasterize_adhering_mismatches(m: u32, res: i64) -> Result<usize, RegimeError> {
    let lambda_max = 3 * res + res / 2;
    let mut mismatches = 0;
    for i in 0..=res {
        for j in 1..=lambda_max {
            let alpha = q(i, res);
            let lambda = q(j, res);
            if alpha >= Q::one() {
                // classifier domain ends at alpha < 1; the polygon corner B
                // sits on alpha = 1 and is excluded as well
                continue;
            }
            let p = ParamPoint::power(m, alpha, lambda)?;
            let class = classify_adhering(&p)?.applicable;
            let poly = adhering_polygon_contains(m, alpha, lambda)?;
            if class != poly {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches)
}

/// Inputs of [`error_estimate`] beyond the parameter point.
#[derive(Debug, Clone, Copy)]
pub struct ErrorInputs {
    /// Handle radius.
    pub eps: f64,
    /// Neighbourhood width for the adhering tubular term; defaults to
    /// `eta/3`.
    pub eps_tilde: Option<f64>,
    pub mc: ManifoldConstants,
}

/// Evaluated total error with its per-term breakdown.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorEstimate {
    pub theorem: Theorem,
    pub total: f64,
    pub dominant: String,
    pub terms: Vec<(String, f64)>,
    pub delta: DeltaBundle,
}

/// Evaluates the explicit error formula of the given theorem at the implied
/// geometry `eta = eps^alpha r0` (or the log scale for fading I at `m = 2`),
/// `ell = eps^lambda`.
pub fn error_estimate(
    theorem: Theorem,
    p: &ParamPoint,
    inputs: &ErrorInputs,
) -> Result<ErrorEstimate, RegimeError> {
    let applicable = match theorem {
        Theorem::FadingI => classify_fading1(p, None, false)?.applicable,
        Theorem::FadingII => classify_fading2(p)?.applicable,
        Theorem::AdheringGeneral => classify_adhering(p)?.applicable,
        Theorem::AdheringTwoCopies => classify_adhering_two_copies(p)?.applicable,
    };
    if !applicable {
        return Err(RegimeError::NotApplicable(theorem));
    }
    let eps = inputs.eps;
    let mc = inputs.mc;
    let alpha = q_f64(p.alpha);
    let lambda = q_f64(p.lambda);
    let ell = eps.powf(lambda);
    let eta = match p.scale {
        Scale::Power => eps.powf(alpha) * mc.r0,
        Scale::Log => (-eps.ln()).powf(-alpha) * mc.r0,
    };
    let geom = HandleGeometry::new(p.m, eps, ell, eta, mc)?;
    let delta = delta_bundle(&geom)?;
    let c_ellreg = mc.c_ellreg();
    let c_m = delta.delta_ball;
    let terms: Vec<(String, f64)> = match theorem {
        Theorem::FadingI => {
            let am = q_f64(alpha_m(p.m, None)?);
            let zeta = if p.m >= 3 { eps.powf(am) } else { (-eps.ln()).powf(-0.5) };
            let omega = zeta / eta;
            let gamma_m = if p.m == 2 { 0.5 } else { 1.0 / (2.0 * (1.0 - am)) };
            let eps_plus = omega.sqrt() * eta;
            let bracket = if p.m == 2 { (-eps_plus.ln()).max(1.0) } else { 1.0 };
            vec![
                ("ell".into(), ell),
                ("omega^gamma_m".into(), omega.powf(gamma_m)),
                ("cutoff".into(), eps_plus * bracket.sqrt()),
            ]
        }
        Theorem::FadingII => vec![
            ("C_ellreg delta_handle".into(), c_ellreg * delta.delta_handle),
            (
                "C_ellreg (delta_harm' + C_ext C_m)".into(),
                c_ellreg * (delta.delta_harm_prime + mc.c_ext * c_m),
            ),
        ],
        Theorem::AdheringGeneral | Theorem::AdheringTwoCopies => {
            let da = delta.delta_antisym;
            let mut t = vec![
                ("C_m".into(), c_m),
                ("delta_antisym + delta_handle".into(), da + delta.delta_handle),
                ("delta_harm".into(), delta.delta_harm),
                ("delta_antisym + C_ext C_m".into(), da + mc.c_ext * c_m),
            ];
            let tub = if theorem == Theorem::AdheringGeneral {
                let eps_tilde = inputs.eps_tilde.unwrap_or(eta / 3.0);
                std::f64::consts::SQRT_2
                    * mc.c_nbhd
                    * (2.0 * da * da / eps_tilde + eps_tilde).sqrt()
            } else {
                2.0 * mc.c_nbhd * da
            };
            t.push((
                "C_ellreg (tubular + delta_harm_perp + C_ext C_m)".into(),
                c_ellreg * (tub + delta.delta_harm_perp + mc.c_ext * c_m),
            ));
            t
        }
    };
    let total = match theorem {
        Theorem::FadingI => terms.iter().map(|t| t.1).sum(),
        _ => terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max),
    };
    let dominant = terms
        .iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap()
        .0
        .clone();
    Ok(ErrorEstimate { theorem, total, dominant, terms, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handles::fit_loglog_slope;

    fn pt(m: u32, a: Q, l: Q) -> ParamPoint {
        ParamPoint::power(m, a, l).unwrap()
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("0.55").unwrap(), q(11, 20));
        assert_eq!(parse_rational("2").unwrap(), Q::from_integer(2));
        assert_eq!(parse_rational("-1/3").unwrap(), q(-1, 3));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn alpha_m_values() {
        assert_eq!(alpha_m(3, None).unwrap(), q(1, 3));
        assert_eq!(alpha_m(7, None).unwrap(), q(1, 2));
        assert_eq!(alpha_m(2, None).unwrap(), q(1, 2));
        assert_eq!(alpha_m(4, Some(q(49, 100))).unwrap(), q(49, 100));
        assert_eq!(alpha_m(4, None).unwrap(), q(49, 100));
        assert!(alpha_m(4, Some(q(1, 2))).is_err());
    }

    #[test]
    fn alpha_star_values() {
        assert_eq!(alpha_star(3, None).unwrap(), q(1, 15));
        for m in 5..=9 {
            assert_eq!(alpha_star(m, None).unwrap(), q(1, 6));
        }
        let a4 = alpha_star(4, Some(q(49, 100))).unwrap();
        assert_eq!(a4, q(49 * 49, 100 * 151));
    }

    #[test]
    fn fading1_examples() {
        // m=3, alpha=0, lambda=2: min{2, 1/8, 1/6} = 1/8
        let c = classify_fading1(&pt(3, q(0, 1), q(2, 1)), None, false).unwrap();
        assert!(c.applicable);
        assert_eq!(c.rate.unwrap().exponent().unwrap(), q(1, 8));
        // proof gamma variant: middle entry doubles to 1/4, min = 1/6
        let c = classify_fading1(&pt(3, q(0, 1), q(2, 1)), None, true).unwrap();
        assert_eq!(c.rate.unwrap().exponent().unwrap(), q(1, 6));
        // boundary alpha = alpha_m excluded
        let c = classify_fading1(&pt(3, q(1, 3), q(1, 1)), None, false).unwrap();
        assert!(!c.applicable);
        // m=5, alpha=3/10, lambda=1: min{1, 1/10, 2/5} = 1/10
        let c = classify_fading1(&pt(5, q(3, 10), q(1, 1)), None, false).unwrap();
        assert_eq!(c.rate.unwrap().exponent().unwrap(), q(1, 10));
        // m=2 needs the log scale
        let c = classify_fading1(&pt(2, q(1, 4), q(1, 1)), None, false).unwrap();
        assert!(!c.applicable);
        let p2 = ParamPoint::new(2, q(1, 4), q(1, 1), Scale::Log).unwrap();
        let c = classify_fading1(&p2, None, false).unwrap();
        assert!(c.applicable);
        match c.rate.unwrap() {
            Rate::LogRate { log_power, loglog_power } => {
                assert_eq!(parse_rational(&log_power).unwrap(), q(3, 8));
                assert_eq!(parse_rational(&loglog_power).unwrap(), q(1, 2));
            }
            _ => panic!("expected log rate"),
        }
    }

    #[test]
    fn fading2_examples() {
        // m=3, alpha=0, lambda=1/2: min{1/2, 3/4, 1/4} = 1/4
        let c = classify_fading2(&pt(3, q(0, 1), q(1, 2))).unwrap();
        assert!(c.applicable);
        assert_eq!(c.rate.unwrap().exponent().unwrap(), q(1, 4));
        // lambda = 1 excluded in the low-alpha branch
        let c = classify_fading2(&pt(3, q(0, 1), q(1, 1))).unwrap();
        assert!(!c.applicable);
        // m=4, alpha=3/5, lambda=1/2: lambda < 3 - 12/5 = 3/5; exponent 1/20
        let c = classify_fading2(&pt(4, q(3, 5), q(1, 2))).unwrap();
        assert!(c.applicable);
        assert_eq!(c.rate.unwrap().exponent().unwrap(), q(1, 20));
    }

    #[test]
    fn adhering_examples() {
        // m=3, alpha=4/5, lambda=1: applicable
        let c = classify_adhering(&pt(3, q(4, 5), q(1, 1))).unwrap();
        assert!(c.applicable);
        // m=3, alpha=3/10, lambda=1: fails the lambda >= 1 branch
        let c = classify_adhering(&pt(3, q(3, 10), q(1, 1))).unwrap();
        assert!(!c.applicable);
        // two copies is weaker: alpha = 2/5 >= 1/3 works there
        let c = classify_adhering_two_copies(&pt(3, q(2, 5), q(1, 1))).unwrap();
        assert!(c.applicable);
        let c = classify_adhering(&pt(3, q(2, 5), q(1, 1))).unwrap();
        assert!(!c.applicable);
        // m=2, alpha=1/10, lambda=9/10: two-copy case applies
        let c = classify_adhering_two_copies(&pt(2, q(1, 10), q(9, 10))).unwrap();
        assert!(c.applicable);
    }

    #[test]
    fn nesting_on_dense_grid() {
        for m in 2..=6 {
            for i in 0..40 {
                for j in 1..=140 {
                    let p = pt(m, q(i, 40), q(j, 40));
                    let gen = classify_adhering(&p).unwrap().applicable;
                    let two = classify_adhering_two_copies(&p).unwrap().applicable;
                    assert!(!gen || two, "m={m} alpha={}/40 lambda={}/40", i, j);
                }
            }
        }
    }

    #[test]
    fn uncovered_example() {
        // m=5, alpha=0.55, lambda=1: the dotted region
        let p = pt(5, q(11, 20), q(1, 1));
        let r = build_report(&p, &ReportOptions::default()).unwrap();
        assert!(r.uncovered);
        assert!(r.best.is_none());
    }

    #[test]
    fn report_best_and_tie_break() {
        // deep fading point: fading II beats fading I
        let p = pt(3, q(0, 1), q(1, 2));
        let r = build_report(&p, &ReportOptions::default()).unwrap();
        let (thm, rate) = r.best.unwrap();
        assert_eq!(thm, Theorem::FadingII);
        assert_eq!(rate.exponent().unwrap(), q(1, 4));
        assert!(!r.uncovered);
        // adhering point
        let p = pt(3, q(4, 5), q(1, 1));
        let r = build_report(&p, &ReportOptions::default()).unwrap();
        let (thm, _) = r.best.unwrap();
        assert!(matches!(thm, Theorem::AdheringTwoCopies | Theorem::AdheringGeneral));
    }

    #[test]
    fn vertices_examples() {
        let h = region_vertex(3, Figure::FadingI, "H", None).unwrap();
        assert_eq!(parse_rational(&h.alpha).unwrap(), q(1, 15));
        assert_eq!(h.lambda.rational().unwrap(), q(1, 5));
        let e = region_vertex(5, Figure::FadingI, "E", None).unwrap();
        assert_eq!(parse_rational(&e.alpha).unwrap(), q(3, 5));
        assert_eq!(e.lambda.rational().unwrap(), q(1, 1));
        let et = region_vertex(4, Figure::Adhering, "E~", None).unwrap();
        assert_eq!(parse_rational(&et.alpha).unwrap(), q(2, 3));
        assert_eq!(et.lambda.rational().unwrap(), q(1, 1));
        // m=3 adhering corners
        let b = region_vertex(3, Figure::Adhering, "B", None).unwrap();
        assert_eq!(parse_rational(&b.alpha).unwrap(), q(1, 1));
        let ct = region_vertex(3, Figure::Adhering, "C~", None).unwrap();
        assert_eq!(parse_rational(&ct.alpha).unwrap(), q(4, 5));
        assert_eq!(ct.lambda.rational().unwrap(), q(2, 5));
        let ft = region_vertex(3, Figure::Adhering, "F~", None).unwrap();
        assert_eq!(parse_rational(&ft.alpha).unwrap(), q(1, 2));
        assert_eq!(ft.lambda.rational().unwrap(), q(5, 2));
        // A and F are at infinity
        let a = region_vertex(3, Figure::Adhering, "A", None).unwrap();
        assert_eq!(a.lambda, Coord::Infinity);
        // G' in the delta-ranges figure
        let g = region_vertex(3, Figure::DeltaRanges, "G'", None).unwrap();
        assert_eq!(parse_rational(&g.alpha).unwrap(), q(0, 1));
        assert_eq!(g.lambda.rational().unwrap(), q(3, 1));
        assert!(region_vertex(3, Figure::FadingI, "Z", None).is_err());
    }

    #[test]
    fn polygon_matches_classifier_small_grid() {
        for m in 2..=6 {
            assert_eq!(rasterize_adhering_mismatches(m, 50).unwrap(), 0, "m={m}");
        }
    }

    #[test]
    fn kh_segment() {
        // segment CE at m=3: lambda = 2 - 3 alpha for lambda in [0,1]
        assert!(kh_segment_contains(3, q(1, 2), q(1, 2)));
        assert!(kh_segment_contains(3, q(1, 3), q(1, 1)));
        assert!(kh_segment_contains(3, q(1, 3), q(5, 2)));
        assert!(!kh_segment_contains(3, q(1, 2), q(1, 4)));
    }

    #[test]
    fn error_estimate_fading2_dominant_handle() {
        // long handles (small lambda): the delta_handle term dominates
        let p = pt(3, q(0, 1), q(1, 20));
        let inputs = ErrorInputs { eps: 1e-3, eps_tilde: None, mc: ManifoldConstants::flat() };
        let e = error_estimate(Theorem::FadingII, &p, &inputs).unwrap();
        assert_eq!(e.dominant, "C_ellreg delta_handle");
        let want = inputs.mc.c_ellreg() * e.delta.delta_handle;
        assert!((e.total - want).abs() < 1e-14 * want);
    }

    #[test]
    fn error_estimate_adhering_value() {
        let p = pt(3, q(4, 5), q(1, 1));
        let inputs = ErrorInputs { eps: 1e-4, eps_tilde: None, mc: ManifoldConstants::flat() };
        let e = error_estimate(Theorem::AdheringGeneral, &p, &inputs).unwrap();
        // manual recomputation of the tubular term with eps~ = eta/3
        let eta = 1e-4f64.powf(0.8);
        let da = e.delta.delta_antisym;
        let tub = std::f64::consts::SQRT_2 * (2.0 * da * da / (eta / 3.0) + eta / 3.0).sqrt();
        let last = 2.0 * (tub + e.delta.delta_harm_perp + e.delta.delta_ball);
        assert!((e.terms.last().unwrap().1 - last).abs() < 1e-12 * last.abs());
        assert!(e.total >= last * (1.0 - 1e-15));
    }

    #[test]
    fn error_estimate_vanishes_with_eps() {
        let p = pt(3, q(4, 5), q(1, 1));
        let mut prev = f64::INFINITY;
        for &eps in &[1e-2, 1e-3, 1e-4, 1e-5] {
            let inputs = ErrorInputs { eps, eps_tilde: None, mc: ManifoldConstants::flat() };
            let e = error_estimate(Theorem::AdheringTwoCopies, &p, &inputs).unwrap();
            assert!(e.total < prev);
            prev = e.total;
        }
        // inapplicable theorem errors out
        let inputs = ErrorInputs { eps: 1e-3, eps_tilde: None, mc: ManifoldConstants::flat() };
        assert!(error_estimate(Theorem::FadingII, &pt(3, q(0, 1), q(2, 1)), &inputs).is_err());
    }

    #[test]
    fn error_rate_matches_fading2_exponent() {
        // fitted slope of the fading-II error against eps matches the
        // classified exponent 1/4 at (3, 0, 1/2)
        let p = pt(3, q(0, 1), q(1, 2));
        let want = q_f64(classify_fading2(&p).unwrap().rate.unwrap().exponent().unwrap());
        let mc = ManifoldConstants { r0: 0.5, ..ManifoldConstants::flat() };
        let eps_grid: Vec<f64> = (0..9).map(|i| 1e-9 * 10f64.powf(i as f64 / 4.0)).collect();
        let totals: Vec<f64> = eps_grid
            .iter()
            .map(|&eps| {
                error_estimate(Theorem::FadingII, &p, &ErrorInputs { eps, eps_tilde: None, mc })
                    .unwrap()
                    .total
            })
            .collect();
        let (slope, _) = fit_loglog_slope(&eps_grid, &totals);
        assert!((slope - want).abs() < 0.05, "slope {slope} want {want}");
    }

    proptest::proptest! {
        #[test]
        fn nesting_random(m in 2u32..7, an in 0i64..60, ld in 1i64..200) {
            let p = pt(m, q(an, 60), q(ld, 60));
            let gen = classify_adhering(&p).unwrap().applicable;
            let two = classify_adhering_two_copies(&p).unwrap().applicable;
            proptest::prop_assert!(!gen || two);
        }

        #[test]
        fn polygon_matches_classifier_random(m in 2u32..7, an in 0i64..997, ld in 1i64..3300) {
            let alpha = q(an, 997);
            let lambda = q(ld, 997);
            let p = pt(m, alpha, lambda);
            let class = classify_adhering(&p).unwrap().applicable;
            let poly = adhering_polygon_contains(m, alpha, lambda).unwrap();
            proptest::prop_assert_eq!(class, poly);
        }
    }

    #[test]
    fn param_validation() {
        assert!(ParamPoint::power(1, q(0, 1), q(1, 1)).is_err());
        assert!(ParamPoint::power(3, q(1, 1), q(1, 1)).is_err());
        assert!(ParamPoint::power(3, q(1, 2), q(0, 1)).is_err());
        assert!(ParamPoint::new(3, q(1, 2), q(1, 1), Scale::Log).is_err());
    }
}
