//! Batch front-end shared by the `wormholes` binary and the examples:
//! computes constants and delta-bundles, classifies regimes, emits region
//! polygons/rasters, runs spectral sweeps from declarative configs, and
//! hosts the named verification suites.
//!
//! All records embed a configuration echo (including the ledgered defaults:
//! the `alpha_4` choice, the asymptotic threshold `eta_m`, and the fading-I
//! exponent-discrepancy flag) under schema version `"1"`.  Summaries are
//! JSON; trajectories and rasters are CSV with 17-significant-digit floats,
//! so identical configs and seeds reproduce byte-identical outputs.

use crate::constants::{
    dtn_sphere_eigenvalue, log2_bracket, nonconc_asymptotic, nonconc_const, ode_oracle,
    trace_const_annulus, trace_const_asymptotic, trace_const_ball, trace_const_full,
    trace_const_full_ik, verify_muf, ConstantsError, ManifoldConstants, DEFAULT_ETA_M,
};
use crate::handles::{
    delta_bundle, delta_orders, delta_slopes, mode_energy_sq, mode_l2_norm_sq, DeltaBundle,
    DeltaOrders, HandleError, HandleGeometry, ModeBoundaryData,
};
use crate::ode::RadialBc;
use crate::regimes::{
    self, adhering_polygon_contains, alpha4_default, build_report, classify_adhering,
    error_estimate, parse_rational, q_f64, q_str, region_vertices, ErrorEstimate, ErrorInputs,
    Figure, NamedPoint, ParamPoint, Q, RegimeError, RegimeReport, ReportOptions, Scale,
};
use crate::spectra::{
    adhering_sweep, fading_sweep, AdheringConfig, FadingConfig, SpectraError, SweepOutcome,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Environment variable selecting the default output directory.
pub const OUT_DIR_ENV: &str = "WORMHOLES_OUT_DIR";

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad parameters or configuration; the message names the field.
    #[error("validation: {0}")]
    Validation(String),
    /// A numerical routine failed to converge or overflowed.
    #[error("numerical: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 for validation failures, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<crate::bessel::BesselError> for CliError {
    fn from(e: crate::bessel::BesselError) -> Self {
        use crate::bessel::BesselError as B;
        match e {
            B::Domain(..) | B::OrderOutOfRange(_) => CliError::Validation(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<ConstantsError> for CliError {
    fn from(e: ConstantsError) -> Self {
        match e {
            ConstantsError::Dimension(_)
            | ConstantsError::Radii(..)
            | ConstantsError::Radius(_)
            | ConstantsError::EtaThreshold(..)
            | ConstantsError::Positive(_)
            | ConstantsError::ManifoldConstants(_) => CliError::Validation(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<HandleError> for CliError {
    fn from(e: HandleError) -> Self {
        match e {
            HandleError::Constants(c) => CliError::from(c),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<RegimeError> for CliError {
    fn from(e: RegimeError) -> Self {
        match e {
            RegimeError::Handles(h) => CliError::from(h),
            RegimeError::Constants(c) => CliError::from(c),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        match e {
            SpectraError::NoConvergence { .. } | SpectraError::CgStall(_) => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Ledgered defaults echoed into every record.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub schema_version: &'static str,
    /// Free parameter `alpha_4 in (0, 1/2)`.
    pub alpha4_choice: String,
    /// Validity threshold of the asymptotic expansions.
    pub eta_m: f64,
    /// Whether fading-I exponents use the proof's `gamma_m` instead of the
    /// corollary's denominator.
    pub fading1_proof_gamma: bool,
    pub seed: u64,
}

impl ConfigEcho {
    pub fn new(alpha4: Option<Q>, eta_m: f64, proof_gamma: bool, seed: u64) -> Self {
        ConfigEcho {
            schema_version: SCHEMA_VERSION,
            alpha4_choice: q_str(alpha4.unwrap_or_else(alpha4_default)),
            eta_m,
            fading1_proof_gamma: proof_gamma,
            seed,
        }
    }
}

/// 17-significant-digit float formatting (round-trip exact).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Resolves the output directory: explicit flag, else `WORMHOLES_OUT_DIR`,
/// else the current directory.
pub fn out_dir(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

// ---------------------------------------------------------------------------
// constants command
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub annulus_relative_deviation: f64,
    pub ball_relative_deviation: f64,
    pub full_relative_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsRecord {
    pub config: ConfigEcho,
    pub m: u32,
    pub r: f64,
    pub eta: f64,
    /// Squared constants.
    pub trace_annulus: f64,
    pub trace_ball: f64,
    pub trace_full: f64,
    pub trace_full_ik_route: f64,
    pub nonconc: f64,
    pub trace_leading_term: f64,
    pub trace_remainder: f64,
    pub nonconc_leading_term: f64,
    pub nonconc_remainder: f64,
    /// `[log 1/r]_2`: present only at `m = 2`.
    pub log_bracket_term: f64,
    pub oracle: Option<OracleCheck>,
}

/// Computes the trace/non-concentration constants with their asymptotic
/// decomposition; `with_oracle` adds the ODE shooting cross-check.
pub fn cmd_constants(
    m: u32,
    r: f64,
    eta: f64,
    eta_m: f64,
    with_oracle: bool,
    seed: u64,
) -> Result<ConstantsRecord, CliError> {
    let trace_annulus = trace_const_annulus(m, r, eta)?;
    let trace_ball = trace_const_ball(m, r)?;
    let trace_full = trace_const_full(m, r, eta)?;
    let trace_full_ik_route = trace_const_full_ik(m, r, eta)?;
    let nonconc = nonconc_const(m, r, eta)?;
    let (t_lead, t_rem) = if eta < eta_m {
        let a = trace_const_asymptotic(m, r, eta, eta_m)?;
        (a.leading_term, a.remainder)
    } else {
        (f64::NAN, f64::NAN)
    };
    let (n_lead, n_rem) = if eta < eta_m {
        let a = nonconc_asymptotic(m, r, eta, eta_m)?;
        (a.leading_term, a.remainder)
    } else {
        (f64::NAN, f64::NAN)
    };
    let oracle = if with_oracle {
        let (_, fp) = ode_oracle(m, 0.0, r, eta, RadialBc::Annulus)?;
        let (_, gp) = ode_oracle(m, 0.0, r, eta, RadialBc::Ball)?;
        let ann = -1.0 / fp;
        let ball = 1.0 / gp;
        let full = 1.0 / (1.0 / ann + 1.0 / ball);
        Some(OracleCheck {
            annulus_relative_deviation: (trace_annulus - ann).abs() / ann,
            ball_relative_deviation: (trace_ball - ball).abs() / ball,
            full_relative_deviation: (trace_full - full).abs() / full,
        })
    } else {
        None
    };
    Ok(ConstantsRecord {
        config: ConfigEcho::new(None, eta_m, false, seed),
        m,
        r,
        eta,
        trace_annulus,
        trace_ball,
        trace_full,
        trace_full_ik_route,
        nonconc,
        trace_leading_term: t_lead,
        trace_remainder: t_rem,
        nonconc_leading_term: n_lead,
        nonconc_remainder: n_rem,
        log_bracket_term: log2_bracket(1.0 / r, m)?,
        oracle,
    })
}

// ---------------------------------------------------------------------------
// regime command
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct RegimeRecord {
    pub config: ConfigEcho,
    pub report: RegimeReport,
    /// Evaluated error formulas at a concrete `eps`, when requested.
    pub error_estimates: Vec<ErrorEstimate>,
}

/// Classifies a parameter point; when `eps` is given, evaluates the error
/// formula of every applicable theorem there.
pub fn cmd_regime(
    m: u32,
    alpha: &str,
    lambda: &str,
    scale: Scale,
    opts: &ReportOptions,
    eps: Option<f64>,
    mc: &ManifoldConstants,
    seed: u64,
) -> Result<RegimeRecord, CliError> {
    let alpha = parse_rational(alpha)?;
    let lambda = parse_rational(lambda)?;
    let point = ParamPoint::new(m, alpha, lambda, scale)?;
    let report = build_report(&point, opts)?;
    let mut error_estimates = Vec::new();
    if let Some(eps) = eps {
        let inputs = ErrorInputs { eps, eps_tilde: None, mc: *mc };
        for c in &report.classifications {
            if c.applicable {
                error_estimates.push(error_estimate(c.theorem, &point, &inputs)?);
            }
        }
    }
    Ok(RegimeRecord {
        config: ConfigEcho::new(opts.alpha4_choice, DEFAULT_ETA_M, opts.use_proof_gamma, seed),
        report,
        error_estimates,
    })
}

// ---------------------------------------------------------------------------
// region command
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct RegionRecord {
    pub config: ConfigEcho,
    pub m: u32,
    pub figure: Figure,
    pub vertices: Vec<NamedPoint>,
    pub resolution: i64,
    /// Mismatches between classifier raster and polygon membership
    /// (adhering figure only).
    pub raster_mismatches: Option<usize>,
}

/// Emits the named vertices of a figure plus, for the adhering figure, the
/// rasterized applicability grid as CSV (`alpha,lambda,applicable`).
pub fn cmd_region(
    m: u32,
    figure: Figure,
    resolution: i64,
    alpha4: Option<Q>,
    seed: u64,
) -> Result<(RegionRecord, String), CliError> {
    if resolution < 4 || resolution > 2000 {
        return Err(CliError::Validation(format!(
            "resolution {resolution} outside supported range [4, 2000]"
        )));
    }
    let vertices = region_vertices(m, figure, alpha4)?;
    let mut csv = String::from("alpha,lambda,applicable\n");
    let mut mismatches = None;
    if figure == Figure::Adhering || figure == Figure::AdheringSimple {
        let mut bad = 0usize;
        for i in 0..=resolution {
            for j in 1..=(3 * resolution + resolution / 2) {
                let alpha = regimes::q(i, resolution);
                let lambda = regimes::q(j, resolution);
                if alpha >= regimes::q(1, 1) {
                    continue;
                }
                let p = ParamPoint::power(m, alpha, lambda)?;
                let class = if figure == Figure::Adhering {
                    classify_adhering(&p)?.applicable
                } else {
                    regimes::classify_adhering_two_copies(&p)?.applicable
                };
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    q_str(alpha),
                    q_str(lambda),
                    if class { 1 } else { 0 }
                );
                if figure == Figure::Adhering
                    && class != adhering_polygon_contains(m, alpha, lambda)?
                {
                    bad += 1;
                }
            }
        }
        if figure == Figure::Adhering {
            mismatches = Some(bad);
        }
    }
    Ok((
        RegionRecord {
            config: ConfigEcho::new(alpha4, DEFAULT_ETA_M, false, seed),
            m,
            figure,
            vertices,
            resolution,
            raster_mismatches: mismatches,
        },
        csv,
    ))
}

// ---------------------------------------------------------------------------
// delta command
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct DeltaRecord {
    pub config: ConfigEcho,
    pub m: u32,
    pub alpha: f64,
    pub lambda: f64,
    pub mc: ManifoldConstants,
    pub eps_values: Vec<f64>,
    pub bundles: Vec<DeltaBundle>,
    pub orders: DeltaOrders,
    /// `(name, fitted slope, predicted exponent)` per delta-constant, when
    /// at least three eps values were supplied.
    pub fitted_slopes: Vec<(String, f64, f64)>,
}

/// Computes the delta-bundle over an `eps` grid plus the asymptotic orders
/// and fitted slopes.
pub fn cmd_delta(
    m: u32,
    alpha: f64,
    lambda: f64,
    eps_values: &[f64],
    mc: &ManifoldConstants,
    seed: u64,
) -> Result<DeltaRecord, CliError> {
    if eps_values.is_empty() {
        return Err(CliError::Validation("eps list must not be empty".into()));
    }
    let mut bundles = Vec::new();
    for &eps in eps_values {
        let geom = HandleGeometry::from_exponents(m, eps, alpha, lambda, *mc)?;
        bundles.push(delta_bundle(&geom)?);
    }
    let orders = delta_orders(m, alpha, lambda)?;
    let fitted_slopes = if eps_values.len() >= 3 {
        delta_slopes(m, alpha, lambda, mc, eps_values)?
            .into_iter()
            .map(|(n, s, w)| (n.to_string(), s, w))
            .collect()
    } else {
        Vec::new()
    };
    Ok(DeltaRecord {
        config: ConfigEcho::new(None, DEFAULT_ETA_M, false, seed),
        m,
        alpha,
        lambda,
        mc: *mc,
        eps_values: eps_values.to_vec(),
        bundles,
        orders,
        fitted_slopes,
    })
}

// ---------------------------------------------------------------------------
// sweep command
// ---------------------------------------------------------------------------

/// Declarative sweep description parsed from a plain `key = value` file.
///
/// Recognized keys (see the README for the schema): `kind`
/// (`adhering_two_tori` | `fading_two_tori`), `n`, `alpha`, `lambda`,
/// `cover_scale`, `placement_a`, `ring_cap`, `k`, `eps` (comma list),
/// `centers` (`x:y` pairs separated by `;`), `resolvent` (bool), `seed`,
/// `out_dir`.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: String,
    pub n: u32,
    pub alpha: f64,
    pub lambda: f64,
    pub cover_scale: f64,
    pub placement_a: f64,
    pub ring_cap: usize,
    pub k: usize,
    pub eps: Vec<f64>,
    pub centers: Vec<[f64; 2]>,
    pub resolvent: bool,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig {
            kind: String::new(),
            n: 48,
            alpha: 0.0,
            lambda: 1.0,
            cover_scale: 1.0,
            placement_a: 1.0 / (2.0 * 2.0f64.sqrt()),
            ring_cap: 64,
            k: 6,
            eps: Vec::new(),
            centers: Vec::new(),
            resolvent: false,
            seed: 0,
            out_dir: None,
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Validation(format!(
                    "config line {}: expected `key = value`, got {raw:?}",
                    lineno + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |field: &str| {
                CliError::Validation(format!("config field `{field}`: cannot parse {value:?}"))
            };
            match key {
                "kind" => cfg.kind = value.to_string(),
                "n" => cfg.n = value.parse().map_err(|_| bad("n"))?,
                "alpha" => cfg.alpha = parse_field_rational(value).ok_or_else(|| bad("alpha"))?,
                "lambda" => cfg.lambda = parse_field_rational(value).ok_or_else(|| bad("lambda"))?,
                "cover_scale" => cfg.cover_scale = value.parse().map_err(|_| bad("cover_scale"))?,
                "placement_a" => cfg.placement_a = value.parse().map_err(|_| bad("placement_a"))?,
                "ring_cap" => cfg.ring_cap = value.parse().map_err(|_| bad("ring_cap"))?,
                "k" => cfg.k = value.parse().map_err(|_| bad("k"))?,
                "eps" => {
                    for tok in value.split(',') {
                        cfg.eps.push(tok.trim().parse().map_err(|_| bad("eps"))?);
                    }
                }
                "centers" => {
                    for pair in value.split(';') {
                        let Some((x, y)) = pair.split_once(':') else {
                            return Err(bad("centers"));
                        };
                        cfg.centers.push([
                            x.trim().parse().map_err(|_| bad("centers"))?,
                            y.trim().parse().map_err(|_| bad("centers"))?,
                        ]);
                    }
                }
                "resolvent" => cfg.resolvent = value.parse().map_err(|_| bad("resolvent"))?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad("seed"))?,
                "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
                other => {
                    return Err(CliError::Validation(format!("unknown config field `{other}`")))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Validation(msg));
        match self.kind.as_str() {
            "adhering_two_tori" => {
                if !(0.0..1.0).contains(&self.alpha) {
                    return fail(format!("field `alpha` = {} outside [0, 1)", self.alpha));
                }
            }
            "fading_two_tori" => {
                if self.centers.is_empty() {
                    return fail("field `centers` must list at least one handle center".into());
                }
            }
            "" => return fail("field `kind` is required".into()),
            other => return fail(format!("field `kind` = {other:?} is not a known experiment")),
        }
        if self.lambda <= 0.0 {
            return fail(format!("field `lambda` = {} must be > 0", self.lambda));
        }
        if self.eps.len() < 2 {
            return fail("field `eps` needs at least two decreasing values".into());
        }
        if self.eps.windows(2).any(|w| w[1] >= w[0]) {
            return fail("field `eps` must be strictly decreasing".into());
        }
        if self.k < 2 {
            return fail(format!("field `k` = {} must be >= 2", self.k));
        }
        Ok(())
    }
}

fn parse_field_rational(s: &str) -> Option<f64> {
    parse_rational(s).ok().map(q_f64).or_else(|| s.parse().ok())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub config: ConfigEcho,
    pub kind: String,
    pub n: u32,
    pub alpha: f64,
    pub lambda: f64,
    pub k: usize,
    pub outcome: SweepOutcome,
    /// Best (largest) fitted eigenvalue rate.
    pub best_rate: f64,
}

/// Runs a sweep experiment; returns the summary record plus the trajectory
/// CSV (`eps,lambda_0,...`).
pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<(SweepRecord, String), CliError> {
    let outcome = match cfg.kind.as_str() {
        "adhering_two_tori" => {
            let acfg = AdheringConfig {
                n: cfg.n,
                alpha: cfg.alpha,
                lambda: cfg.lambda,
                cover_scale: cfg.cover_scale,
                placement_a: cfg.placement_a,
                k: cfg.k,
                ring_cap: cfg.ring_cap,
            };
            adhering_sweep(&acfg, &cfg.eps, cfg.resolvent)?
        }
        "fading_two_tori" => {
            let fcfg = FadingConfig {
                n: cfg.n,
                lambda: cfg.lambda,
                centers: cfg.centers.clone(),
                k: cfg.k,
            };
            fading_sweep(&fcfg, &cfg.eps, cfg.resolvent)?
        }
        other => return Err(CliError::Validation(format!("unknown experiment kind {other:?}"))),
    };
    let mut csv = String::from("eps");
    for j in 0..cfg.k {
        let _ = write!(csv, ",lambda_{j}");
    }
    csv.push('\n');
    for (i, eps) in outcome.study.eps_values.iter().enumerate() {
        let _ = write!(csv, "{}", fmt_f64(*eps));
        for v in &outcome.study.eigenvalues[i] {
            let _ = write!(csv, ",{}", fmt_f64(*v));
        }
        csv.push('\n');
    }
    let best_rate = outcome
        .study
        .fitted_rates
        .iter()
        .map(|r| r.slope)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((
        SweepRecord {
            config: ConfigEcho::new(None, DEFAULT_ETA_M, false, cfg.seed),
            kind: cfg.kind.clone(),
            n: cfg.n,
            alpha: cfg.alpha,
            lambda: cfg.lambda,
            k: cfg.k,
            outcome,
            best_rate,
        },
        csv,
    ))
}

// ---------------------------------------------------------------------------
// verify command
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: ConfigEcho,
    pub suite: String,
    pub checks: Vec<VerifyCheck>,
    pub passed: bool,
}

fn check(checks: &mut Vec<VerifyCheck>, name: &str, passed: bool, detail: String) {
    checks.push(VerifyCheck { name: name.to_string(), passed, detail });
}

fn verify_bessel(checks: &mut Vec<VerifyCheck>) -> Result<(), CliError> {
    use crate::bessel::{bessel_i, bessel_k, EvalPoint, Order};
    let mut worst: f64 = 0.0;
    for &nu in &[0.0, 0.5, 1.0, 1.5, 2.0] {
        for i in 1..=30 {
            let x = i as f64;
            let i0 = bessel_i(Order::new(nu).unwrap(), EvalPoint::new(x).unwrap())?;
            let i1 = bessel_i(Order::new(nu + 1.0).unwrap(), EvalPoint::new(x).unwrap())?;
            let k0 = bessel_k(Order::new(nu).unwrap(), EvalPoint::new(x).unwrap())?;
            let k1 = bessel_k(Order::new(nu + 1.0).unwrap(), EvalPoint::new(x).unwrap())?;
            worst = worst.max(((i0 * k1 + i1 * k0) * x - 1.0).abs());
        }
    }
    check(checks, "wronskian identity", worst <= 1e-10, format!("worst scaled deviation {worst:.3e}"));
    let mut worst_half: f64 = 0.0;
    for &x in &[0.05, 0.3, 1.0, 5.0, 20.0] {
        let i_half = bessel_i(Order::new(0.5).unwrap(), EvalPoint::new(x).unwrap())?;
        let exact = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sinh();
        worst_half = worst_half.max((i_half - exact).abs() / exact);
        let k_32 = bessel_k(Order::new(1.5).unwrap(), EvalPoint::new(x).unwrap())?;
        let exact = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + 1.0 / x);
        worst_half = worst_half.max((k_32 - exact).abs() / exact);
    }
    check(
        checks,
        "half-integer closed forms",
        worst_half <= 1e-12,
        format!("worst relative deviation {worst_half:.3e}"),
    );
    Ok(())
}

fn verify_bounds(checks: &mut Vec<VerifyCheck>, seed: u64) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0b);
    let mut violations = 0usize;
    let trials = 10_000;
    for _ in 0..trials {
        let mu: f64 = rng.gen_range(0.0..30.0);
        let d = ModeBoundaryData::new(
            mu,
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        )?;
        let sum = d.a_plus.norm_sqr() + d.a_minus.norm_sqr();
        let n = mode_l2_norm_sq(mu, &d)?;
        let e = mode_energy_sq(mu, &d)?;
        let nb = if mu == 0.0 { 0.5 * sum } else { 2.0 / (3.0 * mu) * sum };
        let eb = if mu == 0.0 { 2.0 * sum } else { (mu + 2.0) * sum };
        if n > nb * (1.0 + 1e-12) || e > eb * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    check(
        checks,
        "mode norm/energy bounds",
        violations == 0,
        format!("{violations} violations in {trials} random modes"),
    );
    let mut worst: f64 = 0.0;
    for &(m, eps, eta) in &[(3u32, 0.05, 0.3), (2, 0.02, 0.4)] {
        for i in 1..=20 {
            let e1 = eps * i as f64 / 20.0;
            let v1 = nonconc_const(m, e1, eta)?;
            let v2 = nonconc_const(m, e1 + eps / 40.0, eta)?;
            worst = worst.min(v2 - v1);
        }
    }
    check(checks, "nonconc monotone in eps", worst >= 0.0, format!("worst increment {worst:.3e}"));
    Ok(())
}

fn verify_regimes(checks: &mut Vec<VerifyCheck>) -> Result<(), CliError> {
    let mut nest_bad = 0usize;
    for m in 2..=6 {
        for i in 0..30 {
            for j in 1..=105 {
                let p = ParamPoint::power(m, regimes::q(i, 30), regimes::q(j, 30))?;
                let gen = classify_adhering(&p)?.applicable;
                let two = regimes::classify_adhering_two_copies(&p)?.applicable;
                if gen && !two {
                    nest_bad += 1;
                }
            }
        }
    }
    check(checks, "adhering nesting", nest_bad == 0, format!("{nest_bad} grid violations"));
    let mut raster_bad = 0usize;
    for m in 2..=6 {
        raster_bad += regimes::rasterize_adhering_mismatches(m, 100)?;
    }
    check(
        checks,
        "adhering polygon raster (1/100)",
        raster_bad == 0,
        format!("{raster_bad} mismatched cells"),
    );
    let a3 = regimes::alpha_star(3, None)?;
    check(checks, "alpha_3^* = 1/15", a3 == regimes::q(1, 15), q_str(a3));
    Ok(())
}

fn verify_constants(checks: &mut Vec<VerifyCheck>, seed: u64) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0);
    let mut worst: f64 = 0.0;
    for _ in 0..40 {
        let m = rng.gen_range(2..=5u32);
        let eta: f64 = rng.gen_range(0.1..0.5);
        let r: f64 = rng.gen_range(0.05..0.8) * eta;
        let full = trace_const_full(m, r, eta)?;
        let (_, fp) = ode_oracle(m, 0.0, r, eta, RadialBc::Annulus)?;
        let (_, gp) = ode_oracle(m, 0.0, r, eta, RadialBc::Ball)?;
        let oracle = 1.0 / (gp - fp);
        worst = worst.max((full - oracle).abs() / oracle);
    }
    check(
        checks,
        "bessel formula vs ode oracle",
        worst <= 1e-6,
        format!("worst relative deviation {worst:.3e}"),
    );
    let mut muf_ok = true;
    for m in 2..=10 {
        if verify_muf(m, 50).is_err() {
            muf_ok = false;
        }
    }
    check(checks, "sphere fourth-root inequality", muf_ok, "k <= 50, m <= 10".into());
    let l1 = dtn_sphere_eigenvalue(7, 1)?;
    check(checks, "dtn lambda_1 = 1", (l1 - 1.0).abs() < 1e-14, format!("{l1}"));
    Ok(())
}

/// Runs a named verification suite (`bessel`, `bounds`, `regimes`,
/// `constants`, or `all`).
pub fn cmd_verify(suite: &str, seed: u64) -> Result<VerifyReport, CliError> {
    let mut checks = Vec::new();
    match suite {
        "bessel" => verify_bessel(&mut checks)?,
        "bounds" => verify_bounds(&mut checks, seed)?,
        "regimes" => verify_regimes(&mut checks)?,
        "constants" => verify_constants(&mut checks, seed)?,
        "all" => {
            verify_bessel(&mut checks)?;
            verify_bounds(&mut checks, seed)?;
            verify_regimes(&mut checks)?;
            verify_constants(&mut checks, seed)?;
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown suite {other:?} (expected bessel, bounds, regimes, constants, all)"
            )))
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        config: ConfigEcho::new(None, DEFAULT_ETA_M, false, seed),
        suite: suite.to_string(),
        checks,
        passed,
    })
}

/// Serializes a record as deterministic pretty JSON.
pub fn to_json<T: Serialize>(record: &T) -> String {
    serde_json::to_string_pretty(record).expect("records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants;
    use crate::regimes::Theorem;

    #[test]
    fn constants_record_with_oracle() {
        let rec = cmd_constants(3, 0.05, 0.3, DEFAULT_ETA_M, true, 0).unwrap();
        let o = rec.oracle.unwrap();
        assert!(o.annulus_relative_deviation < 1e-8);
        assert!(o.ball_relative_deviation < 1e-8);
        assert!(o.full_relative_deviation < 1e-8);
        assert!((1.0 / rec.trace_full - 1.0 / rec.trace_annulus - 1.0 / rec.trace_ball).abs() < 1e-9);
        // r >= eta is a validation error
        let err = cmd_constants(3, 0.3, 0.1, DEFAULT_ETA_M, false, 0).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn constants_record_m2_log_bracket() {
        let rec = cmd_constants(2, 1e-3, 0.2, DEFAULT_ETA_M, false, 0).unwrap();
        assert!((rec.log_bracket_term - (1.0f64 / 1e-3).ln()).abs() < 1e-12);
        // the leading term carries the (log 2 - gamma - log r) r piece
        let want = 2.0 * 1e-3 / (0.2 * 0.2)
            + (2.0f64.ln() - constants::EULER_GAMMA - 1e-3f64.ln()) * 1e-3;
        assert!((rec.trace_leading_term - want).abs() < 1e-12);
    }

    #[test]
    fn regime_record_examples() {
        let rec = cmd_regime(
            3,
            "4/5",
            "1",
            Scale::Power,
            &ReportOptions::default(),
            None,
            &ManifoldConstants::flat(),
            0,
        )
        .unwrap();
        let adhering = rec
            .report
            .classifications
            .iter()
            .find(|c| c.theorem == Theorem::AdheringGeneral)
            .unwrap();
        assert!(adhering.applicable);

        let rec = cmd_regime(
            3,
            "0",
            "1/2",
            Scale::Power,
            &ReportOptions::default(),
            None,
            &ManifoldConstants::flat(),
            0,
        )
        .unwrap();
        let f2 = rec
            .report
            .classifications
            .iter()
            .find(|c| c.theorem == Theorem::FadingII)
            .unwrap();
        assert_eq!(f2.rate.as_ref().unwrap().exponent().unwrap(), regimes::q(1, 4));

        let rec = cmd_regime(
            5,
            "0.55",
            "1",
            Scale::Power,
            &ReportOptions::default(),
            None,
            &ManifoldConstants::flat(),
            0,
        )
        .unwrap();
        assert!(rec.report.uncovered);
    }

    #[test]
    fn region_record_raster_consistent() {
        let (rec, csv) = cmd_region(3, Figure::Adhering, 40, None, 0).unwrap();
        assert_eq!(rec.raster_mismatches, Some(0));
        assert!(csv.lines().count() > 100);
        assert!(rec.vertices.iter().any(|v| v.name == "C~"));
    }

    #[test]
    fn delta_record() {
        let mc = ManifoldConstants { r0: 0.5, ..ManifoldConstants::flat() };
        let rec = cmd_delta(3, 0.0, 0.5, &[1e-3, 1e-4, 1e-5], &mc, 7).unwrap();
        assert_eq!(rec.bundles.len(), 3);
        assert!(!rec.fitted_slopes.is_empty());
        assert!(cmd_delta(3, 0.0, 0.5, &[], &mc, 7).is_err());
    }

    #[test]
    fn experiment_config_parsing() {
        let text = "\
# adhering demo
kind = adhering_two_tori
n = 48
alpha = 0.9
lambda = 1
cover_scale = 6.2
placement_a = 0.354
eps = 0.2, 0.1
k = 6
seed = 11
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.kind, "adhering_two_tori");
        assert_eq!(cfg.n, 48);
        assert_eq!(cfg.seed, 11);
        assert_eq!(cfg.eps, vec![0.2, 0.1]);
        // malformed config errors name the field
        let err = ExperimentConfig::parse("kind = adhering_two_tori\nalpha = wat\n").unwrap_err();
        assert!(err.to_string().contains("alpha"));
        let err = ExperimentConfig::parse("kind = nope\neps = 0.2, 0.1\n").unwrap_err();
        assert!(err.to_string().contains("kind"));
        let err =
            ExperimentConfig::parse("kind = fading_two_tori\neps = 0.2, 0.1\n").unwrap_err();
        assert!(err.to_string().contains("centers"));
    }

    #[test]
    fn verify_suites_pass() {
        for suite in ["bessel", "regimes"] {
            let rep = cmd_verify(suite, 3).unwrap();
            assert!(rep.passed, "{suite}: {:?}", rep.checks);
        }
        assert!(cmd_verify("nope", 0).is_err());
    }

    #[test]
    fn json_deterministic() {
        let a = to_json(&cmd_constants(3, 0.05, 0.3, DEFAULT_ETA_M, false, 9).unwrap());
        let b = to_json(&cmd_constants(3, 0.05, 0.3, DEFAULT_ETA_M, false, 9).unwrap());
        assert_eq!(a, b);
        assert!(a.contains("\"schema_version\": \"1\""));
        assert!(a.contains("alpha4_choice"));
    }
}
