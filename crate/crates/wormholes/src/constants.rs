//! Optimal Sobolev-trace and non-concentration constants on Euclidean balls
//! and annuli, their asymptotic expansions, the manifold-corrected variants,
//! and the Dirichlet-to-Neumann spectrum on spheres.
//!
//! Conventions: every `trace_const_*` function returns the *squared*
//! constant `C'(...)^2`; `nonconc_const` returns the squared constant
//! `C(B_eps, B_eta)^2`.  The `manifold_*` functions return the unsquared
//! constants including the `N`/`K` prefactors.

use crate::bessel::{bessel_i, bessel_k, bessel_ratio_bundle, BesselError, EvalPoint, Order};
use crate::ode::{radial_shoot, OdeError, RadialBc};
use crate::quad::{integrate, QuadError};
use serde::Serialize;
use thiserror::Error;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Default validity threshold `eta_m` for the asymptotic expansions; the
/// analysis only guarantees existence of some `eta_m in (0, 1]`, the value
/// 0.5 is an empirical choice exposed as configuration.
pub const DEFAULT_ETA_M: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantsError {
    #[error("dimension m={0} not supported (need 2 <= m <= 22)")]
    Dimension(u32),
    #[error("invalid radii: need 0 < r < eta, got r={0}, eta={1}")]
    Radii(f64, f64),
    #[error("radius {0} must be positive")]
    Radius(f64),
    #[error("eta={0} exceeds the asymptotic validity threshold eta_m={1}")]
    EtaThreshold(f64, f64),
    #[error("denominator underflow in annulus trace constant at r={0}, eta={1}")]
    DenominatorUnderflow(f64, f64),
    #[error("argument {0} must be positive")]
    Positive(f64),
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("manifold constants invalid: {0}")]
    ManifoldConstants(&'static str),
    #[error("operator inequality violated at mode k={k}: mu^2={mu_sq} > bound={bound}")]
    MufViolation { k: u32, mu_sq: f64, bound: f64 },
}

fn check_dim(m: u32) -> Result<(), ConstantsError> {
    if !(2..=22).contains(&m) {
        return Err(ConstantsError::Dimension(m));
    }
    Ok(())
}

fn order_for(m: u32) -> Result<Order, ConstantsError> {
    check_dim(m)?;
    Ok(Order::for_dimension(m)?)
}

/// Constants of the ambient manifold entering the `N`/`K`-corrected bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ManifoldConstants {
    /// Uniform cover number.
    pub n_cover: u32,
    /// Metric distortion of harmonic charts, `K >= 1`.
    pub k_distortion: f64,
    /// Harmonic radius, `0 < r0 <= 1`.
    pub r0: f64,
    /// Tubular-neighbourhood radius, `0 < r1 < r0`.
    pub r1: f64,
    /// Lower Ricci bound (in 1/length^2).
    pub kappa0: f64,
    /// Bound of the harmonic extension operator, `>= 1`.
    pub c_ext: f64,
    /// Tubular-neighbourhood constant, `> 0`.
    pub c_nbhd: f64,
}

impl ManifoldConstants {
    pub fn new(
        n_cover: u32,
        k_distortion: f64,
        r0: f64,
        r1: f64,
        kappa0: f64,
        c_ext: f64,
        c_nbhd: f64,
    ) -> Result<Self, ConstantsError> {
        if n_cover < 1 {
            return Err(ConstantsError::ManifoldConstants("cover number N must be >= 1"));
        }
        if !(k_distortion >= 1.0) {
            return Err(ConstantsError::ManifoldConstants("distortion K must be >= 1"));
        }
        if !(0.0 < r1 && r1 < r0 && r0 <= 1.0) {
            return Err(ConstantsError::ManifoldConstants("need 0 < r1 < r0 <= 1"));
        }
        if !(c_ext >= 1.0) {
            return Err(ConstantsError::ManifoldConstants("extension bound C_ext must be >= 1"));
        }
        if !(c_nbhd > 0.0) {
            return Err(ConstantsError::ManifoldConstants("C_nbhd must be > 0"));
        }
        Ok(ManifoldConstants { n_cover, k_distortion, r0, r1, kappa0, c_ext, c_nbhd })
    }

    /// Flat desk-scale model: `N = 1`, `K = 1`, `r0 = 1`, `r1 = 1/2`,
    /// `kappa0 = 0`, `C_ext = 1`, `C_nbhd = 1`.
    pub fn flat() -> Self {
        ManifoldConstants {
            n_cover: 1,
            k_distortion: 1.0,
            r0: 1.0,
            r1: 0.5,
            kappa0: 0.0,
            c_ext: 1.0,
            c_nbhd: 1.0,
        }
    }

    /// Elliptic-regularity constant `C_ellreg = 2 + max{0, -kappa0}`.
    pub fn c_ellreg(&self) -> f64 {
        2.0 + (-self.kappa0).max(0.0)
    }
}

/// How a [`ConstantResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BesselFormula,
    Quadrature,
    Asymptotic,
}

/// Value with an asymptotic decomposition `value = leading_term + remainder`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstantResult {
    pub value: f64,
    pub leading_term: f64,
    pub remainder: f64,
    pub method: Method,
}

/// Bracket convention for the dimension-dependent log factors `[x]_2`:
/// they appear only in dimension 2.  Returns `log(x)` for `m = 2` and the
/// multiplicative neutral `1` otherwise.
pub fn log2_bracket(x: f64, m: u32) -> Result<f64, ConstantsError> {
    if !(x > 0.0) {
        return Err(ConstantsError::Positive(x));
    }
    Ok(if m == 2 { x.ln() } else { 1.0 })
}

/// `h_m(r)`: the subleading term of the trace-constant expansion.
pub fn h_m(m: u32, r: f64) -> f64 {
    if m == 2 {
        (2.0f64.ln() - EULER_GAMMA - r.ln()) * r
    } else {
        r / (m as f64 - 2.0)
    }
}

/// `H_m(eps) = int_0^eps h_m`: the subleading term of the non-concentration
/// expansion.
pub fn big_h_m(m: u32, eps: f64) -> f64 {
    if m == 2 {
        0.5 * eps * eps * (2.0 + 2.0f64.ln() - EULER_GAMMA - eps.ln())
    } else {
        eps * eps / (2.0 * (m as f64 - 2.0))
    }
}

/// Squared trace constant of the annulus, `C'(bd B_r, B_eta \ B_r)^2`.
pub fn trace_const_annulus(m: u32, r: f64, eta: f64) -> Result<f64, ConstantsError> {
    if !(0.0 < r && r < eta) {
        return Err(ConstantsError::Radii(r, eta));
    }
    let nu = order_for(m)?;
    let nu1 = Order::new(nu.get() + 1.0)?;
    let pr = EvalPoint::new(r)?;
    let pe = EvalPoint::new(eta)?;
    let i_r = bessel_i(nu, pr)?;
    let i1_r = bessel_i(nu1, pr)?;
    let k_r = bessel_k(nu, pr)?;
    let k1_r = bessel_k(nu1, pr)?;
    let i1_e = bessel_i(nu1, pe)?;
    let k1_e = bessel_k(nu1, pe)?;
    let num = i_r * k1_e + k_r * i1_e;
    let den = k1_r * i1_e - i1_r * k1_e;
    if !(den > 0.0) || !den.is_finite() {
        return Err(ConstantsError::DenominatorUnderflow(r, eta));
    }
    Ok(num / den)
}

/// Squared trace constant of the ball, `C'(bd B_r, B_r)^2 = I_nu(r)/I_{nu+1}(r)`.
pub fn trace_const_ball(m: u32, r: f64) -> Result<f64, ConstantsError> {
    if !(r > 0.0) {
        return Err(ConstantsError::Radius(r));
    }
    let nu = order_for(m)?;
    let nu1 = Order::new(nu.get() + 1.0)?;
    let p = EvalPoint::new(r)?;
    Ok(bessel_i(nu, p)? / bessel_i(nu1, p)?)
}

/// Squared trace constant of the full ball, via reciprocal additivity
/// `1/C'^2 = 1/C'^2_annulus + 1/C'^2_ball`.
pub fn trace_const_full(m: u32, r: f64, eta: f64) -> Result<f64, ConstantsError> {
    let ann = trace_const_annulus(m, r, eta)?;
    let ball = trace_const_ball(m, r)?;
    Ok(1.0 / (1.0 / ann + 1.0 / ball))
}

/// Squared trace constant of the full ball via the IK-ratio form; must agree
/// with [`trace_const_full`] to 1e-10 relative.
pub fn trace_const_full_ik(m: u32, r: f64, eta: f64) -> Result<f64, ConstantsError> {
    if !(0.0 < r && r < eta) {
        return Err(ConstantsError::Radii(r, eta));
    }
    let nu = order_for(m)?;
    let nu1 = Order::new(nu.get() + 1.0)?;
    let br = bessel_ratio_bundle(nu, EvalPoint::new(r)?)?;
    let be = bessel_ratio_bundle(nu1, EvalPoint::new(eta)?)?;
    let ik1_r = bessel_i(nu1, EvalPoint::new(r)?)? / bessel_k(nu1, EvalPoint::new(r)?)?;
    Ok((br.ik_plus / be.ik + br.kk_plus) / (1.0 + ik1_r / br.ik))
}

/// Asymptotic decomposition of [`trace_const_full`]:
/// `leading = m r^{m-1}/eta^m + h_m(r)`.
pub fn trace_const_asymptotic(
    m: u32,
    r: f64,
    eta: f64,
    eta_m: f64,
) -> Result<ConstantResult, ConstantsError> {
    if !(0.0 < r && r < eta) {
        return Err(ConstantsError::Radii(r, eta));
    }
    if eta >= eta_m {
        return Err(ConstantsError::EtaThreshold(eta, eta_m));
    }
    let value = trace_const_full(m, r, eta)?;
    let leading = m as f64 * r.powi(m as i32 - 1) / eta.powi(m as i32) + h_m(m, r);
    Ok(ConstantResult { value, leading_term: leading, remainder: value - leading, method: Method::Asymptotic })
}

/// Squared non-concentration constant
/// `C(B_eps, B_eta)^2 = int_0^eps C'(bd B_r, B_eta)^2 dr`.
pub fn nonconc_const(m: u32, eps: f64, eta: f64) -> Result<f64, ConstantsError> {
    if !(0.0 < eps && eps < eta) {
        return Err(ConstantsError::Radii(eps, eta));
    }
    check_dim(m)?;
    let q = integrate(
        |r| {
            if r <= 0.0 {
                0.0
            } else {
                trace_const_full(m, r, eta).unwrap_or(f64::NAN)
            }
        },
        0.0,
        eps,
        1e-12,
        1e-10,
    )?;
    Ok(q.value)
}

/// Asymptotic decomposition of [`nonconc_const`]:
/// `leading = eps^m/eta^m + H_m(eps)`.
pub fn nonconc_asymptotic(
    m: u32,
    eps: f64,
    eta: f64,
    eta_m: f64,
) -> Result<ConstantResult, ConstantsError> {
    if eta >= eta_m {
        return Err(ConstantsError::EtaThreshold(eta, eta_m));
    }
    let value = nonconc_const(m, eps, eta)?;
    let leading = (eps / eta).powi(m as i32) + big_h_m(m, eps);
    Ok(ConstantResult { value, leading_term: leading, remainder: value - leading, method: Method::Asymptotic })
}

/// Manifold non-concentration constant
/// `C_m(eps, eta) = N^{1/2} K^{(m+1)/2} sqrt(nonconc_const)`.
pub fn manifold_nonconc(
    m: u32,
    eps: f64,
    eta: f64,
    mc: &ManifoldConstants,
) -> Result<f64, ConstantsError> {
    if !(eta <= mc.r0) {
        return Err(ConstantsError::Radii(eps, eta));
    }
    let prefactor = (mc.n_cover as f64).sqrt() * mc.k_distortion.powf((m as f64 + 1.0) / 2.0);
    Ok(prefactor * nonconc_const(m, eps, eta)?.sqrt())
}

/// Manifold trace constant
/// `C'_m(eps, eta) = N^{1/2} K^{(m+2)/4} sqrt(trace_const_full)`.
pub fn manifold_trace(
    m: u32,
    eps: f64,
    eta: f64,
    mc: &ManifoldConstants,
) -> Result<f64, ConstantsError> {
    if !(eta <= mc.r0) {
        return Err(ConstantsError::Radii(eps, eta));
    }
    let prefactor = (mc.n_cover as f64).sqrt() * mc.k_distortion.powf((m as f64 + 2.0) / 4.0);
    Ok(prefactor * trace_const_full(m, eps, eta)?.sqrt())
}

/// Eigenvalue `lambda_k = sqrt(k(k+m-2) + nu^2) - nu` of the
/// Dirichlet-to-Neumann operator on the unit sphere boundary of the unit
/// ball (`nu = (m-2)/2`).  `lambda_0 = 0` and `lambda_1 = 1` for every `m`.
pub fn dtn_sphere_eigenvalue(m: u32, k: u32) -> Result<f64, ConstantsError> {
    check_dim(m)?;
    let nu = (m as f64 - 2.0) / 2.0;
    let mu_sq = k as f64 * (k as f64 + m as f64 - 2.0);
    Ok((mu_sq + nu * nu).sqrt() - nu)
}

/// Per-mode slack of the operator inequality `Delta_S <= (m-1) Lambda_S^2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MufSlack {
    pub k: u32,
    /// Sphere eigenvalue `mu_k^2 = k(k+m-2)`.
    pub mu_sq: f64,
    /// `(m-1) lambda_k^2`.
    pub bound: f64,
    /// `bound - mu_sq >= 0`.
    pub slack: f64,
}

/// Verifies `mu_k^2 = k(k+m-2) <= (m-1) lambda_k^2` for `k <= k_max`,
/// returning the per-mode slack.  Equality holds exactly at `m = 2`.
pub fn verify_muf(m: u32, k_max: u32) -> Result<Vec<MufSlack>, ConstantsError> {
    check_dim(m)?;
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let mu_sq = k as f64 * (k as f64 + m as f64 - 2.0);
        let lam = dtn_sphere_eigenvalue(m, k)?;
        let bound = (m as f64 - 1.0) * lam * lam;
        let slack = bound - mu_sq;
        if slack < -1e-9 * bound.max(1.0) {
            return Err(ConstantsError::MufViolation { k, mu_sq, bound });
        }
        out.push(MufSlack { k, mu_sq, bound, slack });
    }
    Ok(out)
}

/// Independent shooting oracle for the radial problems; see
/// [`crate::ode::radial_shoot`].  Returns `(value at r, derivative at r)`
/// with the value normalised to 1.
pub fn ode_oracle(
    m: u32,
    mu: f64,
    r: f64,
    eta: f64,
    bc: RadialBc,
) -> Result<(f64, f64), ConstantsError> {
    check_dim(m)?;
    let sol = radial_shoot(m, mu, r, eta, bc)?;
    Ok((sol.value, sol.derivative))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn log2_bracket_cases() {
        assert_eq!(log2_bracket(10.0, 3).unwrap(), 1.0);
        assert!((log2_bracket(std::f64::consts::E, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((log2_bracket(100.0, 2).unwrap() - 4.605_170_185_988_092).abs() < 1e-12);
        assert!(log2_bracket(0.0, 2).is_err());
    }

    #[test]
    fn euler_gamma_digits() {
        // pinned digits of log 2 - gamma
        let d = 2.0f64.ln() - EULER_GAMMA;
        assert!(0.115 < d && d < 0.116);
    }

    #[test]
    fn trace_ball_closed_form_m3() {
        // I_{1/2}/I_{3/2}(1) = sinh 1 / (cosh 1 - sinh 1)
        let v = trace_const_ball(3, 1.0).unwrap();
        let exact = 1.0f64.sinh() / (1.0f64.cosh() - 1.0f64.sinh());
        assert!(rel(v, exact) < 1e-12);
        assert!((v - 3.19453).abs() < 1e-4);
    }

    #[test]
    fn trace_ball_small_radius() {
        // behaves like m/r as r -> 0
        let v = trace_const_ball(3, 0.01).unwrap();
        assert!((0.01 * v / 3.0 - 1.0).abs() < 0.01);
        let v2 = trace_const_ball(2, 0.5).unwrap();
        let i0 = bessel_i(Order::new(0.0).unwrap(), EvalPoint::new(0.5).unwrap()).unwrap();
        let i1 = bessel_i(Order::new(1.0).unwrap(), EvalPoint::new(0.5).unwrap()).unwrap();
        assert!(rel(v2, i0 / i1) < 1e-14);
    }

    #[test]
    fn trace_ball_vs_ode_oracle() {
        for &(m, r) in &[(3u32, 1.0), (3, 0.2), (2, 0.5), (5, 0.7)] {
            let v = trace_const_ball(m, r).unwrap();
            let (_, g_prime) = ode_oracle(m, 0.0, r, 0.0, RadialBc::Ball).unwrap();
            assert!(rel(v, 1.0 / g_prime) < 1e-8, "m={m} r={r}");
        }
    }

    #[test]
    fn trace_annulus_vs_ode_oracle() {
        for &(m, r, eta) in &[(3u32, 0.1, 0.5), (2, 0.05, 0.4), (4, 0.08, 0.45), (5, 0.02, 0.2)] {
            let v = trace_const_annulus(m, r, eta).unwrap();
            let (_, f_prime) = ode_oracle(m, 0.0, r, eta, RadialBc::Annulus).unwrap();
            assert!(rel(v, -1.0 / f_prime) < 1e-8, "m={m} r={r} eta={eta}");
        }
    }

    #[test]
    fn trace_annulus_divergence_near_eta() {
        // r -> eta^-: constant diverges
        let eta = 0.3;
        let v1 = trace_const_annulus(3, 0.29, eta).unwrap();
        let v2 = trace_const_annulus(3, 0.299, eta).unwrap();
        let v3 = trace_const_annulus(3, 0.2999, eta).unwrap();
        assert!(v1 > 1e1 && v2 > v1 && v3 > v2 && v3 > 1e3);
    }

    #[test]
    fn trace_full_reciprocal_additivity() {
        for &(m, r, eta) in &[(3u32, 0.05, 0.3), (2, 0.01, 0.4), (5, 0.02, 0.2)] {
            let full = trace_const_full(m, r, eta).unwrap();
            let ann = trace_const_annulus(m, r, eta).unwrap();
            let ball = trace_const_ball(m, r).unwrap();
            assert!(rel(1.0 / full, 1.0 / ann + 1.0 / ball) < 1e-12);
            assert!(full < ann.min(ball));
            // the IK-ratio route agrees
            let ik = trace_const_full_ik(m, r, eta).unwrap();
            assert!(rel(full, ik) < 1e-10, "m={m}: {full} vs {ik}");
        }
    }

    #[test]
    fn trace_full_vs_coupled_ode() {
        // 1/C'^2(full) = g'(r) - f'(r) with the two shooting branches
        for &(m, r, eta) in &[(3u32, 0.05, 0.3), (5, 0.02, 0.2)] {
            let full = trace_const_full(m, r, eta).unwrap();
            let (_, fp) = ode_oracle(m, 0.0, r, eta, RadialBc::Annulus).unwrap();
            let (_, gp) = ode_oracle(m, 0.0, r, 0.0, RadialBc::Ball).unwrap();
            assert!(rel(1.0 / full, gp - fp) < 1e-8, "m={m}");
        }
    }

    #[test]
    fn trace_asymptotic_h_terms() {
        assert!(rel(h_m(3, 0.2), 0.2).abs() < 1e-15);
        let h2 = h_m(2, 0.1);
        assert!(rel(h2, 0.1 * (2.0f64.ln() - EULER_GAMMA + 10.0f64.ln())) < 1e-14);
        let res = trace_const_asymptotic(3, 1e-3, 0.3, DEFAULT_ETA_M).unwrap();
        assert!((res.value - res.leading_term - res.remainder).abs() < 1e-18);
        // remainder is O(r^2 / eta)-small against the leading term
        assert!(res.remainder.abs() < 0.01 * res.leading_term);
        assert!(trace_const_asymptotic(3, 0.1, 0.6, DEFAULT_ETA_M).is_err());
    }

    #[test]
    fn nonconc_monotone_and_leading() {
        // eps -> 0 gives 0; monotone in eps
        let v1 = nonconc_const(3, 0.01, 0.3).unwrap();
        let v2 = nonconc_const(3, 0.05, 0.3).unwrap();
        assert!(0.0 < v1 && v1 < v2);
        // leading term comparison
        let res = nonconc_asymptotic(3, 0.05, 0.3, DEFAULT_ETA_M).unwrap();
        let explicit = (0.05f64 / 0.3).powi(3) + 0.05f64.powi(2) / 2.0;
        assert!(rel(res.leading_term, explicit) < 1e-14);
        // remainder is O(eps^m/eta^m * eta^2 + eps^3/3), roughly 8% here
        assert!(res.remainder.abs() < 0.15 * res.value);
    }

    #[test]
    fn big_h_values() {
        assert!(rel(big_h_m(3, 0.3), 0.045).abs() < 1e-14);
        assert!(rel(big_h_m(4, 1.0), 0.25) < 1e-14);
        let eps = 0.01f64;
        let want = 0.5 * eps * eps * (2.0 + 2.0f64.ln() - EULER_GAMMA - eps.ln());
        assert!(rel(big_h_m(2, eps), want) < 1e-14);
    }

    #[test]
    fn manifold_prefactors() {
        let mut mc = ManifoldConstants::flat();
        let base = manifold_nonconc(3, 0.05, 0.3, &mc).unwrap();
        assert!(rel(base, nonconc_const(3, 0.05, 0.3).unwrap().sqrt()) < 1e-14);
        mc.n_cover = 3;
        let v = manifold_nonconc(3, 0.05, 0.3, &mc).unwrap();
        assert!(rel(v, 3.0f64.sqrt() * base) < 1e-14);
        mc.n_cover = 1;
        mc.k_distortion = 2.0;
        let v = manifold_nonconc(3, 0.05, 0.3, &mc).unwrap();
        assert!(rel(v, 4.0 * base) < 1e-14);

        let baset = manifold_trace(2, 0.05, 0.3, &ManifoldConstants::flat()).unwrap();
        mc.k_distortion = 1.5;
        let vt = manifold_trace(2, 0.05, 0.3, &mc).unwrap();
        assert!(rel(vt, 1.5 * baset) < 1e-14);
        mc.k_distortion = 1.0;
        mc.n_cover = 4;
        let vt = manifold_trace(2, 0.05, 0.3, &mc).unwrap();
        assert!(rel(vt, 2.0 * baset) < 1e-14);
    }

    #[test]
    fn c_ellreg_derivation() {
        let mut mc = ManifoldConstants::flat();
        assert_eq!(mc.c_ellreg(), 2.0);
        mc.kappa0 = -3.0;
        assert_eq!(mc.c_ellreg(), 5.0);
        mc.kappa0 = 1.0;
        assert_eq!(mc.c_ellreg(), 2.0);
    }

    #[test]
    fn dtn_values() {
        for m in 2..=8 {
            assert_eq!(dtn_sphere_eigenvalue(m, 0).unwrap(), 0.0);
            assert!((dtn_sphere_eigenvalue(m, 1).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!((dtn_sphere_eigenvalue(3, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((dtn_sphere_eigenvalue(2, 5).unwrap() - 5.0).abs() < 1e-13);
    }

    #[test]
    fn muf_inequality() {
        // equality at m=2
        for s in verify_muf(2, 20).unwrap() {
            assert!(s.slack.abs() <= 1e-12 * s.bound.max(1.0));
        }
        // m=3, k=1: 2 <= 2*1 with equality
        let v = verify_muf(3, 1).unwrap();
        assert!((v[1].mu_sq - 2.0).abs() < 1e-14 && v[1].slack.abs() < 1e-12);
        // m=5, k=2: mu_2^2 = 2(2+3) = 10 and lambda_2 = sqrt(10+9/4)-3/2 = 2,
        // so 10 <= 4 * 4
        let v = verify_muf(5, 2).unwrap();
        assert!((v[2].mu_sq - 10.0).abs() < 1e-14);
        let lam = (10.0f64 + 2.25).sqrt() - 1.5;
        assert!((lam - 2.0).abs() < 1e-14);
        assert!(rel(v[2].bound, 4.0 * lam * lam) < 1e-14);
        assert!(v[2].slack > 0.0);
    }

    #[test]
    fn nonconc_scaling_sanity() {
        // leading-term dominance: C^2 >= (eps/eta)^m (1 - tol) for small eps
        for m in 2..=5u32 {
            let eta = 0.4;
            for &eps in &[1e-3, 1e-2] {
                let v = nonconc_const(m, eps, eta).unwrap();
                assert!(v >= (eps / eta).powi(m as i32) * 0.999, "m={m} eps={eps}");
            }
        }
    }

    #[test]
    fn trace_remainder_bounded_m4() {
        // the remainder stays below a fitted constant times the bound shape;
        // at m = 4 the r^2 coefficient vanishes, so the ratio even decays
        let eta = 0.3f64;
        let mut ratios = Vec::new();
        for &r in &[1e-2, 1e-3, 1e-4, 1e-5] {
            let v = trace_const_full(4, r, eta).unwrap();
            let lead = 4.0 * r.powi(3) / eta.powi(4) + h_m(4, r);
            let shape = r.powi(3) / eta.powi(4) * eta * eta + r * r;
            ratios.push((v - lead).abs() / shape);
        }
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        assert!(max < 1.0, "ratios {ratios:?}");
        assert!(ratios.windows(2).all(|w| w[1] <= w[0]), "ratios {ratios:?}");
    }

    #[test]
    fn error_paths() {
        assert!(trace_const_annulus(3, 0.3, 0.1).is_err());
        assert!(trace_const_ball(3, 0.0).is_err());
        assert!(nonconc_const(3, 0.3, 0.1).is_err());
        assert!(ManifoldConstants::new(0, 1.0, 1.0, 0.5, 0.0, 1.0, 1.0).is_err());
        assert!(ManifoldConstants::new(1, 0.5, 1.0, 0.5, 0.0, 1.0, 1.0).is_err());
    }
}
