//! Harmonic-extension profiles on thin cylinders and the family of seven
//! `delta`-constants that drives every convergence-rate estimate.
//!
//! A handle is a cylinder `[0, ell] x eps S^{m-1}`.  After rescaling to the
//! unit cylinder `[0,1] x S^{m-1}`, a harmonic function decomposes into
//! sphere modes; the profile of the mode with transversal frequency `mu`
//! (so `mu^2` is an eigenvalue of the sphere) is linear for `mu = 0` and a
//! `sinh` interpolation for `mu > 0`, with the scaled frequency
//! `mu_eps = (ell/eps) mu`.

use crate::constants::{
    log2_bracket, manifold_nonconc, manifold_trace, ConstantsError, ManifoldConstants,
};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HandleError {
    #[error("invalid handle geometry: need 0 < eps < eta <= r0 and ell > 0")]
    Geometry,
    #[error("profile parameter s={0} outside [0, 1]")]
    ProfileParam(f64),
    #[error("transversal frequency mu={0} must be nonnegative")]
    Frequency(f64),
    #[error("exponent parameters out of range: alpha={0} (need [0,1)), lambda={1} (need > 0)")]
    Exponents(f64, f64),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
}

/// Handle geometry: dimension, radius, length, uniform cover distance, and
/// the ambient manifold constants.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HandleGeometry {
    pub m: u32,
    pub eps: f64,
    pub ell: f64,
    pub eta: f64,
    pub mc: ManifoldConstants,
}

impl HandleGeometry {
    pub fn new(m: u32, eps: f64, ell: f64, eta: f64, mc: ManifoldConstants) -> Result<Self, HandleError> {
        if !(0.0 < eps && eps < eta && eta <= mc.r0 && ell > 0.0) {
            return Err(HandleError::Geometry);
        }
        Ok(HandleGeometry { m, eps, ell, eta, mc })
    }

    /// Geometry from the exponent convention `eta = eps^alpha r0`,
    /// `ell = eps^lambda`.
    pub fn from_exponents(
        m: u32,
        eps: f64,
        alpha: f64,
        lambda: f64,
        mc: ManifoldConstants,
    ) -> Result<Self, HandleError> {
        if !(0.0..1.0).contains(&alpha) || !(lambda > 0.0) {
            return Err(HandleError::Exponents(alpha, lambda));
        }
        HandleGeometry::new(m, eps, eps.powf(lambda), eps.powf(alpha) * mc.r0, mc)
    }

    /// Scaled frequency `mu_eps = (ell/eps) mu`.
    pub fn scaled_frequency(&self, mu: f64) -> f64 {
        self.ell / self.eps * mu
    }
}

/// Boundary data of one transversal mode: frequency `mu >= 0` and the two
/// end amplitudes.
#[derive(Debug, Clone, Copy)]
pub struct ModeBoundaryData {
    pub mu: f64,
    pub a_plus: Complex64,
    pub a_minus: Complex64,
}

impl ModeBoundaryData {
    pub fn new(mu: f64, a_plus: Complex64, a_minus: Complex64) -> Result<Self, HandleError> {
        if !(mu >= 0.0) {
            return Err(HandleError::Frequency(mu));
        }
        Ok(ModeBoundaryData { mu, a_plus, a_minus })
    }

    fn abs_sq_sum(&self) -> f64 {
        self.a_plus.norm_sqr() + self.a_minus.norm_sqr()
    }

    fn cross(&self) -> f64 {
        (self.a_plus * self.a_minus.conj()).re
    }
}

/// `sinh(s x)/sinh(x)` evaluated without overflow (exact-ratio form
/// `e^{x(s-1)} (1 - e^{-2xs})/(1 - e^{-2x})` for large `x`).
fn sinh_ratio(s: f64, x: f64) -> f64 {
    if x <= 30.0 {
        (s * x).sinh() / x.sinh()
    } else {
        (x * (s - 1.0)).exp() * (1.0 - (-2.0 * x * s).exp()) / (1.0 - (-2.0 * x).exp())
    }
}

/// Mode profile `h^mu(s)` on `[0, 1]` with `h(0) = a_minus`, `h(1) = a_plus`.
pub fn mode_profile(mu_eps: f64, data: &ModeBoundaryData, s: f64) -> Result<Complex64, HandleError> {
    if !(0.0..=1.0).contains(&s) {
        return Err(HandleError::ProfileParam(s));
    }
    if !(mu_eps >= 0.0) {
        return Err(HandleError::Frequency(mu_eps));
    }
    Ok(if mu_eps == 0.0 {
        data.a_plus * s + data.a_minus * (1.0 - s)
    } else {
        data.a_plus * sinh_ratio(s, mu_eps) + data.a_minus * sinh_ratio(1.0 - s, mu_eps)
    })
}

/// `coth(x) - 1` computed stably for large `x`.
fn coth_minus_one(x: f64) -> f64 {
    2.0 * (-2.0 * x).exp() / (1.0 - (-2.0 * x).exp())
}

/// `1/sinh(x)` computed stably for large `x`.
fn csch(x: f64) -> f64 {
    if x <= 30.0 {
        1.0 / x.sinh()
    } else {
        2.0 * (-x).exp() / (1.0 - (-2.0 * x).exp())
    }
}

/// `x / sinh(x)^2` computed stably for large `x`.
fn x_over_sinh_sq(x: f64) -> f64 {
    if x <= 30.0 {
        x / (x.sinh() * x.sinh())
    } else {
        let e = (-x).exp();
        4.0 * x * e * e / ((1.0 - (-2.0 * x).exp()) * (1.0 - (-2.0 * x).exp()))
    }
}

/// Exact squared `L^2([0,1])` norm of the mode profile `h^mu`.
///
/// For `mu = 0` this is `(|a+|^2 + Re(a+ conj(a-)) + |a-|^2)/3`; for
/// `mu > 0` the closed `sinh` expression.  Always below the bounds
/// `(1/2)(|a+|^2+|a-|^2)` resp. `(2/(3 mu))(|a+|^2+|a-|^2)`.
pub fn mode_l2_norm_sq(mu: f64, data: &ModeBoundaryData) -> Result<f64, HandleError> {
    if !(mu >= 0.0) {
        return Err(HandleError::Frequency(mu));
    }
    let sum = data.abs_sq_sum();
    let cross = data.cross();
    Ok(if mu == 0.0 {
        (sum + cross) / 3.0
    } else {
        // (sinh 2mu - 2mu)/(4 sinh^2 mu) = (coth mu)/2 - mu/(2 sinh^2 mu)
        let diag = 0.5 * (1.0 + coth_minus_one(mu)) - 0.5 * x_over_sinh_sq(mu);
        // (mu cosh mu - sinh mu)/sinh^2 mu = (mu coth mu - 1) / sinh mu
        let off = (mu * (1.0 + coth_minus_one(mu)) - 1.0) * csch(mu);
        (diag * sum + off * cross) / mu
    })
}

/// Exact squared `L^2([0,1])` norm of the profile derivative.
///
/// For `mu = 0` this is `|a+ - a-|^2`; always below `2(|a+|^2+|a-|^2)`
/// resp. `(mu+2)(|a+|^2+|a-|^2)`.
pub fn mode_energy_sq(mu: f64, data: &ModeBoundaryData) -> Result<f64, HandleError> {
    if !(mu >= 0.0) {
        return Err(HandleError::Frequency(mu));
    }
    let sum = data.abs_sq_sum();
    let cross = data.cross();
    Ok(if mu == 0.0 {
        (data.a_plus - data.a_minus).norm_sqr()
    } else {
        // (sinh 2mu + 2mu)/(4 sinh^2 mu) = (coth mu)/2 + mu/(2 sinh^2 mu)
        let diag = 0.5 * (1.0 + coth_minus_one(mu)) + 0.5 * x_over_sinh_sq(mu);
        // (mu cosh mu + sinh mu)/sinh^2 mu = (mu coth mu + 1) / sinh mu
        let off = (mu * (1.0 + coth_minus_one(mu)) + 1.0) * csch(mu);
        mu * (diag * sum - off * cross)
    })
}

/// Energy of a harmonic function on one handle, given its transversal mode
/// data:
/// `q = sum_mu [ (1/ell^2) ||d h^{mu_eps}||^2 + (mu^2/eps^2) ||h^{mu_eps}||^2 ]`.
pub fn handle_energy(geom: &HandleGeometry, modes: &[ModeBoundaryData]) -> Result<f64, HandleError> {
    let mut q = 0.0;
    for mode in modes {
        let mu_eps = geom.scaled_frequency(mode.mu);
        q += mode_energy_sq(mu_eps, mode)? / (geom.ell * geom.ell);
        if mode.mu > 0.0 {
            q += mode.mu * mode.mu / (geom.eps * geom.eps) * mode_l2_norm_sq(mu_eps, mode)?;
        }
    }
    Ok(q)
}

/// Norms of a harmonic extension split into the transversally constant part
/// (bullet) and its orthogonal complement (perp).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HarmonicExtension {
    pub l2_bullet_sq: f64,
    pub l2_perp_sq: f64,
    pub energy_bullet: f64,
    pub energy_perp: f64,
}

impl HarmonicExtension {
    pub fn l2_total_sq(&self) -> f64 {
        self.l2_bullet_sq + self.l2_perp_sq
    }
    pub fn energy_total(&self) -> f64 {
        self.energy_bullet + self.energy_perp
    }
}

/// Assembles the harmonic extension from boundary traces per mode and
/// returns the split norms.  Distinct sphere modes are orthogonal, so norms
/// and energies add across modes.
pub fn harmonic_extension(
    geom: &HandleGeometry,
    modes: &[ModeBoundaryData],
) -> Result<HarmonicExtension, HandleError> {
    let mut out = HarmonicExtension {
        l2_bullet_sq: 0.0,
        l2_perp_sq: 0.0,
        energy_bullet: 0.0,
        energy_perp: 0.0,
    };
    for mode in modes {
        let mu_eps = geom.scaled_frequency(mode.mu);
        let l2 = mode_l2_norm_sq(mu_eps, mode)?;
        let mut en = mode_energy_sq(mu_eps, mode)? / (geom.ell * geom.ell);
        if mode.mu == 0.0 {
            out.l2_bullet_sq += l2;
            out.energy_bullet += en;
        } else {
            en += mode.mu * mode.mu / (geom.eps * geom.eps) * l2;
            out.l2_perp_sq += l2;
            out.energy_perp += en;
        }
    }
    Ok(out)
}

/// First Dirichlet eigenvalue `pi^2/ell^2` of the handle.
pub fn poincare_dirichlet_bound(ell: f64) -> f64 {
    let pi = std::f64::consts::PI;
    pi * pi / (ell * ell)
}

/// The seven convergence-rate constants of a handle configuration.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeltaBundle {
    pub delta_ball: f64,
    pub delta_harm: f64,
    pub delta_handle: f64,
    pub delta_harm_bullet: f64,
    pub delta_harm_perp: f64,
    pub delta_harm_prime: f64,
    pub delta_antisym: f64,
}

/// Computes the delta-family from the exact (non-asymptotic) manifold
/// constants `C_m`, `C'_m`:
///
/// * `delta_ball = C_m(eps, eta)`
/// * `delta_harm = (ell + eps)^{1/2} C'_m(eps, eta)`
/// * `delta_handle = ell/pi + delta_harm`
/// * `delta_harm_bullet = (2/ell)^{1/2} C'_m(eps, eta)`
/// * `delta_harm_perp = (2 (m-1)^{1/2} K^{(m+2)/2} (eps/ell + 1))^{1/2} C_m(eps, eta)`
/// * `delta_harm_prime = max{bullet, perp}`
/// * `delta_antisym^2 = (N K^{m/2}/m) (eta^m/eps^{m-2}) max{ell/eps, 4 [log(eta/eps)]_2}`
///
/// (the bracket `[..]_2` is `log` at `m = 2` and the multiplicative neutral
/// `1` otherwise, so the second entry of the max is the constant `4` for
/// `m >= 3`).
pub fn delta_bundle(geom: &HandleGeometry) -> Result<DeltaBundle, HandleError> {
    let m = geom.m;
    let mf = m as f64;
    let c_m = manifold_nonconc(m, geom.eps, geom.eta, &geom.mc)?;
    let c_tr = manifold_trace(m, geom.eps, geom.eta, &geom.mc)?;
    let delta_ball = c_m;
    let delta_harm = (geom.ell + geom.eps).sqrt() * c_tr;
    let delta_handle = geom.ell / std::f64::consts::PI + delta_harm;
    let delta_harm_bullet = (2.0 / geom.ell).sqrt() * c_tr;
    let k = geom.mc.k_distortion;
    let delta_harm_perp =
        (2.0 * (mf - 1.0).sqrt() * k.powf((mf + 2.0) / 2.0) * (geom.eps / geom.ell + 1.0)).sqrt() * c_m;
    let delta_harm_prime = delta_harm_bullet.max(delta_harm_perp);
    let bracket = log2_bracket(geom.eta / geom.eps, m)?;
    let antisym_sq = geom.mc.n_cover as f64 * k.powf(mf / 2.0) / mf
        * geom.eta.powi(m as i32) / geom.eps.powi(m as i32 - 2)
        * (geom.ell / geom.eps).max(4.0 * bracket);
    Ok(DeltaBundle {
        delta_ball,
        delta_harm,
        delta_handle,
        delta_harm_bullet,
        delta_harm_perp,
        delta_harm_prime,
        delta_antisym: antisym_sq.sqrt(),
    })
}

/// Asymptotic order of one delta-constant: `delta ~ eps^exponent` up to a
/// factor `|log eps|^{log_power/2}` (log factors occur only at `m = 2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaOrder {
    pub exponent: f64,
    /// Power of `|log eps|` in `delta^2`.
    pub log_power: f64,
}

/// Asymptotic orders of the seven delta-constants under the scaling
/// `eta = eps^alpha r0`, `ell = eps^lambda`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeltaOrders {
    pub ball: DeltaOrder,
    pub harm: DeltaOrder,
    pub handle: DeltaOrder,
    pub harm_bullet: DeltaOrder,
    pub harm_perp: DeltaOrder,
    pub harm_prime: DeltaOrder,
    pub antisym: DeltaOrder,
}

impl DeltaOrders {
    pub fn as_named(&self) -> [(&'static str, DeltaOrder); 7] {
        [
            ("delta_ball", self.ball),
            ("delta_harm", self.harm),
            ("delta_handle", self.handle),
            ("delta_harm_bullet", self.harm_bullet),
            ("delta_harm_perp", self.harm_perp),
            ("delta_harm_prime", self.harm_prime),
            ("delta_antisym", self.antisym),
        ]
    }
}

/// Exponent list of the delta-family.
///
/// With `P = min{m(1-alpha), 2}`:
///
/// * `delta_ball ~ eps^{P/2}`
/// * `delta_harm ~ eps^{(min{lambda-1,0}+P)/2}`
/// * `delta_handle ~ eps^{min{lambda, (min{lambda-1,0}+P)/2}}`
/// * `delta_harm_perp ~ eps^{(min{1-lambda,0}+P)/2}`
/// * `delta_harm_bullet ~ eps^{(-lambda-1+P)/2}`
/// * `delta_harm_prime ~ eps^{(-lambda-1+P)/2}`
/// * `delta_antisym ~ eps^{(min{lambda-1,0}+m*alpha-(m-2))/2}`
///
/// The `delta_handle` exponent takes the minimum of `lambda` (from the
/// `ell/pi` term) and the full `delta_harm` exponent.  At `m = 2` the
/// leading terms carry `|log eps|` factors exactly when `alpha = 0`
/// (constants) resp. `lambda >= 1` (antisymmetric estimate); these are
/// reported via [`DeltaOrder::log_power`] so that slope fits can compensate.
pub fn delta_orders(m: u32, alpha: f64, lambda: f64) -> Result<DeltaOrders, HandleError> {
    if !(0.0..1.0).contains(&alpha) || !(lambda > 0.0) {
        return Err(HandleError::Exponents(alpha, lambda));
    }
    let mf = m as f64;
    let p = (mf * (1.0 - alpha)).min(2.0);
    // log factor in the leading term of C_m^2 resp. C'_m^2 (m = 2 only)
    let lp_const = if m == 2 && alpha == 0.0 { 1.0 } else { 0.0 };
    let e_ball = p / 2.0;
    let e_harm = ((lambda - 1.0).min(0.0) + p) / 2.0;
    let e_handle = lambda.min(e_harm);
    let lp_handle = if e_harm <= lambda { lp_const } else { 0.0 };
    let e_bullet = (-lambda - 1.0 + p) / 2.0;
    let e_perp = ((1.0 - lambda).min(0.0) + p) / 2.0;
    let e_prime = e_bullet.min(e_perp);
    let e_antisym = ((lambda - 1.0).min(0.0) + mf * alpha - (mf - 2.0)) / 2.0;
    let lp_antisym = if m == 2 && lambda >= 1.0 { 1.0 } else { 0.0 };
    Ok(DeltaOrders {
        ball: DeltaOrder { exponent: e_ball, log_power: lp_const },
        harm: DeltaOrder { exponent: e_harm, log_power: lp_const },
        handle: DeltaOrder { exponent: e_handle, log_power: lp_handle },
        harm_bullet: DeltaOrder { exponent: e_bullet, log_power: lp_const },
        harm_perp: DeltaOrder { exponent: e_perp, log_power: lp_const },
        harm_prime: DeltaOrder { exponent: e_prime, log_power: lp_const },
        antisym: DeltaOrder { exponent: e_antisym, log_power: lp_antisym },
    })
}

/// Least-squares slope of `log y` against `log x`; returns `(slope,
/// residual_rms)`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..xs.len() {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for i in 0..xs.len() {
        let r = ly[i] - slope * lx[i] - intercept;
        ss += r * r;
    }
    (slope, (ss / n).sqrt())
}

/// Fitted log-log slopes of the seven delta-constants over an `eps` grid,
/// with the known `m = 2` log factors divided out before fitting.  Returns
/// `(name, fitted slope, predicted exponent)` per constant.
pub fn delta_slopes(
    m: u32,
    alpha: f64,
    lambda: f64,
    mc: &ManifoldConstants,
    eps_grid: &[f64],
) -> Result<[(&'static str, f64, f64); 7], HandleError> {
    let orders = delta_orders(m, alpha, lambda)?;
    let named = orders.as_named();
    let mut values: [Vec<f64>; 7] = Default::default();
    for &eps in eps_grid {
        let geom = HandleGeometry::from_exponents(m, eps, alpha, lambda, *mc)?;
        let b = delta_bundle(&geom)?;
        let raw = [
            b.delta_ball,
            b.delta_harm,
            b.delta_handle,
            b.delta_harm_bullet,
            b.delta_harm_perp,
            b.delta_harm_prime,
            b.delta_antisym,
        ];
        for i in 0..7 {
            // divide out |log eps|^{log_power/2}
            let lp = named[i].1.log_power;
            let compensated = raw[i] / (-eps.ln()).powf(lp / 2.0);
            values[i].push(compensated);
        }
    }
    let mut out = [("", 0.0, 0.0); 7];
    for i in 0..7 {
        let (slope, _res) = fit_loglog_slope(eps_grid, &values[i]);
        out[i] = (named[i].0, slope, named[i].1.exponent);
    }
    Ok(out)
}
