//! Adaptive Runge–Kutta integration and the radial shooting oracle.
//!
//! The oracle solves the radial equation
//!
//! ```text
//! -(1/s^{m-1}) (s^{m-1} f')' + (mu/s^2 + 1) f = 0
//! ```
//!
//! by a Dormand–Prince 5(4) pair, entirely independent of the Bessel-function
//! formulas it cross-checks.  For the ball problem the regular branch is
//! launched by a Frobenius series near the coordinate singularity at 0.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("invalid radii: need 0 < r < eta, got r={0}, eta={1}")]
    Radii(f64, f64),
    #[error("step size underflow at s={0} (residual control failed)")]
    StepUnderflow(f64),
    #[error("solution vanished at evaluation point; cannot normalise")]
    DegenerateSolution,
}

/// Dormand–Prince 5(4) coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = rhs(s, y)` from `s0` to `s1` (either direction) with an
/// embedded 5(4) pair at mixed tolerance `tol`.
pub fn rk45<F: Fn(f64, [f64; 2]) -> [f64; 2]>(
    rhs: F,
    s0: f64,
    s1: f64,
    y0: [f64; 2],
    tol: f64,
) -> Result<[f64; 2], OdeError> {
    let dir = if s1 > s0 { 1.0 } else { -1.0 };
    let mut s = s0;
    let mut y = y0;
    let mut h: f64 = dir * ((s1 - s0).abs() / 16.0).min(0.1).max(1e-12);
    let mut k = [[0.0f64; 2]; 7];
    while (s1 - s) * dir > 0.0 {
        if (s + h - s1) * dir > 0.0 {
            h = s1 - s;
        }
        k[0] = rhs(s, y);
        for stage in 0..6 {
            let mut yi = y;
            for j in 0..=stage {
                let a = A[stage][j];
                if a != 0.0 {
                    yi[0] += h * a * k[j][0];
                    yi[1] += h * a * k[j][1];
                }
            }
            k[stage + 1] = rhs(s + C[stage] * h, yi);
        }
        let mut y5 = y;
        let mut y4 = y;
        for j in 0..7 {
            y5[0] += h * B5[j] * k[j][0];
            y5[1] += h * B5[j] * k[j][1];
            y4[0] += h * B4[j] * k[j][0];
            y4[1] += h * B4[j] * k[j][1];
        }
        let scale0 = tol * (1.0 + y5[0].abs());
        let scale1 = tol * (1.0 + y5[1].abs());
        let err = (((y5[0] - y4[0]) / scale0).powi(2) + ((y5[1] - y4[1]) / scale1).powi(2)).sqrt()
            / std::f64::consts::SQRT_2;
        if err <= 1.0 {
            s += h;
            y = y5;
        }
        let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h *= factor.clamp(0.2, 5.0);
        if h.abs() < 1e-15 * (1.0 + s.abs()) {
            return Err(OdeError::StepUnderflow(s));
        }
    }
    Ok(y)
}

/// Boundary condition of the radial problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialBc {
    /// Annulus `r <= s <= eta` with `f(r) = 1`, `f'(eta) = 0`.
    Annulus,
    /// Ball `0 < s <= r`, regular at the origin, `g(r) = 1`.
    Ball,
}

/// Result of the shooting oracle: value (normalised to 1) and derivative at
/// the inner radius `r`.
#[derive(Debug, Clone, Copy)]
pub struct RadialSolution {
    pub value: f64,
    pub derivative: f64,
}

fn radial_rhs(m: u32, mu: f64) -> impl Fn(f64, [f64; 2]) -> [f64; 2] {
    let mm1 = (m - 1) as f64;
    move |s: f64, y: [f64; 2]| [y[1], -(mm1 / s) * y[1] + (mu / (s * s) + 1.0) * y[0]]
}

/// Frobenius launch of the regular solution `f = s^sigma (1 + a1 s^2 + ...)`
/// with `sigma = sqrt(nu^2 + mu) - nu`, `nu = (m-2)/2`, evaluated at `s0`.
fn regular_series(m: u32, mu: f64, s0: f64) -> [f64; 2] {
    let nu = (m as f64 - 2.0) / 2.0;
    let sigma = (nu * nu + mu).sqrt() - nu;
    let mut coeff = 1.0;
    let mut val = 1.0;
    let mut dval = 0.0; // derivative of the bracket series times s^... handled below
    let mut pow = 1.0;
    let s2 = s0 * s0;
    for k in 1..60 {
        let kf = k as f64;
        let denom = (sigma + 2.0 * kf) * (sigma + 2.0 * kf + m as f64 - 2.0) - mu;
        coeff /= denom;
        pow *= s2;
        let term = coeff * pow;
        val += term;
        dval += 2.0 * kf * term / s0;
        if term.abs() < 1e-18 * val.abs() {
            break;
        }
    }
    // f(s0) = s0^sigma * val ; f'(s0) = sigma s0^{sigma-1} val + s0^sigma dval
    let sp = s0.powf(sigma);
    [sp * val, sigma * sp / s0 * val + sp * dval]
}

/// Shooting solution of the radial problem.
///
/// Returns the normalised boundary data at `r`: `value = 1` and the radial
/// derivative there (negative for the annulus branch, positive for the
/// regular ball branch).  `mu >= 0` is the transversal eigenvalue parameter
/// (an eigenvalue of the sphere Laplacian, not its square root).
pub fn radial_shoot(
    m: u32,
    mu: f64,
    r: f64,
    eta: f64,
    bc: RadialBc,
) -> Result<RadialSolution, OdeError> {
    let tol = 1e-12;
    match bc {
        RadialBc::Annulus => {
            if !(0.0 < r && r < eta) {
                return Err(OdeError::Radii(r, eta));
            }
            // integrate from eta down to r with f(eta) = 1, f'(eta) = 0,
            // then rescale so that f(r) = 1.
            let y = rk45(radial_rhs(m, mu), eta, r, [1.0, 0.0], tol)?;
            if y[0] == 0.0 {
                return Err(OdeError::DegenerateSolution);
            }
            Ok(RadialSolution { value: 1.0, derivative: y[1] / y[0] })
        }
        RadialBc::Ball => {
            if r <= 0.0 {
                return Err(OdeError::Radii(r, eta));
            }
            // series launch close to zero, then integrate up to r
            let s0 = (r / 100.0).min(0.01);
            let y0 = regular_series(m, mu, s0);
            let y = rk45(radial_rhs(m, mu), s0, r, y0, tol)?;
            if y[0] == 0.0 {
                return Err(OdeError::DegenerateSolution);
            }
            Ok(RadialSolution { value: 1.0, derivative: y[1] / y[0] })
        }
    }
}
