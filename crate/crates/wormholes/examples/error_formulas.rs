//! Evaluating the explicit total-error formulas of the convergence theorems
//! at concrete handle radii, with the per-term breakdown.
//!
//! ```text
//! cargo run --example error_formulas
//! ```

use wormholes::constants::ManifoldConstants;
use wormholes::regimes::*;

fn main() {
    let mc = ManifoldConstants::flat();
    let cases = [
        (Theorem::FadingII, ParamPoint::power(3, q(0, 1), q(1, 2)).unwrap()),
        (Theorem::FadingI, ParamPoint::power(3, q(0, 1), q(2, 1)).unwrap()),
        (Theorem::AdheringGeneral, ParamPoint::power(3, q(4, 5), q(1, 1)).unwrap()),
        (Theorem::AdheringTwoCopies, ParamPoint::power(2, q(1, 10), q(9, 10)).unwrap()),
    ];
    for (thm, p) in cases {
        println!("{thm} at (m={}, alpha={}, lambda={}):", p.m, q_str(p.alpha), q_str(p.lambda));
        for &eps in &[1e-2, 1e-3, 1e-4] {
            let inputs = ErrorInputs { eps, eps_tilde: None, mc };
            let e = error_estimate(thm, &p, &inputs).unwrap();
            println!("  eps = {eps:<6}: total = {:.4e}   dominant: {}", e.total, e.dominant);
        }
        let inputs = ErrorInputs { eps: 1e-3, eps_tilde: None, mc };
        let e = error_estimate(thm, &p, &inputs).unwrap();
        for (name, v) in &e.terms {
            println!("    {name:<55} {v:.4e}");
        }
    }
}
