//! Refinement study of the discrete cylinder's first Dirichlet eigenvalue
//! against pi^2/ell^2.
//!
//! ```text
//! cargo run --example cylinder_dirichlet
//! ```

use wormholes::handles::{fit_loglog_slope, poincare_dirichlet_bound};
use wormholes::spectra::{build_cylinder, eigenvalues};

fn main() {
    let (eps, ell) = (0.1, 0.5);
    let want = poincare_dirichlet_bound(ell);
    println!("cylinder [0, {ell}] x {eps} S^1, Dirichlet ends; target pi^2/ell^2 = {want:.6}");
    let mut hs = Vec::new();
    let mut errs = Vec::new();
    for &n_long in &[8u32, 16, 32, 64, 128] {
        let g = build_cylinder(eps, ell, n_long, 12, true).unwrap();
        let lam = eigenvalues(&g, 1).unwrap()[0];
        let err = (lam - want).abs();
        println!("  n_long = {n_long:>3}: lambda_1 = {lam:.6}  error = {err:.3e}");
        hs.push(ell / n_long as f64);
        errs.push(err);
    }
    let (slope, _) = fit_loglog_slope(&hs, &errs);
    println!("fitted order in the longitudinal spacing: {slope:.3} (expected 2)");
}
