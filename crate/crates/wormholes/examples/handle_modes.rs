//! Harmonic profiles on a thin cylinder: per-mode norms and energies, the
//! stated bounds, and the bullet/perp splitting of a harmonic extension.
//!
//! ```text
//! cargo run --example handle_modes
//! ```

use num_complex::Complex64;
use wormholes::constants::ManifoldConstants;
use wormholes::handles::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn main() {
    println!("mode profile h^mu on [0,1] with h(0) = a-, h(1) = a+:");
    let d = ModeBoundaryData::new(2.0, c(1.0), c(0.0)).unwrap();
    for &s in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("  h^2({s:.2}) = {:.6}", mode_profile(2.0, &d, s).unwrap().re);
    }

    println!("\nexact norms against the bounds (1/2 resp. 2/(3mu), 2 resp. mu+2):");
    for &(mu, ap, am) in &[(0.0, 1.0, 0.0), (1.0, 1.0, 0.0), (3.0, 1.0, -1.0), (12.0, 0.3, 0.9)] {
        let d = ModeBoundaryData::new(mu, c(ap), c(am)).unwrap();
        let sum = ap * ap + am * am;
        let n = mode_l2_norm_sq(mu, &d).unwrap();
        let e = mode_energy_sq(mu, &d).unwrap();
        let nb = if mu == 0.0 { 0.5 * sum } else { 2.0 / (3.0 * mu) * sum };
        let eb = if mu == 0.0 { 2.0 * sum } else { (mu + 2.0) * sum };
        println!(
            "  mu={mu:<4} a=({ap:+},{am:+}): |h|^2 = {n:.6} <= {nb:.6}   |dh|^2 = {e:.6} <= {eb:.6}"
        );
    }

    let geom = HandleGeometry::new(3, 0.05, 0.15, 0.3, ManifoldConstants::flat()).unwrap();
    let modes = [
        ModeBoundaryData::new(0.0, c(0.8), c(-0.1)).unwrap(),
        ModeBoundaryData::new(2.0f64.sqrt(), c(0.5), c(0.2)).unwrap(),
        ModeBoundaryData::new(6.0f64.sqrt(), c(-0.3), c(0.4)).unwrap(),
    ];
    let ext = harmonic_extension(&geom, &modes).unwrap();
    let total = handle_energy(&geom, &modes).unwrap();
    println!("\nharmonic extension on a handle (m=3, eps=0.05, ell=0.15):");
    println!("  |h_bullet|^2 = {:.6}   |h_perp|^2 = {:.6}", ext.l2_bullet_sq, ext.l2_perp_sq);
    println!(
        "  q(h_bullet) + q(h_perp) = {:.6} + {:.6} = {:.6}  (direct total {:.6})",
        ext.energy_bullet,
        ext.energy_perp,
        ext.energy_total(),
        total
    );
    println!(
        "  first Dirichlet eigenvalue bound pi^2/ell^2 = {:.4}",
        poincare_dirichlet_bound(geom.ell)
    );
}
