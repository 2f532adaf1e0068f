//! The seven delta-constants along an eps-sweep, with fitted log-log slopes
//! against the predicted asymptotic exponents.
//!
//! ```text
//! cargo run --example delta_bundle_sweep
//! ```

use wormholes::constants::ManifoldConstants;
use wormholes::handles::{delta_bundle, delta_slopes, HandleGeometry};

fn main() {
    let mc = ManifoldConstants { r0: 0.5, ..ManifoldConstants::flat() };
    let (m, alpha, lambda) = (3u32, 0.0, 0.5);
    println!("delta-bundle at m={m}, alpha={alpha}, lambda={lambda} (eta = eps^a r0, ell = eps^l):");
    println!(
        "{:>9} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "eps", "ball", "harm", "handle", "bullet", "perp", "prime", "antisym"
    );
    for &eps in &[1e-2, 1e-3, 1e-4, 1e-5] {
        let geom = HandleGeometry::from_exponents(m, eps, alpha, lambda, mc).unwrap();
        let b = delta_bundle(&geom).unwrap();
        println!(
            "{eps:>9.0e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}",
            b.delta_ball,
            b.delta_harm,
            b.delta_handle,
            b.delta_harm_bullet,
            b.delta_harm_perp,
            b.delta_harm_prime,
            b.delta_antisym
        );
    }

    let eps_grid: Vec<f64> = (0..9).map(|i| 1e-9 * 10f64.powf(i as f64 / 4.0)).collect();
    println!("\nfitted slopes over eps in [1e-9, 1e-7] vs predicted exponents:");
    for &(m, alpha, lambda) in &[(3u32, 0.0, 0.5), (3, 0.8, 1.0), (2, 0.5, 1.0)] {
        println!("  (m, alpha, lambda) = ({m}, {alpha}, {lambda}):");
        for (name, slope, want) in delta_slopes(m, alpha, lambda, &mc, &eps_grid).unwrap() {
            println!("    {name:<18} fitted {slope:>8.4}  predicted {want:>8.4}");
        }
    }
}
