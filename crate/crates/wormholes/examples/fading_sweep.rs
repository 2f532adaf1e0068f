//! Fading handles: a fixed sparse wormhole between two tori fades away and
//! the spectrum returns to the disjoint pair.
//!
//! ```text
//! cargo run --example fading_sweep
//! ```

use wormholes::spectra::{fading_sweep, FadingConfig};

fn main() {
    let cfg = FadingConfig { n: 48, lambda: 0.5, centers: vec![[0.5, 0.5]], k: 6 };
    let eps = [0.4, 0.2, 0.1, 0.05];
    let out = fading_sweep(&cfg, &eps, false).unwrap();
    println!("two unit tori, one handle pair at (0.5, 0.5), ell = eps^(1/2)");
    println!("limit (disjoint pair): {:?}", rounded(&out.study.limit_eigenvalues));
    for (i, e) in out.study.eps_values.iter().enumerate() {
        println!(
            "eps = {e:<5}: lambda = {:?}  distance = {:.2}",
            rounded(&out.study.eigenvalues[i]),
            out.study.distances[i]
        );
    }
    let ratios: Vec<f64> =
        out.study.distances.windows(2).map(|w| (w[0] / w[1] * 100.0).round() / 100.0).collect();
    println!("per-halving reduction: {ratios:?}");
    for r in &out.study.fitted_rates {
        println!(
            "fitted rate of lambda_{}: slope {:.2} (residual {:.2})",
            r.eigenvalue_index, r.slope, r.residual_rms
        );
    }
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 100.0).round() / 100.0).collect()
}
