//! Dirichlet-to-Neumann spectrum on the unit sphere and the fourth-root
//! operator inequality `mu_k^2 <= (m-1) lambda_k^2`.
//!
//! ```text
//! cargo run --example dtn_sphere
//! ```

use wormholes::constants::{dtn_sphere_eigenvalue, verify_muf};

fn main() {
    println!("lambda_k = sqrt(k(k+m-2) + nu^2) - nu, nu = (m-2)/2; lambda_1 = 1 for all m:");
    for m in [2u32, 3, 5, 8] {
        let row: Vec<String> =
            (0..6).map(|k| format!("{:.4}", dtn_sphere_eigenvalue(m, k).unwrap())).collect();
        println!("  m={m}: {}", row.join("  "));
    }

    println!("\nslack of mu_k^2 <= (m-1) lambda_k^2 (zero exactly at m = 2):");
    for m in [2u32, 3, 5] {
        let slacks = verify_muf(m, 6).unwrap();
        let row: Vec<String> = slacks.iter().map(|s| format!("{:+.3e}", s.slack)).collect();
        println!("  m={m}: {}", row.join("  "));
    }
}
