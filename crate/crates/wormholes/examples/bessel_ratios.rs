//! Modified Bessel functions and the ratio bundle behind the closed-form
//! trace constants.
//!
//! ```text
//! cargo run --example bessel_ratios
//! ```

use wormholes::bessel::*;

fn main() {
    println!("I_nu and K_nu at half-integer orders have elementary forms:");
    for &x in &[0.3, 1.0, 5.0] {
        let i = bessel_i(Order::new(0.5).unwrap(), EvalPoint::new(x).unwrap()).unwrap();
        let k = bessel_k(Order::new(0.5).unwrap(), EvalPoint::new(x).unwrap()).unwrap();
        let i_exact = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sinh();
        let k_exact = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp();
        println!(
            "  x={x:<4}: I_1/2 = {i:.12} ({i_exact:.12})   K_1/2 = {k:.12} ({k_exact:.12})"
        );
    }

    println!("\nWronskian I_nu K_nu+1 + I_nu+1 K_nu = 1/x:");
    for &(nu, x) in &[(0.0, 0.7), (1.5, 3.0), (2.0, 12.0)] {
        let o = Order::new(nu).unwrap();
        let o1 = Order::new(nu + 1.0).unwrap();
        let p = EvalPoint::new(x).unwrap();
        let w = bessel_i(o, p).unwrap() * bessel_k(o1, p).unwrap()
            + bessel_i(o1, p).unwrap() * bessel_k(o, p).unwrap();
        println!("  nu={nu} x={x}: {w:.15}  (1/x = {:.15})", 1.0 / x);
    }

    println!("\nratio bundle (monotone in x):");
    for &x in &[0.1, 0.5, 2.0] {
        let b = bessel_ratio_bundle(Order::new(0.5).unwrap(), EvalPoint::new(x).unwrap()).unwrap();
        println!("  x={x:<4}: IK = {:.6}  IK+ = {:.6}  KK+ = {:.6}", b.ik, b.ik_plus, b.kk_plus);
    }

    // out-of-range arguments come back as structured errors
    match EvalPoint::new(60.0) {
        Err(e) => println!("\nx = 60: {e}"),
        Ok(_) => unreachable!(),
    }
}
