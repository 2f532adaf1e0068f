//! Classifying parameter points: which convergence result applies at
//! (m, alpha, lambda), with exact rational rate exponents.
//!
//! ```text
//! cargo run --example regime_map
//! ```

use wormholes::regimes::*;

fn main() {
    let points = [
        (3u32, "0", "1/2", Scale::Power),
        (3, "0", "2", Scale::Power),
        (3, "4/5", "1", Scale::Power),
        (3, "2/5", "1", Scale::Power),
        (2, "1/10", "9/10", Scale::Power),
        (2, "1/4", "1", Scale::Log),
        (5, "11/20", "1", Scale::Power),
    ];
    for (m, a, l, scale) in points {
        let p = ParamPoint::new(m, parse_rational(a).unwrap(), parse_rational(l).unwrap(), scale)
            .unwrap();
        let rep = build_report(&p, &ReportOptions::default()).unwrap();
        let applicable: Vec<String> = rep
            .classifications
            .iter()
            .filter(|c| c.applicable)
            .map(|c| {
                let rate = match c.rate.as_ref().unwrap() {
                    Rate::Power { exponent } => format!("eps^{exponent}"),
                    Rate::LogRate { log_power, loglog_power } => {
                        format!("|log eps|^-{log_power} |loglog eps|^{loglog_power}")
                    }
                };
                format!("{}: {rate}", c.theorem)
            })
            .collect();
        println!(
            "m={m} alpha={a:<5} lambda={l:<4} ({:?}):",
            scale
        );
        if rep.uncovered {
            println!("  uncovered (no result applies)");
        } else {
            for a in applicable {
                println!("  {a}");
            }
            let (thm, rate) = rep.best.unwrap();
            println!("  best: {thm} at {rate:?}");
        }
        if rep.coupled_boundary_case {
            println!("  note: on the coupled-operator boundary segment C-E-F");
        }
    }

    // the fading-I corollary/proof exponent discrepancy, reported side by side
    let p = ParamPoint::power(3, q(0, 1), q(2, 1)).unwrap();
    let corollary = classify_fading1(&p, None, false).unwrap().rate.unwrap();
    let proof = classify_fading1(&p, None, true).unwrap().rate.unwrap();
    println!("\nfading-I exponent at (3, 0, 2): corollary form {corollary:?}, proof-gamma form {proof:?}");
}
