//! Named vertices of the parameter-range figures and the exact raster check
//! of the adhering region against its polygon.
//!
//! ```text
//! cargo run --example region_polygons
//! ```

use wormholes::regimes::*;

fn main() {
    for m in [3u32, 4, 5] {
        println!("m = {m}:");
        for fig in [Figure::FadingI, Figure::Adhering] {
            let pts = region_vertices(m, fig, None).unwrap();
            let row: Vec<String> = pts
                .iter()
                .map(|p| {
                    let l = match &p.lambda {
                        Coord::Finite(v) => v.clone(),
                        Coord::Infinity => "inf".into(),
                    };
                    format!("{}=({}, {l})", p.name, p.alpha)
                })
                .collect();
            println!("  {fig:?}: {}", row.join("  "));
        }
    }

    println!("\nadhering region equals the polygon B-F~-E~-C~ (raster 1/200):");
    for m in 2..=6u32 {
        let mismatches = rasterize_adhering_mismatches(m, 200).unwrap();
        println!("  m={m}: {mismatches} mismatched cells");
    }
}
