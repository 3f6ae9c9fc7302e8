//! Tradeoff curves of K identical parallel channels and how unbalanced
//! weights degrade them.
//!
//! ```text
//! cargo run --example identical_channels
//! ```

use wdmt::{dmt_identical, validate_weights, Result};

fn main() -> Result<()> {
    let nt = 2;
    println!("two parallel {nt}x1 channels");
    for w in [[0.5, 0.5], [0.75, 0.25], [0.9, 0.1]] {
        let weights = validate_weights(&w)?;
        let curve = dmt_identical(2, nt, &weights)?;
        let corners: Vec<String> = curve
            .corners()
            .iter()
            .map(|c| format!("({}, {})", c.r, c.d))
            .collect();
        println!("  weights {w:?}: corners {}", corners.join(" "));
        for r in [0.25, 0.5, 1.0, 1.5] {
            println!("    d({r}) = {:.4}", curve.eval(r)?);
        }
    }
    Ok(())
}
