//! Non-identical parallel channels: the ranked corner construction, and
//! the weights that turn the curve into a straight line.
//!
//! ```text
//! cargo run --example different_channels
//! ```

use wdmt::{dmt_different, optimal_weights, ordering, validate_weights, AntennaProfile, Result};

fn show(label: &str, profile: &AntennaProfile, w: &[f64]) -> Result<()> {
    let weights = validate_weights(w)?;
    let curve = dmt_different(profile, &weights)?;
    let order = ordering(&weights, profile)?;
    println!("{label}: weights {w:?}, channels ranked {:?}", order.perm());
    for c in curve.corners() {
        println!("  corner r = {:.4}, d = {:.4}", c.r, c.d);
    }
    Ok(())
}

fn main() -> Result<()> {
    let profile = AntennaProfile::new(vec![2, 1])?;
    show("uniform", &profile, &[0.5, 0.5])?;
    show("favouring the weak channel", &profile, &[0.2, 0.8])?;

    let best = optimal_weights(&profile);
    show("proportional to antennas", &profile, best.as_slice())?;

    let profile = AntennaProfile::new(vec![3, 2, 1])?;
    let best = optimal_weights(&profile);
    let curve = dmt_different(&profile, &best)?;
    println!(
        "profile (3,2,1) with weights {:?}: d(0) = {}, d(1.5) = {}",
        best.as_slice(),
        curve.max_diversity(),
        curve.eval(1.5)?
    );
    Ok(())
}
