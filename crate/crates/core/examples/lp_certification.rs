//! The closed-form exponent is the optimum of a small linear program.
//! This solves the LP three ways for one instance and compares them.
//!
//! ```text
//! cargo run --example lp_certification
//! ```

use wdmt::{lp_greedy, lp_grid, lp_vertex, validate_weights, AntennaProfile, LpForm, LpInstance, Result};

fn main() -> Result<()> {
    let profile = AntennaProfile::new(vec![3, 1, 2])?;
    let weights = validate_weights(&[0.2, 0.3, 0.5])?;
    let resolution = 200;
    let bound = 3.0 * f64::from(*profile.as_slice().iter().max().unwrap()) / f64::from(resolution);

    println!("  r    greedy    vertex    lattice   alpha (greedy)");
    for i in 0..=6 {
        let r = 0.5 * f64::from(i);
        let greedy = lp_greedy(&profile, &weights, r)?;
        let vertex = lp_vertex(&LpInstance::for_rate(&profile, &weights, r, LpForm::Alpha)?)?;
        let grid = lp_grid(
            &LpInstance::for_rate(&profile, &weights, r, LpForm::Scaled)?,
            resolution,
        )?;
        assert!((greedy.d - vertex.d).abs() <= 1e-9);
        assert!(grid.d >= vertex.d - 1e-9 && grid.d - vertex.d <= bound + 1e-9);
        println!(
            "{r:4.1}  {:8.5}  {:8.5}  {:8.5}   {:?}",
            greedy.d,
            vertex.d,
            grid.d,
            greedy
                .alpha
                .iter()
                .map(|a| (a * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        );
    }
    println!("lattice error bound at resolution {resolution}: {bound}");
    Ok(())
}
