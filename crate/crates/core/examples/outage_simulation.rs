//! Monte Carlo outage probability of a single Rayleigh link, checked
//! against its closed form.
//!
//! ```text
//! cargo run --release --example outage_simulation
//! ```

use wdmt::sim::{outage_sweep, scalar_rayleigh_outage, MonteCarloPlan, OperatingPoint};
use wdmt::{validate_weights, Result, Scenario};

fn main() -> Result<()> {
    let scenario = Scenario::parallel_identical(1, validate_weights(&[1.0])?)?;
    let plan = MonteCarloPlan::new(1_000_000, 7, 4);
    let points: Vec<OperatingPoint> = [0.25, 0.5, 0.75]
        .iter()
        .flat_map(|&r| [10.0, 20.0, 30.0].map(|db| OperatingPoint::new(r, db)))
        .collect();

    println!("   r  SNR dB      p_hat        95% CI              exact");
    for e in outage_sweep(&scenario, &points, plan)? {
        let exact = scalar_rayleigh_outage(e.rho(), e.r);
        println!(
            "{:4.2}  {:6.1}  {:.4e}  [{:.4e}, {:.4e}]  {:.4e} {}",
            e.r,
            e.rho_db,
            e.p_hat,
            e.ci_low,
            e.ci_high,
            exact,
            if e.covers(exact) { "" } else { "(outside CI)" }
        );
    }
    Ok(())
}
