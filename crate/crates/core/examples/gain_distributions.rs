//! Effective gains of zero-forcing and dirty-paper precoding follow
//! Gamma laws whose shape is the number of free transmit dimensions.
//!
//! ```text
//! cargo run --release --example gain_distributions
//! ```

use wdmt::sim::{validate_gains, MonteCarloPlan};
use wdmt::{validate_weights, Result, Scenario};

fn main() -> Result<()> {
    let plan = MonteCarloPlan::new(500_000, 11, 4);
    let scenarios = [
        Scenario::bc_zf(3, validate_weights(&[0.5, 0.5])?)?,
        Scenario::bc_dpc(3, validate_weights(&[0.6, 0.4])?)?,
        Scenario::bc_dpc(4, validate_weights(&[0.2, 0.5, 0.3])?)?,
    ];
    for s in &scenarios {
        println!(
            "{} M={} weights {:?}",
            s.kind(),
            s.transmit_antennas().unwrap(),
            s.weights().as_slice()
        );
        for r in validate_gains(s, plan)? {
            println!(
                "  user {}: Gamma({}) mean {:.4} var {:.4} KS {:.5} (crit {:.5}) {}",
                r.user + 1,
                r.shape,
                r.mean,
                r.variance,
                r.ks_statistic,
                r.ks_critical,
                if r.pass { "ok" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
