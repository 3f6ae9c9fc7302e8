//! Weighted-sum-rate broadcast channel: zero-forcing against dirty-paper
//! coding, through their equivalent parallel channels.
//!
//! ```text
//! cargo run --example broadcast_zf_dpc
//! ```

use wdmt::{validate_weights, Result, Scenario};

fn main() -> Result<()> {
    let m = 3;
    let zf = Scenario::bc_zf(m, validate_weights(&[0.5, 0.5])?)?;
    let dpc = Scenario::bc_dpc(m, validate_weights(&[0.6, 0.4])?)?;

    for s in [&zf, &dpc] {
        let curve = s.dmt_curve()?;
        println!(
            "{} M={m} K={} weights {:?}: equivalent antennas {:?}",
            s.kind(),
            s.k(),
            s.weights().as_slice(),
            s.equivalent_profile().as_slice()
        );
        for c in curve.corners() {
            println!("  corner ({:.3}, {:.3})", c.r, c.d);
        }
    }

    println!("\n  r     d_ZF   d_DPC");
    let (cz, cd) = (zf.dmt_curve()?, dpc.dmt_curve()?);
    for i in 0..=8 {
        let r = 0.25 * f64::from(i);
        println!("{r:5.2}  {:5.3}  {:5.3}", cz.eval(r)?, cd.eval(r)?);
    }
    Ok(())
}
