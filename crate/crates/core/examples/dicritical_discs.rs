//! The cone |z1| = |z2|: a separating Segre point and the analytic discs
//! that shrink to its dicritical vertex.

use leviflat::fixtures;
use leviflat::hull::{attached_disc_family, find_separating_segre_point, DiscParams, SegreSearchParams};

fn main() -> leviflat::Result<()> {
    let cone = fixtures::cone();
    let found = find_separating_segre_point(&cone, &SegreSearchParams::default())?;
    let w0 = found.accepted.exact.clone();
    println!(
        "Segre point w0 = ({}, {}): min|ρ(z, w̄0)| over the annulus {:.4} (relative {:.4}), {} rejected",
        w0[0],
        w0[1],
        found.accepted.min_value,
        found.accepted.relative,
        found.rejected.len()
    );
    let eps = [0.3, 0.1, 0.03, 0.01];
    for d in attached_disc_family(&cone, &w0, &eps, &DiscParams::default())? {
        let circle = d.circle.as_ref().map(|c| format!("centre ({:.6}, {:.1e}) radius {:.6}", c.center[0], c.center[1], c.radius));
        println!(
            "ε = {:<5} boundary residual {:.1e}, max|z| {:.4}, {}",
            d.param,
            d.boundary_residual,
            d.max_abs,
            circle.unwrap_or_default()
        );
    }
    Ok(())
}
