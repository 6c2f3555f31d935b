//! Lens discs pushed into Brunella's hypersurface and how much of a small
//! ball around the origin they reach.

use leviflat::hull::{coverage, wedge_disc_family, CoverageParams, WedgeParams};

fn main() -> leviflat::Result<()> {
    let fam = wedge_disc_family(&WedgeParams::default())?;
    for s in &fam.summaries {
        println!(
            "δ = {:<6} {} discs, boundary residual {:.1e}, lens half-width {:.3}, max|z| {:.4}",
            s.delta, s.discs, s.max_boundary_residual, s.half_width, s.max_abs
        );
    }
    let cov = coverage(&fam, &CoverageParams::default());
    println!(
        "coverage of B(0, 0.05): {}/{} = {:.3}; real slice {:.3}; max |Im z1|, |Im z2| = {:.4}, {:.4}",
        cov.covered, cov.grid_points, cov.fraction, cov.real_slice_fraction, cov.max_imag[0], cov.max_imag[1]
    );
    Ok(())
}
