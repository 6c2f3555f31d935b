//! Moments of boundary data on slices of the cone and the Cauchy extension
//! when they vanish.

use leviflat::crext::{extendability_report, holomorphy_check, moments, trace_slice, BoundaryFn, SliceParams};
use leviflat::fixtures;
use leviflat::parse::parse_function;
use num_complex::Complex64;

fn main() -> leviflat::Result<()> {
    let cone = fixtures::cone();
    let sp = SliceParams::default();
    let bases: Vec<Vec<Complex64>> = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.1)].iter().map(|z| vec![*z]).collect();
    for text in ["z1^3/z2 + z2^3/z1", "z2^2", "~z2"] {
        let f = BoundaryFn::new(&parse_function(text, Some(2))?);
        let r = extendability_report(&cone, &f, &bases, 4, 1e-10, 3, &sp)?;
        println!("f = {text}: {}", serde_json::to_string(&r.result).unwrap_or_default());
        for row in &r.table.rows {
            let mu: Vec<String> = row.mu.iter().map(|m| format!("{:.2e}", m.norm())).collect();
            println!("  z = {:.2}  |μ_k| = [{}]", row.base[0], mu.join(", "));
        }
        if let Some(e) = r.extension.first() {
            println!("  F({:.3}+{:.3}i) = {:.6}+{:.6}i", e.w[0], e.w[1], e.value[0], e.value[1]);
        }
    }
    // μ0 of the obstructed data depends holomorphically on z
    let f = BoundaryFn::new(&parse_function("z1^3/z2 + z2^3/z1", Some(2))?);
    let h = 0.05;
    let grid: Vec<Vec<Complex64>> = (0..9)
        .map(|i| {
            (0..9)
                .map(|j| {
                    let z = Complex64::new(1.0 + h * (i as f64 - 4.0), h * (j as f64 - 4.0));
                    trace_slice(&cone, &[z], &sp).and_then(|c| moments(&f, &c, 0)).map(|m| m[0])
                })
                .collect()
        })
        .collect::<leviflat::Result<_>>()?;
    println!("max |∂μ0/∂z̄| on a 9×9 grid: {:.2e}", holomorphy_check(&grid, h)?);
    Ok(())
}
