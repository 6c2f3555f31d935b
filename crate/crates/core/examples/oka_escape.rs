//! Escape paths in the value plane of the first integral z1 z2 of
//! Im(z1 z2) = 0, and the blocked control {|z1| = 1}.

use leviflat::cli::random_probes;
use leviflat::fixtures;
use leviflat::hull::{image_of_first_integral, probe_escape, EscapeOutcome, ImageParams, SeparationParams};
use leviflat::parse::parse_function;
use leviflat::poly::HolomorphicFn;
use num_complex::Complex64;

fn main() -> leviflat::Result<()> {
    let h = fixtures::im_z1z2();
    let f = HolomorphicFn::new(&parse_function("z1*z2", Some(2))?)?;
    let image = image_of_first_integral(&h, &f, &ImageParams { half_width: Some(2.0), grid: Some(0.01), ..Default::default() })?;
    println!(
        "image: {} samples, {} masked cells of size {} in [-{w}, {w}]^2",
        image.samples.len(),
        image.masked_count(),
        image.h,
        w = image.half_width
    );
    let sep = SeparationParams::default();
    for q in random_probes(&h, &f, &image, 5, 0) {
        let probe = probe_escape(&h, &f, &image, &q, &sep)?;
        match &probe.outcome {
            EscapeOutcome::Certificate(c) => println!(
                "q = ({:.3}, {:.3})  f(q) = {:.4}  path of {} cells, clearance {:.3}, valid {}",
                q[0],
                q[1],
                f.value(&q),
                c.path.len(),
                c.clearance,
                c.validate(&image)
            ),
            other => println!("q = ({:.3}, {:.3})  {other:?}", q[0], q[1]),
        }
    }

    let circle = fixtures::circle();
    let g = HolomorphicFn::new(&parse_function("z1", Some(2))?)?;
    let image = image_of_first_integral(&circle, &g, &ImageParams { radius: 2.0, ..Default::default() })?;
    for q in [[0.0, 0.0], [3.0, 0.0]] {
        let q = [Complex64::new(q[0], 0.0), Complex64::new(q[1], 0.0)];
        let probe = probe_escape(&circle, &g, &image, &q, &sep)?;
        let label = match &probe.outcome {
            EscapeOutcome::Certificate(c) => format!("certificate ({:?})", c.kind),
            EscapeOutcome::Blocked(b) => format!("blocked after {} cells", b.reached_cells),
            EscapeOutcome::Undetermined { reason } => format!("undetermined: {reason}"),
        };
        println!("|z1| = 1, q = ({}, {}): {label}", q[0].re, q[1].re);
    }
    Ok(())
}
