//! Sampled singular locus of Brunella's hypersurface with the stick flag.

use leviflat::fixtures;
use leviflat::hypersurface::SingularParams;
use leviflat::sampling::Region;

fn main() {
    let h = fixtures::brunella();
    let report = h.singular_locus(&Region::cube(2, 1.0), &SingularParams::default());
    println!("system: {}", report.system.join(" = 0, "));
    let sticks = report.samples.iter().filter(|s| s.stick).count();
    println!("{} samples, {sticks} flagged as stick", report.samples.len());
    for s in report.samples.iter().step_by(report.samples.len().max(12) / 12) {
        let p = &s.point;
        println!(
            "  x1 = {:+.3}  y1 = {:+.1e}  x2 = {:+.3}  y2 = {:+.1e}  {}",
            p[0],
            p[1],
            p[2],
            p[3],
            if s.stick { "stick" } else { "" }
        );
    }
}
