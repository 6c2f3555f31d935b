//! Symbolic and sampled Levi-flatness tests.

use leviflat::flatness::{is_levi_flat, FlatnessParams};
use leviflat::fixtures;
use leviflat::hypersurface::Hypersurface;

fn main() -> leviflat::Result<()> {
    let params = FlatnessParams::default();
    let extra = [("Re z1^2 + |z2|^2", "(z1^2 + ~z1^2)/2 + z2*~z2 - 1")];
    for (name, text) in fixtures::ALL.iter().copied().chain(extra) {
        let h = Hypersurface::parse(text)?.0;
        let c = is_levi_flat(&h, &params)?;
        print!("{name:>18}  {:?} flat={}", c.method, c.verdict);
        match c.quotient.as_deref() {
            Some("0") => print!("  Λ ≡ 0"),
            Some(q) => print!("  Λ = ({q})·ρ"),
            None => {}
        }
        if let Some(e) = c.max_eig {
            print!("  max|eig|/|∂ρ| = {e:.3e} over {} samples", c.samples);
        }
        println!();
    }
    Ok(())
}
