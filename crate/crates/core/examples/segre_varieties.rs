//! Segre varieties of the shipped hypersurfaces at the origin and at a
//! nearby point, and the symmetry `z ∈ Q_w ⟺ w ∈ Q_z`.

use leviflat::fixtures;
use leviflat::parse::parse_point;

fn main() -> leviflat::Result<()> {
    let origin = parse_point("0,0")?;
    let near = parse_point("1/2,1/2")?;
    for (name, text) in fixtures::ALL {
        let h = leviflat::hypersurface::Hypersurface::parse(text)?.0;
        let q0 = h.segre(&origin)?;
        let q1 = h.segre(&near)?;
        let tag = if q0.degenerate { "  (degenerate)" } else { "" };
        println!("{name:>10}  Q_0 = {}{tag}", if q0.text.is_empty() { "0" } else { &q0.text });
        println!("{:>10}  Q_(1/2,1/2) = {}", "", q1.text);
        println!("{:>10}  symmetric: {}", "", h.segre_symmetry_exact(&origin, &near));
    }
    Ok(())
}
