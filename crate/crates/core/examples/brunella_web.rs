//! The 2-web of Brunella's example at the origin, direction by direction.

use leviflat::fixtures;
use leviflat::web::{compute_web, WebParams};

fn main() -> leviflat::Result<()> {
    let h = fixtures::brunella();
    let web = compute_web(&h, &WebParams { directions: 4, ..Default::default() })?;
    for d in &web.directions {
        match (&d.phi, &d.error) {
            (Some(phi), _) => println!("b = ({}, {})  deg_t = {:?}  Φ = {phi}", d.b[0], d.b[1], d.deg_t),
            (None, Some(e)) => println!("b = ({}, {})  skipped: {e}", d.b[0], d.b[1]),
            _ => {}
        }
    }
    println!("combined: {} = 0, d = {}", web.text, web.d);
    for line in &web.log {
        println!("  {line}");
    }
    Ok(())
}
