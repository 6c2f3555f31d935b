//! Web of Im(z1 z2) = 0, extraction of its first integral and a check of
//! candidate integrals.

use leviflat::parse::parse_function;
use leviflat::web::{build_line_family, compute_web, IntegralOutcome, WebParams};
use leviflat::fixtures;
use leviflat::poly::GaussianRational;

fn main() -> leviflat::Result<()> {
    let h = fixtures::im_z1z2();
    let web = compute_web(&h, &WebParams::default())?;
    println!("web: {} = 0 (d = {})", web.text, web.d);
    let b = [GaussianRational::from_integer(1), GaussianRational::from_integer(1)];
    for (name, g) in [("Im(z1 z2)", &h), ("Re z2", &fixtures::hyperplane())] {
        match build_line_family(g, b.clone())?.extract_first_integral()? {
            IntegralOutcome::Available { integral } => println!("{name}: extracted integral {}", integral.to_conj_string()),
            IntegralOutcome::Unavailable { reason } => println!("{name}: no integral extracted ({reason})"),
        }
    }
    for cand in ["z1*z2", "(z1*z2)^2 + 3", "z1/z2", "z1 + z2"] {
        let f = parse_function(cand, Some(2))?;
        let check = web.verify_first_integral(&f)?;
        println!("{cand:>14}: holds = {}", check.holds);
    }
    Ok(())
}
