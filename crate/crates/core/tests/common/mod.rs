#![allow(dead_code)]

use std::path::PathBuf;

use leviflat::poly::{BiPoly, GaussianRational, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(format!("{name}.lf"))
}

pub fn gr(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_parts((re, 1), (im, 1))
}

fn small(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::from_parts((rng.gen_range(-3..=3), rng.gen_range(1..=3)), (rng.gen_range(-3..=3), 1))
}

/// Random polynomial in `(z1, z2, z̄1, z̄2)`, Hermitian by construction:
/// every `c z^a z̄^b` is paired with `c̄ z^b z̄^a`. Never constant.
pub fn random_hermitian(rng: &mut ChaCha8Rng) -> BiPoly {
    loop {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=5) {
            let a = [rng.gen_range(0..=2), rng.gen_range(0..=2)];
            let b = [rng.gen_range(0..=2), rng.gen_range(0..=2)];
            let c = small(rng);
            terms.push((vec![a[0], a[1], b[0], b[1]], c.clone()));
            terms.push((vec![b[0], b[1], a[0], a[1]], c.conj()));
        }
        let p = Poly::from_terms(4, terms);
        if !p.is_constant() {
            return BiPoly::new(2, p).expect("four variables");
        }
    }
}

/// Random polynomial in four variables with no symmetry.
pub fn random_bipoly(rng: &mut ChaCha8Rng) -> BiPoly {
    let terms: Vec<(Vec<u32>, GaussianRational)> =
        (0..rng.gen_range(1..=6)).map(|_| ((0..4).map(|_| rng.gen_range(0..=3)).collect(), small(rng))).collect();
    BiPoly::new(2, Poly::from_terms(4, terms)).expect("four variables")
}

pub fn random_point(rng: &mut ChaCha8Rng) -> Vec<GaussianRational> {
    (0..2).map(|_| small(rng)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p = c q` for some nonzero constant `c`, checked term by term.
pub fn proportional(p: &Poly, q: &Poly) -> bool {
    let Some((m, qc)) = q.terms().next() else { return false };
    let pc = p.coeff(m);
    if pc.is_zero() || p.len() != q.len() {
        return false;
    }
    let ratio = &pc * &qc.inv().expect("nonzero coefficient");
    q.terms().all(|(m, c)| p.coeff(m) == &ratio * c)
}
