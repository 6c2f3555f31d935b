//! Multivariate gcd, content and squarefree parts over ℚ(i).
//!
//! The gcd is computed recursively: content with respect to the highest
//! variable present, then a primitive pseudo-remainder sequence on the
//! primitive parts. Results are normalized to a monic leading term.

use super::Poly;
use crate::error::{Error, Result};

fn main_var(a: &Poly, b: &Poly) -> Option<usize> {
    (0..a.nvars()).rev().find(|&v| a.involves(v) || b.involves(v))
}

/// Pseudo-remainder of `a` by `b` in `var`. The result equals
/// `lc(b)^k a mod b` for some `k`, which is all a primitive sequence needs.
fn pseudo_rem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let bc = b.coeffs_in(var);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.coeffs_in(var)[dr as usize].clone();
        let shift = &lr * &Poly::var(r.nvars(), var).pow(dr - db);
        r = &(&r * &lb) - &(&shift * b);
    }
    r
}

/// Gcd of the coefficients of `p` seen as a polynomial in `var`.
pub fn content(p: &Poly, var: usize) -> Poly {
    let mut g = Poly::zero(p.nvars());
    for c in p.coeffs_in(var) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one(p.nvars());
        }
    }
    g
}

/// `p / content(p, var)`, normalized.
pub fn primitive_part(p: &Poly, var: usize) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p, var);
    p.div_exact(&c).expect("content divides").monic()
}

/// Monic greatest common divisor. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let nvars = a.nvars();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let Some(v) = main_var(a, b) else {
        return Poly::one(nvars);
    };
    let ca = content(a, v);
    let cb = content(b, v);
    let cont = gcd(&ca, &cb);
    let mut r0 = a.div_exact(&ca).expect("content divides");
    let mut r1 = b.div_exact(&cb).expect("content divides");
    if r0.degree_in(v) < r1.degree_in(v) {
        std::mem::swap(&mut r0, &mut r1);
    }
    let g = loop {
        if r1.degree_in(v) == 0 {
            // r1 is primitive and free of v, hence a unit.
            break Poly::one(nvars);
        }
        let r = pseudo_rem(&r0, &r1, v);
        if r.is_zero() {
            break primitive_part(&r1, v);
        }
        r0 = r1;
        r1 = primitive_part(&r, v);
    };
    (&cont * &g).monic()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RemovedKind {
    /// Factor free of the main variable.
    Content,
    /// Repeated factor, divided out once per extra multiplicity.
    Repeated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovedFactor {
    pub kind: RemovedKind,
    pub factor: Poly,
}

/// Squarefree part of `p` with respect to `var`, after dividing out the
/// content. Also returns the removed factors (constants are not logged).
pub fn squarefree_and_content(p: &Poly, var: usize) -> Result<(Poly, Vec<RemovedFactor>)> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut log = Vec::new();
    let c = content(p, var);
    if !c.is_constant() {
        log.push(RemovedFactor { kind: RemovedKind::Content, factor: c.clone() });
    }
    let pp = p.div_exact(&c).expect("content divides");
    if pp.degree_in(var) == 0 {
        return Ok((pp.monic(), log));
    }
    let g = gcd(&pp, &pp.diff(var));
    if !g.is_constant() {
        log.push(RemovedFactor { kind: RemovedKind::Repeated, factor: g.clone() });
    }
    let sqf = pp.div_exact(&g).expect("gcd divides");
    Ok((sqf.monic(), log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::GaussianRational;

    fn c(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    // ring (z1, z2, p)
    fn v(k: usize) -> Poly {
        Poly::var(3, k)
    }

    #[test]
    fn gcd_of_products() {
        let (z1, z2, p) = (v(0), v(1), v(2));
        let f = &(&z1 * &z2) - &p;
        let g1 = &(&z1 * &z1) + &p;
        let g2 = &z2 - &Poly::constant(3, GaussianRational::i());
        let a = &f * &g1;
        let b = &(&f * &g2) * &z1;
        assert_eq!(gcd(&a, &b), f.monic());
        assert!(gcd(&g1, &g2).is_constant());
        assert_eq!(gcd(&Poly::zero(3), &a), a.monic());
    }

    #[test]
    fn squarefree_examples() {
        let (z1, z2, p) = (v(0), v(1), v(2));
        // (z2 - z1^2)^2 in z1
        let base = &z2 - &(&z1 * &z1);
        let (s, log) = squarefree_and_content(&base.pow(2), 0).unwrap();
        assert!(s.is_proportional_to(&base));
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].kind, RemovedKind::Repeated);
        // z1 (p^2 - 4 z2) in p
        let web = &(&p * &p) - &z2.scale(&c(4));
        let (s, log) = squarefree_and_content(&(&z1 * &web), 2).unwrap();
        assert!(s.is_proportional_to(&web));
        assert_eq!(log, vec![RemovedFactor { kind: RemovedKind::Content, factor: z1.clone() }]);
        // irreducible input is unchanged up to scaling
        let (s, log) = squarefree_and_content(&web, 2).unwrap();
        assert!(s.is_proportional_to(&web));
        assert!(log.is_empty());
        assert!(squarefree_and_content(&Poly::zero(3), 2).is_err());
    }
}
