//! Sparse multivariate polynomials over ℚ(i).
//!
//! A [`Poly`] lives in a ring with a fixed number of variables. Terms are
//! stored in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! lexicographic; iteration in reverse gives the canonical printing order.
//! [`BiPoly`] layers the holomorphic/conjugate slot structure on top.

mod bipoly;
mod gaussian;
mod gcd;
mod numeric;
mod rational;
mod resultant;
mod roots;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

pub use bipoly::{BiPoly, Slot};
pub use gaussian::GaussianRational;
pub use gcd::{content, gcd, primitive_part, squarefree_and_content, RemovedFactor, RemovedKind};
pub use numeric::NumPoly;
pub use rational::{HolomorphicFn, NumRational, RationalFn};
pub use resultant::{determinant, resultant};
pub use roots::{polynomial_roots, RootCluster};

use crate::error::{Error, Result};

/// Exponent vector. Ordered by total degree, then lexicographically with the
/// first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables. No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, GaussianRational::one())
    }

    /// The variable with index `var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index {var} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[var] = 1;
        Poly::from_terms(nvars, [(e, GaussianRational::one())])
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector has wrong length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<GaussianRational> {
        if self.is_zero() {
            return Some(GaussianRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    /// Divide by the leading coefficient so that the leading term is monic.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, lc)) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn diff(&self, var: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            p.add_term(m2, c * &GaussianRational::from_integer(e as i64));
        }
        p
    }

    /// Substitute `images[k]` for variable `k`. All images must share one
    /// target ring; the result lives in that ring.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: images.len() });
        }
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::DimensionMismatch { expected: target, found: bad.nvars });
        }
        // Powers are cached per variable since monomials repeat exponents.
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[k].len() <= e as usize {
                    let next = cache[k].last().unwrap() * &images[k];
                    cache[k].push(next);
                }
                t = &t * &cache[k][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Re-embed into a ring with `nvars` variables; variable `k` goes to
    /// `mapping[k]`.
    pub fn remap(&self, nvars: usize, mapping: &[usize]) -> Poly {
        assert_eq!(mapping.len(), self.nvars);
        let mut p = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (k, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[mapping[k]] += x;
                }
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Coefficients with respect to `var`, indexed by degree. The returned
    /// polynomials stay in the same ring and do not involve `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(self.nvars); deg + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out[e].add_term(m2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(nvars: usize, var: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut m2 = m.clone();
                m2.0[var] += k as u32;
                out.add_term(m2, v.clone());
            }
        }
        out
    }

    /// Multivariate division by a single divisor under the graded order.
    /// The remainder is zero iff `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (lm, lc) = divisor.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lc_inv = lc.inv().unwrap();
        let mut q = Poly::zero(self.nvars);
        let mut r = Poly::zero(self.nvars);
        let mut p = self.clone();
        while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let qm = m.div(&lm);
                let qc = &c * &lc_inv;
                for (dm, dc) in &divisor.terms {
                    p.add_term(dm.mul(&qm), -(dc * &qc));
                }
                q.add_term(qm, qc);
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        Ok((q, r))
    }

    /// Exact quotient; `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn eval_exact(&self, point: &[GaussianRational]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= &x.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        NumPoly::from_poly(self).eval(point)
    }

    /// Largest coefficient modulus, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_complex().norm()).fold(0.0, f64::max)
    }

    /// Total bit size of the coefficients; used to break ties between
    /// otherwise equivalent results.
    pub fn coeff_size(&self) -> u64 {
        self.terms.values().map(GaussianRational::bit_size).sum()
    }

    /// True iff `other = c * self` for some nonzero constant `c`.
    pub fn is_proportional_to(&self, other: &Poly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.monic() == other.monic()
    }

    /// Render with the given variable names, highest term first.
    pub fn to_string_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| if e == 1 { names[k].clone() } else { format!("{}^{}", names[k], e) })
                .collect();
            let (neg, mag) = split_sign(c);
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_text = if mag == GaussianRational::i() {
                "i".to_string()
            } else if mag.is_real() || mag.re.is_zero() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            if mono.is_empty() {
                out.push_str(&coeff_text);
            } else {
                if !mag.is_one() {
                    let _ = write!(out, "{coeff_text}*");
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// Split a coefficient into a sign and a "positive-looking" magnitude so
/// that `-3/2*i` prints as ` - 3/2*i` inside a sum.
fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    use num_traits::Signed;
    let lead_negative = if c.re.is_zero() { c.im.is_negative() } else { c.re.is_negative() };
    if lead_negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

/// Default names `x1..xk` for a generic ring.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|k| format!("x{k}")).collect()
}

/// Names `z1..zn` for a ring of holomorphic coordinates.
pub fn z_names(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("z{k}")).collect()
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut p = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|c| -c)
    }
}

macro_rules! forward_poly {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_poly!(Add, add);
forward_poly!(Sub, sub);
forward_poly!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial(vec![1, 0, 1, 0]);
        let b = Monomial(vec![0, 1, 0, 1]);
        let c = Monomial(vec![3, 0, 0, 0]);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn printing_is_sorted_and_signed() {
        let names: Vec<String> = ["z1", "z2", "~w1", "~w2"].iter().map(|s| s.to_string()).collect();
        let p = Poly::from_terms(4, [(vec![1, 0, 1, 0], q(1)), (vec![0, 1, 0, 1], q(-1))]);
        assert_eq!(p.to_string_with(&names), "z1*~w1 - z2*~w2");
        let r = Poly::from_terms(
            4,
            [(vec![0, 0, 0, 0], GaussianRational::from_parts((1, 2), (-3, 4))), (vec![1, 0, 0, 0], -GaussianRational::i())],
        );
        assert_eq!(r.to_string_with(&names), "-i*z1 + (1/2-3/4*i)");
    }

    #[test]
    fn division_with_remainder() {
        // (x^2 - y) = (x - 1)(x + 1) + (1 - y)
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let one = Poly::one(2);
        let p = &(&x * &x) - &y;
        let d = &x - &one;
        let (qq, r) = p.div_rem(&d).unwrap();
        assert_eq!(&(&qq * &d) + &r, p);
        assert!(p.div_exact(&d).is_none());
        assert_eq!((&p * &d).div_exact(&d).unwrap(), p);
    }

    #[test]
    fn compose_checks_dimensions() {
        let x = Poly::var(2, 0);
        assert!(x.compose(&[Poly::var(1, 0)]).is_err());
        assert!(x.compose(&[Poly::var(1, 0), Poly::var(2, 0)]).is_err());
        let t = Poly::var(1, 0);
        assert_eq!(x.compose(&[t.clone(), Poly::zero(1)]).unwrap(), t);
    }

    #[test]
    fn univariate_view_round_trips() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        let t = Poly::var(3, 2);
        let p = &(&(&x * &t) * &t) + &(&y - &t);
        let cs = p.coeffs_in(2);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], y);
        assert_eq!(Poly::from_coeffs_in(3, 2, &cs), p);
    }
}
