//! Polynomials in `n` holomorphic slots and `n` conjugate slots.

use num_complex::Complex64;

use super::{GaussianRational, Monomial, NumPoly, Poly};
use crate::error::{Error, Result};

/// A slot of a [`BiPoly`]: `Z(k)` is `z_{k+1}`, `Conj(k)` is its conjugate
/// (or `w̄_{k+1}` after complexification).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Z(usize),
    Conj(usize),
}

impl Slot {
    pub fn index(self, n: usize) -> usize {
        match self {
            Slot::Z(k) => k,
            Slot::Conj(k) => n + k,
        }
    }
}

/// `Σ c_IJ z^I ζ^J` where `ζ` stands for `z̄` or, after complexification, `w̄`.
/// Variables `0..n` are the holomorphic slots, `n..2n` the conjugate ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    n: usize,
    poly: Poly,
}

impl BiPoly {
    pub fn new(n: usize, poly: Poly) -> Result<Self> {
        if poly.nvars() != 2 * n {
            return Err(Error::DimensionMismatch { expected: 2 * n, found: poly.nvars() });
        }
        Ok(BiPoly { n, poly })
    }

    pub fn zero(n: usize) -> Self {
        BiPoly { n, poly: Poly::zero(2 * n) }
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        BiPoly { n, poly: Poly::constant(2 * n, c) }
    }

    pub fn slot(n: usize, s: Slot) -> Self {
        BiPoly { n, poly: Poly::var(2 * n, s.index(n)) }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, c: &GaussianRational) -> BiPoly {
        BiPoly { n: self.n, poly: self.poly.scale(c) }
    }

    /// `P†`: the coefficient at `(I, J)` becomes `conj(c_JI)`.
    pub fn hermitian_transpose(&self) -> BiPoly {
        let n = self.n;
        let mut out = Poly::zero(2 * n);
        for (m, c) in self.poly.terms() {
            let mut e = Vec::with_capacity(2 * n);
            e.extend_from_slice(&m.0[n..]);
            e.extend_from_slice(&m.0[..n]);
            out.add_term(Monomial(e), c.conj());
        }
        BiPoly { n, poly: out }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_transpose() == *self
    }

    pub fn diff(&self, slot: Slot) -> BiPoly {
        BiPoly { n: self.n, poly: self.poly.diff(slot.index(self.n)) }
    }

    /// Replace the listed slots by polynomials of the same dimension.
    pub fn substitute(&self, assignments: &[(Slot, BiPoly)]) -> Result<BiPoly> {
        let n = self.n;
        let mut images: Vec<Poly> = (0..2 * n).map(|k| Poly::var(2 * n, k)).collect();
        for (slot, img) in assignments {
            if img.n != n {
                return Err(Error::DimensionMismatch { expected: n, found: img.n });
            }
            images[slot.index(n)] = img.poly.clone();
        }
        Ok(BiPoly { n, poly: self.poly.compose(&images)? })
    }

    /// Substitute constants into the listed slots.
    pub fn substitute_constants(&self, assignments: &[(Slot, GaussianRational)]) -> Result<BiPoly> {
        let n = self.n;
        let subs: Vec<(Slot, BiPoly)> =
            assignments.iter().map(|(s, c)| (*s, BiPoly::constant(n, c.clone()))).collect();
        self.substitute(&subs)
    }

    /// The holomorphic polynomial `P(z, w̄)` for a fixed exact `w`, as a
    /// polynomial in `n` variables.
    pub fn freeze_conjugate(&self, w: &[GaussianRational]) -> Result<Poly> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: w.len() });
        }
        let n = self.n;
        let mut images: Vec<Poly> = (0..n).map(|k| Poly::var(n, k)).collect();
        images.extend(w.iter().map(|c| Poly::constant(n, c.conj())));
        self.poly.compose(&images)
    }

    /// `P(z, w̄)`; the conjugate slots receive `conj(w)`.
    pub fn eval(&self, z: &[Complex64], w: &[Complex64]) -> Complex64 {
        NumPoly::from_poly(&self.poly).eval(&self.point(z, w))
    }

    pub fn eval_exact(&self, z: &[GaussianRational], w: &[GaussianRational]) -> GaussianRational {
        assert_eq!(z.len(), self.n);
        assert_eq!(w.len(), self.n);
        let mut p: Vec<GaussianRational> = z.to_vec();
        p.extend(w.iter().map(GaussianRational::conj));
        self.poly.eval_exact(&p)
    }

    /// The point `(z, conj w)` in the `2n` variable ring.
    pub fn point(&self, z: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(z.len(), self.n);
        assert_eq!(w.len(), self.n);
        z.iter().copied().chain(w.iter().map(|c| c.conj())).collect()
    }

    pub fn slot_names(n: usize, conj_prefix: &str) -> Vec<String> {
        (1..=n)
            .map(|k| format!("z{k}"))
            .chain((1..=n).map(|k| format!("{conj_prefix}{k}")))
            .collect()
    }

    /// Canonical text with conjugates printed as `~z1..~zn`.
    pub fn to_conj_string(&self) -> String {
        self.poly.to_string_with(&Self::slot_names(self.n, "~z"))
    }

    /// Canonical text with conjugates printed as `~w1..~wn`.
    pub fn to_complexified_string(&self) -> String {
        self.poly.to_string_with(&Self::slot_names(self.n, "~w"))
    }
}

impl std::ops::Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        BiPoly { n: self.n, poly: &self.poly + &o.poly }
    }
}

impl std::ops::Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        BiPoly { n: self.n, poly: &self.poly - &o.poly }
    }
}

impl std::ops::Mul<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        BiPoly { n: self.n, poly: &self.poly * &o.poly }
    }
}
