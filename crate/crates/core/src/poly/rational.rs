use num_complex::Complex64;

use super::{BiPoly, GaussianRational, NumPoly, Poly, Slot};
use crate::error::{Error, Result};

/// Quotient of two [`BiPoly`]s of the same dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub num: BiPoly,
    pub den: BiPoly,
}

impl RationalFn {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if num.dim() != den.dim() {
            return Err(Error::DimensionMismatch { expected: num.dim(), found: den.dim() });
        }
        Ok(RationalFn { num, den }.simplified())
    }

    pub fn polynomial(p: BiPoly) -> Self {
        let n = p.dim();
        RationalFn { num: p, den: BiPoly::constant(n, GaussianRational::one()) }
    }

    pub fn dim(&self) -> usize {
        self.num.dim()
    }

    /// Fold constant denominators into the numerator and cancel an exact
    /// polynomial quotient when there is one.
    pub fn simplified(self) -> Self {
        let n = self.num.dim();
        if let Some(c) = self.den.poly().constant_value() {
            let inv = c.inv().expect("nonzero denominator");
            return RationalFn {
                num: self.num.scale(&inv),
                den: BiPoly::constant(n, GaussianRational::one()),
            };
        }
        if let Some(q) = self.num.poly().div_exact(self.den.poly()) {
            return RationalFn {
                num: BiPoly::new(n, q).unwrap(),
                den: BiPoly::constant(n, GaussianRational::one()),
            };
        }
        self
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.poly().is_constant()
    }

    /// True iff no conjugate slot occurs.
    pub fn is_holomorphic(&self) -> bool {
        let n = self.dim();
        (n..2 * n).all(|k| !self.num.poly().involves(k) && !self.den.poly().involves(k))
    }

    /// Numerator and denominator as polynomials in `z` alone.
    pub fn holomorphic_parts(&self) -> Result<(Poly, Poly)> {
        if !self.is_holomorphic() {
            return Err(Error::InvalidInput("function depends on conjugate variables".into()));
        }
        let n = self.dim();
        let map: Vec<usize> = (0..2 * n).map(|k| k.min(n - 1)).collect();
        Ok((self.num.poly().remap(n, &map), self.den.poly().remap(n, &map)))
    }

    /// Value at `z` (conjugate slots receive `conj z`). Returns `None` at a
    /// pole.
    pub fn eval(&self, z: &[Complex64]) -> Option<Complex64> {
        let d = self.den.eval(z, z);
        if d.norm() == 0.0 {
            return None;
        }
        Some(self.num.eval(z, z) / d)
    }

    pub fn numeric(&self) -> NumRational {
        NumRational {
            n: self.dim(),
            num: NumPoly::from_poly(self.num.poly()),
            den: NumPoly::from_poly(self.den.poly()),
        }
    }

    pub fn add(&self, o: &RationalFn) -> RationalFn {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RationalFn { num, den: &self.den * &o.den }.simplified()
    }

    pub fn sub(&self, o: &RationalFn) -> RationalFn {
        let num = &(&self.num * &o.den) - &(&o.num * &self.den);
        RationalFn { num, den: &self.den * &o.den }.simplified()
    }

    pub fn mul(&self, o: &RationalFn) -> RationalFn {
        RationalFn { num: &self.num * &o.num, den: &self.den * &o.den }.simplified()
    }

    pub fn div(&self, o: &RationalFn) -> Result<RationalFn> {
        if o.num.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(RationalFn { num: &self.num * &o.den, den: &self.den * &o.num }.simplified())
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn { num: self.num.scale(&-GaussianRational::one()), den: self.den.clone() }
    }

    pub fn pow(&self, k: u32) -> RationalFn {
        RationalFn {
            num: BiPoly::new(self.dim(), self.num.poly().pow(k)).unwrap(),
            den: BiPoly::new(self.dim(), self.den.poly().pow(k)).unwrap(),
        }
        .simplified()
    }

    pub fn slot(n: usize, s: Slot) -> RationalFn {
        RationalFn::polynomial(BiPoly::slot(n, s))
    }

    pub fn to_conj_string(&self) -> String {
        if self.is_polynomial() {
            self.num.to_conj_string()
        } else {
            format!("({})/({})", self.num.to_conj_string(), self.den.to_conj_string())
        }
    }
}

/// Floating copy of a [`RationalFn`].
#[derive(Clone, Debug)]
pub struct NumRational {
    n: usize,
    num: NumPoly,
    den: NumPoly,
}

impl NumRational {
    pub fn eval(&self, z: &[Complex64]) -> Option<Complex64> {
        let mut x: Vec<Complex64> = z.to_vec();
        x.extend(z.iter().map(|c| c.conj()));
        debug_assert_eq!(x.len(), 2 * self.n);
        let d = self.den.eval(&x);
        if d.norm() == 0.0 {
            return None;
        }
        Some(self.num.eval(&x) / d)
    }

    /// Value and denominator modulus, for pole diagnostics.
    pub fn eval_with_den(&self, z: &[Complex64]) -> (Complex64, f64) {
        let mut x: Vec<Complex64> = z.to_vec();
        x.extend(z.iter().map(|c| c.conj()));
        let d = self.den.eval(&x);
        (self.num.eval(&x) / d, d.norm())
    }
}

/// Floating holomorphic function `N(z)/D(z)` with its gradient.
#[derive(Clone, Debug)]
pub struct HolomorphicFn {
    num: NumPoly,
    den: NumPoly,
    dnum: Vec<NumPoly>,
    dden: Vec<NumPoly>,
}

impl HolomorphicFn {
    pub fn new(f: &RationalFn) -> Result<Self> {
        let (n, d) = f.holomorphic_parts()?;
        let k = f.dim();
        Ok(HolomorphicFn {
            num: NumPoly::from_poly(&n),
            den: NumPoly::from_poly(&d),
            dnum: (0..k).map(|j| NumPoly::from_poly(&n.diff(j))).collect(),
            dden: (0..k).map(|j| NumPoly::from_poly(&d.diff(j))).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dnum.len()
    }

    /// Denominator modulus, for pole checks.
    pub fn den_abs(&self, z: &[Complex64]) -> f64 {
        self.den.eval(z).norm()
    }

    pub fn value(&self, z: &[Complex64]) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn gradient(&self, z: &[Complex64]) -> Vec<Complex64> {
        let n = self.num.eval(z);
        let d = self.den.eval(z);
        self.dnum
            .iter()
            .zip(&self.dden)
            .map(|(a, b)| (a.eval(z) * d - n * b.eval(z)) / (d * d))
            .collect()
    }
}
