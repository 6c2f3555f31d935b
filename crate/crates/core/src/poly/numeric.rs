use num_complex::Complex64;

use super::Poly;

/// Floating-point copy of a [`Poly`] for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct NumPoly {
    nvars: usize,
    max_exp: Vec<u32>,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl NumPoly {
    pub fn from_poly(p: &Poly) -> Self {
        let nvars = p.nvars();
        let mut max_exp = vec![0u32; nvars];
        let terms: Vec<(Vec<u32>, Complex64)> = p
            .terms()
            .map(|(m, c)| {
                for (k, &e) in m.0.iter().enumerate() {
                    max_exp[k] = max_exp[k].max(e);
                }
                (m.0.clone(), c.to_complex())
            })
            .collect();
        NumPoly { nvars, max_exp, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.nvars);
        let powers: Vec<Vec<Complex64>> = x
            .iter()
            .zip(&self.max_exp)
            .map(|(&v, &e)| {
                let mut p = Vec::with_capacity(e as usize + 1);
                p.push(Complex64::new(1.0, 0.0));
                for k in 1..=e as usize {
                    let prev = p[k - 1];
                    p.push(prev * v);
                }
                p
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(*c, |acc, (k, &ek)| if ek == 0 { acc } else { acc * powers[k][ek as usize] })
            })
            .sum()
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}
