//! Sylvester resultants via fraction-free (Bareiss) elimination.

use super::Poly;
use crate::error::{Error, Result};

/// Determinant of a square matrix of polynomials by Bareiss elimination.
/// Every division in the recurrence is exact.
pub fn determinant(mut m: Vec<Vec<Poly>>, nvars: usize) -> Poly {
    let size = m.len();
    if size == 0 {
        return Poly::one(nvars);
    }
    let mut sign_flip = false;
    let mut prev = Poly::one(nvars);
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            m[i][k] = Poly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let det = m[size - 1][size - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

/// `Res_var(p, q)`, the determinant of the Sylvester matrix in `var`.
/// The result lives in the same ring and does not involve `var`.
pub fn resultant(p: &Poly, q: &Poly, var: usize) -> Result<Poly> {
    let nvars = p.nvars();
    if q.nvars() != nvars {
        return Err(Error::DimensionMismatch { expected: nvars, found: q.nvars() });
    }
    if p.is_zero() || q.is_zero() {
        return Ok(Poly::zero(nvars));
    }
    let dp = p.degree_in(var) as usize;
    let dq = q.degree_in(var) as usize;
    if dp == 0 && dq == 0 {
        return Err(Error::NothingToEliminate);
    }
    let cp = p.coeffs_in(var);
    let cq = q.coeffs_in(var);
    let size = dp + dq;
    let mut m = vec![vec![Poly::zero(nvars); size]; size];
    // Rows 0..dq hold shifted coefficients of p (highest degree first),
    // rows dq..size those of q.
    for r in 0..dq {
        for (k, c) in cp.iter().rev().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..dp {
        for (k, c) in cq.iter().rev().enumerate() {
            m[dq + r][r + k] = c.clone();
        }
    }
    Ok(determinant(m, nvars))
}
