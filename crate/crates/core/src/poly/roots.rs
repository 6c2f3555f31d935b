//! Roots of univariate complex polynomials (Aberth–Ehrlich iteration).

use num_complex::Complex64;

/// A cluster of numerically coincident roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    // coeffs[k] multiplies x^k
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Roots of `Σ coeffs[k] x^k`, grouped into clusters of radius
/// `cluster_tol` (relative to `1 + |root|`). Exact zero roots are split off
/// before iterating. Returns `None` when the polynomial is identically zero.
pub fn polynomial_roots(coeffs: &[Complex64], cluster_tol: f64) -> Option<Vec<RootCluster>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let tiny = scale * 1e-300;
    let mut deg = coeffs.len() - 1;
    while coeffs[deg].norm() <= tiny {
        deg -= 1;
    }
    let low = coeffs.iter().take_while(|c| c.norm() <= tiny).count();
    let core: Vec<Complex64> = coeffs[low..=deg].to_vec();
    let mut roots: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); low];
    let m = core.len() - 1;
    if m > 0 {
        let lead = core[m];
        let monic: Vec<Complex64> = core.iter().map(|c| c / lead).collect();
        // Cauchy bound for the initial circle.
        let radius = 1.0 + monic[..m].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..m)
            .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / m as f64))
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..m {
                let (p, dp) = horner(&monic, z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let repulsion: Complex64 = (0..m)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let d = z[i] - z[j];
                        if d.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { 1.0 / d }
                    })
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                if step.is_finite() {
                    z[i] -= step;
                    moved = moved.max(step.norm() / (1.0 + z[i].norm()));
                }
            }
            if moved < 1e-15 {
                break;
            }
        }
        roots.extend(z);
    }
    let mut clusters: Vec<(Vec<Complex64>, Complex64)> = Vec::new();
    for r in roots {
        match clusters
            .iter_mut()
            .find(|(_, c)| (*c - r).norm() <= cluster_tol * (1.0 + c.norm()))
        {
            Some((members, centre)) => {
                members.push(r);
                *centre = members.iter().sum::<Complex64>() / members.len() as f64;
            }
            None => clusters.push((vec![r], r)),
        }
    }
    let mut out: Vec<RootCluster> = clusters
        .into_iter()
        .map(|(m, c)| RootCluster { value: c, multiplicity: m.len() })
        .collect();
    out.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadratic_and_double_root() {
        // t^2 - 4
        let r = polynomial_roots(&[c(-4.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-6).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].value - c(-2.0, 0.0)).norm() < 1e-12);
        assert!((r[1].value - c(2.0, 0.0)).norm() < 1e-12);
        // t^2
        let r = polynomial_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.5)], 1e-6).unwrap();
        assert_eq!(r, vec![RootCluster { value: c(0.0, 0.0), multiplicity: 2 }]);
        assert!(polynomial_roots(&[c(0.0, 0.0)], 1e-6).is_none());
    }

    #[test]
    fn cubic_with_complex_roots() {
        // (t - i)(t + i)(t - 3) = t^3 - 3 t^2 + t - 3
        let r = polynomial_roots(&[c(-3.0, 0.0), c(1.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0)], 1e-8).unwrap();
        let vals: Vec<Complex64> = r.iter().map(|x| x.value).collect();
        for want in [c(0.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)] {
            assert!(vals.iter().any(|v| (v - want).norm() < 1e-10), "missing {want}");
        }
    }
}
