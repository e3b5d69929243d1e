//! Complex polynomial root finding for the Weil-bound check.
//!
//! Durand-Kerner iteration on all roots simultaneously, followed by a
//! mandatory residual verification: a root is only reported if the
//! polynomial value at it is small relative to the coefficient magnitude,
//! otherwise the failure is reported as a distinct numeric error rather
//! than a wrong answer.

use crate::Error;
use num::complex::Complex64;

const MAX_ITERATIONS: usize = 2000;
const STEP_TOLERANCE: f64 = 1e-13;
const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// All complex roots of the polynomial with the given coefficients
/// (constant term first), with multiplicity.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    let max_norm = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if max_norm == 0.0 {
        return Err(Error::Numeric("zero polynomial has no well-defined roots".into()));
    }
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while let Some(last) = c.last() {
        if last.norm() <= 1e-12 * max_norm && c.len() > 1 {
            c.pop();
        } else {
            break;
        }
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();

    if deg == 1 {
        return Ok(vec![-monic[0]]);
    }

    // Cauchy bound on root magnitude for the initial circle.
    let radius = 1.0 + monic.iter().take(deg).map(|x| x.norm()).fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| seed.powu(k as u32 + 1) * radius / seed.norm().powi(k as i32 + 1) * 0.9f64.powi(k as i32 % 3))
        .collect();

    let eval = |x: Complex64| -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        for coeff in monic.iter().rev() {
            v = v * x + coeff;
        }
        v
    };

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    den *= roots[i] - roots[j];
                }
            }
            if den.norm() < 1e-300 {
                roots[i] += Complex64::new(1e-6, 1e-6);
                max_step = f64::INFINITY;
                continue;
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            let rel = step.norm() / (1.0 + roots[i].norm());
            if rel > max_step {
                max_step = rel;
            }
        }
        if max_step < STEP_TOLERANCE {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric("root iteration did not converge".into()));
    }

    for root in &roots {
        let scale: f64 = monic.iter().enumerate().map(|(i, x)| x.norm() * root.norm().powi(i as i32)).sum();
        let residual = eval(*root).norm();
        if residual > RESIDUAL_TOLERANCE * scale.max(1.0) {
            return Err(Error::Numeric(format!(
                "root residual {:.3e} too large at |x| = {:.6}",
                residual,
                root.norm()
            )));
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_and_linear_polynomials() {
        assert!(polynomial_roots(&[c(1.0)]).unwrap().is_empty());
        let r = polynomial_roots(&[c(-3.0), c(1.0)]).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - c(3.0)).norm() < 1e-10);
        assert!(polynomial_roots(&[c(0.0), c(0.0)]).is_err());
    }

    #[test]
    fn reversed_l_polynomial_roots() {
        // u^2 - 4u + 3 = (u - 1)(u - 3), the reversal of (1 - u)(1 - 3u).
        let mut r = polynomial_roots(&[c(3.0), c(-4.0), c(1.0)]).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(1.0)).norm() < 1e-9);
        assert!((r[1] - c(3.0)).norm() < 1e-9);
    }

    #[test]
    fn random_products_recover_their_roots() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let deg = rng.gen_range(2..=6);
            let wanted: Vec<Complex64> = (0..deg)
                .map(|_| Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
                .collect();
            let mut coeffs = vec![Complex64::new(1.0, 0.0)];
            for w in &wanted {
                let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
                for (i, &a) in coeffs.iter().enumerate() {
                    next[i] -= a * w;
                    next[i + 1] += a;
                }
                coeffs = next;
            }
            let got = polynomial_roots(&coeffs).unwrap();
            assert_eq!(got.len(), deg);
            let mut wanted_moduli: Vec<f64> = wanted.iter().map(|w| w.norm()).collect();
            let mut got_moduli: Vec<f64> = got.iter().map(|w| w.norm()).collect();
            wanted_moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
            got_moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in wanted_moduli.iter().zip(&got_moduli) {
                assert!((a - b).abs() < 1e-7, "moduli {} vs {}", a, b);
            }
        }
    }

    #[test]
    fn repeated_roots_are_found_with_multiplicity() {
        // (u - 2)^2 = u^2 - 4u + 4.
        let r = polynomial_roots(&[c(4.0), c(-4.0), c(1.0)]).unwrap();
        assert_eq!(r.len(), 2);
        for root in r {
            assert!((root - c(2.0)).norm() < 1e-4);
        }
    }
}
