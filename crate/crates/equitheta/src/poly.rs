//! Dense univariate polynomials over any [`CoeffRing`].
//!
//! One polynomial engine serves every layer of the crate: `F_q[t]` for
//! places and moduli, `Z[G][u]` for equivariant L-polynomials, and
//! `Z[x]/Phi_N [u]` for character-transformed series. Coefficients are
//! stored low degree first with no trailing zeros, so the zero polynomial
//! is the empty vector and representation equality is polynomial equality
//! (the underlying rings keep elements canonical).

use crate::ring::{CoeffRing, InvRing};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R: CoeffRing> {
    coeffs: Vec<R::Elem>,
}

impl<R: CoeffRing> Poly<R> {
    pub fn zero() -> Poly<R> {
        Poly { coeffs: vec![] }
    }

    pub fn one(ring: &R) -> Poly<R> {
        Poly::from_coeffs(ring, vec![ring.one()])
    }

    pub fn constant(ring: &R, c: R::Elem) -> Poly<R> {
        Poly::from_coeffs(ring, vec![c])
    }

    /// `x` as a polynomial.
    pub fn gen(ring: &R) -> Poly<R> {
        Poly::from_coeffs(ring, vec![ring.zero(), ring.one()])
    }

    pub fn from_coeffs(ring: &R, mut coeffs: Vec<R::Elem>) -> Poly<R> {
        while coeffs.last().map(|c| ring.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, ring: &R, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, ring: &R, other: &Poly<R>) -> Poly<R> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.add(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        Poly::from_coeffs(ring, out)
    }

    pub fn sub(&self, ring: &R, other: &Poly<R>) -> Poly<R> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.sub(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        Poly::from_coeffs(ring, out)
    }

    pub fn neg(&self, ring: &R) -> Poly<R> {
        Poly::from_coeffs(ring, self.coeffs.iter().map(|c| ring.neg(c)).collect())
    }

    pub fn scale(&self, ring: &R, s: &R::Elem) -> Poly<R> {
        Poly::from_coeffs(ring, self.coeffs.iter().map(|c| ring.mul(c, s)).collect())
    }

    pub fn mul(&self, ring: &R, other: &Poly<R>) -> Poly<R> {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !ring.is_zero(b) {
                    out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
                }
            }
        }
        Poly::from_coeffs(ring, out)
    }

    /// Product with every coefficient of degree above `dmax` discarded.
    pub fn mul_truncated(&self, ring: &R, other: &Poly<R>, dmax: usize) -> Poly<R> {
        let mut out = vec![ring.zero(); dmax + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(dmax + 1) {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(dmax + 1 - i) {
                if !ring.is_zero(b) {
                    out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
                }
            }
        }
        Poly::from_coeffs(ring, out)
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, ring: &R, k: usize) -> Poly<R> {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ring.zero(); k];
        out.extend(self.coeffs.iter().cloned());
        Poly::from_coeffs(ring, out)
    }

    /// Horner evaluation.
    pub fn eval(&self, ring: &R, x: &R::Elem) -> R::Elem {
        let mut acc = ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = ring.add(&ring.mul(&acc, x), c);
        }
        acc
    }

    /// Applies a coefficient map into another ring.
    pub fn map<S: CoeffRing, F: Fn(&R::Elem) -> S::Elem>(&self, target: &S, f: F) -> Poly<S> {
        Poly::from_coeffs(target, self.coeffs.iter().map(|c| f(c)).collect())
    }

    pub fn fmt_with(&self, ring: &R, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !ring.is_zero(c))
            .map(|(i, c)| match i {
                0 => format!("({})", ring.fmt_elem(c)),
                1 => format!("({})*{}", ring.fmt_elem(c), var),
                _ => format!("({})*{}^{}", ring.fmt_elem(c), var, i),
            })
            .collect();
        terms.join(" + ")
    }
}

impl<R: InvRing> Poly<R> {
    /// Quotient and remainder; the divisor's leading coefficient must be a
    /// unit (always true over a field).
    pub fn div_rem(&self, ring: &R, divisor: &Poly<R>) -> (Poly<R>, Poly<R>) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = ring
            .inv(divisor.leading().unwrap())
            .expect("divisor leading coefficient must be a unit");
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![ring.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = ring.mul(&rem[i], &lead_inv);
            if ring.is_zero(&c) {
                continue;
            }
            quo[i - dd] = c.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = ring.sub(&rem[i - dd + j], &ring.mul(&c, d));
            }
        }
        (Poly::from_coeffs(ring, quo), Poly::from_coeffs(ring, rem))
    }

    pub fn rem(&self, ring: &R, divisor: &Poly<R>) -> Poly<R> {
        self.div_rem(ring, divisor).1
    }

    /// Monic gcd over a field.
    pub fn gcd(&self, ring: &R, other: &Poly<R>) -> Poly<R> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(ring, &b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading() {
            let s = ring.inv(lead).expect("gcd over a field");
            a.scale(ring, &s)
        } else {
            a
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntRing, ModRing};
    use num::BigInt;

    fn zp(cs: &[i64]) -> Poly<IntRing> {
        Poly::from_coeffs(&IntRing, cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn arithmetic_and_normalization() {
        let r = IntRing;
        let a = zp(&[1, 2]);
        let b = zp(&[-1, -2]);
        assert!(a.add(&r, &b).is_zero());
        // (1 + 2x)(3 + x) = 3 + 7x + 2x^2.
        assert_eq!(a.mul(&r, &zp(&[3, 1])), zp(&[3, 7, 2]));
        assert_eq!(a.mul(&r, &zp(&[3, 1])).degree(), Some(2));
        assert_eq!(zp(&[5]).degree(), Some(0));
        assert_eq!(Poly::<IntRing>::zero().degree(), None);
    }

    #[test]
    fn truncated_mul_matches_full_mul_below_cutoff() {
        let r = IntRing;
        let a = zp(&[1, 1, 1, 1]);
        let b = zp(&[2, 0, 5]);
        let full = a.mul(&r, &b);
        let trunc = a.mul_truncated(&r, &b, 3);
        for i in 0..=3 {
            assert_eq!(full.coeff(&r, i), trunc.coeff(&r, i));
        }
        assert!(trunc.degree().unwrap() <= 3);
    }

    #[test]
    fn eval_by_horner() {
        let r = IntRing;
        // 1 - 2x + x^2 at x = 3 is 4.
        assert_eq!(zp(&[1, -2, 1]).eval(&r, &BigInt::from(3)), BigInt::from(4));
    }

    #[test]
    fn div_rem_over_modular_field() {
        let r = ModRing::new(BigInt::from(5));
        let a = Poly::from_coeffs(&r, vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        let d = Poly::from_coeffs(&r, vec![BigInt::from(2), BigInt::from(1)]);
        let (q, rem) = a.div_rem(&r, &d);
        // x^2 + 1 = (x + 2)(x + 3) + 0 mod 5.
        assert_eq!(
            q,
            Poly::from_coeffs(&r, vec![BigInt::from(3), BigInt::from(1)])
        );
        assert!(rem.is_zero());
        let g = a.gcd(&r, &d);
        assert_eq!(g, d);
    }
}
