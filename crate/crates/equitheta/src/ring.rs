//! Coefficient rings as runtime objects.
//!
//! Every algebraic structure in this crate (polynomials, group rings,
//! ideal lattices) is generic over a coefficient ring. Rings whose
//! definition needs runtime data (a modulus, a cyclotomic index) cannot
//! expose their operations through plain operator traits, so the ring is
//! a value and elements are inert data: all arithmetic goes through the
//! ring handle. Supported rings:
//!
//! * [`IntRing`]: arbitrary-precision integers.
//! * [`RatRing`]: arbitrary-precision rationals.
//! * [`ModRing`]: integers modulo an arbitrary `N >= 2`, canonical
//!   representatives in `[0, N)`.
//! * [`CycRing`]: the cyclotomic integer ring `Z[x]/Phi_N(x)`, elements
//!   stored as coefficient vectors of length `deg Phi_N`. Equality is
//!   exact, which is what makes character-transform identities checkable
//!   without floating point.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

/// A commutative ring with identity, presented as a runtime object.
///
/// Elements carry no back-reference to their ring; the caller must only
/// combine elements created by the same handle. All implementations keep
/// elements in canonical form, so `PartialEq` on elements is ring equality.
pub trait CoeffRing: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Canonical image of an integer under `Z -> R`.
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }
    fn pow(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Rings in which unit inversion is decidable and implemented.
pub trait InvRing: CoeffRing {
    /// Multiplicative inverse, `None` when `a` is not a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

// ---- Z ----

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRing;

impl CoeffRing for IntRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

impl InvRing for IntRing {
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
}

// ---- Q ----

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatRing;

impl CoeffRing for RatRing {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

impl InvRing for RatRing {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

// ---- Z/N ----

/// Integers modulo `N`, `N >= 2`. Representatives are reduced to `[0, N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModRing {
    modulus: BigInt,
}

impl ModRing {
    pub fn new(modulus: BigInt) -> ModRing {
        assert!(modulus >= BigInt::from(2), "modulus must be >= 2");
        ModRing { modulus }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn reduce(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&self.modulus)
    }
}

impl CoeffRing for ModRing {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        self.reduce(&BigInt::one())
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a + b))
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        self.reduce(&(-a))
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a - b))
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.reduce(&(a * b))
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        self.reduce(n)
    }
    fn fmt_elem(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

impl InvRing for ModRing {
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        mod_inverse(a, &self.modulus)
    }
}

// ---- Z[x]/Phi_N ----

/// Cyclotomic integers `Z[x]/Phi_N(x)`. Elements are coefficient vectors
/// of length `deg Phi_N`, low degree first, always fully reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycRing {
    n: u64,
    phi: Vec<BigInt>,
}

impl CycRing {
    pub fn new(n: u64) -> CycRing {
        assert!(n >= 1);
        CycRing {
            n,
            phi: cyclotomic_polynomial(n),
        }
    }

    pub fn index(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Coefficients of `Phi_N`, low degree first, monic.
    pub fn modulus_poly(&self) -> &[BigInt] {
        &self.phi
    }

    /// The residue class of `x^e` with `e` taken mod `N`.
    pub fn root_power(&self, e: i64) -> Vec<BigInt> {
        let n = self.n as i64;
        let e = e.rem_euclid(n) as usize;
        let mut raw = vec![BigInt::zero(); e + 1];
        raw[e] = BigInt::one();
        self.reduce_raw(raw)
    }

    /// Reduces an arbitrary-degree integer polynomial mod `Phi_N`.
    pub fn reduce_raw(&self, mut raw: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        while raw.len() > d {
            let top = raw.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = raw.len() - d;
            // raw has degree d + k - 1 after the pop; subtract top * x^k * Phi.
            for (i, c) in self.phi.iter().enumerate().take(d) {
                raw[k + i] -= &top * c;
            }
        }
        raw.resize(d, BigInt::zero());
        raw
    }

    /// True when the element lies in the image of `Z`, returning that integer.
    pub fn as_integer(&self, a: &[BigInt]) -> Option<BigInt> {
        if a.iter().skip(1).all(|c| c.is_zero()) {
            Some(a[0].clone())
        } else {
            None
        }
    }
}

impl CoeffRing for CycRing {
    type Elem = Vec<BigInt>;

    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.degree()]
    }
    fn one(&self) -> Vec<BigInt> {
        let mut v = self.zero();
        if !v.is_empty() {
            v[0] = BigInt::one();
        }
        v
    }
    fn add(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn neg(&self, a: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().map(|x| -x).collect()
    }
    fn sub(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn mul(&self, a: &Vec<BigInt>, b: &Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        if d == 0 {
            return vec![];
        }
        let mut raw = vec![BigInt::zero(); 2 * d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        self.reduce_raw(raw)
    }
    fn is_zero(&self, a: &Vec<BigInt>) -> bool {
        a.iter().all(|c| c.is_zero())
    }
    fn from_int(&self, n: &BigInt) -> Vec<BigInt> {
        let mut v = self.zero();
        if !v.is_empty() {
            v[0] = n.clone();
        }
        v
    }
    fn fmt_elem(&self, a: &Vec<BigInt>) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{}*z", c),
                _ => format!("{}*z^{}", c, i),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Coefficients of the `n`-th cyclotomic polynomial, low degree first.
///
/// Computed as `(x^n - 1) / prod_{d | n, d < n} Phi_d` by exact division,
/// which is fast and stays exact at every step.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    if n == 1 {
        return vec![BigInt::from(-1), BigInt::one()];
    }
    let mut num = vec![BigInt::zero(); (n + 1) as usize];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = exact_poly_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact division of integer polynomials with monic divisor; panics on a
/// nonzero remainder, which would indicate a caller bug.
fn exact_poly_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(rem.len() >= den.len());
    let mut quo = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quo[i - dd] = c.clone();
        for (j, d) in den.iter().enumerate() {
            let t = &c * d;
            rem[i - dd + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quo
}

// ---- Integer helpers ----

/// Inverse of `a` mod `n`, when `gcd(a, n) = 1`.
pub fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(n);
    let g = a.extended_gcd(n);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(n))
    } else {
        None
    }
}

/// `p`-adic valuation of a nonzero integer.
pub fn int_valuation(a: &BigInt, p: &BigInt) -> u32 {
    assert!(!a.is_zero(), "valuation of zero is undefined");
    let mut v = 0u32;
    let mut a = a.clone();
    loop {
        let (q, r) = a.div_rem(p);
        if r.is_zero() {
            v += 1;
            a = q;
        } else {
            return v;
        }
    }
}

/// `base^exp` over the integers.
pub fn int_pow(base: &BigInt, exp: u64) -> BigInt {
    num::pow::pow(base.clone(), exp as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn mod_ring_canonical_and_inverse() {
        let r = ModRing::new(b(9));
        assert_eq!(r.from_i64(-1), b(8));
        assert_eq!(r.mul(&b(4), &b(7)), b(1));
        assert_eq!(r.inv(&b(4)), Some(b(7)));
        assert_eq!(r.inv(&b(3)), None);
    }

    #[test]
    fn cyclotomic_small_indices() {
        // Phi_1 = x - 1, Phi_2 = x + 1, Phi_4 = x^2 + 1, Phi_6 = x^2 - x + 1.
        assert_eq!(cyclotomic_polynomial(1), vec![b(-1), b(1)]);
        assert_eq!(cyclotomic_polynomial(2), vec![b(1), b(1)]);
        assert_eq!(cyclotomic_polynomial(4), vec![b(1), b(0), b(1)]);
        assert_eq!(cyclotomic_polynomial(6), vec![b(1), b(-1), b(1)]);
        // Phi_12 = x^4 - x^2 + 1.
        assert_eq!(
            cyclotomic_polynomial(12),
            vec![b(1), b(0), b(-1), b(0), b(1)]
        );
    }

    #[test]
    fn cyclotomic_root_has_exact_order() {
        // In Z[x]/Phi_6, x^6 = 1 but x^3 = -1.
        let r = CycRing::new(6);
        let x = r.root_power(1);
        assert_eq!(r.pow(&x, 6), r.one());
        assert_eq!(r.pow(&x, 3), r.neg(&r.one()));
        // Powers reduce mod 6 with sign bookkeeping via Phi_6.
        assert_eq!(r.root_power(-1), r.pow(&x, 5));
    }

    #[test]
    fn cyc_ring_is_a_ring() {
        let r = CycRing::new(5);
        let x = r.root_power(1);
        // 1 + x + x^2 + x^3 + x^4 = 0 in Z[x]/Phi_5.
        let mut s = r.one();
        for e in 1..5 {
            s = r.add(&s, &r.root_power(e));
        }
        assert!(r.is_zero(&s));
        // (x + 2)(x^4 + 3) expands consistently with reduce_raw.
        let a = r.add(&x, &r.from_i64(2));
        let bb = r.add(&r.root_power(4), &r.from_i64(3));
        let prod = r.mul(&a, &bb);
        let back = r.mul(&prod, &r.one());
        assert_eq!(prod, back);
    }

    #[test]
    fn valuation_and_pow() {
        assert_eq!(int_valuation(&b(-80), &b(2)), 4);
        assert_eq!(int_valuation(&b(59048), &b(2)), 3);
        assert_eq!(int_pow(&b(3), 4), b(81));
        assert_eq!(mod_inverse(&b(9), &b(512)), Some(b(57)));
    }
}
