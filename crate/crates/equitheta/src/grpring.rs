//! Finite abelian groups, their group rings, characters, and the
//! character-theoretic decomposition census.
//!
//! A [`FinAbGroup`] is a fixed internal direct product of cyclic factors.
//! Elements are dense indices `0..|G|` in mixed-radix encoding (first
//! factor fastest, identity at index 0) with a precomputed multiplication
//! table, so group-ring convolution is two table lookups per coefficient
//! pair. Group rings are coefficient-ring generic: the same convolution
//! serves `Z[G]`, `Q[G]`, and `(Z/N)[G]`, and a group ring is itself a
//! [`CoeffRing`], which is what lets equivariant polynomials reuse the
//! generic polynomial engine.
//!
//! Characters take values in the exact cyclotomic ring `Z[x]/Phi_N` with
//! `N` the group exponent; `char_eval` is a ring homomorphism and the
//! family of all characters is jointly injective, both of which are tested
//! exhaustively on small groups.

use crate::poly::Poly;
use crate::ring::{CoeffRing, CycRing, IntRing, ModRing, RatRing};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use std::sync::Arc;

// ---- Groups ----

struct GroupTables {
    orders: Vec<u64>,
    size: usize,
    exponent: u64,
    mult: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
}

/// A finite abelian group presented as a direct product of cyclic factors.
#[derive(Clone)]
pub struct FinAbGroup {
    t: Arc<GroupTables>,
}

impl std::fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FinAbGroup{:?}", self.t.orders)
    }
}

impl PartialEq for FinAbGroup {
    fn eq(&self, other: &FinAbGroup) -> bool {
        self.t.orders == other.t.orders && self.t.labels == other.t.labels
    }
}

impl FinAbGroup {
    /// Builds the product of cyclic groups of the given orders. Labels, when
    /// provided, must name every element in index order; the default renders
    /// elements as monomials in generators `g1, g2, ...` (plain `g` for a
    /// single factor, `1` for the identity).
    pub fn new(orders: Vec<u64>, labels: Option<Vec<String>>) -> FinAbGroup {
        assert!(orders.iter().all(|&n| n >= 1), "cyclic factor orders must be positive");
        let size64: u64 = orders.iter().product();
        assert!(size64 <= 1 << 20, "group too large");
        let size = size64 as usize;
        let exponent = orders.iter().fold(1u64, |a, &b| a.lcm(&b.max(1)));

        let idx = |tuple: &[u64]| -> usize {
            let mut i = 0usize;
            for (k, &e) in tuple.iter().enumerate().rev() {
                i = i * orders[k] as usize + e as usize;
            }
            i
        };
        let tup = |mut i: usize| -> Vec<u64> {
            orders
                .iter()
                .map(|&n| {
                    let e = (i % n as usize) as u64;
                    i /= n as usize;
                    e
                })
                .collect()
        };

        let mut mult = vec![0u32; size * size];
        let mut inv = vec![0u32; size];
        for a in 0..size {
            let ta = tup(a);
            let ti: Vec<u64> = ta.iter().zip(&orders).map(|(&e, &n)| (n - e) % n).collect();
            inv[a] = idx(&ti) as u32;
            for b in 0..size {
                let tb = tup(b);
                let tc: Vec<u64> =
                    ta.iter().zip(&tb).zip(&orders).map(|((&x, &y), &n)| (x + y) % n).collect();
                mult[a * size + b] = idx(&tc) as u32;
            }
        }

        let labels = labels.unwrap_or_else(|| {
            (0..size)
                .map(|i| {
                    let t = tup(i);
                    let parts: Vec<String> = t
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e != 0)
                        .map(|(k, &e)| {
                            let name = if orders.len() == 1 {
                                "g".to_string()
                            } else {
                                format!("g{}", k + 1)
                            };
                            if e == 1 {
                                name
                            } else {
                                format!("{}^{}", name, e)
                            }
                        })
                        .collect();
                    if parts.is_empty() {
                        "1".to_string()
                    } else {
                        parts.join("*")
                    }
                })
                .collect()
        });
        assert_eq!(labels.len(), size, "label list must cover the group");

        FinAbGroup {
            t: Arc::new(GroupTables { orders, size, exponent, mult, inv, labels }),
        }
    }

    pub fn trivial() -> FinAbGroup {
        FinAbGroup::new(vec![1], None)
    }

    pub fn size(&self) -> usize {
        self.t.size
    }
    pub fn orders(&self) -> &[u64] {
        &self.t.orders
    }
    /// Exponent of the group (lcm of the factor orders).
    pub fn exponent(&self) -> u64 {
        self.t.exponent
    }
    pub fn identity(&self) -> usize {
        0
    }
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.t.mult[a * self.t.size + b] as usize
    }
    pub fn inv(&self, a: usize) -> usize {
        self.t.inv[a] as usize
    }
    pub fn label(&self, a: usize) -> &str {
        &self.t.labels[a]
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let tuple = self.tuple(a);
        let t: Vec<u64> = tuple
            .iter()
            .zip(self.orders())
            .map(|(&x, &n)| (((x as i64 * e) % n as i64 + n as i64) % n as i64) as u64)
            .collect();
        self.index(&t)
    }

    pub fn index(&self, tuple: &[u64]) -> usize {
        assert_eq!(tuple.len(), self.t.orders.len());
        let mut i = 0usize;
        for (k, &e) in tuple.iter().enumerate().rev() {
            let n = self.t.orders[k] as usize;
            i = i * n + (e as usize % n);
        }
        i
    }

    pub fn tuple(&self, mut i: usize) -> Vec<u64> {
        self.t
            .orders
            .iter()
            .map(|&n| {
                let e = (i % n as usize) as u64;
                i /= n as usize;
                e
            })
            .collect()
    }

    /// Index of the element with the given generator exponents, for
    /// generators in factor order.
    pub fn from_exponents(&self, exps: &[u64]) -> usize {
        self.index(exps)
    }
}

// ---- Group rings ----

/// The group ring `R[G]` as a coefficient-ring object. Elements are dense
/// coefficient vectors indexed by group element.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRing<R: CoeffRing> {
    pub group: FinAbGroup,
    pub base: R,
}

impl<R: CoeffRing> GroupRing<R> {
    pub fn new(group: FinAbGroup, base: R) -> GroupRing<R> {
        GroupRing { group, base }
    }

    /// The basis element for a single group element.
    pub fn basis(&self, g: usize) -> Vec<R::Elem> {
        let mut v = self.zero();
        v[g] = self.base.one();
        v
    }

    /// `c * g` as a ring element.
    pub fn monomial(&self, c: R::Elem, g: usize) -> Vec<R::Elem> {
        let mut v = self.zero();
        v[g] = c;
        v
    }

    /// The involution `iota` sending each group element to its inverse.
    pub fn iota(&self, x: &[R::Elem]) -> Vec<R::Elem> {
        let mut out = self.zero();
        for (g, c) in x.iter().enumerate() {
            out[self.group.inv(g)] = c.clone();
        }
        out
    }

    /// Ring homomorphism `R[G] -> R` summing all coefficients.
    pub fn augmentation(&self, x: &[R::Elem]) -> R::Elem {
        let mut s = self.base.zero();
        for c in x {
            s = self.base.add(&s, c);
        }
        s
    }

    /// Coefficientwise map into the same group over another base ring.
    pub fn map_base<S: CoeffRing, F: Fn(&R::Elem) -> S::Elem>(
        &self,
        target: &GroupRing<S>,
        x: &[R::Elem],
        f: F,
    ) -> Vec<S::Elem> {
        assert_eq!(self.group.size(), target.group.size());
        x.iter().map(f).collect()
    }
}

impl<R: CoeffRing> CoeffRing for GroupRing<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Vec<R::Elem> {
        vec![self.base.zero(); self.group.size()]
    }
    fn one(&self) -> Vec<R::Elem> {
        self.basis(self.group.identity())
    }
    fn add(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn sub(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Vec<R::Elem> {
        let mut out = self.zero();
        for (g, x) in a.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (h, y) in b.iter().enumerate() {
                if !self.base.is_zero(y) {
                    let gh = self.group.mul(g, h);
                    out[gh] = self.base.add(&out[gh], &self.base.mul(x, y));
                }
            }
        }
        out
    }
    fn is_zero(&self, a: &Vec<R::Elem>) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
    fn from_int(&self, n: &BigInt) -> Vec<R::Elem> {
        self.monomial(self.base.from_int(n), self.group.identity())
    }
    fn fmt_elem(&self, a: &Vec<R::Elem>) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.base.is_zero(c))
            .map(|(g, c)| {
                let cs = self.base.fmt_elem(c);
                if g == self.group.identity() {
                    cs
                } else if self.base.is_one(c) {
                    self.group.label(g).to_string()
                } else {
                    format!("{}*{}", cs, self.group.label(g))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Integer group-ring element.
pub type GroupRingElem = Vec<BigInt>;

/// Convenience constructors for the common bases.
pub fn z_group_ring(group: &FinAbGroup) -> GroupRing<IntRing> {
    GroupRing::new(group.clone(), IntRing)
}
pub fn q_group_ring(group: &FinAbGroup) -> GroupRing<RatRing> {
    GroupRing::new(group.clone(), RatRing)
}
pub fn mod_group_ring(group: &FinAbGroup, modulus: BigInt) -> GroupRing<ModRing> {
    GroupRing::new(group.clone(), ModRing::new(modulus))
}

/// Evaluates an equivariant polynomial at a rational point, landing in `Q[G]`.
pub fn eval_equiv_poly(
    zr: &GroupRing<IntRing>,
    f: &Poly<GroupRing<IntRing>>,
    u0: &BigRational,
) -> Vec<BigRational> {
    let qr = q_group_ring(&zr.group);
    let fq = f.map(&qr, |c| c.iter().map(|x| BigRational::from_integer(x.clone())).collect());
    let point = qr.monomial(u0.clone(), qr.group.identity());
    fq.eval(&qr, &point)
}

/// True when every coefficient of the `Q[G]` element is an integer.
pub fn q_elem_is_integral(x: &[BigRational]) -> bool {
    x.iter().all(|c| c.denom().is_one())
}

pub fn q_elem_to_z(x: &[BigRational]) -> Option<GroupRingElem> {
    if q_elem_is_integral(x) {
        Some(x.iter().map(|c| c.numer().clone()).collect())
    } else {
        None
    }
}

// ---- Characters ----

/// A character of a finite abelian group, stored by generator exponents:
/// the `i`-th generator maps to `zeta_N^{t_i * N / n_i}` for the group
/// exponent `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub exps: Vec<u64>,
}

impl Character {
    /// Exponent `a` with `chi(g) = zeta_N^a`, reduced mod `N`.
    pub fn value_exponent(&self, group: &FinAbGroup, g: usize) -> u64 {
        let n = group.exponent();
        let tuple = group.tuple(g);
        let mut a = 0u64;
        for ((&e, &t), &ord) in tuple.iter().zip(&self.exps).zip(group.orders()) {
            a = (a + (e % ord) * ((t % ord) * (n / ord) % n)) % n;
        }
        a
    }

    pub fn is_trivial(&self, group: &FinAbGroup) -> bool {
        self.exps.iter().zip(group.orders()).all(|(&t, &n)| t % n == 0)
    }

    /// Multiplicative order of the character.
    pub fn order(&self, group: &FinAbGroup) -> u64 {
        self.exps
            .iter()
            .zip(group.orders())
            .map(|(&t, &n)| {
                let t = t % n;
                if t == 0 {
                    1
                } else {
                    n / n.gcd(&t)
                }
            })
            .fold(1u64, |a, b| a.lcm(&b))
    }
}

/// All characters in deterministic mixed-radix order (trivial first).
pub fn all_characters(group: &FinAbGroup) -> Vec<Character> {
    let mut out = Vec::with_capacity(group.size());
    let mut exps = vec![0u64; group.orders().len()];
    loop {
        out.push(Character { exps: exps.clone() });
        let mut i = 0;
        loop {
            if i == exps.len() {
                return out;
            }
            exps[i] += 1;
            if exps[i] < group.orders()[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// The cyclotomic ring `Z[x]/Phi_N` in which the characters of `group`
/// take values.
pub fn character_value_ring(group: &FinAbGroup) -> CycRing {
    CycRing::new(group.exponent())
}

/// Exact character transform of an integer group-ring element.
pub fn char_eval_elem(cyc: &CycRing, group: &FinAbGroup, x: &[BigInt], chi: &Character) -> Vec<BigInt> {
    let mut s = cyc.zero();
    for (g, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let a = chi.value_exponent(group, g);
        let term = cyc.root_power(a as i64);
        s = cyc.add(&s, &term.iter().map(|t| t * c).collect());
    }
    s
}

/// Character transform of an equivariant polynomial, coefficientwise.
pub fn char_eval_poly(
    cyc: &CycRing,
    zr: &GroupRing<IntRing>,
    f: &Poly<GroupRing<IntRing>>,
    chi: &Character,
) -> Poly<CycRing> {
    f.map(cyc, |c| char_eval_elem(cyc, &zr.group, c, chi))
}

/// Complex conjugation on `Z[x]/Phi_N`, substituting `x -> x^{-1}`.
pub fn cyc_conj(cyc: &CycRing, a: &[BigInt]) -> Vec<BigInt> {
    let mut s = cyc.zero();
    for (i, c) in a.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = cyc.root_power(-(i as i64));
        s = cyc.add(&s, &term.iter().map(|t| t * c).collect());
    }
    s
}

/// An integer group-ring element is a zero-divisor in `Q[G]` (equivalently
/// in `Z_l[G]` for any `l`) exactly when some character kills it; this
/// runs the exact transform over all characters.
pub fn is_zero_divisor(zr: &GroupRing<IntRing>, x: &[BigInt]) -> bool {
    let cyc = character_value_ring(&zr.group);
    all_characters(&zr.group)
        .iter()
        .any(|chi| cyc.is_zero(&char_eval_elem(&cyc, &zr.group, x, chi)))
}

// ---- Decomposition census ----

/// One Galois-conjugacy class of characters of the prime-to-`l` part.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusClass {
    /// Lexicographically least exponent tuple in the orbit of `chi -> chi^l`.
    pub representative: Vec<u64>,
    /// Orbit size, which is the local degree `[Z_l[chi] : Z_l]`.
    pub degree: u64,
}

/// The `l`-adic decomposition data of `Z_l[G]`: the prime-to-`l` component
/// `Delta`, the `l`-Sylow component, and the conjugacy classes of
/// `Delta`-characters under the `l`-power action.
#[derive(Clone, Debug, PartialEq)]
pub struct Census {
    pub ell: u64,
    pub delta_orders: Vec<u64>,
    pub sylow_orders: Vec<u64>,
    pub classes: Vec<CensusClass>,
    /// `sum over classes of degree * |Sylow|`, which must equal `|G|`.
    pub rank_sum: u64,
}

pub fn decomposition_census(group: &FinAbGroup, ell: u64) -> Census {
    assert!(ell >= 2);
    let mut delta_orders = Vec::new();
    let mut sylow_orders = Vec::new();
    for &n in group.orders() {
        let mut lpart = 1u64;
        let mut rest = n;
        while rest % ell == 0 {
            rest /= ell;
            lpart *= ell;
        }
        if rest > 1 {
            delta_orders.push(rest);
        }
        if lpart > 1 {
            sylow_orders.push(lpart);
        }
    }
    let delta_size: u64 = delta_orders.iter().product();
    let sylow_size: u64 = sylow_orders.iter().product();

    // Orbits of chi -> chi^l on the character tuples of Delta.
    let mut seen: Vec<Vec<u64>> = Vec::new();
    let mut classes = Vec::new();
    let mut exps = vec![0u64; delta_orders.len()];
    let mut remaining = delta_size;
    while remaining > 0 {
        if !seen.contains(&exps) {
            let mut orbit = vec![exps.clone()];
            loop {
                let prev = orbit.last().unwrap();
                let next: Vec<u64> =
                    prev.iter().zip(&delta_orders).map(|(&t, &n)| (t * ell) % n).collect();
                if next == exps {
                    break;
                }
                orbit.push(next);
            }
            let rep = orbit.iter().min().unwrap().clone();
            let degree = orbit.len() as u64;
            classes.push(CensusClass { representative: rep, degree });
            seen.extend(orbit);
        }
        // Advance the mixed-radix counter over Delta-characters.
        remaining -= 1;
        let mut i = 0;
        while i < exps.len() {
            exps[i] += 1;
            if exps[i] < delta_orders[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    let rank_sum: u64 = classes.iter().map(|c| c.degree).sum::<u64>() * sylow_size;
    assert_eq!(
        rank_sum,
        group.size() as u64,
        "census ranks must sum to the group order"
    );
    Census { ell, delta_orders, sylow_orders, classes, rank_sum }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CoeffRing;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn zc2() -> GroupRing<IntRing> {
        z_group_ring(&FinAbGroup::new(vec![2], None))
    }

    #[test]
    fn group_table_basics() {
        let g = FinAbGroup::new(vec![2, 3], None);
        assert_eq!(g.size(), 6);
        assert_eq!(g.exponent(), 6);
        let a = g.index(&[1, 0]);
        let bb = g.index(&[0, 1]);
        assert_eq!(g.mul(a, a), g.identity());
        assert_eq!(g.pow(bb, 3), g.identity());
        assert_eq!(g.mul(a, bb), g.index(&[1, 1]));
        assert_eq!(g.inv(g.index(&[1, 2])), g.index(&[1, 1]));
        assert_eq!(g.label(g.identity()), "1");
        assert_eq!(g.label(g.index(&[1, 2])), "g1*g2^2");
    }

    #[test]
    fn group_ring_axioms_exhaustive_z4_c2() {
        // Every triple in (Z/4)[C2]: associativity, commutativity,
        // distributivity.
        let g = FinAbGroup::new(vec![2], None);
        let r = mod_group_ring(&g, b(4));
        let elems: Vec<Vec<BigInt>> =
            (0..16).map(|i| vec![b(i / 4), b(i % 4)]).collect();
        for x in &elems {
            for y in &elems {
                assert_eq!(r.mul(x, y), r.mul(y, x));
                for z in &elems {
                    assert_eq!(r.mul(&r.mul(x, y), z), r.mul(x, &r.mul(y, z)));
                    assert_eq!(r.mul(x, &r.add(y, z)), r.add(&r.mul(x, y), &r.mul(x, z)));
                }
            }
        }
    }

    #[test]
    fn iota_is_an_involution_and_ring_map() {
        let r = z_group_ring(&FinAbGroup::new(vec![3], None));
        let x = vec![b(1), b(2), b(5)];
        let y = vec![b(-1), b(0), b(7)];
        // On C3, iota swaps g and g^2.
        assert_eq!(r.iota(&x), vec![b(1), b(5), b(2)]);
        assert_eq!(r.iota(&r.iota(&x)), x);
        assert_eq!(r.iota(&r.mul(&x, &y)), r.mul(&r.iota(&x), &r.iota(&y)));
        assert_eq!(r.iota(&r.add(&x, &y)), r.add(&r.iota(&x), &r.iota(&y)));
        // On C2, iota is the identity.
        let r2 = zc2();
        let w = vec![b(3), b(-4)];
        assert_eq!(r2.iota(&w), w);
    }

    #[test]
    fn augmentation_is_a_ring_homomorphism() {
        let r = z_group_ring(&FinAbGroup::new(vec![2, 2], None));
        let x = vec![b(1), b(-2), b(3), b(4)];
        let y = vec![b(2), b(0), b(-1), b(5)];
        assert_eq!(
            r.augmentation(&r.mul(&x, &y)),
            r.augmentation(&x) * r.augmentation(&y)
        );
        assert_eq!(r.augmentation(&r.one()), b(1));
    }

    #[test]
    fn eval_equiv_poly_worked_example() {
        // 1 - (2 - g) u at u = 3 is -5 + 3g.
        let r = zc2();
        let c0 = r.one();
        let c1 = r.neg(&r.sub(&r.from_i64(2), &r.basis(1)));
        let f = Poly::from_coeffs(&r, vec![c0, c1]);
        let v = eval_equiv_poly(&r, &f, &BigRational::from_integer(b(3)));
        assert_eq!(q_elem_to_z(&v).unwrap(), vec![b(-5), b(3)]);
    }

    #[test]
    fn character_transform_is_a_ring_map_and_jointly_injective() {
        let g = FinAbGroup::new(vec![6], None);
        let r = z_group_ring(&g);
        let cyc = character_value_ring(&g);
        let chis = all_characters(&g);
        assert_eq!(chis.len(), 6);
        let x: Vec<BigInt> = (0..6).map(|i| b(i as i64 - 3)).collect();
        let y: Vec<BigInt> = (0..6).map(|i| b((i * i) as i64 % 5 - 1)).collect();
        for chi in &chis {
            let cx = char_eval_elem(&cyc, &g, &x, chi);
            let cy = char_eval_elem(&cyc, &g, &y, chi);
            let cxy = char_eval_elem(&cyc, &g, &r.mul(&x, &y), chi);
            assert_eq!(cxy, cyc.mul(&cx, &cy));
            // iota corresponds to complex conjugation, exactly.
            let ci = char_eval_elem(&cyc, &g, &r.iota(&x), chi);
            assert_eq!(ci, cyc_conj(&cyc, &cx));
        }
        // Joint injectivity on C2 exhaustively, coefficients in -2..=2.
        let g2 = FinAbGroup::new(vec![2], None);
        let cyc2 = character_value_ring(&g2);
        let chis2 = all_characters(&g2);
        for a in -2i64..=2 {
            for bb in -2i64..=2 {
                if (a, bb) == (0, 0) {
                    continue;
                }
                let x = vec![b(a), b(bb)];
                assert!(chis2
                    .iter()
                    .any(|chi| !cyc2.is_zero(&char_eval_elem(&cyc2, &g2, &x, chi))));
            }
        }
    }

    #[test]
    fn zero_divisor_detection_via_characters() {
        let r = zc2();
        // 1 + g is killed by the sign character.
        assert!(is_zero_divisor(&r, &vec![b(1), b(1)]));
        // 1 - g is killed by the trivial character... no: aug(1 - g) = 0.
        assert!(is_zero_divisor(&r, &vec![b(1), b(-1)]));
        // 2 + g has character values 3 and 1, a non-zero-divisor.
        assert!(!is_zero_divisor(&r, &vec![b(2), b(1)]));
        assert!(is_zero_divisor(&r, &r.zero()));
    }

    #[test]
    fn census_examples() {
        // C2 at l = 3: two singleton classes, ranks 1 + 1 = 2.
        let c2 = FinAbGroup::new(vec![2], None);
        let census = decomposition_census(&c2, 3);
        assert_eq!(census.delta_orders, vec![2]);
        assert!(census.sylow_orders.is_empty());
        assert_eq!(census.classes.len(), 2);
        assert!(census.classes.iter().all(|c| c.degree == 1));
        assert_eq!(census.rank_sum, 2);

        // C3 at l = 2: the trivial class and one class {chi, chi^2} of
        // degree 2, ranks 1 + 2 = 3.
        let c3 = FinAbGroup::new(vec![3], None);
        let census = decomposition_census(&c3, 2);
        assert_eq!(census.classes.len(), 2);
        let degrees: Vec<u64> = census.classes.iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![1, 2]);
        assert_eq!(census.rank_sum, 3);

        // C2 at l = 2: Delta trivial, Sylow C2, one class of rank 2.
        let census = decomposition_census(&c2, 2);
        assert!(census.delta_orders.is_empty());
        assert_eq!(census.sylow_orders, vec![2]);
        assert_eq!(census.classes.len(), 1);
        assert_eq!(census.rank_sum, 2);
    }

    #[test]
    fn character_orders_and_exponents() {
        let g = FinAbGroup::new(vec![2, 3], None);
        let chis = all_characters(&g);
        assert_eq!(chis.len(), 6);
        let orders: Vec<u64> = chis.iter().map(|c| c.order(&g)).collect();
        assert!(orders.contains(&6));
        assert_eq!(orders.iter().filter(|&&o| o == 1).count(), 1);
        // Character values respect the group law.
        let cyc = character_value_ring(&g);
        for chi in &chis {
            for a in 0..g.size() {
                for bb in 0..g.size() {
                    let lhs = chi.value_exponent(&g, g.mul(a, bb));
                    let rhs =
                        (chi.value_exponent(&g, a) + chi.value_exponent(&g, bb)) % g.exponent();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        assert_eq!(cyc.degree(), 2);
    }
}
