//! Finite fields `F_q` with `q = p^e <= 64`, polynomials over them, places
//! of the rational function field, and unit groups of residue rings.
//!
//! Field elements are indices `0..q` encoding coefficient vectors over
//! `F_p` in base `p` (so `0` and `1` are the additive and multiplicative
//! identities and the prime subfield occupies `0..p`). Each field is built
//! once from a fixed irreducible modulus and materializes full addition
//! and multiplication tables, which keeps the degree-enumeration loops in
//! the L-function layer at table-lookup speed.
//!
//! Places of `F_q(t)` are the monic irreducible polynomials together with
//! the degree-one place at infinity. Irreducibility is decided by trial
//! division over all monic divisors up to half the degree: correctness
//! over cleverness at these sizes, and the test suite pins the counts
//! against the Moebius necklace formula independently.

use crate::poly::Poly;
use crate::ring::{CoeffRing, InvRing};
use crate::Error;
use std::collections::HashMap;
use std::sync::Arc;

/// Default bound on `q^d` for any degree-d enumeration.
pub const DEFAULT_ENUM_CAP: u128 = 10_000_000;

/// Enumeration budget carried through every routine that loops over all
/// polynomials of a given degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumCap(pub u128);

impl Default for EnumCap {
    fn default() -> EnumCap {
        EnumCap(DEFAULT_ENUM_CAP)
    }
}

impl EnumCap {
    pub fn check(&self, q: u32, degree: usize) -> Result<u128, Error> {
        let mut n: u128 = 1;
        for _ in 0..degree {
            n = n.saturating_mul(q as u128);
            if n > self.0 {
                return Err(Error::EnumCap { needed: n, cap: self.0 });
            }
        }
        Ok(n)
    }
}

struct FqTables {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// The field `F_q`. Cheap to clone; all state is behind an `Arc`.
#[derive(Clone)]
pub struct FqCtx {
    t: Arc<FqTables>,
}

impl std::fmt::Debug for FqCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FqCtx(q={})", self.t.q)
    }
}

impl PartialEq for FqCtx {
    fn eq(&self, other: &FqCtx) -> bool {
        self.t.q == other.t.q
    }
}

/// Fixed defining modulus for `F_{p^e}`, coefficients over `F_p` low degree
/// first. One polynomial per supported `(p, e)`; irreducibility is
/// re-verified at construction time.
fn defining_modulus(p: u32, e: u32) -> Option<Vec<u8>> {
    let m: &[u8] = match (p, e) {
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 0, 0, 0, 1],
        (3, 2) => &[1, 0, 1],
        (3, 3) => &[1, 2, 0, 1],
        (5, 2) => &[1, 1, 1],
        (7, 2) => &[1, 0, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Arithmetic on coefficient vectors over F_p, used only while building
// the element tables.
fn fp_poly_mul(a: &[u8], b: &[u8], p: u32) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u32 + x as u32 * y as u32) % p) as u8;
        }
    }
    out
}

fn fp_poly_rem(a: &[u8], m: &[u8], p: u32) -> Vec<u8> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let top = *r.last().unwrap() as u32;
        let k = r.len() - 1 - dm;
        if top != 0 {
            for (i, &c) in m.iter().enumerate() {
                let cur = r[k + i] as u32;
                r[k + i] = ((cur + p - (top * c as u32) % p) % p) as u8;
            }
        }
        r.pop();
    }
    r.resize(dm, 0);
    r
}

fn fp_is_irreducible(f: &[u8], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u8; d + 1];
            let mut n = idx;
            for c in g.iter_mut().take(d) {
                *c = (n % p as u64) as u8;
                n /= p as u64;
            }
            g[d] = 1;
            if fp_poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FqCtx {
    /// Builds `F_q`, factoring `q` as a prime power. Supported range is
    /// `2 <= q <= 64`.
    pub fn new(q: u32) -> Result<FqCtx, Error> {
        if !(2..=64).contains(&q) {
            return Err(Error::Config(format!("q = {} out of supported range 2..=64", q)));
        }
        let p = (2..=q).find(|&d| q % d == 0 && is_prime(d)).unwrap();
        let mut e = 0u32;
        let mut n = q;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if n != 1 {
            return Err(Error::Config(format!("q = {} is not a prime power", q)));
        }
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            match defining_modulus(p, e) {
                Some(m) => m,
                None => {
                    return Err(Error::Config(format!("no defining modulus for q = {}^{}", p, e)))
                }
            }
        };
        if e > 1 {
            assert!(
                fp_is_irreducible(&modulus, p),
                "defining modulus table entry for q={} is reducible",
                q
            );
        }

        let qz = q as usize;
        let decode = |a: u32| -> Vec<u8> {
            let mut v = vec![0u8; e as usize];
            let mut n = a;
            for c in v.iter_mut() {
                *c = (n % p) as u8;
                n /= p;
            }
            v
        };
        let encode = |v: &[u8]| -> u8 {
            let mut n = 0u32;
            for &c in v.iter().rev() {
                n = n * p + c as u32;
            }
            n as u8
        };

        let mut add = vec![0u8; qz * qz];
        let mut mul = vec![0u8; qz * qz];
        let mut neg = vec![0u8; qz];
        for a in 0..q {
            let va = decode(a);
            neg[a as usize] = encode(&va.iter().map(|&c| ((p - c as u32) % p) as u8).collect::<Vec<_>>());
            for b in 0..q {
                let vb = decode(b);
                let sum: Vec<u8> = va
                    .iter()
                    .zip(&vb)
                    .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8)
                    .collect();
                add[(a * q + b) as usize] = encode(&sum);
                let prod = fp_poly_rem(&fp_poly_mul(&va, &vb, p), &modulus, p);
                mul[(a * q + b) as usize] = encode(&prod);
            }
        }
        let mut inv = vec![0u8; qz];
        for a in 1..q {
            let mut found = None;
            for b in 1..q {
                if mul[(a * q + b) as usize] == 1 {
                    found = Some(b as u8);
                    break;
                }
            }
            inv[a as usize] = found.expect("every nonzero element of a field has an inverse");
        }

        Ok(FqCtx {
            t: Arc::new(FqTables { p, e, q, modulus, add, mul, neg, inv }),
        })
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }
    pub fn p(&self) -> u32 {
        self.t.p
    }
    pub fn ext_degree(&self) -> u32 {
        self.t.e
    }
    pub fn modulus_coeffs(&self) -> &[u8] {
        &self.t.modulus
    }

    pub fn add_el(&self, a: u8, b: u8) -> u8 {
        self.t.add[a as usize * self.t.q as usize + b as usize]
    }
    pub fn mul_el(&self, a: u8, b: u8) -> u8 {
        self.t.mul[a as usize * self.t.q as usize + b as usize]
    }
    pub fn neg_el(&self, a: u8) -> u8 {
        self.t.neg[a as usize]
    }
    pub fn inv_el(&self, a: u8) -> Option<u8> {
        if a == 0 {
            None
        } else {
            Some(self.t.inv[a as usize])
        }
    }
}

impl CoeffRing for FqCtx {
    type Elem = u8;

    fn zero(&self) -> u8 {
        0
    }
    fn one(&self) -> u8 {
        1
    }
    fn add(&self, a: &u8, b: &u8) -> u8 {
        self.add_el(*a, *b)
    }
    fn neg(&self, a: &u8) -> u8 {
        self.neg_el(*a)
    }
    fn mul(&self, a: &u8, b: &u8) -> u8 {
        self.mul_el(*a, *b)
    }
    fn is_zero(&self, a: &u8) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &num::BigInt) -> u8 {
        use num::Integer;
        let r = n.mod_floor(&num::BigInt::from(self.t.p));
        let digits = r.to_u32_digits().1;
        if digits.is_empty() {
            0
        } else {
            digits[0] as u8
        }
    }
    fn fmt_elem(&self, a: &u8) -> String {
        a.to_string()
    }
}

impl InvRing for FqCtx {
    fn inv(&self, a: &u8) -> Option<u8> {
        self.inv_el(*a)
    }
}

/// Polynomials over `F_q`, low degree first.
pub type FqPoly = Poly<FqCtx>;

/// Renders a polynomial in the variable `t` with coefficients printed as
/// element indices (for prime fields these are the usual integers).
pub fn fmt_fq_poly(f: &FqPoly) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<String> = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{}t", c),
            (i, 1) => format!("t^{}", i),
            (i, c) => format!("{}t^{}", c, i),
        };
        terms.push(t);
    }
    terms.join("+")
}

pub fn poly_from_indices(ctx: &FqCtx, coeffs: &[u8]) -> FqPoly {
    Poly::from_coeffs(ctx, coeffs.to_vec())
}

pub fn is_monic(f: &FqPoly) -> bool {
    f.leading() == Some(&1)
}

/// All monic polynomials of exact degree `d`, deterministic order (the
/// lower-coefficient tuple counts up in base `q`, lowest digit fastest).
/// Degree 0 yields the single polynomial `1`.
pub fn monic_polys(ctx: &FqCtx, d: usize, cap: EnumCap) -> Result<Vec<FqPoly>, Error> {
    let count = cap.check(ctx.q(), d)?;
    let q = ctx.q() as u128;
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut coeffs = vec![0u8; d + 1];
        let mut n = idx;
        for c in coeffs.iter_mut().take(d) {
            *c = (n % q) as u8;
            n /= q;
        }
        coeffs[d] = 1;
        out.push(Poly::from_coeffs(ctx, coeffs));
    }
    Ok(out)
}

/// Trial division by every monic polynomial of degree `1..=deg f / 2`.
pub fn is_irreducible(ctx: &FqCtx, f: &FqPoly) -> Result<bool, Error> {
    let deg = f.degree().ok_or_else(|| Error::Config("zero polynomial".into()))?;
    if deg == 0 || !is_monic(f) {
        return Err(Error::Config("irreducibility requires a monic polynomial of degree >= 1".into()));
    }
    for d in 1..=deg / 2 {
        for g in monic_polys(ctx, d, EnumCap(u128::MAX))? {
            if f.rem(ctx, &g).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A place of `F_q(t)`: a monic irreducible polynomial or the place at
/// infinity (degree 1).
#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    Infinity,
    Finite(FqPoly),
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite(f) => f.degree().expect("finite place has positive degree"),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn label(&self) -> String {
        match self {
            Place::Infinity => "inf".to_string(),
            Place::Finite(f) => fmt_fq_poly(f),
        }
    }
}

/// The infinite place followed by all monic irreducibles of degree `<= dmax`,
/// ordered by degree and then enumeration order.
pub fn places_up_to(ctx: &FqCtx, dmax: usize, cap: EnumCap) -> Result<Vec<Place>, Error> {
    let mut out = vec![Place::Infinity];
    for d in 1..=dmax {
        for f in monic_polys(ctx, d, cap)? {
            if is_irreducible(ctx, &f)? {
                out.push(Place::Finite(f));
            }
        }
    }
    Ok(out)
}

fn residue_key(ctx: &FqCtx, f: &FqPoly, len: usize) -> Vec<u8> {
    let mut key = vec![0u8; len];
    for (i, c) in f.coeffs().iter().enumerate() {
        key[i] = *c;
    }
    let _ = ctx;
    key
}

/// The unit group `(F_q[t]/m)^x` with a cyclic decomposition and a full
/// discrete-logarithm table.
///
/// The decomposition is found greedily: the first generator realizes the
/// group exponent, and each later generator realizes the largest order in
/// the quotient by the span of the earlier ones, re-picked inside its coset
/// so its order in the full group equals its coset order. The result is
/// verified by exhaustive re-enumeration: the products `prod g_i^{e_i}`
/// must hit every unit exactly once.
pub struct UnitGroup {
    pub modulus: FqPoly,
    pub residues: Vec<FqPoly>,
    pub gens: Vec<FqPoly>,
    pub orders: Vec<u64>,
    dlog: HashMap<Vec<u8>, Vec<u32>>,
}

impl UnitGroup {
    /// Exponent tuple of a residue with respect to `gens`, or `None` when
    /// the polynomial is not coprime to the modulus.
    pub fn dlog(&self, ctx: &FqCtx, a: &FqPoly) -> Option<&Vec<u32>> {
        let len = self.modulus.degree().unwrap();
        let r = a.rem(ctx, &self.modulus);
        self.dlog.get(&residue_key(ctx, &r, len))
    }

    pub fn order(&self) -> u64 {
        self.residues.len() as u64
    }
}

pub fn unit_group(ctx: &FqCtx, m: &FqPoly, cap: EnumCap) -> Result<UnitGroup, Error> {
    let deg = m.degree().ok_or_else(|| Error::Config("zero modulus".into()))?;
    if deg == 0 || !is_monic(m) {
        return Err(Error::Config("unit group modulus must be monic of degree >= 1".into()));
    }
    let count = cap.check(ctx.q(), deg)?;
    let q = ctx.q() as u128;

    let mut residues = Vec::new();
    for idx in 0..count {
        let mut coeffs = vec![0u8; deg];
        let mut n = idx;
        for c in coeffs.iter_mut() {
            *c = (n % q) as u8;
            n /= q;
        }
        let f = Poly::from_coeffs(ctx, coeffs);
        if f.gcd(ctx, m).degree() == Some(0) {
            residues.push(f);
        }
    }

    let mul = |a: &FqPoly, b: &FqPoly| -> FqPoly { a.mul(ctx, b).rem(ctx, m) };
    let one = Poly::one(ctx);
    let key = |f: &FqPoly| residue_key(ctx, f, deg);

    let order_of = |a: &FqPoly| -> u64 {
        let mut x = a.clone();
        let mut k = 1u64;
        while x != one {
            x = mul(&x, a);
            k += 1;
        }
        k
    };

    // Order of the coset of `a` in the quotient by the subgroup `sub`.
    let coset_order = |a: &FqPoly, sub: &HashMap<Vec<u8>, ()>| -> u64 {
        let mut x = a.clone();
        let mut k = 1u64;
        while !sub.contains_key(&key(&x)) {
            x = mul(&x, a);
            k += 1;
        }
        k
    };

    let closure = |gens: &[FqPoly]| -> HashMap<Vec<u8>, ()> {
        let mut set = HashMap::new();
        set.insert(key(&one), ());
        let mut frontier = vec![one.clone()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = mul(&x, g);
                if set.insert(key(&y), ()).is_none() {
                    frontier.push(y);
                }
            }
        }
        set
    };

    let total = residues.len() as u64;
    let mut gens: Vec<FqPoly> = Vec::new();
    let mut orders: Vec<u64> = Vec::new();
    let mut sub = closure(&gens);
    while (sub.len() as u64) < total {
        let dmaxord = residues
            .iter()
            .map(|a| coset_order(a, &sub))
            .max()
            .expect("nonempty unit group");
        let pick = residues
            .iter()
            .find(|a| coset_order(a, &sub) == dmaxord && order_of(a) == dmaxord)
            .expect("a coset of maximal order contains a representative of that order");
        gens.push(pick.clone());
        orders.push(dmaxord);
        sub = closure(&gens);
    }

    // Exhaustive verification: exponent tuples enumerate the group exactly.
    let mut dlog: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
    let mut tuple = vec![0u32; gens.len()];
    loop {
        let mut x = one.clone();
        for (g, &e) in gens.iter().zip(&tuple) {
            for _ in 0..e {
                x = mul(&x, g);
            }
        }
        let prev = dlog.insert(key(&x), tuple.clone());
        assert!(prev.is_none(), "cyclic decomposition is not direct");
        let mut i = 0;
        loop {
            if i == gens.len() {
                let product: u64 = orders.iter().product();
                assert_eq!(product, total, "orders do not multiply to the group order");
                assert_eq!(dlog.len() as u64, total, "generators do not span the unit group");
                return Ok(UnitGroup { modulus: m.clone(), residues, gens, orders, dlog });
            }
            tuple[i] += 1;
            if (tuple[i] as u64) < orders[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
    }
}
