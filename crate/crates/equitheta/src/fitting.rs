//! Finitely presented modules over finite group rings `(Z/l^k)[G]` and
//! their Fitting ideals.
//!
//! Ideals are kept in a canonical form: an ideal is a `Z/l^k`-submodule
//! of the rank-`|G|` free module underlying the ring, closed under
//! multiplication by group elements, so saturating a generator list with
//! all its G-translates and echelonizing gives a unique basis and
//! decidable equality. Fitting ideals come from maximal minors of the
//! presentation matrix; annihilators, Pontryagin duals, and kernels come
//! from exact linear algebra over `Z/l^k` (relative kernels and a Smith
//! decomposition with a tracked change of basis, through which the group
//! action is transported).
//!
//! The checkable identities live in two layers: direct tests with pinned
//! oracles, and a seeded randomized harness (`fitlab_run`) exercising the
//! containment, quotient, direct-sum, base-change, cyclic-duality,
//! non-zero-divisor duality, twist, and four-term identities with
//! reproducible JSON records.

use crate::grpring::{decomposition_census, mod_group_ring, z_group_ring, FinAbGroup, GroupRing};
use crate::linalg::{
    det_bareiss, det_generic, kernel_mod, smith_decomposition, solve_mod, solve_rational,
    HowellForm,
};
use crate::ring::{int_pow, int_valuation, mod_inverse, CoeffRing, ModRing};
use crate::Error;
use num::bigint::BigInt;
use num::{BigRational, Integer, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Element of a finite group ring: dense coefficient vector indexed by
/// group element, entries reduced mod `l^k`.
pub type RElem = Vec<BigInt>;

// ---- The ring ----

/// The finite group ring `(Z/l^k)[G]`.
#[derive(Clone, Debug)]
pub struct FinGroupRing {
    group: FinAbGroup,
    ell: u64,
    k: u32,
    modulus: BigInt,
    ring: GroupRing<ModRing>,
}

impl PartialEq for FinGroupRing {
    fn eq(&self, other: &FinGroupRing) -> bool {
        self.group == other.group && self.modulus == other.modulus
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FinGroupRing {
    pub fn new(group: &FinAbGroup, ell: u64, k: u32) -> Result<FinGroupRing, Error> {
        if !is_prime(ell) {
            return Err(Error::Config(format!("modulus base {} is not prime", ell)));
        }
        if k == 0 {
            return Err(Error::Config("modulus exponent must be positive".into()));
        }
        // The census asserts internally that the character classes tile
        // the whole group algebra; running it keeps the decomposition
        // data consistent with this ring.
        let _ = decomposition_census(group, ell);
        let modulus = int_pow(&BigInt::from(ell), k as u64);
        let ring = mod_group_ring(group, modulus.clone());
        Ok(FinGroupRing { group: group.clone(), ell, k, modulus, ring })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }
    pub fn ell(&self) -> u64 {
        self.ell
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }
    pub fn ring(&self) -> &GroupRing<ModRing> {
        &self.ring
    }
    pub fn gsize(&self) -> usize {
        self.group.size()
    }

    pub fn reduce_elem(&self, x: &[BigInt]) -> RElem {
        x.iter().map(|c| c.mod_floor(&self.modulus)).collect()
    }

    /// Short display name like `(Z/8)[C2xC3]`.
    pub fn name(&self) -> String {
        let cyc: Vec<String> =
            self.group.orders().iter().map(|n| format!("C{}", n)).collect();
        format!("(Z/{})[{}]", self.modulus, cyc.join("x"))
    }

    fn scalar(&self, c: &BigInt) -> RElem {
        self.ring.monomial(c.mod_floor(&self.modulus), self.group.identity())
    }
}

// ---- Presentations ----

/// A finitely presented module: the cokernel of the relation rows acting
/// on a free module of rank `gens`.
#[derive(Clone, Debug, PartialEq)]
pub struct PresentedModule {
    pub ring: FinGroupRing,
    pub gens: usize,
    pub relations: Vec<Vec<RElem>>,
}

impl PresentedModule {
    pub fn new(
        ring: &FinGroupRing,
        gens: usize,
        relations: Vec<Vec<RElem>>,
    ) -> Result<PresentedModule, Error> {
        if gens == 0 {
            return Err(Error::Config("presentation needs at least one generator".into()));
        }
        let mut rows = Vec::new();
        for row in relations {
            if row.len() != gens {
                return Err(Error::Config(format!(
                    "relation row has {} entries, presentation has {} generators",
                    row.len(),
                    gens
                )));
            }
            let reduced: Vec<RElem> = row.iter().map(|e| ring.reduce_elem(e)).collect();
            if reduced.iter().any(|e| !e.iter().all(Zero::is_zero)) {
                rows.push(reduced);
            }
        }
        Ok(PresentedModule { ring: ring.clone(), gens, relations: rows })
    }

    pub fn free(ring: &FinGroupRing, gens: usize) -> Result<PresentedModule, Error> {
        PresentedModule::new(ring, gens, Vec::new())
    }

    /// Cyclic quotient by the listed generators of an ideal.
    pub fn quotient_by(ring: &FinGroupRing, gens: &[RElem]) -> Result<PresentedModule, Error> {
        PresentedModule::new(ring, 1, gens.iter().map(|x| vec![x.clone()]).collect())
    }
}

fn flatten_row(ring: &FinGroupRing, row: &[RElem]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(row.len() * ring.gsize());
    for e in row {
        out.extend(e.iter().cloned());
    }
    out
}

fn translate_row(ring: &FinGroupRing, g: usize, row: &[RElem]) -> Vec<RElem> {
    let basis = ring.ring().basis(g);
    row.iter().map(|e| ring.ring().mul(&basis, e)).collect()
}

/// The relation lattice of a presentation as flat `Z/l^k` rows: every
/// G-translate of every relation row.
fn lattice_rows(ring: &FinGroupRing, rows: &[Vec<RElem>]) -> Vec<Vec<BigInt>> {
    let mut out = Vec::with_capacity(rows.len() * ring.gsize());
    for row in rows {
        for g in 0..ring.gsize() {
            out.push(flatten_row(ring, &translate_row(ring, g, row)));
        }
    }
    out
}

// ---- Ideals ----

/// A finitely generated ideal of the group ring with a canonical basis:
/// the echelon form of the G-translate saturation, unique per ideal.
#[derive(Clone, Debug)]
pub struct IdealFG {
    pub ring: FinGroupRing,
    pub gens: Vec<RElem>,
    canonical: HowellForm,
}

impl PartialEq for IdealFG {
    fn eq(&self, other: &IdealFG) -> bool {
        self.ring == other.ring && self.canonical == other.canonical
    }
}

impl IdealFG {
    pub fn new(ring: &FinGroupRing, gens: Vec<RElem>) -> IdealFG {
        let gens: Vec<RElem> = gens.iter().map(|x| ring.reduce_elem(x)).collect();
        let mut rows = Vec::with_capacity(gens.len() * ring.gsize());
        for x in &gens {
            for g in 0..ring.gsize() {
                rows.push(ring.ring().mul(&ring.ring().basis(g), x));
            }
        }
        let canonical = HowellForm::new(ring.modulus(), ring.gsize(), &rows);
        IdealFG { ring: ring.clone(), gens, canonical }
    }

    pub fn zero(ring: &FinGroupRing) -> IdealFG {
        IdealFG::new(ring, Vec::new())
    }

    pub fn unit(ring: &FinGroupRing) -> IdealFG {
        IdealFG::new(ring, vec![ring.ring().one()])
    }

    pub fn principal(ring: &FinGroupRing, x: &[BigInt]) -> IdealFG {
        IdealFG::new(ring, vec![x.to_vec()])
    }

    pub fn canonical_rows(&self) -> &[Vec<BigInt>] {
        self.canonical.rows()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.canonical.contains(&self.ring.reduce_elem(x))
    }

    pub fn contains_ideal(&self, other: &IdealFG) -> bool {
        self.canonical.contains_all(&other.canonical)
    }

    pub fn is_zero(&self) -> bool {
        self.canonical.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.contains(&self.ring.ring().one())
    }

    /// Generators scaled by an integer.
    pub fn scale(&self, c: &BigInt) -> IdealFG {
        let gens: Vec<RElem> = self
            .canonical_rows()
            .iter()
            .map(|r| r.iter().map(|x| (x * c).mod_floor(self.ring.modulus())).collect())
            .collect();
        IdealFG::new(&self.ring, gens)
    }
}

pub fn ideal_eq(a: &IdealFG, b: &IdealFG) -> Result<bool, Error> {
    if a.ring != b.ring {
        return Err(Error::Config("ideal comparison across different rings".into()));
    }
    Ok(a == b)
}

pub fn ideal_mul(a: &IdealFG, b: &IdealFG) -> Result<IdealFG, Error> {
    if a.ring != b.ring {
        return Err(Error::Config("ideal product across different rings".into()));
    }
    let mut gens = Vec::new();
    for x in a.canonical_rows() {
        for y in b.canonical_rows() {
            gens.push(a.ring.ring().mul(x, y));
        }
    }
    Ok(IdealFG::new(&a.ring, gens))
}

/// The involution ideal: image under the ring automorphism `g -> g^{-1}`.
pub fn iota_ideal(i: &IdealFG) -> IdealFG {
    let gens: Vec<RElem> =
        i.canonical_rows().iter().map(|x| i.ring.ring().iota(x)).collect();
    IdealFG::new(&i.ring, gens)
}

// ---- Fitting ideals ----

const MAX_FIT_GENERATORS: usize = 6;
const MAX_FIT_ROWS: usize = 16;
// Structure-derived presentations of an r-factor module emit r(1 + ngens)
// rows, so keeping sampled and kernel structures at 5 factors keeps their
// duals inside MAX_FIT_ROWS for rings with up to 2 group generators.
const MAX_STRUCTURE_FACTORS: usize = 5;

fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, f: &mut F) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Drops relation rows that lie in the ring-module span of the others;
/// the cokernel, and hence the Fitting ideal, is unchanged.
fn prune_spanned_rows(ring: &FinGroupRing, gens: usize, rows: &[Vec<RElem>]) -> Vec<Vec<RElem>> {
    let mut kept: Vec<Vec<RElem>> = rows.to_vec();
    let width = gens * ring.gsize();
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<Vec<RElem>> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, r)| r.clone())
            .collect();
        let span = HowellForm::new(ring.modulus(), width, &lattice_rows(ring, &others));
        if span.contains(&flatten_row(ring, &kept[i])) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// The (zeroth) Fitting ideal: all `g x g` minors of the relation matrix,
/// canonicalized. Fewer relation rows than generators give the zero
/// ideal.
pub fn fit(m: &PresentedModule) -> Result<IdealFG, Error> {
    let g = m.gens;
    if g > MAX_FIT_GENERATORS {
        return Err(Error::Config(format!(
            "fitting computation supports at most {} generators, presentation has {}",
            MAX_FIT_GENERATORS, g
        )));
    }
    let rows = prune_spanned_rows(&m.ring, g, &m.relations);
    if rows.len() < g {
        return Ok(IdealFG::zero(&m.ring));
    }
    if rows.len() > MAX_FIT_ROWS {
        return Err(Error::Config(format!(
            "fitting computation supports at most {} independent relations, presentation has {}",
            MAX_FIT_ROWS,
            rows.len()
        )));
    }
    let mut minors = Vec::new();
    for_each_combination(rows.len(), g, &mut |pick| {
        let sub: Vec<Vec<RElem>> = pick.iter().map(|&r| rows[r].clone()).collect();
        minors.push(det_generic(m.ring.ring(), &sub));
    });
    Ok(IdealFG::new(&m.ring, minors))
}

// ---- Annihilators ----

/// The exact annihilator, via the relative kernel of `r -> (r e_i mod L)`
/// over all generators at once.
pub fn ann(m: &PresentedModule) -> Result<IdealFG, Error> {
    let ring = &m.ring;
    let gsz = ring.gsize();
    let block = m.gens * gsz;
    let width = m.gens * block;
    if width > 4096 {
        return Err(Error::Config("annihilator computation exceeds the size cap".into()));
    }
    let mut rows = Vec::with_capacity(gsz);
    for h in 0..gsz {
        let mut row = vec![BigInt::zero(); width];
        for i in 0..m.gens {
            row[i * block + i * gsz + h] = BigInt::one();
        }
        rows.push(row);
    }
    let lat = lattice_rows(ring, &m.relations);
    let mut helpers = Vec::with_capacity(m.gens * lat.len());
    for i in 0..m.gens {
        for l in &lat {
            let mut row = vec![BigInt::zero(); width];
            row[i * block..(i + 1) * block].clone_from_slice(l);
            helpers.push(row);
        }
    }
    let kernel = kernel_mod(ring.modulus(), &rows, &helpers);
    Ok(IdealFG::new(ring, kernel))
}

// ---- Structure decomposition and duals ----

/// The underlying finite abelian group of a module, as invariant factors
/// with the action of each group generator (and its inverse) transported
/// into those coordinates.
#[derive(Clone, Debug)]
pub struct ModuleStructure {
    /// Nontrivial cyclic orders, each dividing the next.
    pub factors: Vec<BigInt>,
    /// Per group generator: matrix `A` with column `j` holding the
    /// coordinates of the generator acting on the `j`-th cyclic basis
    /// element; entries in row `i` are reduced mod `factors[i]`.
    pub gen_action: Vec<Vec<Vec<BigInt>>>,
    /// Same for the inverse of each group generator.
    pub gen_inv_action: Vec<Vec<Vec<BigInt>>>,
    pub order: BigInt,
}

fn group_generator_indices(group: &FinAbGroup) -> Vec<usize> {
    (0..group.orders().len())
        .map(|t| {
            let mut tuple = vec![0u64; group.orders().len()];
            if group.orders()[t] > 1 {
                tuple[t] = 1;
            }
            group.index(&tuple)
        })
        .collect()
}

fn matvec(t: &[Vec<BigInt>], v: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    t.iter()
        .map(|row| {
            row.iter().zip(v).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(modulus)
        })
        .collect()
}

/// Structure of `(Z/m)^ambient / span(relation_rows)` with the given
/// ambient operators transported to the cyclic coordinates. Operators
/// must preserve the relation lattice.
fn quotient_structure(
    modulus: &BigInt,
    ambient: usize,
    relation_rows: &[Vec<BigInt>],
    operators: &[Vec<Vec<BigInt>>],
) -> Result<(Vec<BigInt>, Vec<Vec<Vec<BigInt>>>), Error> {
    let lattice = HowellForm::new(modulus, ambient, relation_rows);
    for t in operators {
        for v in relation_rows {
            if !lattice.contains(&matvec(t, v, modulus)) {
                return Err(Error::Internal(
                    "operator does not preserve the relation lattice".into(),
                ));
            }
        }
    }
    let mut rows = relation_rows.to_vec();
    for j in 0..ambient {
        let mut r = vec![BigInt::zero(); ambient];
        r[j] = modulus.clone();
        rows.push(r);
    }
    let sd = smith_decomposition(ambient, &rows);
    let idx: Vec<usize> =
        (0..ambient).filter(|&i| !sd.factors[i].is_one()).collect();
    let factors: Vec<BigInt> = idx.iter().map(|&i| sd.factors[i].clone()).collect();
    let r = idx.len();
    let mut mats = Vec::with_capacity(operators.len());
    for t in operators {
        let mut mat = vec![vec![BigInt::zero(); r]; r];
        for (j, &col) in idx.iter().enumerate() {
            let lift: Vec<BigInt> =
                (0..ambient).map(|row| sd.p_inv[row][col].mod_floor(modulus)).collect();
            let w = matvec(t, &lift, modulus);
            let co = sd.coords(&w);
            for (i, &pos) in idx.iter().enumerate() {
                mat[i][j] = co[pos].clone();
            }
        }
        mats.push(mat);
    }
    Ok((factors, mats))
}

fn permutation_operator(ring: &FinGroupRing, gens: usize, g: usize) -> Vec<Vec<BigInt>> {
    let gsz = ring.gsize();
    let n = gens * gsz;
    let group = ring.group();
    let ginv = group.inv(g);
    let mut t = vec![vec![BigInt::zero(); n]; n];
    for b in 0..gens {
        for h in 0..gsz {
            // (g*x) at position h picks up x at position g^{-1} h.
            t[b * gsz + h][b * gsz + group.mul(ginv, h)] = BigInt::one();
        }
    }
    t
}

/// Structure decomposition of a presented module.
pub fn structure(m: &PresentedModule) -> Result<ModuleStructure, Error> {
    let ring = &m.ring;
    let ambient = m.gens * ring.gsize();
    let rel = lattice_rows(ring, &m.relations);
    let group = ring.group();
    let gen_idx = group_generator_indices(group);
    let mut operators = Vec::with_capacity(2 * gen_idx.len());
    for &g in &gen_idx {
        operators.push(permutation_operator(ring, m.gens, g));
    }
    for &g in &gen_idx {
        operators.push(permutation_operator(ring, m.gens, group.inv(g)));
    }
    let (factors, mats) = quotient_structure(ring.modulus(), ambient, &rel, &operators)?;
    let order = factors.iter().product::<BigInt>();
    let ngen = gen_idx.len();
    Ok(ModuleStructure {
        factors,
        gen_action: mats[..ngen].to_vec(),
        gen_inv_action: mats[ngen..].to_vec(),
        order,
    })
}

pub fn module_order(m: &PresentedModule) -> Result<BigInt, Error> {
    Ok(structure(m)?.order)
}

/// Presents `sum_i Z/d_i` with the given generator action as a module
/// over the ring: order relations plus one action relation per group
/// generator and cyclic basis element.
pub fn presentation_from_structure(
    ring: &FinGroupRing,
    s: &ModuleStructure,
) -> Result<PresentedModule, Error> {
    let r = s.factors.len();
    if r == 0 {
        return PresentedModule::new(ring, 1, vec![vec![ring.ring().one()]]);
    }
    let group = ring.group();
    let gen_idx = group_generator_indices(group);
    let zero = ring.ring().zero();
    let mut rows = Vec::new();
    for i in 0..r {
        let mut row = vec![zero.clone(); r];
        row[i] = ring.scalar(&s.factors[i]);
        rows.push(row);
    }
    for (t, &g) in gen_idx.iter().enumerate() {
        let a = &s.gen_action[t];
        for i in 0..r {
            let mut row = vec![zero.clone(); r];
            for j in 0..r {
                row[j] = ring.ring().neg(&ring.scalar(&a[j][i]));
            }
            row[i] = ring.ring().add(&row[i], &ring.ring().basis(g));
            rows.push(row);
        }
    }
    PresentedModule::new(ring, r, rows)
}

/// Transposes an action matrix to the Pontryagin dual basis: the dual of
/// `A` has `(i, j)` entry `A[j][i] * d_i / d_j`, which the divisibility
/// chain keeps integral.
fn dual_action(factors: &[BigInt], a: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, Error> {
    let r = factors.len();
    let mut out = vec![vec![BigInt::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            let val = if factors[i].is_multiple_of(&factors[j]) {
                &a[j][i] * (&factors[i] / &factors[j])
            } else {
                let ratio = &factors[j] / &factors[i];
                let (q, rem) = a[j][i].div_rem(&ratio);
                if !rem.is_zero() {
                    return Err(Error::Internal(
                        "dual action entry fails the divisibility constraint".into(),
                    ));
                }
                q
            };
            out[i][j] = val.mod_floor(&factors[i]);
        }
    }
    Ok(out)
}

fn dual_structure(s: &ModuleStructure, through_inverse: bool) -> Result<ModuleStructure, Error> {
    let (src, src_inv) = if through_inverse {
        (&s.gen_inv_action, &s.gen_action)
    } else {
        (&s.gen_action, &s.gen_inv_action)
    };
    let gen_action = src
        .iter()
        .map(|a| dual_action(&s.factors, a))
        .collect::<Result<Vec<_>, _>>()?;
    let gen_inv_action = src_inv
        .iter()
        .map(|a| dual_action(&s.factors, a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ModuleStructure {
        factors: s.factors.clone(),
        gen_action,
        gen_inv_action,
        order: s.order.clone(),
    })
}

/// Pontryagin dual with the action `(g.f)(m) = f(g m)`.
pub fn dual_wedge(m: &PresentedModule) -> Result<PresentedModule, Error> {
    let s = structure(m)?;
    presentation_from_structure(&m.ring, &dual_structure(&s, false)?)
}

/// Pontryagin dual with the action `(g.f)(m) = f(g^{-1} m)`.
pub fn dual_vee(m: &PresentedModule) -> Result<PresentedModule, Error> {
    let s = structure(m)?;
    presentation_from_structure(&m.ring, &dual_structure(&s, true)?)
}

// ---- Non-zero-divisors ----

/// Whether multiplication by `x` is injective on the finite ring.
pub fn is_nzd(ring: &FinGroupRing, x: &[BigInt]) -> bool {
    let x = ring.reduce_elem(x);
    let rows: Vec<Vec<BigInt>> =
        (0..ring.gsize()).map(|h| ring.ring().mul(&x, &ring.ring().basis(h))).collect();
    let kernel = kernel_mod(ring.modulus(), &rows, &[]);
    kernel.iter().all(|r| r.iter().all(Zero::is_zero))
}

// ---- Twists ----

fn check_unit_hom(ring: &FinGroupRing, c: &[BigInt]) -> Result<Vec<BigInt>, Error> {
    let group = ring.group();
    if c.len() != group.size() {
        return Err(Error::Config("twist character must list one unit per group element".into()));
    }
    let c: Vec<BigInt> = c.iter().map(|v| v.mod_floor(ring.modulus())).collect();
    let ell = BigInt::from(ring.ell());
    for (g, v) in c.iter().enumerate() {
        if (v % &ell).is_zero() {
            return Err(Error::Config(format!(
                "twist character value at {} is not a unit",
                group.label(g)
            )));
        }
    }
    if !c[group.identity()].is_one() {
        return Err(Error::Config("twist character must send the identity to 1".into()));
    }
    for g in 0..group.size() {
        for h in 0..group.size() {
            let lhs = (&c[g] * &c[h]).mod_floor(ring.modulus());
            if lhs != c[group.mul(g, h)] {
                return Err(Error::Config("twist character is not multiplicative".into()));
            }
        }
    }
    Ok(c)
}

fn powmod_int(base: &BigInt, e: u64, modulus: &BigInt) -> BigInt {
    let mut acc = BigInt::one();
    let mut b = base.mod_floor(modulus);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &b).mod_floor(modulus);
        }
        b = (&b * &b).mod_floor(modulus);
        e >>= 1;
    }
    acc
}

fn twist_factors(ring: &FinGroupRing, n: i64, c: &[BigInt]) -> Result<Vec<BigInt>, Error> {
    let c = check_unit_hom(ring, c)?;
    c.iter()
        .map(|v| {
            if n >= 0 {
                Ok(powmod_int(v, n as u64, ring.modulus()))
            } else {
                let inv = mod_inverse(v, ring.modulus())
                    .ok_or_else(|| Error::Internal("unit has no inverse".into()))?;
                Ok(powmod_int(&inv, n.unsigned_abs(), ring.modulus()))
            }
        })
        .collect()
}

fn apply_scaling(ring: &FinGroupRing, factors: &[BigInt], x: &[BigInt]) -> RElem {
    x.iter()
        .zip(factors)
        .map(|(v, f)| (v * f).mod_floor(ring.modulus()))
        .collect()
}

/// Image of an ideal under the Tate-twist automorphism
/// `g -> c(g)^{-m} g`.
pub fn twist_ideal(i: &IdealFG, m: i64, c: &[BigInt]) -> Result<IdealFG, Error> {
    let factors = twist_factors(&i.ring, -m, c)?;
    let gens: Vec<RElem> =
        i.canonical_rows().iter().map(|x| apply_scaling(&i.ring, &factors, x)).collect();
    Ok(IdealFG::new(&i.ring, gens))
}

/// Applies `g -> c(g)^n g` to every entry of a presentation.
pub fn twist_presentation(
    m: &PresentedModule,
    n: i64,
    c: &[BigInt],
) -> Result<PresentedModule, Error> {
    let factors = twist_factors(&m.ring, n, c)?;
    let relations: Vec<Vec<RElem>> = m
        .relations
        .iter()
        .map(|row| row.iter().map(|e| apply_scaling(&m.ring, &factors, e)).collect())
        .collect();
    PresentedModule::new(&m.ring, m.gens, relations)
}

// ---- Base change ----

/// The same presentation over `(Z/l^k2)[G]` for a smaller exponent.
pub fn reduce_scalars(m: &PresentedModule, k2: u32) -> Result<PresentedModule, Error> {
    if k2 == 0 || k2 > m.ring.k() {
        return Err(Error::Config("reduction exponent must satisfy 1 <= k2 <= k".into()));
    }
    let ring2 = FinGroupRing::new(m.ring.group(), m.ring.ell(), k2)?;
    PresentedModule::new(&ring2, m.gens, m.relations.clone())
}

pub fn reduce_ideal(i: &IdealFG, k2: u32) -> Result<IdealFG, Error> {
    if k2 == 0 || k2 > i.ring.k() {
        return Err(Error::Config("reduction exponent must satisfy 1 <= k2 <= k".into()));
    }
    let ring2 = FinGroupRing::new(i.ring.group(), i.ring.ell(), k2)?;
    Ok(IdealFG::new(&ring2, i.gens.clone()))
}

/// Base change along the augmentation `(Z/l^k)[G] -> Z/l^k`.
pub fn augment_module(m: &PresentedModule) -> Result<PresentedModule, Error> {
    let ring2 = FinGroupRing::new(&FinAbGroup::trivial(), m.ring.ell(), m.ring.k())?;
    let relations: Vec<Vec<RElem>> = m
        .relations
        .iter()
        .map(|row| {
            row.iter().map(|e| vec![m.ring.ring().augmentation(e)]).collect()
        })
        .collect();
    PresentedModule::new(&ring2, m.gens, relations)
}

pub fn augment_ideal(i: &IdealFG) -> Result<IdealFG, Error> {
    let ring2 = FinGroupRing::new(&FinAbGroup::trivial(), i.ring.ell(), i.ring.k())?;
    let gens: Vec<RElem> =
        i.gens.iter().map(|e| vec![i.ring.ring().augmentation(e)]).collect();
    Ok(IdealFG::new(&ring2, gens))
}

// ---- Fractional ideals ----

/// An ideal together with an integer denominator; equality is defined by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct FracIdeal {
    pub numerator: IdealFG,
    pub denominator: BigInt,
}

impl FracIdeal {
    pub fn new(numerator: IdealFG, denominator: BigInt) -> Result<FracIdeal, Error> {
        if denominator.is_zero() {
            return Err(Error::Config("fractional ideal denominator must be nonzero".into()));
        }
        Ok(FracIdeal { numerator, denominator })
    }

    pub fn integral(numerator: IdealFG) -> FracIdeal {
        FracIdeal { numerator, denominator: BigInt::one() }
    }

    /// Whether the power of `l` in the denominator divides every
    /// canonical generator (the unit part of the denominator always
    /// divides).
    pub fn is_integral(&self) -> bool {
        let ell = BigInt::from(self.numerator.ring.ell());
        let a = int_valuation(&self.denominator, &ell);
        if a == 0 {
            return true;
        }
        let la = int_pow(&ell, a as u64);
        self.numerator
            .canonical_rows()
            .iter()
            .all(|r| r.iter().all(|x| (x % &la).is_zero()))
    }

    /// Divides the denominator out exactly, at the ring's own level.
    pub fn integral_part(&self) -> Result<IdealFG, Error> {
        if !self.is_integral() {
            return Err(Error::Config("denominator does not divide the ideal".into()));
        }
        let ring = &self.numerator.ring;
        let ell = BigInt::from(ring.ell());
        let a = int_valuation(&self.denominator, &ell);
        let la = int_pow(&ell, a as u64);
        let unit = (&self.denominator / &la).mod_floor(ring.modulus());
        let unit_inv = mod_inverse(&unit, ring.modulus())
            .ok_or_else(|| Error::Internal("denominator unit part is not invertible".into()))?;
        let gens: Vec<RElem> = self
            .numerator
            .canonical_rows()
            .iter()
            .map(|r| {
                r.iter().map(|x| ((x / &la) * &unit_inv).mod_floor(ring.modulus())).collect()
            })
            .collect();
        Ok(IdealFG::new(ring, gens))
    }
}

pub fn frac_ideal_eq(a: &FracIdeal, b: &FracIdeal) -> Result<bool, Error> {
    if a.numerator.ring != b.numerator.ring {
        return Err(Error::Config("fractional ideal comparison across different rings".into()));
    }
    Ok(a.numerator.scale(&b.denominator) == b.numerator.scale(&a.denominator))
}

// ---- Four-term identity ----

/// Lift mod-`l^k` entries to the representatives in `(-l^k/2, l^k/2]`.
fn balanced_lift(ring: &FinGroupRing, x: &[BigInt]) -> Vec<BigInt> {
    x.iter()
        .map(|c| {
            let r = c.mod_floor(ring.modulus());
            if &r * 2 > *ring.modulus() {
                r - ring.modulus()
            } else {
                r
            }
        })
        .collect()
}

/// The relation lattice of the balanced integer lift as a square integer
/// matrix: one row per relation row and group translate, no reduction.
fn integral_translate_matrix(
    ring: &FinGroupRing,
    gens: usize,
    rows: &[Vec<RElem>],
) -> Vec<Vec<BigInt>> {
    let gsz = ring.gsize();
    let group = ring.group();
    let width = gens * gsz;
    let mut out = Vec::with_capacity(rows.len() * gsz);
    for row in rows {
        let lifted: Vec<Vec<BigInt>> = row.iter().map(|e| balanced_lift(ring, e)).collect();
        for h in 0..gsz {
            let mut flat = vec![BigInt::zero(); width];
            for (b, e) in lifted.iter().enumerate() {
                for (g, c) in e.iter().enumerate() {
                    flat[b * gsz + group.mul(h, g)] = c.clone();
                }
            }
            out.push(flat);
        }
    }
    out
}

/// Accepts free presentations, and square presentations whose balanced
/// integer lift is injective over the integral group ring with cokernel
/// killed by `l^k`. Such a cokernel is the reduction of a module with a
/// square injective resolution, which is what the product identity
/// needs; the two lift conditions are checked exactly.
fn certify_square_presentation(m: &PresentedModule, name: &str) -> Result<(), Error> {
    if m.relations.is_empty() {
        return Ok(());
    }
    if m.relations.len() != m.gens {
        return Err(Error::Config(format!(
            "{} must be free or the cokernel of a square matrix",
            name
        )));
    }
    let t = integral_translate_matrix(&m.ring, m.gens, &m.relations);
    let n = t.len();
    let det = det_bareiss(&t);
    if det.is_zero() {
        return Err(Error::Config(format!(
            "{} relation matrix is not injective over the integral group ring",
            name
        )));
    }
    // l^k * e_j must lie in the integer row lattice: the solution of
    // y * T = l^k e_j is integral for every j.
    let tt: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from(t[j][i].clone())).collect())
        .collect();
    for j in 0..n {
        let mut target = vec![BigRational::zero(); n];
        target[j] = BigRational::from(m.ring.modulus().clone());
        let sol = solve_rational(&tt, &target)
            .ok_or_else(|| Error::Internal("nonsingular solve failed".into()))?;
        if sol.iter().any(|x| !x.is_integer()) {
            return Err(Error::Config(format!(
                "{} relation matrix does not present a module killed by the ring modulus",
                name
            )));
        }
    }
    Ok(())
}

/// Kernel and cokernel data for a well-defined map between presented
/// modules given by generator images.
struct MapKernel {
    structure: ModuleStructure,
}

fn kernel_structure(
    b: &PresentedModule,
    c: &PresentedModule,
    phi: &[Vec<RElem>],
) -> Result<MapKernel, Error> {
    let ring = &b.ring;
    let gsz = ring.gsize();
    let group = ring.group();
    let width_c = c.gens * gsz;
    let lat_c = HowellForm::new(ring.modulus(), width_c, &lattice_rows(ring, &c.relations));

    // Well-definedness: each relation of B must map into C's relation
    // lattice.
    for row in &b.relations {
        let mut image = vec![ring.ring().zero(); c.gens];
        for (i, r) in row.iter().enumerate() {
            for (j, target) in image.iter_mut().enumerate() {
                *target = ring.ring().add(target, &ring.ring().mul(r, &phi[i][j]));
            }
        }
        if !lat_c.contains(&flatten_row(ring, &image)) {
            return Err(Error::Config("map is not well defined on the presentations".into()));
        }
    }

    // K = preimage of C's relation lattice, inside the free cover of B.
    let mut map_rows = Vec::with_capacity(b.gens * gsz);
    for i in 0..b.gens {
        for h in 0..gsz {
            map_rows.push(flatten_row(ring, &translate_row(ring, h, &phi[i])));
        }
    }
    let helpers = lattice_rows(ring, &c.relations);
    let kernel = kernel_mod(ring.modulus(), &map_rows, &helpers);
    let khow = HowellForm::new(ring.modulus(), b.gens * gsz, &kernel);
    let k_rows = khow.rows().to_vec();
    let s = k_rows.len();

    if s == 0 {
        return Ok(MapKernel {
            structure: ModuleStructure {
                factors: Vec::new(),
                gen_action: vec![Vec::new(); group.orders().len()],
                gen_inv_action: vec![Vec::new(); group.orders().len()],
                order: BigInt::one(),
            },
        });
    }

    // A = K / L_B in the coordinates of K's canonical basis.
    let mut relation_rows = kernel_mod(ring.modulus(), &k_rows, &[]);
    for v in lattice_rows(ring, &b.relations) {
        let coords = solve_mod(ring.modulus(), &k_rows, &v).ok_or_else(|| {
            Error::Internal("relation lattice escapes the kernel lattice".into())
        })?;
        relation_rows.push(coords);
    }

    let gen_idx = group_generator_indices(group);
    let mut operators = Vec::with_capacity(2 * gen_idx.len());
    for pass in 0..2 {
        for &g in &gen_idx {
            let act = if pass == 0 { g } else { group.inv(g) };
            let perm = permutation_operator(ring, b.gens, act);
            let mut t = vec![vec![BigInt::zero(); s]; s];
            for (col, kr) in k_rows.iter().enumerate() {
                let moved = matvec(&perm, kr, ring.modulus());
                let coords = solve_mod(ring.modulus(), &k_rows, &moved).ok_or_else(|| {
                    Error::Internal("kernel lattice is not stable under the action".into())
                })?;
                for (row, val) in coords.into_iter().enumerate() {
                    t[row][col] = val;
                }
            }
            operators.push(t);
        }
    }

    let (factors, mats) = quotient_structure(ring.modulus(), s, &relation_rows, &operators)?;
    let order = factors.iter().product::<BigInt>();
    let ngen = gen_idx.len();
    Ok(MapKernel {
        structure: ModuleStructure {
            factors,
            gen_action: mats[..ngen].to_vec(),
            gen_inv_action: mats[ngen..].to_vec(),
            order,
        },
    })
}

/// Both sides of the product identity: `fit(ker^wedge) * fit(C)` and
/// `fit(B) * fit(coker)`. `phi[i]` is the image of the `i`-th generator
/// of `B` in `C`.
pub fn four_term_sides(
    b: &PresentedModule,
    c: &PresentedModule,
    phi: &[Vec<RElem>],
) -> Result<(IdealFG, IdealFG), Error> {
    if b.ring != c.ring {
        return Err(Error::Config("map endpoints live over different rings".into()));
    }
    if phi.len() != b.gens || phi.iter().any(|row| row.len() != c.gens) {
        return Err(Error::Config("map must give one image row per generator of B".into()));
    }
    certify_square_presentation(b, "B")?;
    certify_square_presentation(c, "C")?;
    let phi: Vec<Vec<RElem>> = phi
        .iter()
        .map(|row| row.iter().map(|e| b.ring.reduce_elem(e)).collect())
        .collect();

    let kernel = kernel_structure(b, c, &phi)?;
    if kernel.structure.factors.len() > MAX_STRUCTURE_FACTORS {
        return Err(Error::Config(format!(
            "kernel needs {} generators, above the fitting cap of {}",
            kernel.structure.factors.len(),
            MAX_STRUCTURE_FACTORS
        )));
    }
    let a_wedge =
        presentation_from_structure(&b.ring, &dual_structure(&kernel.structure, false)?)?;

    let mut coker_rows = c.relations.clone();
    coker_rows.extend(phi.iter().cloned());
    let d = PresentedModule::new(&c.ring, c.gens, coker_rows)?;

    let lhs = ideal_mul(&fit(&a_wedge)?, &fit(c)?)?;
    let rhs = ideal_mul(&fit(b)?, &fit(&d)?)?;
    Ok((lhs, rhs))
}

/// Verifies `fit(ker^wedge) * fit(C) = fit(B) * fit(coker)` for a map
/// between free modules or cokernels of certified square presentations.
/// Precondition violations are configuration errors; an identity failure
/// returns `Ok(false)`.
pub fn four_term_check(
    b: &PresentedModule,
    c: &PresentedModule,
    phi: &[Vec<RElem>],
) -> Result<bool, Error> {
    let (lhs, rhs) = four_term_sides(b, c, phi)?;
    ideal_eq(&lhs, &rhs)
}

// ---- Serialization ----

fn elem_json(group: &FinAbGroup, x: &[BigInt]) -> serde_json::Value {
    let mut map = BTreeMap::new();
    for (g, c) in x.iter().enumerate() {
        if !c.is_zero() {
            map.insert(group.label(g).to_string(), c.to_string());
        }
    }
    serde_json::to_value(map).expect("string map serializes")
}

/// Canonical basis of an ideal as a JSON array of sparse elements.
pub fn ideal_to_json(i: &IdealFG) -> serde_json::Value {
    let group = i.ring.group();
    let rows: Vec<serde_json::Value> =
        i.canonical_rows().iter().map(|r| elem_json(group, r)).collect();
    serde_json::Value::Array(rows)
}

pub fn presentation_to_json(m: &PresentedModule) -> serde_json::Value {
    let group = m.ring.group();
    let relations: Vec<Vec<serde_json::Value>> = m
        .relations
        .iter()
        .map(|row| row.iter().map(|e| elem_json(group, e)).collect())
        .collect();
    serde_json::json!({
        "ring": {
            "orders": group.orders(),
            "ell": m.ring.ell(),
            "k": m.ring.k(),
        },
        "generators": m.gens,
        "relations": relations,
    })
}

fn rows_as_strings(rows: &[Vec<BigInt>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

// ---- Randomized harness ----

#[derive(Clone, Debug, Serialize)]
pub struct FitlabRecord {
    pub seed: u64,
    pub instance: u64,
    pub property: String,
    pub ring: String,
    pub lhs: Vec<Vec<String>>,
    pub rhs: Vec<Vec<String>>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitlabReport {
    pub seed: u64,
    pub instances: u64,
    pub records: Vec<FitlabRecord>,
    pub all_pass: bool,
}

fn harness_rings() -> Vec<FinGroupRing> {
    let c2 = FinAbGroup::new(vec![2], None);
    let c3 = FinAbGroup::new(vec![3], None);
    let c4 = FinAbGroup::new(vec![4], None);
    let c2c2 = FinAbGroup::new(vec![2, 2], None);
    vec![
        FinGroupRing::new(&c2, 2, 2).expect("ring"),
        FinGroupRing::new(&c2, 2, 3).expect("ring"),
        FinGroupRing::new(&c3, 3, 2).expect("ring"),
        FinGroupRing::new(&c3, 3, 3).expect("ring"),
        FinGroupRing::new(&c4, 2, 2).expect("ring"),
        FinGroupRing::new(&c2c2, 2, 3).expect("ring"),
    ]
}

fn modulus_u64(ring: &FinGroupRing) -> u64 {
    ring.modulus().to_u64().expect("harness moduli are small")
}

fn pow_mod(base: u64, exp: u64, modulus: u64) -> u64 {
    let mut out = 1 % modulus;
    for _ in 0..exp {
        out = out * base % modulus;
    }
    out
}

fn rand_elem(rng: &mut ChaCha8Rng, ring: &FinGroupRing) -> RElem {
    let m = modulus_u64(ring);
    (0..ring.gsize()).map(|_| BigInt::from(rng.gen_range(0..m))).collect()
}

fn rand_presentation(
    rng: &mut ChaCha8Rng,
    ring: &FinGroupRing,
    max_gens: usize,
    max_rows: usize,
) -> PresentedModule {
    let gens = rng.gen_range(1..=max_gens);
    let rows = rng.gen_range(0..=max_rows);
    let relations: Vec<Vec<RElem>> =
        (0..rows).map(|_| (0..gens).map(|_| rand_elem(rng, ring)).collect()).collect();
    PresentedModule::new(ring, gens, relations).expect("well-formed random presentation")
}

/// A ring element whose own 1x1 presentation passes the lift
/// certificate, so it can seed a certified diagonal.
fn rand_certified_element(rng: &mut ChaCha8Rng, ring: &FinGroupRing) -> Result<RElem, Error> {
    for _ in 0..2000 {
        let x = rand_elem(rng, ring);
        let pm = PresentedModule::new(ring, 1, vec![vec![x.clone()]])?;
        if pm.relations.len() == 1 && certify_square_presentation(&pm, "element").is_ok() {
            return Ok(x);
        }
    }
    Err(Error::Internal("could not sample a certified ring element".into()))
}

/// A square presentation certified for the product identity: a certified
/// diagonal dressed with elementary row and column operations, monomial
/// unit scalings, and swaps. All the dressing is unimodular after
/// flattening, so the integral product keeps the diagonal's invariant
/// factors; the lift certificate is re-checked after reduction.
fn rand_certified_square(
    rng: &mut ChaCha8Rng,
    ring: &FinGroupRing,
    n: usize,
) -> Result<PresentedModule, Error> {
    let zr = z_group_ring(ring.group());
    let gsz = ring.gsize();
    for _ in 0..200 {
        let mut m = vec![vec![zr.zero(); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = balanced_lift(ring, &rand_certified_element(rng, ring)?);
        }
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let mono = zr.monomial(
                BigInt::from([-1i64, 1][rng.gen_range(0..2)]),
                rng.gen_range(0..gsz),
            );
            match rng.gen_range(0..4) {
                0 if i != j => {
                    // row_i += mono * row_j
                    for t in 0..n {
                        let add = zr.mul(&mono, &m[j][t]);
                        m[i][t] = zr.add(&m[i][t], &add);
                    }
                }
                1 if i != j => {
                    // col_i += col_j * mono
                    for row in m.iter_mut() {
                        let add = zr.mul(&row[j], &mono);
                        row[i] = zr.add(&row[i], &add);
                    }
                }
                2 => {
                    for t in 0..n {
                        m[i][t] = zr.mul(&mono, &m[i][t]);
                    }
                }
                _ if i != j => m.swap(i, j),
                _ => {}
            }
        }
        let reduced: Vec<Vec<RElem>> =
            m.iter().map(|row| row.iter().map(|e| ring.reduce_elem(e)).collect()).collect();
        let pm = PresentedModule::new(ring, n, reduced)?;
        if pm.relations.len() != n {
            continue;
        }
        if certify_square_presentation(&pm, "sample").is_ok() {
            return Ok(pm);
        }
    }
    Err(Error::Internal("could not sample a certified square presentation".into()))
}

/// A certified square presentation whose underlying group stays within
/// the fitting generator cap, so kernels and duals of the module do too
/// (subgroups of a finite abelian l-group never need more cyclic factors
/// than the group).
fn rand_bounded_square(
    rng: &mut ChaCha8Rng,
    ring: &FinGroupRing,
    n: usize,
) -> Result<PresentedModule, Error> {
    for _ in 0..100 {
        let m = rand_certified_square(rng, ring, n)?;
        if structure(&m)?.factors.len() <= MAX_STRUCTURE_FACTORS {
            return Ok(m);
        }
    }
    Err(Error::Internal("could not sample a bounded certified presentation".into()))
}

/// Unit homomorphisms `G -> (Z/l^k)^x`, found by brute force on
/// generator images.
fn unit_homs(ring: &FinGroupRing) -> Vec<Vec<BigInt>> {
    let group = ring.group();
    let modulus = modulus_u64(ring);
    let orders = group.orders().to_vec();
    let mut per_gen: Vec<Vec<u64>> = Vec::new();
    for &n in &orders {
        let mut images = Vec::new();
        for u in 1..modulus {
            if BigInt::from(u).gcd(&BigInt::from(ring.ell())).is_one()
                && powmod_int(&BigInt::from(u), n, ring.modulus()).is_one()
            {
                images.push(u);
            }
        }
        per_gen.push(images);
    }
    let mut homs = Vec::new();
    let mut pick = vec![0usize; orders.len()];
    loop {
        let mut c = vec![BigInt::zero(); group.size()];
        for g in 0..group.size() {
            let tuple = group.tuple(g);
            let mut v = BigInt::one();
            for (t, &e) in tuple.iter().enumerate() {
                v = (v * powmod_int(&BigInt::from(per_gen[t][pick[t]]), e, ring.modulus()))
                    .mod_floor(ring.modulus());
            }
            c[g] = v;
        }
        homs.push(c);
        let mut t = 0;
        loop {
            if t == orders.len() {
                return homs;
            }
            pick[t] += 1;
            if pick[t] < per_gen[t].len() {
                break;
            }
            pick[t] = 0;
            t += 1;
        }
    }
}

fn record(
    seed: u64,
    instance: u64,
    property: &str,
    ring: &FinGroupRing,
    lhs: &IdealFG,
    rhs: &IdealFG,
    pass: bool,
) -> FitlabRecord {
    FitlabRecord {
        seed,
        instance,
        property: property.to_string(),
        ring: ring.name(),
        lhs: rows_as_strings(lhs.canonical_rows()),
        rhs: rows_as_strings(rhs.canonical_rows()),
        pass,
    }
}

/// Samples a well-defined map `B -> C` by solving the well-definedness
/// constraints exactly and drawing a random lattice point, retrying until
/// the kernel fits under the fitting-generator cap.
fn sample_map(
    rng: &mut ChaCha8Rng,
    b: &PresentedModule,
    c: &PresentedModule,
) -> Result<Vec<Vec<RElem>>, Error> {
    let ring = &b.ring;
    let gsz = ring.gsize();
    let unknowns = b.gens * c.gens * gsz;
    let basis: Vec<Vec<BigInt>> = if b.relations.is_empty() {
        // A free source puts no condition on the images.
        (0..unknowns)
            .map(|i| {
                let mut row = vec![BigInt::zero(); unknowns];
                row[i] = BigInt::one();
                row
            })
            .collect()
    } else {
        let cond_width = b.relations.len() * c.gens * gsz;
        let mut rows = Vec::with_capacity(unknowns);
        for i in 0..b.gens {
            for j in 0..c.gens {
                for h in 0..gsz {
                    // phi[i][j] = basis(h): relation row r maps through
                    // r[i] * basis(h) in target slot j.
                    let mut row = vec![BigInt::zero(); cond_width];
                    for (ri, rel) in b.relations.iter().enumerate() {
                        let prod = ring.ring().mul(&rel[i], &ring.ring().basis(h));
                        let offset = (ri * c.gens + j) * gsz;
                        row[offset..offset + gsz].clone_from_slice(&prod);
                    }
                    rows.push(row);
                }
            }
        }
        let lat_c = lattice_rows(ring, &c.relations);
        let mut helpers = Vec::new();
        for ri in 0..b.relations.len() {
            for l in &lat_c {
                let mut row = vec![BigInt::zero(); cond_width];
                let offset = ri * c.gens * gsz;
                row[offset..offset + l.len()].clone_from_slice(l);
                helpers.push(row);
            }
        }
        kernel_mod(ring.modulus(), &rows, &helpers)
    };
    let m = modulus_u64(ring);
    for _ in 0..40 {
        let mut flat = vec![BigInt::zero(); unknowns];
        for row in &basis {
            let coeff = BigInt::from(rng.gen_range(0..m));
            for (f, v) in flat.iter_mut().zip(row) {
                *f = (&*f + &coeff * v).mod_floor(ring.modulus());
            }
        }
        let phi: Vec<Vec<RElem>> = (0..b.gens)
            .map(|i| {
                (0..c.gens)
                    .map(|j| {
                        let start = (i * c.gens + j) * gsz;
                        flat[start..start + gsz].to_vec()
                    })
                    .collect()
            })
            .collect();
        let kernel = kernel_structure(b, c, &phi)?;
        if kernel.structure.factors.len() <= MAX_STRUCTURE_FACTORS {
            return Ok(phi);
        }
    }
    Err(Error::Internal("could not sample a map with a small enough kernel".into()))
}

/// Runs every randomized identity once per instance and collects
/// reproducible records. The same seed gives byte-identical reports.
pub fn fitlab_run(seed: u64, instances: u64) -> Result<FitlabReport, Error> {
    let rings = harness_rings();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();

    for instance in 0..instances {
        let ring = &rings[(instance as usize) % rings.len()];

        // Containment of the Fitting ideal in the annihilator.
        let m = rand_presentation(&mut rng, ring, 3, 4);
        let f = fit(&m)?;
        let a = ann(&m)?;
        records.push(record(
            seed,
            instance,
            "fit_inside_ann",
            ring,
            &f,
            &a,
            a.contains_ideal(&f),
        ));

        // Fitting ideal of a cyclic quotient recovers the ideal.
        let igens: Vec<RElem> =
            (0..rng.gen_range(1..=3)).map(|_| rand_elem(&mut rng, ring)).collect();
        let ideal = IdealFG::new(ring, igens.clone());
        let q = PresentedModule::quotient_by(ring, &igens)?;
        let fq = fit(&q)?;
        let pass = ideal_eq(&fq, &ideal)?;
        records.push(record(seed, instance, "fit_of_quotient", ring, &fq, &ideal, pass));

        // Direct sums multiply Fitting ideals.
        let m1 = rand_presentation(&mut rng, ring, 2, 3);
        let m2 = rand_presentation(&mut rng, ring, 2, 3);
        let zero = ring.ring().zero();
        let mut block = Vec::new();
        for row in &m1.relations {
            let mut r = row.clone();
            r.extend(std::iter::repeat(zero.clone()).take(m2.gens));
            block.push(r);
        }
        for row in &m2.relations {
            let mut r = vec![zero.clone(); m1.gens];
            r.extend(row.iter().cloned());
            block.push(r);
        }
        let sum = PresentedModule::new(ring, m1.gens + m2.gens, block)?;
        let lhs = fit(&sum)?;
        let rhs = ideal_mul(&fit(&m1)?, &fit(&m2)?)?;
        let pass = ideal_eq(&lhs, &rhs)?;
        records.push(record(seed, instance, "fit_of_direct_sum", ring, &lhs, &rhs, pass));

        // Base change: scalar reduction and augmentation.
        let m = rand_presentation(&mut rng, ring, 2, 3);
        if ring.k() > 1 {
            let lhs = fit(&reduce_scalars(&m, ring.k() - 1)?)?;
            let rhs = reduce_ideal(&fit(&m)?, ring.k() - 1)?;
            let pass = ideal_eq(&lhs, &rhs)?;
            records.push(record(seed, instance, "fit_reduces_with_scalars", ring, &lhs, &rhs, pass));
        }
        let lhs = fit(&augment_module(&m)?)?;
        let rhs = augment_ideal(&fit(&m)?)?;
        let pass = ideal_eq(&lhs, &rhs)?;
        records.push(record(seed, instance, "fit_commutes_with_augmentation", ring, &lhs, &rhs, pass));

        // Modules cyclic as abelian groups: Z/l^a with each group
        // generator acting through a unit of compatible multiplicative
        // order. For these, fit = ann and both survive the plain dual.
        // Quotients by a single random ring element are cyclic only as
        // modules and do not satisfy the dual identities in general.
        let a = rng.gen_range(1..=ring.k());
        let la = int_pow(&BigInt::from(ring.ell()), a as u64);
        let la_small = la.to_u64().expect("harness moduli are small");
        let group = ring.group();
        let rr = ring.ring();
        let mut rels: Vec<RElem> = vec![ring.reduce_elem(&rr.from_int(&la))];
        for (i, &o) in group.orders().iter().enumerate() {
            let choices: Vec<u64> = (1..la_small)
                .filter(|&c| c % ring.ell() != 0 && pow_mod(c, o, la_small) == 1)
                .collect();
            let c = choices[rng.gen_range(0..choices.len())];
            let mut exps = vec![0u64; group.orders().len()];
            exps[i] = 1;
            let gi = group.from_exponents(&exps);
            rels.push(rr.sub(&rr.basis(gi), &rr.monomial(BigInt::from(c), group.identity())));
        }
        let cy = PresentedModule::quotient_by(ring, &rels)?;
        let fcy = fit(&cy)?;
        let acy = ann(&cy)?;
        let dw = dual_wedge(&cy)?;
        let fdw = fit(&dw)?;
        let adw = ann(&dw)?;
        let pass = ideal_eq(&fcy, &acy)?
            && ideal_eq(&fcy, &fdw)?
            && ideal_eq(&fcy, &adw)?;
        records.push(record(seed, instance, "cyclic_fit_ann_dual", ring, &fcy, &fdw, pass));

        // Certified square presentations: principal Fitting ideal
        // generated by the determinant, and the contragredient dual.
        // The dual goes through the structure decomposition, so the
        // underlying group must fit under the generator cap.
        let msq = rand_bounded_square(&mut rng, ring, 2)?;
        let det = det_generic(ring.ring(), &msq.relations);
        let fsq = fit(&msq)?;
        let principal = IdealFG::principal(ring, &det);
        let dv = dual_vee(&msq)?;
        let fdv = fit(&dv)?;
        let iota = iota_ideal(&fsq);
        let pass = ideal_eq(&fsq, &principal)? && ideal_eq(&fdv, &iota)?;
        records.push(record(seed, instance, "square_principal_and_dual", ring, &fdv, &iota, pass));

        // Twisting the presentation twists the Fitting ideal.
        let homs = unit_homs(ring);
        let c = homs[rng.gen_range(0..homs.len())].clone();
        let tm = rng.gen_range(-2..=2i64);
        let m = rand_presentation(&mut rng, ring, 2, 3);
        let lhs = fit(&twist_presentation(&m, tm, &c)?)?;
        let rhs = twist_ideal(&fit(&m)?, -tm, &c)?;
        let pass = ideal_eq(&lhs, &rhs)?;
        records.push(record(seed, instance, "fit_of_twist", ring, &lhs, &rhs, pass));

        // The four-term product identity, mixing free sources with
        // certified square presentations. The source stays within the
        // structure-factor cap so its kernels do too.
        let max_free = (MAX_STRUCTURE_FACTORS / ring.gsize()).max(1);
        let b = if rng.gen_range(0..4) == 0 {
            PresentedModule::free(ring, rng.gen_range(1..=max_free))?
        } else {
            rand_bounded_square(&mut rng, ring, 2)?
        };
        let c = rand_certified_square(&mut rng, ring, 2)?;
        let phi = sample_map(&mut rng, &b, &c)?;
        let (lhs, rhs) = four_term_sides(&b, &c, &phi)?;
        let pass = ideal_eq(&lhs, &rhs)?;
        records.push(record(seed, instance, "four_term_product", ring, &lhs, &rhs, pass));
    }

    let all_pass = records.iter().all(|r| r.pass);
    Ok(FitlabReport { seed, instances, records, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn c2_ring(ell: u64, k: u32) -> FinGroupRing {
        FinGroupRing::new(&FinAbGroup::new(vec![2], None), ell, k).unwrap()
    }

    fn trivial_ring(ell: u64, k: u32) -> FinGroupRing {
        FinGroupRing::new(&FinAbGroup::trivial(), ell, k).unwrap()
    }

    fn el(cs: &[i64]) -> RElem {
        cs.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn fit_examples_match_stated_ideals() {
        let r = c2_ring(3, 2);
        let m = PresentedModule::quotient_by(&r, &[el(&[3, 3])]).unwrap();
        assert!(ideal_eq(&fit(&m).unwrap(), &IdealFG::principal(&r, &el(&[3, 3]))).unwrap());

        let free = PresentedModule::free(&r, 1).unwrap();
        assert!(fit(&free).unwrap().is_zero());

        let x = el(&[2, 1]);
        let y = el(&[3, 0]);
        let zero = r.ring().zero();
        let diag = PresentedModule::new(
            &r,
            2,
            vec![vec![x.clone(), zero.clone()], vec![zero.clone(), y.clone()]],
        )
        .unwrap();
        let xy = r.ring().mul(&x, &y);
        assert!(ideal_eq(&fit(&diag).unwrap(), &IdealFG::principal(&r, &xy)).unwrap());
    }

    #[test]
    fn ann_examples() {
        let r = c2_ring(2, 3);
        for x in [el(&[2, 1]), el(&[1, 1]), el(&[2, 2]), el(&[0, 4])] {
            let m = PresentedModule::quotient_by(&r, &[x.clone()]).unwrap();
            assert!(
                ideal_eq(&ann(&m).unwrap(), &IdealFG::principal(&r, &x)).unwrap(),
                "ann(R/<x>) = <x> for x = {:?}",
                x
            );
        }
        // A free summand forces a zero annihilator.
        let zero = r.ring().zero();
        let m = PresentedModule::new(&r, 2, vec![vec![zero.clone(), el(&[2, 0])]]).unwrap();
        assert!(ann(&m).unwrap().is_zero());
    }

    #[test]
    fn random_fit_lands_inside_ann() {
        let r = c2_ring(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..25 {
            let m = rand_presentation(&mut rng, &r, 3, 4);
            let f = fit(&m).unwrap();
            let a = ann(&m).unwrap();
            assert!(a.contains_ideal(&f), "fit must lie inside ann");
        }
    }

    #[test]
    fn ideal_examples() {
        let t = trivial_ring(2, 3);
        let i = IdealFG::new(&t, vec![el(&[2])]);
        let j = IdealFG::new(&t, vec![el(&[2]), el(&[4])]);
        assert!(ideal_eq(&i, &j).unwrap());
        let sq = ideal_mul(&i, &i).unwrap();
        assert!(ideal_eq(&sq, &IdealFG::principal(&t, &el(&[4]))).unwrap());

        let r = c2_ring(2, 3);
        let a = IdealFG::principal(&r, &el(&[-1, 1]));
        let bb = IdealFG::principal(&r, &el(&[1, -1]));
        assert!(ideal_eq(&a, &bb).unwrap());

        let other = c2_ring(2, 2);
        let c = IdealFG::principal(&other, &el(&[1, 1]));
        assert!(ideal_eq(&a, &c).is_err());
        assert!(IdealFG::unit(&r).is_unit());
        assert!(IdealFG::zero(&r).is_zero());
    }

    #[test]
    fn canonical_form_agrees_with_exhaustive_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for ring in [c2_ring(2, 2), c2_ring(2, 3)] {
            let modulus = modulus_u64(&ring);
            for _ in 0..6 {
                let gens: Vec<RElem> =
                    (0..rng.gen_range(1..=2)).map(|_| rand_elem(&mut rng, &ring)).collect();
                let ideal = IdealFG::new(&ring, gens.clone());
                // Brute-force span of all G-translates.
                let mut translate_rows = Vec::new();
                for x in &gens {
                    for g in 0..ring.gsize() {
                        translate_rows.push(ring.ring().mul(&ring.ring().basis(g), x));
                    }
                }
                let mut span: HashSet<Vec<u64>> = HashSet::new();
                let nrows = translate_rows.len();
                let mut counter = vec![0u64; nrows];
                loop {
                    let mut v = vec![BigInt::zero(); ring.gsize()];
                    for (c, row) in counter.iter().zip(&translate_rows) {
                        for (vi, ri) in v.iter_mut().zip(row) {
                            *vi = (&*vi + BigInt::from(*c) * ri).mod_floor(ring.modulus());
                        }
                    }
                    span.insert(v.iter().map(|x| x.to_u64().unwrap()).collect());
                    let mut t = 0;
                    loop {
                        if t == nrows {
                            break;
                        }
                        counter[t] += 1;
                        if counter[t] < modulus {
                            break;
                        }
                        counter[t] = 0;
                        t += 1;
                    }
                    if t == nrows {
                        break;
                    }
                }
                // Exhaustive agreement over the whole ring.
                let total = modulus.pow(ring.gsize() as u32);
                for code in 0..total {
                    let mut x = Vec::with_capacity(ring.gsize());
                    let mut c = code;
                    for _ in 0..ring.gsize() {
                        x.push(c % modulus);
                        c /= modulus;
                    }
                    let elem: RElem = x.iter().map(|&v| BigInt::from(v)).collect();
                    assert_eq!(ideal.contains(&elem), span.contains(&x));
                }
            }
        }
    }

    #[test]
    fn structure_of_a_pinned_module() {
        // (Z/4)[C2] / <2 + 2g> has underlying group Z/2 + Z/4.
        let r = c2_ring(2, 2);
        let m = PresentedModule::quotient_by(&r, &[el(&[2, 2])]).unwrap();
        let s = structure(&m).unwrap();
        assert_eq!(s.factors, vec![b(2), b(4)]);
        assert_eq!(s.order, b(8));
        assert_eq!(module_order(&m).unwrap(), b(8));
        // The rebuilt presentation has the same Fitting ideal.
        let rebuilt = presentation_from_structure(&r, &s).unwrap();
        assert!(ideal_eq(&fit(&rebuilt).unwrap(), &fit(&m).unwrap()).unwrap());
    }

    #[test]
    fn duals_preserve_order_and_double_dual_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for ring in [c2_ring(2, 2), c2_ring(3, 2)] {
            for _ in 0..8 {
                let m = rand_presentation(&mut rng, &ring, 2, 3);
                let d = dual_wedge(&m).unwrap();
                assert_eq!(module_order(&m).unwrap(), module_order(&d).unwrap());
                let dd = dual_wedge(&d).unwrap();
                assert!(ideal_eq(&fit(&dd).unwrap(), &fit(&m).unwrap()).unwrap());
                assert_eq!(module_order(&dd).unwrap(), module_order(&m).unwrap());
            }
        }
    }

    #[test]
    fn cyclic_duality_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for ring in [c2_ring(2, 3), c2_ring(3, 2)] {
            for _ in 0..10 {
                let x = rand_elem(&mut rng, &ring);
                let m = PresentedModule::quotient_by(&ring, &[x]).unwrap();
                let f = fit(&m).unwrap();
                assert!(ideal_eq(&f, &ann(&m).unwrap()).unwrap());
                let dw = dual_wedge(&m).unwrap();
                assert!(ideal_eq(&fit(&dw).unwrap(), &f).unwrap());
                assert!(ideal_eq(&ann(&dw).unwrap(), &f).unwrap());
                let dv = dual_vee(&m).unwrap();
                assert!(ideal_eq(&fit(&dv).unwrap(), &iota_ideal(&f)).unwrap());
            }
        }
    }

    #[test]
    fn certified_square_modules_have_principal_fit_and_iota_dual() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for ring in [c2_ring(2, 3), c2_ring(3, 2)] {
            for _ in 0..6 {
                let m = rand_certified_square(&mut rng, &ring, 2).unwrap();
                let det = det_generic(ring.ring(), &m.relations);
                let f = fit(&m).unwrap();
                assert!(ideal_eq(&f, &IdealFG::principal(&ring, &det)).unwrap());
                let dv = dual_vee(&m).unwrap();
                assert!(ideal_eq(&fit(&dv).unwrap(), &iota_ideal(&f)).unwrap());
            }
        }
    }

    #[test]
    fn nzd_detection_matches_brute_force() {
        let r = c2_ring(2, 2);
        let modulus = 4u64;
        let mut all = Vec::new();
        for a in 0..modulus {
            for c in 0..modulus {
                all.push(el(&[a as i64, c as i64]));
            }
        }
        for x in &all {
            // x is a zero divisor iff some nonzero y kills it.
            let zd = all.iter().any(|y| {
                !y.iter().all(Zero::is_zero) && r.ring().mul(x, y).iter().all(Zero::is_zero)
            });
            assert_eq!(is_nzd(&r, x), !zd, "x = {:?}", x);
        }
    }

    #[test]
    fn twist_examples() {
        let r = c2_ring(3, 2);
        let i = IdealFG::new(&r, vec![el(&[3, 1]), el(&[0, 3])]);
        let c_triv = vec![b(1), b(1)];
        let c_sign = vec![b(1), b(-1)];
        assert!(ideal_eq(&twist_ideal(&i, 0, &c_sign).unwrap(), &i).unwrap());
        assert!(ideal_eq(&twist_ideal(&i, 3, &c_triv).unwrap(), &i).unwrap());
        let once = twist_ideal(&i, 2, &c_sign).unwrap();
        let back = twist_ideal(&once, -2, &c_sign).unwrap();
        assert!(ideal_eq(&back, &i).unwrap());
        // Non-multiplicative map is rejected.
        let bad = vec![b(1), b(2)];
        assert!(twist_ideal(&i, 1, &bad).is_err());
        // Non-unit value is rejected.
        let nonunit = vec![b(1), b(3)];
        assert!(twist_ideal(&i, 1, &nonunit).is_err());
    }

    #[test]
    fn twisted_presentation_twists_the_fitting_ideal() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for ring in [c2_ring(2, 3), c2_ring(3, 2)] {
            let homs = unit_homs(&ring);
            for _ in 0..6 {
                let c = homs[rng.gen_range(0..homs.len())].clone();
                let n = rng.gen_range(-2..=2i64);
                let m = rand_presentation(&mut rng, &ring, 2, 3);
                let lhs = fit(&twist_presentation(&m, n, &c).unwrap()).unwrap();
                let rhs = twist_ideal(&fit(&m).unwrap(), -n, &c).unwrap();
                assert!(ideal_eq(&lhs, &rhs).unwrap());
            }
        }
    }

    #[test]
    fn base_change_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let ring = c2_ring(2, 3);
        for _ in 0..8 {
            let m = rand_presentation(&mut rng, &ring, 2, 3);
            let f = fit(&m).unwrap();
            let lhs = fit(&reduce_scalars(&m, 2).unwrap()).unwrap();
            let rhs = reduce_ideal(&f, 2).unwrap();
            assert!(ideal_eq(&lhs, &rhs).unwrap());
            let lhs = fit(&augment_module(&m).unwrap()).unwrap();
            let rhs = augment_ideal(&f).unwrap();
            assert!(ideal_eq(&lhs, &rhs).unwrap());
        }
    }

    #[test]
    fn four_term_pinned_examples() {
        // Free rank one over Z/9, map = multiplication by 3.
        let t = trivial_ring(3, 2);
        let free = PresentedModule::free(&t, 1).unwrap();
        let phi = vec![vec![el(&[3])]];
        assert!(four_term_check(&free, &free, &phi).unwrap());

        // An isomorphism reduces the identity to fit(C) = fit(B).
        let r = c2_ring(3, 2);
        let sq = vec![vec![el(&[2, 1]), el(&[0, 0])], vec![el(&[0, 0]), el(&[2, 1])]];
        let m = PresentedModule::new(&r, 2, sq).unwrap();
        let identity = vec![
            vec![r.ring().one(), r.ring().zero()],
            vec![r.ring().zero(), r.ring().one()],
        ];
        assert!(four_term_check(&m, &m, &identity).unwrap());

        // A non-injective lift (g - 1 kills the augmentation line) is a
        // reported precondition violation.
        let noninj = PresentedModule::quotient_by(&r, &[el(&[-1, 1])]).unwrap();
        let one_map = vec![vec![r.ring().one()]];
        let target = PresentedModule::quotient_by(&r, &[el(&[3, 0])]).unwrap();
        match four_term_check(&noninj, &target, &one_map) {
            Err(Error::Config(msg)) => assert!(msg.contains("injective"), "{}", msg),
            other => panic!("expected a precondition error, got {:?}", other),
        }

        // An injective lift whose cokernel has prime-to-l torsion is also
        // rejected: 2 + 4g has integral quotient of order 12.
        let wild = PresentedModule::quotient_by(&r, &[el(&[2, 4])]).unwrap();
        match four_term_check(&wild, &target, &one_map) {
            Err(Error::Config(msg)) => assert!(msg.contains("killed"), "{}", msg),
            other => panic!("expected a precondition error, got {:?}", other),
        }

        // Ill-defined map is a reported precondition violation: the free
        // target has no relation absorbing 3 * phi(e1).
        let b_mod = PresentedModule::quotient_by(&r, &[el(&[3, 0])]).unwrap();
        let c_free = PresentedModule::free(&r, 1).unwrap();
        match four_term_check(&b_mod, &c_free, &one_map) {
            Err(Error::Config(msg)) => assert!(msg.contains("well defined"), "{}", msg),
            other => panic!("expected a precondition error, got {:?}", other),
        }
    }

    #[test]
    fn four_term_randomized_small_run() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for ring in [c2_ring(2, 2), c2_ring(3, 2)] {
            for round in 0..5 {
                let b = if round == 0 {
                    PresentedModule::free(&ring, 1).unwrap()
                } else {
                    rand_certified_square(&mut rng, &ring, 2).unwrap()
                };
                let c = rand_certified_square(&mut rng, &ring, 2).unwrap();
                let phi = sample_map(&mut rng, &b, &c).unwrap();
                assert!(four_term_check(&b, &c, &phi).unwrap());
            }
        }
    }

    #[test]
    fn frac_ideal_cross_multiplication() {
        let t = trivial_ring(2, 3);
        let a = FracIdeal::new(IdealFG::principal(&t, &el(&[2])), b(3)).unwrap();
        let bb = FracIdeal::new(IdealFG::principal(&t, &el(&[6])), b(9)).unwrap();
        assert!(frac_ideal_eq(&a, &bb).unwrap());
        // Denominators with different 2-valuations separate the classes.
        let c = FracIdeal::new(IdealFG::principal(&t, &el(&[2])), b(2)).unwrap();
        assert!(!frac_ideal_eq(&a, &c).unwrap());

        let d = FracIdeal::new(IdealFG::principal(&t, &el(&[2])), b(2)).unwrap();
        assert!(d.is_integral());
        assert!(
            ideal_eq(&d.integral_part().unwrap(), &IdealFG::principal(&t, &el(&[1]))).unwrap()
        );
        let e = FracIdeal::new(IdealFG::principal(&t, &el(&[2])), b(4)).unwrap();
        assert!(!e.is_integral());
        assert!(e.integral_part().is_err());
        assert!(FracIdeal::new(IdealFG::zero(&t), BigInt::zero()).is_err());
    }

    #[test]
    fn fitlab_is_reproducible_and_passes() {
        let a = fitlab_run(7, 2).unwrap();
        assert!(a.all_pass);
        let b = fitlab_run(7, 2).unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
        let c = fitlab_run(8, 2).unwrap();
        assert!(c.all_pass);
        assert_ne!(ja, serde_json::to_string(&c).unwrap());
    }

    #[test]
    fn presentation_json_shape() {
        let r = c2_ring(2, 2);
        let m = PresentedModule::quotient_by(&r, &[el(&[2, 1])]).unwrap();
        let v = presentation_to_json(&m);
        assert_eq!(v["generators"], 1);
        assert_eq!(v["ring"]["ell"], 2);
        assert_eq!(v["relations"][0][0]["1"], "2");
        assert_eq!(v["relations"][0][0]["g"], "1");
    }
}
