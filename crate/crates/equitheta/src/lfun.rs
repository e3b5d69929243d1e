//! Equivariant L-functions of abelian extensions of `F_q(t)`.
//!
//! Two extension models are supported. The cyclotomic model attaches to a
//! monic conductor `m` the extension with Galois group `(F_q[t]/m)^x`,
//! where the Frobenius of a finite place `v` coprime to `m` is the residue
//! `v mod m`; the finite places dividing `m` and the infinite place
//! ramify. The constant-field model attaches to `r >= 1` the degree-`r`
//! constant extension with cyclic group generated by `gbar`, Frobenius
//! `gbar^(deg v)`, and no ramification (`r = 1` is the trivial-group
//! model).
//!
//! The central computation is the `(S0, T0)`-modified equivariant
//! L-polynomial: the Euler product over places outside `S0` is expanded
//! as the Dirichlet series over monic polynomials coprime to the finite
//! part of `S0`, truncated at a degree bound, multiplied by the `T0`
//! smoothing factor, and required to vanish identically on a trailing
//! guard window. A nonvanishing coefficient in the window is a hard
//! stabilization error, never a silent truncation. Around this sit the
//! exactly checkable identities: special values, twist bookkeeping, Euler
//! factor multiplicativity, independence of the smoothing set, the mod-p
//! unit property of special values, per-character compatibility, and the
//! numeric Weil bound on inverse roots.

use crate::ffq::{
    fmt_fq_poly, is_irreducible, is_monic, monic_polys, unit_group, EnumCap, FqCtx, FqPoly, Place,
    UnitGroup, DEFAULT_ENUM_CAP,
};
use crate::grpring::{
    all_characters, char_eval_poly, character_value_ring, z_group_ring, Character, FinAbGroup,
    GroupRing,
};
use crate::poly::Poly;
use crate::ring::{int_pow, CoeffRing, CycRing, IntRing};
use crate::{Error, EquivPolyZ, ZGroupElem};
use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::ToPrimitive;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

// ---- Extension models ----

#[derive(Clone, Debug)]
pub enum ModelKind {
    CarlitzCyclotomic { m: FqPoly },
    ConstantField { r: u64 },
}

struct ModelInner {
    ctx: FqCtx,
    kind: ModelKind,
    group: FinAbGroup,
    ramified: Vec<Place>,
    rtilde: u64,
    units: Option<UnitGroup>,
}

/// A supported abelian extension of `F_q(t)` with its splitting data.
#[derive(Clone)]
pub struct ExtensionModel {
    inner: Arc<ModelInner>,
}

impl std::fmt::Debug for ExtensionModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.inner.kind {
            ModelKind::CarlitzCyclotomic { m } => {
                write!(f, "CarlitzCyclotomic(q={}, m={})", self.q(), fmt_fq_poly(m))
            }
            ModelKind::ConstantField { r } => {
                write!(f, "ConstantField(q={}, r={})", self.q(), r)
            }
        }
    }
}

impl ExtensionModel {
    /// Cyclotomic model for a monic conductor of positive degree.
    pub fn carlitz(q: u32, m: &FqPoly) -> Result<ExtensionModel, Error> {
        let ctx = FqCtx::new(q)?;
        if !is_monic(m) || m.degree().map_or(true, |d| d == 0) {
            return Err(Error::Config("conductor must be monic of positive degree".into()));
        }
        let cap = EnumCap(DEFAULT_ENUM_CAP);
        let units = unit_group(&ctx, m, cap)?;
        let orders: Vec<u64> = units.orders.clone();
        let (group_orders, gens) = if orders.is_empty() {
            (vec![1u64], Vec::new())
        } else {
            (orders, units.gens.clone())
        };
        let skeleton = FinAbGroup::new(group_orders.clone(), None);
        let labels: Vec<String> = (0..skeleton.size())
            .map(|i| {
                let tuple = skeleton.tuple(i);
                let mut residue = Poly::one(&ctx);
                for (gen, &e) in gens.iter().zip(&tuple) {
                    let p = powmod(&ctx, gen, e, m);
                    residue = residue.mul(&ctx, &p).rem(&ctx, m);
                }
                fmt_fq_poly(&residue)
            })
            .collect();
        let group = FinAbGroup::new(group_orders, Some(labels));
        let mut ramified = vec![Place::Infinity];
        for f in monic_irreducible_factors(&ctx, m)? {
            ramified.push(Place::Finite(f));
        }
        Ok(ExtensionModel {
            inner: Arc::new(ModelInner {
                ctx,
                kind: ModelKind::CarlitzCyclotomic { m: m.clone() },
                group,
                ramified,
                rtilde: 1,
                units: Some(units),
            }),
        })
    }

    /// Constant-field model of degree `r >= 1` (`r = 1` gives the trivial
    /// group).
    pub fn constant_field(q: u32, r: u64) -> Result<ExtensionModel, Error> {
        if r == 0 {
            return Err(Error::Config("constant-field degree must be positive".into()));
        }
        let ctx = FqCtx::new(q)?;
        let group = FinAbGroup::new(vec![r], None);
        Ok(ExtensionModel {
            inner: Arc::new(ModelInner {
                ctx,
                kind: ModelKind::ConstantField { r },
                group,
                ramified: Vec::new(),
                rtilde: r,
                units: None,
            }),
        })
    }

    pub fn trivial(q: u32) -> Result<ExtensionModel, Error> {
        ExtensionModel::constant_field(q, 1)
    }

    pub fn ctx(&self) -> &FqCtx {
        &self.inner.ctx
    }
    pub fn q(&self) -> u32 {
        self.inner.ctx.q()
    }
    pub fn p(&self) -> u32 {
        self.inner.ctx.p()
    }
    pub fn kind(&self) -> &ModelKind {
        &self.inner.kind
    }
    pub fn group(&self) -> &FinAbGroup {
        &self.inner.group
    }
    pub fn ramified(&self) -> &[Place] {
        &self.inner.ramified
    }
    /// Degree of the constant field of the extension over `F_q`.
    pub fn rtilde(&self) -> u64 {
        self.inner.rtilde
    }
    /// Exponent with which the arithmetic Frobenius generates the constant
    /// part of the Galois tower; equal to `rtilde` for supported models.
    pub fn alpha(&self) -> u64 {
        self.inner.rtilde
    }

    pub fn is_ramified(&self, v: &Place) -> bool {
        self.inner.ramified.contains(v)
    }

    /// Image of a group element in the constant-field quotient, as an
    /// exponent mod `rtilde`.
    pub fn constant_degree(&self, g: usize) -> u64 {
        match &self.inner.kind {
            ModelKind::CarlitzCyclotomic { .. } => 0,
            ModelKind::ConstantField { r } => {
                let t = self.inner.group.tuple(g);
                t[0] % r
            }
        }
    }

    /// Frobenius of an unramified place, as a group-element index.
    pub fn frobenius(&self, v: &Place) -> Result<usize, Error> {
        if self.is_ramified(v) {
            return Err(Error::Config(format!("place {} is ramified", v.label())));
        }
        match (&self.inner.kind, v) {
            (ModelKind::CarlitzCyclotomic { .. }, Place::Finite(f)) => self.frobenius_monic(f),
            (ModelKind::CarlitzCyclotomic { .. }, Place::Infinity) => {
                Err(Error::Internal("infinite place is ramified here".into()))
            }
            (ModelKind::ConstantField { .. }, _) => Ok(self.constant_power(v.degree() as i64)),
        }
    }

    /// Frobenius of a monic polynomial coprime to the ramified finite
    /// places (the class of the polynomial, extended multiplicatively).
    pub fn frobenius_monic(&self, a: &FqPoly) -> Result<usize, Error> {
        match &self.inner.kind {
            ModelKind::CarlitzCyclotomic { .. } => {
                let units = self.inner.units.as_ref().expect("cyclotomic model has unit data");
                let tuple = units.dlog(&self.inner.ctx, a).ok_or_else(|| {
                    Error::Config(format!(
                        "polynomial {} is not coprime to the conductor",
                        fmt_fq_poly(a)
                    ))
                })?;
                if units.orders.is_empty() {
                    return Ok(0);
                }
                let t: Vec<u64> = tuple.iter().map(|&e| e as u64).collect();
                Ok(self.inner.group.index(&t))
            }
            ModelKind::ConstantField { .. } => {
                Ok(self.constant_power(a.degree().unwrap_or(0) as i64))
            }
        }
    }

    fn constant_power(&self, d: i64) -> usize {
        let g = &self.inner.group;
        if g.size() == 1 {
            0
        } else {
            g.pow(1, d)
        }
    }

    pub fn conductor(&self) -> Option<&FqPoly> {
        match &self.inner.kind {
            ModelKind::CarlitzCyclotomic { m } => Some(m),
            ModelKind::ConstantField { .. } => None,
        }
    }
}

fn powmod(ctx: &FqCtx, base: &FqPoly, e: u64, m: &FqPoly) -> FqPoly {
    let mut acc = Poly::one(ctx);
    let mut b = base.rem(ctx, m);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(ctx, &b).rem(ctx, m);
        }
        b = b.mul(ctx, &b).rem(ctx, m);
        e >>= 1;
    }
    acc
}

/// Distinct monic irreducible factors, by trial division in increasing
/// degree.
pub fn monic_irreducible_factors(ctx: &FqCtx, f: &FqPoly) -> Result<Vec<FqPoly>, Error> {
    let mut rem = f.clone();
    let mut out = Vec::new();
    let cap = EnumCap(DEFAULT_ENUM_CAP);
    let mut d = 1usize;
    while rem.degree().map_or(false, |deg| deg > 0) {
        if d > rem.degree().unwrap() {
            return Err(Error::Internal("factorization did not terminate".into()));
        }
        for p in monic_polys(ctx, d, cap)? {
            if rem.degree().map_or(true, |deg| deg < d) {
                break;
            }
            let (mut q, mut r) = rem.div_rem(ctx, &p);
            if r.is_zero() {
                out.push(p.clone());
                while r.is_zero() {
                    rem = q.clone();
                    if rem.degree().map_or(true, |deg| deg < d) {
                        break;
                    }
                    let next = rem.div_rem(ctx, &p);
                    q = next.0;
                    r = next.1;
                }
            }
        }
        d += 1;
    }
    Ok(out)
}

// ---- Requests ----

/// A fully validated L-function request: model, the set `S0` (containing
/// infinity and every ramified place), the disjoint smoothing set `T0`,
/// the truncation degree, and the guard-window width.
#[derive(Clone, Debug)]
pub struct LDataRequest {
    pub model: ExtensionModel,
    pub s0: Vec<Place>,
    pub t0: Vec<Place>,
    pub dmax: usize,
    pub guard: usize,
    pub cap: EnumCap,
}

pub const DEFAULT_GUARD: usize = 3;

impl LDataRequest {
    pub fn new(
        model: ExtensionModel,
        s0: Vec<Place>,
        t0: Vec<Place>,
    ) -> Result<LDataRequest, Error> {
        LDataRequest::with_bounds(model, s0, t0, None, None, None)
    }

    pub fn with_bounds(
        model: ExtensionModel,
        s0: Vec<Place>,
        t0: Vec<Place>,
        dmax: Option<usize>,
        guard: Option<usize>,
        cap: Option<u128>,
    ) -> Result<LDataRequest, Error> {
        let guard = guard.unwrap_or(DEFAULT_GUARD);
        let dmax = dmax.unwrap_or_else(|| default_dmax(&model, &s0, &t0, guard));
        let req = LDataRequest {
            model,
            s0,
            t0,
            dmax,
            guard,
            cap: EnumCap(cap.unwrap_or(DEFAULT_ENUM_CAP)),
        };
        req.validate()?;
        Ok(req)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !self.s0.iter().any(|v| v.is_infinite()) {
            return Err(Error::Config("S0 must contain the infinite place".into()));
        }
        for v in self.model.ramified() {
            if !self.s0.contains(v) {
                return Err(Error::Config(format!(
                    "S0 must contain the ramified place {}",
                    v.label()
                )));
            }
        }
        for (name, set) in [("S0", &self.s0), ("T0", &self.t0)] {
            for (i, v) in set.iter().enumerate() {
                if set[..i].contains(v) {
                    return Err(Error::Config(format!("{} lists {} twice", name, v.label())));
                }
                if let Place::Finite(f) = v {
                    if !is_monic(f) || !is_irreducible(self.model.ctx(), f)? {
                        return Err(Error::Config(format!(
                            "{} entry {} is not a monic irreducible",
                            name,
                            v.label()
                        )));
                    }
                }
            }
        }
        for v in &self.t0 {
            if self.s0.contains(v) {
                return Err(Error::Config(format!(
                    "S0 and T0 must be disjoint; both contain {}",
                    v.label()
                )));
            }
            if self.model.is_ramified(v) {
                return Err(Error::Config(format!(
                    "T0 must avoid ramified places; contains {}",
                    v.label()
                )));
            }
        }
        if self.guard == 0 {
            return Err(Error::Config("guard must be positive".into()));
        }
        if self.dmax < self.guard {
            return Err(Error::Config(
                "guard window must fit below Dmax (need guard <= Dmax)".into(),
            ));
        }
        Ok(())
    }

    fn s0_finite(&self) -> Vec<&FqPoly> {
        self.s0
            .iter()
            .filter_map(|v| match v {
                Place::Finite(f) => Some(f),
                Place::Infinity => None,
            })
            .collect()
    }
}

/// Conductor degree plus the total degree of the finite places involved,
/// plus the guard: comfortably past every coefficient that can be nonzero.
pub fn default_dmax(model: &ExtensionModel, s0: &[Place], t0: &[Place], guard: usize) -> usize {
    let cond = model.conductor().and_then(|m| m.degree()).unwrap_or(0);
    let s_deg: usize = s0.iter().filter(|v| !v.is_infinite()).map(|v| v.degree()).sum();
    let t_deg: usize = t0.iter().map(|v| v.degree()).sum();
    cond + s_deg + t_deg + guard
}

// ---- Theta ----

/// One character component of the unmodified L-function, as an exact
/// rational function over the character's cyclotomic ring.
#[derive(Clone, Debug)]
pub struct CharSeries {
    pub chi: Character,
    pub numerator: Poly<CycRing>,
    pub denominator: Poly<CycRing>,
}

#[derive(Clone, Debug)]
pub enum ThetaBody {
    /// `T0` nonempty: an integral equivariant polynomial.
    Polynomial(EquivPolyZ),
    /// `T0` empty: per-character rational functions.
    PerCharacter(Vec<CharSeries>),
}

/// A computed modified L-function with its request echo and the largest
/// degree carrying a nonzero coefficient.
#[derive(Clone, Debug)]
pub struct ThetaPoly {
    pub request: LDataRequest,
    pub body: ThetaBody,
    pub stabilization_degree: usize,
}

impl ThetaPoly {
    pub fn polynomial(&self) -> Result<&EquivPolyZ, Error> {
        match &self.body {
            ThetaBody::Polynomial(p) => Ok(p),
            ThetaBody::PerCharacter(_) => {
                Err(Error::Config("operation needs a nonempty T0 (polynomial form)".into()))
            }
        }
    }

    pub fn per_character(&self) -> Result<&[CharSeries], Error> {
        match &self.body {
            ThetaBody::PerCharacter(c) => Ok(c),
            ThetaBody::Polynomial(_) => {
                Err(Error::Config("operation needs an empty T0 (per-character form)".into()))
            }
        }
    }
}

/// Dirichlet-series coefficients of the `S0`-restricted equivariant sum:
/// entry `d` is the sum of `sigma_a^{-1}` over monic `a` of degree `d`
/// coprime to the finite part of `S0`.
fn s_series_coefficients(request: &LDataRequest) -> Result<Vec<ZGroupElem>, Error> {
    let model = &request.model;
    let ctx = model.ctx();
    let zr = z_group_ring(model.group());
    let finite = request.s0_finite();
    let mut total: u128 = 0;
    for d in 0..=request.dmax {
        total = total.saturating_add((ctx.q() as u128).saturating_pow(d as u32));
    }
    if total > request.cap.0 {
        return Err(Error::EnumCap { needed: total, cap: request.cap.0 });
    }
    let mut coeffs: Vec<ZGroupElem> = vec![zr.zero(); request.dmax + 1];
    for d in 0..=request.dmax {
        for a in monic_polys(ctx, d, request.cap)? {
            if finite.iter().any(|v| a.rem(ctx, v).is_zero()) {
                continue;
            }
            let s = model.frobenius_monic(&a)?;
            let si = model.group().inv(s);
            coeffs[d][si] += 1;
        }
    }
    Ok(coeffs)
}

/// The smoothing factor as an equivariant polynomial:
/// the product over `T0` of `1 - sigma_v^{-1} (qu)^{deg v}`.
fn t_factor(model: &ExtensionModel, t0: &[Place], dmax: usize) -> Result<EquivPolyZ, Error> {
    let zr = z_group_ring(model.group());
    let mut out = Poly::one(&zr);
    for v in t0 {
        let s = model.frobenius(v)?;
        let si = model.group().inv(s);
        let d = v.degree();
        let mut coeffs = vec![zr.zero(); d + 1];
        coeffs[0] = zr.one();
        coeffs[d] = zr.monomial(-int_pow(&BigInt::from(model.q()), d as u64), si);
        let factor = Poly::from_coeffs(&zr, coeffs);
        out = out.mul_truncated(&zr, &factor, dmax);
    }
    Ok(out)
}

fn check_guard_window(
    zr: &GroupRing<IntRing>,
    poly: &EquivPolyZ,
    dmax: usize,
    guard: usize,
) -> Result<(), Error> {
    for d in (dmax - guard + 1)..=dmax {
        if !zr.is_zero(&poly.coeff(zr, d)) {
            return Err(Error::Stabilization { smallest_failing_degree: d, dmax });
        }
    }
    Ok(())
}

fn check_guard_window_cyc(
    cyc: &CycRing,
    poly: &Poly<CycRing>,
    dmax: usize,
    guard: usize,
) -> Result<(), Error> {
    for d in (dmax - guard + 1)..=dmax {
        if !cyc.is_zero(&poly.coeff(cyc, d)) {
            return Err(Error::Stabilization { smallest_failing_degree: d, dmax });
        }
    }
    Ok(())
}

/// Denominator of the character component of the unmodified L-function:
/// nontrivial on exactly the characters of the constant-field quotient,
/// where the geometric series produces the pole `1 - q chi(gbar)^{-1} u`.
fn char_denominator(model: &ExtensionModel, cyc: &CycRing, chi: &Character) -> Poly<CycRing> {
    let group = model.group();
    let q = BigInt::from(model.q());
    match model.kind() {
        ModelKind::CarlitzCyclotomic { .. } => {
            if chi.is_trivial(group) {
                let c1: Vec<BigInt> = cyc.one().iter().map(|x| -(x * &q)).collect();
                Poly::from_coeffs(cyc, vec![cyc.one(), c1])
            } else {
                Poly::one(cyc)
            }
        }
        ModelKind::ConstantField { .. } => {
            let gbar = if group.size() == 1 { 0 } else { 1 };
            let a = chi.value_exponent(group, gbar) as i64;
            let w = cyc.root_power(-a);
            let c1: Vec<BigInt> = w.iter().map(|x| -(x * &q)).collect();
            Poly::from_coeffs(cyc, vec![cyc.one(), c1])
        }
    }
}

/// Computes the modified equivariant L-function for the request. With a
/// nonempty `T0` the result is an integral polynomial whose trailing
/// guard window has been verified to vanish; with an empty `T0` it is the
/// family of per-character rational functions.
pub fn theta(request: &LDataRequest) -> Result<ThetaPoly, Error> {
    request.validate()?;
    let model = &request.model;
    let zr = z_group_ring(model.group());
    let coeffs = s_series_coefficients(request)?;
    let series = Poly::from_coeffs(&zr, coeffs);

    if !request.t0.is_empty() {
        let tf = t_factor(model, &request.t0, request.dmax)?;
        let product = series.mul_truncated(&zr, &tf, request.dmax);
        check_guard_window(&zr, &product, request.dmax, request.guard)?;
        let constant = product.coeff(&zr, 0);
        if !zr.is_one(&constant) {
            return Err(Error::Internal("modified L-polynomial must have constant term 1".into()));
        }
        let stabilization_degree = product.degree().unwrap_or(0);
        return Ok(ThetaPoly {
            request: request.clone(),
            body: ThetaBody::Polynomial(product),
            stabilization_degree,
        });
    }

    let group = model.group();
    let cyc = character_value_ring(group);
    let mut per = Vec::new();
    let mut stab = 0usize;
    for chi in all_characters(group) {
        let series_chi = char_eval_poly(&cyc, &zr, &series, &chi);
        let den = char_denominator(model, &cyc, &chi);
        let numerator = series_chi.mul_truncated(&cyc, &den, request.dmax);
        check_guard_window_cyc(&cyc, &numerator, request.dmax, request.guard)?;
        stab = stab.max(numerator.degree().unwrap_or(0));
        per.push(CharSeries { chi, numerator, denominator: den });
    }
    Ok(ThetaPoly { request: request.clone(), body: ThetaBody::PerCharacter(per), stabilization_degree: stab })
}

// ---- Special values and twists ----

/// The smoothing element `prod over T0 of (1 - sigma_v^{-1} q^(n deg v))`
/// exactly in `Z[G]`.
pub fn delta_t(model: &ExtensionModel, t0: &[Place], n: i64) -> Result<ZGroupElem, Error> {
    if t0.is_empty() {
        return Err(Error::Config("T0 must be nonempty".into()));
    }
    if n < 0 {
        return Err(Error::Config("twist level must be nonnegative".into()));
    }
    let zr = z_group_ring(model.group());
    let mut out = zr.one();
    for (i, v) in t0.iter().enumerate() {
        if t0[..i].contains(v) {
            return Err(Error::Config(format!("T0 lists {} twice", v.label())));
        }
        if model.is_ramified(v) {
            return Err(Error::Config(format!("T0 must avoid ramified places; contains {}", v.label())));
        }
        let s = model.frobenius(v)?;
        let si = model.group().inv(s);
        let qn = int_pow(&BigInt::from(model.q()), (n as u64) * v.degree() as u64);
        let factor = zr.sub(&zr.one(), &zr.monomial(qn, si));
        out = zr.mul(&out, &factor);
    }
    Ok(out)
}

/// The special value at `u = q^(n-1)` of a polynomial theta, exactly in
/// `Z[G]`.
pub fn theta_special(theta: &ThetaPoly, n: i64) -> Result<ZGroupElem, Error> {
    if n < 2 {
        return Err(Error::Config("special values need n >= 2".into()));
    }
    let poly = theta.polynomial()?;
    let model = &theta.request.model;
    let zr = z_group_ring(model.group());
    let u0 = zr.from_int(&int_pow(&BigInt::from(model.q()), (n - 1) as u64));
    Ok(poly.eval(&zr, &u0))
}

/// Trivial-character value of a per-character theta at `u = q^(n-1)`, as
/// an exact rational (the character component has rational coefficients).
pub fn trivial_character_value(theta: &ThetaPoly, n: i64) -> Result<BigRational, Error> {
    if n < 1 {
        return Err(Error::Config("evaluation needs n >= 1".into()));
    }
    let per = theta.per_character()?;
    let model = &theta.request.model;
    let group = model.group();
    let cyc = character_value_ring(group);
    let series = per
        .iter()
        .find(|cs| cs.chi.is_trivial(group))
        .ok_or_else(|| Error::Internal("trivial character missing".into()))?;
    let u0 = int_pow(&BigInt::from(model.q()), (n - 1) as u64);
    let eval_int = |p: &Poly<CycRing>| -> Result<BigInt, Error> {
        let mut acc = BigInt::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            let scalar = cyc.as_integer(c).ok_or_else(|| {
                Error::Internal("trivial-character coefficients must be rational integers".into())
            })?;
            acc += scalar * int_pow(&u0, i as u64);
        }
        Ok(acc)
    };
    let num = eval_int(&series.numerator)?;
    let den = eval_int(&series.denominator)?;
    if den.is_zero() {
        return Err(Error::Config("denominator vanishes at the evaluation point".into()));
    }
    Ok(BigRational::new(num, den))
}

/// Reads the polynomial as the infinite-level element (the variable
/// standing for the inverse Frobenius generator), applies the Tate twist
/// of level `1 - n`, and projects to the finite level by sending the
/// variable to 1. The twist multiplies the degree-`k` coefficient by
/// `q^(k(n-1))`; the supporting group elements must satisfy the
/// constant-degree congruence `d(g) = -k mod rtilde`, which is checked.
pub fn twist_project(theta: &ThetaPoly, n: i64) -> Result<ZGroupElem, Error> {
    if n < 1 {
        return Err(Error::Config("twist projection needs n >= 1".into()));
    }
    let poly = theta.polynomial()?;
    let model = &theta.request.model;
    let group = model.group();
    let zr = z_group_ring(group);
    let rt = model.rtilde();
    let q = BigInt::from(model.q());
    let mut out = zr.zero();
    for (k, c) in poly.coeffs().iter().enumerate() {
        for (g, coeff) in c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let want = ((rt as i64 - (k as i64 % rt as i64)) % rt as i64) as u64;
            if model.constant_degree(g) != want {
                return Err(Error::Internal(format!(
                    "coefficient at degree {} is supported on a group element with constant degree {}, expected {}",
                    k,
                    model.constant_degree(g),
                    want
                )));
            }
        }
        let mult = int_pow(&q, (k as u64) * (n - 1) as u64);
        let scaled: ZGroupElem = c.iter().map(|x| x * &mult).collect();
        out = zr.add(&out, &scaled);
    }
    Ok(out)
}

// ---- Checkable identities ----

/// Moving a place into `S0` multiplies the L-polynomial by the detached
/// Euler factor; both sides are computed independently and compared
/// exactly.
pub fn euler_factor_check(
    model: &ExtensionModel,
    s0: &[Place],
    v: &Place,
    t0: &[Place],
    dmax: Option<usize>,
    guard: Option<usize>,
) -> Result<bool, Error> {
    let sigma = model.frobenius(v)?;
    euler_factor_check_with_sigma(model, s0, v, t0, dmax, guard, sigma)
}

/// Same check with an explicitly supplied Frobenius for the detached
/// place, so a corrupted class is observable as a clean failure.
pub fn euler_factor_check_with_sigma(
    model: &ExtensionModel,
    s0: &[Place],
    v: &Place,
    t0: &[Place],
    dmax: Option<usize>,
    guard: Option<usize>,
    sigma_v: usize,
) -> Result<bool, Error> {
    if t0.is_empty() {
        return Err(Error::Config("factor check needs a nonempty T0".into()));
    }
    if s0.contains(v) || t0.contains(v) {
        return Err(Error::Config("detached place must lie outside S0 and T0".into()));
    }
    if model.is_ramified(v) {
        return Err(Error::Config("detached place must be unramified".into()));
    }
    let base = LDataRequest::with_bounds(model.clone(), s0.to_vec(), t0.to_vec(), dmax, guard, None)?;
    let mut s0_ext = s0.to_vec();
    s0_ext.push(v.clone());
    let extended =
        LDataRequest::with_bounds(model.clone(), s0_ext, t0.to_vec(), dmax, guard, None)?;
    let theta_base = theta(&base)?;
    let theta_ext = theta(&extended)?;
    let zr = z_group_ring(model.group());
    let d = v.degree();
    let si = model.group().inv(sigma_v);
    let mut coeffs = vec![zr.zero(); d + 1];
    coeffs[0] = zr.one();
    coeffs[d] = zr.monomial(-BigInt::one(), si);
    let factor = Poly::from_coeffs(&zr, coeffs);
    let recomposed = theta_base.polynomial()?.mul(&zr, &factor);
    Ok(&recomposed == theta_ext.polynomial()?)
}

/// Cross-multiplied independence of the smoothing set: the two smoothed
/// special values agree after exchanging their smoothing elements.
pub fn t0_independence_check(
    model: &ExtensionModel,
    s0: &[Place],
    t0a: &[Place],
    t0b: &[Place],
    n: i64,
    dmax: Option<usize>,
    guard: Option<usize>,
) -> Result<bool, Error> {
    let ra = LDataRequest::with_bounds(model.clone(), s0.to_vec(), t0a.to_vec(), dmax, guard, None)?;
    let rb = LDataRequest::with_bounds(model.clone(), s0.to_vec(), t0b.to_vec(), dmax, guard, None)?;
    let va = theta_special(&theta(&ra)?, n)?;
    let vb = theta_special(&theta(&rb)?, n)?;
    let da = delta_t(model, t0a, n)?;
    let db = delta_t(model, t0b, n)?;
    let zr = z_group_ring(model.group());
    Ok(zr.mul(&db, &va) == zr.mul(&da, &vb))
}

/// Outcome of the mod-p unit verification of a special value.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitModPReport {
    /// Constant term 1 and integral coefficients.
    pub polynomial_form: bool,
    /// Special value congruent to 1 mod p.
    pub congruence: bool,
    /// Explicit inverse verified at every requested level.
    pub inverse: bool,
}

impl UnitModPReport {
    pub fn passes(&self) -> bool {
        self.polynomial_form && self.congruence && self.inverse
    }
}

/// Verifies that the special value is a 1-unit at the characteristic:
/// the polynomial has constant term 1, the value is congruent to 1 mod p,
/// and an explicit geometric-series inverse multiplies back to 1 at every
/// level up to `kmax`.
pub fn unit_mod_p_check(theta: &ThetaPoly, n: i64, kmax: u32) -> Result<UnitModPReport, Error> {
    if kmax == 0 {
        return Err(Error::Config("kmax must be positive".into()));
    }
    let poly = theta.polynomial()?;
    let model = &theta.request.model;
    let group = model.group();
    let zr = z_group_ring(group);
    let polynomial_form = zr.is_one(&poly.coeff(&zr, 0));
    let value = theta_special(theta, n)?;
    let p = BigInt::from(model.p());

    let mut diff = value.clone();
    diff[group.identity()] -= 1;
    let congruence = diff.iter().all(|c| (c % &p).is_zero());

    let mut inverse = congruence;
    if congruence {
        for k in 1..=kmax {
            let pk = int_pow(&p, k as u64);
            let rk = crate::grpring::mod_group_ring(group, pk.clone());
            let value_k: Vec<BigInt> =
                value.iter().map(|c| num::Integer::mod_floor(c, &pk)).collect();
            let w = rk.sub(&value_k, &rk.one());
            let mut inv = rk.one();
            let mut power = rk.one();
            for _ in 1..k {
                power = rk.mul(&power, &w);
                power = rk.neg(&power);
                inv = rk.add(&inv, &power);
            }
            if !rk.is_one(&rk.mul(&value_k, &inv)) {
                inverse = false;
                break;
            }
        }
    }
    Ok(UnitModPReport { polynomial_form, congruence, inverse })
}

/// Compares the character transform of the equivariant polynomial with a
/// scalar series summed independently character by character.
pub fn character_compatibility_check(request: &LDataRequest) -> Result<bool, Error> {
    if request.t0.is_empty() {
        return Err(Error::Config("compatibility check needs a nonempty T0".into()));
    }
    let computed = theta(request)?;
    let model = &request.model;
    let ctx = model.ctx();
    let group = model.group();
    let zr = z_group_ring(group);
    let cyc = character_value_ring(group);
    let finite = request.s0_finite();
    let q = BigInt::from(model.q());

    for chi in all_characters(group) {
        // Independent scalar summation.
        let mut coeffs: Vec<Vec<BigInt>> = vec![cyc.zero(); request.dmax + 1];
        for d in 0..=request.dmax {
            for a in monic_polys(ctx, d, request.cap)? {
                if finite.iter().any(|v| a.rem(ctx, v).is_zero()) {
                    continue;
                }
                let s = model.frobenius_monic(&a)?;
                let e = chi.value_exponent(group, s) as i64;
                let term = cyc.root_power(-e);
                coeffs[d] = cyc.add(&coeffs[d], &term);
            }
        }
        let series_chi = Poly::from_coeffs(&cyc, coeffs);
        let mut tf_chi = Poly::one(&cyc);
        for v in &request.t0 {
            let s = model.frobenius(v)?;
            let e = chi.value_exponent(group, s) as i64;
            let root = cyc.root_power(-e);
            let dv = v.degree();
            let qd = int_pow(&q, dv as u64);
            let mut c = vec![cyc.zero(); dv + 1];
            c[0] = cyc.one();
            c[dv] = root.iter().map(|x| -(x * &qd)).collect();
            tf_chi = tf_chi.mul_truncated(&cyc, &Poly::from_coeffs(&cyc, c), request.dmax);
        }
        let independent = series_chi.mul_truncated(&cyc, &tf_chi, request.dmax);
        let transformed = char_eval_poly(&cyc, &zr, computed.polynomial()?, &chi);
        if independent != transformed {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Numerator of the character component of the unmodified L-function,
/// with its denominator, computed by direct summation.
pub fn char_numerator(
    model: &ExtensionModel,
    s0: &[Place],
    chi: &Character,
    dmax: Option<usize>,
    guard: Option<usize>,
) -> Result<(Poly<CycRing>, Poly<CycRing>), Error> {
    let request =
        LDataRequest::with_bounds(model.clone(), s0.to_vec(), Vec::new(), dmax, guard, None)?;
    let computed = theta(&request)?;
    let per = computed.per_character()?;
    let group = model.group();
    let found = per
        .iter()
        .find(|cs| {
            cs.chi
                .exps
                .iter()
                .zip(&chi.exps)
                .zip(group.orders())
                .all(|((&a, &b), &n)| a % n == b % n)
        })
        .ok_or_else(|| Error::Internal("character not found in the family".into()))?;
    Ok((found.numerator.clone(), found.denominator.clone()))
}

/// Moduli of the complex inverse roots of the character component of the
/// unmodified L-function.
pub fn weil_check(
    model: &ExtensionModel,
    s0: &[Place],
    chi: &Character,
    dmax: Option<usize>,
) -> Result<Vec<f64>, Error> {
    let (numerator, _) = char_numerator(model, s0, chi, dmax, None)?;
    let group = model.group();
    let cyc = character_value_ring(group);
    let n = cyc.index();
    let deg = match numerator.degree() {
        Some(d) if d > 0 => d,
        _ => return Ok(Vec::new()),
    };
    let embed = |c: &Vec<BigInt>| -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (i, coeff) in c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * (i as f64) / (n as f64);
            let x = coeff.to_f64().expect("coefficient fits in f64");
            z += Complex64::new(angle.cos(), angle.sin()) * x;
        }
        z
    };
    let mut reversed: Vec<Complex64> = Vec::with_capacity(deg + 1);
    for i in (0..=deg).rev() {
        reversed.push(embed(&numerator.coeff(&cyc, i)));
    }
    let roots = crate::numeric::polynomial_roots(&reversed)?;
    Ok(roots.iter().map(|r| r.norm()).collect())
}

/// Every modulus must be 1 (a trivial zero from a detached factor) or
/// the square root of q (a genuine inverse root), within tolerance.
pub fn weil_moduli_ok(moduli: &[f64], q: u32, tol: f64) -> bool {
    let sq = (q as f64).sqrt();
    moduli.iter().all(|&m| (m - 1.0).abs() <= tol || (m - sq).abs() <= tol)
}

// ---- Serialization ----

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaceConfig {
    Label(String),
    Coeffs(Vec<u64>),
}

/// JSON shape of a request: model kind and parameters, places as "inf"
/// or coefficient arrays (constant term first), optional bounds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RequestConfig {
    pub kind: String,
    pub q: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    pub s0: Vec<PlaceConfig>,
    #[serde(default)]
    pub t0: Vec<PlaceConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guard: Option<usize>,
}

impl RequestConfig {
    pub fn to_request(&self, cap: Option<u128>) -> Result<LDataRequest, Error> {
        let model = match self.kind.as_str() {
            "carlitz" => {
                let coeffs = self
                    .m
                    .as_ref()
                    .ok_or_else(|| Error::Config("cyclotomic model needs field m".into()))?;
                let ctx = FqCtx::new(self.q)?;
                let m = parse_poly(&ctx, coeffs)?;
                ExtensionModel::carlitz(self.q, &m)?
            }
            "constant" => {
                let r = self
                    .r
                    .ok_or_else(|| Error::Config("constant-field model needs field r".into()))?;
                ExtensionModel::constant_field(self.q, r)?
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown model kind {:?} (expected \"carlitz\" or \"constant\")",
                    other
                )))
            }
        };
        let ctx = model.ctx().clone();
        let parse_places = |list: &[PlaceConfig]| -> Result<Vec<Place>, Error> {
            list.iter()
                .map(|pc| match pc {
                    PlaceConfig::Label(s) if s == "inf" => Ok(Place::Infinity),
                    PlaceConfig::Label(s) => {
                        Err(Error::Config(format!("unknown place label {:?}", s)))
                    }
                    PlaceConfig::Coeffs(c) => Ok(Place::Finite(parse_poly(&ctx, c)?)),
                })
                .collect()
        };
        let s0 = parse_places(&self.s0)?;
        let t0 = parse_places(&self.t0)?;
        LDataRequest::with_bounds(model, s0, t0, self.dmax, self.guard, cap)
    }

    pub fn from_request(req: &LDataRequest) -> RequestConfig {
        let (kind, m, r) = match req.model.kind() {
            ModelKind::CarlitzCyclotomic { m } => (
                "carlitz".to_string(),
                Some(m.coeffs().iter().map(|&c| c as u64).collect()),
                None,
            ),
            ModelKind::ConstantField { r } => ("constant".to_string(), None, Some(*r)),
        };
        let encode = |places: &[Place]| -> Vec<PlaceConfig> {
            places
                .iter()
                .map(|p| match p {
                    Place::Infinity => PlaceConfig::Label("inf".into()),
                    Place::Finite(f) => {
                        PlaceConfig::Coeffs(f.coeffs().iter().map(|&c| c as u64).collect())
                    }
                })
                .collect()
        };
        RequestConfig {
            kind,
            q: req.model.q(),
            m,
            r,
            s0: encode(&req.s0),
            t0: encode(&req.t0),
            dmax: Some(req.dmax),
            guard: Some(req.guard),
        }
    }
}

fn parse_poly(ctx: &FqCtx, coeffs: &[u64]) -> Result<FqPoly, Error> {
    let q = ctx.q() as u64;
    let mut idx = Vec::with_capacity(coeffs.len());
    for &c in coeffs {
        if c >= q {
            return Err(Error::Config(format!(
                "coefficient {} out of range for the field of order {}",
                c, q
            )));
        }
        idx.push(c as u8);
    }
    Ok(crate::ffq::poly_from_indices(ctx, &idx))
}

fn group_elem_json(group: &FinAbGroup, x: &ZGroupElem) -> serde_json::Value {
    let mut map = BTreeMap::new();
    for (g, c) in x.iter().enumerate() {
        if !c.is_zero() {
            map.insert(group.label(g).to_string(), c.to_string());
        }
    }
    serde_json::to_value(map).expect("string map serializes")
}

/// Full JSON form of a computed theta: the request echo, the
/// stabilization degree, and the body (group-ring coefficients by degree,
/// or per-character numerator/denominator pairs).
pub fn theta_to_json(theta: &ThetaPoly) -> serde_json::Value {
    let group = theta.request.model.group();
    let body = match &theta.body {
        ThetaBody::Polynomial(p) => {
            let coeffs: Vec<serde_json::Value> =
                p.coeffs().iter().map(|c| group_elem_json(group, c)).collect();
            serde_json::json!({ "polynomial": coeffs })
        }
        ThetaBody::PerCharacter(per) => {
            let entries: Vec<serde_json::Value> = per
                .iter()
                .map(|cs| {
                    let ser = |p: &Poly<CycRing>| -> Vec<Vec<String>> {
                        p.coeffs()
                            .iter()
                            .map(|c| c.iter().map(|x| x.to_string()).collect())
                            .collect()
                    };
                    serde_json::json!({
                        "character": cs.chi.exps,
                        "numerator": ser(&cs.numerator),
                        "denominator": ser(&cs.denominator),
                    })
                })
                .collect();
            serde_json::json!({ "per_character": entries })
        }
    };
    serde_json::json!({
        "request": RequestConfig::from_request(&theta.request),
        "stabilization_degree": theta.stabilization_degree,
        "body": body,
    })
}
