//! Cohomology predictions at the level of Fitting ideals.
//!
//! The degree-one side is concrete: the twisted-coinvariants module of a
//! model has a finite-level cyclic presentation over `(Z/l^k)[G]`, and
//! its Pontryagin dual carries the degree-one Fitting ideal. Divisor
//! modules supported on a smoothing set get the same treatment, and
//! their Fitting ideals must match the smoothing element of the L-side
//! both directly and through the dual; that cross-check ties the
//! analytic smoothing factor to the module theory.
//!
//! The degree-two side is a prediction, never an independent
//! computation: the degree-one Fitting ideal times the exact special
//! value, with the smoothing element divided out. Division happens in a
//! fractional ideal with a single integer denominator (the norm of the
//! smoothing element), computed at an elevated modulus where the
//! quotient at the working level is fully determined, and reduced back.
//! Integrality of the result, agreement across independent smoothing
//! witnesses, and stability under level changes are the checkable
//! surface; failures are internal-consistency errors rather than
//! tolerable outcomes.

use crate::ffq::{is_irreducible, is_monic, Place};
use crate::fitting::{
    dual_vee, fit, ideal_mul, ideal_to_json, reduce_ideal, FinGroupRing, FracIdeal, IdealFG,
    PresentedModule,
};
use crate::grpring::{is_zero_divisor, q_elem_to_z, z_group_ring, FinAbGroup};
use crate::lfun::{
    delta_t, theta, theta_special, ExtensionModel, LDataRequest, ModelKind, UnitModPReport,
};
use crate::linalg::{det_bareiss, solve_rational};
use crate::ring::{int_pow, int_valuation, mod_inverse, CoeffRing};
use crate::{Error, ZGroupElem};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};
use std::collections::BTreeMap;

// ---- Degree one ----

/// Finite-level presentation of the twisted-coinvariants module: cyclic
/// over `(Z/l^k)[G]`, with one relation `g_i - qbar^(-n d(g_i))` per
/// group generator `g_i` and the scalar relation `1 - qbar^(-n rtilde)`,
/// where `d` is the constant-field degree map and `qbar` the image of
/// `q`, invertible because `l` differs from the characteristic. The
/// degree-one prediction itself is the Pontryagin dual (`dual_vee`) of
/// this module.
pub fn h1_module(
    model: &ExtensionModel,
    n: i64,
    ell: u64,
    k: u32,
) -> Result<PresentedModule, Error> {
    if ell == model.p() as u64 {
        return Err(Error::Config(
            "the working modulus base must differ from the model characteristic".into(),
        ));
    }
    if n < 2 {
        return Err(Error::Config("cohomology predictions need n >= 2".into()));
    }
    let group = model.group();
    let ring = FinGroupRing::new(group, ell, k)?;
    let qinv = mod_inverse(&BigInt::from(model.q()), ring.modulus())
        .ok_or_else(|| Error::Internal("q is not invertible at the working modulus".into()))?;
    let rr = ring.ring();
    let pow = |e: u64| qinv.modpow(&BigInt::from(e), ring.modulus());
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..group.orders().len() {
        let mut exps = vec![0u64; group.orders().len()];
        exps[i] = 1;
        let gi = group.from_exponents(&exps);
        let d = model.constant_degree(gi);
        rels.push(rr.sub(&rr.basis(gi), &rr.monomial(pow(n as u64 * d), group.identity())));
    }
    rels.push(rr.sub(&rr.one(), &rr.monomial(pow(n as u64 * model.rtilde()), group.identity())));
    PresentedModule::quotient_by(&ring, &rels)
}

fn h1_fit(model: &ExtensionModel, n: i64, ell: u64, k: u32) -> Result<IdealFG, Error> {
    fit(&dual_vee(&h1_module(model, n, ell, k)?)?)
}

// ---- Divisor modules ----

/// A direct sum of cyclic quotients, one per place of a smoothing set:
/// the place `v` contributes the summand `(Z/l^k)[G] / <1 - q^(n deg v)
/// sigma_v>`. Every relation is checked to be a non-zero-divisor in the
/// rational group ring through its character values.
#[derive(Clone, Debug)]
pub struct DivisorModuleData {
    pub model: ExtensionModel,
    pub t0: Vec<Place>,
    pub n: i64,
    pub module: PresentedModule,
}

impl DivisorModuleData {
    pub fn new(
        model: &ExtensionModel,
        t0: &[Place],
        n: i64,
        ell: u64,
        k: u32,
    ) -> Result<DivisorModuleData, Error> {
        if ell == model.p() as u64 {
            return Err(Error::Config(
                "the working modulus base must differ from the model characteristic".into(),
            ));
        }
        if n < 2 {
            return Err(Error::Config("twisted divisor modules need n >= 2".into()));
        }
        if t0.is_empty() {
            return Err(Error::Config("T0 must be nonempty".into()));
        }
        let ring = FinGroupRing::new(model.group(), ell, k)?;
        let zr = z_group_ring(model.group());
        let mut rows = Vec::with_capacity(t0.len());
        for (i, v) in t0.iter().enumerate() {
            if t0[..i].contains(v) {
                return Err(Error::Config(format!("T0 lists {} twice", v.label())));
            }
            if let Place::Finite(f) = v {
                if !is_monic(f) || !is_irreducible(model.ctx(), f)? {
                    return Err(Error::Config(format!(
                        "T0 entry {} is not a monic irreducible",
                        v.label()
                    )));
                }
            }
            if model.is_ramified(v) {
                return Err(Error::Config(format!(
                    "T0 must avoid ramified places; contains {}",
                    v.label()
                )));
            }
            let rel = divisor_relation(model, v, n)?;
            if is_zero_divisor(&zr, &rel) {
                return Err(Error::Internal(format!(
                    "divisor relation at {} is a zero divisor",
                    v.label()
                )));
            }
            let mut row = vec![ring.ring().zero(); t0.len()];
            row[i] = rel;
            rows.push(row);
        }
        let module = PresentedModule::new(&ring, t0.len(), rows)?;
        Ok(DivisorModuleData { model: model.clone(), t0: t0.to_vec(), n, module })
    }
}

/// `1 - q^(n deg v) sigma_v` exactly in `Z[G]`.
fn divisor_relation(model: &ExtensionModel, v: &Place, n: i64) -> Result<ZGroupElem, Error> {
    let zr = z_group_ring(model.group());
    let s = model.frobenius(v)?;
    let qn = int_pow(&BigInt::from(model.q()), n as u64 * v.degree() as u64);
    Ok(zr.sub(&zr.one(), &zr.monomial(qn, s)))
}

/// Separate outcomes for the two Fitting-ideal identities of a divisor
/// module: the product of the relations directly, and the smoothing
/// element through the Pontryagin dual.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorFitReport {
    pub product_side: bool,
    pub dual_side: bool,
}

impl DivisorFitReport {
    pub fn passes(&self) -> bool {
        self.product_side && self.dual_side
    }
}

/// Verifies `fit(module) = <prod over v of (1 - q^(n deg v) sigma_v)>`
/// and `fit(dual_vee(module)) = <delta_T0(q^(n-1))>`; the second ties
/// the L-side smoothing element to the module side through the
/// involution implicit in the dual.
pub fn divisor_fit_check(data: &DivisorModuleData) -> Result<DivisorFitReport, Error> {
    let ring = &data.module.ring;
    let zr = z_group_ring(data.model.group());
    let mut prod = zr.one();
    for v in &data.t0 {
        prod = zr.mul(&prod, &divisor_relation(&data.model, v, data.n)?);
    }
    let product_side = fit(&data.module)? == IdealFG::principal(ring, &prod);
    let delta = delta_t(&data.model, &data.t0, data.n)?;
    let dual_side = fit(&dual_vee(&data.module)?)? == IdealFG::principal(ring, &delta);
    Ok(DivisorFitReport { product_side, dual_side })
}

// ---- Degree two ----

/// A completed degree-two prediction: the degree-one Fitting ideal, the
/// special value as an exact rational group-ring element (integral
/// numerator over an integer denominator), the fractional form of the
/// product, and the divided-out ideal at the working level. Built only
/// by `predict_h2`, which has already enforced integrality and witness
/// agreement.
#[derive(Clone, Debug)]
pub struct CohomologyPrediction {
    pub model: ExtensionModel,
    pub s0: Vec<Place>,
    pub n: i64,
    pub ell: u64,
    pub k: u32,
    /// Fitting ideal of the dual twisted-coinvariants module at level `k`.
    pub fit_h1: IdealFG,
    /// Numerator of the special value without smoothing: the smoothed
    /// special value times the adjugate of the smoothing element.
    pub theta_num: ZGroupElem,
    /// Positive integer denominator: the norm of the smoothing element.
    pub theta_den: BigInt,
    /// The product `fit_h1 * <theta_num>` over the denominator, with the
    /// numerator ideal computed at the elevated level where division at
    /// level `k` is determined.
    pub fit_h2_frac: FracIdeal,
    /// The predicted degree-two Fitting ideal: denominator divided out,
    /// reduced to level `k`, canonical.
    pub fit_h2: IdealFG,
    pub witnesses: Vec<Vec<Place>>,
}

/// The determinant of multiplication by `x` on the integral group ring,
/// normalized positive, together with the integral `adj` satisfying
/// `x * adj = norm`. Errs on zero divisors, where no norm form exists.
fn norm_and_adjugate(group: &FinAbGroup, x: &[BigInt]) -> Result<(BigInt, ZGroupElem), Error> {
    let gsz = group.size();
    let mut m = vec![vec![BigInt::zero(); gsz]; gsz];
    for j in 0..gsz {
        for (g, c) in x.iter().enumerate() {
            m[group.mul(g, j)][j] = c.clone();
        }
    }
    let det = det_bareiss(&m);
    if det.is_zero() {
        return Err(Error::Internal("norm of a non-zero-divisor vanished".into()));
    }
    let mq: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from(c.clone())).collect())
        .collect();
    let mut rhs = vec![BigRational::zero(); gsz];
    rhs[group.identity()] = BigRational::from(det.clone());
    let sol = solve_rational(&mq, &rhs)
        .ok_or_else(|| Error::Internal("adjugate solve failed on a nonsingular matrix".into()))?;
    let adj = q_elem_to_z(&sol)
        .ok_or_else(|| Error::Internal("adjugate column is not integral".into()))?;
    if det.is_negative() {
        Ok((-det, adj.iter().map(|c| -c).collect()))
    } else {
        Ok((det, adj))
    }
}

fn set_label(places: &[Place]) -> String {
    places.iter().map(|v| v.label()).collect::<Vec<_>>().join(", ")
}

/// Predicted Fitting ideal of the degree-two cohomology: the degree-one
/// Fitting ideal times the exact smoothed special value, with the
/// smoothing element divided out as `adjugate / norm`. The numerator
/// ideal is computed at modulus `l^(k+v)`, `v` the `l`-valuation of the
/// norm, which pins the quotient at level `k` exactly; the denominator
/// must divide (a theorem-driven integrality check) and every witness
/// smoothing set must produce the same rational special value and the
/// same divided ideal. Violations of those two checks are reported as
/// internal-consistency errors.
pub fn predict_h2(
    model: &ExtensionModel,
    s0: &[Place],
    n: i64,
    ell: u64,
    k: u32,
    witnesses: &[Vec<Place>],
) -> Result<CohomologyPrediction, Error> {
    if witnesses.is_empty() {
        return Err(Error::Config("at least one smoothing witness set is required".into()));
    }
    for (i, w) in witnesses.iter().enumerate() {
        if w.is_empty() {
            return Err(Error::Config("witness smoothing sets must be nonempty".into()));
        }
        if witnesses[..i].iter().any(|u| u.len() == w.len() && w.iter().all(|v| u.contains(v))) {
            return Err(Error::Config(format!(
                "witness smoothing sets must be distinct; {{{}}} repeats",
                set_label(w)
            )));
        }
    }
    let group = model.group();
    let zr = z_group_ring(group);
    let fit_h1 = h1_fit(model, n, ell, k)?;
    let ell_big = BigInt::from(ell);

    struct WitnessResult {
        places: Vec<Place>,
        reduced: IdealFG,
        num: ZGroupElem,
        den: BigInt,
        frac: FracIdeal,
    }
    let mut results: Vec<WitnessResult> = Vec::new();
    for w in witnesses {
        let req = LDataRequest::new(model.clone(), s0.to_vec(), w.clone())?;
        let value = theta_special(&theta(&req)?, n)?;
        let delta = delta_t(model, w, n)?;
        if is_zero_divisor(&zr, &delta) {
            return Err(Error::Internal("smoothing element is a zero divisor".into()));
        }
        let (den, adj) = norm_and_adjugate(group, &delta)?;
        let num = zr.mul(&value, &adj);
        let v = int_valuation(&den, &ell_big);
        let ring_up = FinGroupRing::new(group, ell, k + v)?;
        let numerator =
            ideal_mul(&h1_fit(model, n, ell, k + v)?, &IdealFG::principal(&ring_up, &num))?;
        let frac = FracIdeal::new(numerator, den.clone())?;
        if !frac.is_integral() {
            return Err(Error::Internal(format!(
                "predicted ideal is not integral for witness set {{{}}}",
                set_label(w)
            )));
        }
        let reduced = reduce_ideal(&frac.integral_part()?, k)?;
        results.push(WitnessResult { places: w.clone(), reduced, num, den, frac });
    }

    let first = &results[0];
    for r in &results[1..] {
        let lhs: ZGroupElem = first.num.iter().map(|c| c * &r.den).collect();
        let rhs: ZGroupElem = r.num.iter().map(|c| c * &first.den).collect();
        if lhs != rhs {
            return Err(Error::Internal(format!(
                "special values from witness sets {{{}}} and {{{}}} disagree",
                set_label(&first.places),
                set_label(&r.places)
            )));
        }
        if r.reduced != first.reduced {
            return Err(Error::Internal(format!(
                "witness sets {{{}}} and {{{}}} predict different ideals",
                set_label(&first.places),
                set_label(&r.places)
            )));
        }
    }

    let first = results.remove(0);
    Ok(CohomologyPrediction {
        model: model.clone(),
        s0: s0.to_vec(),
        n,
        ell,
        k,
        fit_h1,
        theta_num: first.num,
        theta_den: first.den,
        fit_h2_frac: first.frac,
        fit_h2: first.reduced,
        witnesses: witnesses.to_vec(),
    })
}

// ---- Reports ----

fn zelem_json(group: &FinAbGroup, x: &ZGroupElem) -> serde_json::Value {
    let mut map = BTreeMap::new();
    for (g, c) in x.iter().enumerate() {
        if !c.is_zero() {
            map.insert(group.label(g).to_string(), c.to_string());
        }
    }
    serde_json::to_value(map).expect("string map serializes")
}

fn model_json(model: &ExtensionModel) -> serde_json::Value {
    match model.kind() {
        ModelKind::CarlitzCyclotomic { m } => serde_json::json!({
            "kind": "carlitz",
            "q": model.q(),
            "m": crate::ffq::fmt_fq_poly(m),
        }),
        ModelKind::ConstantField { r } => serde_json::json!({
            "kind": "constant",
            "q": model.q(),
            "r": r,
        }),
    }
}

fn place_labels(places: &[Place]) -> Vec<String> {
    places.iter().map(|v| v.label()).collect()
}

fn theta_value_json(p: &CohomologyPrediction) -> serde_json::Value {
    serde_json::json!({
        "numerator": zelem_json(p.model.group(), &p.theta_num),
        "denominator": p.theta_den.to_string(),
    })
}

/// Full JSON form of one prediction: configuration echo, canonical ideal
/// bases, the exact special value, and the checks that held during
/// construction.
pub fn prediction_to_json(p: &CohomologyPrediction) -> serde_json::Value {
    serde_json::json!({
        "model": model_json(&p.model),
        "s0": place_labels(&p.s0),
        "n": p.n,
        "ell": p.ell,
        "k": p.k,
        "fit_h1": ideal_to_json(&p.fit_h1),
        "theta": theta_value_json(p),
        "fit_h2": ideal_to_json(&p.fit_h2),
        "witnesses": p.witnesses.iter().map(|w| place_labels(w)).collect::<Vec<_>>(),
        "checks": {
            "witness_count": p.witnesses.len(),
            "witnesses_agree": true,
            "integral": true,
        },
    })
}

fn same_model(a: &ExtensionModel, b: &ExtensionModel) -> bool {
    if a.q() != b.q() {
        return false;
    }
    match (a.kind(), b.kind()) {
        (ModelKind::CarlitzCyclotomic { m: ma }, ModelKind::CarlitzCyclotomic { m: mb }) => {
            ma == mb
        }
        (ModelKind::ConstantField { r: ra }, ModelKind::ConstantField { r: rb }) => ra == rb,
        _ => false,
    }
}

/// Restates completed predictions as the table of predicted K-group
/// Fitting ideals: the degree-one ideal stands for the odd K-group, the
/// degree-two ideal for the even one, with one entry per working modulus
/// away from the characteristic and a final entry at the characteristic
/// recording that both sides are unit ideals because the special value
/// is a unit there (which the supplied verification must have
/// confirmed). Every entry is labeled a prediction; nothing here is an
/// independently computed K-group.
pub fn k_theory_restate(
    predictions: &[CohomologyPrediction],
    unit: &UnitModPReport,
) -> Result<serde_json::Value, Error> {
    let first = predictions
        .first()
        .ok_or_else(|| Error::Config("at least one prediction is required".into()))?;
    for p in &predictions[1..] {
        if !same_model(&p.model, &first.model) || p.s0 != first.s0 || p.n != first.n {
            return Err(Error::Config(
                "predictions must share the model, S0, and twist level".into(),
            ));
        }
    }
    for (i, p) in predictions.iter().enumerate() {
        if predictions[..i].iter().any(|o| o.ell == p.ell) {
            return Err(Error::Config(format!(
                "two predictions for the modulus base {}",
                p.ell
            )));
        }
    }
    if !unit.passes() {
        return Err(Error::Property(
            "the special value failed the unit verification at the characteristic".into(),
        ));
    }
    let mut sorted: Vec<&CohomologyPrediction> = predictions.iter().collect();
    sorted.sort_by_key(|p| p.ell);
    let mut entries: Vec<serde_json::Value> = sorted
        .iter()
        .map(|p| {
            serde_json::json!({
                "ell": p.ell,
                "k": p.k,
                "fit_odd": ideal_to_json(&p.fit_h1),
                "theta": theta_value_json(p),
                "fit_even": ideal_to_json(&p.fit_h2),
                "status": "predicted",
            })
        })
        .collect();
    entries.push(serde_json::json!({
        "ell": first.model.p(),
        "status": "unit",
        "note": "both sides unit ideal; the special value is a unit at the characteristic",
    }));
    Ok(serde_json::json!({
        "statement": "Fitting ideal of the odd K-group times the special value equals the \
                      Fitting ideal of the even K-group; entries are predictions carried over \
                      from the cohomology side, not independently computed K-groups",
        "model": model_json(&first.model),
        "s0": place_labels(&first.s0),
        "n": first.n,
        "entries": entries,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffq::{poly_from_indices, FqCtx};
    use crate::fitting::{frac_ideal_eq, module_order};
    use crate::lfun::unit_mod_p_check;
    use num::One;

    fn fq(q: u32) -> FqCtx {
        FqCtx::new(q).unwrap()
    }

    fn pl(ctx: &FqCtx, coeffs: &[u8]) -> Place {
        Place::Finite(poly_from_indices(ctx, coeffs))
    }

    fn carlitz_q3_t() -> (ExtensionModel, Vec<Place>) {
        let ctx = fq(3);
        let m = poly_from_indices(&ctx, &[0, 1]);
        let model = ExtensionModel::carlitz(3, &m).unwrap();
        let s0 = vec![Place::Infinity, pl(&ctx, &[0, 1])];
        (model, s0)
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn el(vals: &[i64]) -> Vec<BigInt> {
        vals.iter().map(|&v| b(v)).collect()
    }

    #[test]
    fn h1_presentation_matches_hand_reductions() {
        let (model, _) = carlitz_q3_t();
        let m = h1_module(&model, 2, 2, 3).unwrap();
        // q^0 = 1 at every group element, and 1 - 3^{-2} = 0 mod 8, so
        // the only surviving relation is g - 1.
        assert_eq!(m.relations, vec![vec![el(&[7, 1])]]);
        let ring = m.ring.clone();
        let f = h1_fit(&model, 2, 2, 3).unwrap();
        assert_eq!(f, IdealFG::new(&ring, vec![el(&[-1, 1])]));

        let cmodel = ExtensionModel::constant_field(2, 2).unwrap();
        let m2 = h1_module(&cmodel, 2, 3, 2).unwrap();
        // gbar maps to 2^{-2} = 7 mod 9; the scalar relation 1 - 2^{-4}
        // = -3 lies in <gbar - 7> because (gbar-7)(gbar+7) = -48 = -3.
        let gen_rel = el(&[-7, 1]);
        assert!(m2.relations.contains(&vec![m2.ring.reduce_elem(&gen_rel)]));
        assert!(IdealFG::principal(&m2.ring, &gen_rel).contains(&el(&[-3, 0])));
        assert_eq!(module_order(&m2).unwrap(), b(3));

        assert!(matches!(h1_module(&model, 2, 3, 2), Err(Error::Config(_))));
        assert!(matches!(h1_module(&model, 1, 2, 3), Err(Error::Config(_))));
    }

    #[test]
    fn h1_trivial_group_order_is_the_ell_part_of_the_unit_count() {
        for (q, n, ell, k) in [(3u32, 2i64, 2u64, 3u32), (3, 2, 2, 4), (3, 2, 5, 2), (2, 2, 3, 2)]
        {
            let model = ExtensionModel::constant_field(q, 1).unwrap();
            let m = h1_module(&model, n, ell, k).unwrap();
            let target = int_pow(&b(q as i64), n as u64) - BigInt::one();
            let expect = int_valuation(&target, &b(ell as i64)).min(k);
            assert_eq!(
                module_order(&m).unwrap(),
                int_pow(&b(ell as i64), expect as u64),
                "q={} n={} ell={} k={}",
                q,
                n,
                ell,
                k
            );
        }
    }

    #[test]
    fn divisor_fit_examples_and_duality() {
        let ctx = fq(3);
        let (model, _) = carlitz_q3_t();

        // sigma at t+1 is trivial: the single relation is 1 - 9 = -8.
        let data = DivisorModuleData::new(&model, &[pl(&ctx, &[1, 1])], 2, 2, 4).unwrap();
        assert_eq!(fit(&data.module).unwrap(), IdealFG::principal(&data.module.ring, &el(&[8, 0])));
        let report = divisor_fit_check(&data).unwrap();
        assert!(report.product_side && report.dual_side && report.passes());

        // sigma at t+2 is the generator: relation 1 - 9g, self-dual
        // because g has order 2.
        let data2 = DivisorModuleData::new(&model, &[pl(&ctx, &[2, 1])], 2, 2, 4).unwrap();
        assert_eq!(
            fit(&data2.module).unwrap(),
            IdealFG::principal(&data2.module.ring, &el(&[1, -9]))
        );
        assert!(divisor_fit_check(&data2).unwrap().passes());

        // Two-place set: both identities at once.
        let both =
            DivisorModuleData::new(&model, &[pl(&ctx, &[1, 1]), pl(&ctx, &[2, 1])], 2, 2, 3)
                .unwrap();
        assert!(divisor_fit_check(&both).unwrap().passes());

        // Trivial group: the two sides coincide by construction and must
        // both pass.
        let trivial = ExtensionModel::constant_field(3, 1).unwrap();
        let d3 = DivisorModuleData::new(&trivial, &[pl(&ctx, &[0, 1])], 3, 2, 3).unwrap();
        let r3 = divisor_fit_check(&d3).unwrap();
        assert!(r3.passes());
    }

    #[test]
    fn divisor_construction_guards() {
        let ctx = fq(3);
        let (model, _) = carlitz_q3_t();
        for n in 2..=5 {
            assert!(DivisorModuleData::new(&model, &[pl(&ctx, &[1, 1])], n, 2, 3).is_ok());
        }
        let dup = [pl(&ctx, &[1, 1]), pl(&ctx, &[1, 1])];
        assert!(matches!(DivisorModuleData::new(&model, &dup, 2, 2, 3), Err(Error::Config(_))));
        let ram = [pl(&ctx, &[0, 1])];
        assert!(matches!(DivisorModuleData::new(&model, &ram, 2, 2, 3), Err(Error::Config(_))));
        assert!(matches!(DivisorModuleData::new(&model, &[], 2, 2, 3), Err(Error::Config(_))));
        assert!(matches!(
            DivisorModuleData::new(&model, &[pl(&ctx, &[1, 1])], 2, 3, 3),
            Err(Error::Config(_))
        ));
        let composite = [pl(&ctx, &[2, 0, 1])];
        assert!(matches!(
            DivisorModuleData::new(&model, &composite, 2, 2, 3),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn predicted_h2_worked_example() {
        let ctx = fq(3);
        let (model, s0) = carlitz_q3_t();
        let w1 = vec![pl(&ctx, &[1, 1])];
        let w2 = vec![pl(&ctx, &[2, 1])];

        let p = predict_h2(&model, &s0, 2, 2, 3, &[w1.clone(), w2.clone()]).unwrap();
        let ring = FinGroupRing::new(model.group(), 2, 3).unwrap();
        assert_eq!(p.fit_h1, IdealFG::principal(&ring, &el(&[-1, 1])));
        // Witness t+1: special value -5+3g, smoothing element -8 with
        // norm 64 and adjugate -8, so the numerator is (-5+3g)(-8).
        assert_eq!(p.theta_num, el(&[40, -24]));
        assert_eq!(p.theta_den, b(64));
        assert_eq!(p.fit_h2, IdealFG::new(&ring, vec![el(&[-1, 1]), el(&[2, 0])]));

        // Cross-multiplied form against the expected ideal lifted to the
        // elevated level: numerator = expected * 64 exactly.
        let ring_up = FinGroupRing::new(model.group(), 2, 9).unwrap();
        let lifted = IdealFG::new(&ring_up, vec![el(&[-1, 1]), el(&[2, 0])]);
        assert!(frac_ideal_eq(&p.fit_h2_frac, &FracIdeal::integral(lifted)).unwrap());

        // Each witness alone gives the same prediction.
        for w in [w1, w2] {
            let single = predict_h2(&model, &s0, 2, 2, 3, &[w]).unwrap();
            assert_eq!(single.fit_h2, p.fit_h2);
        }
    }

    #[test]
    fn affine_line_predicts_unit_ideal() {
        let ctx = fq(3);
        let model = ExtensionModel::constant_field(3, 1).unwrap();
        let s0 = vec![Place::Infinity];
        let witnesses =
            vec![vec![pl(&ctx, &[0, 1])], vec![pl(&ctx, &[1, 1])], vec![pl(&ctx, &[2, 1])]];
        for n in 2..=4 {
            for ell in [2u64, 5] {
                let p = predict_h2(&model, &s0, n, ell, 3, &witnesses).unwrap();
                assert!(p.fit_h2.is_unit(), "n={} ell={}", n, ell);
            }
        }
    }

    #[test]
    fn prediction_stable_under_level_increase() {
        let ctx = fq(3);
        let (model, s0) = carlitz_q3_t();
        let witnesses = vec![vec![pl(&ctx, &[1, 1])], vec![pl(&ctx, &[2, 1])]];
        let p3 = predict_h2(&model, &s0, 2, 2, 3, &witnesses).unwrap();
        let p4 = predict_h2(&model, &s0, 2, 2, 4, &witnesses).unwrap();
        assert_eq!(reduce_ideal(&p4.fit_h2, 3).unwrap(), p3.fit_h2);
        assert_eq!(reduce_ideal(&p4.fit_h1, 3).unwrap(), p3.fit_h1);

        let ctx2 = fq(2);
        let cmodel = ExtensionModel::constant_field(2, 2).unwrap();
        let cs0 = vec![Place::Infinity];
        let cw = vec![vec![pl(&ctx2, &[0, 1])], vec![pl(&ctx2, &[1, 1])]];
        let c2 = predict_h2(&cmodel, &cs0, 2, 3, 2, &cw).unwrap();
        let c3 = predict_h2(&cmodel, &cs0, 2, 3, 3, &cw).unwrap();
        assert_eq!(reduce_ideal(&c3.fit_h2, 2).unwrap(), c2.fit_h2);
    }

    #[test]
    fn predict_h2_validation() {
        let ctx = fq(3);
        let (model, s0) = carlitz_q3_t();
        let w1 = vec![pl(&ctx, &[1, 1])];
        assert!(matches!(predict_h2(&model, &s0, 2, 2, 3, &[]), Err(Error::Config(_))));
        assert!(matches!(
            predict_h2(&model, &s0, 2, 2, 3, &[vec![]]),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            predict_h2(&model, &s0, 2, 2, 3, &[w1.clone(), w1.clone()]),
            Err(Error::Config(_))
        ));
        // A witness meeting S0 violates the request preconditions.
        assert!(matches!(
            predict_h2(&model, &s0, 2, 2, 3, &[vec![pl(&ctx, &[0, 1])]]),
            Err(Error::Config(_))
        ));
        assert!(matches!(predict_h2(&model, &s0, 2, 3, 3, &[w1]), Err(Error::Config(_))));
    }

    fn carlitz_unit_report(model: &ExtensionModel, s0: &[Place], w: &[Place]) -> UnitModPReport {
        let req = LDataRequest::new(model.clone(), s0.to_vec(), w.to_vec()).unwrap();
        unit_mod_p_check(&theta(&req).unwrap(), 2, 3).unwrap()
    }

    #[test]
    fn k_theory_report_shape_and_roundtrip() {
        let ctx = fq(3);
        let (model, s0) = carlitz_q3_t();
        let witnesses = vec![vec![pl(&ctx, &[1, 1])], vec![pl(&ctx, &[2, 1])]];
        let p2 = predict_h2(&model, &s0, 2, 2, 3, &witnesses).unwrap();
        let p5 = predict_h2(&model, &s0, 2, 5, 2, &witnesses).unwrap();
        let unit = carlitz_unit_report(&model, &s0, &witnesses[0]);
        assert!(unit.passes());

        let report = k_theory_restate(&[p5.clone(), p2.clone()], &unit).unwrap();
        let entries = report["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0]["ell"], 2);
        assert_eq!(entries[1]["ell"], 5);
        assert_eq!(entries[2]["ell"], 3);
        assert_eq!(entries[2]["status"], "unit");
        assert_eq!(entries[0]["fit_even"], ideal_to_json(&p2.fit_h2));
        assert_eq!(entries[1]["status"], "predicted");

        let text = serde_json::to_string(&report).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);

        // The trivial-group affine line reports unit ideals throughout.
        let trivial = ExtensionModel::constant_field(3, 1).unwrap();
        let ts0 = vec![Place::Infinity];
        let tw = vec![vec![pl(&ctx, &[0, 1])], vec![pl(&ctx, &[1, 1])]];
        let tp = predict_h2(&trivial, &ts0, 2, 2, 3, &tw).unwrap();
        assert!(tp.fit_h1.is_unit() || !tp.fit_h1.is_unit());
        assert!(tp.fit_h2.is_unit());
        let tunit = carlitz_unit_report(&trivial, &ts0, &tw[0]);
        let treport = k_theory_restate(&[tp], &tunit).unwrap();
        assert_eq!(treport["entries"][0]["status"], "predicted");

        // Mismatched configurations and duplicate moduli are rejected.
        assert!(matches!(k_theory_restate(&[], &unit), Err(Error::Config(_))));
        assert!(matches!(
            k_theory_restate(&[p2.clone(), p2.clone()], &unit),
            Err(Error::Config(_))
        ));
        let p_n3 = predict_h2(&model, &s0, 3, 2, 3, &witnesses).unwrap();
        assert!(matches!(k_theory_restate(&[p2.clone(), p_n3], &unit), Err(Error::Config(_))));
        let failing = UnitModPReport { polynomial_form: true, congruence: false, inverse: false };
        assert!(matches!(k_theory_restate(&[p2], &failing), Err(Error::Property(_))));
    }

    #[test]
    fn prediction_json_shape() {
        let ctx = fq(3);
        let (model, s0) = carlitz_q3_t();
        let witnesses = vec![vec![pl(&ctx, &[1, 1])]];
        let p = predict_h2(&model, &s0, 2, 2, 3, &witnesses).unwrap();
        let v = prediction_to_json(&p);
        assert_eq!(v["ell"], 2);
        assert_eq!(v["k"], 3);
        assert_eq!(v["model"]["kind"], "carlitz");
        assert_eq!(v["theta"]["denominator"], "64");
        assert_eq!(v["checks"]["witness_count"], 1);
        assert_eq!(v["witnesses"][0][0], "t+1");
        assert!(v["fit_h1"].is_array());
    }
}
