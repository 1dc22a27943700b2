//! Predicted leading terms of E_w[f] and checks of the exact series against
//! them.

use serde_json::{json, Value};

use super::icl::{expect_stable, EngineCaps, InnerCache};
use super::stable::{Monomial, StableFunction};
use crate::error::Result;
use crate::exactnum::{Cyclo, CycloJson, LaurentSeries};
use crate::freegrp::Word;
use crate::groups::FiniteGroup;
use crate::whitehead::{critical_pi_value, primitivity_rank, reduced_non_power, Pi, RankCaps};

/// Extra Laurent terms past n^(1 - pi) shown by default.
pub const DEFAULT_EXTRA_TERMS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    /// Coefficient of n^0: <f, 1>.
    pub c0: Cyclo,
    /// Coefficient of n^(1 - pi): sum_phi <f, chi_phi> C^pi_phi(w).
    pub c_sub: Cyclo,
    pub pi: Pi,
    pub crit_count: usize,
}

fn rank_caps(caps: &EngineCaps) -> RankCaps {
    RankCaps { quotients: caps.quotients, group_mul_budget: caps.group_mul_budget, ..RankCaps::default() }
}

/// c0, c_sub and pi for a non-power w.
pub fn predicted_expansion(w: &Word, f: &StableFunction, group: &FiniteGroup, caps: &EngineCaps) -> Result<Prediction> {
    let w = reduced_non_power(w)?;
    let rcaps = rank_caps(caps);
    let crit = primitivity_rank(&w, &rcaps)?;
    let mut inner = InnerCache::new(group, *caps);
    let c0 = inner.inner_one(f)?;
    let mut c_sub = Cyclo::zero();
    if crit.pi != Pi::Infinite {
        for phi in 0..group.irreducible_count() {
            let a = inner.chi(f, phi)?;
            if a.is_zero() {
                continue;
            }
            c_sub = c_sub + &a * &critical_pi_value(&crit, phi, group, &rcaps)?;
        }
    }
    Ok(Prediction { c0, c_sub, pi: crit.pi, crit_count: crit.critical.len() })
}

#[derive(Clone, Debug)]
pub struct CoeffRow {
    pub power: i64,
    pub actual: Cyclo,
    /// None where the prediction says nothing.
    pub expected: Option<Cyclo>,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub word: String,
    /// Non-power root the check ran on, and the exponent it was raised to.
    pub root: String,
    pub exponent: u32,
    pub truncation: usize,
    pub prediction: Prediction,
    pub series: LaurentSeries,
    pub rows: Vec<CoeffRow>,
    pub pass: bool,
}

fn cyclo_json(c: &Cyclo) -> Value {
    serde_json::to_value(CycloJson::from(c)).expect("json")
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "power": r.power,
                    "actual": cyclo_json(&r.actual),
                    "expected": r.expected.as_ref().map(cyclo_json),
                    "ok": r.ok,
                })
            })
            .collect();
        json!({
            "word": self.word,
            "root": self.root,
            "exponent": self.exponent,
            "pi": self.prediction.pi.to_json(),
            "critCount": self.prediction.crit_count,
            "c0": cyclo_json(&self.prediction.c0),
            "cSub": cyclo_json(&self.prediction.c_sub),
            "truncation": self.truncation,
            "series": self.series.to_string(),
            "rows": rows,
            "pass": self.pass,
        })
    }
}

/// Compares the exact Laurent series of E_w[f] down to n^(-K) with the
/// predicted c0 and c_sub. Powers are handled through f^(k) on the root.
pub fn verify_main_theorem(
    w: &Word,
    f: &StableFunction,
    group: &FiniteGroup,
    truncation: Option<usize>,
    caps: &EngineCaps,
) -> Result<VerifyReport> {
    let (core, _) = w.cyclic_reduce();
    let (u, k) = core.power_decompose()?;
    let f_u = f.power_twist(k, group)?;
    let pred = predicted_expansion(&u, &f_u, group, caps)?;
    let depth = truncation.unwrap_or_else(|| match pred.pi {
        Pi::Finite(p) => p as usize + DEFAULT_EXTRA_TERMS,
        Pi::Infinite => DEFAULT_EXTRA_TERMS,
    });
    let value = expect_stable(&u, &f_u, group, caps)?.value;
    let lead = value.order_at_infinity().unwrap_or(0);
    let series = value.laurent_expand((lead.max(0) as usize) + depth);
    let coeff = |e: i64| series.coeff_of_power(e).unwrap_or_else(Cyclo::zero);
    let mut rows = Vec::new();
    for e in (1..=lead).rev() {
        let a = coeff(e);
        rows.push(CoeffRow { power: e, ok: a.is_zero(), actual: a, expected: Some(Cyclo::zero()) });
    }
    let sub_power = pred.pi.finite().map(|p| 1 - p as i64);
    for e in (-(depth as i64)..=0).rev() {
        let expected = if e == 0 {
            Some(pred.c0.clone())
        } else {
            match sub_power {
                Some(s) if e > s => Some(Cyclo::zero()),
                Some(s) if e == s => Some(pred.c_sub.clone()),
                Some(_) => None,
                // constant expectation for primitive words
                None => Some(Cyclo::zero()),
            }
        };
        let a = coeff(e);
        let ok = expected.as_ref().is_none_or(|x| *x == a);
        rows.push(CoeffRow { power: e, actual: a, expected, ok });
    }
    let pass = rows.iter().all(|r| r.ok);
    Ok(VerifyReport {
        word: w.to_string(),
        root: u.to_string(),
        exponent: k,
        truncation: depth,
        prediction: pred,
        series,
        rows,
        pass,
    })
}

#[derive(Clone, Debug)]
pub struct BoundRow {
    pub p: usize,
    pub coeff_abs: f64,
    pub bound: f64,
    pub ok: bool,
}

/// |a_p| <= s_lambda(1) T^(2(l(lambda) + p)) with T = |w| ||lambda||, for
/// the coefficient a_p of n^(-p) in E_w[sInd(lambda)], p = 0..=K.
pub fn coefficient_bound_check(
    w: &Word,
    lambda: &Monomial,
    group: &FiniteGroup,
    truncation: usize,
    caps: &EngineCaps,
) -> Result<Vec<BoundRow>> {
    let (core, _) = w.cyclic_reduce();
    let value = expect_stable(&core, &StableFunction::sind(lambda.clone()), group, caps)?.value;
    let lead = value.order_at_infinity().unwrap_or(0).max(0) as usize;
    let series = value.laurent_expand(lead + truncation);
    let mut dim = 1.0;
    for &(_, phi) in lambda.parts() {
        dim *= group.character(phi)?.at(0).abs_f64();
    }
    let t = (core.len() as u32 * lambda.degree()) as f64;
    let mut rows = Vec::new();
    for p in 0..=truncation {
        let a = series.coeff_of_power(-(p as i64)).map(|c| c.abs_f64()).unwrap_or(0.0);
        let bound = dim * t.powi(2 * (lambda.len() + p) as i32);
        rows.push(BoundRow { p, coeff_abs: a, bound, ok: a <= bound * (1.0 + 1e-9) });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse_auto(s).unwrap()
    }

    #[test]
    fn squares_and_commutator() {
        let caps = EngineCaps::default();
        let one = FiniteGroup::trivial();
        let f = StableFunction::ind(0);
        let p = predicted_expansion(&w("aabb"), &f, &one, &caps).unwrap();
        assert_eq!((p.c0, p.c_sub, p.pi), (Cyclo::one(), Cyclo::one(), Pi::Finite(2)));
        let r = verify_main_theorem(&w("abAB"), &f, &one, None, &caps).unwrap();
        assert!(r.pass, "{:?}", r.rows);
        let c2 = FiniteGroup::cyclic(2);
        let r = verify_main_theorem(&w("aabb"), &StableFunction::ind_power(1, 2), &c2, None, &caps).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn bound_on_commutator() {
        let rows = coefficient_bound_check(&w("abAB"), &Monomial::single(1, 0), &FiniteGroup::trivial(), 5, &EngineCaps::default()).unwrap();
        assert!(rows.iter().all(|r| r.ok && r.coeff_abs == 1.0));
        assert_eq!(rows[0].bound, 16.0);
    }
}
