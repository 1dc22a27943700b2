//! Exact expectations E_w[f] as rational functions of n.
//!
//! For a single multi-partition the expectation is a sum over the quotients
//! of the graph whose cycles spell w^(lambda_i): each quotient contributes the
//! G-expectation of the labels along the image cycles, times
//! (n)_V / prod_b (n)_{E_b} with V the image vertex count and E_b its number
//! of b-edges.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use super::stable::{Monomial, StableFunction};
use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Poly, Rational, RationalFunction};
use crate::freegrp::{enumerate_partitions, quotient_by, CycleGraph, QuotientCaps, Word};
use crate::groups::{ClassFunction, ClassHistogram, FiniteGroup, DEFAULT_GROUP_MUL_BUDGET};
use crate::par;
use crate::whitehead::reduced_non_power;

/// Limits for one expectation computation.
#[derive(Clone, Copy, Debug)]
pub struct EngineCaps {
    pub quotients: QuotientCaps,
    /// Per-quotient cap on group multiplications.
    pub group_mul_budget: u64,
}

impl Default for EngineCaps {
    fn default() -> Self {
        EngineCaps { quotients: QuotientCaps::default(), group_mul_budget: DEFAULT_GROUP_MUL_BUDGET }
    }
}

#[derive(Clone, Debug)]
pub struct ExpectationResult {
    pub value: RationalFunction,
    pub quotient_count: usize,
    /// The rational function is guaranteed to agree with E_w[f] for n >= this.
    pub valid_from: u64,
    pub word: String,
    pub group: String,
    terms: FactoredSum,
}

impl ExpectationResult {
    /// The exact value at a specific n, summing only quotients with at most n
    /// vertices. Agrees with `value` for n >= `valid_from`, and unlike it is
    /// also correct below that threshold.
    pub fn evaluate_finite(&self, n: u64) -> Cyclo {
        self.terms.evaluate_finite(n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word,
            "group": self.group,
            "value": serde_json::to_value(self.value.to_json()).expect("json"),
            "display": self.value.to_string(),
            "quotientCount": self.quotient_count,
            "validFrom": self.valid_from,
        })
    }
}

/// Sum of c * (n)_V / prod_b (n)_{E_b}, keyed by (V, sorted nonzero E_b).
#[derive(Clone, Debug, Default)]
pub(crate) struct FactoredSum {
    terms: BTreeMap<(u32, Vec<u32>), Cyclo>,
}

impl FactoredSum {
    pub(crate) fn add(&mut self, v: u32, mut eb: Vec<u32>, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        eb.retain(|&e| e > 0);
        eb.sort_unstable_by(|a, b| b.cmp(a));
        let e = self.terms.entry((v, eb)).or_insert_with(Cyclo::zero);
        *e = &*e + &c;
    }

    fn evaluate_finite(&self, n: u64) -> Cyclo {
        let ff = |t: u32| (0..t as u64).fold(num_bigint::BigInt::from(1), |acc, j| acc * (n - j));
        let mut acc = Cyclo::zero();
        for ((v, eb), c) in &self.terms {
            // no embedding of a graph with more than n vertices; E_b <= V <= n below
            if *v as u64 > n {
                continue;
            }
            let den = eb.iter().fold(num_bigint::BigInt::from(1), |acc, &e| acc * ff(e));
            acc = acc + c.scale(&Rational::new(ff(*v), den));
        }
        acc
    }

    fn merge_scaled(&mut self, other: &FactoredSum, s: &Cyclo) {
        for ((v, eb), c) in &other.terms {
            self.add(*v, eb.clone(), c * s);
        }
    }

    pub(crate) fn into_rational_function(self) -> RationalFunction {
        let terms: Vec<_> = self.terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            return RationalFunction::zero();
        }
        // (n - j) occurs in prod_b (n)_{E_b} once per b with E_b > j.
        let mult = |eb: &[u32], j: u32| eb.iter().filter(|&&e| e > j).count() as u32;
        let top = terms.iter().map(|((_, eb), _)| eb.first().copied().unwrap_or(0)).max().unwrap_or(0);
        let common: Vec<u32> = (0..top).map(|j| terms.iter().map(|((_, eb), _)| mult(eb, j)).max().unwrap_or(0)).collect();
        let mut num = Poly::zero();
        for ((v, eb), c) in &terms {
            let mut p = Poly::falling_factorial(*v).scale(c);
            for (j, &m) in common.iter().enumerate() {
                for _ in mult(eb, j as u32)..m {
                    p = p.mul_linear(j as i64);
                }
            }
            num = num.add(&p);
        }
        let roots: Vec<(i64, u32)> = common.iter().enumerate().map(|(j, &m)| (j as i64, m)).filter(|r| r.1 > 0).collect();
        RationalFunction::over_linear_factors(num, &roots)
    }
}

/// Runs the quotient sum once over the cycle graph of `words`, for several
/// labelings of its cycles by irreducible characters.
pub(crate) fn icl_sums(
    group: &FiniteGroup,
    words: &[Word],
    labelings: &[Vec<usize>],
    caps: &EngineCaps,
) -> Result<(Vec<FactoredSum>, usize)> {
    let src = CycleGraph::from_words(words)?;
    let parts = enumerate_partitions(&src.graph, caps.quotients)?;
    let chars: Vec<Vec<&ClassFunction>> = labelings
        .iter()
        .map(|lab| lab.iter().map(|&phi| group.character(phi)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let all_trivial = labelings.iter().all(|lab| lab.iter().all(|&phi| phi == 0));
    let per = par::map(&parts, |p| -> Result<(u32, Vec<u32>, Vec<Cyclo>)> {
        let q = quotient_by(&src, p)?;
        let vals = if all_trivial {
            vec![Cyclo::one(); labelings.len()]
        } else {
            let hist = ClassHistogram::build(group, &q.image, &q.paths, caps.group_mul_budget)?;
            chars.iter().map(|fs| hist.expectation(fs)).collect()
        };
        Ok((q.block_count() as u32, q.image.label_counts(), vals))
    });
    let mut sums = vec![FactoredSum::default(); labelings.len()];
    for r in per {
        let (v, eb, vals) = r?;
        for (s, c) in sums.iter_mut().zip(vals) {
            s.add(v, eb.clone(), c);
        }
    }
    Ok((sums, parts.len()))
}

fn cyclic_core_nonempty(w: &Word) -> Result<Word> {
    let (core, _) = w.cyclic_reduce();
    if core.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(core)
}

/// E_w[sInd(lambda)] for a cyclically reduced non-power w.
pub fn expect_sind(w: &Word, lambda: &Monomial, group: &FiniteGroup, caps: &EngineCaps) -> Result<ExpectationResult> {
    let core = reduced_non_power(w)?;
    let f = StableFunction::sind(lambda.clone());
    let mut r = expect_reduced(&core, &f, group, caps)?;
    r.word = w.to_string();
    Ok(r)
}

/// E_w[f] for any nonempty word; powers u^k go through f^(k) on u.
pub fn expect_stable(w: &Word, f: &StableFunction, group: &FiniteGroup, caps: &EngineCaps) -> Result<ExpectationResult> {
    let core = cyclic_core_nonempty(w)?;
    let (u, k) = core.power_decompose()?;
    let twisted = f.power_twist(k, group)?;
    let mut r = expect_reduced(&u, &twisted, group, caps)?;
    r.word = w.to_string();
    r.valid_from = f.degree() as u64 * core.len() as u64;
    Ok(r)
}

fn expect_reduced(u: &Word, f: &StableFunction, group: &FiniteGroup, caps: &EngineCaps) -> Result<ExpectationResult> {
    let f = f.to_sind(group)?;
    // One quotient enumeration per underlying partition.
    let mut by_shape: BTreeMap<Vec<u32>, Vec<(Vec<usize>, Cyclo)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        by_shape.entry(m.sizes()).or_default().push((m.labels(), c.clone()));
    }
    let mut total = FactoredSum::default();
    let mut count = 0;
    for (shape, terms) in by_shape {
        if shape.is_empty() {
            for (_, c) in terms {
                total.add(0, vec![], c);
            }
            continue;
        }
        let words: Vec<Word> = shape.iter().map(|&s| u.pow(s as i64)).collect();
        let labelings: Vec<Vec<usize>> = terms.iter().map(|t| t.0.clone()).collect();
        let (sums, n) = icl_sums(group, &words, &labelings, caps)?;
        count += n;
        for (s, (_, c)) in sums.iter().zip(&terms) {
            total.merge_scaled(s, c);
        }
    }
    Ok(ExpectationResult {
        value: total.clone().into_rational_function(),
        terms: total,
        quotient_count: count,
        valid_from: f.degree() as u64 * u.len() as u64,
        word: u.to_string(),
        group: group.name().to_string(),
    })
}

/// E[prod_i Ind(phi_i)(w_i)] for a joint family of nonempty words.
pub fn expect_multiword(words: &[(Word, usize)], group: &FiniteGroup, caps: &EngineCaps) -> Result<ExpectationResult> {
    if words.is_empty() {
        return Err(Error::Domain("no words".into()));
    }
    let mut cores = Vec::new();
    let mut labels = Vec::new();
    for (w, phi) in words {
        cores.push(cyclic_core_nonempty(w)?);
        labels.push(*phi);
    }
    let (mut sums, count) = icl_sums(group, &cores, &[labels], caps)?;
    let total = sums.remove(0);
    let text: Vec<String> = words.iter().map(|(w, phi)| format!("{w}:phi{phi}")).collect();
    Ok(ExpectationResult {
        value: total.clone().into_rational_function(),
        terms: total,
        quotient_count: count,
        valid_from: cores.iter().map(|w| w.len() as u64).sum(),
        word: text.join(","),
        group: group.name().to_string(),
    })
}

/// Cache of <sInd(lambda), 1> values, shared across inner-product calls.
#[derive(Debug)]
pub struct InnerCache<'g> {
    group: &'g FiniteGroup,
    caps: EngineCaps,
    one: HashMap<Monomial, Cyclo>,
}

impl<'g> InnerCache<'g> {
    pub fn new(group: &'g FiniteGroup, caps: EngineCaps) -> InnerCache<'g> {
        InnerCache { group, caps, one: HashMap::new() }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    /// <sInd(lambda), 1>, via the rank-one word a where every L-factor is 1.
    pub fn one(&mut self, lambda: &Monomial) -> Result<Cyclo> {
        if lambda.is_one() {
            return Ok(Cyclo::one());
        }
        if let Some(v) = self.one.get(lambda) {
            return Ok(v.clone());
        }
        let a = Word::generator(1, 1);
        let words: Vec<Word> = lambda.sizes().iter().map(|&s| a.pow(s as i64)).collect();
        let (mut sums, _) = icl_sums(self.group, &words, &[lambda.labels()], &self.caps)?;
        let rf = sums.remove(0).into_rational_function();
        let v = rf
            .as_constant()
            .ok_or_else(|| Error::Domain(format!("internal: rank-one expectation {rf} is not constant")))?;
        self.one.insert(lambda.clone(), v.clone());
        Ok(v)
    }

    /// <s(tau), phi>_G where s(tau)(g) = prod_p zeta_p(g^|p|).
    pub fn summary_inner(&self, tau: &Monomial, phi: usize) -> Result<Cyclo> {
        let g = self.group;
        let chi = g.character(phi)?;
        let mut vals = Vec::with_capacity(g.class_count());
        for c in 0..g.class_count() {
            let mut v = Cyclo::one();
            for &(k, psi) in tau.parts() {
                v = &v * g.character(psi)?.at(g.power_class(c, k as i64));
            }
            vals.push(v);
        }
        g.inner_product(&ClassFunction::new(vals), chi)
    }

    /// Terms of <sInd(lambda), Ind phi> by the subset of parts restricted to
    /// the last point: (mask, <sInd(rest), 1>, <s(subset), phi>).
    pub fn indphi_terms(&mut self, lambda: &Monomial, phi: usize) -> Result<Vec<(u64, Cyclo, Cyclo)>> {
        if lambda.len() > 20 {
            return Err(Error::CapExceeded { what: "parts in a multi-partition", limit: 20, reached: lambda.len() as u64 });
        }
        let mut out = Vec::new();
        for mask in 0..(1u64 << lambda.len()) {
            let (tau, rest) = lambda.split(mask);
            let s = self.summary_inner(&tau, phi)?;
            out.push((mask, self.one(&rest)?, s));
        }
        Ok(out)
    }

    /// <sInd(lambda), Ind phi>.
    pub fn indphi(&mut self, lambda: &Monomial, phi: usize) -> Result<Cyclo> {
        Ok(self.indphi_terms(lambda, phi)?.into_iter().map(|(_, a, b)| &a * &b).sum())
    }

    pub fn inner_one(&mut self, f: &StableFunction) -> Result<Cyclo> {
        let f = f.to_sind(self.group)?;
        let mut acc = Cyclo::zero();
        for (m, c) in f.terms() {
            acc = acc + c * &self.one(m)?;
        }
        Ok(acc)
    }

    /// <f, chi_phi> with chi_phi = Ind phi - 1_{phi = 1}.
    pub fn chi(&mut self, f: &StableFunction, phi: usize) -> Result<Cyclo> {
        let f = f.to_sind(self.group)?;
        let mut acc = Cyclo::zero();
        for (m, c) in f.terms() {
            let mut v = self.indphi(m, phi)?;
            if phi == 0 {
                v = v - self.one(m)?;
            }
            acc = acc + c * &v;
        }
        Ok(acc)
    }

    /// <f, h> = <f conj(h), 1>.
    pub fn inner(&mut self, f: &StableFunction, h: &StableFunction) -> Result<Cyclo> {
        let g = self.group;
        let prod = f.to_sind(g)?.mul(&h.conj(g)?.to_sind(g)?, g)?;
        self.inner_one(&prod)
    }
}

pub fn stable_inner_one(lambda: &Monomial, group: &FiniteGroup, caps: &EngineCaps) -> Result<Cyclo> {
    InnerCache::new(group, *caps).one(lambda)
}

pub fn stable_inner_indphi(lambda: &Monomial, phi: usize, group: &FiniteGroup, caps: &EngineCaps) -> Result<Cyclo> {
    InnerCache::new(group, *caps).indphi(lambda, phi)
}

pub fn stable_inner_chi(f: &StableFunction, phi: usize, group: &FiniteGroup, caps: &EngineCaps) -> Result<Cyclo> {
    InnerCache::new(group, *caps).chi(f, phi)
}

pub fn stable_inner(f: &StableFunction, h: &StableFunction, group: &FiniteGroup, caps: &EngineCaps) -> Result<Cyclo> {
    InnerCache::new(group, *caps).inner(f, h)
}
