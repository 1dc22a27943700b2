//! Expectations of class functions along closed paths of a graph under a
//! uniformly random anti-symmetric labelling of its edges by group elements.
//!
//! Per component the labelling is trivial on a spanning tree and free on the
//! remaining edges, so the expectation is an average over |G|^rank
//! assignments. The enumeration records how often each tuple of path classes
//! occurs; several class-function loads on the same paths then reuse it.

use std::collections::HashMap;

use super::{ClassFunction, FiniteGroup};
use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Rational};
use crate::freegrp::{MultiCoreGraph, Step, Word};

pub const DEFAULT_GROUP_MUL_BUDGET: u64 = 100_000_000;

/// A closed path and the class function evaluated on its holonomy.
#[derive(Clone, Copy, Debug)]
pub struct PathLoad<'a> {
    pub path: &'a [Step],
    pub f: &'a ClassFunction,
}

#[derive(Clone, Debug)]
struct ComponentCounts {
    paths: Vec<usize>,
    total: u64,
    counts: HashMap<Vec<u16>, u64>,
}

/// Joint distribution of the classes of path holonomies, per component.
#[derive(Clone, Debug)]
pub struct ClassHistogram {
    comps: Vec<ComponentCounts>,
    npaths: usize,
}

impl ClassHistogram {
    pub fn build(group: &FiniteGroup, graph: &MultiCoreGraph, paths: &[Vec<Step>], budget: u64) -> Result<ClassHistogram> {
        let basis = graph.spanning_basis();
        let mut by_comp: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, p) in paths.iter().enumerate() {
            if p.is_empty() {
                return Err(Error::Domain("empty path".into()));
            }
            by_comp.entry(basis.component_of_path(p)).or_default().push(i);
        }
        let m = group.order() as u64;
        let mut comp_keys: Vec<usize> = by_comp.keys().copied().collect();
        comp_keys.sort_unstable();
        let mut cost = 0u64;
        for &c in &comp_keys {
            let k = basis.component_rank(c) as u32;
            let len: u64 = by_comp[&c].iter().map(|&i| paths[i].len() as u64).sum::<u64>() + 1;
            let count = m.checked_pow(k).unwrap_or(u64::MAX);
            cost = cost.saturating_add(count.saturating_mul(len));
        }
        if cost > budget {
            return Err(Error::CapExceeded { what: "graph expectation group multiplications", limit: budget, reached: cost });
        }
        let mut comps = Vec::new();
        for c in comp_keys {
            let ids = by_comp.remove(&c).expect("key");
            let words: Vec<Vec<i32>> = ids.iter().map(|&i| basis.path_letters(&paths[i])).collect();
            let k = basis.component_rank(c);
            comps.push(enumerate_component(group, k, &words, ids));
        }
        Ok(ClassHistogram { comps, npaths: paths.len() })
    }

    /// E[prod_j f_j(class of path j)] with `fs` indexed like the paths.
    pub fn expectation(&self, fs: &[&ClassFunction]) -> Cyclo {
        assert_eq!(fs.len(), self.npaths, "one class function per path");
        let mut acc = Cyclo::one();
        for comp in &self.comps {
            let mut s = Cyclo::zero();
            // Deterministic order so repeated runs give identical sums.
            let mut keys: Vec<(&Vec<u16>, &u64)> = comp.counts.iter().collect();
            keys.sort_unstable();
            for (key, &cnt) in keys {
                let mut term = Cyclo::from_int(cnt as i64);
                for (j, &cls) in key.iter().enumerate() {
                    term = &term * fs[comp.paths[j]].at(cls as usize);
                    if term.is_zero() {
                        break;
                    }
                }
                s = s + term;
            }
            acc = &acc * &s.scale(&Rational::new(1.into(), (comp.total as i64).into()));
            if acc.is_zero() {
                break;
            }
        }
        acc
    }
}

fn enumerate_component(group: &FiniteGroup, k: usize, words: &[Vec<i32>], paths: Vec<usize>) -> ComponentCounts {
    let t = &group.table;
    let m = group.order() as u32;
    let mut assign = vec![0u32; k + 1];
    let mut counts: HashMap<Vec<u16>, u64> = HashMap::new();
    let mut total = 0u64;
    let mut key = vec![0u16; words.len()];
    loop {
        for (j, w) in words.iter().enumerate() {
            let mut x = t.identity;
            for &l in w {
                let g = assign[l.unsigned_abs() as usize];
                x = t.mul(x, if l > 0 { g } else { t.inv(g) });
            }
            key[j] = group.class_of(x) as u16;
        }
        *counts.entry(key.clone()).or_insert(0) += 1;
        total += 1;
        // odometer over generators 1..=k
        let mut i = 1;
        while i <= k {
            assign[i] += 1;
            if assign[i] < m {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if i > k {
            break;
        }
    }
    ComponentCounts { paths, total, counts }
}

/// E over uniform anti-symmetric labellings of prod_j f_j(holonomy of path j).
pub fn graph_expectation(group: &FiniteGroup, graph: &MultiCoreGraph, loads: &[PathLoad<'_>], budget: u64) -> Result<Cyclo> {
    let paths: Vec<Vec<Step>> = loads.iter().map(|l| l.path.to_vec()).collect();
    let h = ClassHistogram::build(group, graph, &paths, budget)?;
    let fs: Vec<&ClassFunction> = loads.iter().map(|l| l.f).collect();
    Ok(h.expectation(&fs))
}

/// Closed form for G = Z/m and the faithful character x -> zeta_m^x:
/// the expectation is 1 when every signed letter count is divisible by m.
pub fn cyclic_expectation_closed_form(w: &Word, m: u32) -> Rational {
    let ok = w.abelian_counts().iter().all(|&c| c.rem_euclid(m as i64) == 0);
    Rational::from_integer(if ok { 1 } else { 0 }.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegrp::{build_w_graph, enumerate_quotients, QuotientCaps};

    #[test]
    fn commutator_on_bouquet_with_standard_character() {
        let g = FiniteGroup::sym3();
        let w = Word::parse_auto("abAB").unwrap();
        let src = build_w_graph(&w, &[1]).unwrap();
        let qs = enumerate_quotients(&src, QuotientCaps::default()).unwrap();
        let bouquet = qs.iter().find(|q| q.block_count() == 1).unwrap();
        let std = g.character(2).unwrap();
        let e = graph_expectation(&g, &bouquet.image, &[PathLoad { path: &bouquet.paths[0], f: std }], DEFAULT_GROUP_MUL_BUDGET).unwrap();
        assert_eq!(e, Cyclo::from_frac(1, 2));
        // identity quotient: a single cycle
        let id = &qs[0];
        let sgn = g.character(1).unwrap();
        let e = graph_expectation(&g, &id.image, &[PathLoad { path: &id.paths[0], f: sgn }], DEFAULT_GROUP_MUL_BUDGET).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGroup::sym3();
        let src = build_w_graph(&Word::parse_auto("abAB").unwrap(), &[1]).unwrap();
        let qs = enumerate_quotients(&src, QuotientCaps::default()).unwrap();
        let bouquet = qs.iter().find(|q| q.block_count() == 1).unwrap();
        let std = g.character(2).unwrap();
        let r = graph_expectation(&g, &bouquet.image, &[PathLoad { path: &bouquet.paths[0], f: std }], 10);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn closed_form_examples() {
        let w = |s: &str| Word::parse_auto(s).unwrap();
        assert_eq!(cyclic_expectation_closed_form(&w("aabb"), 2), Rational::from_integer(1.into()));
        assert_eq!(cyclic_expectation_closed_form(&w("a"), 2), Rational::from_integer(0.into()));
        assert_eq!(cyclic_expectation_closed_form(&w("abAB"), 7), Rational::from_integer(1.into()));
    }
}
