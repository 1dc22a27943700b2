//! Primitivity data of a word: primitivity rank, critical subgroups, and their
//! twisted analogues for an irreducible character.
//!
//! Every subgroup containing w that could be critical is the image of a
//! quotient of the cycle graph of w, so the search runs over that finite set:
//! the rank of a quotient is 1 - chi of its image, and primitivity of the image
//! of w is decided by Whitehead reduction in the spanning-tree basis.

mod auto;

pub use auto::{cyclic_core, is_primitive, min_cyclic_length, whitehead_autos, WhiteheadAuto};

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, CycloJson};
use crate::freegrp::{build_w_graph, enumerate_quotients, QuotientCaps, QuotientClass, Word};
use crate::groups::{graph_expectation, FiniteGroup, PathLoad};
use crate::par;

/// Largest subgroup rank on which primitivity is decided.
pub const MAX_WHITEHEAD_RANK: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pi {
    Finite(u32),
    Infinite,
}

impl Pi {
    pub fn finite(self) -> Option<u32> {
        match self {
            Pi::Finite(k) => Some(k),
            Pi::Infinite => None,
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            Pi::Finite(k) => json!(k),
            Pi::Infinite => json!("inf"),
        }
    }
}

impl fmt::Display for Pi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pi::Finite(k) => write!(f, "{k}"),
            Pi::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalSubgroup {
    pub quotient: QuotientClass,
    pub rank: usize,
    /// Image of w in the spanning-tree basis of the subgroup.
    pub w_word: Word,
    /// E_{w -> H}[phi] for the requested character (1 for the trivial one).
    pub expectation: Cyclo,
}

#[derive(Clone, Debug)]
pub struct CritReport {
    pub pi: Pi,
    pub critical: Vec<CriticalSubgroup>,
    /// Character index the report refers to; 0 is the trivial character.
    pub phi: usize,
}

impl CritReport {
    pub fn to_json(&self) -> Value {
        let crit: Vec<Value> = self
            .critical
            .iter()
            .map(|c| {
                json!({
                    "rank": c.rank,
                    "image": c.quotient.image.dump(),
                    "w_word": c.w_word.to_string(),
                    "expectation": serde_json::to_value(CycloJson::from(&c.expectation)).expect("json"),
                })
            })
            .collect();
        json!({ "pi": self.pi.to_json(), "phi": self.phi, "critical": crit })
    }
}

/// Limits for primitivity searches.
#[derive(Clone, Copy, Debug)]
pub struct RankCaps {
    pub quotients: QuotientCaps,
    pub max_rank: usize,
    pub group_mul_budget: u64,
}

impl Default for RankCaps {
    fn default() -> Self {
        RankCaps {
            quotients: QuotientCaps::default(),
            max_rank: MAX_WHITEHEAD_RANK,
            group_mul_budget: crate::groups::DEFAULT_GROUP_MUL_BUDGET,
        }
    }
}

struct Candidate {
    quotient: QuotientClass,
    rank: usize,
    w_word: Word,
}

/// Cyclically reduces w and rejects the empty word and proper powers.
pub fn reduced_non_power(w: &Word) -> Result<Word> {
    let (core, _) = w.cyclic_reduce();
    let (root, k) = core.power_decompose()?;
    if k > 1 {
        return Err(Error::ProperPower { word: w.to_string(), root: root.to_string(), exponent: k });
    }
    Ok(core)
}

fn candidates(w: &Word, caps: &RankCaps) -> Result<Vec<Candidate>> {
    let src = build_w_graph(w, &[1])?;
    let qs = enumerate_quotients(&src, caps.quotients)?;
    let mut out: Vec<Candidate> = qs
        .into_iter()
        .map(|q| {
            let basis = q.image.spanning_basis();
            let rank = basis.component_rank(0);
            let w_word = basis.path_word(&q.paths[0]);
            Candidate { quotient: q, rank, w_word }
        })
        .collect();
    out.sort_by_key(|c| c.rank);
    Ok(out)
}

/// pi(w) and Crit(w). Errors on the empty word and on proper powers.
pub fn primitivity_rank(w: &Word, caps: &RankCaps) -> Result<CritReport> {
    let w = reduced_non_power(w)?;
    let cands = candidates(&w, caps)?;
    let mut critical = Vec::new();
    let mut pi = Pi::Infinite;
    let mut start = 0;
    while start < cands.len() {
        let rank = cands[start].rank;
        let end = start + cands[start..].iter().take_while(|c| c.rank == rank).count();
        let level = &cands[start..end];
        if rank > caps.max_rank {
            return Err(Error::CapExceeded { what: "Whitehead rank", limit: caps.max_rank as u64, reached: rank as u64 });
        }
        let flags = par::map(level, |c| !is_primitive(&c.w_word, c.rank));
        for (c, nonprim) in level.iter().zip(flags) {
            if nonprim {
                critical.push(CriticalSubgroup {
                    quotient: c.quotient.clone(),
                    rank: c.rank,
                    w_word: c.w_word.clone(),
                    expectation: Cyclo::one(),
                });
            }
        }
        if !critical.is_empty() {
            pi = Pi::Finite(rank as u32);
            break;
        }
        start = end;
    }
    Ok(CritReport { pi, critical, phi: 0 })
}

fn expectation_on(group: &FiniteGroup, q: &QuotientClass, phi: usize, budget: u64) -> Result<Cyclo> {
    let f = group.character(phi)?;
    graph_expectation(group, &q.image, &[PathLoad { path: &q.paths[0], f }], budget)
}

/// pi_phi(w): the least rank of a subgroup H containing w with
/// E_{w->H}[phi] != 0, and the subgroups attaining it.
pub fn phi_rank(w: &Word, phi: usize, group: &FiniteGroup, caps: &RankCaps) -> Result<CritReport> {
    group.character(phi)?;
    if phi == 0 {
        return primitivity_rank(w, caps);
    }
    let w = reduced_non_power(w)?;
    let cands = candidates(&w, caps)?;
    let values = par::map(&cands, |c| expectation_on(group, &c.quotient, phi, caps.group_mul_budget));
    let mut critical = Vec::new();
    let mut pi = Pi::Infinite;
    for (c, v) in cands.iter().zip(values) {
        let v = v?;
        if v.is_zero() {
            continue;
        }
        match pi {
            Pi::Finite(r) if (c.rank as u32) > r => break,
            _ => {}
        }
        pi = Pi::Finite(c.rank as u32);
        critical.push(CriticalSubgroup { quotient: c.quotient.clone(), rank: c.rank, w_word: c.w_word.clone(), expectation: v });
    }
    Ok(CritReport { pi, critical, phi })
}

/// (C_phi, C^pi_phi): the sum of E_{w->H}[phi] over the phi-critical
/// subgroups, and over the critical subgroups Crit(w).
pub fn critical_values(w: &Word, phi: usize, group: &FiniteGroup, caps: &RankCaps) -> Result<(Cyclo, Cyclo)> {
    let crit = primitivity_rank(w, caps)?;
    let c_pi = critical_pi_value(&crit, phi, group, caps)?;
    let twisted = phi_rank(w, phi, group, caps)?;
    let c_phi = twisted.critical.iter().map(|c| c.expectation.clone()).sum();
    Ok((c_phi, c_pi))
}

/// C^pi_phi from an already computed Crit(w).
pub fn critical_pi_value(crit: &CritReport, phi: usize, group: &FiniteGroup, caps: &RankCaps) -> Result<Cyclo> {
    let vals = par::map(&crit.critical, |c| expectation_on(group, &c.quotient, phi, caps.group_mul_budget));
    Ok(vals.into_iter().collect::<Result<Vec<Cyclo>>>()?.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse_auto(s).unwrap()
    }

    #[test]
    fn table_of_small_words() {
        let caps = RankCaps::default();
        let r = primitivity_rank(&w("abAB"), &caps).unwrap();
        assert_eq!((r.pi, r.critical.len()), (Pi::Finite(2), 1));
        let r = primitivity_rank(&w("aabb"), &caps).unwrap();
        assert_eq!((r.pi, r.critical.len()), (Pi::Finite(2), 1));
        let r = primitivity_rank(&w("aabbcc"), &caps).unwrap();
        assert_eq!((r.pi, r.critical.len()), (Pi::Finite(3), 1));
        assert_eq!(primitivity_rank(&w("ab"), &caps).unwrap().pi, Pi::Infinite);
        assert!(matches!(primitivity_rank(&w("abab"), &caps), Err(Error::ProperPower { exponent: 2, .. })));
        assert!(matches!(primitivity_rank(&w(""), &caps), Err(Error::EmptyWord)));
    }

    #[test]
    fn twisted_ranks() {
        let caps = RankCaps::default();
        let c2 = FiniteGroup::cyclic(2);
        assert_eq!(phi_rank(&w("aabb"), 1, &c2, &caps).unwrap().pi, Pi::Finite(2));
        assert_eq!(phi_rank(&w("a"), 1, &c2, &caps).unwrap().pi, Pi::Infinite);
        let s3 = FiniteGroup::sym3();
        assert_eq!(phi_rank(&w("abAB"), 2, &s3, &caps).unwrap().pi, Pi::Finite(2));
        let one = FiniteGroup::trivial();
        assert_eq!(critical_values(&w("aabb"), 0, &one, &caps).unwrap().1, Cyclo::one());
        assert_eq!(critical_values(&w("aabb"), 1, &c2, &caps).unwrap().1, Cyclo::one());
        assert_eq!(critical_values(&w("abAB"), 1, &c2, &caps).unwrap().1, Cyclo::one());
    }
}
