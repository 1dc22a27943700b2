//! Acceptance run: one PASS/FAIL line per criterion. Exits 0 so the report
//! always lands in the test log; set ACCEPTANCE_STRICT=1 to exit 1 on any FAIL.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use wreath_core::exactnum::{Cyclo, RationalFunction};
use wreath_core::freegrp::{build_w_graph, enumerate_partitions, QuotientCaps, Word};
use wreath_core::groups::FiniteGroup;
use wreath_core::measure::{
    coefficient_bound_check, expect_multiword, expect_stable, stable_inner, stable_inner_one, verify_main_theorem,
    EngineCaps, InnerCache, Monomial, StableFunction, DEFAULT_EXTRA_TERMS,
};
use wreath_core::oracle::{exact_expectations, finite_inner, Wreath, DEFAULT_EVAL_BUDGET};
use wreath_core::schreier::{alon_bound, run_experiment, thm_bound, ActionSpec};
use wreath_core::Error;
use wreath_core::whitehead::{primitivity_rank, Pi, RankCaps};

/// Relative slack on the coefficient bound.
const BOUND_REL_TOL: f64 = 1e-9;
/// Required fraction of Schreier trials under the bound.
const SCHREIER_PASS_RATE: f64 = 0.95;
/// Allowed shortfall below the Alon-Boppana value for n >= 100.
const ALON_SLACK: f64 = 0.5;
/// Quotient cap for the power identity; (abAB)^3 at degree 2 is far beyond it.
const POWER_QUOTIENT_CAP: u64 = 1_000_000;
/// Largest |G wr S_n|^2 in the exactness sweep.
const EXACTNESS_SQUARED_ORDER: u64 = 10_000_000;

struct Report {
    lines: Vec<(String, bool)>,
}

impl Report {
    fn record(&mut self, id: &str, ok: bool, detail: String, t: Instant) {
        println!("[{}] {id}: {detail} ({:.1}s)", if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
        self.lines.push((id.to_string(), ok));
    }

    fn info(&self, id: &str, detail: String) {
        println!("[INFO] {id}: {detail}");
    }
}

fn w(s: &str) -> Word {
    Word::parse_auto(s).unwrap()
}

fn caps() -> EngineCaps {
    EngineCaps::default()
}

fn coeff(value: &RationalFunction, e: i64, depth: usize) -> Cyclo {
    let lead = value.order_at_infinity().unwrap_or(0).max(0) as usize;
    value.laurent_expand(lead + depth).coeff_of_power(e).expect("within truncation")
}

fn criterion_1(rep: &mut Report) {
    let t = Instant::now();
    let words = common::canonical_words(4);
    let (mut total, mut literal_bad, mut finite_bad, mut above_bad, mut above_total) = (0, 0, 0, 0, 0);
    let mut examples = Vec::new();
    for g in common::groups_small() {
        let fs: Vec<StableFunction> = common::sind_basis(&g, 2).into_iter().map(StableFunction::sind).collect();
        let ns: Vec<usize> = (1..)
            .take_while(|&n| Wreath::new(&g, n).order().is_some_and(|o| o.saturating_mul(o) <= EXACTNESS_SQUARED_ORDER))
            .collect();
        for word in &words {
            let res: Vec<_> = fs.iter().map(|f| expect_stable(word, f, &g, &caps()).unwrap()).collect();
            for &n in &ns {
                let oracle = exact_expectations(word, &fs, &g, n, DEFAULT_EVAL_BUDGET).unwrap();
                for ((r, o), f) in res.iter().zip(&oracle).zip(&fs) {
                    total += 1;
                    let lit = r.value.evaluate_at(n as i64).ok();
                    if lit.as_ref() != Some(o) {
                        literal_bad += 1;
                        if examples.len() < 3 {
                            let shown = lit.as_ref().map_or("pole".to_string(), |v| v.to_string());
                            examples.push(format!("{} {word} {} n={n}: {shown} vs {o}", g.name(), f.display(&g)));
                        }
                    }
                    if n as u64 >= r.valid_from {
                        above_total += 1;
                        above_bad += usize::from(lit.as_ref() != Some(o));
                    }
                    finite_bad += usize::from(&r.evaluate_finite(n as u64) != o);
                }
            }
        }
    }
    rep.record(
        "C1 oracle exactness (rational function at every enumerable n)",
        literal_bad == 0,
        format!("{} of {total} cases differ; e.g. {}", literal_bad, examples.join("; ")),
        t,
    );
    rep.info(
        "C1 n >= validFrom",
        format!("{} of {above_total} cases differ", above_bad),
    );
    rep.info("C1 evaluate_finite at every n", format!("{finite_bad} of {total} cases differ"));
}

fn criterion_2(rep: &mut Report) {
    let t = Instant::now();
    let g = FiniteGroup::trivial();
    let mut bad = Vec::new();
    for (text, pi, crit) in [("abAB", 2u32, 1usize), ("aabb", 2, 1), ("aabbcc", 3, 1)] {
        let word = w(text);
        let r = primitivity_rank(&word, &RankCaps::default()).unwrap();
        if r.pi != Pi::Finite(pi) || r.critical.len() != crit {
            bad.push(format!("{text}: pi {} crit {}", r.pi, r.critical.len()));
        }
        let value = expect_stable(&word, &StableFunction::ind(0), &g, &caps()).unwrap().value;
        let depth = pi as usize + DEFAULT_EXTRA_TERMS;
        let lead = value.order_at_infinity().unwrap_or(0);
        for e in (1 - pi as i64..=lead.max(0)).rev() {
            let want = match e {
                0 => Cyclo::one(),
                e if e == 1 - pi as i64 => Cyclo::from_int(crit as i64),
                _ => Cyclo::zero(),
            };
            let got = coeff(&value, e, depth);
            if got != want {
                bad.push(format!("{text} n^{e}: {got} vs {want}"));
            }
        }
    }
    rep.record("C2 Ind 1 expansion 1 + |Crit| n^(1-pi)", bad.is_empty(), format!("3 words; {bad:?}"), t);
}

fn criterion_3(rep: &mut Report) {
    let t = Instant::now();
    let g = FiniteGroup::cyclic(2);
    let basis = common::sind_basis(&g, 3);
    let mut bad = Vec::new();
    for text in ["abAB", "aabb"] {
        for lam in &basis {
            let r = verify_main_theorem(&w(text), &StableFunction::sind(lam.clone()), &g, None, &caps()).unwrap();
            if !r.pass {
                bad.push(format!("{text} {lam:?}"));
            }
        }
    }
    rep.record("C3 leading coefficients c0 and c_sub", bad.is_empty(), format!("{} functions x 2 words; failures {bad:?}", basis.len()), t);
}

fn criterion_4(rep: &mut Report) {
    let t = Instant::now();
    let g = FiniteGroup::cyclic(2);
    let mut bad = Vec::new();
    let mut checked = 0;
    for text in ["abAB", "aabb"] {
        let pi = 2i64;
        for tt in 2..=3u32 {
            for c in 0..g.class_count() {
                let value = expect_stable(&w(text), &StableFunction::a(tt, c), &g, &caps()).unwrap().value;
                let size = g.classes[c].members.len() as i64;
                let want0 = Cyclo::from_frac(size, tt as i64 * g.order() as i64);
                let depth = pi as usize + DEFAULT_EXTRA_TERMS;
                if coeff(&value, 0, depth) != want0 {
                    bad.push(format!("{text} a[{tt},{c}] constant {}", coeff(&value, 0, depth)));
                }
                for e in 1 - pi..0 {
                    if !coeff(&value, e, depth).is_zero() {
                        bad.push(format!("{text} a[{tt},{c}] n^{e}"));
                    }
                }
                checked += 1;
            }
        }
    }
    rep.record("C4 a_{t,c} constant |c|/(t|G|) and no n^(1-pi) term", bad.is_empty(), format!("{checked} cases; {bad:?}"), t);
}

/// (abAB)^3 at degree 2 has 24 vertices.
fn wide_caps() -> EngineCaps {
    let mut c = caps();
    c.quotients.max_vertices = 24;
    c.quotients.max_quotients = POWER_QUOTIENT_CAP;
    c
}

/// E_{w}[f] by feeding every sInd term straight to the multi-word engine on
/// the unreduced word, with no power twist.
fn multiword_route(word: &Word, f: &StableFunction, g: &FiniteGroup) -> RationalFunction {
    let wide = wide_caps();
    let mut acc = RationalFunction::zero();
    for (m, c) in f.to_sind(g).unwrap().terms() {
        let v = if m.is_one() {
            RationalFunction::constant(Cyclo::one())
        } else {
            let ws: Vec<(Word, usize)> = m.parts().iter().map(|&(k, phi)| (word.pow(k as i64), phi)).collect();
            expect_multiword(&ws, g, &wide).unwrap().value
        };
        acc = acc.add(&v.scale(c));
    }
    acc
}

fn criterion_5(rep: &mut Report) {
    let t = Instant::now();
    let g = FiniteGroup::cyclic(2);
    let mut fs: Vec<StableFunction> = common::sind_basis(&g, 2).into_iter().map(StableFunction::sind).collect();
    fs.extend([StableFunction::a(2, 1), StableFunction::a(2, 0)]);
    let mut bad = Vec::new();
    let mut over_cap = Vec::new();
    let mut checked = 0;
    for u in ["abAB", "ab"] {
        for k in 2..=3u32 {
            let uk = w(u).pow(k as i64);
            let mut overflowed = BTreeSet::new();
            for f in &fs {
                let label = format!("{u}^{k} {}", f.display(&g));
                // same degree means the same w-graphs, so the same overflow
                if overflowed.contains(&f.degree()) {
                    over_cap.push(label);
                    continue;
                }
                let twisted = match expect_stable(&w(u), &f.power_twist(k, &g).unwrap(), &g, &wide_caps()) {
                    Ok(r) => r.value,
                    Err(Error::CapExceeded { .. }) => {
                        overflowed.insert(f.degree());
                        over_cap.push(label);
                        continue;
                    }
                    Err(e) => panic!("{label}: {e}"),
                };
                let stable = expect_stable(&uk, f, &g, &wide_caps()).unwrap().value;
                let direct = multiword_route(&uk, f, &g);
                if stable != twisted || direct != twisted {
                    bad.push(label);
                }
                checked += 1;
            }
        }
    }
    let one = StableFunction::constant(Cyclo::one());
    for k in 2..=3u32 {
        for f in &fs {
            let direct = multiword_route(&w("a").pow(k as i64), f, &g);
            let want = stable_inner(&f.power_twist(k, &g).unwrap(), &one, &g, &wide_caps()).unwrap();
            if direct.as_constant() != Some(want) {
                bad.push(format!("a^{k} {}: {direct}", f.display(&g)));
            }
            checked += 1;
        }
    }
    rep.record(
        "C5 E_{u^k}[f] = E_u[f^(k)] (expect_stable and unreduced multiword routes) and E_{a^k}[f] = <f^(k), 1>",
        bad.is_empty() && over_cap.is_empty(),
        format!("{checked} cases agree; mismatches {bad:?}; over {POWER_QUOTIENT_CAP} quotients: {over_cap:?}"),
        t,
    );
}

fn criterion_6(rep: &mut Report) {
    let t = Instant::now();
    let one = StableFunction::constant(Cyclo::one());
    let mut bad = Vec::new();
    let mut sharp = None;
    let mut checked = 0;
    for (g, nmax) in [(FiniteGroup::trivial(), 7usize), (FiniteGroup::cyclic(2), 6)] {
        for lam in common::sind_basis(&g, 3) {
            let stable = stable_inner_one(&lam, &g, &caps()).unwrap();
            let f = StableFunction::sind(lam.clone());
            for n in 1..=nmax {
                let v = finite_inner(&f, &one, &g, n, DEFAULT_EVAL_BUDGET).unwrap();
                checked += 1;
                if n >= lam.degree() as usize {
                    if v != stable {
                        bad.push(format!("{} {lam:?} n={n}: {v} vs {stable}", g.name()));
                    }
                } else if v != stable && sharp.is_none() {
                    sharp = Some(format!("{} {lam:?} n={n}: {v} vs stable {stable}", g.name()));
                }
            }
        }
    }
    let ok = bad.is_empty() && sharp.is_some();
    rep.record("C6 stabilization of <sInd(lambda), 1>", ok, format!("{checked} values; failures {bad:?}; sharp at {sharp:?}"), t);
}

fn criterion_7(rep: &mut Report) {
    let t = Instant::now();
    let mut bad = Vec::new();
    let c = Cyclo::from_int;
    let products = |cache: &mut InnerCache<'_>, lam: &Monomial, phi: usize| -> Vec<Cyclo> {
        let mut r = cache.indphi_terms(lam, phi).unwrap();
        r.sort_by_key(|x| x.0);
        r.iter().map(|(_, o, s)| o * s).collect()
    };
    let triv = FiniteGroup::trivial();
    let mut cache = InnerCache::new(&triv, caps());
    let lam = Monomial::new(vec![(1, 0), (1, 0)]);
    let mut p = products(&mut cache, &lam, 0);
    p.sort_by_key(|x| x.to_string());
    if p != [c(1), c(1), c(1), c(2)] || cache.indphi(&lam, 0).unwrap() != c(5) {
        bad.push(format!("(Ind1)^2: {p:?}"));
    }
    let c2 = FiniteGroup::cyclic(2);
    let mut cache = InnerCache::new(&c2, caps());
    let lam = Monomial::new(vec![(1, 0), (1, 1)]);
    if cache.indphi(&lam, 1).unwrap() != c(2) || cache.indphi(&lam, 0).unwrap() != c(0) {
        bad.push("C2 Ind1*Ind(-1)".into());
    }
    let ones: Vec<Cyclo> = {
        let mut r = cache.indphi_terms(&lam, 1).unwrap();
        r.sort_by_key(|x| x.0);
        r.into_iter().map(|x| x.1).collect()
    };
    if ones != [c(0), c(0), c(1), c(1)] {
        bad.push(format!("C2 one-column {ones:?}"));
    }
    let s3 = FiniteGroup::sym3();
    let mut cache = InnerCache::new(&s3, caps());
    let lam = Monomial::single(2, 2);
    let mut r = cache.indphi_terms(&lam, 0).unwrap();
    r.sort_by_key(|x| x.0);
    let ones: Vec<Cyclo> = r.iter().map(|x| x.1.clone()).collect();
    let summaries: Vec<Cyclo> = (0..3).map(|phi| cache.summary_inner(&lam, phi).unwrap()).collect();
    if ones != [c(1), c(1)] || summaries != [c(1), c(-1), c(1)] {
        bad.push(format!("S3 (Ind std)^(2): ones {ones:?} summaries {summaries:?}"));
    }
    rep.record("C7 worked inner-product tables", bad.is_empty(), format!("{bad:?}"), t);
}

fn criterion_8(rep: &mut Report) {
    let t = Instant::now();
    let mut cases: Vec<(Word, Monomial, FiniteGroup, usize)> = Vec::new();
    for (text, pi) in [("abAB", 2usize), ("aabb", 2), ("aabbcc", 3)] {
        cases.push((w(text), Monomial::single(1, 0), FiniteGroup::trivial(), pi));
    }
    let c2 = FiniteGroup::cyclic(2);
    let mut lams: BTreeSet<Monomial> = common::sind_basis(&c2, 3).into_iter().collect();
    for tt in 2..=3 {
        for cl in 0..c2.class_count() {
            lams.extend(StableFunction::a(tt, cl).to_sind(&c2).unwrap().terms().keys().filter(|m| !m.is_one()).cloned());
        }
    }
    for text in ["abAB", "aabb"] {
        for lam in &lams {
            cases.push((w(text), lam.clone(), c2.clone(), 2));
        }
    }
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for (word, lam, g, pi) in &cases {
        let rows = coefficient_bound_check(word, lam, g, pi + DEFAULT_EXTRA_TERMS, &caps()).unwrap();
        for r in rows {
            worst = worst.max(r.coeff_abs / r.bound);
            if r.coeff_abs > r.bound * (1.0 + BOUND_REL_TOL) {
                bad.push(format!("{word} {lam:?} p={}: {} > {}", r.p, r.coeff_abs, r.bound));
            }
        }
    }
    rep.record(
        "C8 |a_p| <= sInd(1) T^(2(l + p))",
        bad.is_empty(),
        format!("{} expansions, largest ratio {worst:.3e}, rel tol {BOUND_REL_TOL:e}; {bad:?}", cases.len()),
        t,
    );
}

fn criterion_9(rep: &mut Report) {
    let t = Instant::now();
    let g = FiniteGroup::cyclic(2);
    let r = 4;
    let bound = thm_bound(r, 1);
    let floor = alon_bound(r) - ALON_SLACK;
    let exp = run_experiment(ActionSpec::signed_points(), &g, &[50, 100, 200], r, 20, 1).unwrap();
    let passed = exp.rows.iter().filter(|row| row.pass).count();
    let rate = passed as f64 / exp.rows.len() as f64;
    let low: Vec<u64> = exp.rows.iter().filter(|row| row.n >= 100 && row.mu < floor).map(|row| row.seed).collect();
    for s in &exp.summary {
        rep.info(
            "C9 size",
            format!("n={} pass_rate={:.2} mu in [{:.4}, {:.4}] disconnected={} failing seeds {:?}", s.n, s.pass_rate, s.min_mu, s.max_mu, s.disconnected, s.failing_seeds),
        );
    }
    let ok = rate >= SCHREIER_PASS_RATE && low.is_empty();
    rep.record(
        "C9 random Schreier graphs, mu <= thm_bound(4,1)",
        ok,
        format!("{passed}/{} under {bound:.4} (need {SCHREIER_PASS_RATE}); below {floor:.4} at n>=100: {low:?}", exp.rows.len()),
        t,
    );
}

fn criterion_10(rep: &mut Report) {
    let t = Instant::now();
    let mut graphs = 0;
    let mut bad = Vec::new();
    for word in common::canonical_words(4) {
        for parts in [vec![1u32], vec![2], vec![1, 1]] {
            if parts.iter().sum::<u32>() as usize * word.len() > 8 {
                continue;
            }
            let src = build_w_graph(&word, &parts).unwrap();
            let fast: BTreeSet<Vec<u32>> = enumerate_partitions(&src.graph, QuotientCaps::default()).unwrap().into_iter().collect();
            if fast != common::brute_force_partitions(&src.graph) {
                bad.push(format!("{word} {parts:?}"));
            }
            graphs += 1;
        }
    }
    rep.record("C10 quotient enumeration vs Bell brute force", bad.is_empty(), format!("{graphs} graphs; {bad:?}"), t);
}

fn main() {
    let mut rep = Report { lines: Vec::new() };
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criterion_3(&mut rep);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    criterion_9(&mut rep);
    criterion_10(&mut rep);
    let failed: Vec<&str> = rep.lines.iter().filter(|l| !l.1).map(|l| l.0.as_str()).collect();
    println!("acceptance: {}/{} criteria pass; failing: {failed:?}", rep.lines.len() - failed.len(), rep.lines.len());
    if !failed.is_empty() && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
