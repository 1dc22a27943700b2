use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::{json, Value};

use wreath_core::exactnum::{Cyclo, CycloJson, Poly, RationalFunction};
use wreath_core::freegrp::{build_w_graph, enumerate_quotients, Word};
use wreath_core::groups::{graph_expectation, load_group, FiniteGroup, PathLoad};
use wreath_core::measure::{
    expect_stable, parse_multipartition, verify_main_theorem, InnerCache, Monomial, StableFunction,
};
use wreath_core::oracle::{exact_expectation, mc_expectation, write_csv, OracleRow, Wreath};
use wreath_core::schreier::{run_experiment, write_trials_csv, ActionKind, ActionSpec};
use wreath_core::whitehead::{critical_values, phi_rank, primitivity_rank, reduced_non_power, Pi};
use wreath_core::Error;

use crate::{Caps, Failure, Global, Outcome, WordGroup};

type Res = Result<Outcome, Failure>;

fn writer(g: &Global) -> Result<Box<dyn Write>, Failure> {
    Ok(match &g.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::Compute(Error::Io(e)))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(g: &Global, v: &Value) -> Result<(), Failure> {
    let mut w = writer(g)?;
    let text = serde_json::to_string_pretty(v).map_err(Error::from)?;
    writeln!(w, "{text}").and_then(|_| w.flush()).map_err(|e| Failure::Compute(Error::Io(e)))
}

fn cj(c: &Cyclo) -> Value {
    serde_json::to_value(CycloJson::from(c)).expect("json")
}

fn word(text: &str) -> Result<Word, Failure> {
    let w = Word::parse_auto(text)?;
    if w.is_empty() {
        return Err(Failure::Compute(Error::EmptyWord));
    }
    Ok(w)
}

/// Character index from `3`, `phi3` or a character name.
fn phi_index(text: &str, group: &FiniteGroup) -> Result<usize, Failure> {
    let f = StableFunction::parse(&format!("Ind({text})"), group)?;
    let m = f.terms().keys().next().expect("one term");
    Ok(m.labels()[0])
}

fn constant(text: &str, group: &FiniteGroup) -> Result<Cyclo, Failure> {
    let f = StableFunction::parse(text, group)?;
    if !f.is_constant() {
        return Err(Failure::Usage(format!("{text:?} is not a constant")));
    }
    Ok(f.constant_term())
}

fn series_json(value: &RationalFunction, k: usize) -> (String, Vec<Value>) {
    let lead = value.order_at_infinity().unwrap_or(0);
    let s = value.laurent_expand(lead.max(0) as usize + k);
    let coeffs = (s.last_power()..=s.lead_order)
        .rev()
        .filter_map(|e| s.coeff_of_power(e).map(|c| json!({ "power": e, "value": cj(&c), "display": c.to_string() })))
        .collect();
    (s.to_string(), coeffs)
}

pub fn expect(g: &Global, caps: &Caps, wg: &WordGroup, f: &str, k: usize, eval: &[u64]) -> Res {
    let group = load_group(&wg.group)?;
    let w = word(&wg.word)?;
    let f = StableFunction::parse(f, &group)?;
    let res = expect_stable(&w, &f, &group, &caps.engine)?;
    let mut out = res.to_json();
    let (laurent, coeffs) = series_json(&res.value, k);
    out["function"] = json!(f.display(&group).to_string());
    out["laurent"] = json!(laurent);
    out["laurentCoeffs"] = json!(coeffs);
    if !eval.is_empty() {
        let rows: Vec<Value> = eval
            .iter()
            .map(|&n| {
                let v = res.evaluate_finite(n);
                let rf = (n >= res.valid_from).then(|| res.value.evaluate_at(n as i64).ok()).flatten();
                json!({
                    "n": n,
                    "value": cj(&v),
                    "display": v.to_string(),
                    "rationalFunctionAgrees": rf.map(|x| x == v),
                })
            })
            .collect();
        out["eval"] = json!(rows);
    }
    emit(g, &out)?;
    Ok(Outcome::Ok)
}

pub fn inner(g: &Global, caps: &Caps, f: &str, h: &str, group: &str) -> Res {
    let group = load_group(group)?;
    let f = StableFunction::parse(f, &group)?;
    let h = StableFunction::parse(h, &group)?;
    let mut cache = InnerCache::new(&group, caps.engine);
    let value = cache.inner(&f, &h)?;
    let mut out = json!({ "value": cj(&value), "display": value.to_string() });
    // per-term breakdown when the right side is 1 or a single Ind(phi)
    let hs = h.to_sind(&group)?;
    let single_ind = match hs.terms().iter().collect::<Vec<_>>().as_slice() {
        [(m, c)] if c.is_one() && m.len() == 1 && m.parts()[0].0 == 1 => Some(m.labels()[0]),
        _ => None,
    };
    if h.is_constant() || single_ind.is_some() {
        let fs = f.to_sind(&group)?;
        let mut terms = Vec::new();
        for (m, c) in fs.terms() {
            let parts: Vec<Value> = match single_ind {
                Some(phi) => cache
                    .indphi_terms(m, phi)?
                    .into_iter()
                    .map(|(mask, one, summary)| {
                        let p = &one * &summary;
                        json!({ "mask": mask, "one": one.to_string(), "summary": summary.to_string(), "product": p.to_string() })
                    })
                    .collect(),
                None => vec![json!({ "one": cache.one(m)?.to_string() })],
            };
            terms.push(json!({
                "term": StableFunction::sind(m.clone()).display(&group).to_string(),
                "coefficient": c.to_string(),
                "contributions": parts,
            }));
        }
        out["terms"] = json!(terms);
    }
    emit(g, &out)?;
    Ok(Outcome::Ok)
}

pub fn crit(g: &Global, caps: &Caps, wg: &WordGroup, phi: Option<&str>, full: bool) -> Res {
    let w = word(&wg.word)?;
    reduced_non_power(&w)?;
    let rep = primitivity_rank(&w, &caps.rank)?;
    let mut out = if full { rep.to_json() } else { json!({ "pi": rep.pi.to_json() }) };
    if rep.pi != Pi::Infinite {
        out["crit_count"] = json!(rep.critical.len());
    }
    if let Some(phi) = phi {
        let group = load_group(&wg.group)?;
        let phi = phi_index(phi, &group)?;
        let tw = phi_rank(&w, phi, &group, &caps.rank)?;
        let (c_phi, c_pi) = critical_values(&w, phi, &group, &caps.rank)?;
        out["phi"] = json!(phi);
        out["pi_phi"] = tw.pi.to_json();
        out["crit_phi_count"] = json!(tw.critical.len());
        out["C_phi"] = cj(&c_phi);
        out["Cpi_phi"] = cj(&c_pi);
        if full {
            out["critical_phi"] = tw.to_json()["critical"].clone();
        }
    }
    emit(g, &out)?;
    Ok(Outcome::Ok)
}

#[allow(clippy::too_many_arguments)]
pub fn verify(
    g: &Global,
    caps: &Caps,
    wg: &WordGroup,
    f: &str,
    k: Option<usize>,
    eval: &[usize],
    samples: u64,
    perturb: Option<&str>,
) -> Res {
    let group = load_group(&wg.group)?;
    let w = word(&wg.word)?;
    let f = StableFunction::parse(f, &group)?;
    let mut rep = verify_main_theorem(&w, &f, &group, k, &caps.engine)?;
    if let Some(p) = perturb {
        let d = constant(p, &group)?;
        let s = rep.prediction.pi.finite().map(|p| 1 - p as i64).ok_or_else(|| Failure::Usage("no c_sub for a primitive word".into()))?;
        rep.prediction.c_sub = &rep.prediction.c_sub + &d;
        for row in rep.rows.iter_mut().filter(|r| r.power == s) {
            row.expected = Some(rep.prediction.c_sub.clone());
            row.ok = row.actual == rep.prediction.c_sub;
        }
        rep.pass = rep.rows.iter().all(|r| r.ok);
    }
    let mut pass = rep.pass;
    for r in rep.rows.iter().filter(|r| !r.ok) {
        let want = r.expected.as_ref().map(|c| c.to_string()).unwrap_or_default();
        eprintln!("FAIL coefficient of n^{}: actual {} expected {}", r.power, r.actual, want);
    }
    let mut checks = Vec::new();
    if !eval.is_empty() {
        let res = expect_stable(&w, &f, &group, &caps.engine)?;
        for &n in eval {
            let engine = res.evaluate_finite(n as u64);
            let rf = (n as u64 >= res.valid_from).then(|| res.value.evaluate_at(n as i64).ok()).flatten();
            let rf_ok = rf.as_ref().is_none_or(|x| *x == engine);
            let row = match exact_expectation(&w, &f, &group, n, caps.eval_budget) {
                Ok(v) => {
                    let ok = v == engine && rf_ok;
                    json!({ "n": n, "method": "exact", "engine": engine.to_string(), "oracle": v.to_string(), "ok": ok })
                }
                Err(Error::CapExceeded { .. }) => {
                    let mc = mc_expectation(&w, &f, &group, n, samples, g.seed)?;
                    let (re, im) = engine.to_complex();
                    let ok = (mc.mean.re - re).abs() <= 4.0 * mc.stderr_re + 1e-9
                        && (mc.mean.im - im).abs() <= 4.0 * mc.stderr_im + 1e-9
                        && rf_ok;
                    json!({
                        "n": n, "method": "mc", "engine": engine.to_string(), "oracle": [mc.mean.re, mc.mean.im],
                        "stderr": mc.stderr(), "samples": samples, "seed": g.seed, "ok": ok,
                    })
                }
                Err(e) => return Err(e.into()),
            };
            if row["ok"] == json!(false) {
                eprintln!("FAIL oracle at n = {n}: {row}");
                pass = false;
            }
            checks.push(row);
        }
    }
    let mut out = rep.to_json();
    out["oracle"] = json!(checks);
    out["pass"] = json!(pass);
    emit(g, &out)?;
    Ok(if pass { Outcome::Ok } else { Outcome::CheckFailed })
}

pub fn basis(g: &Global, f: &str, group: &str) -> Res {
    let group = load_group(group)?;
    let f = StableFunction::parse(f, &group)?;
    let s = f.to_sind(&group)?;
    let a = f.to_a(&group)?;
    emit(
        g,
        &json!({
            "input": f.display(&group).to_string(),
            "degree": f.degree(),
            "sInd": s.display(&group).to_string(),
            "a": a.display(&group).to_string(),
        }),
    )?;
    Ok(Outcome::Ok)
}

fn falling(k: usize) -> Poly {
    Poly::falling_factorial(k as u32)
}

pub fn quotients(g: &Global, caps: &Caps, wg: &WordGroup, lam: &str) -> Res {
    let group = load_group(&wg.group)?;
    let (w, _) = word(&wg.word)?.cyclic_reduce();
    if w.is_empty() {
        return Err(Failure::Compute(Error::EmptyWord));
    }
    let lam: Monomial = parse_multipartition(lam, &group)?;
    let src = build_w_graph(&w, &lam.sizes())?;
    let chars = lam.labels().iter().map(|&l| group.character(l).cloned()).collect::<Result<Vec<_>, _>>()?;
    let mut qs = enumerate_quotients(&src, caps.engine.quotients)?;
    qs.sort_by_key(|q| std::cmp::Reverse(q.euler_char()));
    let mut rows = Vec::new();
    for (i, q) in qs.iter().enumerate() {
        let img = &q.image;
        let v = img.vertex_count();
        let comps = img.components().into_iter().max().map_or(0, |m| m + 1);
        let den = img.label_counts().iter().fold(Poly::one(), |acc, &e| acc.mul(&falling(e as usize)));
        let l = RationalFunction::new(falling(v), den)?;
        let loads: Vec<PathLoad> = q.paths.iter().zip(&chars).map(|(p, f)| PathLoad { path: p, f }).collect();
        let gf = graph_expectation(&group, img, &loads, caps.engine.group_mul_budget)?;
        rows.push(json!({
            "index": i,
            "vertices": v,
            "edges": img.edge_count(),
            "chi": q.euler_char(),
            "rank": img.edge_count() as i64 - v as i64 + comps as i64,
            "blocks": q.blocks(),
            "L": l.to_string(),
            "LJson": serde_json::to_value(l.to_json()).map_err(Error::from)?,
            "groupFactor": gf.to_string(),
            "image": img.dump(),
        }));
    }
    emit(g, &json!({ "word": w.to_string(), "lambda": lam.sizes(), "count": rows.len(), "quotients": rows }))?;
    Ok(Outcome::Ok)
}

pub fn oracle(g: &Global, caps: &Caps, wg: &WordGroup, f_text: &str, ns: &[usize], method: &str, samples: u64) -> Res {
    let group = load_group(&wg.group)?;
    let w = word(&wg.word)?;
    let f = StableFunction::parse(f_text, &group)?;
    if !matches!(method, "exact" | "mc" | "auto") {
        return Err(Failure::Usage(format!("unknown method {method:?} (exact, mc, auto)")));
    }
    let mut used: Vec<i32> = w.letters().iter().map(|l| l.abs()).collect();
    used.sort_unstable();
    used.dedup();
    let mut rows = Vec::new();
    for &n in ns {
        let exact = if method == "mc" {
            None
        } else {
            match exact_expectation(&w, &f, &group, n, caps.eval_budget) {
                Ok(v) => Some(v),
                Err(Error::CapExceeded { .. }) if method == "auto" => None,
                Err(e) => return Err(e.into()),
            }
        };
        rows.push(match exact {
            Some(v) => {
                let order = Wreath::new(&group, n).order().unwrap_or(u64::MAX);
                let tuples = order.checked_pow(used.len() as u32).unwrap_or(u64::MAX);
                OracleRow::exact(&w, &group, n, f_text, &v, tuples)
            }
            None => OracleRow::monte_carlo(&w, &group, n, f_text, &mc_expectation(&w, &f, &group, n, samples, g.seed)?),
        });
    }
    if g.csv {
        write_csv(writer(g)?, &rows)?;
    } else {
        emit(g, &serde_json::to_value(&rows).map_err(Error::from)?)?;
    }
    Ok(Outcome::Ok)
}

pub fn schreier(g: &Global, group: &str, action: &str, ns: &[usize], r: usize, k: Option<usize>, trials: usize) -> Res {
    let group = load_group(group)?;
    let mut spec: ActionSpec = action.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    match (spec.kind, k) {
        (ActionKind::LabeledSubsets, Some(k)) => spec.k = k,
        (_, Some(k)) if k != 1 => return Err(Failure::Usage(format!("--k {k} only applies to ksubsets"))),
        _ => {}
    }
    let rep = run_experiment(spec, &group, ns, r, trials, g.seed)?;
    write_trials_csv(writer(g)?, &rep.rows)?;
    for s in &rep.summary {
        eprintln!(
            "n={} trials={} pass_rate={:.3} mu_min={:.4} mu_max={:.4} disconnected={} failing_seeds={:?}",
            s.n, s.trials, s.pass_rate, s.min_mu, s.max_mu, s.disconnected, s.failing_seeds
        );
    }
    Ok(Outcome::Ok)
}
