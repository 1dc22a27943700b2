//! Ground truth at a fixed n: exact averages over all tuples in
//! (G wr S_n)^r, Monte-Carlo estimates, and finite inner products.

mod element;

pub use element::{perm_rank, perm_unrank, ComplexEvaluator, Wreath, WreathElement};

use std::io::Write;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Rational};
use crate::freegrp::Word;
use crate::groups::FiniteGroup;
use crate::measure::StableFunction;
use crate::par;

/// Default cap on word evaluations for exact enumeration.
pub const DEFAULT_EVAL_BUDGET: u64 = 100_000_000;
/// Largest group order for which a full multiplication table is built.
pub const MUL_TABLE_MAX: u64 = 2048;
/// Samples per RNG stream in Monte-Carlo runs.
pub const MC_BLOCK: u64 = 4096;

/// Elements of G wr S_n by index, with a multiplication table when small.
struct Indexed<'g> {
    wr: Wreath<'g>,
    elems: Vec<WreathElement>,
    mul: Option<Vec<u32>>,
    inv: Vec<u32>,
}

impl<'g> Indexed<'g> {
    fn new(wr: Wreath<'g>) -> Result<Indexed<'g>> {
        let n = wr.order().filter(|&o| o <= u32::MAX as u64).ok_or(Error::CapExceeded {
            what: "wreath product order",
            limit: u32::MAX as u64,
            reached: u64::MAX,
        })?;
        let elems: Vec<WreathElement> = par::map_range(n as usize, |i| wr.element(i as u64));
        let inv = par::map(&elems, |e| wr.index(&wr.inv(e)) as u32);
        let mul = (n <= MUL_TABLE_MAX).then(|| {
            par::map(&elems, |a| elems.iter().map(|b| wr.index(&wr.mul_raw(a, b)) as u32).collect::<Vec<u32>>())
                .concat()
        });
        Ok(Indexed { wr, elems, mul, inv })
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul {
            Some(t) => t[a as usize * self.elems.len() + b as usize],
            None => self.wr.index(&self.wr.mul_raw(&self.elems[a as usize], &self.elems[b as usize])) as u32,
        }
    }
}

/// Number of tuples in Hom(F_r, G wr S_n) sending w to each element, over the
/// generators that occur in w. Indexed like [`Wreath::element`].
pub fn word_distribution(w: &Word, wr: &Wreath<'_>, budget: u64) -> Result<(Vec<u64>, u64)> {
    let n = wr.order().ok_or(Error::CapExceeded { what: "wreath product order", limit: budget, reached: u64::MAX })?;
    let mut used: Vec<usize> = w.letters().iter().map(|l| l.unsigned_abs() as usize).collect();
    used.sort_unstable();
    used.dedup();
    let r = used.len() as u32;
    let tuples = n.checked_pow(r).unwrap_or(u64::MAX);
    if tuples > budget {
        return Err(Error::CapExceeded { what: "word evaluations", limit: budget, reached: tuples });
    }
    let ix = Indexed::new(wr.clone())?;
    let id = wr.index(&wr.identity()) as u32;
    if r == 0 {
        let mut d = vec![0u64; ix.len()];
        d[id as usize] = 1;
        return Ok((d, 1));
    }
    // letters as (position among used generators, sign)
    let letters: Vec<(usize, bool)> =
        w.letters().iter().map(|l| (used.binary_search(&(l.unsigned_abs() as usize)).expect("used"), *l > 0)).collect();
    let size = ix.len();
    let chunks = (par::threads() * 8).clamp(1, size);
    let parts = par::map_range(chunks, |c| {
        let mut counts = vec![0u64; size];
        let mut assign = vec![0u32; r as usize];
        for first in (c * size / chunks)..((c + 1) * size / chunks) {
            assign[0] = first as u32;
            for a in assign.iter_mut().skip(1) {
                *a = 0;
            }
            loop {
                let mut x = id;
                for &(g, pos) in &letters {
                    let e = assign[g];
                    x = ix.mul(x, if pos { e } else { ix.inv[e as usize] });
                }
                counts[x as usize] += 1;
                let mut i = 1;
                while i < r as usize {
                    assign[i] += 1;
                    if (assign[i] as usize) < size {
                        break;
                    }
                    assign[i] = 0;
                    i += 1;
                }
                if i >= r as usize {
                    break;
                }
            }
        }
        counts
    });
    let mut total = vec![0u64; size];
    for p in parts {
        for (t, c) in total.iter_mut().zip(p) {
            *t += c;
        }
    }
    Ok((total, tuples))
}

/// E_w[f] at n, exactly, by enumerating all tuples.
pub fn exact_expectation(w: &Word, f: &StableFunction, group: &FiniteGroup, n: usize, budget: u64) -> Result<Cyclo> {
    Ok(exact_expectations(w, std::slice::from_ref(f), group, n, budget)?.pop().expect("one function"))
}

/// [`exact_expectation`] for several functions off one enumeration.
pub fn exact_expectations(w: &Word, fs: &[StableFunction], group: &FiniteGroup, n: usize, budget: u64) -> Result<Vec<Cyclo>> {
    let wr = Wreath::new(group, n);
    let (dist, total) = word_distribution(w, &wr, budget)?;
    let support: Vec<(usize, u64)> = dist.into_iter().enumerate().filter(|&(_, c)| c > 0).collect();
    let scale = Rational::new(1.into(), (total as i64).into());
    fs.iter()
        .map(|f| {
            let vals = par::map(&support, |&(i, c)| wr.eval_stable(&wr.element(i as u64), f).map(|v| v.scale_int(c as i64)));
            let mut acc = Cyclo::zero();
            for v in vals {
                acc = acc + v?;
            }
            Ok(acc.scale(&scale))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: Complex64,
    /// Standard errors of the real and imaginary parts.
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// The larger of the two standard errors.
    pub fn stderr(&self) -> f64 {
        self.stderr_re.max(self.stderr_im)
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sample mean of f(w(g_1..g_r)) over uniform tuples. Block b of
/// [`MC_BLOCK`] samples draws from ChaCha8 seeded with `seed` on stream b, so
/// results do not depend on the thread count.
pub fn mc_expectation(w: &Word, f: &StableFunction, group: &FiniteGroup, n: usize, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples < 100 {
        return Err(Error::Domain("at least 100 samples required".into()));
    }
    let wr = Wreath::new(group, n);
    let ev = ComplexEvaluator::new(group, f)?;
    let r = w.rank();
    let blocks = samples.div_ceil(MC_BLOCK);
    let sums = par::map_range(blocks as usize, |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let count = MC_BLOCK.min(samples - b as u64 * MC_BLOCK);
        let mut s = [KahanSum::default(); 4];
        for _ in 0..count {
            let gens: Vec<WreathElement> = (0..r).map(|_| wr.random(&mut rng)).collect();
            let x = wr.eval_word(w, &gens).expect("generators match rank");
            let v = ev.eval(&wr.cycle_data(&x));
            s[0].add(v.re);
            s[1].add(v.im);
            s[2].add(v.re * v.re);
            s[3].add(v.im * v.im);
        }
        s.map(|k| k.value())
    });
    let mut tot = [KahanSum::default(); 4];
    for s in sums {
        for (t, x) in tot.iter_mut().zip(s) {
            t.add(x);
        }
    }
    let m = samples as f64;
    let [sr, si, qr, qi] = tot.map(|k| k.value());
    let (mr, mi) = (sr / m, si / m);
    let var = |q: f64, mean: f64| ((q - m * mean * mean) / (m - 1.0)).max(0.0);
    Ok(McEstimate {
        mean: Complex64::new(mr, mi),
        stderr_re: (var(qr, mr) / m).sqrt(),
        stderr_im: (var(qi, mi) / m).sqrt(),
        samples,
        seed,
    })
}

/// (1/|G wr S_n|) sum_x f(x) conj(h(x)).
pub fn finite_inner(f: &StableFunction, h: &StableFunction, group: &FiniteGroup, n: usize, budget: u64) -> Result<Cyclo> {
    let wr = Wreath::new(group, n);
    let order = wr.order().filter(|&o| o <= budget).ok_or(Error::CapExceeded {
        what: "wreath product order",
        limit: budget,
        reached: wr.order().unwrap_or(u64::MAX),
    })?;
    let vals = par::map_range(order as usize, |i| -> Result<Cyclo> {
        let x = wr.element(i as u64);
        Ok(&wr.eval_stable(&x, f)? * &wr.eval_stable(&x, h)?.conj())
    });
    let mut acc = Cyclo::zero();
    for v in vals {
        acc = acc + v?;
    }
    Ok(acc.scale(&Rational::new(1.into(), (order as i64).into())))
}

/// One line of oracle CSV output.
#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub word: String,
    pub group: String,
    pub n: usize,
    pub f: String,
    pub method: String,
    pub value_re: f64,
    pub value_im: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: Option<u64>,
}

impl OracleRow {
    pub fn exact(w: &Word, group: &FiniteGroup, n: usize, f: &str, v: &Cyclo, tuples: u64) -> OracleRow {
        let (re, im) = v.to_complex();
        OracleRow {
            word: w.to_string(),
            group: group.name().to_string(),
            n,
            f: f.to_string(),
            method: "exact".into(),
            value_re: re,
            value_im: im,
            stderr: 0.0,
            samples: tuples,
            seed: None,
        }
    }

    pub fn monte_carlo(w: &Word, group: &FiniteGroup, n: usize, f: &str, e: &McEstimate) -> OracleRow {
        OracleRow {
            word: w.to_string(),
            group: group.name().to_string(),
            n,
            f: f.to_string(),
            method: "mc".into(),
            value_re: e.mean.re,
            value_im: e.mean.im,
            stderr: e.stderr(),
            samples: e.samples,
            seed: Some(e.seed),
        }
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[OracleRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in rows {
        wtr.serialize(r).map_err(|e| Error::Domain(format!("csv: {e}")))?;
    }
    wtr.flush()?;
    Ok(())
}
