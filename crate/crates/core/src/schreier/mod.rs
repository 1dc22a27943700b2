//! Random Schreier graphs of G wr S_n actions and their spectral gaps.

mod action;
mod spectral;

pub use action::{ActionKind, ActionSpec, PointSet, MAX_POINTS};
pub use spectral::{
    adjacency_mu, hashimoto_nu, HashimotoReport, SchreierGraph, SpectralMethod, SpectralReport, DENSE_MAX,
    HASHIMOTO_MAX_EDGES, MAX_ITERATIONS, SPECTRAL_TOL,
};

use std::io::Write;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::oracle::Wreath;
use crate::par;

/// 2 sqrt(2r - 1) exp(2k^2 / (e^2 (2r - 1))).
pub fn thm_bound(r: usize, k: usize) -> f64 {
    let d1 = (2 * r - 1) as f64;
    let e2 = std::f64::consts::E * std::f64::consts::E;
    2.0 * d1.sqrt() * (2.0 * (k * k) as f64 / (e2 * d1)).exp()
}

/// 2 sqrt(2r - 1).
pub fn alon_bound(r: usize) -> f64 {
    2.0 * ((2 * r - 1) as f64).sqrt()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `t` at size `n`: splitmix64(splitmix64(seed ^ n) ^ t).
pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(seed ^ n as u64) ^ trial as u64)
}

/// The Schreier graph of r uniform random elements of G wr S_n acting on
/// the points of `spec`, drawn from ChaCha8 seeded with `seed`.
pub fn random_schreier(spec: ActionSpec, group: &FiniteGroup, n: usize, r: usize, seed: u64) -> Result<SchreierGraph> {
    if r == 0 {
        return Err(Error::Domain("need at least one generator".into()));
    }
    let ps = PointSet::new(spec, group.order(), n)?;
    let wr = Wreath::new(group, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = (0..r).map(|_| ps.permutation(&wr, &wr.random(&mut rng))).collect();
    SchreierGraph::new(gens)
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub action: String,
    #[serde(rename = "G")]
    pub group: String,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    #[serde(rename = "X_size")]
    pub x_size: usize,
    pub connected: bool,
    pub mu: f64,
    pub alon_bound: f64,
    pub thm_bound: f64,
    pub pass: bool,
    #[serde(skip)]
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeSummary {
    pub n: usize,
    pub trials: usize,
    pub pass_rate: f64,
    pub min_mu: f64,
    pub max_mu: f64,
    pub disconnected: usize,
    pub failing_seeds: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub rows: Vec<TrialRow>,
    pub summary: Vec<SizeSummary>,
}

/// `trials` random graphs for every n in `ns`; a trial passes when
/// mu <= thm_bound(r, stable degree) and the eigensolve converged.
pub fn run_experiment(
    spec: ActionSpec,
    group: &FiniteGroup,
    ns: &[usize],
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    if r < 2 {
        return Err(Error::Domain("the bound needs r >= 2".into()));
    }
    let k = spec.stable_degree();
    let bound = thm_bound(r, k);
    let alon = alon_bound(r);
    let jobs: Vec<(usize, usize)> = ns.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let rows = par::map(&jobs, |&(n, t)| -> Result<TrialRow> {
        let s = trial_seed(seed, n, t);
        let g = random_schreier(spec, group, n, r, s)?;
        let rep = adjacency_mu(&g);
        Ok(TrialRow {
            action: spec.to_string(),
            group: group.name().to_string(),
            n,
            r,
            k,
            trial: t,
            seed: s,
            x_size: g.vertex_count(),
            connected: rep.connected,
            mu: rep.mu,
            alon_bound: alon,
            thm_bound: bound,
            pass: rep.converged && rep.mu <= bound,
            converged: rep.converged,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let summary = ns
        .iter()
        .map(|&n| {
            let rs: Vec<&TrialRow> = rows.iter().filter(|row| row.n == n).collect();
            let passed = rs.iter().filter(|row| row.pass).count();
            SizeSummary {
                n,
                trials: rs.len(),
                pass_rate: if rs.is_empty() { 0.0 } else { passed as f64 / rs.len() as f64 },
                min_mu: rs.iter().map(|row| row.mu).fold(f64::INFINITY, f64::min),
                max_mu: rs.iter().map(|row| row.mu).fold(f64::NEG_INFINITY, f64::max),
                disconnected: rs.iter().filter(|row| !row.connected).count(),
                failing_seeds: rs.iter().filter(|row| !row.pass).map(|row| row.seed).collect(),
            }
        })
        .collect();
    Ok(ExperimentReport { rows, summary })
}

pub fn write_trials_csv<W: Write>(out: W, rows: &[TrialRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in rows {
        wtr.serialize(r).map_err(|e| Error::Domain(format!("csv: {e}")))?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert!((alon_bound(4) - 5.2915).abs() < 1e-4);
        assert!((thm_bound(4, 1) - 5.500).abs() < 1e-3);
        assert_eq!(thm_bound(3, 0), alon_bound(3));
    }

    #[test]
    fn graphs_are_regular_and_seeded() {
        let g = FiniteGroup::cyclic(2);
        let a = random_schreier(ActionSpec::signed_points(), &g, 10, 3, 42).unwrap();
        let b = random_schreier(ActionSpec::signed_points(), &g, 10, 3, 42).unwrap();
        assert_eq!(a, b);
        let adj = a.adjacency();
        for i in 0..a.vertex_count() {
            assert_eq!(adj.row(i).sum(), 6.0);
        }
    }

    #[test]
    fn mu_survives_relabelling() {
        use rand::seq::SliceRandom;
        let g = FiniteGroup::cyclic(3);
        let gr = random_schreier(ActionSpec::signed_points(), &g, 7, 2, 5).unwrap();
        let nv = gr.vertex_count();
        let mut p: Vec<u32> = (0..nv as u32).collect();
        p.shuffle(&mut ChaCha8Rng::seed_from_u64(9));
        // conjugate each generator by p
        let gens = gr
            .gens
            .iter()
            .map(|a| {
                let mut b = vec![0u32; nv];
                for x in 0..nv {
                    b[p[x] as usize] = p[a[x] as usize];
                }
                b
            })
            .collect();
        let h = SchreierGraph::new(gens).unwrap();
        assert!((adjacency_mu(&gr).mu - adjacency_mu(&h).mu).abs() < 1e-9);
    }

    #[test]
    fn ihara_bass_on_small_graphs() {
        let g = FiniteGroup::cyclic(2);
        for seed in 0..6 {
            let gr = random_schreier(ActionSpec::signed_points(), &g, 6, 2, seed).unwrap();
            let h = hashimoto_nu(&gr).unwrap();
            assert!((h.nu - h.nu_from_adjacency).abs() < 1e-6, "seed {seed}: {} vs {}", h.nu, h.nu_from_adjacency);
        }
    }

    #[test]
    fn experiment_is_deterministic() {
        let g = FiniteGroup::cyclic(2);
        let run = || {
            let rep = run_experiment(ActionSpec::signed_points(), &g, &[6, 9], 2, 3, 11).unwrap();
            let mut buf = Vec::new();
            write_trials_csv(&mut buf, &rep.rows).unwrap();
            (buf, rep.summary)
        };
        let (a, sa) = run();
        let (b, _) = run();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with("action,G,n,r,k,trial,seed,X_size,connected,mu,alon_bound,thm_bound,pass"));
        assert!(sa.iter().all(|s| (0.0..=1.0).contains(&s.pass_rate) && s.trials == 3));
    }

    #[test]
    fn trivial_group_projection_is_classical() {
        let one = FiniteGroup::trivial();
        let gr = random_schreier(ActionSpec::projection(), &one, 12, 3, 3).unwrap();
        assert_eq!(gr.vertex_count(), 12);
        assert!(adjacency_mu(&gr).mu <= 6.0 + 1e-9);
    }
}
