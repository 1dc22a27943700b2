//! Adjacency and non-backtracking spectra of Schreier graphs.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Graphs up to this size are solved densely.
pub const DENSE_MAX: usize = 2000;
pub const SPECTRAL_TOL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 100_000;
/// Largest directed-edge count for the dense non-backtracking check.
pub const HASHIMOTO_MAX_EDGES: usize = 1600;

/// The 2r-regular multigraph with edges x -- g_i(x).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierGraph {
    pub gens: Vec<Vec<u32>>,
}

impl SchreierGraph {
    pub fn new(gens: Vec<Vec<u32>>) -> Result<SchreierGraph> {
        let size = gens.first().map(|g| g.len()).unwrap_or(0);
        for g in &gens {
            let mut seen = vec![false; size];
            if g.len() != size {
                return Err(Error::Domain("generator arrays of different sizes".into()));
            }
            for &y in g {
                if y as usize >= size || std::mem::replace(&mut seen[y as usize], true) {
                    return Err(Error::Domain("generator is not a permutation".into()));
                }
            }
        }
        Ok(SchreierGraph { gens })
    }

    pub fn vertex_count(&self) -> usize {
        self.gens.first().map(|g| g.len()).unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        2 * self.gens.len()
    }

    /// Component id per vertex, numbered by first vertex.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let inv: Vec<Vec<u32>> = self
            .gens
            .iter()
            .map(|g| {
                let mut v = vec![0u32; n];
                for (x, &y) in g.iter().enumerate() {
                    v[y as usize] = x as u32;
                }
                v
            })
            .collect();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for y in self.gens.iter().chain(&inv).map(|g| g[x] as usize) {
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let n = self.vertex_count();
        let mut a = DMatrix::zeros(n, n);
        for g in &self.gens {
            for (x, &y) in g.iter().enumerate() {
                a[(x, y as usize)] += 1.0;
                a[(y as usize, x)] += 1.0;
            }
        }
        a
    }

    fn apply_adjacency(&self, x: &DVector<f64>, out: &mut DVector<f64>) {
        out.fill(0.0);
        for g in &self.gens {
            for (i, &j) in g.iter().enumerate() {
                out[i] += x[j as usize];
                out[j as usize] += x[i];
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralMethod {
    Dense,
    Iterative,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    /// max(lambda_2, -lambda_min) off the per-component constants.
    pub mu: f64,
    pub lambda2: f64,
    pub lambda_min: f64,
    pub connected: bool,
    pub components: usize,
    pub method: SpectralMethod,
    pub tolerance: f64,
    pub converged: bool,
    /// Set when every eigenvalue is trivial (e.g. a single vertex).
    pub no_nontrivial: bool,
}

/// Orthonormal basis of per-component constant vectors.
fn constant_basis(comp: &[usize], count: usize) -> Vec<DVector<f64>> {
    let mut sizes = vec![0usize; count];
    for &c in comp {
        sizes[c] += 1;
    }
    (0..count)
        .map(|c| DVector::from_iterator(comp.len(), comp.iter().map(|&k| if k == c { 1.0 / (sizes[c] as f64).sqrt() } else { 0.0 })))
        .collect()
}

fn deflate(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for b in basis {
        let d = v.dot(b);
        v.axpy(-d, b, 1.0);
    }
}

/// Top eigenvalue of (A + shift I) or (shift I - A) off the constants.
fn power_iteration(g: &SchreierGraph, basis: &[DVector<f64>], shift: f64, negate: bool, seed: u64) -> (f64, bool) {
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::from_iterator(n, (0..n).map(|_| rng.gen_range(-1.0..1.0)));
    deflate(&mut v, basis);
    let norm = v.norm();
    if norm == 0.0 {
        return (shift, true);
    }
    v /= norm;
    let mut av = DVector::zeros(n);
    let mut prev = f64::NAN;
    for _ in 0..MAX_ITERATIONS {
        g.apply_adjacency(&v, &mut av);
        if negate {
            av.scale_mut(-1.0);
        }
        av.axpy(shift, &v, 1.0);
        deflate(&mut av, basis);
        let rq = v.dot(&av);
        let norm = av.norm();
        if norm == 0.0 {
            return (0.0, true);
        }
        v.copy_from(&av);
        v /= norm;
        if (rq - prev).abs() <= SPECTRAL_TOL * shift.max(1.0) {
            return (rq, true);
        }
        prev = rq;
    }
    (prev, false)
}

pub fn adjacency_mu(g: &SchreierGraph) -> SpectralReport {
    let n = g.vertex_count();
    let d = g.degree() as f64;
    let (comp, count) = g.components();
    let base = SpectralReport {
        mu: 0.0,
        lambda2: 0.0,
        lambda_min: 0.0,
        connected: count <= 1,
        components: count,
        method: SpectralMethod::Dense,
        tolerance: SPECTRAL_TOL,
        converged: true,
        no_nontrivial: false,
    };
    if n <= count {
        return SpectralReport { no_nontrivial: true, ..base };
    }
    if n <= DENSE_MAX {
        let mut ev: Vec<f64> = g.adjacency().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        // each component contributes one eigenvalue d for its constant vector
        let rest = &ev[count..];
        let lambda2 = rest[0];
        let lambda_min = *rest.last().expect("nonempty");
        return SpectralReport { mu: lambda2.max(-lambda_min), lambda2, lambda_min, ..base };
    }
    let basis = constant_basis(&comp, count);
    let (top, ok1) = power_iteration(g, &basis, d, false, 0x5eed_0001);
    let (bot, ok2) = power_iteration(g, &basis, d, true, 0x5eed_0002);
    let lambda2 = top - d;
    let lambda_min = d - bot;
    SpectralReport {
        mu: lambda2.max(-lambda_min),
        lambda2,
        lambda_min,
        method: SpectralMethod::Iterative,
        converged: ok1 && ok2,
        ..base
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HashimotoReport {
    /// Largest |t| over non-backtracking eigenvalues other than d - 1 (one
    /// per component).
    pub nu: f64,
    /// The same quantity predicted from the adjacency spectrum by Ihara-Bass.
    pub nu_from_adjacency: f64,
    /// All eigenvalues lie on the unit circle (cycle graphs).
    pub unit_circle: bool,
}

const SCHUR_SWEEPS: usize = 100;

/// Capped real Schur; the uncapped default can stall at machine epsilon on
/// the defective +-1 blocks, so retry once after a random orthogonal change
/// of basis.
fn nonsymmetric_eigenvalues(b: DMatrix<f64>) -> Option<Vec<Complex64>> {
    let m = b.nrows();
    if let Some(s) = Schur::try_new(b.clone(), 1e-14, SCHUR_SWEEPS * m) {
        return Some(s.complex_eigenvalues().iter().copied().collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c40_0001);
    let q = DMatrix::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0)).qr().q();
    let c = q.transpose() * b * &q;
    Schur::try_new(c, 1e-14, SCHUR_SWEEPS * m).map(|s| s.complex_eigenvalues().iter().copied().collect())
}

/// Non-backtracking spectrum by a dense eigensolve, with the Ihara-Bass
/// prediction t^2 - lambda t + (d - 1) = 0 for comparison.
pub fn hashimoto_nu(g: &SchreierGraph) -> Result<HashimotoReport> {
    let n = g.vertex_count();
    let r = g.gens.len();
    let m = 2 * r * n;
    if m > HASHIMOTO_MAX_EDGES {
        return Err(Error::CapExceeded { what: "directed edges", limit: HASHIMOTO_MAX_EDGES as u64, reached: m as u64 });
    }
    // directed edge (i, x, fwd): fwd goes x -> g_i(x), its reverse g_i(x) -> x
    let idx = |i: usize, x: usize, fwd: bool| (i * n + x) * 2 + usize::from(!fwd);
    let mut src = vec![0usize; m];
    let mut dst = vec![0usize; m];
    for (i, gi) in g.gens.iter().enumerate() {
        for x in 0..n {
            let y = gi[x] as usize;
            (src[idx(i, x, true)], dst[idx(i, x, true)]) = (x, y);
            (src[idx(i, x, false)], dst[idx(i, x, false)]) = (y, x);
        }
    }
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..m {
        out_of[src[e]].push(e);
    }
    let mut b = DMatrix::<f64>::zeros(m, m);
    for e in 0..m {
        let rev = e ^ 1;
        for &f in &out_of[dst[e]] {
            if f != rev {
                b[(e, f)] = 1.0;
            }
        }
    }
    let d = g.degree() as f64;
    let (_, count) = g.components();
    let ev = nonsymmetric_eigenvalues(b).ok_or(Error::CapExceeded {
        what: "Schur iterations",
        limit: (SCHUR_SWEEPS * m) as u64,
        reached: (SCHUR_SWEEPS * m) as u64,
    })?;
    let mut mags: Vec<(f64, f64)> = ev.iter().map(|z| ((z.re - (d - 1.0)).hypot(z.im), z.norm())).collect();
    mags.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nu = mags[count.min(mags.len())..].iter().map(|x| x.1).fold(0.0, f64::max);
    let unit_circle = mags.iter().all(|x| (x.1 - 1.0).abs() < 1e-6);
    let adj = adjacency_mu(g);
    // roots of t^2 - lambda t + (d - 1); the largest comes from |lambda| = mu
    let root = |l: f64| {
        let disc = l * l - 4.0 * (d - 1.0);
        if disc >= 0.0 {
            (l.abs() + disc.sqrt()) / 2.0
        } else {
            (d - 1.0).sqrt()
        }
    };
    let mut nu_adj = if adj.no_nontrivial { 0.0 } else { root(adj.mu) };
    // the partner 1 of each trivial d - 1 always remains
    if m > count {
        nu_adj = nu_adj.max(1.0);
    }
    Ok(HashimotoReport { nu, nu_from_adjacency: nu_adj, unit_circle })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> SchreierGraph {
        SchreierGraph::new(vec![(0..n).map(|i| (i + 1) % n).collect()]).unwrap()
    }

    #[test]
    fn cycle_spectrum() {
        use std::f64::consts::PI;
        for n in [5u32, 8, 11] {
            let r = adjacency_mu(&cycle(n));
            assert!((r.lambda2 - 2.0 * (2.0 * PI / n as f64).cos()).abs() < 1e-9);
            // odd cycles bottom out at -2cos(pi/n), even ones are bipartite
            let want = if n % 2 == 0 { 2.0 } else { 2.0 * (PI / n as f64).cos() };
            assert!((r.mu - want).abs() < 1e-9, "n={n}: {} vs {want}", r.mu);
        }
        let h = hashimoto_nu(&cycle(6)).unwrap();
        assert!(h.unit_circle);
        assert!((h.nu - 1.0).abs() < 1e-6);
    }

    #[test]
    fn single_vertex_and_disconnected() {
        let g = SchreierGraph::new(vec![vec![0], vec![0]]).unwrap();
        let r = adjacency_mu(&g);
        assert!(r.no_nontrivial && r.mu == 0.0);
        let two = SchreierGraph::new(vec![vec![1, 0, 3, 2]]).unwrap();
        let r = adjacency_mu(&two);
        assert!(!r.connected);
        assert_eq!(r.components, 2);
        assert!((r.mu - 2.0).abs() < 1e-9);
    }
}
