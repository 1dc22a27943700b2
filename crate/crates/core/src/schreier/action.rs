//! Actions of G wr S_n on finite point sets, with a fixed point indexing.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::oracle::{Wreath, WreathElement};

/// Largest point set an action may have.
pub const MAX_POINTS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionKind {
    /// i -> sigma(i) on [n].
    Projection,
    /// (i, g) -> (sigma(i), v(sigma(i)) g) on [n] x G.
    SignedPoints,
    /// (A, f) -> (sigma A, i -> v(i) f(sigma^-1 i)) on k-subsets with G-labels.
    LabeledSubsets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActionSpec {
    pub kind: ActionKind,
    /// Subset size for labelled subsets; 1 otherwise.
    pub k: usize,
}

impl ActionSpec {
    pub fn projection() -> ActionSpec {
        ActionSpec { kind: ActionKind::Projection, k: 1 }
    }

    pub fn signed_points() -> ActionSpec {
        ActionSpec { kind: ActionKind::SignedPoints, k: 1 }
    }

    pub fn labeled_subsets(k: usize) -> ActionSpec {
        ActionSpec { kind: ActionKind::LabeledSubsets, k }
    }

    /// Degree of the permutation character as a stable class function.
    pub fn stable_degree(&self) -> usize {
        match self.kind {
            ActionKind::Projection | ActionKind::SignedPoints => 1,
            ActionKind::LabeledSubsets => self.k,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ActionKind::Projection => "projection",
            ActionKind::SignedPoints => "signed",
            ActionKind::LabeledSubsets => "ksubsets",
        }
    }
}

impl fmt::Display for ActionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ActionKind::LabeledSubsets => write!(f, "ksubsets{}", self.k),
            _ => write!(f, "{}", self.name()),
        }
    }
}

impl FromStr for ActionSpec {
    type Err = Error;

    /// `projection`, `signed` / `signed_points`, `ksubsets` (k = 2) or `ksubsetsK`.
    fn from_str(s: &str) -> Result<ActionSpec> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "projection" | "points" => Ok(ActionSpec::projection()),
            "signed" | "signed_points" | "signed-points" => Ok(ActionSpec::signed_points()),
            _ => {
                let rest = s
                    .strip_prefix("labeled_k_subsets")
                    .or_else(|| s.strip_prefix("ksubsets"))
                    .ok_or_else(|| Error::Domain(format!("unknown action '{s}'")))?;
                let k = if rest.is_empty() { 2 } else { rest.trim_start_matches(['=', ':']).parse().map_err(|_| Error::Domain(format!("bad subset size in '{s}'")))? };
                Ok(ActionSpec::labeled_subsets(k))
            }
        }
    }
}

/// The points of an action for fixed (G, n), indexed 0..size.
#[derive(Clone, Debug)]
pub struct PointSet {
    pub spec: ActionSpec,
    pub n: usize,
    m: usize,
    size: usize,
    binom: Vec<Vec<u64>>,
}

fn binomials(n: usize) -> Vec<Vec<u64>> {
    let mut b = vec![vec![0u64; n + 2]; n + 2];
    for i in 0..=n + 1 {
        b[i][0] = 1;
        for j in 1..=i {
            b[i][j] = b[i - 1][j - 1].saturating_add(if j < i { b[i - 1][j] } else { 0 });
        }
    }
    b
}

impl PointSet {
    pub fn new(spec: ActionSpec, group_order: usize, n: usize) -> Result<PointSet> {
        let m = group_order;
        let binom = binomials(n);
        let size: u64 = match spec.kind {
            ActionKind::Projection => n as u64,
            ActionKind::SignedPoints => (n as u64).saturating_mul(m as u64),
            ActionKind::LabeledSubsets => {
                if spec.k == 0 || spec.k > n {
                    return Err(Error::Domain(format!("subset size {} outside 1..={n}", spec.k)));
                }
                binom[n][spec.k].saturating_mul((m as u64).saturating_pow(spec.k as u32))
            }
        };
        if size > MAX_POINTS {
            return Err(Error::CapExceeded { what: "action points", limit: MAX_POINTS, reached: size });
        }
        Ok(PointSet { spec, n, m, size: size as usize, binom })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Colex rank of a sorted subset.
    fn subset_rank(&self, a: &[u32]) -> u64 {
        a.iter().enumerate().map(|(j, &x)| self.binom[x as usize][j + 1]).sum()
    }

    fn subset_unrank(&self, mut r: u64) -> Vec<u32> {
        let k = self.spec.k;
        let mut out = vec![0u32; k];
        let mut x = self.n;
        for j in (0..k).rev() {
            x -= 1;
            while self.binom[x][j + 1] > r {
                x -= 1;
            }
            out[j] = x as u32;
            r -= self.binom[x][j + 1];
        }
        out
    }

    /// A labelled subset as (sorted points, labels aligned with them).
    pub fn subset_point(&self, idx: usize) -> (Vec<u32>, Vec<u32>) {
        let k = self.spec.k;
        let mut labels = vec![0u32; k];
        let mut rest = idx as u64;
        for l in labels.iter_mut() {
            *l = (rest % self.m as u64) as u32;
            rest /= self.m as u64;
        }
        (self.subset_unrank(rest), labels)
    }

    fn subset_index(&self, a: &[u32], labels: &[u32]) -> usize {
        let mut idx = self.subset_rank(a);
        for &l in labels.iter().rev() {
            idx = idx * self.m as u64 + l as u64;
        }
        idx as usize
    }

    /// g . x.
    pub fn apply(&self, wr: &Wreath<'_>, g: &WreathElement, x: usize) -> usize {
        let t = &wr.group.table;
        match self.spec.kind {
            ActionKind::Projection => g.sigma[x] as usize,
            ActionKind::SignedPoints => {
                let (i, h) = (x / self.m, (x % self.m) as u32);
                let j = g.sigma[i] as usize;
                j * self.m + t.mul(g.v[j], h) as usize
            }
            ActionKind::LabeledSubsets => {
                let (a, f) = self.subset_point(x);
                // new label at sigma(a_j) is v(sigma(a_j)) f(a_j)
                let mut moved: Vec<(u32, u32)> = a
                    .iter()
                    .zip(&f)
                    .map(|(&p, &l)| {
                        let j = g.sigma[p as usize];
                        (j, t.mul(g.v[j as usize], l))
                    })
                    .collect();
                moved.sort_unstable();
                let (b, h): (Vec<u32>, Vec<u32>) = moved.into_iter().unzip();
                self.subset_index(&b, &h)
            }
        }
    }

    /// Image array of x -> g . x.
    pub fn permutation(&self, wr: &Wreath<'_>, g: &WreathElement) -> Vec<u32> {
        (0..self.size).map(|x| self.apply(wr, g, x) as u32).collect()
    }
}
