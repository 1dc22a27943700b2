//! Cycle graphs spelling words, and their quotients.
//!
//! A quotient of a folded graph is determined by the partition of its
//! vertices. The partitions that occur are exactly the fold-closed ones: two
//! edges with a common label and a common (merged) source, or a common merged
//! target, force their other endpoints together.

use std::collections::{HashMap, HashSet};

use super::graph::{Edge, MultiCoreGraph, Step};
use super::Word;
use crate::error::{Error, Result};

pub const DEFAULT_VERTEX_CAP: usize = 14;
pub const DEFAULT_QUOTIENT_CAP: u64 = 5_000_000;

/// Disjoint cycles, cycle i spelling `words[i]` from `roots[i]`.
#[derive(Clone, Debug)]
pub struct CycleGraph {
    pub words: Vec<Word>,
    pub graph: MultiCoreGraph,
    pub cycles: Vec<Vec<Step>>,
    pub roots: Vec<u32>,
}

impl CycleGraph {
    /// Each word must be nonempty and cyclically reduced.
    pub fn from_words(words: &[Word]) -> Result<CycleGraph> {
        let rank = words.iter().map(|w| w.rank()).max().unwrap_or(1);
        let mut edges = Vec::new();
        let mut cycles = Vec::new();
        let mut roots = Vec::new();
        let mut base = 0u32;
        for w in words {
            if w.is_empty() {
                return Err(Error::EmptyWord);
            }
            if !w.is_cyclically_reduced() {
                return Err(Error::Domain(format!("{w} is not cyclically reduced")));
            }
            let l = w.len() as u32;
            let mut path = Vec::with_capacity(l as usize);
            for (j, &x) in w.letters().iter().enumerate() {
                let a = base + j as u32;
                let b = base + (j as u32 + 1) % l;
                let label = x.unsigned_abs() - 1;
                let (src, dst) = if x > 0 { (a, b) } else { (b, a) };
                path.push((edges.len() as u32, x > 0));
                edges.push(Edge { src, dst, label });
            }
            roots.push(base);
            cycles.push(path);
            base += l;
        }
        let graph = MultiCoreGraph::new(base as usize, rank, edges)?;
        Ok(CycleGraph { words: words.to_vec(), graph, cycles, roots })
    }
}

/// The graph of w^lambda: cycle i spells w^(lambda_i). `w` must be
/// cyclically reduced and nonempty.
pub fn build_w_graph(w: &Word, parts: &[u32]) -> Result<CycleGraph> {
    if parts.iter().any(|&p| p == 0) {
        return Err(Error::Domain("partition parts must be positive".into()));
    }
    let words: Vec<Word> = parts.iter().map(|&p| w.pow(p as i64)).collect();
    CycleGraph::from_words(&words)
}

/// A quotient of a cycle graph, with its image and the images of the cycles.
#[derive(Clone, Debug)]
pub struct QuotientClass {
    /// Block id per source vertex; blocks numbered by smallest member.
    pub blocks_of: Vec<u32>,
    pub image: MultiCoreGraph,
    /// Image edge of each source edge.
    pub edge_map: Vec<u32>,
    pub paths: Vec<Vec<Step>>,
}

impl QuotientClass {
    pub fn block_count(&self) -> usize {
        self.image.vertex_count()
    }

    pub fn euler_char(&self) -> i64 {
        self.image.euler_char()
    }

    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut b = vec![Vec::new(); self.block_count()];
        for (v, &k) in self.blocks_of.iter().enumerate() {
            b[k as usize].push(v as u32);
        }
        b
    }

    pub fn is_identity(&self) -> bool {
        self.block_count() == self.blocks_of.len()
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi as usize] = lo;
        true
    }
}

/// Canonical block labels: blocks numbered in order of first occurrence.
pub fn canonical_labels(labels: &[u32]) -> Vec<u32> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let n = map.len() as u32;
            *map.entry(l).or_insert(n)
        })
        .collect()
}

/// Smallest fold-closed partition coarser than `seed` (labels per vertex).
pub fn fold_closure(g: &MultiCoreGraph, seed: &[u32]) -> Vec<u32> {
    let nv = g.vertex_count();
    let rank = g.rank_letters();
    let mut uf = UnionFind((0..nv as u32).collect());
    let mut first = HashMap::new();
    for (v, &l) in seed.iter().enumerate() {
        if let Some(&u) = first.get(&l) {
            uf.union(u, v as u32);
        } else {
            first.insert(l, v as u32);
        }
    }
    const NONE: u32 = u32::MAX;
    let mut out_map = vec![NONE; nv * rank];
    let mut in_map = vec![NONE; nv * rank];
    loop {
        let mut changed = false;
        out_map.fill(NONE);
        in_map.fill(NONE);
        for e in g.edges() {
            let (s, d) = (uf.find(e.src), uf.find(e.dst));
            let ko = s as usize * rank + e.label as usize;
            if out_map[ko] == NONE {
                out_map[ko] = d;
            } else if uf.union(out_map[ko], d) {
                changed = true;
            }
            let d = uf.find(d);
            let s = uf.find(s);
            let ki = d as usize * rank + e.label as usize;
            if in_map[ki] == NONE {
                in_map[ki] = s;
            } else if uf.union(in_map[ki], s) {
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let roots: Vec<u32> = (0..nv as u32).map(|v| uf.find(v)).collect();
    canonical_labels(&roots)
}

/// Builds the quotient for a fold-closed partition.
pub fn quotient_by(src: &CycleGraph, blocks_of: &[u32]) -> Result<QuotientClass> {
    let g = &src.graph;
    let nb = blocks_of.iter().copied().max().map(|m| m as usize + 1).unwrap_or(0);
    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    let mut edges = Vec::new();
    let mut edge_map = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let (s, d) = (blocks_of[e.src as usize], blocks_of[e.dst as usize]);
        let id = *index.entry((s, e.label)).or_insert_with(|| {
            edges.push(Edge { src: s, dst: d, label: e.label });
            edges.len() as u32 - 1
        });
        if edges[id as usize].dst != d {
            return Err(Error::Domain("partition is not fold-closed".into()));
        }
        edge_map.push(id);
    }
    let image = MultiCoreGraph::new(nb, g.rank_letters(), edges)?;
    let paths = src.cycles.iter().map(|c| c.iter().map(|&(e, f)| (edge_map[e as usize], f)).collect()).collect();
    Ok(QuotientClass { blocks_of: blocks_of.to_vec(), image, edge_map, paths })
}

/// Limits on quotient enumeration.
#[derive(Clone, Copy, Debug)]
pub struct QuotientCaps {
    pub max_vertices: usize,
    pub max_quotients: u64,
}

impl Default for QuotientCaps {
    fn default() -> Self {
        QuotientCaps { max_vertices: DEFAULT_VERTEX_CAP, max_quotients: DEFAULT_QUOTIENT_CAP }
    }
}

/// All fold-closed partitions, by breadth-first merging from the identity.
/// Returned in discovery order, which starts with the identity partition.
pub fn enumerate_partitions(g: &MultiCoreGraph, caps: QuotientCaps) -> Result<Vec<Vec<u32>>> {
    let nv = g.vertex_count();
    if nv > caps.max_vertices {
        return Err(Error::CapExceeded { what: "w-graph vertices", limit: caps.max_vertices as u64, reached: nv as u64 });
    }
    let start = fold_closure(g, &(0..nv as u32).collect::<Vec<_>>());
    let mut seen: HashSet<Vec<u32>> = HashSet::from([start.clone()]);
    let mut order = vec![start];
    let mut head = 0;
    while head < order.len() {
        let p = order[head].clone();
        head += 1;
        let nb = p.iter().copied().max().unwrap_or(0) + 1;
        for i in 0..nb {
            for j in i + 1..nb {
                let seed: Vec<u32> = p.iter().map(|&b| if b == j { i } else { b }).collect();
                let q = fold_closure(g, &seed);
                if seen.insert(q.clone()) {
                    if order.len() as u64 >= caps.max_quotients {
                        return Err(Error::CapExceeded { what: "quotients", limit: caps.max_quotients, reached: order.len() as u64 + 1 });
                    }
                    order.push(q);
                }
            }
        }
    }
    Ok(order)
}

/// All quotients of a cycle graph.
pub fn enumerate_quotients(src: &CycleGraph, caps: QuotientCaps) -> Result<Vec<QuotientClass>> {
    enumerate_partitions(&src.graph, caps)?.iter().map(|p| quotient_by(src, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(w: &str, parts: &[u32]) -> usize {
        let g = build_w_graph(&Word::parse_auto(w).unwrap(), parts).unwrap();
        enumerate_quotients(&g, QuotientCaps::default()).unwrap().len()
    }

    #[test]
    fn small_quotient_counts() {
        assert_eq!(count("ab", &[1]), 2);
        assert_eq!(count("a", &[1, 1]), 2);
        assert_eq!(count("a", &[1]), 1);
    }

    #[test]
    fn vertex_cap() {
        let g = build_w_graph(&Word::parse_auto("ab").unwrap(), &[4, 4]).unwrap();
        let caps = QuotientCaps { max_vertices: 14, ..Default::default() };
        assert!(matches!(enumerate_quotients(&g, caps), Err(Error::CapExceeded { reached: 16, .. })));
    }
}
