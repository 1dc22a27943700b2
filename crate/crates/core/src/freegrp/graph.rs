//! Finite folded graphs labelled by the generators b1..br.
//!
//! Each vertex has at most one outgoing and one incoming edge per label, so a
//! graph immerses into the bouquet. Closed paths are edge sequences with a
//! direction flag; the fundamental group of a component is read off in the
//! free basis given by the non-tree edges of a breadth-first spanning tree.

use std::collections::VecDeque;
use std::fmt::Write as _;

use super::word::letter_char;
use super::Word;
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: u32,
    pub dst: u32,
    /// Zero-based generator index.
    pub label: u32,
}

/// A step of a path: edge id and whether it is traversed src -> dst.
pub type Step = (u32, bool);

#[derive(Clone, Debug)]
pub struct MultiCoreGraph {
    nv: usize,
    rank: usize,
    edges: Vec<Edge>,
    out: Vec<u32>,
    inn: Vec<u32>,
}

impl MultiCoreGraph {
    /// Errors if two edges with the same label leave or enter one vertex.
    pub fn new(nv: usize, rank: usize, edges: Vec<Edge>) -> Result<MultiCoreGraph> {
        let mut out = vec![NONE; nv * rank];
        let mut inn = vec![NONE; nv * rank];
        for (i, e) in edges.iter().enumerate() {
            if e.src as usize >= nv || e.dst as usize >= nv || e.label as usize >= rank {
                return Err(Error::Domain(format!("edge {e:?} out of range")));
            }
            let o = &mut out[e.src as usize * rank + e.label as usize];
            let n = &mut inn[e.dst as usize * rank + e.label as usize];
            if *o != NONE || *n != NONE {
                return Err(Error::Domain(format!("graph is not folded at edge {e:?}")));
            }
            *o = i as u32;
            *n = i as u32;
        }
        Ok(MultiCoreGraph { nv, rank, edges, out, inn })
    }

    pub fn vertex_count(&self) -> usize {
        self.nv
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn rank_letters(&self) -> usize {
        self.rank
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edge(&self, v: u32, label: u32) -> Option<u32> {
        let e = self.out[v as usize * self.rank + label as usize];
        (e != NONE).then_some(e)
    }

    pub fn in_edge(&self, v: u32, label: u32) -> Option<u32> {
        let e = self.inn[v as usize * self.rank + label as usize];
        (e != NONE).then_some(e)
    }

    /// Edge counts per label.
    pub fn label_counts(&self) -> Vec<u32> {
        let mut c = vec![0u32; self.rank];
        for e in &self.edges {
            c[e.label as usize] += 1;
        }
        c
    }

    pub fn euler_char(&self) -> i64 {
        self.nv as i64 - self.edges.len() as i64
    }

    /// Neighbours of v in the fixed order (label asc, outgoing before incoming).
    fn neighbours(&self, v: u32) -> impl Iterator<Item = (u32, u32, bool)> + '_ {
        (0..self.rank as u32).flat_map(move |l| {
            let o = self.out_edge(v, l).map(|e| (self.edges[e as usize].dst, e, true));
            let i = self.in_edge(v, l).map(|e| (self.edges[e as usize].src, e, false));
            o.into_iter().chain(i)
        })
    }

    /// Component id per vertex, numbered by smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.nv];
        let mut next = 0;
        for s in 0..self.nv {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut q = VecDeque::from([s as u32]);
            while let Some(v) = q.pop_front() {
                for (u, _, _) in self.neighbours(v) {
                    if comp[u as usize] == usize::MAX {
                        comp[u as usize] = next;
                        q.push_back(u);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn spanning_basis(&self) -> SpanningBasis {
        let comp = self.components();
        let ncomp = comp.iter().copied().max().map(|m| m + 1).unwrap_or(0);
        let mut tree = vec![false; self.edges.len()];
        let mut seen = vec![false; self.nv];
        for s in 0..self.nv {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut q = VecDeque::from([s as u32]);
            while let Some(v) = q.pop_front() {
                for (u, e, _) in self.neighbours(v) {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        tree[e as usize] = true;
                        q.push_back(u);
                    }
                }
            }
        }
        let mut ranks = vec![0usize; ncomp];
        let mut generator = vec![None; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if !tree[i] {
                let c = comp[e.src as usize];
                ranks[c] += 1;
                generator[i] = Some(ranks[c] as i32);
            }
        }
        SpanningBasis { comp, ranks, generator, edge_src: self.edges.iter().map(|e| e.src).collect() }
    }

    /// Isomorphism-invariant key; `marks` (one value per vertex) must be preserved.
    pub fn canonical_key(&self, marks: Option<&[u32]>) -> String {
        self.canonical_form(marks).0
    }

    /// Canonical key together with the canonical vertex numbering.
    pub fn canonical_form(&self, marks: Option<&[u32]>) -> (String, Vec<u32>) {
        let comp = self.components();
        let ncomp = comp.iter().copied().max().map(|m| m + 1).unwrap_or(0);
        let mut best: Vec<(String, Vec<u32>)> = Vec::with_capacity(ncomp);
        for c in 0..ncomp {
            let mut cb: Option<(String, Vec<u32>)> = None;
            for s in (0..self.nv).filter(|&v| comp[v] == c) {
                let (key, order) = self.encode_from(s as u32, marks);
                if cb.as_ref().map(|b| key < b.0).unwrap_or(true) {
                    cb = Some((key, order));
                }
            }
            best.push(cb.expect("nonempty component"));
        }
        best.sort();
        let mut relabel = vec![0u32; self.nv];
        let mut next = 0u32;
        let mut keys = Vec::new();
        for (key, order) in best {
            for v in order {
                relabel[v as usize] = next;
                next += 1;
            }
            keys.push(key);
        }
        (keys.join("|"), relabel)
    }

    fn encode_from(&self, s: u32, marks: Option<&[u32]>) -> (String, Vec<u32>) {
        let mut num = vec![NONE; self.nv];
        let mut order = vec![s];
        num[s as usize] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for (u, _, _) in self.neighbours(v) {
                if num[u as usize] == NONE {
                    num[u as usize] = order.len() as u32;
                    order.push(u);
                }
            }
        }
        let mut key = String::new();
        for (i, &v) in order.iter().enumerate() {
            let _ = write!(key, "{i}");
            if let Some(m) = marks {
                let _ = write!(key, "#{}", m[v as usize]);
            }
            for l in 0..self.rank as u32 {
                if let Some(e) = self.out_edge(v, l) {
                    let _ = write!(key, ",{}>{}", l, num[self.edges[e as usize].dst as usize]);
                }
            }
            key.push(';');
        }
        (key, order)
    }

    /// One `src --label--> dst` line per edge in canonical numbering and order.
    pub fn dump(&self) -> String {
        let (_, relabel) = self.canonical_form(None);
        let mut lines: Vec<(u32, u32, u32)> =
            self.edges.iter().map(|e| (relabel[e.src as usize], e.label, relabel[e.dst as usize])).collect();
        lines.sort();
        let mut out = String::new();
        for (s, l, d) in lines {
            let _ = writeln!(out, "{s} --{}--> {d}", letter_char(l as i32 + 1));
        }
        out
    }
}

/// Free bases of the component fundamental groups from a spanning forest.
#[derive(Clone, Debug)]
pub struct SpanningBasis {
    comp: Vec<usize>,
    ranks: Vec<usize>,
    /// Generator index (1-based, per component) of each non-tree edge.
    generator: Vec<Option<i32>>,
    edge_src: Vec<u32>,
}

impl SpanningBasis {
    pub fn component_count(&self) -> usize {
        self.ranks.len()
    }

    pub fn component_of_vertex(&self, v: u32) -> usize {
        self.comp[v as usize]
    }

    pub fn component_rank(&self, c: usize) -> usize {
        self.ranks[c]
    }

    /// Component containing a nonempty path.
    pub fn component_of_path(&self, path: &[Step]) -> usize {
        self.comp[self.edge_src[path[0].0 as usize] as usize]
    }

    /// Letters of a path in its component's basis, freely reduced.
    pub fn path_letters(&self, path: &[Step]) -> Vec<i32> {
        let mut out: Vec<i32> = Vec::new();
        for &(e, fwd) in path {
            if let Some(g) = self.generator[e as usize] {
                let x = if fwd { g } else { -g };
                if out.last() == Some(&-x) {
                    out.pop();
                } else {
                    out.push(x);
                }
            }
        }
        out
    }

    pub fn path_word(&self, path: &[Step]) -> Word {
        let c = self.component_of_path(path);
        Word::new(&self.path_letters(path), self.ranks[c].max(1)).expect("letters within component rank")
    }
}
