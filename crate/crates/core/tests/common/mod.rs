//! Shared fixtures: word lists, sInd bases, and a brute-force quotient oracle
//! that shares no code with the breadth-first enumeration.
#![allow(dead_code)]

use std::collections::BTreeSet;

use wreath_core::freegrp::{MultiCoreGraph, Word};
use wreath_core::groups::FiniteGroup;
use wreath_core::measure::Monomial;

fn reduced(l: &[i32]) -> bool {
    l.windows(2).all(|p| p[0] != -p[1])
}

fn rotations(l: &[i32]) -> impl Iterator<Item = Vec<i32>> + '_ {
    (0..l.len()).map(move |k| l[k..].iter().chain(&l[..k]).copied().collect())
}

/// Cyclically reduced non-power words in a, b of length 1..=max_len, one per
/// class under cyclic rotation and inversion.
pub fn canonical_words(max_len: usize) -> Vec<Word> {
    let letters = [1, -1, 2, -2];
    let mut out = Vec::new();
    let mut cur: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &cur {
            for &x in &letters {
                let mut v = w.clone();
                v.push(x);
                if reduced(&v) {
                    next.push(v);
                }
            }
        }
        for v in &next {
            if v.len() > 1 && v[0] == -v[v.len() - 1] {
                continue;
            }
            let inv: Vec<i32> = v.iter().rev().map(|x| -x).collect();
            let min = rotations(v).chain(rotations(&inv)).min().expect("nonempty");
            if &min != v {
                continue;
            }
            let l = v.len();
            let power = (1..l).any(|p| l % p == 0 && (0..l).all(|i| v[i] == v[i % p]));
            if !power {
                out.push(Word::new(v, 2).expect("word"));
            }
        }
        cur = next;
    }
    out
}

/// Every multi-partition with labels in 0..irreducibles and total size 1..=d.
pub fn sind_basis(group: &FiniteGroup, max_degree: u32) -> Vec<Monomial> {
    let labels = group.irreducible_count();
    let mut out = BTreeSet::new();
    // parts added in non-increasing (size, label) order
    fn go(rest: u32, max: (u32, usize), labels: usize, cur: &mut Vec<(u32, usize)>, out: &mut BTreeSet<Monomial>) {
        if !cur.is_empty() {
            out.insert(Monomial::new(cur.clone()));
        }
        for s in (1..=rest.min(max.0)).rev() {
            for l in 0..labels {
                if (s, l) > max {
                    continue;
                }
                cur.push((s, l));
                go(rest - s, (s, l), labels, cur, out);
                cur.pop();
            }
        }
    }
    go(max_degree, (max_degree, labels), labels, &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn canonical(labels: &[usize]) -> Vec<u32> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|x| x == l) {
            Some(i) => i as u32,
            None => {
                seen.push(*l);
                (seen.len() - 1) as u32
            }
        })
        .collect()
}

/// Smallest coarsening of `blocks` in which no two same-label edges leave or
/// enter one block while ending in different blocks.
fn fold(g: &MultiCoreGraph, blocks: &[usize]) -> Vec<u32> {
    let n = blocks.len();
    let mut p: Vec<usize> = (0..n).collect();
    // first vertex of each block stands for it
    for v in 0..n {
        let first = blocks.iter().position(|&b| b == blocks[v]).expect("present");
        let (r, s) = (find(&mut p, first), find(&mut p, v));
        p[s] = r;
    }
    loop {
        let mut changed = false;
        for a in g.edges() {
            for b in g.edges() {
                if a.label != b.label {
                    continue;
                }
                let (sa, sb) = (find(&mut p, a.src as usize), find(&mut p, b.src as usize));
                let (da, db) = (find(&mut p, a.dst as usize), find(&mut p, b.dst as usize));
                if sa == sb && da != db {
                    p[da] = db;
                    changed = true;
                } else if da == db && sa != sb {
                    p[sa] = sb;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| find(&mut p, v)).collect();
    canonical(&roots)
}

/// All set partitions of the vertices, folded and deduplicated.
pub fn brute_force_partitions(g: &MultiCoreGraph) -> BTreeSet<Vec<u32>> {
    let n = g.vertex_count();
    let mut out = BTreeSet::new();
    // restricted growth strings
    let mut a = vec![0usize; n];
    loop {
        out.insert(fold(g, &a));
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let m = a[..i].iter().copied().max().unwrap_or(0);
            if a[i] <= m {
                a[i] += 1;
                for x in a.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

pub fn groups_small() -> Vec<FiniteGroup> {
    vec![FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::sym3()]
}
