//! Whitehead automorphisms and greedy reduction of cyclic length.

use crate::freegrp::Word;

/// The type-II automorphism given by a multiplier letter `a` and a cut set
/// `S` of letters containing `a` but not `a^-1`. A letter y other than a^{+-1}
/// maps to `[a^-1 if y^-1 in S] y [a if y in S]`; `a` is fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadAuto {
    pub rank: usize,
    pub multiplier: i32,
    pub cut: Vec<i32>,
}

impl WhiteheadAuto {
    fn in_cut(&self, y: i32) -> bool {
        self.cut.contains(&y)
    }

    pub fn image_of_letter(&self, y: i32) -> Vec<i32> {
        let a = self.multiplier;
        if y == a || y == -a {
            return vec![y];
        }
        let mut v = Vec::with_capacity(3);
        if self.in_cut(-y) {
            v.push(-a);
        }
        v.push(y);
        if self.in_cut(y) {
            v.push(a);
        }
        v
    }

    /// Image of a letter sequence, freely reduced.
    pub fn apply_letters(&self, w: &[i32]) -> Vec<i32> {
        let mut out: Vec<i32> = Vec::with_capacity(w.len() * 2);
        for &y in w {
            for x in self.image_of_letter(y) {
                if out.last() == Some(&-x) {
                    out.pop();
                } else {
                    out.push(x);
                }
            }
        }
        out
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::new(&self.apply_letters(w.letters()), w.rank()).expect("letters stay in rank")
    }
}

/// All nontrivial type-II automorphisms of F_k.
pub fn whitehead_autos(k: usize) -> Vec<WhiteheadAuto> {
    let letters: Vec<i32> = (1..=k as i32).flat_map(|i| [i, -i]).collect();
    let mut out = Vec::new();
    for &a in &letters {
        let others: Vec<i32> = letters.iter().copied().filter(|&y| y != a && y != -a).collect();
        for mask in 1u64..(1u64 << others.len()) {
            let mut cut = vec![a];
            for (i, &y) in others.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    cut.push(y);
                }
            }
            out.push(WhiteheadAuto { rank: k, multiplier: a, cut });
        }
    }
    out
}

/// Cyclic reduction of a letter sequence.
pub fn cyclic_core(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    let mut i = 0;
    while out.len() >= 2 * i + 2 && out[i] == -out[out.len() - 1 - i] {
        i += 1;
    }
    out[i..out.len() - i].to_vec()
}

/// Greedy descent: apply any automorphism that strictly shortens the cyclic
/// word until none does. Returns the final length and the automorphisms used.
pub fn min_cyclic_length(w: &Word, k: usize) -> (usize, Vec<WhiteheadAuto>) {
    let autos = whitehead_autos(k);
    let mut cur = cyclic_core(w.letters());
    let mut used = Vec::new();
    loop {
        let best = autos
            .iter()
            .map(|a| (cyclic_core(&a.apply_letters(&cur)), a))
            .min_by_key(|(v, _)| v.len());
        match best {
            Some((v, a)) if v.len() < cur.len() => {
                cur = v;
                used.push(a.clone());
            }
            _ => return (cur.len(), used),
        }
    }
}

/// Whether w is part of a free basis of F_k.
pub fn is_primitive(w: &Word, k: usize) -> bool {
    min_cyclic_length(w, k).0 == 1
}
