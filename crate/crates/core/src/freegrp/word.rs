//! Reduced words in the free group on b1..br.
//!
//! Letters are nonzero integers: `i` is b_i and `-i` its inverse. In text,
//! `a`..`z` are b1..b26 and capitals are inverses; `^k` raises the previous
//! atom to an integer power, parentheses group, and `[u,v]` is u v u^-1 v^-1.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<i32>,
    rank: usize,
}

fn push_reduced(out: &mut Vec<i32>, x: i32) {
    if out.last() == Some(&-x) {
        out.pop();
    } else {
        out.push(x);
    }
}

impl Word {
    /// Freely reduces `letters`; every |letter| must be in 1..=rank.
    pub fn new(letters: &[i32], rank: usize) -> Result<Word> {
        let mut out = Vec::with_capacity(letters.len());
        for &x in letters {
            if x == 0 || x.unsigned_abs() as usize > rank {
                return Err(Error::Domain(format!("letter {x} outside rank {rank}")));
            }
            push_reduced(&mut out, x);
        }
        Ok(Word { letters: out, rank })
    }

    pub fn empty(rank: usize) -> Word {
        Word { letters: vec![], rank }
    }

    pub fn generator(i: usize, rank: usize) -> Word {
        Word { letters: vec![i as i32], rank }
    }

    /// Parses with a fixed rank.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let letters = Parser { s: text.as_bytes(), pos: 0 }.parse_all()?;
        Word::new(&letters, rank)
    }

    /// Parses and takes the rank from the largest letter used (at least 1).
    pub fn parse_auto(text: &str) -> Result<Word> {
        let letters = Parser { s: text.as_bytes(), pos: 0 }.parse_all()?;
        let rank = letters.iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(1);
        Word::new(&letters, rank)
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        Word::new(&self.letters, rank)
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|x| -x).collect(), rank: self.rank }
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &x in &other.letters {
            push_reduced(&mut out, x);
        }
        Word { letters: out, rank: self.rank.max(other.rank) }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::empty(self.rank);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.letters.len() < 2 || self.letters[0] != -self.letters[self.letters.len() - 1]
    }

    /// (core, c) with self = c * core * c^-1 and core cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut i = 0;
        while l.len() >= 2 * i + 2 && l[i] == -l[l.len() - 1 - i] {
            i += 1;
        }
        let core = Word { letters: l[i..l.len() - i].to_vec(), rank: self.rank };
        let conj = Word { letters: l[..i].to_vec(), rank: self.rank };
        (core, conj)
    }

    /// (u, k) with self = u^k and k maximal. Requires a cyclically reduced,
    /// nonempty word.
    pub fn power_decompose(&self) -> Result<(Word, u32)> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        if !self.is_cyclically_reduced() {
            return Err(Error::Domain(format!("{self} is not cyclically reduced")));
        }
        let n = self.letters.len();
        for d in 1..=n {
            if n % d == 0 && (d..n).all(|i| self.letters[i] == self.letters[i - d]) {
                let u = Word { letters: self.letters[..d].to_vec(), rank: self.rank };
                return Ok((u, (n / d) as u32));
            }
        }
        unreachable!()
    }

    /// Signed exponent sums per generator.
    pub fn abelian_counts(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &x in &self.letters {
            v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
        }
        v
    }

    /// Rotation by `k` letters (cyclically reduced words only).
    pub fn rotate(&self, k: usize) -> Word {
        let mut l = self.letters.clone();
        if !l.is_empty() {
            let n = l.len();
            l.rotate_left(k % n);
        }
        Word { letters: l, rank: self.rank }
    }

    /// Smallest representative of the cyclic word under rotation and inversion.
    pub fn cyclic_canonical(&self) -> Word {
        let (core, _) = self.cyclic_reduce();
        let inv = core.inverse();
        (0..core.len().max(1))
            .flat_map(|k| [core.rotate(k), inv.rotate(k)])
            .min_by(|a, b| a.letters.cmp(&b.letters))
            .unwrap_or(core)
    }
}

pub fn letter_char(x: i32) -> char {
    let base = if x > 0 { b'a' } else { b'A' };
    (base + (x.unsigned_abs() - 1) as u8) as char
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        if self.rank > 26 {
            let parts: Vec<String> = self
                .letters
                .iter()
                .map(|&x| if x > 0 { format!("b{x}") } else { format!("b{}^-1", -x) })
                .collect();
            return write!(f, "{}", parts.join(" "));
        }
        for &x in &self.letters {
            write!(f, "{}", letter_char(x))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Vec<i32>> {
        let w = self.seq()?;
        if self.peek().is_some() {
            return self.err("unexpected character");
        }
        Ok(w)
    }

    fn seq(&mut self) -> Result<Vec<i32>> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            if c == b')' || c == b']' || c == b',' {
                break;
            }
            let atom = self.atom()?;
            let atom = self.exponent(atom)?;
            for x in atom {
                push_reduced(&mut out, x);
            }
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Vec<i32>> {
        let c = self.peek().expect("peeked");
        match c {
            b'a'..=b'z' => {
                self.pos += 1;
                Ok(vec![(c - b'a' + 1) as i32])
            }
            b'A'..=b'Z' => {
                self.pos += 1;
                Ok(vec![-((c - b'A' + 1) as i32)])
            }
            b'(' => {
                self.pos += 1;
                let inner = self.seq()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            b'[' => {
                self.pos += 1;
                let u = self.seq()?;
                if self.peek() != Some(b',') {
                    return self.err("expected ',' in commutator");
                }
                self.pos += 1;
                let v = self.seq()?;
                if self.peek() != Some(b']') {
                    return self.err("expected ']'");
                }
                self.pos += 1;
                let inv = |s: &[i32]| s.iter().rev().map(|x| -x).collect::<Vec<i32>>();
                let mut out = Vec::new();
                for x in [u.clone(), v.clone(), inv(&u), inv(&v)].concat() {
                    push_reduced(&mut out, x);
                }
                Ok(out)
            }
            _ => self.err("unexpected character"),
        }
    }

    fn exponent(&mut self, atom: Vec<i32>) -> Result<Vec<i32>> {
        if self.peek() != Some(b'^') {
            return Ok(atom);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        let k: i64 = match text.parse() {
            Ok(k) => k,
            Err(_) => {
                self.pos = start;
                return self.err("expected integer exponent");
            }
        };
        let base: Vec<i32> = if k < 0 { atom.iter().rev().map(|x| -x).collect() } else { atom };
        let mut out = Vec::new();
        for _ in 0..k.unsigned_abs() {
            for &x in &base {
                push_reduced(&mut out, x);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse_auto(s).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(w("[a,b]").letters(), &[1, 2, -1, -2]);
        assert_eq!(w("aA").letters(), &[] as &[i32]);
        assert_eq!(w("a^2b^2").letters(), &[1, 1, 2, 2]);
        assert_eq!(w("(ab)^-2").letters(), &[-2, -1, -2, -1]);
        assert_eq!(w("[ab,c]"), w("abcBAC"));
        assert!(Word::parse("a(b", 2).is_err());
        assert!(Word::parse("c", 2).is_err());
        assert!(Word::parse("a^x", 2).is_err());
    }

    #[test]
    fn reductions() {
        let (core, c) = w("abA").cyclic_reduce();
        assert_eq!((core.letters(), c.letters()), (&[2][..], &[1][..]));
        assert_eq!(w("abab").power_decompose().unwrap(), (w("ab").with_rank(2).unwrap(), 2));
        assert_eq!(w("aaa").power_decompose().unwrap(), (w("a"), 3));
        assert!(w("").power_decompose().is_err());
        assert_eq!(w("aabbB").abelian_counts(), vec![2, 1]);
    }
}
