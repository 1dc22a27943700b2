use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Cayley table of a finite group on elements `0..order`.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub name: String,
    pub order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    pub identity: u32,
}

/// Above this order associativity is spot-checked on random triples.
const EXHAUSTIVE_ASSOC: usize = 64;
const ASSOC_SAMPLES: usize = 20_000;
pub const MAX_PERM_ORDER: usize = 5040;

impl GroupTable {
    /// Validates a row-major table `mul[x][y] = x*y`.
    pub fn from_cayley(name: &str, rows: &[Vec<u32>]) -> Result<GroupTable> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut mul = Vec::with_capacity(m * m);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::InvalidGroup(format!("row {i} has length {} (expected {m})", r.len())));
            }
            for &x in r {
                if x as usize >= m {
                    return Err(Error::InvalidGroup(format!("entry {x} out of range in row {i}")));
                }
            }
            mul.extend_from_slice(r);
        }
        let identity = (0..m as u32)
            .find(|&e| (0..m).all(|x| mul[e as usize * m + x] == x as u32 && mul[x * m + e as usize] == x as u32))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inv = vec![0u32; m];
        for x in 0..m {
            inv[x] = (0..m as u32)
                .find(|&y| mul[x * m + y as usize] == identity && mul[y as usize * m + x] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
        }
        let t = GroupTable { name: name.to_string(), order: m, mul, inv, identity };
        t.check_associative()?;
        Ok(t)
    }

    fn check_associative(&self) -> Result<()> {
        let m = self.order as u32;
        let bad = |x: u32, y: u32, z: u32| self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z));
        if self.order <= EXHAUSTIVE_ASSOC {
            for x in 0..m {
                for y in 0..m {
                    for z in 0..m {
                        if bad(x, y, z) {
                            return Err(Error::InvalidGroup(format!("not associative at ({x},{y},{z})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..ASSOC_SAMPLES {
                let (x, y, z) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
                if bad(x, y, z) {
                    return Err(Error::InvalidGroup(format!("not associative at ({x},{y},{z})")));
                }
            }
        }
        Ok(())
    }

    /// Closes permutation generators under composition `(p*q)(i) = p(q(i))`.
    /// Element 0 is the identity; the rest follow breadth-first discovery order,
    /// multiplying by generators on the right in the given order.
    pub fn from_perm_gens(name: &str, degree: usize, gens: &[Vec<u32>]) -> Result<(GroupTable, Vec<Vec<u32>>)> {
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x as usize >= degree || std::mem::replace(&mut seen[x as usize], true)) {
                return Err(Error::InvalidGroup(format!("generator {g:?} is not a permutation of 0..{degree}")));
            }
        }
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let p: Vec<u32> = (0..degree).map(|x| elems[i][g[x] as usize]).collect();
                if !index.contains_key(&p) {
                    if elems.len() >= MAX_PERM_ORDER {
                        return Err(Error::CapExceeded { what: "permutation group order", limit: MAX_PERM_ORDER as u64, reached: elems.len() as u64 + 1 });
                    }
                    index.insert(p.clone(), elems.len() as u32);
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let m = elems.len();
        let mut mul = Vec::with_capacity(m * m);
        for a in &elems {
            for b in &elems {
                let p: Vec<u32> = (0..degree).map(|x| a[b[x] as usize]).collect();
                mul.push(index[&p]);
            }
        }
        let mut inv = vec![0u32; m];
        for (i, a) in elems.iter().enumerate() {
            let mut q = vec![0u32; degree];
            for (x, &ax) in a.iter().enumerate() {
                q[ax as usize] = x as u32;
            }
            inv[i] = index[&q];
        }
        Ok((GroupTable { name: name.to_string(), order: m, mul, inv, identity: 0 }, elems))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        self.inv[x as usize]
    }

    pub fn pow(&self, x: u32, k: u64) -> u32 {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: u32) -> u32 {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u32 {
        (0..self.order as u32).map(|x| self.element_order(x)).fold(1, num_integer::lcm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_groups() {
        assert!(GroupTable::from_cayley("bad", &[vec![0, 1], vec![1, 1]]).is_err());
        assert!(GroupTable::from_cayley("bad", &[vec![0, 1]]).is_err());
    }

    #[test]
    fn perm_closure_of_s4() {
        let (t, _) = GroupTable::from_perm_gens("S4", 4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(t.order, 24);
        assert_eq!(t.exponent(), 12);
        for x in 0..24 {
            assert_eq!(t.mul(x, t.inv(x)), t.identity);
        }
    }
}
