//! Elements of G wr S_n and direct evaluation of stable functions on them.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactnum::Cyclo;
use crate::freegrp::Word;
use crate::groups::FiniteGroup;
use crate::measure::{Basis, Monomial, StableFunction};

/// (v, sigma) with v a tuple of group element ids and sigma an image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub v: Vec<u32>,
    pub sigma: Vec<u32>,
}

impl WreathElement {
    pub fn degree(&self) -> usize {
        self.sigma.len()
    }
}

/// G wr S_n for a fixed n.
#[derive(Clone, Debug)]
pub struct Wreath<'g> {
    pub group: &'g FiniteGroup,
    pub n: usize,
}

impl<'g> Wreath<'g> {
    pub fn new(group: &'g FiniteGroup, n: usize) -> Wreath<'g> {
        Wreath { group, n }
    }

    /// |G|^n n!, or None on overflow.
    pub fn order(&self) -> Option<u64> {
        let mut o = (self.group.order() as u64).checked_pow(self.n as u32)?;
        for k in 2..=self.n as u64 {
            o = o.checked_mul(k)?;
        }
        Some(o)
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement { v: vec![self.group.table.identity; self.n], sigma: (0..self.n as u32).collect() }
    }

    fn check(&self, a: &WreathElement) -> Result<()> {
        if a.v.len() != self.n || a.sigma.len() != self.n {
            return Err(Error::Domain(format!("element of degree {} in G wr S_{}", a.sigma.len(), self.n)));
        }
        Ok(())
    }

    /// (v1,s1)(v2,s2) = (v1 . (s1.v2), s1 s2) with (s.v)(i) = v(s^-1 i).
    pub fn mul(&self, a: &WreathElement, b: &WreathElement) -> Result<WreathElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_raw(a, b))
    }

    pub(crate) fn mul_raw(&self, a: &WreathElement, b: &WreathElement) -> WreathElement {
        let t = &self.group.table;
        let n = self.n;
        let mut v = vec![0u32; n];
        let mut sigma = vec![0u32; n];
        // v(s1(j)) = v1(s1(j)) v2(j)
        for j in 0..n {
            let i = a.sigma[j] as usize;
            v[i] = t.mul(a.v[i], b.v[j]);
            sigma[j] = a.sigma[b.sigma[j] as usize];
        }
        WreathElement { v, sigma }
    }

    /// (v,s)^-1 = (u, s^-1) with u(j) = v(s(j))^-1.
    pub fn inv(&self, a: &WreathElement) -> WreathElement {
        let t = &self.group.table;
        let mut sigma = vec![0u32; self.n];
        let mut v = vec![0u32; self.n];
        for j in 0..self.n {
            sigma[a.sigma[j] as usize] = j as u32;
            v[j] = t.inv(a.v[a.sigma[j] as usize]);
        }
        WreathElement { v, sigma }
    }

    pub fn pow(&self, a: &WreathElement, k: i64) -> WreathElement {
        let mut base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        acc
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> WreathElement {
        let m = self.group.order() as u32;
        let v = (0..self.n).map(|_| rng.gen_range(0..m)).collect();
        let mut sigma: Vec<u32> = (0..self.n as u32).collect();
        sigma.shuffle(rng);
        WreathElement { v, sigma }
    }

    pub fn random_seeded(&self, seed: u64) -> WreathElement {
        self.random(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// w(g_1, ..., g_r); generators beyond those supplied are not allowed.
    pub fn eval_word(&self, w: &Word, gens: &[WreathElement]) -> Result<WreathElement> {
        let inv: Vec<WreathElement> = gens.iter().map(|g| self.inv(g)).collect();
        let mut x = self.identity();
        for &l in w.letters() {
            let i = l.unsigned_abs() as usize - 1;
            let g = gens.get(i).ok_or_else(|| Error::Domain(format!("word uses generator {} but {} given", i + 1, gens.len())))?;
            x = self.mul_raw(&x, if l > 0 { g } else { &inv[i] });
        }
        Ok(x)
    }

    /// Mixed-radix index: rank(sigma) |G|^n + sum_i v(i) |G|^i.
    pub fn index(&self, a: &WreathElement) -> u64 {
        let m = self.group.order() as u64;
        let mut idx = perm_rank(&a.sigma);
        for i in (0..self.n).rev() {
            idx = idx * m + a.v[i] as u64;
        }
        idx
    }

    pub fn element(&self, mut idx: u64) -> WreathElement {
        let m = self.group.order() as u64;
        let mut v = vec![0u32; self.n];
        for x in v.iter_mut() {
            *x = (idx % m) as u32;
            idx /= m;
        }
        WreathElement { v, sigma: perm_unrank(idx, self.n) }
    }

    /// Cycles of sigma as (points in order i, sigma(i), ...), each started at
    /// its smallest point.
    pub fn cycles(&self, a: &WreathElement) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                c.push(i as u32);
                i = a.sigma[i] as usize;
            }
            out.push(c);
        }
        out
    }

    /// v(i_t) ... v(i_1) along a cycle i_1 -> i_2 = sigma(i_1) -> ...
    fn cycle_product(&self, a: &WreathElement, c: &[u32]) -> u32 {
        let t = &self.group.table;
        c.iter().fold(t.identity, |x, &i| t.mul(a.v[i as usize], x))
    }

    /// (length, class of cycle product) for every cycle.
    pub fn cycle_data(&self, a: &WreathElement) -> Vec<(u32, usize)> {
        self.cycles(a)
            .iter()
            .map(|c| {
                let cls = self.group.class_of(self.cycle_product(a, c));
                debug_assert!((1..c.len()).all(|r| {
                    let mut rot = c.to_vec();
                    rot.rotate_left(r);
                    self.group.class_of(self.cycle_product(a, &rot)) == cls
                }));
                (c.len() as u32, cls)
            })
            .collect()
    }

    /// Ind phi(v, sigma) = sum over fixed points i of phi(v(i)).
    pub fn eval_ind_phi(&self, a: &WreathElement, phi: usize) -> Result<Cyclo> {
        let chi = self.group.character(phi)?;
        let mut acc = Cyclo::zero();
        for i in 0..self.n {
            if a.sigma[i] as usize == i {
                acc = acc + chi.at(self.group.class_of(a.v[i])).clone();
            }
        }
        Ok(acc)
    }

    /// Number of t-cycles whose product lies in class c.
    pub fn eval_a_tc(&self, a: &WreathElement, t: u32, c: usize) -> u64 {
        self.cycle_data(a).iter().filter(|&&(l, k)| l == t && k == c).count() as u64
    }

    /// prod over parts p of Ind(zeta_p)(g^|p|), by powering in the wreath product.
    pub fn eval_sind(&self, a: &WreathElement, lambda: &Monomial) -> Result<Cyclo> {
        let mut acc = Cyclo::one();
        for &(k, phi) in lambda.parts() {
            let x = self.pow(a, k as i64);
            acc = &acc * &self.eval_ind_phi(&x, phi)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// The same value from the cycle structure: each part p is sent to a
    /// cycle C with |C| dividing |p|, weighted by |C| zeta_p(prod_C^(|p|/|C|)).
    pub fn eval_sind_hom_formula(&self, a: &WreathElement, lambda: &Monomial) -> Result<Cyclo> {
        let data = self.cycle_data(a);
        let mut acc = Cyclo::one();
        for &(k, phi) in lambda.parts() {
            let chi = self.group.character(phi)?;
            let mut s = Cyclo::zero();
            for &(l, cls) in &data {
                if k % l == 0 {
                    s = s + chi.at(self.group.power_class(cls, (k / l) as i64)).scale_int(l as i64);
                }
            }
            acc = &acc * &s;
        }
        Ok(acc)
    }

    /// f(a), in whichever basis f is written.
    pub fn eval_stable(&self, a: &WreathElement, f: &StableFunction) -> Result<Cyclo> {
        let mut acc = Cyclo::zero();
        for (m, c) in f.terms() {
            let v = match f.basis() {
                Basis::SInd => self.eval_sind(a, m)?,
                Basis::A => {
                    let mut p = 1i64;
                    for &(t, cls) in m.parts() {
                        p *= self.eval_a_tc(a, t, cls) as i64;
                    }
                    Cyclo::from_int(p)
                }
            };
            acc = acc + c * &v;
        }
        Ok(acc)
    }
}

/// Floating-point evaluator built once per (group, f) for sampling.
#[derive(Clone, Debug)]
pub struct ComplexEvaluator {
    basis: Basis,
    terms: Vec<(Vec<(u32, usize)>, Complex64)>,
    chars: Vec<Vec<Complex64>>,
    power_class: Vec<Vec<usize>>,
}

fn to_c64(c: &Cyclo) -> Complex64 {
    let (re, im) = c.to_complex();
    Complex64::new(re, im)
}

impl ComplexEvaluator {
    pub fn new(group: &FiniteGroup, f: &StableFunction) -> Result<ComplexEvaluator> {
        let chars = match group.characters() {
            Ok(t) => t.rows.iter().map(|r| r.values.iter().map(to_c64).collect()).collect(),
            Err(e) if f.basis() == Basis::SInd && !f.is_constant() => return Err(e),
            Err(_) => vec![],
        };
        let e = group.conductor as i64;
        let power_class = (0..group.class_count()).map(|c| (0..e).map(|k| group.power_class(c, k)).collect()).collect();
        let terms = f.terms().iter().map(|(m, c)| (m.parts().to_vec(), to_c64(c))).collect();
        Ok(ComplexEvaluator { basis: f.basis(), terms, chars, power_class })
    }

    pub fn eval(&self, data: &[(u32, usize)]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (parts, c) in &self.terms {
            let mut v = *c;
            for &(k, lab) in parts {
                let s = match self.basis {
                    Basis::A => data.iter().filter(|&&(l, cls)| l == k && cls == lab).count() as f64 * Complex64::new(1.0, 0.0),
                    Basis::SInd => {
                        let mut s = Complex64::new(0.0, 0.0);
                        for &(l, cls) in data {
                            if k % l == 0 {
                                let e = self.power_class[cls].len();
                                let p = self.power_class[cls][((k / l) as usize) % e];
                                s += self.chars[lab][p] * l as f64;
                            }
                        }
                        s
                    }
                };
                v *= s;
            }
            acc += v;
        }
        acc
    }
}

/// Lexicographic rank of a permutation (Lehmer code).
pub fn perm_rank(p: &[u32]) -> u64 {
    let n = p.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller;
    }
    rank
}

pub fn perm_unrank(mut r: u64, n: usize) -> Vec<u32> {
    let mut digits = vec![0u64; n];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = r % base;
        r /= base;
    }
    let mut avail: Vec<u32> = (0..n as u32).collect();
    digits.iter().map(|&d| avail.remove(d as usize)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_ranking_is_a_bijection() {
        for r in 0..24 {
            assert_eq!(perm_rank(&perm_unrank(r, 4)), r);
        }
        assert_eq!(perm_unrank(0, 3), vec![0, 1, 2]);
        assert_eq!(perm_unrank(5, 3), vec![2, 1, 0]);
    }

    #[test]
    fn square_of_swap() {
        let g = FiniteGroup::cyclic(2);
        let wr = Wreath::new(&g, 2);
        let x = WreathElement { v: vec![0, 1], sigma: vec![1, 0] };
        let sq = wr.mul(&x, &x).unwrap();
        assert_eq!(sq, WreathElement { v: vec![1, 1], sigma: vec![0, 1] });
        assert_eq!(wr.mul(&x, &wr.inv(&x)).unwrap(), wr.identity());
        assert_eq!(wr.random_seeded(9), wr.random_seeded(9));
    }

    #[test]
    fn class_function_values() {
        let g = FiniteGroup::cyclic(2);
        let wr = Wreath::new(&g, 2);
        let x = WreathElement { v: vec![0, 1], sigma: vec![0, 1] };
        assert!(wr.eval_ind_phi(&x, 1).unwrap().is_zero());
        let wr3 = Wreath::new(&g, 3);
        let y = WreathElement { v: vec![0, 0, 1], sigma: vec![1, 2, 0] };
        assert_eq!(wr3.eval_a_tc(&y, 3, 1), 1);
        assert_eq!(wr3.eval_a_tc(&wr3.identity(), 1, 0), 3);
        assert_eq!(wr3.eval_a_tc(&y, 4, 0), 0);
        let lam = Monomial::single(3, 1);
        assert_eq!(wr3.eval_sind(&y, &lam).unwrap(), Cyclo::from_int(-3));
        assert_eq!(wr3.eval_sind_hom_formula(&y, &lam).unwrap(), Cyclo::from_int(-3));
    }
}
