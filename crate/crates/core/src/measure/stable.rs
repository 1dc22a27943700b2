//! Stable class functions on G wr S_n as polynomials in two families of
//! generators.
//!
//! Both families are indexed by a positive integer and a label, and products
//! are multisets of such pairs, so one [`Monomial`] type serves both:
//!
//! * `SInd`: the pair (k, phi) stands for (Ind phi)^(k), x -> Ind phi(x^k);
//!   a monomial is the product over its parts, i.e. sInd of a multi-partition.
//! * `A`: the pair (t, c) stands for a_{t,c}, the number of t-cycles whose
//!   cycle product lies in the class c.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{Cyclo, Rational};
use crate::groups::FiniteGroup;

/// Multiset of (size, label) parts, kept sorted by size descending then label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(u32, usize)>);

/// A multi-partition: parts labelled by irreducible characters.
pub type MultiPartition = Monomial;

impl Monomial {
    pub fn new(mut parts: Vec<(u32, usize)>) -> Monomial {
        assert!(parts.iter().all(|&(k, _)| k > 0), "parts must be positive");
        parts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        Monomial(parts)
    }

    pub fn one() -> Monomial {
        Monomial(vec![])
    }

    pub fn single(k: u32, label: usize) -> Monomial {
        Monomial::new(vec![(k, label)])
    }

    pub fn parts(&self) -> &[(u32, usize)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of part sizes.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.0).sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The underlying partition (sizes, descending).
    pub fn sizes(&self) -> Vec<u32> {
        self.0.iter().map(|p| p.0).collect()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|p| p.1).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Every part multiplied by k.
    pub fn twist(&self, k: u32) -> Monomial {
        Monomial::new(self.0.iter().map(|&(s, l)| (s * k, l)).collect())
    }

    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Monomial {
        Monomial::new(self.0.iter().map(|&(s, l)| (s, f(l))).collect())
    }

    /// Sub-multiset picked by a bitmask over part positions, and its complement.
    pub fn split(&self, mask: u64) -> (Monomial, Monomial) {
        let (mut a, mut b) = (vec![], vec![]);
        for (i, &p) in self.0.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a.push(p);
            } else {
                b.push(p);
            }
        }
        (Monomial(a), Monomial(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    SInd,
    A,
}

/// A finite linear combination of monomials in one basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableFunction {
    basis: Basis,
    terms: BTreeMap<Monomial, Cyclo>,
}

impl StableFunction {
    pub fn zero(basis: Basis) -> StableFunction {
        StableFunction { basis, terms: BTreeMap::new() }
    }

    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (Monomial, Cyclo)>) -> StableFunction {
        let mut f = StableFunction::zero(basis);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn constant(c: Cyclo) -> StableFunction {
        StableFunction::from_terms(Basis::SInd, [(Monomial::one(), c)])
    }

    pub fn monomial(basis: Basis, m: Monomial) -> StableFunction {
        StableFunction::from_terms(basis, [(m, Cyclo::one())])
    }

    pub fn sind(m: MultiPartition) -> StableFunction {
        StableFunction::monomial(Basis::SInd, m)
    }

    /// (Ind phi)^(k).
    pub fn ind_power(phi: usize, k: u32) -> StableFunction {
        StableFunction::sind(Monomial::single(k, phi))
    }

    pub fn ind(phi: usize) -> StableFunction {
        StableFunction::ind_power(phi, 1)
    }

    pub fn a(t: u32, class: usize) -> StableFunction {
        StableFunction::monomial(Basis::A, Monomial::single(t, class))
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Cyclo> {
        &self.terms
    }

    pub fn add_term(&mut self, m: Monomial, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Cyclo::zero);
        *e = &*e + &c;
        if e.is_zero() {
            let key = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Cyclo {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Cyclo::zero)
    }

    /// Largest monomial degree (0 for constants and zero).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Cyclo) -> StableFunction {
        StableFunction::from_terms(self.basis, self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn neg(&self) -> StableFunction {
        self.scale(&Cyclo::from_int(-1))
    }

    /// Rewrites both operands in a shared basis when they differ.
    fn align(&self, other: &StableFunction, g: &FiniteGroup) -> Result<(StableFunction, StableFunction)> {
        if self.basis == other.basis {
            return Ok((self.clone(), other.clone()));
        }
        if self.is_constant() {
            return Ok((self.with_basis_tag(other.basis), other.clone()));
        }
        if other.is_constant() {
            return Ok((self.clone(), other.with_basis_tag(self.basis)));
        }
        Ok((self.to_sind(g)?, other.to_sind(g)?))
    }

    fn with_basis_tag(&self, basis: Basis) -> StableFunction {
        debug_assert!(self.is_constant());
        StableFunction { basis, terms: self.terms.clone() }
    }

    pub fn add(&self, other: &StableFunction, g: &FiniteGroup) -> Result<StableFunction> {
        let (mut a, b) = self.align(other, g)?;
        for (m, c) in b.terms {
            a.add_term(m, c);
        }
        Ok(a)
    }

    pub fn sub(&self, other: &StableFunction, g: &FiniteGroup) -> Result<StableFunction> {
        self.add(&other.neg(), g)
    }

    pub fn mul(&self, other: &StableFunction, g: &FiniteGroup) -> Result<StableFunction> {
        let (a, b) = self.align(other, g)?;
        Ok(a.mul_same(&b))
    }

    fn mul_same(&self, other: &StableFunction) -> StableFunction {
        let mut out = StableFunction::zero(self.basis);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Same function in the sInd basis.
    pub fn to_sind(&self, g: &FiniteGroup) -> Result<StableFunction> {
        match self.basis {
            Basis::SInd => Ok(self.clone()),
            Basis::A => {
                let mut memo = HashMap::new();
                let mut out = StableFunction::zero(Basis::SInd);
                for (m, c) in &self.terms {
                    let mut prod = StableFunction::constant(c.clone());
                    for &(t, cls) in m.parts() {
                        let f = a_to_sind_memo(g, t, cls, &mut memo)?;
                        prod = prod.mul_same(&f);
                    }
                    for (mm, cc) in prod.terms {
                        out.add_term(mm, cc);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Same function in the a_{t,c} basis.
    pub fn to_a(&self, g: &FiniteGroup) -> Result<StableFunction> {
        match self.basis {
            Basis::A => Ok(self.clone()),
            Basis::SInd => {
                let mut out = StableFunction::zero(Basis::A);
                for (m, c) in &self.terms {
                    let mut prod = StableFunction::constant(c.clone()).with_basis_tag(Basis::A);
                    for &(k, phi) in m.parts() {
                        prod = prod.mul_same(&ind_power_to_a(g, phi, k)?);
                    }
                    for (mm, cc) in prod.terms {
                        out.add_term(mm, cc);
                    }
                }
                Ok(out)
            }
        }
    }

    /// f^(k)(x) = f(x^k), in the sInd basis.
    pub fn power_twist(&self, k: u32, g: &FiniteGroup) -> Result<StableFunction> {
        let s = self.to_sind(g)?;
        Ok(StableFunction::from_terms(Basis::SInd, s.terms.iter().map(|(m, c)| (m.twist(k), c.clone()))))
    }

    /// Complex conjugate function.
    pub fn conj(&self, g: &FiniteGroup) -> Result<StableFunction> {
        let mut out = StableFunction::zero(self.basis);
        for (m, c) in &self.terms {
            let m2 = match self.basis {
                Basis::SInd => {
                    let mut parts = Vec::new();
                    for &(k, phi) in m.parts() {
                        parts.push((k, g.dual_character(phi)?));
                    }
                    Monomial::new(parts)
                }
                // a_{t,c} counts cycles, so it is real
                Basis::A => m.clone(),
            };
            out.add_term(m2, c.conj());
        }
        Ok(out)
    }

    /// Renders in the text syntax accepted by [`StableFunction::parse`].
    pub fn display<'a>(&'a self, g: &'a FiniteGroup) -> StableDisplay<'a> {
        StableDisplay { f: self, g }
    }
}

/// (Ind phi)^(k) = sum_{t | k} t sum_c phi(c^{k/t}) a_{t,c}.
pub fn ind_power_to_a(g: &FiniteGroup, phi: usize, k: u32) -> Result<StableFunction> {
    if k == 0 {
        return Err(Error::Domain("power must be positive".into()));
    }
    let chi = g.character(phi)?;
    let mut out = StableFunction::zero(Basis::A);
    for t in (1..=k).filter(|t| k % t == 0) {
        for c in 0..g.class_count() {
            let v = chi.at(g.power_class(c, (k / t) as i64)).scale_int(t as i64);
            out.add_term(Monomial::single(t, c), v);
        }
    }
    Ok(out)
}

/// a_{t,c} in the sInd basis (a combination of single parts (m, phi), m | t).
pub fn a_to_ind_basis(g: &FiniteGroup, t: u32, class: usize) -> Result<StableFunction> {
    a_to_sind_memo(g, t, class, &mut HashMap::new())
}

fn a_to_sind_memo(
    g: &FiniteGroup,
    k: u32,
    class: usize,
    memo: &mut HashMap<(u32, usize), StableFunction>,
) -> Result<StableFunction> {
    if k == 0 || class >= g.class_count() {
        return Err(Error::Domain(format!("no a[{k},{class}]")));
    }
    if let Some(f) = memo.get(&(k, class)) {
        return Ok(f.clone());
    }
    let chars = g.characters()?.rows.clone();
    let inv_k = Cyclo::from_rational(Rational::new(1.into(), (k as i64).into()));
    // S_phi = sum_c phi(c) a_{k,c}, solved from the k-th twisted power of Ind phi.
    let mut s_phi = Vec::with_capacity(chars.len());
    for phi in 0..chars.len() {
        let mut s = StableFunction::ind_power(phi, k);
        for t in (1..k).filter(|t| k % t == 0) {
            for c in 0..g.class_count() {
                let coef = chars[phi].at(g.power_class(c, (k / t) as i64)).scale_int(t as i64);
                if coef.is_zero() {
                    continue;
                }
                let lower = a_to_sind_memo(g, t, c, memo)?;
                s = s.add(&lower.scale(&coef).neg(), g)?;
            }
        }
        s_phi.push(s.scale(&inv_k));
    }
    // a_{k,c} = |c|/|G| sum_phi conj(phi(c)) S_phi
    let w = Cyclo::from_rational(Rational::new((g.classes[class].size() as i64).into(), (g.order() as i64).into()));
    let mut out = StableFunction::zero(Basis::SInd);
    for (phi, s) in s_phi.iter().enumerate() {
        let coef = &chars[phi].at(class).conj() * &w;
        out = out.add(&s.scale(&coef), g)?;
    }
    memo.insert((k, class), out.clone());
    Ok(out)
}

pub struct StableDisplay<'a> {
    f: &'a StableFunction,
    g: &'a FiniteGroup,
}

pub(crate) fn fmt_coeff(c: &Cyclo, conductor: u32) -> String {
    let c = if conductor % c.conductor() == 0 { c.lift(conductor) } else { c.clone() };
    if let Some(q) = c.to_rational() {
        return q.to_string();
    }
    let mut parts = Vec::new();
    for (i, q) in c.coeffs().iter().enumerate() {
        if q.numer() == &0.into() {
            continue;
        }
        parts.push(match i {
            0 => format!("{q}"),
            1 => format!("{q}*z"),
            _ => format!("{q}*z^{i}"),
        });
    }
    parts.join("+").replace("+-", "-")
}

impl fmt::Display for StableDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.f.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = fmt_coeff(c, self.g.conductor);
            if m.is_one() {
                write!(f, "({coef})")?;
                continue;
            }
            write!(f, "({coef})*")?;
            match self.f.basis {
                Basis::SInd => {
                    let mut by_label: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
                    for &(k, phi) in m.parts() {
                        by_label.entry(phi).or_default().push(k);
                    }
                    let body: Vec<String> = by_label
                        .iter()
                        .map(|(phi, ks)| {
                            let ks: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                            format!("phi{phi}:[{}]", ks.join(","))
                        })
                        .collect();
                    write!(f, "sInd{{{}}}", body.join("; "))?;
                }
                Basis::A => {
                    let body: Vec<String> = m.parts().iter().map(|(t, c)| format!("a[{t},{c}]")).collect();
                    write!(f, "{}", body.join("*"))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ind_square_of_sign_in_a_basis() {
        let g = FiniteGroup::cyclic(2);
        let f = ind_power_to_a(&g, 1, 2).unwrap();
        let want = StableFunction::from_terms(
            Basis::A,
            [
                (Monomial::single(1, 0), Cyclo::one()),
                (Monomial::single(1, 1), Cyclo::one()),
                (Monomial::single(2, 0), Cyclo::from_int(2)),
                (Monomial::single(2, 1), Cyclo::from_int(-2)),
            ],
        );
        assert_eq!(f, want);
    }

    #[test]
    fn basis_round_trip() {
        for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::sym3()] {
            for k in 1..=4 {
                for c in 0..g.class_count() {
                    let a = StableFunction::a(k, c);
                    let back = a.to_sind(&g).unwrap().to_a(&g).unwrap();
                    assert_eq!(back, a, "a[{k},{c}] over {}", g.name());
                }
                for phi in 0..g.irreducible_count() {
                    let f = StableFunction::ind_power(phi, k);
                    assert_eq!(f.to_a(&g).unwrap().to_sind(&g).unwrap(), f);
                }
            }
        }
    }
}
