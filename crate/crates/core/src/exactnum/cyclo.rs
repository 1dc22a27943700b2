//! Elements of the cyclotomic field Q(zeta_N).
//!
//! A value is stored as coefficients in the power basis 1, z, ..., z^(phi(N)-1)
//! with z = exp(2 pi i / N), always reduced modulo the N-th cyclotomic
//! polynomial. Values of different conductors are lifted to the lcm before
//! arithmetic, so equality is a field equality rather than a representation
//! equality.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Integer coefficients (ascending) of the N-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Result<Vec<i64>> {
    if n == 0 {
        return Err(Error::Domain("cyclotomic polynomial of order 0".into()));
    }
    Ok(phi_coeffs(n).as_ref().clone())
}

fn phi_coeffs(n: u32) -> Rc<Vec<i64>> {
    if let Some(hit) = PHI_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return hit;
    }
    // X^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = phi_coeffs(d);
            num = exact_int_div(&num, &den);
        }
    }
    let rc = Rc::new(num);
    PHI_CACHE.with(|c| c.borrow_mut().insert(n, rc.clone()));
    rc
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut q = vec![0i64; num.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out as usize
}

/// An element of Q(zeta_N).
#[derive(Clone, Debug)]
pub struct Cyclo {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl Cyclo {
    /// Builds from power-basis coefficients of any length, reducing mod Phi_N.
    pub fn from_power_basis(conductor: u32, coeffs: Vec<Rational>) -> Cyclo {
        assert!(conductor >= 1, "conductor must be positive");
        let mut c = Cyclo { conductor, coeffs };
        c.reduce();
        c
    }

    pub fn from_rational(q: Rational) -> Cyclo {
        Cyclo { conductor: 1, coeffs: vec![q] }
    }

    pub fn from_int(k: i64) -> Cyclo {
        Cyclo::from_rational(Rational::from_integer(BigInt::from(k)))
    }

    pub fn from_frac(num: i64, den: i64) -> Cyclo {
        Cyclo::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Cyclo {
        Cyclo::from_int(0)
    }

    pub fn one() -> Cyclo {
        Cyclo::from_int(1)
    }

    /// zeta_N^k.
    pub fn zeta_pow(conductor: u32, k: i64) -> Cyclo {
        let e = k.rem_euclid(conductor as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Cyclo::from_power_basis(conductor, v)
    }

    pub fn zeta(conductor: u32) -> Cyclo {
        Cyclo::zeta_pow(conductor, 1)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Reduced coefficient vector, length phi(N).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn reduce(&mut self) {
        let phi = phi_coeffs(self.conductor);
        let deg = phi.len() - 1;
        if self.coeffs.len() > deg {
            for i in (deg..self.coeffs.len()).rev() {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut self.coeffs[i]);
                let shift = i - deg;
                for (j, &pj) in phi.iter().enumerate().take(deg) {
                    if pj != 0 {
                        let t = &c * Rational::from_integer(BigInt::from(pj));
                        self.coeffs[shift + j] -= t;
                    }
                }
            }
            self.coeffs.truncate(deg);
        }
        self.coeffs.resize(deg, Rational::zero());
    }

    /// Re-expresses in Q(zeta_M); requires N | M.
    pub fn lift(&self, m: u32) -> Cyclo {
        if m == self.conductor {
            return self.clone();
        }
        assert!(m % self.conductor == 0, "cannot lift conductor {} to {}", self.conductor, m);
        let step = (m / self.conductor) as usize;
        let mut v = vec![Rational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Cyclo::from_power_basis(m, v)
    }

    fn common(&self, other: &Cyclo) -> (Cyclo, Cyclo) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let m = self.conductor.lcm(&other.conductor);
        (self.lift(m), other.lift(m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().map(|q| q.is_one()).unwrap_or(false)
    }

    /// The value as a rational, if it lies in Q.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            return Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero));
        }
        None
    }

    pub fn scale(&self, q: &Rational) -> Cyclo {
        Cyclo { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Cyclo {
        self.scale(&Rational::from_integer(BigInt::from(k)))
    }

    fn mul_same(&self, other: &Cyclo) -> Cyclo {
        let n = self.coeffs.len();
        if n == 1 {
            return Cyclo { conductor: self.conductor, coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] };
        }
        let mut v = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Cyclo::from_power_basis(self.conductor, v)
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Cyclo> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(Cyclo { conductor: self.conductor, coeffs: vec![self.coeffs[0].recip()] });
        }
        // Extended Euclid in Q[X] against Phi_N.
        let phi: Vec<Rational> = phi_coeffs(self.conductor)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        let a = trim(self.coeffs.clone());
        let s = qpoly_inverse_mod(&a, &phi);
        Ok(Cyclo::from_power_basis(self.conductor, s))
    }

    pub fn div(&self, other: &Cyclo) -> Result<Cyclo> {
        Ok(self * &other.inv()?)
    }

    /// Complex conjugation, z -> z^-1.
    pub fn conj(&self) -> Cyclo {
        let n = self.conductor as usize;
        if self.coeffs.len() == 1 {
            return self.clone();
        }
        let mut v = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(n - i) % n] += c;
        }
        Cyclo::from_power_basis(self.conductor, v)
    }

    pub fn pow(&self, k: u32) -> Cyclo {
        let mut acc = Cyclo::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Floating point value (re, im).
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let x = rational_to_f64(c);
            if x == 0.0 {
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re, im)
    }

    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => {
            // Scale both down to keep the ratio representable.
            let shift = q.denom().bits().max(q.numer().bits()).saturating_sub(1000);
            let a = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let b = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            a / b
        }
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn qpoly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = b.last().expect("nonzero divisor").recip();
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
        r = trim(r);
    }
    (q, r)
}

fn qpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    trim(v)
}

fn qpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        v[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        v[i] -= x;
    }
    trim(v)
}

/// s with s*a = 1 mod m, for a coprime to m (m irreducible here).
fn qpoly_inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1) = (vec![], vec![Rational::one()]);
    while r1.len() > 1 {
        let (q, r) = qpoly_divrem(&r0, &r1);
        let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let c = r1[0].recip();
    s1.iter().map(|x| x * &c).collect()
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Cyclo) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclo {}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, other: &Cyclo) -> Cyclo {
        if self.conductor == other.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
            return Cyclo { conductor: self.conductor, coeffs };
        }
        let (a, b) = self.common(other);
        &a + &b
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, other: &Cyclo) -> Cyclo {
        if self.conductor == other.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
            return Cyclo { conductor: self.conductor, coeffs };
        }
        let (a, b) = self.common(other);
        &a - &b
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, other: &Cyclo) -> Cyclo {
        if self.conductor == other.conductor {
            return self.mul_same(other);
        }
        // Rational times anything needs no lift.
        if self.coeffs.len() == 1 && self.conductor <= 2 {
            return other.scale(&self.coeffs[0]);
        }
        if other.coeffs.len() == 1 && other.conductor <= 2 {
            return self.scale(&other.coeffs[0]);
        }
        let (a, b) = self.common(other);
        a.mul_same(&b)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, other: Cyclo) -> Cyclo {
                (&self).$m(&other)
            }
        }
        impl<'a> $tr<&'a Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, other: &'a Cyclo) -> Cyclo {
                (&self).$m(other)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl std::iter::Sum for Cyclo {
    fn sum<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Cyclo {
    /// Writes e.g. `1/2 - 3*z^2`; `z` is zeta_N and `(N=..)` is appended when
    /// the value is not rational.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", q);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{}", i)?;
                    }
                }
            }
        }
        write!(f, " (N={})", self.conductor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4).unwrap(), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6).unwrap(), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12).unwrap(), vec![1, 0, -1, 0, 1]);
        assert!(cyclotomic_polynomial(0).is_err());
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).unwrap().len() - 1, totient(n));
        }
    }

    #[test]
    fn field_identities() {
        let i = Cyclo::zeta(4);
        assert_eq!(&i * &i, Cyclo::from_int(-1));
        let z3 = Cyclo::zeta(3);
        assert_eq!(z3.conj(), Cyclo::from_int(-1) - z3.clone());
        assert_eq!(z3.pow(3), Cyclo::one());
        // zeta_6 = -zeta_3^2 after lifting
        assert_eq!(Cyclo::zeta(6), -Cyclo::zeta_pow(3, 2));
        let x = Cyclo::from_int(2) + Cyclo::zeta(5);
        assert_eq!(&x * &x.inv().unwrap(), Cyclo::one());
        assert!(Cyclo::zero().inv().is_err());
    }

    #[test]
    fn float_value() {
        let (re, im) = (Cyclo::one() + Cyclo::zeta(3)).to_complex();
        assert!((re - 0.5).abs() < 1e-12 && (im - 0.8660254037844386).abs() < 1e-12);
    }
}
