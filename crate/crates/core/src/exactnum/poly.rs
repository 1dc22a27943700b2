//! Dense univariate polynomials in `n` with cyclotomic coefficients.
//!
//! Coefficients are ascending (`coeffs[i]` multiplies n^i) with no trailing
//! zeros, so the zero polynomial is the empty vector.

use std::fmt;

use super::Cyclo;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Cyclo>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Cyclo>) -> Poly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Cyclo::from_int(c)).collect())
    }

    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Poly {
        Poly::constant(Cyclo::one())
    }

    pub fn constant(c: Cyclo) -> Poly {
        Poly::new(vec![c])
    }

    /// The polynomial n - root.
    pub fn linear(root: i64) -> Poly {
        Poly::from_ints(&[-root, 1])
    }

    pub fn coeffs(&self) -> &[Cyclo] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Cyclo> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Cyclo::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Cyclo::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = &v[i + j] + &(a * b);
                }
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &Cyclo) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiplies by (n - root) in place of a general product.
    pub fn mul_linear(&self, root: i64) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let r = Cyclo::from_int(root);
        let mut v = vec![Cyclo::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            v[i + 1] = &v[i + 1] + a;
            v[i] = &v[i] - &(a * &r);
        }
        Poly::new(v)
    }

    /// Exact division by (n - root); None when root is not a root.
    pub fn div_linear(&self, root: i64) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let r = Cyclo::from_int(root);
        let d = self.coeffs.len() - 1;
        let mut q = vec![Cyclo::zero(); d];
        let mut carry = Cyclo::zero();
        for i in (0..=d).rev() {
            let cur = &self.coeffs[i] + &carry;
            if i == 0 {
                return if cur.is_zero() { Some(Poly::new(q)) } else { None };
            }
            carry = &cur * &r;
            q[i - 1] = cur;
        }
        unreachable!()
    }

    /// Quotient and remainder over the coefficient field.
    pub fn divrem(&self, other: &Poly) -> Result<(Poly, Poly)> {
        let lead = other.lead().ok_or(Error::DivisionByZero)?.inv()?;
        let dn = other.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dn {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![Cyclo::zero(); r.len() - dn];
        for i in (0..q.len()).rev() {
            let c = &r[i + dn] * &lead;
            if !c.is_zero() {
                for (j, b) in other.coeffs.iter().enumerate() {
                    r[i + j] = &r[i + j] - &(&c * b);
                }
            }
            q[i] = c;
        }
        r.truncate(dn);
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Monic scaling; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
        }
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Cyclo) -> Cyclo {
        let mut acc = Cyclo::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Cyclo {
        self.eval(&Cyclo::from_int(x))
    }

    /// The falling factorial (n)_t = n (n-1) ... (n-t+1).
    pub fn falling_factorial(t: u32) -> Poly {
        let mut p = Poly::one();
        for j in 0..t as i64 {
            p = p.mul_linear(j);
        }
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "n".to_string(),
                _ => format!("n^{}", i),
            };
            if i == 0 {
                write!(f, "({})", c)?;
            } else if c.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "({})*{}", c, mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_factorial_three() {
        let p = Poly::falling_factorial(3);
        assert_eq!(p, Poly::from_ints(&[0, 2, -3, 1]));
        assert_eq!(p.eval_int(5), Cyclo::from_int(60));
        assert_eq!(Poly::falling_factorial(0), Poly::one());
    }

    #[test]
    fn linear_division() {
        let p = Poly::falling_factorial(4);
        let q = p.div_linear(2).unwrap();
        assert_eq!(q.mul_linear(2), p);
        assert!(p.div_linear(7).is_none());
    }

    #[test]
    fn gcd_of_falling_factorials() {
        let g = Poly::falling_factorial(5).gcd(&Poly::falling_factorial(3).mul_linear(9));
        assert_eq!(g, Poly::falling_factorial(3));
    }
}
