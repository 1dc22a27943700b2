//! Rational functions in `n` and their expansions at n = infinity.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Cyclo, CycloJson, Poly};
use crate::error::{Error, Result};

/// num/den with den monic and gcd(num, den) = 1. Zero is 0/1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g)?;
        let (den, _) = den.divrem(&g)?;
        let l = den.lead().expect("nonzero").inv()?;
        Ok(RationalFunction { num: num.scale(&l), den: den.scale(&l) })
    }

    /// Trusted constructor for callers that already removed common factors.
    pub(crate) fn from_coprime(num: Poly, den: Poly) -> RationalFunction {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let l = den.lead().expect("nonzero").inv().expect("nonzero");
        RationalFunction { num: num.scale(&l), den: den.scale(&l) }
    }

    /// num / prod (n - r)^m over the given roots, cancelling shared linear factors.
    pub fn over_linear_factors(mut num: Poly, roots: &[(i64, u32)]) -> RationalFunction {
        let mut den = Poly::one();
        for &(r, m) in roots {
            let mut left = m;
            while left > 0 && !num.is_zero() {
                match num.div_linear(r) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            for _ in 0..left {
                den = den.mul_linear(r);
            }
        }
        RationalFunction::from_coprime(num, den)
    }

    pub fn zero() -> RationalFunction {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }

    pub fn constant(c: Cyclo) -> RationalFunction {
        RationalFunction { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<Cyclo> {
        if self.den.degree() != Some(0) {
            return None;
        }
        match self.num.degree() {
            None => Some(Cyclo::zero()),
            Some(0) => Some(self.num.coeffs()[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RationalFunction::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &Cyclo) -> RationalFunction {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Value at an integer; errors at a pole.
    pub fn evaluate_at(&self, n: i64) -> Result<Cyclo> {
        let d = self.den.eval_int(n);
        if d.is_zero() {
            return Err(Error::Pole(n));
        }
        self.num.eval_int(n).div(&d)
    }

    /// deg(num) - deg(den); None for the zero function.
    pub fn order_at_infinity(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().expect("nonzero den") as i64)
    }

    /// Expansion in powers of 1/n: `coeffs[p]` multiplies n^(lead_order - p),
    /// for p = 0..=k.
    pub fn laurent_expand(&self, k: usize) -> LaurentSeries {
        let Some(lead_order) = self.order_at_infinity() else {
            return LaurentSeries { lead_order: 0, coeffs: vec![Cyclo::zero(); k + 1] };
        };
        // Substitute n = 1/x: num(n) = n^a N(x), den(n) = n^b D(x).
        let nx: Vec<Cyclo> = self.num.coeffs().iter().rev().cloned().collect();
        let dx: Vec<Cyclo> = self.den.coeffs().iter().rev().cloned().collect();
        let d0_inv = dx[0].inv().expect("monic");
        let mut out: Vec<Cyclo> = Vec::with_capacity(k + 1);
        for p in 0..=k {
            let mut acc = nx.get(p).cloned().unwrap_or_else(Cyclo::zero);
            for j in 1..=p.min(dx.len() - 1) {
                acc = &acc - &(&dx[j] * &out[p - j]);
            }
            out.push(&acc * &d0_inv);
        }
        LaurentSeries { lead_order, coeffs: out }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

/// Truncated expansion: value = sum_p coeffs[p] * n^(lead_order - p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    pub lead_order: i64,
    pub coeffs: Vec<Cyclo>,
}

impl LaurentSeries {
    /// Coefficient of n^e, or None when e lies past the truncation.
    pub fn coeff_of_power(&self, e: i64) -> Option<Cyclo> {
        if e > self.lead_order {
            return Some(Cyclo::zero());
        }
        self.coeffs.get((self.lead_order - e) as usize).cloned()
    }

    /// Lowest power still covered.
    pub fn last_power(&self) -> i64 {
        self.lead_order - self.coeffs.len() as i64 + 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})*n^{}", c, self.lead_order - p as i64)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(n^{})", self.last_power() - 1)
    }
}

#[derive(Serialize, Deserialize)]
pub struct RationalFunctionJson {
    pub num: Vec<CycloJson>,
    pub den: Vec<CycloJson>,
}

impl RationalFunction {
    pub fn to_json(&self) -> RationalFunctionJson {
        RationalFunctionJson {
            num: self.num.coeffs().iter().map(CycloJson::from).collect(),
            den: self.den.coeffs().iter().map(CycloJson::from).collect(),
        }
    }

    pub fn from_json(j: &RationalFunctionJson) -> Result<RationalFunction> {
        let num = j.num.iter().map(|c| c.to_cyclo()).collect::<Result<Vec<_>>>()?;
        let den = j.den.iter().map(|c| c.to_cyclo()).collect::<Result<Vec<_>>>()?;
        RationalFunction::new(Poly::new(num), Poly::new(den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_of_simple_functions() {
        let f = RationalFunction::new(Poly::one(), Poly::linear(1)).unwrap();
        let s = f.laurent_expand(2);
        assert_eq!(s.lead_order, -1);
        assert_eq!(s.coeffs, vec![Cyclo::one(), Cyclo::one(), Cyclo::one()]);

        let g = RationalFunction::new(Poly::falling_factorial(2), Poly::from_ints(&[0, 0, 1])).unwrap();
        let s = g.laurent_expand(1);
        assert_eq!((s.lead_order, s.coeffs.clone()), (0, vec![Cyclo::one(), Cyclo::from_int(-1)]));

        let c = RationalFunction::constant(Cyclo::from_int(5));
        let s = c.laurent_expand(3);
        assert_eq!(s.lead_order, 0);
        assert_eq!(s.coeffs, vec![Cyclo::from_int(5), Cyclo::zero(), Cyclo::zero(), Cyclo::zero()]);
    }

    #[test]
    fn evaluation_and_poles() {
        let ff = Poly::falling_factorial;
        let f = RationalFunction::new(ff(4), ff(2).mul(&ff(2))).unwrap();
        assert_eq!(f.evaluate_at(4).unwrap(), Cyclo::from_frac(1, 6));
        assert!(matches!(f.evaluate_at(1), Err(Error::Pole(1))));
    }

    #[test]
    fn normal_form_is_reduced() {
        let f = RationalFunction::new(Poly::falling_factorial(3), Poly::falling_factorial(2).scale(&Cyclo::from_int(3)))
            .unwrap();
        assert_eq!(f.num(), &Poly::linear(2).scale(&Cyclo::from_frac(1, 3)));
        assert_eq!(f.den(), &Poly::one());
        let g = RationalFunction::over_linear_factors(Poly::falling_factorial(3), &[(0, 1), (1, 2), (5, 1)]);
        assert_eq!(g, RationalFunction::new(Poly::linear(2), Poly::linear(1).mul_linear(5)).unwrap());
    }
}
