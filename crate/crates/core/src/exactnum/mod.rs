//! Exact arithmetic: rationals, cyclotomic numbers, polynomials and rational
//! functions in `n`, and Laurent expansions at infinity.

mod cyclo;
mod poly;
mod ratfunc;

pub use cyclo::{cyclotomic_polynomial, totient, Cyclo};
pub use poly::Poly;
pub use ratfunc::{LaurentSeries, RationalFunction, RationalFunctionJson};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision rational in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// JSON integer that falls back to a decimal string when it exceeds i64.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(b: &BigInt) -> JsonInt {
        match b.to_i64() {
            Some(v) => JsonInt::Small(v),
            None => JsonInt::Big(b.to_string()),
        }
    }
}

impl JsonInt {
    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => s.parse().map_err(|_| Error::Parse { pos: 0, msg: format!("bad integer {s:?}") }),
        }
    }
}

/// Wire form of a cyclotomic number: `{"N": 3, "coeffs": [[1,2],[-1,1]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CycloJson {
    #[serde(rename = "N")]
    pub conductor: u32,
    pub coeffs: Vec<(JsonInt, JsonInt)>,
}

impl From<&Cyclo> for CycloJson {
    fn from(c: &Cyclo) -> CycloJson {
        CycloJson {
            conductor: c.conductor(),
            coeffs: c.coeffs().iter().map(|q| (JsonInt::from(q.numer()), JsonInt::from(q.denom()))).collect(),
        }
    }
}

impl CycloJson {
    pub fn to_cyclo(&self) -> Result<Cyclo> {
        if self.conductor == 0 {
            return Err(Error::Parse { pos: 0, msg: "conductor must be positive".into() });
        }
        let mut v = Vec::with_capacity(self.coeffs.len());
        for (a, b) in &self.coeffs {
            let d = b.to_bigint()?;
            if d == BigInt::from(0) {
                return Err(Error::DivisionByZero);
            }
            v.push(Rational::new(a.to_bigint()?, d));
        }
        Ok(Cyclo::from_power_basis(self.conductor, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let x = Cyclo::from_frac(-3, 7) + Cyclo::zeta_pow(5, 3).scale_int(4);
        let j = serde_json::to_string(&CycloJson::from(&x)).unwrap();
        let back: CycloJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_cyclo().unwrap(), x);

        let f = RationalFunction::new(Poly::falling_factorial(3), Poly::linear(7).mul_linear(-2)).unwrap();
        let s = serde_json::to_string(&f.to_json()).unwrap();
        let g = RationalFunction::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(f, g);
    }
}
