//! Exact univariate arithmetic: integer polynomials, canonical rational
//! functions and truncated power-series expansions.

mod poly;
mod rational;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use poly::{poly_gcd, IntPolynomial};
pub use rational::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("denominator vanishes at 0; no power series expansion")]
    NotExpandable,
    #[error("expansion has a non-integral coefficient at x^{index}")]
    NonIntegralExpansion { index: usize },
}

/// Coefficients of `x^0..=x^N` of a power series.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeriesPrefix {
    #[serde(with = "decimal::vec")]
    coeffs: Vec<BigInt>,
}

impl SeriesPrefix {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        Self { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Panics if a coefficient does not fit; meant for tests and small output.
    pub fn to_i64s(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .map(|c| c.to_i64().expect("coefficient exceeds i64"))
            .collect()
    }

    /// Cauchy product truncated to the shorter length.
    pub fn truncated_product(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// The series `sum c_k x^k` as a polynomial.
    pub fn to_polynomial(&self) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.clone())
    }

    /// Renders `c0 + c1 x + ...`, skipping zero terms.
    pub fn to_plain(&self) -> String {
        let p = self.to_polynomial();
        if p.is_zero() {
            "0".into()
        } else {
            format!("{} + O(x^{})", p.to_plain(), self.len())
        }
    }
}

/// Serde helpers for arbitrary-precision integers as decimal strings.
pub mod decimal {
    pub mod vec {
        use num_bigint::BigInt;
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|c| c.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod single {
        use num_bigint::BigInt;
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            String::deserialize(d)?.parse().map_err(D::Error::custom)
        }
    }
}
