use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{poly_gcd, IntPolynomial};
use super::{decimal, SeriesError, SeriesPrefix};

/// Quotient of two integer polynomials in canonical form.
///
/// Canonical means: numerator and denominator are coprime over Q, the joint
/// content of all coefficients is 1, and the lowest-order nonzero
/// coefficient of the denominator is positive. Zero is `0/1`. Two canonical
/// values are equal exactly when they are equal as field elements, so the
/// derived `PartialEq` is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: IntPolynomial,
    den: IntPolynomial,
}

impl RationalFunction {
    /// Canonical representative of `num / den`.
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self, SeriesError> {
        if den.is_zero() {
            return Err(SeriesError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::from_coprime(num, den))
    }

    /// Fixes content and sign of an already coprime pair.
    fn from_coprime(num: IntPolynomial, den: IntPolynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let c = num.content().gcd(&den.content());
        let (mut num, mut den) = if c.is_one() {
            (num, den)
        } else {
            (num.div_scalar(&c), den.div_scalar(&c))
        };
        if den.lowest_term().is_some_and(|(_, c)| c.is_negative()) {
            num = -num;
            den = -den;
        }
        Self { num, den }
    }

    pub fn zero() -> Self {
        Self {
            num: IntPolynomial::zero(),
            den: IntPolynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(IntPolynomial::one())
    }

    pub fn from_poly(p: IntPolynomial) -> Self {
        Self::from_coprime(p, IntPolynomial::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_poly(IntPolynomial::constant(c))
    }

    /// `1 / den`.
    pub fn reciprocal_of(den: IntPolynomial) -> Result<Self, SeriesError> {
        Self::new(IntPolynomial::one(), den)
    }

    pub fn num(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn den(&self) -> &IntPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is a constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// The polynomial itself when the denominator is exactly 1.
    pub fn as_polynomial(&self) -> Option<&IntPolynomial> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        Ok(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, SeriesError> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        Self::from_coprime(self.num.scale(&c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::from_coprime(self.num.pow(e), self.den.pow(e))
    }

    /// Taylor coefficients at 0 of `x^0..=x^n`, by the recurrence the
    /// denominator induces.
    pub fn series_prefix(&self, n: usize) -> Result<SeriesPrefix, SeriesError> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(SeriesError::NotExpandable);
        }
        let den = self.den.coeffs();
        let mut out: Vec<BigInt> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.num.coeff(k);
            for (j, d) in den.iter().enumerate().skip(1).take(k) {
                acc -= d * &out[k - j];
            }
            let (q, r) = acc.div_rem(&d0);
            if !r.is_zero() {
                return Err(SeriesError::NonIntegralExpansion { index: k });
            }
            out.push(q);
        }
        Ok(SeriesPrefix::new(out))
    }

    pub fn to_plain(&self) -> String {
        if self.den.is_one() {
            return self.num.to_plain();
        }
        format!("({}) / ({})", self.num.to_plain(), self.den.to_plain())
    }

    /// `\frac{num}{den}` in the layout of a printed table.
    pub fn to_latex(&self) -> String {
        if self.den.is_one() {
            return self.num.to_latex();
        }
        format!("\\frac{{{}}}{{{}}}", self.num.to_latex(), self.den.to_latex())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

impl From<IntPolynomial> for RationalFunction {
    fn from(p: IntPolynomial) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        // Split off the common part of the denominators first to keep the
        // intermediate degrees down.
        let g = poly_gcd(&self.den, &rhs.den);
        let (a_rest, b_rest) = if g.degree() == Some(0) {
            (self.den.clone(), rhs.den.clone())
        } else {
            (
                self.den.div_exact(&g).expect("gcd divides"),
                rhs.den.div_exact(&g).expect("gcd divides"),
            )
        };
        let num = &(&self.num * &b_rest) + &(&rhs.num * &a_rest);
        let den = &(&a_rest * &b_rest) * &g;
        RationalFunction::new(num, den).unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        // Cross-cancel so the product of coprime pairs stays coprime.
        let (an, bd) = cancel(&self.num, &rhs.den);
        let (bn, ad) = cancel(&rhs.num, &self.den);
        RationalFunction::from_coprime(&an * &bn, &ad * &bd)
    }
}

fn cancel(a: &IntPolynomial, b: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
    if a.degree() == Some(0) || b.degree() == Some(0) {
        return (a.clone(), b.clone());
    }
    let g = poly_gcd(a, b);
    if g.degree() == Some(0) {
        (a.clone(), b.clone())
    } else {
        (a.div_exact(&g).unwrap(), b.div_exact(&g).unwrap())
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| &acc + &x)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    #[serde(with = "decimal::vec")]
    num: Vec<BigInt>,
    #[serde(with = "decimal::vec")]
    den: Vec<BigInt>,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RationalJson {
            num: self.num.coeffs().to_vec(),
            den: self.den.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RationalJson::deserialize(d)?;
        RationalFunction::new(
            IntPolynomial::from_coeffs(raw.num),
            IntPolynomial::from_coeffs(raw.den),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let p1 = rf(&[0, 1, 1, 0, -1], &[1, 0, -1, -2]);
        assert_eq!(p1.num(), &p(&[0, 1, 1, 0, -1]));
        assert_eq!(p1.den(), &p(&[1, 0, -1, -2]));

        let two_x = rf(&[0, 2], &[2]);
        assert_eq!((two_x.num(), two_x.den()), (&p(&[0, 1]), &p(&[1])));

        // (1 - x)(1 + x) / (1 - x)
        let c = rf(&[1, 0, -1], &[1, -1]);
        assert_eq!((c.num(), c.den()), (&p(&[1, 1]), &p(&[1])));
    }

    #[test]
    fn sign_convention_uses_lowest_denominator_term() {
        // (-1 + x^2) / (-1 + x^2 + 2x^3) prints with negated leading terms
        let a = rf(&[-1, 0, 1], &[-1, 0, 1, 2]);
        assert_eq!(a.den(), &p(&[1, 0, -1, -2]));
        assert_eq!(a.num(), &p(&[1, 0, -1]));
        let b = rf(&[0, 1], &[0, 0, -3]);
        assert_eq!((b.num(), b.den()), (&p(&[-1]), &p(&[0, 3])));
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(
            RationalFunction::new(p(&[1]), IntPolynomial::zero()),
            Err(SeriesError::ZeroDenominator)
        );
        assert_eq!(
            RationalFunction::one().checked_div(&RationalFunction::zero()),
            Err(SeriesError::DivisionByZero)
        );
    }

    #[test]
    fn arithmetic_examples() {
        let geo = rf(&[1], &[1, -1]);
        assert_eq!(&geo * &rf(&[1, -1], &[1]), RationalFunction::one());
        let sq = &rf(&[0, 0, 1], &[1, -1]) * &rf(&[1], &[1, -1]);
        assert_eq!(sq, rf(&[0, 0, 1], &[1, -2, 1]));
        assert_eq!(sq.checked_div(&geo).unwrap(), rf(&[0, 0, 1], &[1, -1]));
        assert_eq!(&geo - &geo, RationalFunction::zero());
    }

    #[test]
    fn series_prefix_examples() {
        let r1 = rf(&[1], &[1, 0, -1, -2]);
        assert_eq!(r1.series_prefix(7).unwrap().to_i64s(), vec![1, 0, 1, 2, 1, 4, 5, 6]);
        assert_eq!(rf(&[1], &[1, -1]).series_prefix(4).unwrap().to_i64s(), vec![1; 5]);
        assert_eq!(
            rf(&[0, 0, 1], &[1, -2, 1]).series_prefix(6).unwrap().to_i64s(),
            vec![0, 0, 1, 2, 3, 4, 5]
        );
    }

    #[test]
    fn series_prefix_errors() {
        assert_eq!(rf(&[1], &[0, 1]).series_prefix(3), Err(SeriesError::NotExpandable));
        assert_eq!(
            rf(&[1], &[3, 1]).series_prefix(3),
            Err(SeriesError::NonIntegralExpansion { index: 0 })
        );
    }

    #[test]
    fn json_uses_decimal_strings() {
        let a = rf(&[0, 1, 1, 0, -1], &[1, 0, -1, -2]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"num":["0","1","1","0","-1"],"den":["1","0","-1","-2"]}"#);
        let back: RationalFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        let scaled: RationalFunction =
            serde_json::from_str(r#"{"num":["0","2"],"den":["-2"]}"#).unwrap();
        assert_eq!(scaled, rf(&[0, -1], &[1]));
        assert!(serde_json::from_str::<RationalFunction>(r#"{"num":["1"],"den":[]}"#).is_err());
    }
}
