//! Cosets of the horocyclic subgroup counted by level and distance, and the
//! growth of the whole group assembled from them.
//!
//! Every coset has a unique shortest representative, its stem,
//! `T^n (w_1 t) ... (w_j t)` with each `w_i` in the suffix alphabet and
//! `w_1` nonempty when both `n` and `j` are positive. The stem has length
//! `n + j + sum |w_i|` and its coset sits at level `-max(0, n - j)`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{subgroup_series, suffix_poly, FormulaError};
use crate::series::{IntPolynomial, RationalFunction, SeriesPrefix};

/// Census coefficients needed to certify the level-series fit.
pub fn certification_horizon(m: usize) -> usize {
    2 * (m + 4) + 6
}

/// Largest census horizon accepted for dimension `m`.
pub fn census_horizon_limit(m: usize) -> usize {
    certification_horizon(m).max(24)
}

/// `chi[L][r]`: the number of cosets of level `-L` at distance `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetCensus {
    m: usize,
    rmax: usize,
    #[serde(with = "rows")]
    chi: Vec<Vec<BigInt>>,
}

mod rows {
    use num_bigint::BigInt;
    use serde::{ser::SerializeSeq, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let strings: Vec<String> = row.iter().map(ToString::to_string).collect();
            seq.serialize_element(&strings)?;
        }
        seq.end()
    }
}

impl CosetCensus {
    /// Builds a census from rows `chi[L][r]`, each of length `rmax + 1`.
    pub(crate) fn from_rows(m: usize, rmax: usize, mut chi: Vec<Vec<BigInt>>) -> Self {
        chi.resize(rmax + 1, vec![BigInt::zero(); rmax + 1]);
        Self { m, rmax, chi }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rmax(&self) -> usize {
        self.rmax
    }

    /// `chi(level, r)` for `level <= 0`; zero outside the table.
    pub fn get(&self, level: i64, r: usize) -> BigInt {
        let depth = level.unsigned_abs() as usize;
        if level > 0 || depth > self.rmax || r > self.rmax {
            return BigInt::zero();
        }
        self.chi[depth][r].clone()
    }

    /// `chi(level, 0..=rmax)`.
    pub fn column(&self, level: i64) -> SeriesPrefix {
        SeriesPrefix::new((0..=self.rmax).map(|r| self.get(level, r)).collect())
    }
}

/// Counts stems of length at most `rmax` by level.
pub fn coset_census(m: usize, rmax: usize) -> Result<CosetCensus, FormulaError> {
    let limit = census_horizon_limit(m);
    if rmax > limit {
        return Err(FormulaError::HorizonTooLarge { m, rmax, limit });
    }
    let w = suffix_poly(m);
    let w_nonempty = &w - &IntPolynomial::one();
    // Growth of w_1 ... w_j, with and without the nonempty-first constraint.
    let mut free = vec![IntPolynomial::one()];
    let mut led = vec![IntPolynomial::one()];
    for j in 1..=rmax {
        free.push((&free[j - 1] * &w).truncate(rmax));
        led.push((&w_nonempty * &free[j - 1]).truncate(rmax));
    }
    let mut chi = vec![vec![BigInt::zero(); rmax + 1]; rmax + 1];
    for n in 0..=rmax {
        for j in 0..=rmax - n {
            let words = if n == 0 || j == 0 { &free[j] } else { &led[j] };
            let row = &mut chi[n.saturating_sub(j)];
            for (k, c) in words.coeffs().iter().enumerate() {
                if n + j + k > rmax {
                    break;
                }
                row[n + j + k] += c;
            }
        }
    }
    Ok(CosetCensus { m, rmax, chi })
}

/// Generating functions `X_{-1}` and `X_0` of the census, with the numerators
/// fitted against it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSeries {
    pub m: usize,
    pub x_minus1: RationalFunction,
    pub x_0: RationalFunction,
    pub p_hat: IntPolynomial,
    pub q_hat: IntPolynomial,
    pub certified_to: usize,
}

impl LevelSeries {
    /// `X_{-n}`: `X_0` for `n = 0`, otherwise `x^(n-1) X_{-1}`.
    pub fn level(&self, n: usize) -> RationalFunction {
        match n {
            0 => self.x_0.clone(),
            _ => &RationalFunction::from_poly(IntPolynomial::monomial(1, n - 1)) * &self.x_minus1,
        }
    }
}

/// Splits `series * factor` (truncated at the census horizon) into the part
/// of degree at most `max_degree` and requires the rest to vanish.
fn fit(
    name: &'static str,
    product: &IntPolynomial,
    max_degree: usize,
    horizon: usize,
) -> Result<IntPolynomial, FormulaError> {
    let product = product.truncate(horizon);
    if let Some((index, value)) = product
        .coeffs()
        .iter()
        .enumerate()
        .skip(max_degree + 1)
        .find(|(_, c)| !c.is_zero())
    {
        return Err(FormulaError::FitResidual {
            series: name,
            index,
            value: value.clone(),
        });
    }
    Ok(product.truncate(max_degree))
}

/// Fits `X_{-1} = p / (1 - x^2 W_m)` and
/// `X_0 = (x W_m X_{-1} + q) / (1 - x W_m)` to a census. Every census
/// coefficient must agree; the numerators have degree at most `m + 4`.
pub fn fit_level_series(census: &CosetCensus) -> Result<LevelSeries, FormulaError> {
    let m = census.m;
    let horizon = census.rmax;
    let max_degree = m + 4;
    let w = suffix_poly(m);
    let x_w = IntPolynomial::monomial(1, 1) * w.clone();
    let one = IntPolynomial::one();
    let d_minus1 = &one - &(&IntPolynomial::monomial(1, 2) * &w);
    let d_0 = &one - &x_w;

    let chi_minus1 = census.column(-1).to_polynomial();
    let chi_0 = census.column(0).to_polynomial();
    let p_hat = fit("X_-1", &(&chi_minus1 * &d_minus1), max_degree, horizon)?;
    let q_hat = fit(
        "X_0",
        &(&(&chi_0 * &d_0) - &(&x_w * &chi_minus1)),
        max_degree,
        horizon,
    )?;

    let x_minus1 = RationalFunction::new(p_hat.clone(), d_minus1).expect("nonzero denominator");
    let x_0 = (&(&RationalFunction::from_poly(x_w) * &x_minus1) + &RationalFunction::from_poly(q_hat.clone()))
        .checked_div(&RationalFunction::from_poly(d_0))
        .expect("nonzero denominator");

    for (name, f, level) in [("X_-1", &x_minus1, -1), ("X_0", &x_0, 0)] {
        let expanded = f.series_prefix(horizon).expect("expandable");
        let expected = census.column(level);
        if let Some(index) = (0..=horizon).find(|&r| expanded.coeffs()[r] != expected.coeffs()[r]) {
            return Err(FormulaError::FitResidual {
                series: name,
                index,
                value: &expanded.coeffs()[index] - &expected.coeffs()[index],
            });
        }
    }
    Ok(LevelSeries {
        m,
        x_minus1,
        x_0,
        p_hat,
        q_hat,
        certified_to: horizon,
    })
}

/// Level series certified through `certification_horizon(m)`.
pub fn level_series(m: usize) -> Result<LevelSeries, FormulaError> {
    fit_level_series(&coset_census(m, certification_horizon(m))?)
}

/// Growth series of `G_m`:
/// `S_m X_0 + sum_{n>=1} x^(n-1) X_{-1} W_m^n S_m`, summed in closed form.
pub fn full_series(m: usize) -> Result<RationalFunction, FormulaError> {
    let levels = level_series(m)?;
    let s_m = subgroup_series(m);
    let w = RationalFunction::from_poly(suffix_poly(m));
    let tail = (&levels.x_minus1 * &w)
        .checked_div(&RationalFunction::from_poly(
            &IntPolynomial::one() - &(IntPolynomial::monomial(1, 1) * suffix_poly(m)),
        ))
        .expect("nonzero denominator");
    Ok(&s_m * &(&levels.x_0 + &tail))
}

/// `S_m (1 - x^2)(1 + x W_m) / ((1 - x W_m)(1 - x^2 W_m))`.
pub fn full_series_closed_form(m: usize) -> RationalFunction {
    let w = suffix_poly(m);
    let one = IntPolynomial::one();
    let x_w = IntPolynomial::monomial(1, 1) * w.clone();
    let x2_w = IntPolynomial::monomial(1, 2) * w;
    let num = &IntPolynomial::from_i64s(&[1, 0, -1]) * &(&one + &x_w);
    let den = &(&one - &x_w) * &(&one - &x2_w);
    &subgroup_series(m) * &RationalFunction::new(num, den).expect("nonzero denominator")
}

/// The general printed formula
/// `S_m (x W p + q (1 - x^2 W) + W p) / ((1 - x W)(1 - x^2 W))`
/// evaluated at given numerators.
pub fn printed_general_full_series(
    m: usize,
    p: &IntPolynomial,
    q: &IntPolynomial,
) -> RationalFunction {
    let w = suffix_poly(m);
    let one = IntPolynomial::one();
    let x_w = IntPolynomial::monomial(1, 1) * w.clone();
    let x2_w = IntPolynomial::monomial(1, 2) * w.clone();
    let wp = &w * p;
    let num = &(&(&x_w * p) + &(q * &(&one - &x2_w))) + &wp;
    let den = &(&one - &x_w) * &(&one - &x2_w);
    &subgroup_series(m) * &RationalFunction::new(num, den).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &SeriesPrefix, n: usize) -> Vec<i64> {
        p.to_i64s()[..=n].to_vec()
    }

    #[test]
    fn census_examples() {
        let c = coset_census(1, 12).unwrap();
        assert_eq!(ints(&c.column(0), 5), [1, 1, 3, 7, 13, 29]);
        assert_eq!(ints(&c.column(-1), 10), [0, 1, 0, 0, 2, 0, 2, 4, 2, 8, 10]);
        let c2 = coset_census(2, 10).unwrap();
        assert_eq!(c2.get(-1, 4), BigInt::from(4));
    }

    #[test]
    fn census_invariants() {
        for m in 1..=3 {
            let c = coset_census(m, 16).unwrap();
            assert_eq!(c.get(0, 0), BigInt::from(1));
            for n in 1..=16i64 {
                assert_eq!(c.get(-n, n as usize), BigInt::from(1), "pure T^{n}");
                for r in 0..n as usize {
                    assert!(c.get(-n, r).is_zero());
                }
            }
        }
    }

    #[test]
    fn census_horizon_is_capped() {
        assert_eq!(census_horizon_limit(1), 24);
        assert_eq!(census_horizon_limit(10), 34);
        assert!(coset_census(2, 24).is_ok());
        assert_eq!(
            coset_census(2, 30),
            Err(FormulaError::HorizonTooLarge { m: 2, rmax: 30, limit: 24 })
        );
    }

    #[test]
    fn fitted_numerators() {
        for m in 1..=10 {
            let l = level_series(m).unwrap();
            assert_eq!(l.p_hat, IntPolynomial::from_i64s(&[0, 1, 0, -1]), "m = {m}");
            assert_eq!(l.q_hat, IntPolynomial::from_i64s(&[1, 0, -1]), "m = {m}");
            assert_eq!(l.certified_to, 2 * (m + 4) + 6);
        }
        let l1 = level_series(1).unwrap();
        assert_eq!(l1.x_minus1.series_prefix(9).unwrap().to_i64s(), [0, 1, 0, 0, 2, 0, 2, 4, 2, 8]);
        assert_eq!(l1.x_0.series_prefix(5).unwrap().to_i64s(), [1, 1, 3, 7, 13, 29]);
    }

    #[test]
    fn deeper_levels_shift_level_minus_one() {
        for m in 1..=2 {
            let c = coset_census(m, 20).unwrap();
            let l = level_series(m).unwrap();
            for n in 1..=4 {
                assert_eq!(l.level(n).series_prefix(20).unwrap(), c.column(-(n as i64)), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn corrupted_census_is_rejected() {
        let mut c = coset_census(1, certification_horizon(1)).unwrap();
        c.chi[1][15] += 1;
        assert!(matches!(
            fit_level_series(&c),
            Err(FormulaError::FitResidual { series: "X_-1", .. })
        ));
    }

    #[test]
    fn full_series_prefixes() {
        let f1 = full_series(1).unwrap();
        assert_eq!(
            f1.series_prefix(10).unwrap().to_i64s(),
            [1, 4, 12, 30, 70, 158, 346, 742, 1566, 3270, 6762]
        );
        let f2 = full_series(2).unwrap();
        assert_eq!(f2.series_prefix(3).unwrap().to_i64s(), [1, 6, 26, 98]);
    }

    #[test]
    fn assembled_equals_closed_and_general_forms() {
        let p = IntPolynomial::from_i64s(&[0, 1, 0, -1]);
        let q = IntPolynomial::from_i64s(&[1, 0, -1]);
        for m in 1..=6 {
            let assembled = full_series(m).unwrap();
            assert_eq!(assembled, full_series_closed_form(m), "m = {m}");
            assert_eq!(assembled, printed_general_full_series(m, &p, &q), "m = {m}");
            let s = assembled.series_prefix(1).unwrap().to_i64s();
            assert_eq!(s, [1, 2 * m as i64 + 2]);
        }
    }
}
