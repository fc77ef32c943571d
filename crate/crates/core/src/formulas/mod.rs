//! Closed-form growth series of the horocyclic subgroup and the census-driven
//! growth of the whole group.

mod census;

pub use census::{
    census_horizon_limit, certification_horizon, coset_census, fit_level_series, full_series,
    full_series_closed_form, level_series, printed_general_full_series, CosetCensus, LevelSeries,
};

use num_bigint::BigInt;
use thiserror::Error;

use crate::series::{IntPolynomial, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("census horizon {rmax} exceeds the limit {limit} for m = {m}")]
    HorizonTooLarge { m: usize, rmax: usize, limit: usize },
    #[error("{series} fit leaves residual {value} at x^{index}")]
    FitResidual {
        series: &'static str,
        index: usize,
        value: BigInt,
    },
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn x_pow(k: usize) -> IntPolynomial {
    IntPolynomial::monomial(1, k)
}

/// `W_m = (1 + 2x)^m`, the growth of the suffix alphabet.
pub fn suffix_poly(m: usize) -> IntPolynomial {
    IntPolynomial::from_i64s(&[1, 2]).pow(m as u32)
}

/// `V_m = x^(2m) + x^(m+2) W_m - x^(2m+2)`, the growth of the caps.
pub fn cap_poly(m: usize) -> IntPolynomial {
    assert!(m >= 1, "dimension must be positive");
    &(&x_pow(2 * m) + &(&x_pow(m + 2) * &suffix_poly(m))) - &x_pow(2 * m + 2)
}

/// `V_m` from `V_1 = x^2 + x^3 + x^4` by adding one generator at a time.
pub fn cap_poly_recursive(m: usize) -> IntPolynomial {
    assert!(m >= 1, "dimension must be positive");
    let v1 = IntPolynomial::from_i64s(&[0, 0, 1, 1, 1]);
    let step = IntPolynomial::from_i64s(&[0, 1, 2]);
    (2..=m).fold(v1.clone(), |v, k| {
        let low = x_pow(2 * (k - 1));
        &(&step * &(&v - &low)) + &(&low * &v1)
    })
}

/// `R_m = 1 / (1 - x^2 W_m)`, counting prefix/suffix pairs `t^n (T W_m)^n`.
pub fn prefix_suffix_series(m: usize) -> RationalFunction {
    let den = &IntPolynomial::one() - &(&x_pow(2) * &suffix_poly(m));
    RationalFunction::reciprocal_of(den).expect("denominator is nonzero")
}

fn prefix_suffix_den(m: usize) -> IntPolynomial {
    &IntPolynomial::one() - &(&x_pow(2) * &suffix_poly(m))
}

/// `prod_{k=lo..=hi} (1 - x^2 W_k)`.
fn den_product(lo: usize, hi: usize) -> IntPolynomial {
    (lo..=hi).fold(IntPolynomial::one(), |acc, k| &acc * &prefix_suffix_den(k))
}

/// Numerators of `P_1, ..., P_m` over the common denominators
/// `D_i = prod_{k<=i} (1 - x^2 W_k)`.
///
/// `P_m` sums over ordered compositions `(i_1, ..., i_q)` of `m` weighted by
/// multinomials:
/// `V_{i_1} R_{i_1} * prod_{1<k<q} x^{i_k} (R_{s_k} - 1) * x^{i_q} R_m`,
/// where `s_k` is the k-th partial sum and the final factor appears only
/// for `q >= 2`. Compositions sharing a partial sum share their head, so the
/// heads are accumulated once per partial sum.
fn positive_numerators(m: usize) -> Vec<IntPolynomial> {
    // heads[s] * D_s: compositions of s with binomial weights and all
    // factors except the final one.
    let mut heads: Vec<IntPolynomial> = vec![IntPolynomial::zero(); m + 1];
    let mut out = vec![IntPolynomial::zero()];
    for s in 1..=m {
        let lower = den_product(1, s - 1);
        let mut total = &(&x_pow(s) * &lower) * &prefix_suffix_den(s);
        total = &total + &(&cap_poly(s) * &lower);
        let mut head = &cap_poly(s) * &lower;
        let r_minus_one = &x_pow(2) * &suffix_poly(s);
        for (prev, h) in heads.iter().enumerate().take(s).skip(1) {
            let lifted = &(h * &den_product(prev + 1, s - 1)) * &x_pow(s - prev);
            let weight = binomial(s, prev);
            total = &total + &lifted.scale(&weight);
            head = &head + &(&lifted * &r_minus_one).scale(&weight);
        }
        heads[s] = head;
        out.push(total);
    }
    out
}

/// Growth of the positive orthant `Z_{>=1}^m` of the horocyclic subgroup.
pub fn positive_series(m: usize) -> RationalFunction {
    assert!(m >= 1, "dimension must be positive");
    let num = positive_numerators(m).swap_remove(m);
    RationalFunction::new(num, den_product(1, m)).expect("denominator is nonzero")
}

/// Growth series `S_m` of the horocyclic subgroup `Z^m`.
pub fn subgroup_series(m: usize) -> RationalFunction {
    assert!(m >= 1, "dimension must be positive");
    let nums = positive_numerators(m);
    let den = den_product(1, m);
    let mut num = den.clone();
    for (i, p) in nums.iter().enumerate().skip(1) {
        let weight = binomial(m, i) * (BigInt::from(1) << i);
        num = &num + &(p * &den_product(i + 1, m)).scale(&weight);
    }
    RationalFunction::new(num, den).expect("denominator is nonzero")
}

/// `B_{-n} = W_m^n S_m`, the relative growth of a coset of level `-n`.
pub fn relative_growth_series(m: usize, n: usize) -> RationalFunction {
    &RationalFunction::from_poly(suffix_poly(m).pow(n as u32)) * &subgroup_series(m)
}
