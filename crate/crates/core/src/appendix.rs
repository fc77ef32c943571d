//! Reference tables of growth series, shipped as `data/appendix.json`.
//!
//! Rational forms are stored factored, as printed, and normalized on load.

use serde::Deserialize;

use crate::series::{IntPolynomial, RationalFunction, SeriesPrefix};

const DATA: &str = include_str!("../data/appendix.json");

#[derive(Deserialize)]
struct Factor {
    poly: IntPolynomial,
    power: u32,
}

fn product(factors: &[Factor]) -> IntPolynomial {
    factors
        .iter()
        .fold(IntPolynomial::one(), |acc, f| &acc * &f.poly.pow(f.power))
}

fn form(num: &[Factor], den: &[Factor]) -> RationalFunction {
    RationalFunction::new(product(num), product(den)).expect("reference denominators are nonzero")
}

#[derive(Deserialize)]
struct RawSubgroup {
    m: usize,
    num: Vec<Factor>,
    den: Vec<Factor>,
    series: SeriesPrefixRaw,
}

#[derive(Deserialize)]
struct RawRow {
    name: String,
    num: Option<Vec<Factor>>,
    den: Option<Vec<Factor>>,
    series: SeriesPrefixRaw,
    correction: Option<String>,
}

#[derive(Deserialize)]
struct RawFull {
    m: usize,
    num: Vec<Factor>,
    den: Vec<Factor>,
    erratum: String,
}

#[derive(Deserialize)]
#[serde(transparent)]
struct SeriesPrefixRaw(#[serde(with = "crate::series::decimal::vec")] Vec<num_bigint::BigInt>);

#[derive(Deserialize)]
struct Raw {
    subgroup: Vec<RawSubgroup>,
    rows: Vec<RawRow>,
    full: Vec<RawFull>,
}

/// A tabulated series: its rational form when printed, and its leading
/// coefficients.
#[derive(Clone, Debug)]
pub struct ReferenceRow {
    pub name: String,
    pub form: Option<RationalFunction>,
    pub series: SeriesPrefix,
    pub correction: Option<String>,
}

/// A printed closed form known to be wrong, kept for comparison.
#[derive(Clone, Debug)]
pub struct Erratum {
    pub m: usize,
    pub form: RationalFunction,
    pub note: String,
}

pub struct Appendix {
    subgroup: Vec<ReferenceRow>,
    rows: Vec<ReferenceRow>,
    full: Vec<Erratum>,
}

impl Appendix {
    pub fn load() -> Self {
        let raw: Raw = serde_json::from_str(DATA).expect("reference data parses");
        Self {
            subgroup: raw
                .subgroup
                .into_iter()
                .map(|r| ReferenceRow {
                    name: format!("S_{}", r.m),
                    form: Some(form(&r.num, &r.den)),
                    series: SeriesPrefix::new(r.series.0),
                    correction: None,
                })
                .collect(),
            rows: raw
                .rows
                .into_iter()
                .map(|r| ReferenceRow {
                    form: r.num.zip(r.den).map(|(n, d)| form(&n, &d)),
                    name: r.name,
                    series: SeriesPrefix::new(r.series.0),
                    correction: r.correction,
                })
                .collect(),
            full: raw
                .full
                .into_iter()
                .map(|r| Erratum {
                    m: r.m,
                    form: form(&r.num, &r.den),
                    note: r.erratum,
                })
                .collect(),
        }
    }

    /// Tabulated subgroup growth for `m` in `1..=10`.
    pub fn subgroup(&self, m: usize) -> Option<&ReferenceRow> {
        self.subgroup.get(m.checked_sub(1)?)
    }

    /// Component rows such as `V_2`, `R_3`, `P_1`, `S_2`.
    pub fn row(&self, name: &str) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn rows(&self) -> &[ReferenceRow] {
        &self.rows
    }

    /// The printed full-group closed form for `m`, where one exists.
    pub fn printed_full(&self, m: usize) -> Option<&Erratum> {
        self.full.iter().find(|e| e.m == m)
    }
}
