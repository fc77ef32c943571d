//! Growth of finite-state machines whose edges carry languages.
//!
//! An edge is labelled by the growth function of its language. Finite
//! languages give polynomial labels; an edge may also carry a rational
//! label such as `x^2 / (1 - x)` for `a{a}*b`. When every word of the
//! machine's language decomposes uniquely along its path, the growth is
//! `v_s (I - A)^-1 v_a`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{IntPolynomial, RationalFunction, SeriesError, SeriesPrefix};

/// Coefficients checked when a label is not a polynomial.
const LABEL_CHECK_TERMS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfsaError {
    #[error("machine has no states")]
    NoStates,
    #[error("state {state} out of range for {count} states")]
    StateOutOfRange { state: usize, count: usize },
    #[error("label on edge {from} -> {to} has a nonzero constant term")]
    NonzeroConstantTerm { from: usize, to: usize },
    #[error("label on edge {from} -> {to} has a negative coefficient at x^{index}")]
    NegativeCoefficient { from: usize, to: usize, index: usize },
    #[error("label on edge {from} -> {to}: {source}")]
    BadLabel {
        from: usize,
        to: usize,
        source: SeriesError,
    },
    #[error("relabelling is not a permutation of 0..{count}")]
    InvalidPermutation { count: usize },
    #[error("invalid machine description: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthAutomaton {
    state_count: usize,
    start: usize,
    accepts: BTreeSet<usize>,
    edges: BTreeMap<(usize, usize), RationalFunction>,
}

impl GrowthAutomaton {
    pub fn new(
        state_count: usize,
        start: usize,
        accepts: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GfsaError> {
        if state_count == 0 {
            return Err(GfsaError::NoStates);
        }
        let mut m = Self {
            state_count,
            start: 0,
            accepts: BTreeSet::new(),
            edges: BTreeMap::new(),
        };
        m.start = m.state(start)?;
        for a in accepts {
            let a = m.state(a)?;
            m.accepts.insert(a);
        }
        Ok(m)
    }

    fn state(&self, s: usize) -> Result<usize, GfsaError> {
        if s < self.state_count {
            Ok(s)
        } else {
            Err(GfsaError::StateOutOfRange {
                state: s,
                count: self.state_count,
            })
        }
    }

    /// Adds an edge, merging with an existing edge between the same states.
    pub fn add_edge(
        &mut self,
        from: usize,
        to: usize,
        label: RationalFunction,
    ) -> Result<(), GfsaError> {
        self.state(from)?;
        self.state(to)?;
        check_label(from, to, &label)?;
        let merged = match self.edges.remove(&(from, to)) {
            Some(old) => &old + &label,
            None => label,
        };
        if !merged.is_zero() {
            self.edges.insert((from, to), merged);
        }
        Ok(())
    }

    pub fn add_poly_edge(&mut self, from: usize, to: usize, label: &[i64]) -> Result<(), GfsaError> {
        self.add_edge(from, to, IntPolynomial::from_i64s(label).into())
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepts(&self) -> &BTreeSet<usize> {
        &self.accepts
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &RationalFunction)> {
        self.edges.iter().map(|(&(p, q), l)| (p, q, l))
    }

    /// The generalized adjacency matrix.
    pub fn adjacency(&self) -> Vec<Vec<RationalFunction>> {
        let n = self.state_count;
        let mut a = vec![vec![RationalFunction::zero(); n]; n];
        for (&(p, q), l) in &self.edges {
            a[p][q] = l.clone();
        }
        a
    }

    /// The same machine with state `s` renamed to `perm[s]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GfsaError> {
        let n = self.state_count;
        let distinct: BTreeSet<usize> = perm.iter().copied().collect();
        if perm.len() != n || distinct.len() != n || distinct.iter().any(|&s| s >= n) {
            return Err(GfsaError::InvalidPermutation { count: n });
        }
        Ok(Self {
            state_count: n,
            start: perm[self.start],
            accepts: self.accepts.iter().map(|&a| perm[a]).collect(),
            edges: self
                .edges
                .iter()
                .map(|(&(p, q), l)| ((perm[p], perm[q]), l.clone()))
                .collect(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self, GfsaError> {
        let raw: MachineJson =
            serde_json::from_str(text).map_err(|e| GfsaError::Json(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MachineJson::from(self)).expect("machine serializes")
    }
}

fn check_label(from: usize, to: usize, label: &RationalFunction) -> Result<(), GfsaError> {
    let bad = |source| GfsaError::BadLabel { from, to, source };
    let coeffs = match label.as_polynomial() {
        Some(p) => p.coeffs().to_vec(),
        None => label
            .series_prefix(LABEL_CHECK_TERMS)
            .map_err(bad)?
            .coeffs()
            .to_vec(),
    };
    if coeffs.first().is_some_and(|c| !c.is_zero()) {
        return Err(GfsaError::NonzeroConstantTerm { from, to });
    }
    if let Some(index) = coeffs.iter().position(Signed::is_negative) {
        return Err(GfsaError::NegativeCoefficient { from, to, index });
    }
    Ok(())
}

/// Solves `(I - A) u = v_a` and returns `u[start]`.
pub fn automaton_growth(m: &GrowthAutomaton) -> RationalFunction {
    let n = m.state_count;
    let a = m.adjacency();
    let mut rows: Vec<Vec<RationalFunction>> = (0..n)
        .map(|i| {
            let mut row: Vec<RationalFunction> = (0..n)
                .map(|j| {
                    let id = if i == j {
                        RationalFunction::one()
                    } else {
                        RationalFunction::zero()
                    };
                    &id - &a[i][j]
                })
                .collect();
            row.push(if m.accepts.contains(&i) {
                RationalFunction::one()
            } else {
                RationalFunction::zero()
            });
            row
        })
        .collect();

    for col in 0..n {
        // Labels vanish at 0, so det(I - A) = 1 + O(x) and a pivot exists.
        let pivot = (col..n)
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| {
                let e = &rows[r][col];
                (e.den().degree(), e.num().degree())
            })
            .expect("I - A is invertible");
        rows.swap(col, pivot);
        let inv = rows[col][col].inverse().expect("pivot is nonzero");
        for entry in rows[col].iter_mut().skip(col) {
            *entry = &*entry * &inv;
        }
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            let pivot_row = rows[col].clone();
            for (entry, p) in rows[r].iter_mut().zip(&pivot_row).skip(col) {
                *entry = &*entry - &(&factor * p);
            }
        }
    }
    rows[m.start][n].clone()
}

/// Growth prefix through `x^max_len` by walking every path explicitly and
/// multiplying the label counts along it.
pub fn enumerate_growth(m: &GrowthAutomaton, max_len: usize) -> SeriesPrefix {
    let labels: Vec<(usize, usize, Vec<BigInt>)> = m
        .edges
        .iter()
        .map(|(&(p, q), l)| {
            let c = l
                .series_prefix(max_len)
                .expect("labels are checked at construction");
            (p, q, c.coeffs().to_vec())
        })
        .collect();
    let mut out = vec![BigInt::zero(); max_len + 1];
    walk(m, &labels, m.start, 0, &BigInt::from(1), &mut out);
    SeriesPrefix::new(out)
}

fn walk(
    m: &GrowthAutomaton,
    labels: &[(usize, usize, Vec<BigInt>)],
    state: usize,
    len: usize,
    weight: &BigInt,
    out: &mut [BigInt],
) {
    if m.accepts.contains(&state) {
        out[len] += weight;
    }
    let max_len = out.len() - 1;
    for (p, q, counts) in labels {
        if *p != state {
            continue;
        }
        for (l, c) in counts.iter().enumerate().take(max_len - len + 1).skip(1) {
            if !c.is_zero() {
                walk(m, labels, *q, len + l, &(weight * c), out);
            }
        }
    }
}

/// Letter-by-letter machine for the positive quadrant `a+ b+` of `Z^2`.
pub fn build_quadrant_fsa() -> GrowthAutomaton {
    let mut m = GrowthAutomaton::new(3, 0, [2]).unwrap();
    for (p, q) in [(0, 1), (1, 1), (1, 2), (2, 2)] {
        m.add_poly_edge(p, q, &[0, 1]).unwrap();
    }
    m
}

/// Two-state machine for the same quadrant: `S --a{a}*b--> A` and a `b`
/// loop on `A`.
pub fn build_quadrant_gfsa() -> GrowthAutomaton {
    let mut m = GrowthAutomaton::new(2, 0, [1]).unwrap();
    let aab = RationalFunction::new(
        IntPolynomial::monomial(1, 2),
        IntPolynomial::from_i64s(&[1, -1]),
    )
    .unwrap();
    m.add_edge(0, 1, aab).unwrap();
    m.add_poly_edge(1, 1, &[0, 1]).unwrap();
    m
}

/// Growth of the positive quadrant language, `x^2 / (1 - x)^2`.
pub fn quadrant_growth() -> RationalFunction {
    RationalFunction::new(
        IntPolynomial::monomial(1, 2),
        IntPolynomial::from_i64s(&[1, -2, 1]),
    )
    .unwrap()
}

/// One accepting state looping on `t T W_m`, labelled `x^2 (1 + 2x)^m`.
pub fn build_prefix_suffix_machine(m: usize) -> GrowthAutomaton {
    let mut machine = GrowthAutomaton::new(1, 0, [0]).unwrap();
    let loop_label = IntPolynomial::monomial(1, 2) * IntPolynomial::from_i64s(&[1, 2]).pow(m as u32);
    machine.add_edge(0, 0, loop_label.into()).unwrap();
    machine
}

#[derive(Serialize, Deserialize)]
struct MachineJson {
    states: usize,
    start: usize,
    accepts: Vec<usize>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: usize,
    to: usize,
    label: Vec<Coeff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label_den: Option<Vec<Coeff>>,
}

/// A coefficient written either as a JSON integer or a decimal string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coeff {
    Int(i64),
    Str(String),
}

impl Coeff {
    fn value(&self) -> Result<BigInt, GfsaError> {
        match self {
            Coeff::Int(v) => Ok(BigInt::from(*v)),
            Coeff::Str(s) => s
                .parse()
                .map_err(|_| GfsaError::Json(format!("bad coefficient {s:?}"))),
        }
    }

    fn poly(cs: &[Coeff]) -> Result<IntPolynomial, GfsaError> {
        Ok(IntPolynomial::from_coeffs(
            cs.iter().map(Coeff::value).collect::<Result<_, _>>()?,
        ))
    }

    fn list(p: &IntPolynomial) -> Vec<Coeff> {
        p.coeffs().iter().map(|c| Coeff::Str(c.to_string())).collect()
    }
}

impl TryFrom<MachineJson> for GrowthAutomaton {
    type Error = GfsaError;

    fn try_from(raw: MachineJson) -> Result<Self, GfsaError> {
        let mut m = GrowthAutomaton::new(raw.states, raw.start, raw.accepts)?;
        for e in raw.edges {
            let num = Coeff::poly(&e.label)?;
            let den = match &e.label_den {
                Some(d) => Coeff::poly(d)?,
                None => IntPolynomial::one(),
            };
            let label = RationalFunction::new(num, den).map_err(|source| GfsaError::BadLabel {
                from: e.from,
                to: e.to,
                source,
            })?;
            m.add_edge(e.from, e.to, label)?;
        }
        Ok(m)
    }
}

impl From<&GrowthAutomaton> for MachineJson {
    fn from(m: &GrowthAutomaton) -> Self {
        MachineJson {
            states: m.state_count,
            start: m.start,
            accepts: m.accepts.iter().copied().collect(),
            edges: m
                .edges()
                .map(|(from, to, l)| EdgeJson {
                    from,
                    to,
                    label: Coeff::list(l.num()),
                    label_den: (!l.is_polynomial()).then(|| Coeff::list(l.den())),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(IntPolynomial::from_i64s(num), IntPolynomial::from_i64s(den)).unwrap()
    }

    #[test]
    fn quadrant_fsa_matrix() {
        let m = build_quadrant_fsa();
        assert_eq!(m.state_count(), 3);
        let x = rf(&[0, 1], &[1]);
        let z = RationalFunction::zero();
        let expected = vec![
            vec![z.clone(), x.clone(), z.clone()],
            vec![z.clone(), x.clone(), x.clone()],
            vec![z.clone(), z.clone(), x.clone()],
        ];
        assert_eq!(m.adjacency(), expected);
    }

    #[test]
    fn quadrant_machines_grow_like_the_quadrant() {
        assert_eq!(automaton_growth(&build_quadrant_fsa()), quadrant_growth());
        assert_eq!(automaton_growth(&build_quadrant_gfsa()), quadrant_growth());
        assert_eq!(
            quadrant_growth().series_prefix(6).unwrap().to_i64s(),
            vec![0, 0, 1, 2, 3, 4, 5]
        );
    }

    // Runs the letter-level automaton for a+b+ over every word in {a, b}^n.
    #[test]
    fn quadrant_fsa_matches_its_words() {
        let growth = automaton_growth(&build_quadrant_fsa()).series_prefix(10).unwrap();
        for n in 0..=10usize {
            let accepted = (0u32..1 << n)
                .filter(|bits| {
                    let mut state = 0;
                    for i in 0..n {
                        let b = bits >> i & 1 == 1;
                        state = match (state, b) {
                            (0, false) | (1, false) => 1,
                            (1, true) | (2, true) => 2,
                            _ => return false,
                        };
                    }
                    state == 2
                })
                .count();
            assert_eq!(growth.coeffs()[n], BigInt::from(accepted), "length {n}");
        }
    }

    #[test]
    fn empty_accept_set_gives_zero() {
        let mut m = GrowthAutomaton::new(3, 0, []).unwrap();
        m.add_poly_edge(0, 1, &[0, 1]).unwrap();
        assert!(automaton_growth(&m).is_zero());
    }

    #[test]
    fn prefix_suffix_machines() {
        let dens: [&[i64]; 3] = [&[1, 0, -1, -2], &[1, 0, -1, -4, -4], &[1, 0, -1, -6, -12, -8]];
        for (i, den) in dens.iter().enumerate() {
            let g = automaton_growth(&build_prefix_suffix_machine(i + 1));
            assert_eq!(g, rf(&[1], den));
        }
        let r1 = automaton_growth(&build_prefix_suffix_machine(1));
        assert_eq!(r1.series_prefix(7).unwrap().to_i64s(), vec![1, 0, 1, 2, 1, 4, 5, 6]);
    }

    #[test]
    fn enumeration_matches_builders() {
        for m in [
            build_quadrant_fsa(),
            build_quadrant_gfsa(),
            build_prefix_suffix_machine(1),
            build_prefix_suffix_machine(2),
            build_prefix_suffix_machine(3),
        ] {
            let solved = automaton_growth(&m).series_prefix(10).unwrap();
            assert_eq!(enumerate_growth(&m, 10), solved);
        }
    }

    #[test]
    fn malformed_labels_rejected() {
        let mut m = GrowthAutomaton::new(2, 0, [1]).unwrap();
        assert_eq!(
            m.add_poly_edge(0, 1, &[1, 1]),
            Err(GfsaError::NonzeroConstantTerm { from: 0, to: 1 })
        );
        assert_eq!(
            m.add_poly_edge(0, 1, &[0, 1, -1]),
            Err(GfsaError::NegativeCoefficient { from: 0, to: 1, index: 2 })
        );
        assert_eq!(
            m.add_edge(0, 1, rf(&[0, 0, 1], &[1, 1])),
            Err(GfsaError::NegativeCoefficient { from: 0, to: 1, index: 3 })
        );
        assert!(matches!(
            m.add_edge(0, 1, rf(&[0, 1], &[2, 1])),
            Err(GfsaError::BadLabel { .. })
        ));
        assert_eq!(
            m.add_poly_edge(0, 5, &[0, 1]),
            Err(GfsaError::StateOutOfRange { state: 5, count: 2 })
        );
        assert_eq!(GrowthAutomaton::new(0, 0, []), Err(GfsaError::NoStates));
    }

    #[test]
    fn parallel_edges_merge() {
        let mut m = GrowthAutomaton::new(2, 0, [1]).unwrap();
        m.add_poly_edge(0, 1, &[0, 1]).unwrap();
        m.add_poly_edge(0, 1, &[0, 0, 2]).unwrap();
        assert_eq!(m.edges().count(), 1);
        assert_eq!(automaton_growth(&m), rf(&[0, 1, 2], &[1]));
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"states":2,"start":0,"accepts":[1],
            "edges":[{"from":0,"to":1,"label":[0,0,1],"label_den":[1,-1]},
                     {"from":1,"to":1,"label":["0","1"]}]}"#;
        let m = GrowthAutomaton::from_json(text).unwrap();
        assert_eq!(m, build_quadrant_gfsa());
        assert_eq!(GrowthAutomaton::from_json(&m.to_json()).unwrap(), m);
        assert!(matches!(GrowthAutomaton::from_json("{}"), Err(GfsaError::Json(_))));
    }

    fn machine_strategy() -> impl Strategy<Value = GrowthAutomaton> {
        (1usize..=4).prop_flat_map(|n| {
            let edge = (0..n, 0..n, prop::collection::vec(0i64..=2, 1..=3));
            (
                Just(n),
                0..n,
                prop::collection::btree_set(0..n, 0..=n),
                prop::collection::vec(edge, 0..=5),
            )
                .prop_map(|(n, start, accepts, edges)| {
                    let mut m = GrowthAutomaton::new(n, start, accepts).unwrap();
                    for (p, q, tail) in edges {
                        let mut label = vec![0];
                        label.extend(tail);
                        m.add_poly_edge(p, q, &label).unwrap();
                    }
                    m
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn solve_matches_path_enumeration(m in machine_strategy()) {
            let solved = automaton_growth(&m).series_prefix(10).unwrap();
            prop_assert_eq!(enumerate_growth(&m, 10), solved);
        }

        #[test]
        fn relabelling_preserves_growth(
            (m, perm) in machine_strategy().prop_flat_map(|m| {
                let n = m.state_count();
                (Just(m), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            })
        ) {
            let r = m.relabel(&perm).unwrap();
            prop_assert_eq!(automaton_growth(&r), automaton_growth(&m));
        }
    }
}
