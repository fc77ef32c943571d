//! Verification suites: each compares computed values against an independent
//! source and reports every check with a witness on failure.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::appendix::Appendix;
use crate::bfs::{Ball, BfsError, Budget};
use crate::formulas::{
    cap_poly, cap_poly_recursive, coset_census, full_series_closed_form, level_series,
    positive_series, prefix_suffix_series, printed_general_full_series, relative_growth_series,
    subgroup_series, suffix_poly, FormulaError, LevelSeries,
};
use crate::gfsa::{
    automaton_growth, build_prefix_suffix_machine, build_quadrant_fsa, build_quadrant_gfsa,
    enumerate_growth, quadrant_growth, GrowthAutomaton,
};
use crate::group::Word;
use crate::normal_form::{
    check_level_ranges, check_spelling, check_tiling, level_upper, word_length_i64,
    NormalFormError,
};
use crate::series::{IntPolynomial, RationalFunction, SeriesPrefix};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Budget(#[from] BfsError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Scale(#[from] NormalFormError),
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Appendix,
    Bfs,
    Language,
    Census,
    Gfsa,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Appendix,
        Suite::Bfs,
        Suite::Language,
        Suite::Census,
        Suite::Gfsa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Appendix => "appendix",
            Suite::Bfs => "bfs",
            Suite::Language => "language",
            Suite::Census => "census",
            Suite::Gfsa => "gfsa",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, witness: Option<String>) -> Self {
        Check {
            name: name.into(),
            passed: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostic {
    pub name: String,
    /// `correction` for a fixed table entry, `erratum` for a printed value
    /// that fails verification and is not used.
    pub kind: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub m: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl SuiteReport {
    fn new(suite: Suite, m: usize, checks: Vec<Check>, diagnostics: Vec<Diagnostic>) -> Self {
        SuiteReport {
            suite,
            m,
            passed: checks.iter().all(|c| c.passed),
            checks,
            diagnostics,
        }
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// First coefficient where two prefixes differ, over their common length.
pub fn series_mismatch(computed: &SeriesPrefix, expected: &SeriesPrefix) -> Option<String> {
    let (a, b) = (computed.coeffs(), expected.coeffs());
    if let Some(k) = (0..a.len().min(b.len())).find(|&k| a[k] != b[k]) {
        return Some(format!("x^{k}: computed {}, expected {}", a[k], b[k]));
    }
    (a.len() < b.len()).then(|| format!("computed only {} terms", a.len()))
}

fn counts_prefix(counts: &[u64]) -> SeriesPrefix {
    SeriesPrefix::new(counts.iter().map(|&c| BigInt::from(c)).collect())
}

fn expand(f: &RationalFunction, n: usize) -> SeriesPrefix {
    f.series_prefix(n).expect("growth series expand")
}

fn compare_forms(name: &str, computed: &RationalFunction, expected: &RationalFunction) -> Check {
    let witness = (computed != expected).then(|| {
        format!(
            "computed {}, expected {}",
            computed.to_plain(),
            expected.to_plain()
        )
    });
    Check::new(name, witness)
}

fn compare_series(name: &str, computed: &SeriesPrefix, expected: &SeriesPrefix) -> Check {
    Check::new(name, series_mismatch(computed, expected))
}

pub fn run_suite(suite: Suite, m: usize, radius: Option<usize>) -> Result<SuiteReport, VerifyError> {
    if m == 0 {
        return Err(VerifyError::Unsupported("m must be at least 1".into()));
    }
    match suite {
        Suite::Appendix => verify_appendix(m),
        Suite::Bfs => verify_bfs(m, radius.unwrap_or_else(|| default_bfs_radius(m))),
        Suite::Language => verify_language(m),
        Suite::Census => verify_census(m, radius.unwrap_or_else(|| default_census_radius(m))),
        Suite::Gfsa => Ok(verify_gfsa(m)),
    }
}

fn default_bfs_radius(m: usize) -> usize {
    match m {
        1 => 10,
        2 => 7,
        3 => 6,
        _ => 3,
    }
}

fn default_census_radius(m: usize) -> usize {
    match m {
        1 | 2 => 8,
        3 => 6,
        _ => 3,
    }
}

pub fn verify_appendix(m: usize) -> Result<SuiteReport, VerifyError> {
    let table = Appendix::load();
    let row = table
        .subgroup(m)
        .ok_or_else(|| VerifyError::Unsupported(format!("no reference table for m = {m}")))?;
    let s_m = subgroup_series(m);
    let mut checks = vec![
        compare_forms(&format!("S_{m} rational form"), &s_m, row.form.as_ref().unwrap()),
        compare_series(
            &format!("S_{m} series"),
            &expand(&s_m, row.series.len() - 1),
            &row.series,
        ),
        Check::new(
            format!("V_{m} closed form = recursion"),
            (cap_poly(m) != cap_poly_recursive(m)).then(|| {
                format!("{} vs {}", cap_poly(m).to_plain(), cap_poly_recursive(m).to_plain())
            }),
        ),
    ];
    let den = &IntPolynomial::one() - &(&IntPolynomial::monomial(1, 2) * &suffix_poly(m));
    let product = &prefix_suffix_series(m) * &RationalFunction::from_poly(den);
    checks.push(Check::new(
        format!("R_{m} (1 - x^2 W_{m}) = 1"),
        (product != RationalFunction::one()).then(|| product.to_plain()),
    ));

    let mut diagnostics = Vec::new();
    let components: [(String, RationalFunction); 4] = [
        (format!("V_{m}"), RationalFunction::from_poly(cap_poly(m))),
        (format!("R_{m}"), prefix_suffix_series(m)),
        (format!("P_{m}"), positive_series(m)),
        (format!("S_{m}"), s_m.clone()),
    ];
    for (name, computed) in components {
        let Some(row) = table.row(&name) else { continue };
        if let Some(form) = &row.form {
            checks.push(compare_forms(&format!("{name} rational form"), &computed, form));
        }
        checks.push(compare_series(
            &format!("{name} series"),
            &expand(&computed, row.series.len() - 1),
            &row.series,
        ));
        if let Some(note) = &row.correction {
            diagnostics.push(Diagnostic {
                name,
                kind: "correction",
                detail: note.clone(),
            });
        }
    }
    Ok(SuiteReport::new(Suite::Appendix, m, checks, diagnostics))
}

/// The assembled full-group series next to its closed form, the general
/// printed formula, and any printed closed form for this `m`.
#[derive(Clone, Debug, Serialize)]
pub struct FullSeriesReport {
    pub m: usize,
    pub assembled: RationalFunction,
    pub levels: LevelSeries,
    pub closed_form_agrees: bool,
    pub general_formula_agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed: Option<PrintedComparison>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrintedComparison {
    pub form: RationalFunction,
    pub sigma1: String,
    pub expected_sigma1: usize,
    pub agrees: bool,
    pub erratum: String,
}

pub fn full_series_report(m: usize) -> Result<FullSeriesReport, VerifyError> {
    let levels = level_series(m)?;
    let assembled = crate::formulas::full_series(m)?;
    let printed = Appendix::load().printed_full(m).map(|e| PrintedComparison {
        sigma1: expand(&e.form, 1).coeffs()[1].to_string(),
        expected_sigma1: 2 * m + 2,
        agrees: e.form == assembled,
        form: e.form.clone(),
        erratum: e.note.clone(),
    });
    Ok(FullSeriesReport {
        m,
        closed_form_agrees: assembled == full_series_closed_form(m),
        general_formula_agrees: assembled
            == printed_general_full_series(m, &levels.p_hat, &levels.q_hat),
        assembled,
        levels,
        printed,
    })
}

impl FullSeriesReport {
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        self.printed
            .iter()
            .filter(|p| !p.agrees)
            .map(|p| Diagnostic {
                name: format!("printed closed form of the full series, m = {}", self.m),
                kind: "erratum",
                detail: format!(
                    "printed {} has sigma(1) = {}, expected {}",
                    p.form.to_plain(),
                    p.sigma1,
                    p.expected_sigma1
                ),
            })
            .collect()
    }
}

pub fn verify_bfs(m: usize, radius: usize) -> Result<SuiteReport, VerifyError> {
    let ball = Ball::explore(m, radius, Budget::from_env())?;
    let spheres = ball.spheres();
    let report = full_series_report(m)?;
    let mut checks = vec![
        compare_series(
            "spheres = full series",
            &counts_prefix(&spheres.total),
            &expand(&report.assembled, radius),
        ),
        compare_series(
            "horocyclic spheres = subgroup series",
            &counts_prefix(&spheres.horocyclic),
            &expand(&subgroup_series(m), radius),
        ),
        Check::new(
            "assembled = closed form",
            (!report.closed_form_agrees).then(|| "closed form differs".to_string()),
        ),
        Check::new(
            "assembled = general formula with fitted numerators",
            (!report.general_formula_agrees).then(|| "general formula differs".to_string()),
        ),
    ];
    if radius >= 1 {
        checks.push(Check::new(
            "sigma(1) = 2m + 2",
            (spheres.total[1] != 2 * m as u64 + 2).then(|| format!("sigma(1) = {}", spheres.total[1])),
        ));
    }
    let level_gap = (0..=radius).find(|&n| {
        spheres.by_level.values().map(|v| v[n]).sum::<u64>() != spheres.total[n]
    });
    checks.push(Check::new(
        "levels partition each sphere",
        level_gap.map(|n| format!("radius {n}")),
    ));
    let bad = ball.horocyclic().find(|(v, d)| word_length_i64(v) != *d);
    checks.push(Check::new(
        "horocyclic distance = word length",
        bad.map(|(v, d)| format!("{v:?}: distance {d}, word length {}", word_length_i64(&v))),
    ));
    Ok(SuiteReport::new(Suite::Bfs, m, checks, report.diagnostics()))
}

// Lattice points by word length up to `max_len`, counting each point of the
// closed positive orthant for its sign images.
fn length_counts(m: usize, max_len: usize) -> Vec<u64> {
    let hi: i64 = level_upper(max_len.div_ceil(2)).to_i64().expect("small box");
    let mut counts = vec![0u64; max_len + 1];
    let mut v = vec![0i64; m];
    loop {
        let len = word_length_i64(&v);
        if len <= max_len {
            counts[len] += 1 << v.iter().filter(|&&c| c != 0).count();
        }
        let Some(i) = (0..m).find(|&i| v[i] < hi) else {
            return counts;
        };
        v[i] += 1;
        v[..i].fill(0);
    }
}

fn for_each_point(lo: i64, hi: i64, m: usize, mut f: impl FnMut(&[i64]) -> bool) -> bool {
    let mut v = vec![lo; m];
    loop {
        if !f(&v) {
            return false;
        }
        let Some(i) = (0..m).find(|&i| v[i] < hi) else {
            return true;
        };
        v[i] += 1;
        v[..i].fill(lo);
    }
}

pub fn verify_language(m: usize) -> Result<SuiteReport, VerifyError> {
    let (max_level, bfs_radius) = match m {
        1 | 2 => (3, 8),
        3 => (1, 6),
        4 => (0, 4),
        _ => (0, 2),
    };
    let mut checks = Vec::new();

    let hi = level_upper(max_level).to_i64().unwrap();
    let mut witness = None;
    for_each_point(1, hi, m, |v| {
        let big: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
        witness = check_spelling(&big).map(|x| format!("{v:?}: {} {}", x.word, x.reason));
        witness.is_none()
    });
    checks.push(Check::new(format!("spell round trip on [1, {hi}]^{m}"), witness));

    let signed = level_upper(1).to_i64().unwrap().min(hi);
    let mut witness = None;
    for_each_point(-signed, signed, m.min(3), |v| {
        let mut full = v.to_vec();
        full.resize(m, 0);
        let big: Vec<BigInt> = full.iter().map(|&c| BigInt::from(c)).collect();
        witness = check_spelling(&big).map(|x| format!("{full:?}: {} {}", x.word, x.reason));
        witness.is_none()
    });
    checks.push(Check::new(format!("spell round trip on signed box [-{signed}, {signed}]"), witness));

    for n in 0..=max_level {
        let r = check_level_ranges(m, n)?;
        checks.push(Check::new(
            format!("level {n} words distinct and inside the level box"),
            r.violations.first().map(|v| format!("{}: {}", v.word, v.reason)),
        ));
    }
    let t = check_tiling(m, max_level)?;
    checks.push(Check::new(
        format!("levels 0..={max_level} tile [1, {hi}]^{m} exactly once"),
        t.violations.first().map(|v| format!("{}: {}", v.word, v.reason)),
    ));

    let ball = Ball::explore(m, bfs_radius, Budget::from_env())?;
    let bad = ball.horocyclic().find(|(v, d)| word_length_i64(v) != *d);
    checks.push(Check::new(
        format!("word length = distance inside radius {bfs_radius}"),
        bad.map(|(v, d)| format!("{v:?}: distance {d}, word length {}", word_length_i64(&v))),
    ));
    checks.push(compare_series(
        format!("every point of word length <= {bfs_radius} is in the ball").as_str(),
        &counts_prefix(&ball.spheres().horocyclic),
        &counts_prefix(&length_counts(m, bfs_radius)),
    ));
    Ok(SuiteReport::new(Suite::Language, m, checks, Vec::new()))
}

pub fn verify_census(m: usize, radius: usize) -> Result<SuiteReport, VerifyError> {
    let ball = Ball::explore(m, radius, Budget::from_env())?;
    let bfs = ball.coset_census();
    let stems = coset_census(m, radius)?;
    let mut checks = Vec::new();
    for depth in 0..=radius as i64 {
        checks.push(compare_series(
            &format!("chi({}, r) stems = BFS", -depth),
            &stems.column(-depth),
            &bfs.column(-depth),
        ));
    }
    let fit = level_series(m);
    checks.push(Check::new(
        "level series fit exact through the certification horizon",
        fit.as_ref().err().map(ToString::to_string),
    ));
    if let Ok(levels) = &fit {
        for depth in 0..=radius {
            checks.push(compare_series(
                &format!("X_-{depth} = BFS census"),
                &expand(&levels.level(depth), radius),
                &bfs.column(-(depth as i64)),
            ));
        }
    }
    for (stem, n) in [("", 0), ("t", 0), ("T", 1), ("T^2", 2)] {
        let word = Word::parse(m, stem).expect("stem parses");
        if word.len() > radius {
            continue;
        }
        let name = format!("relative growth below {:?} = W^{n} S_m", stem);
        let check = match ball.relative_growth(&word) {
            Ok(b) => compare_series(
                &name,
                &counts_prefix(&b),
                &expand(&relative_growth_series(m, n), b.len() - 1),
            ),
            Err(e) => Check::new(name, Some(e.to_string())),
        };
        checks.push(check);
    }
    Ok(SuiteReport::new(Suite::Census, m, checks, Vec::new()))
}

fn machine_checks(name: &str, machine: &GrowthAutomaton, expected: &RationalFunction) -> Vec<Check> {
    let growth = automaton_growth(machine);
    let reversed: Vec<usize> = (0..machine.state_count()).rev().collect();
    let relabelled = automaton_growth(&machine.relabel(&reversed).expect("permutation"));
    vec![
        compare_forms(&format!("{name} growth"), &growth, expected),
        compare_series(
            &format!("{name} path enumeration to length 10"),
            &enumerate_growth(machine, 10),
            &expand(&growth, 10),
        ),
        compare_forms(&format!("{name} relabelled"), &relabelled, &growth),
    ]
}

pub fn verify_gfsa(m: usize) -> SuiteReport {
    let mut checks = machine_checks("quadrant FSA", &build_quadrant_fsa(), &quadrant_growth());
    checks.extend(machine_checks(
        "quadrant gFSA",
        &build_quadrant_gfsa(),
        &quadrant_growth(),
    ));
    let dims = if m <= 3 { 1..=3 } else { m..=m };
    for k in dims {
        checks.extend(machine_checks(
            &format!("prefix/suffix machine m = {k}"),
            &build_prefix_suffix_machine(k),
            &prefix_suffix_series(k),
        ));
    }
    SuiteReport::new(Suite::Gfsa, m, checks, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_at_small_scale() {
        for suite in Suite::ALL {
            let r = run_suite(suite, 1, None).unwrap();
            assert!(r.passed, "{suite}: {:?}", r.first_failure());
        }
        for m in [2, 10] {
            let r = verify_appendix(m).unwrap();
            assert!(r.passed, "{:?}", r.first_failure());
        }
    }

    #[test]
    fn appendix_reports_the_v2_correction() {
        let r = verify_appendix(2).unwrap();
        assert!(r.diagnostics.iter().any(|d| d.name == "V_2" && d.kind == "correction"));
        assert!(verify_appendix(11).is_err());
    }

    #[test]
    fn bfs_reports_the_printed_erratum() {
        let r = verify_bfs(1, 6).unwrap();
        assert!(r.passed);
        assert_eq!(r.diagnostics.len(), 1);
        assert_eq!(r.diagnostics[0].kind, "erratum");
        assert!(verify_bfs(3, 3).unwrap().diagnostics.is_empty());
    }

    #[test]
    fn full_report_values() {
        let r = full_series_report(2).unwrap();
        assert!(r.closed_form_agrees && r.general_formula_agrees);
        let p = r.printed.unwrap();
        assert_eq!((p.sigma1.as_str(), p.expected_sigma1, p.agrees), ("7", 6, false));
    }

    #[test]
    fn mismatch_witness() {
        let a = SeriesPrefix::from_i64s(&[1, 2, 3]);
        let b = SeriesPrefix::from_i64s(&[1, 2, 4]);
        assert_eq!(series_mismatch(&a, &b).unwrap(), "x^2: computed 3, expected 4");
        assert_eq!(series_mismatch(&a, &a), None);
    }

    #[test]
    fn budget_errors_are_distinct() {
        assert!(matches!(
            run_suite(Suite::Bfs, 2, Some(30)),
            Err(VerifyError::Budget(_))
        ));
        assert!(matches!(
            run_suite(Suite::Census, 2, Some(30)),
            Err(VerifyError::Budget(_))
        ));
    }
}
