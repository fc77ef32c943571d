//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use horogrowth::appendix::Appendix;
use horogrowth::bfs::{bfs_spheres, bfs_subgroup_spheres};
use horogrowth::formulas::{
    cap_poly, cap_poly_recursive, certification_horizon, full_series, level_series,
    positive_series, prefix_suffix_series, subgroup_series, suffix_poly,
};
use horogrowth::gfsa::{automaton_growth, build_quadrant_fsa, build_quadrant_gfsa};
use horogrowth::series::{IntPolynomial, RationalFunction, SeriesPrefix};
use horogrowth::verify::{
    full_series_report, series_mismatch, verify_census, verify_gfsa, verify_language, SuiteReport,
};

type Outcome = Result<Vec<String>, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

fn same_prefix(what: &str, computed: &SeriesPrefix, expected: &[i64]) -> Result<(), String> {
    let expected = SeriesPrefix::from_i64s(expected);
    match series_mismatch(computed, &expected) {
        None => Ok(()),
        Some(w) => Err(format!("{what}: {w}")),
    }
}

fn suite_passes(report: SuiteReport) -> Result<(), String> {
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(format!(
            "{} m={}: {}: {}",
            report.suite,
            report.m,
            c.name,
            c.witness.as_deref().unwrap_or("")
        )),
    }
}

fn appendix_reproduction() -> Outcome {
    let table = Appendix::load();
    for m in 1..=10 {
        let row = table.subgroup(m).ok_or(format!("no reference row for m = {m}"))?;
        let s = subgroup_series(m);
        ensure(Some(&s) == row.form.as_ref(), || {
            format!("S_{m} = {} differs from the reference form", s.to_plain())
        })?;
        let reference: Vec<i64> = row.series.to_i64s()[..9].to_vec();
        same_prefix(&format!("S_{m}"), &s.series_prefix(8).unwrap(), &reference)?;
    }
    same_prefix(
        "S_10",
        &subgroup_series(10).series_prefix(8).unwrap(),
        &[1, 20, 200, 1340, 7000, 32964, 160820, 847124, 4542980],
    )?;
    Ok(vec![])
}

fn component_formulas() -> Outcome {
    for m in 1..=10 {
        ensure(cap_poly(m) == cap_poly_recursive(m), || format!("V_{m} closed form != recursion"))?;
        let den = &IntPolynomial::one() - &(&IntPolynomial::monomial(1, 2) * &suffix_poly(m));
        let product = &prefix_suffix_series(m) * &RationalFunction::from_poly(den);
        ensure(product == RationalFunction::one(), || {
            format!("R_{m} (1 - x^2 W_{m}) = {}", product.to_plain())
        })?;
    }
    same_prefix(
        "P_3",
        &positive_series(3).series_prefix(8).unwrap(),
        &[0, 0, 0, 1, 3, 10, 34, 94, 251],
    )?;
    Ok(vec![])
}

fn bfs_subgroup() -> Outcome {
    let cases: [(usize, usize, &[u64]); 3] = [
        (1, 10, &[1, 2, 2, 2, 4, 6, 8, 14, 20, 30, 48]),
        (2, 8, &[1, 4, 8, 12, 24, 52, 100, 196, 404]),
        (3, 6, &[1, 6, 18, 38, 84, 218, 548]),
    ];
    for (m, r, expected) in cases {
        let got = bfs_subgroup_spheres(m, r).map_err(|e| e.to_string())?;
        ensure(got == expected, || format!("m={m} R={r}: got {got:?}"))?;
    }
    Ok(vec![])
}

fn bfs_full() -> Outcome {
    let mut notes = Vec::new();
    for (m, r, low) in [(1, 10, &[1u64, 4][..]), (2, 7, &[1, 6, 26])] {
        let total = bfs_spheres(m, r).map_err(|e| e.to_string())?.total;
        ensure(total[..low.len()] == *low, || format!("m={m}: spheres start {:?}", &total[..low.len()]))?;
        let assembled = full_series(m).map_err(|e| e.to_string())?;
        let expected: Vec<i64> = total.iter().map(|&c| c as i64).collect();
        same_prefix(&format!("full series m={m}"), &assembled.series_prefix(r).unwrap(), &expected)?;

        let report = full_series_report(m).map_err(|e| e.to_string())?;
        let diagnostics = report.diagnostics();
        ensure(!diagnostics.is_empty(), || format!("m={m}: printed closed form not compared"))?;
        for d in diagnostics {
            notes.push(format!("{}: {}: {}", d.kind, d.name, d.detail));
        }
    }
    Ok(notes)
}

fn geodesic_language() -> Outcome {
    suite_passes(verify_language(1).map_err(|e| e.to_string())?)?;
    suite_passes(verify_language(2).map_err(|e| e.to_string())?)?;
    Ok(vec![])
}

fn census_certification() -> Outcome {
    for m in 1..=2 {
        suite_passes(verify_census(m, 8).map_err(|e| e.to_string())?)?;
        let levels = level_series(m).map_err(|e| e.to_string())?;
        ensure(levels.certified_to >= certification_horizon(m), || {
            format!("m={m}: fit certified only through x^{}", levels.certified_to)
        })?;
    }
    Ok(vec![])
}

fn gfsa_engine() -> Outcome {
    let x2 = IntPolynomial::monomial(1, 2);
    let one_minus_x = &IntPolynomial::one() - &IntPolynomial::monomial(1, 1);
    let target = RationalFunction::new(x2, one_minus_x.pow(2)).unwrap();
    for (name, machine) in [("FSA", build_quadrant_fsa()), ("gFSA", build_quadrant_gfsa())] {
        let g = automaton_growth(&machine);
        ensure(g == target, || format!("quadrant {name} growth {}", g.to_plain()))?;
    }
    suite_passes(verify_gfsa(3))?;
    Ok(vec![])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("appendix reproduction", appendix_reproduction, 10),
        ("component formulas", component_formulas, 60),
        ("subgroup spheres by BFS", bfs_subgroup, 120),
        ("full spheres by BFS", bfs_full, 120),
        ("geodesic language", geodesic_language, 60),
        ("census certification", census_certification, 120),
        ("gFSA engine", gfsa_engine, 5),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|notes| {
            ensure(elapsed <= Duration::from_secs(limit), || {
                format!("took {:.2}s, limit {limit}s", elapsed.as_secs_f64())
            })
            .map(|_| notes)
        });
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(notes) => {
                println!("criterion {}: PASS  {name} ({secs:.2}s)", i + 1);
                for n in notes {
                    println!("    {n}");
                }
            }
            Err(witness) => {
                failures += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {witness}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
