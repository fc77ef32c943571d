//! Plain, JSON and LaTeX renderings of command results.

use std::fmt::Write;

use clap::ValueEnum;
use horogrowth::bfs::BfsReport;
use horogrowth::formulas::{CosetCensus, LevelSeries};
use horogrowth::group::Word;
use horogrowth::series::RationalFunction;
use horogrowth::verify::SuiteReport;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, ValueEnum)]
pub enum Output {
    Plain,
    Json,
    Latex,
}

pub struct Rendered {
    plain: String,
    latex: Option<String>,
    json: Value,
}

impl Rendered {
    pub fn format(&self, output: Output) -> String {
        match output {
            Output::Plain => self.plain.clone(),
            Output::Latex => self.latex.clone().unwrap_or_else(|| self.plain.clone()),
            Output::Json => serde_json::to_string_pretty(&self.json).expect("json values serialize"),
        }
    }
}

fn to_json(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("json values serialize")
}

fn decimals(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn joined(v: &[impl ToString]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn series(
    kind: &str,
    m: usize,
    n: Option<usize>,
    terms: usize,
    form: &RationalFunction,
    rational: bool,
) -> Rendered {
    let prefix = form.series_prefix(terms - 1).expect("growth series expand");
    // Polynomials that fit in the prefix print exactly.
    let exact = form
        .as_polynomial()
        .filter(|p| p.degree().is_none_or(|d| d < terms));
    let (plain_series, latex_series) = match exact {
        Some(p) => (p.to_plain(), p.to_latex()),
        None => {
            let p = prefix.to_polynomial();
            (prefix.to_plain(), format!("{} + O(x^{{{terms}}})", p.to_latex()))
        }
    };
    let mut plain = String::new();
    let mut latex = String::new();
    if rational {
        writeln!(plain, "{}", form.to_plain()).unwrap();
        writeln!(latex, "{}", form.to_latex()).unwrap();
    }
    plain.push_str(&plain_series);
    latex.push_str(&latex_series);
    let mut json = json!({
        "kind": kind,
        "m": m,
        "terms": terms,
        "series": decimals(prefix.coeffs()),
    });
    if let Some(n) = n.filter(|_| kind == "B") {
        json["n"] = json!(n);
    }
    if rational {
        json["rational"] = to_json(form);
    }
    Rendered {
        plain,
        latex: Some(latex),
        json,
    }
}

pub fn spelling(v: &[BigInt], word: &Word) -> Rendered {
    Rendered {
        plain: format!("{word} (length {})\n{}", word.len(), word.to_compact()),
        latex: None,
        json: json!({
            "vector": decimals(v),
            "word": word.to_string(),
            "compact": word.to_compact(),
            "length": word.len(),
        }),
    }
}

pub fn evaluation(word: &Word) -> Rendered {
    let g = word.eval();
    let coords: Vec<String> = g.coords().iter().map(ToString::to_string).collect();
    Rendered {
        plain: g.to_string(),
        latex: None,
        json: json!({
            "word": word.to_string(),
            "element": g.to_string(),
            "coords": coords,
            "t": g.tee(),
            "horocyclic": g.is_horocyclic(),
        }),
    }
}

pub fn distance(v: &[BigInt], distance: usize, word: &Word) -> Rendered {
    let mut plain = format!("distance {distance}");
    if distance != word.len() {
        write!(plain, "\nnormal form {word} has length {}", word.len()).unwrap();
    }
    Rendered {
        plain,
        latex: None,
        json: json!({
            "vector": decimals(v),
            "distance": distance,
            "word": word.to_string(),
            "word_length": word.len(),
        }),
    }
}

pub fn suite(report: &SuiteReport) -> Rendered {
    let verdict = if report.passed { "pass" } else { "FAIL" };
    let mut plain = format!("{} m={}: {verdict}", report.suite, report.m);
    for c in &report.checks {
        match &c.witness {
            None => write!(plain, "\n  ok    {}", c.name),
            Some(w) => write!(plain, "\n  FAIL  {}: {w}", c.name),
        }
        .unwrap();
    }
    for d in &report.diagnostics {
        write!(plain, "\n  {}  {}: {}", d.kind, d.name, d.detail).unwrap();
    }
    Rendered {
        plain,
        latex: None,
        json: to_json(report),
    }
}

pub fn census(census: &CosetCensus, levels: &LevelSeries) -> Rendered {
    let rmax = census.rmax();
    let mut plain = format!("chi(level, r) for r = 0..{rmax}");
    let mut chi = serde_json::Map::new();
    for depth in 0..=rmax as i64 {
        let col = census.column(-depth);
        write!(plain, "\n{:>4}: {}", -depth, joined(col.coeffs())).unwrap();
        chi.insert((-depth).to_string(), json!(decimals(col.coeffs())));
    }
    write!(
        plain,
        "\np_hat = {}\nq_hat = {}\ncertified through x^{}",
        levels.p_hat.to_plain(),
        levels.q_hat.to_plain(),
        levels.certified_to
    )
    .unwrap();
    let latex = format!(
        "\\hat p = {}\n\\hat q = {}",
        levels.p_hat.to_latex(),
        levels.q_hat.to_latex()
    );
    Rendered {
        plain,
        latex: Some(latex),
        json: json!({
            "m": census.m(),
            "rmax": rmax,
            "chi": chi,
            "p_hat": to_json(&levels.p_hat),
            "q_hat": to_json(&levels.q_hat),
            "certified_to": levels.certified_to,
        }),
    }
}

pub fn bfs(report: &BfsReport) -> Rendered {
    let mut plain = format!(
        "total: {}\nhorocyclic: {}",
        joined(&report.total),
        joined(&report.horocyclic)
    );
    for (depth, col) in report.chi.iter().enumerate() {
        write!(plain, "\nchi({}): {}", -(depth as i64), joined(col)).unwrap();
    }
    Rendered {
        plain,
        latex: None,
        json: to_json(report),
    }
}
