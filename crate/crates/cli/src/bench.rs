//! Timed evaluation of `(expression, digits)` pairs.
//!
//! Each row is checked against a reference: the golden expansions of π, e
//! and √2, or the table in `assets/reference.tsv` (100 places). Requests
//! beyond the available reference digits fall back to a stability check
//! against the same expression evaluated 20 digits further.

use std::io;
use std::time::Instant;

use exact_reals::oracle::{agrees_within_ulp, digits_file};
use thiserror::Error;

use crate::eval::{eval_expr, Options};
use crate::expr::parse;

const REFERENCE_TABLE: &str = include_str!("../assets/reference.tsv");
const STABILITY_MARGIN: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub expr: String,
    pub digits: usize,
}

impl Case {
    pub fn new(expr: &str, digits: usize) -> Case {
        Case { expr: expr.to_string(), digits }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub expr: String,
    pub digits: usize,
    pub correct: bool,
    pub nanos: u128,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("suite: {0}")]
    Csv(#[from] csv::Error),

    #[error("suite line {line}: {msg}")]
    BadRow { line: u64, msg: String },
}

/// The benchmark rows: π to 300 places, the `exp` tower, `exp(π) − π` and
/// `arctan(π)` to 25, and √2 to 3000 (about 10,000 iterations of the
/// square-root loop).
pub fn default_suite() -> Vec<Case> {
    vec![
        Case::new("pi", 300),
        Case::new("exp(exp(exp(1/2)))", 25),
        Case::new("exp(pi)-pi", 25),
        Case::new("arctan(pi)", 25),
        Case::new("sqrt(2)", 3000),
    ]
}

/// Reads a CSV suite with header `expr,digits`.
pub fn read_suite(r: impl io::Read) -> Result<Vec<Case>, BenchError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (Some(ei), Some(di)) = (col("expr"), col("digits")) else {
        return Err(BenchError::BadRow { line: 1, msg: "header must name `expr` and `digits`".into() });
    };
    let mut cases = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let expr = rec.get(ei).unwrap_or_default().to_string();
        let digits = rec
            .get(di)
            .unwrap_or_default()
            .parse()
            .map_err(|_| BenchError::BadRow { line, msg: format!("bad digit count {:?}", rec.get(di)) })?;
        cases.push(Case { expr, digits });
    }
    Ok(cases)
}

/// Reference expansion for an expression, if one is on file. Expressions
/// are matched by canonical form, so spacing and redundant parentheses do
/// not matter.
pub fn reference_for(expr: &str) -> Option<String> {
    let canon = parse(expr).ok()?.to_string();
    let golden = match canon.as_str() {
        "pi" => Some("pi"),
        "exp(1)" => Some("e"),
        "sqrt(2)" => Some("sqrt2"),
        _ => None,
    };
    if let Some(name) = golden {
        return digits_file(name).ok();
    }
    REFERENCE_TABLE
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .filter_map(|l| l.split_once('\t'))
        .find(|(e, _)| parse(e).map(|e| e.to_string()).as_deref() == Ok(canon.as_str()))
        .map(|(_, v)| v.trim().to_string())
}

fn decimals(s: &str) -> usize {
    s.split_once('.').map_or(0, |(_, f)| f.len())
}

/// Whether `value`, printed with `digits` decimals, is right to within one
/// unit in the last place.
fn check(case: &Case, value: &str, opts: &Options) -> bool {
    match reference_for(&case.expr) {
        Some(r) if decimals(&r) >= case.digits => agrees_within_ulp(value, &r, case.digits),
        _ => {
            let longer = parse(&case.expr)
                .ok()
                .and_then(|e| eval_expr(&e, case.digits + STABILITY_MARGIN, opts).ok());
            longer.is_some_and(|l| agrees_within_ulp(value, &l, case.digits))
        }
    }
}

pub fn run_case(case: &Case, opts: &Options) -> Row {
    let start = Instant::now();
    let value = parse(&case.expr).map_err(Into::into).and_then(|e| eval_expr(&e, case.digits, opts));
    let nanos = start.elapsed().as_nanos();
    let correct = value.is_ok_and(|v| check(case, &v, opts));
    Row { expr: case.expr.clone(), digits: case.digits, correct, nanos }
}

pub fn run_suite(cases: &[Case], opts: &Options) -> Vec<Row> {
    cases.iter().map(|c| run_case(c, opts)).collect()
}

/// CSV with columns `expr,digits,correct,nanos`; the header is written even
/// for an empty report.
pub fn write_csv(rows: &[Row], w: impl io::Write) -> Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["expr", "digits", "correct", "nanos"])?;
    for r in rows {
        wtr.write_record([r.expr.clone(), r.digits.to_string(), r.correct.to_string(), r.nanos.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}
