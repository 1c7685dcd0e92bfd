//! Text, JSON and CSV renderings of verdicts, L-values and covolumes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bruinier::{KReport, VerdictTable};
use crate::covolumes::{Covolume, CovolumeCheck, DiscCase};
use crate::error::{Error, Result};
use crate::special_values::{LValueExact, SeriesEstimate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Parse(format!(
                "unknown format {other:?} (expected text, json or csv)"
            ))),
        }
    }
}

const CSV_HEADER: [&str; 9] = [
    "d",
    "n",
    "k_exact",
    "k_float",
    "bound",
    "is_integer",
    "passes_bound",
    "congruence_ok",
    "verdict",
];

fn bound_label(d: u64) -> &'static str {
    if d == 3 {
        "7n+7"
    } else {
        "2n+2"
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn csv_row(r: &KReport, digits: u32) -> Vec<String> {
    vec![
        r.d.to_string(),
        r.n.to_string(),
        r.k_exact.to_string(),
        r.k_decimal(digits),
        r.bound.to_string(),
        r.is_integer.to_string(),
        r.passes_bound.to_string(),
        r.congruence_ok.map(|b| b.to_string()).unwrap_or_default(),
        r.verdict.to_string(),
    ]
}

fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for row in rows {
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn render_report(r: &KReport, format: OutputFormat, digits: u32) -> String {
    match format {
        OutputFormat::Json => to_json(r),
        OutputFormat::Csv => write_csv(&CSV_HEADER, [csv_row(r, digits)]),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "d = {}, n = {}", r.d, r.n);
            let _ = writeln!(s, "K = {} ≈ {}", r.k_exact, r.k_decimal(digits));
            let _ = writeln!(s, "bound = {} ({})", r.bound, bound_label(r.d));
            let _ = writeln!(s, "integer: {}", yes_no(r.is_integer));
            let _ = writeln!(s, "K >= bound: {}", yes_no(r.passes_bound));
            if let Some(ok) = r.congruence_ok {
                let _ = writeln!(s, "K = n+1 (mod 6): {}", yes_no(ok));
            }
            let _ = writeln!(s, "verdict: {}", r.verdict);
            s
        }
    }
}

pub fn parse_report_json(s: &str) -> Result<KReport> {
    let r: KReport = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    r.validate()?;
    Ok(r)
}

pub fn render_table(t: &VerdictTable, format: OutputFormat, digits: u32) -> String {
    match format {
        OutputFormat::Json => to_json(t),
        OutputFormat::Csv => write_csv(&CSV_HEADER, t.reports.iter().map(|r| csv_row(r, digits))),
        OutputFormat::Text => {
            let rows: Vec<[String; 6]> = t
                .reports
                .iter()
                .map(|r| {
                    let mut verdict = r.verdict.to_string();
                    if !r.is_integer {
                        verdict.push_str(" (non-integer)");
                    } else if !r.passes_bound {
                        verdict.push_str(" (below bound)");
                    } else if r.congruence_ok == Some(false) {
                        verdict.push_str(" (congruence)");
                    }
                    [
                        r.d.to_string(),
                        r.n.to_string(),
                        r.k_exact.to_string(),
                        r.k_decimal(digits),
                        r.bound.to_string(),
                        verdict,
                    ]
                })
                .collect();
            let header = ["d", "n", "K", "K approx", "bound", "verdict"];
            let mut widths = header.map(str::len);
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let mut s = String::new();
            let line = |cells: [&str; 6]| {
                format!(
                    "{:>w0$}  {:>w1$}  {:>w2$}  {:>w3$}  {:>w4$}  {}",
                    cells[0],
                    cells[1],
                    cells[2],
                    cells[3],
                    cells[4],
                    cells[5],
                    w0 = widths[0],
                    w1 = widths[1],
                    w2 = widths[2],
                    w3 = widths[3],
                    w4 = widths[4],
                )
            };
            let _ = writeln!(s, "{}", line(header).trim_end());
            for row in &rows {
                let cells = [
                    row[0].as_str(),
                    row[1].as_str(),
                    row[2].as_str(),
                    row[3].as_str(),
                    row[4].as_str(),
                    row[5].as_str(),
                ];
                let _ = writeln!(s, "{}", line(cells));
            }
            s.push('\n');
            for l in t.summary() {
                let _ = writeln!(s, "{l}");
            }
            s
        }
    }
}

pub fn parse_table_json(s: &str) -> Result<VerdictTable> {
    let t: VerdictTable = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    for r in &t.reports {
        r.validate()?;
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValueRecord {
    pub d: u64,
    pub discriminant: i64,
    pub k: u32,
    pub exact: String,
    pub coefficient: String,
    pub float: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_terms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_deviation: Option<f64>,
}

pub fn lvalue_record(
    d: u64,
    l: &LValueExact,
    digits: u32,
    oracle: Option<&SeriesEstimate>,
) -> LValueRecord {
    let exact_f = l.value.to_f64();
    LValueRecord {
        d,
        discriminant: l.discriminant,
        k: l.k,
        exact: l.value.to_string(),
        coefficient: l.coefficient().to_string(),
        float: l.value.to_decimal(digits).to_string(),
        oracle_terms: oracle.map(|o| o.terms),
        oracle_deviation: oracle.map(|o| o.relative_deviation(exact_f)),
    }
}

pub fn render_lvalue(rec: &LValueRecord, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(rec),
        OutputFormat::Csv => write_csv(
            &[
                "d",
                "discriminant",
                "k",
                "exact",
                "float",
                "oracle_terms",
                "oracle_deviation",
            ],
            [vec![
                rec.d.to_string(),
                rec.discriminant.to_string(),
                rec.k.to_string(),
                rec.exact.clone(),
                rec.float.clone(),
                rec.oracle_terms.map(|t| t.to_string()).unwrap_or_default(),
                rec.oracle_deviation
                    .map(|x| format!("{x:.3e}"))
                    .unwrap_or_default(),
            ]],
        ),
        OutputFormat::Text => {
            let mut s = format!("{}\n", rec.exact);
            let _ = writeln!(s, "L({}, chi_{}) ≈ {}", rec.k, rec.discriminant, rec.float);
            if let (Some(t), Some(dev)) = (rec.oracle_terms, rec.oracle_deviation) {
                let _ = writeln!(s, "oracle deviation: {dev:.3e} ({t} terms)");
            }
            s
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovolumeRecord {
    pub lattice: String,
    pub n: u32,
    pub d: u64,
    pub disc_case: DiscCase,
    pub exact: String,
    pub float: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_terms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_deviation: Option<f64>,
}

pub fn covolume_record(
    c: &Covolume,
    digits: u32,
    oracle: Option<(u64, &CovolumeCheck)>,
) -> CovolumeRecord {
    CovolumeRecord {
        lattice: c.lattice.to_string(),
        n: c.n,
        d: c.d,
        disc_case: c.disc_case,
        exact: c.value.to_string(),
        float: c.value.to_decimal(digits).to_string(),
        oracle_terms: oracle.map(|(t, _)| t),
        oracle_deviation: oracle.map(|(_, chk)| chk.relative_deviation),
    }
}

pub fn render_covolume(rec: &CovolumeRecord, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(rec),
        OutputFormat::Csv => write_csv(
            &[
                "lattice",
                "n",
                "d",
                "disc_case",
                "exact",
                "float",
                "oracle_terms",
                "oracle_deviation",
            ],
            [vec![
                rec.lattice.clone(),
                rec.n.to_string(),
                rec.d.to_string(),
                format!("{:?}", rec.disc_case),
                rec.exact.clone(),
                rec.float.clone(),
                rec.oracle_terms.map(|t| t.to_string()).unwrap_or_default(),
                rec.oracle_deviation
                    .map(|x| format!("{x:.3e}"))
                    .unwrap_or_default(),
            ]],
        ),
        OutputFormat::Text => {
            let mut s = format!("{}\n", rec.exact);
            let _ = writeln!(
                s,
                "Vol({}_{}) [d = {}, {:?}] ≈ {}",
                rec.lattice, rec.n, rec.d, rec.disc_case, rec.float
            );
            if let (Some(t), Some(dev)) = (rec.oracle_terms, rec.oracle_deviation) {
                let _ = writeln!(s, "oracle deviation: {dev:.3e} ({t} terms)");
            }
            s
        }
    }
}
