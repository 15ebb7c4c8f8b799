use std::io::Write;

use anyhow::Result;

pub const HEADER: [&str; 13] = [
    "algorithm",
    "n",
    "edge_count",
    "k",
    "R",
    "seed",
    "iteration",
    "chosen_node",
    "marginal_gain",
    "cumulative_spread",
    "evaluations",
    "sampling_ms",
    "selection_ms",
];

/// One selection iteration of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub algorithm: String,
    pub n: usize,
    pub edge_count: usize,
    pub k: usize,
    pub r: usize,
    pub seed: u64,
    pub iteration: usize,
    pub chosen_node: u64,
    pub marginal_gain: f64,
    pub cumulative_spread: f64,
    pub evaluations: u64,
    /// `None` unless timing was requested; timings would break byte-level
    /// reproducibility of the file.
    pub sampling_ms: Option<f64>,
    pub selection_ms: Option<f64>,
}

/// Formats a real with at most six significant digits and no trailing
/// zeros, independent of locale.
pub fn format_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let rounded: f64 = sci.parse().expect("valid float");
        let decimals = (5 - exp).max(0) as usize;
        trim(format!("{rounded:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_csv<W: Write>(rows: &[ResultRow], sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record(HEADER)?;
    let opt = |x: Option<f64>| x.map(format_real).unwrap_or_default();
    for row in rows {
        w.write_record([
            row.algorithm.clone(),
            row.n.to_string(),
            row.edge_count.to_string(),
            row.k.to_string(),
            row.r.to_string(),
            row.seed.to_string(),
            row.iteration.to_string(),
            row.chosen_node.to_string(),
            format_real(row.marginal_gain),
            format_real(row.cumulative_spread),
            row.evaluations.to_string(),
            opt(row.sampling_ms),
            opt(row.selection_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}
