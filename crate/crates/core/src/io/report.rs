//! CSV output: statistics rows, ensemble aggregates, parameter traces and
//! the closed-form comparison table.

use std::io::Write;

use crate::error::Result;
use crate::estimator::TraceRecord;
use crate::free_energy::{exact_mean, max_edges, TypeCensus};
use crate::graph::EdgeTypePair;
use crate::model::PARAMETER_NAMES;
use crate::stats::{GridReport, ReportSummary};

pub const REPORT_HEADER: [&str; 16] = [
    "name",
    "n",
    "m",
    "mean_degree",
    "mean_degree_p",
    "mean_degree_l",
    "mean_degree_i",
    "share_p",
    "share_l",
    "share_i",
    "triangles",
    "two_triangles",
    "lambda2",
    "clustering",
    "apl",
    "diameter",
];

/// Columns printed as integers in per-graph rows.
const COUNT_COLUMNS: [usize; 5] = [0, 1, 9, 10, 14];

fn format_value(v: f64, count: bool) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if count && v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.4}")
    }
}

fn record(name: &str, r: &GridReport, counts_as_integers: bool) -> Vec<String> {
    std::iter::once(name.to_string())
        .chain(r.to_array().iter().enumerate().map(|(c, &v)| format_value(v, counts_as_integers && COUNT_COLUMNS.contains(&c))))
        .collect()
}

/// One row per named graph.
pub fn write_report<W: Write>(out: W, rows: &[(String, GridReport)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for (name, r) in rows {
        w.write_record(record(name, r, true))?;
    }
    w.flush()?;
    Ok(())
}

/// Optional reference row followed by `avg` and `std` rows.
pub fn write_summary<W: Write>(out: W, reference: Option<&GridReport>, summary: &ReportSummary) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    if let Some(r) = reference {
        w.write_record(record("reference", r, true))?;
    }
    w.write_record(record("avg", &summary.mean, false))?;
    w.write_record(record("std", &summary.std, false))?;
    w.flush()?;
    Ok(())
}

/// `step,beta_pp,...,beta_t2`, values in shortest round-trip form.
pub fn write_trace<W: Write>(out: W, records: &[TraceRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(std::iter::once("step").chain(PARAMETER_NAMES))?;
    for r in records {
        w.write_record(std::iter::once(r.step.to_string()).chain(r.beta.0.iter().map(|b| b.to_string())))?;
    }
    w.flush()?;
    Ok(())
}

/// Per block: target count, candidate pairs, parameter and the exact mean it
/// implies.
pub fn write_closed_form_table<W: Write>(out: W, targets: &[f64; 6], census: &TypeCensus, beta: &[f64; 6]) -> Result<()> {
    let mean = exact_mean(beta, census);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["pair", "target", "max_edges", "beta", "exact_mean"])?;
    for pair in EdgeTypePair::ALL {
        let k = pair.index();
        w.write_record([
            pair.name().to_string(),
            format!("{}", targets[k]),
            max_edges(census, pair).to_string(),
            format!("{:.4}", beta[k]),
            format!("{:.6}", mean[k]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::complete;
    use crate::model::ParameterVector;

    #[test]
    fn k3_row() {
        let mut buf = Vec::new();
        write_report(&mut buf, &[("k3".into(), GridReport::from_graph(&complete(3)))]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), REPORT_HEADER.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[2], "3");
        assert_eq!(row[3], "2.0000");
        assert_eq!(row[13], "1.0000");
        assert_eq!(row[14], "1.0000");
        assert_eq!(row[15], "1");
    }

    #[test]
    fn summary_rows() {
        let r = GridReport::from_graph(&complete(4));
        let s = ReportSummary::from_reports(&[r]).unwrap();
        let mut buf = Vec::new();
        write_summary(&mut buf, Some(&r), &s).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let names: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(names, ["reference", "avg", "std"]);
        assert!(text.lines().last().unwrap().split(',').skip(1).all(|v| v == "0.0000"));
    }

    #[test]
    fn trace_header_and_rows() {
        let records = [TraceRecord { step: 100, beta: ParameterVector([0.5, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.25]) }];
        let mut buf = Vec::new();
        write_trace(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "step,beta_pp,beta_pl,beta_pi,beta_ll,beta_li,beta_ii,beta_t1,beta_t2\n100,0.5,-1,0,0,0,0,0,0.25\n"
        );
    }
}
