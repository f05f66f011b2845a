//! Minimal MATPOWER case reader.
//!
//! Only the `mpc.bus`, `mpc.gen` and `mpc.branch` matrices are read; every
//! other assignment in the file is skipped.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{BusType, LabeledGraph};

const BUS_I: usize = 0;
const PD: usize = 2;
const QD: usize = 3;
const GEN_BUS: usize = 0;
const F_BUS: usize = 0;
const T_BUS: usize = 1;
const BR_STATUS: usize = 10;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatpowerCase {
    pub bus: Vec<Vec<f64>>,
    pub gen: Vec<Vec<f64>>,
    pub branch: Vec<Vec<f64>>,
}

/// A case turned into a graph, with node `k` standing for bus `bus_ids[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseGraph {
    pub graph: LabeledGraph,
    pub bus_ids: Vec<u64>,
}

pub fn read_case(path: &Path) -> Result<MatpowerCase> {
    let text = std::fs::read_to_string(path)?;
    parse_matpower(&text)
}

pub fn parse_matpower(text: &str) -> Result<MatpowerCase> {
    let mut case = MatpowerCase::default();
    let mut found = [false; 3];
    let lines: Vec<&str> = text.lines().map(strip_comment).collect();
    let mut k = 0;
    while k < lines.len() {
        let slot = match matrix_name(lines[k]) {
            Some("bus") => 0,
            Some("gen") => 1,
            Some("branch") => 2,
            _ => {
                k += 1;
                continue;
            }
        };
        let (rows, next) = read_matrix(&lines, k)?;
        match slot {
            0 => case.bus = rows,
            1 => case.gen = rows,
            _ => case.branch = rows,
        }
        found[slot] = true;
        k = next;
    }
    for (present, name) in found.iter().zip(["bus", "gen", "branch"]) {
        if !present {
            return Err(Error::MissingMatrix(name));
        }
    }
    Ok(case)
}

fn strip_comment(line: &str) -> &str {
    line.find('%').map_or(line, |p| &line[..p])
}

/// `Some(name)` when the line assigns `mpc.<name>`.
fn matrix_name(line: &str) -> Option<&str> {
    let rest = line.trim_start().strip_prefix("mpc.")?;
    let end = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
    let after = rest[end..].trim_start();
    after.starts_with('=').then_some(&rest[..end])
}

/// Reads the bracketed matrix whose assignment starts on line `start`.
/// Returns the rows and the index of the line after the closing bracket.
fn read_matrix(lines: &[&str], start: usize) -> Result<(Vec<Vec<f64>>, usize)> {
    let open = lines[start].find('[').ok_or_else(|| Error::Parse {
        line: start + 1,
        msg: "expected '[' after matrix assignment".into(),
    })?;
    let mut rows = Vec::new();
    let mut row: Vec<f64> = Vec::new();
    let mut k = start;
    let mut body = &lines[start][open + 1..];
    loop {
        let (content, closed) = match body.find(']') {
            Some(p) => (&body[..p], true),
            None => (body, false),
        };
        for (s, piece) in content.split(';').enumerate() {
            if s > 0 {
                finish_row(&mut rows, &mut row, k)?;
            }
            for cell in piece.split(|c: char| c.is_whitespace() || c == ',').filter(|c| !c.is_empty()) {
                let v: f64 = cell.parse().map_err(|_| Error::Parse {
                    line: k + 1,
                    msg: format!("non-numeric cell '{cell}'"),
                })?;
                row.push(v);
            }
        }
        finish_row(&mut rows, &mut row, k)?;
        if closed {
            return Ok((rows, k + 1));
        }
        k += 1;
        if k == lines.len() {
            return Err(Error::Parse { line: start + 1, msg: "unterminated matrix".into() });
        }
        body = lines[k];
    }
}

fn finish_row(rows: &mut Vec<Vec<f64>>, row: &mut Vec<f64>, line: usize) -> Result<()> {
    if row.is_empty() {
        return Ok(());
    }
    if let Some(first) = rows.first() {
        if first.len() != row.len() {
            return Err(Error::Parse {
                line: line + 1,
                msg: format!("row has {} columns, expected {}", row.len(), first.len()),
            });
        }
    }
    rows.push(std::mem::take(row));
    Ok(())
}

fn bus_id(v: f64, table: &'static str) -> Result<u64> {
    if v >= 0.0 && v.fract() == 0.0 && v.is_finite() {
        Ok(v as u64)
    } else {
        Err(Error::Config(format!("{table} references non-integral bus id {v}")))
    }
}

fn cell(row: &[f64], col: usize, table: &'static str) -> Result<f64> {
    row.get(col).copied().ok_or_else(|| Error::Config(format!("mpc.{table} has fewer than {} columns", col + 1)))
}

/// Builds the typed topology of a case.
///
/// A bus listed in the generator table is a generator regardless of its
/// demand; otherwise it is an interconnection when both `Pd` and `Qd` are
/// exactly zero and a load otherwise. Parallel branches collapse into one
/// edge and self-loop branches are dropped. Branches with status 0 are kept
/// only when `include_out_of_service` is set; generator status is ignored.
pub fn to_labeled_graph(case: &MatpowerCase, include_out_of_service: bool) -> Result<CaseGraph> {
    let mut index = HashMap::with_capacity(case.bus.len());
    let mut bus_ids = Vec::with_capacity(case.bus.len());
    for row in &case.bus {
        let id = bus_id(cell(row, BUS_I, "bus")?, "bus table")?;
        if index.insert(id, bus_ids.len()).is_some() {
            return Err(Error::Config(format!("duplicate bus id {id}")));
        }
        bus_ids.push(id);
    }

    let mut types = Vec::with_capacity(bus_ids.len());
    for row in &case.bus {
        let (pd, qd) = (cell(row, PD, "bus")?, cell(row, QD, "bus")?);
        types.push(if pd == 0.0 && qd == 0.0 { BusType::Interconnection } else { BusType::Load });
    }
    for row in &case.gen {
        let id = bus_id(cell(row, GEN_BUS, "gen")?, "gen table")?;
        let &k = index.get(&id).ok_or(Error::UnknownBus(id))?;
        types[k] = BusType::Generator;
    }

    let mut pairs = BTreeSet::new();
    for row in &case.branch {
        let f = bus_id(cell(row, F_BUS, "branch")?, "branch table")?;
        let t = bus_id(cell(row, T_BUS, "branch")?, "branch table")?;
        let &a = index.get(&f).ok_or(Error::UnknownBus(f))?;
        let &b = index.get(&t).ok_or(Error::UnknownBus(t))?;
        if !include_out_of_service && row.get(BR_STATUS).is_some_and(|&s| s == 0.0) {
            continue;
        }
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let graph = LabeledGraph::from_edges(types, pairs)?;
    Ok(CaseGraph { graph, bus_ids })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BusType::*;

    const TINY: &str = "function mpc = tiny
mpc.version = '2';
mpc.baseMVA = 100;
%% bus data
mpc.bus = [
\t1\t3\t0\t0\t0\t0\t1\t1\t0\t230\t1\t1.1\t0.9;
\t2\t1\t10\t2\t0\t0\t1\t1\t0\t230\t1\t1.1\t0.9; % a load
\t3\t1\t0\t0\t0\t0\t1\t1\t0\t230\t1\t1.1\t0.9;
];
mpc.gen = [
\t1\t0\t0\t10\t-10\t1\t100\t1\t50\t0;
];
mpc.gencost = [
\t2\t0\t0\t3\t0.1\t1\t0;
];
mpc.branch = [
\t1\t2\t0.01\t0.1\t0\t100\t100\t100\t0\t0\t1\t-30\t30;
\t2\t3\t0.01\t0.1\t0\t100\t100\t100\t0\t0\t1\t-30\t30;
\t3\t2\t0.01\t0.1\t0\t100\t100\t100\t0\t0\t0\t-30\t30;
];
";

    #[test]
    fn parses_tiny_case() {
        let case = parse_matpower(TINY).unwrap();
        assert_eq!(case.bus.len(), 3);
        assert_eq!(case.gen.len(), 1);
        assert_eq!(case.branch.len(), 3);
        assert_eq!(case.bus[0].len(), 13);
        assert_eq!(case.branch[2][10], 0.0);
    }

    #[test]
    fn tiny_case_graph() {
        let case = parse_matpower(TINY).unwrap();
        let cg = to_labeled_graph(&case, true).unwrap();
        assert_eq!(cg.graph.types(), &[Generator, Load, Interconnection]);
        assert_eq!(cg.graph.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(cg.bus_ids, vec![1, 2, 3]);
        assert_eq!(to_labeled_graph(&case, false).unwrap().graph.m(), 2);
    }

    #[test]
    fn generator_wins_over_demand() {
        let text = "mpc.bus = [1 1 5 1; 2 1 0 0];\nmpc.gen = [1 0];\nmpc.branch = [1, 2];\n";
        let cg = to_labeled_graph(&parse_matpower(text).unwrap(), true).unwrap();
        assert_eq!(cg.graph.types(), &[Generator, Interconnection]);
    }

    #[test]
    fn tiny_demand_counts_as_load() {
        let text = "mpc.bus = [1 1 1e-9 0; 2 1 0 0];\nmpc.gen = [];\nmpc.branch = [1 2];\n";
        let cg = to_labeled_graph(&parse_matpower(text).unwrap(), true).unwrap();
        assert_eq!(cg.graph.types(), &[Load, Interconnection]);
    }

    #[test]
    fn self_loops_are_dropped() {
        let text = "mpc.bus = [1 1 1 0; 2 1 0 0];\nmpc.gen = [];\nmpc.branch = [1 1; 1 2; 2 1];\n";
        let cg = to_labeled_graph(&parse_matpower(text).unwrap(), true).unwrap();
        assert_eq!(cg.graph.m(), 1);
    }

    #[test]
    fn missing_matrix_is_named() {
        let text = TINY.replace("mpc.branch", "mpc.branchx");
        match parse_matpower(&text) {
            Err(Error::MissingMatrix(name)) => assert_eq!(name, "branch"),
            other => panic!("expected missing matrix, got {other:?}"),
        }
    }

    #[test]
    fn bad_cell_reports_line() {
        let text = "mpc.bus = [\n1 1 0 0;\n2 x 0 0;\n];\nmpc.gen = [];\nmpc.branch = [];\n";
        match parse_matpower(text) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains('x'));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_branch_endpoint() {
        let text = "mpc.bus = [1 1 0 0];\nmpc.gen = [];\nmpc.branch = [1 7];\n";
        assert!(matches!(to_labeled_graph(&parse_matpower(text).unwrap(), true), Err(Error::UnknownBus(7))));
    }

    #[test]
    fn gencost_is_not_gen() {
        assert_eq!(matrix_name("mpc.gencost = ["), Some("gencost"));
        assert_eq!(matrix_name("  mpc.gen=["), Some("gen"));
        assert_eq!(matrix_name("x = mpc.gen;"), None);
    }
}
