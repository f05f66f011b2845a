//! File formats: MATPOWER case ingestion, JSON graph manifests and
//! parameter files, edge lists, and CSV reports and traces.

pub mod manifest;
pub mod matpower;
pub mod report;

pub use manifest::{read_edge_list, write_edge_list, GraphManifest, ParameterFile, Provenance};
pub use matpower::{parse_matpower, read_case, to_labeled_graph, CaseGraph, MatpowerCase};
pub use report::{write_closed_form_table, write_report, write_summary, write_trace};
