//! Convert a MATPOWER case to a JSON manifest and an edge list, read both
//! back and check nothing was lost.

use std::path::Path;

use grid_ergm::io::{read_case, read_edge_list, to_labeled_graph, write_edge_list, GraphManifest, Provenance};

pub fn run(out_dir: &Path) -> anyhow::Result<()> {
    let case = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/pglib_opf_case118_ieee.m");
    let cg = to_labeled_graph(&read_case(&case)?, true)?;
    let provenance = Provenance { source: Some("pglib_opf_case118_ieee.m".into()), ..Provenance::default() };
    let manifest = GraphManifest::from_graph(&cg.graph, Some(&cg.bus_ids), provenance)?;

    std::fs::create_dir_all(out_dir)?;
    let json = out_dir.join("case118.json");
    let edges = out_dir.join("case118.txt");
    manifest.write(&json)?;
    std::fs::write(&edges, write_edge_list(&cg.graph))?;

    let back = GraphManifest::read(&json)?;
    assert_eq!(back, manifest);
    assert_eq!(back.graph()?, cg.graph);
    assert_eq!(read_edge_list(&std::fs::read_to_string(&edges)?, back.types.clone())?, cg.graph);
    println!("{} nodes, {} edges written to {} and {}", back.n, back.edges.len(), json.display(), edges.display());
    println!("bus {} is node 0 with type {}", back.bus_ids[0], back.types[0]);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out".into());
    run(Path::new(&out))
}
