//! Every statistic on a few small graphs where the answers are easy to
//! check by hand.

use grid_ergm::model::toggle_delta;
use grid_ergm::stats::{
    algebraic_connectivity, alternating_k_triangles, average_path_length, clustering_coefficient, diameter,
    k_triangle_count, observables, triangle_count,
};
use grid_ergm::{BusType, LabeledGraph};

fn graphs() -> Vec<(&'static str, LabeledGraph)> {
    let l = BusType::Load;
    let k4: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    vec![
        ("path P5", LabeledGraph::from_edges(vec![l; 5], [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap()),
        ("star S5", LabeledGraph::from_edges(vec![l; 5], [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap()),
        ("K4", LabeledGraph::from_edges(vec![l; 4], k4.clone()).unwrap()),
        ("K4 - (1,2)", LabeledGraph::from_edges(vec![l; 4], k4.into_iter().filter(|&e| e != (1, 2))).unwrap()),
        (
            "typed triangle",
            LabeledGraph::from_edges(vec![BusType::Generator, BusType::Load, BusType::Interconnection], [(0, 1), (1, 2), (0, 2)])
                .unwrap(),
        ),
    ]
}

pub fn run() -> anyhow::Result<()> {
    for (name, g) in graphs() {
        println!("{name}");
        println!("  observables {:?}", observables(&g).0);
        println!(
            "  t1 = {}  t2 = {}  u(zeta=1) = {:.3}",
            triangle_count(&g),
            k_triangle_count(&g, 2)?,
            alternating_k_triangles(&g, 1.0)?
        );
        println!(
            "  C = {:.3}  APL = {:.3}  diameter = {}  lambda2 = {:.4}",
            clustering_coefficient(&g),
            average_path_length(&g)?,
            diameter(&g)?,
            algebraic_connectivity(&g)
        );
        if g.n() == 4 && !g.has_edge(1, 2) {
            println!("  adding (1,2) changes the observables by {:?}", toggle_delta(&g, 1, 2)?.0);
        }
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run()
}
