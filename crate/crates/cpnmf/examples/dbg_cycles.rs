use cpnmf::eigen::psd_project;
use cpnmf::graph::*;
use cpnmf::matrix::*;
use std::time::Instant;

fn main() {
    let (g, _) = generate_block_graph(&GraphGenConfig {
        block_sizes: vec![30, 30], alpha: 0.1, beta: 0.9, seed: 3,
    }).unwrap();
    let a = g.adjacency();
    // count dykstra cycles to various tolerances, DNN = {>=0, PSD}
    let mut cur = a.clone();
    let n = a.n();
    let mut p1 = SymMatrix::zeros(n);
    let mut p2 = SymMatrix::zeros(n);
    let t0 = Instant::now();
    for cycle in 1..=3000usize {
        let start = cur.clone();
        let shifted = cur.add(&p1).unwrap();
        let proj = shifted.map(|v| v.max(0.0));
        p1 = shifted.sub(&proj).unwrap();
        cur = proj;
        let shifted = cur.add(&p2).unwrap();
        let proj = psd_project(&shifted).unwrap();
        p2 = shifted.sub(&proj).unwrap();
        cur = proj;
        let change = cur.dist(&start);
        for (lbl, tol) in [("1e-5", 1e-5), ("1e-6", 1e-6), ("1e-8", 1e-8), ("3e-9", 3.3e-9)] {
            let scaled = tol * a.frob_norm();
            if change <= scaled && change > scaled * 0.8 {
                println!("cycle {cycle}: change {change:.3e} ~ {lbl}*||A|| ({:?})", t0.elapsed());
            }
        }
        if change <= 1e-10 * a.frob_norm() {
            println!("cycle {cycle}: reached 1e-10*||A|| ({:?})", t0.elapsed());
            break;
        }
    }
}
