use cpnmf::graph::*;
use cpnmf::solver::*;
use std::time::Instant;

fn main() {
    for (tol, mi) in [(1e-4, 300), (1e-3, 150), (3e-3, 100)] {
        let opts = SolverOptions { max_iter: mi, tol, ..Default::default() };
        let mut total = 0.0;
        let t = Instant::now();
        for seed in 0..5u64 {
            let (g, _) = generate_block_graph(&GraphGenConfig {
                block_sizes: vec![30, 30], alpha: 0.1, beta: 0.9, seed,
            }).unwrap();
            let labels = nmf_partition(&g, 2, &opts).unwrap();
            total += partition_performance(&g, &labels);
        }
        println!("tol={tol:.0e} max_iter={mi}: mean perf {:.4}, {:?} for 5 calls", total / 5.0, t.elapsed());
    }
}
