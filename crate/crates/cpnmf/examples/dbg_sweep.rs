use cpnmf::graph::*;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let rows = benchmark_sweep(&[(0.1, 0.9)], 60, 10, 2, 7).unwrap();
    println!("alpha=0.1 beta=0.9: {:?}", t0.elapsed());
    for r in &rows {
        println!("  {} mean={:.4} std={:.4} trials={}", r.method.as_str(), r.mean_perf, r.std_perf, r.trials);
    }
    let t1 = Instant::now();
    let grid = [(0.1, 0.9), (0.3, 0.7), (0.5, 0.5), (0.7, 0.3), (0.9, 0.1)];
    let rows = benchmark_sweep(&grid, 60, 10, 2, 7).unwrap();
    println!("full 5-point sweep: {:?}", t1.elapsed());
    for r in &rows {
        println!("  a={} b={} {} mean={:.4} std={:.4} trials={}", r.alpha, r.beta, r.method.as_str(), r.mean_perf, r.std_perf, r.trials);
    }
}
