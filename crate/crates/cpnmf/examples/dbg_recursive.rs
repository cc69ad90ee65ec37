use cpnmf::decompose::*;
use cpnmf::factorize::*;
use cpnmf::matrix::*;
use cpnmf::objectives::LossKind;
use cpnmf::solver::*;
use std::time::Instant;

fn main() {
    let mut u = vec![0.0; 6];
    let mut w = vec![0.0; 6];
    for i in 0..3 {
        u[i] = 2.0;
        w[3 + i] = 1.8;
    }
    let a = SymMatrix::from_fn_sym(6, |i, j| u[i] * u[j] + w[i] * w[j]).unwrap();
    let t0 = Instant::now();
    let result = recursive_decompose(
        &a,
        LossKind::Mse,
        &RecursiveConfig { rounds: 3, floor_eps: 1e-8 },
        &SolverOptions::default(),
        &FactorizeOptions::default(),
    )
    .unwrap();
    println!("elapsed {:?}", t0.elapsed());
    println!("rounds_run={} losses={:?}", result.rounds_run, result.round_losses);
    println!("ratio = {:?}", result.round_losses.iter().map(|l| l / a.frob_norm().powi(2)).collect::<Vec<_>>());
    println!("factor cols = {}", result.factors.cols());
}
