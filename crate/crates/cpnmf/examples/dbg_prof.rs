use cpnmf::eigen::*;
use cpnmf::graph::*;
use cpnmf::matrix::*;
use cpnmf::rng::SplitMix64;
use cpnmf::solver::*;
use std::time::Instant;

fn main() {
    let n = 60;
    let mut rng = SplitMix64::new(1);
    let s = SymMatrix::from_fn_sym(n, |_, _| rng.uniform(-1.0, 1.0)).unwrap();
    let t0 = Instant::now();
    for _ in 0..10 {
        let _ = sym_eig(&s).unwrap();
    }
    println!("sym_eig 60x60 x10: {:?}", t0.elapsed());

    let (g, _) = generate_block_graph(&GraphGenConfig {
        block_sizes: vec![30, 30], alpha: 0.1, beta: 0.9, seed: 3,
    }).unwrap();
    let dnn = ConstraintSet::new(vec![Constraint::Nonnegative, Constraint::PsdCone]).unwrap();
    let t1 = Instant::now();
    let p = dykstra_project(g.adjacency(), &dnn, 1e-10 * g.adjacency().frob_norm(), 500);
    match &p {
        Ok(_) => println!("dykstra adj: ok, {:?}", t1.elapsed()),
        Err(e) => println!("dykstra adj: {e}, {:?}", t1.elapsed()),
    }

    let t2 = Instant::now();
    let opts = SolverOptions { max_iter: 300, tol: 1e-4, ..Default::default() };
    let labels = nmf_partition(&g, 2, &opts).unwrap();
    println!("nmf_partition n=60: {:?}", t2.elapsed());
    println!("perf = {}", partition_performance(&g, &labels));

    let t3 = Instant::now();
    let labels = spectral_partition(&g, 2, 3).unwrap();
    println!("spectral_partition n=60: {:?}", t3.elapsed());
    println!("perf = {}", partition_performance(&g, &labels));
}
