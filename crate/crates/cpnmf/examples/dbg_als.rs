use cpnmf::baselines::*;
use cpnmf::matrix::DenseMatrix;
use cpnmf::rng::SplitMix64;

fn main() {
    for seed in [11u64, 1, 2, 3, 4] {
        let mut rng = SplitMix64::new(seed);
        let a = DenseMatrix::from_fn(5, 4, |_, _| rng.uniform(0.1, 2.0));
        for iters in [500, 2000] {
            let opts = BaselineOptions { k: 4, iters, seed: seed + 100, ..Default::default() };
            let (_, _, trace) = als_nmf(&a, &opts).unwrap();
            let rel = trace.last().unwrap() / a.frob_norm().powi(2);
            print!("seed {seed} iters {iters}: rel {rel:.2e}   ");
        }
        println!();
    }
}
