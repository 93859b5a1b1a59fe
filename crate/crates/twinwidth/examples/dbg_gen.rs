use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twinwidth::gen::random_tww1;

fn main() {
    for seed in [42u64, 7, 123] {
        for n in [16384usize, 32768, 65536, 131072] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            let inst = random_tww1(&mut rng, n, 32);
            let g = &inst.graph;
            let maxdeg = g.vertices().map(|v| g.degree(v)).max().unwrap();
            println!("seed={seed} n={n} m={} m/n={:.2} maxdeg={maxdeg}", g.m(), g.m() as f64 / n as f64);
        }
    }
}
