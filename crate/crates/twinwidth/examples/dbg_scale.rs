use std::time::Instant;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twinwidth::gen::random_tww1;
use twinwidth::modular::modular_decomposition;
use twinwidth::tww1::recognize;

fn main() {
    for n in [16384usize, 32768, 65536] {
        let mut rng = ChaCha8Rng::seed_from_u64(42 ^ n as u64);
        let t0 = Instant::now();
        let inst = random_tww1(&mut rng, n, 32);
        let gen_ms = t0.elapsed().as_secs_f64() * 1000.0;
        let g = inst.graph;
        let t1 = Instant::now();
        let t = modular_decomposition(&g);
        let md_ms = t1.elapsed().as_secs_f64() * 1000.0;
        let t2 = Instant::now();
        let _ = recognize(&g);
        let rec_ms = t2.elapsed().as_secs_f64() * 1000.0;
        println!("n={n} m={} gen={gen_ms:.0} md={md_ms:.0} recognize={rec_ms:.0} nodes={}", g.m(), t.internal_nodes().len());
    }
}
