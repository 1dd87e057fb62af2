use qcurv_core::curvature::triviality_scan;
use qcurv_core::testutil::random_trivial_module;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let total = std::time::Instant::now();
    for i in 0..20 {
        let dim = rng.gen_range(1..=3);
        let m = random_trivial_module(&mut rng, dim, 2, 5);
        let t = std::time::Instant::now();
        let v = triviality_scan(&m, 1, 20, 3, true).unwrap();
        println!("instance {i} dim {dim}: fails={} t={:?}", v.failure_places.len(), t.elapsed());
    }
    println!("total: {:?}", total.elapsed());
}
