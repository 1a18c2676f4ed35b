//! Prints operation counts and timings for growing random inputs.
//!
//! Run with `cargo run --release --example scaling`.

use std::time::Instant;

use presmod::field::Field;
use presmod::pres_hom::pres_hom;
use presmod::random::{random_presented_complex, random_tower};
use presmod::tower::tower_presentations;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let k = Field::Z2;
    println!("tower events, column operations, seconds");
    for e in 7..=12 {
        let n = 1usize << e;
        let mut rng = ChaCha8Rng::seed_from_u64(e as u64);
        let script = random_tower(k, 3 * n / 4, n / 4, 2, &mut rng);
        let t = Instant::now();
        let pres = tower_presentations(&script, 2).expect("valid tower");
        println!("{n} {} {:.3}", pres.ops, t.elapsed().as_secs_f64());
    }
    println!("complex size, seconds");
    for e in 6..=10 {
        let n = 1usize << e;
        let mut rng = ChaCha8Rng::seed_from_u64(100 + e as u64);
        let (f0, g0) = random_presented_complex(k, n, n, &mut rng);
        let t = Instant::now();
        let bars = pres_hom(&f0, &g0, 1, false).expect("complex");
        println!("{n} {:.4} ({} bars)", t.elapsed().as_secs_f64(), bars.len());
    }
}
