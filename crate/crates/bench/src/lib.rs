//! Seeded inputs shared by the benchmarks.

use quatcomp::{QMatrix, QTensor3, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quat(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn random_matrix(m: usize, n: usize, seed: u64) -> QMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    QMatrix::from_fn(m, n, |_, _| quat(&mut rng))
}

pub fn random_tensor(dims: (usize, usize, usize), seed: u64) -> QTensor3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    QTensor3::from_fn(dims, |_, _, _| quat(&mut rng))
}
