//! Seeded Poisson sampling.
//!
//! Every independent count gets its own ChaCha stream: the master seed picks
//! the key and the row (or grid point) index picks the stream. Results do not
//! depend on evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One Poisson draw with mean `lambda`; zero mean gives zero.
pub fn poisson_count(lambda: f64, seed: u64, stream: u64) -> u64 {
    if !(lambda > 0.0) {
        return 0;
    }
    let dist = Poisson::new(lambda).expect("positive finite mean");
    let mut rng = stream_rng(seed, stream);
    dist.sample(&mut rng) as u64
}
