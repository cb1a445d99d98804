use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Seed plus stream id naming one reproducible random stream.
///
/// Trials use their index as the stream id, so parallel runs draw exactly
/// what a sequential run would.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngStream { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}
