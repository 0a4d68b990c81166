use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible random stream: `(seed, stream_id)` selects one of 2^64
/// independent ChaCha streams for each seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// The `index`-th substream of this stream. Children of distinct parents
    /// draw from distinct seeds, so task indices can be reused freely.
    pub fn child(&self, index: u64) -> RngStream {
        RngStream {
            seed: splitmix64(self.seed ^ splitmix64(self.stream_id)),
            stream_id: index,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_stream_same_draws() {
        let s = RngStream::new(7, 3);
        let (mut ra, mut rb) = (s.rng(), s.rng());
        let a: Vec<u64> = (0..8).map(|_| ra.random()).collect();
        let b: Vec<u64> = (0..8).map(|_| rb.random()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_differ() {
        let mut a = RngStream::new(7, 3).rng();
        let mut b = RngStream::new(7, 4).rng();
        let mut c = RngStream::new(7, 3).child(0).rng();
        let x: u64 = a.random();
        assert_ne!(x, b.random::<u64>());
        assert_ne!(x, c.random::<u64>());
        assert_ne!(RngStream::new(1, 0).child(5), RngStream::new(2, 0).child(5));
    }
}
