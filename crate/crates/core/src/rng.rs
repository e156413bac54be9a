//! SplitMix64: a tiny seeded generator whose output sequence is fixed across
//! platforms and crate versions, so sampled reports are reproducible.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` by rejection, so there is no modulo bias.
    pub fn below(&mut self, bound: u128) -> u128 {
        assert!(bound > 0, "empty range");
        if bound <= u64::MAX as u128 + 1 {
            let bound = bound as u64;
            if bound == 0 {
                return self.next_u64() as u128;
            }
            let zone = u64::MAX - (u64::MAX - bound + 1) % bound;
            loop {
                let v = self.next_u64();
                if v <= zone {
                    return (v % bound) as u128;
                }
            }
        }
        let zone = u128::MAX - (u128::MAX - bound + 1) % bound;
        loop {
            let v = (self.next_u64() as u128) << 64 | self.next_u64() as u128;
            if v <= zone {
                return v % bound;
            }
        }
    }

    pub fn below_usize(&mut self, bound: usize) -> usize {
        self.below(bound as u128) as usize
    }
}
