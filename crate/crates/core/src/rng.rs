//! Counter-based random substreams.
//!
//! Every random draw is taken from a ChaCha8 stream keyed by `(seed, purpose)`
//! and positioned by the sample index, so sample `i` is the same whatever
//! order or thread it is produced on.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tags separating independent streams drawn for the same sample.
pub mod purpose {
    pub const UST_WALK: u64 = 0x5553_545f_5741_4c4b;
    pub const MSF_WEIGHTS: u64 = 0x4d53_465f_5745_4947;
    pub const BERNOULLI: u64 = 0x4245_524e_4f55_4c4c;
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream for sample `index` of a run with `seed`, for the given purpose.
pub fn substream(seed: u64, index: u64, purpose: u64) -> ChaCha8Rng {
    let mut state = seed ^ purpose.rotate_left(17);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Position-addressed 64-bit draw: word pair `slot` of the stream.
pub fn draw_at(rng: &mut ChaCha8Rng, slot: u128) -> u64 {
    use rand::RngCore;
    rng.set_word_pos(2 * slot);
    rng.next_u64()
}
