//! Counter-based random streams.
//!
//! Every random quantity in the crate is drawn from a stream addressed by a
//! tuple `(seed, domain, major, minor)`. The tuple is the ChaCha8 key/stream
//! pair directly, so distinct tuples give independent streams and the value
//! drawn for item `i` never depends on how many items were drawn before it
//! or on which thread drew them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Separates the stream families so that, e.g., vocabulary word 7 and
/// corpus token 7 never share randomness under the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Vocabulary = 0x766f_6361_6200_0001,
    Token = 0x746f_6b65_6e00_0002,
    Uniform = 0x756e_6966_0000_0003,
    Query = 0x7175_6572_7900_0004,
}

pub fn stream(seed: u64, domain: Domain, major: u64, minor: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    key[16..24].copy_from_slice(&major.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(minor);
    rng
}
