//! Deterministic, splittable random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream that is
//! a pure function of `(master seed, domain, index)`. ChaCha is counter based,
//! so stream `i` can be produced by any worker without coordination and the
//! results never depend on how work is scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Separates the uses of one master seed so that, for example, snapshot `i`
/// and simulation round `i` never share a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Snapshot,
    Simulation,
    Trivalency,
    Conventional,
    RandomSeeds,
    Audit,
    Generator,
    Evaluation,
}

impl Domain {
    fn tag(self) -> u64 {
        match self {
            Domain::Snapshot => 0x5EED_0001,
            Domain::Simulation => 0x5EED_0002,
            Domain::Trivalency => 0x5EED_0003,
            Domain::Conventional => 0x5EED_0004,
            Domain::RandomSeeds => 0x5EED_0005,
            Domain::Audit => 0x5EED_0006,
            Domain::Generator => 0x5EED_0007,
            Domain::Evaluation => 0x5EED_0008,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a new master seed from `(master, domain, index)`.
pub fn derive_seed(master: u64, domain: Domain, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ domain.tag()).wrapping_add(index))
}

/// The stream with the given index under `master` and `domain`.
pub fn stream(master: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(master ^ domain.tag()));
    rng.set_stream(index);
    rng
}
