use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Domain tags keep streams for different purposes apart under one master seed.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Stream {
    RcSet = 0x5243,
    Trial = 0x4d43,
    Synth = 0x5359,
}

/// Independent generator for `(master, index)`; reproducible regardless of
/// which thread asks for it or in what order.
pub(crate) fn stream_rng(master: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(master ^ splitmix(stream as u64)));
    rng.set_stream(index);
    rng
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
