//! Counter-based random numbers.
//!
//! Every draw is a pure function of `(seed, stream, a, b)`, so ensembles are
//! bitwise reproducible regardless of how realizations are scheduled across
//! threads. The mixer is the splitmix64 finalizer applied after folding in
//! each counter word.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash a 4-word counter into a u64.
#[inline]
pub fn hash4(seed: u64, stream: u64, a: u64, b: u64) -> u64 {
    let mut h = mix64(seed ^ GOLDEN);
    h = mix64(h ^ stream.wrapping_mul(GOLDEN));
    h = mix64(h ^ a.wrapping_mul(GOLDEN));
    h = mix64(h ^ b.wrapping_mul(GOLDEN));
    h
}

/// Uniform in (0, 1], from the top 53 bits.
#[inline]
fn to_unit(h: u64) -> f64 {
    ((h >> 11) as f64 + 1.0) * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal draw keyed by `(seed, stream, a, b)` via Box-Muller.
#[inline]
pub fn gaussian(seed: u64, stream: u64, a: u64, b: u64) -> f64 {
    let u1 = to_unit(hash4(seed, stream, a, b));
    let u2 = to_unit(hash4(seed, stream ^ 0x5bf0_3635, a, b));
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Derive a child seed, e.g. one per sweep grid point. Masked to 63 bits so
/// derived seeds survive serialization to formats with signed integers.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    hash4(master, 0xdead_beef, index, 0) & (i64::MAX as u64)
}
