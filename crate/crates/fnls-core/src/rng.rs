//! Counter-based deterministic random generator.
//!
//! All randomness in the workspace flows from one master seed plus a stream
//! id. Each (seed, stream) pair is an independent sequence generated by a
//! splitmix-style bijective mix of a 64-bit counter, so parallel workers can
//! draw from disjoint streams without any ordering coupling: the k-th draw of
//! stream s is a pure function of (seed, s, k).

#[allow(unused_imports)]
use num_traits::Float;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One independent random stream.
#[derive(Debug, Clone)]
pub struct StreamRng {
    key: u64,
    counter: u64,
    cached_normal: Option<f64>,
}

impl StreamRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        // Decorrelate streams that differ in one bit of either input.
        let key = mix(seed ^ mix(stream.wrapping_mul(GOLDEN).wrapping_add(0x5851_f42d_4c95_7f2d)));
        StreamRng { key, counter: 0, cached_normal: None }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in [0, 1).
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal via Box-Muller; draws are cached in pairs.
    pub fn normal(&mut self) -> f64 {
        if let Some(v) = self.cached_normal.take() {
            return v;
        }
        // Guard the log against u = 0.
        let u = (self.next_f64() + f64::MIN_POSITIVE).min(1.0);
        let v = self.next_f64();
        let radius = (-2.0 * u.ln()).sqrt();
        let angle = 2.0 * core::f64::consts::PI * v;
        self.cached_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }
}
