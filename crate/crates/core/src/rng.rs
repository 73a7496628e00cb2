//! Counter-based random number generation.
//!
//! Every draw is a pure function of (master seed, stream index, counter),
//! so replications are reproducible bit-for-bit regardless of execution
//! order or worker count. This keying is a contract of the simulator, not
//! an implementation convenience.

/// Identifies one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

/// SplitMix64 finalizer: a well-mixed 64-bit permutation.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Stateless keyed generator: `raw(counter)` is independent of call order.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    k0: u64,
    k1: u64,
}

impl CounterRng {
    pub fn new(spec: &RngSpec) -> Self {
        CounterRng {
            k0: mix64(spec.master_seed),
            k1: mix64(mix64(spec.stream_index ^ 0xD1B54A32D192ED03).wrapping_add(spec.master_seed)),
        }
    }

    #[inline]
    pub fn raw(&self, counter: u64) -> u64 {
        mix64(mix64(counter.wrapping_add(self.k0)) ^ self.k1)
    }

    /// Uniform in the open interval (0, 1).
    #[inline]
    pub fn uniform(&self, counter: u64) -> f64 {
        ((self.raw(counter) >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Standard Gaussian via Box-Muller; consumes counters 2c and 2c+1.
    pub fn gaussian(&self, counter: u64) -> f64 {
        let u1 = self.uniform(2 * counter);
        let u2 = self.uniform(2 * counter + 1);
        crate::math::sqrt(-2.0 * crate::math::ln(u1))
            * crate::math::cos(2.0 * core::f64::consts::PI * u2)
    }
}
