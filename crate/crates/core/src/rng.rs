//! Seeded, batch-splittable random streams.
//!
//! Every sampler draws from ChaCha8 (a counter-based stream cipher) keyed by
//! the 64-bit user seed. Work is cut into fixed-size batches and batch `b`
//! reads stream `b`, so output is bit-identical whatever the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};

use crate::quat::{Quaternion, UnitQuaternion, UnitVector3, Vector3};

pub const BATCH_SIZE: usize = 4096;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer, used to derive independent child seeds.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    let mut z = seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `f` once per batch of at most [`BATCH_SIZE`] items and concatenates
/// the results in batch order. `f` receives the batch rng and item count.
pub fn batched<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> Vec<T> + Sync,
{
    let batches = n.div_ceil(BATCH_SIZE);
    let run = |b: usize| {
        let len = BATCH_SIZE.min(n - b * BATCH_SIZE);
        f(&mut stream(seed, b as u64), len)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..batches).into_par_iter().map(run).flatten().collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..batches).flat_map(run).collect()
    }
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> UnitVector3 {
    let [x, y, z]: [f64; 3] = UnitSphere.sample(rng);
    UnitVector3::normalize(Vector3::new(x, y, z)).unwrap_or(UnitVector3::I)
}

/// Uniform on S³ (normalized Gaussian 4-vector).
pub fn unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> UnitQuaternion {
    loop {
        let g: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
        if let Ok(u) = UnitQuaternion::normalize(Quaternion::from_array(g)) {
            return u;
        }
    }
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batches_are_thread_independent() {
        let f = |rng: &mut ChaCha8Rng, len: usize| (0..len).map(|_| rng.gen::<u64>()).collect();
        let a: Vec<u64> = batched(10_000, 7, f);
        let b: Vec<u64> = batched(10_000, 7, f);
        assert_eq!(a.len(), 10_000);
        assert_eq!(a, b);
        let c: Vec<u64> = batched(10_000, 8, f);
        assert_ne!(a, c);
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
