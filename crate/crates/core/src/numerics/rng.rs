use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::real::Real;

/// A seekable stream of randomness identified by `(master_seed, stream_index)`.
///
/// Streams are ChaCha8 keyed by the master seed with the stream index in the
/// cipher's stream word, so distinct indices produce non-overlapping
/// sequences. The stream is a value: it advances only through `&mut self`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// A fresh stream under the same master seed.
    pub fn sibling(&self, stream_index: u64) -> Self {
        Self::new(self.master_seed, stream_index)
    }

    pub fn normal<T: Real>(&mut self) -> T {
        T::standard_normal(&mut self.rng)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Fills `out` with independent standard normals.
    pub fn fill_normal<T: Real>(&mut self, out: &mut [T]) {
        for x in out.iter_mut() {
            *x = T::standard_normal(&mut self.rng);
        }
    }

    /// Uniformly distributed unit vector in R^d.
    pub fn unit_vector<T: Real>(&mut self, d: usize) -> Vec<T> {
        loop {
            let v = gauss_draw::<T>(self, d);
            let len = crate::linalg::norm(&v);
            if len > T::zero() {
                return v.into_iter().map(|x| x / len).collect();
            }
        }
    }

    /// Uniformly distributed point in the closed ball of the given radius.
    pub fn in_ball<T: Real>(&mut self, d: usize, radius: f64) -> Vec<T> {
        let u = self.unit_vector::<T>(d);
        let r = radius * self.uniform().powf(1.0 / d as f64);
        u.into_iter().map(|x| x * T::of(r)).collect()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// `d` independent standard normal variates drawn from `stream`.
pub fn gauss_draw<T: Real>(stream: &mut RngStream, d: usize) -> Vec<T> {
    let mut out = vec![T::zero(); d];
    stream.fill_normal(&mut out);
    out
}
