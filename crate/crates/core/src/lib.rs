//! Dynamics of Sturmian Hamiltonian spectra via trace maps on Fricke surfaces.
//!
//! The crate has four layers, usable independently:
//!
//! - [`contfrac`]: continued fractions with arbitrary-precision convergents,
//!   three-distance gap statistics, and covering bounds for circle rotations.
//! - [`surface`]: the trace-map action on R^3, Fricke-invariant level sets,
//!   orbit classification, and interval approximations of spectra and
//!   survival sets.
//! - [`torus`]: the linearized dynamics on T^2 behind the trace maps
//!   (hyperbolic toral automorphisms, invariant cones, perturbed circle-valued
//!   maps, graph transforms for local stable manifolds).
//! - [`fractal`]: interval-set geometry (thickness, box-counting dimension,
//!   measure) for the Cantor approximants the other layers produce.
//!
//! All algorithms are deterministic and allocation-light; nothing here spawns
//! threads. Sweep-style entry points accept a batch evaluation hook so a
//! caller can farm independent evaluations out to a work pool and still get
//! bit-identical results. The crate is `no_std`-compatible (with `alloc`);
//! the `std` feature (default) only switches float math to the platform
//! intrinsics and adds `std::error::Error` impls.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod contfrac;
pub mod error;
pub mod fractal;
pub mod surface;
pub mod torus;

pub(crate) mod math;

#[cfg(test)]
pub(crate) mod testutil {
    /// Splitmix-style deterministic pseudo-random stream for sampling tests.
    pub struct Stream(u64);
    impl Stream {
        pub fn new(seed: u64) -> Self {
            Stream(seed)
        }
        pub fn next_u64(&mut self) -> u64 {
            self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = self.0;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        }
        /// Uniform in [0, 1).
        pub fn unit(&mut self) -> f64 {
            (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
        }
        /// Uniform in [-s, s].
        pub fn sym(&mut self, s: f64) -> f64 {
            s * (2.0 * self.unit() - 1.0)
        }
        /// Uniform integer in [lo, hi] (inclusive).
        pub fn int_in(&mut self, lo: u32, hi: u32) -> u32 {
            lo + (self.next_u64() % (hi - lo + 1) as u64) as u32
        }
    }
}

pub use error::CoreError;
