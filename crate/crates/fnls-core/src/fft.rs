//! Radix-2 complex FFT on power-of-two lengths, plus the N-d driver.
//!
//! Normalization convention: the forward transform carries no factor, the
//! inverse carries 1/M per axis, so a forward/inverse round trip is the
//! identity and `spectrum[k]` of the plane wave `exp(i ξ_k x)` equals `M^N`
//! at index k. Every spectral formula in the crate is stated against this
//! convention.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::Complex64;

/// Precomputed plan for one transform length.
pub struct Fft {
    len: usize,
    /// Forward twiddles e^{-2πi j/len} for j < len/2.
    twiddles: Vec<Complex64>,
}

impl Fft {
    /// `len` must be a power of two (>= 1).
    pub fn new(len: usize) -> Self {
        assert!(len.is_power_of_two(), "FFT length must be a power of two");
        let step = -2.0 * core::f64::consts::PI / len as f64;
        let twiddles = (0..len / 2)
            .map(|j| {
                let phi = step * j as f64;
                Complex64::new(phi.cos(), phi.sin())
            })
            .collect();
        Fft { len, twiddles }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    /// Inverse transform, scaled by 1/len.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, true);
        let scale = 1.0 / self.len as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex64], conjugate: bool) {
        let n = self.len;
        assert_eq!(data.len(), n);
        if n < 2 {
            return;
        }
        // Bit-reversal permutation.
        let mut j = 0usize;
        for i in 0..n - 1 {
            if i < j {
                data.swap(i, j);
            }
            let mut mask = n >> 1;
            while j & mask != 0 {
                j &= !mask;
                mask >>= 1;
            }
            j |= mask;
        }
        let mut block = 2usize;
        while block <= n {
            let half = block / 2;
            let tstep = n / block;
            for start in (0..n).step_by(block) {
                for k in 0..half {
                    let mut w = self.twiddles[k * tstep];
                    if conjugate {
                        w.im = -w.im;
                    }
                    let lo = start + k;
                    let hi = lo + half;
                    let b = data[hi] * w;
                    let a = data[lo];
                    data[lo] = a + b;
                    data[hi] = a - b;
                }
            }
            block *= 2;
        }
    }
}

/// In-place N-d transform of row-major data with `m` points per axis.
///
/// `dim` axes of equal length; the inverse applies the 1/m factor per axis
/// (1/m^dim total).
pub fn fft_nd(dim: usize, m: usize, data: &mut [Complex64], inverse: bool) {
    debug_assert_eq!(data.len(), m.pow(dim as u32));
    let plan = Fft::new(m);
    let total = data.len();
    let mut scratch = vec![Complex64::new(0.0, 0.0); m];
    for axis in 0..dim {
        let stride = m.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            for line in data.chunks_exact_mut(m) {
                if inverse {
                    plan.inverse(line);
                } else {
                    plan.forward(line);
                }
            }
        } else {
            let block = stride * m;
            for q in 0..total / block {
                for inner in 0..stride {
                    let base = q * block + inner;
                    for k in 0..m {
                        scratch[k] = data[base + k * stride];
                    }
                    if inverse {
                        plan.inverse(&mut scratch);
                    } else {
                        plan.forward(&mut scratch);
                    }
                    for k in 0..m {
                        data[base + k * stride] = scratch[k];
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn forward_matches_direct_dft() {
        let n = 16;
        let mut data: Vec<Complex64> = (0..n)
            .map(|i| cx((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let reference: Vec<Complex64> = (0..n)
            .map(|k| {
                let mut acc = cx(0.0, 0.0);
                for (m, v) in data.iter().enumerate() {
                    let phi = -2.0 * core::f64::consts::PI * (k * m) as f64 / n as f64;
                    acc += v * cx(phi.cos(), phi.sin());
                }
                acc
            })
            .collect();
        Fft::new(n).forward(&mut data);
        for (a, b) in data.iter().zip(reference.iter()) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn round_trip_identity() {
        let n = 64;
        let original: Vec<Complex64> = (0..n)
            .map(|i| cx((i as f64).sin(), (3.0 + i as f64).cos()))
            .collect();
        let mut data = original.clone();
        let plan = Fft::new(n);
        plan.forward(&mut data);
        plan.inverse(&mut data);
        for (a, b) in data.iter().zip(original.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn nd_round_trip_and_plane_wave() {
        let m = 16;
        let dim = 2;
        // Plane wave with integer mode (2, 5): spectrum concentrates at one index.
        let mut data = vec![cx(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                let phi = 2.0 * core::f64::consts::PI * (2.0 * i as f64 + 5.0 * j as f64) / m as f64;
                data[i * m + j] = cx(phi.cos(), phi.sin());
            }
        }
        let original = data.clone();
        fft_nd(dim, m, &mut data, false);
        for (idx, v) in data.iter().enumerate() {
            let expect = if idx == 2 * m + 5 { (m * m) as f64 } else { 0.0 };
            assert!(
                (v - cx(expect, 0.0)).norm() < 1e-9,
                "index {idx}: {v} vs {expect}"
            );
        }
        fft_nd(dim, m, &mut data, true);
        for (a, b) in data.iter().zip(original.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
