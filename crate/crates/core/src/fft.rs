//! Radix-2 complex FFT, iterative decimation-in-time with precomputed
//! twiddles. The butterfly is the plain `u + t` / `u - t` pair, which makes
//! the transform commute bitwise with half-grid rotations and exact phase
//! multiples of `i` — properties the evolution covariance tests rely on.

use alloc::vec::Vec;
use num_complex::Complex64;

pub(crate) struct Fft {
    n: usize,
    forward: Vec<Complex64>,
    inverse: Vec<Complex64>,
}

impl Fft {
    /// Plans a transform of length `n` (a power of two).
    pub fn new(n: usize) -> Self {
        assert!(
            n.is_power_of_two() && n >= 2,
            "FFT length must be a power of two"
        );
        let mut forward = Vec::with_capacity(n / 2);
        let mut inverse = Vec::with_capacity(n / 2);
        for j in 0..n / 2 {
            let theta = 2.0 * core::f64::consts::PI * j as f64 / n as f64;
            let (s, c) = (libm::sin(theta), libm::cos(theta));
            forward.push(Complex64::new(c, -s));
            inverse.push(Complex64::new(c, s));
        }
        Self {
            n,
            forward,
            inverse,
        }
    }

    fn transform(&self, data: &mut [Complex64], twiddles: &[Complex64]) {
        let n = self.n;
        debug_assert_eq!(data.len(), n);
        // bit-reversal permutation
        let mut j = 0usize;
        for i in 0..n {
            if i < j {
                data.swap(i, j);
            }
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            let mut base = 0;
            while base < n {
                for k in 0..half {
                    let w = twiddles[k * stride];
                    let t = w * data[base + half + k];
                    let u = data[base + k];
                    data[base + k] = u + t;
                    data[base + half + k] = u - t;
                }
                base += len;
            }
            len <<= 1;
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// Inverse transform including the `1/n` normalization.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / self.n as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(input: &[Complex64]) -> Vec<Complex64> {
        let n = input.len();
        (0..n)
            .map(|m| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, z) in input.iter().enumerate() {
                    let theta = -2.0 * core::f64::consts::PI * (m * j % n) as f64 / n as f64;
                    acc += z * Complex64::new(libm::cos(theta), libm::sin(theta));
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let fft = Fft::new(64);
        let mut data: Vec<Complex64> = (0..64)
            .map(|i| Complex64::new(libm::sin(0.7 * i as f64), libm::cos(1.3 * i as f64)))
            .collect();
        let expect = naive_dft(&data);
        fft.forward(&mut data);
        for (got, want) in data.iter().zip(&expect) {
            assert!((got - want).norm() < 1e-11);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let fft = Fft::new(256);
        let original: Vec<Complex64> = (0..256)
            .map(|i| Complex64::new(i as f64 * 0.01 - 1.0, (i % 7) as f64))
            .collect();
        let mut data = original.clone();
        fft.forward(&mut data);
        fft.inverse(&mut data);
        for (got, want) in data.iter().zip(&original) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn half_rotation_commutes_bitwise() {
        let n = 128;
        let fft = Fft::new(n);
        let base: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(libm::cos(0.3 * i as f64), 0.2 * i as f64))
            .collect();
        let mut plain = base.clone();
        fft.forward(&mut plain);
        let mut rotated: Vec<Complex64> = (0..n).map(|i| base[(i + n / 2) % n]).collect();
        fft.forward(&mut rotated);
        for (k, (r, p)) in rotated.iter().zip(&plain).enumerate() {
            let want = if k % 2 == 0 { *p } else { -*p };
            assert_eq!(*r, want, "bin {k}");
        }
    }
}
