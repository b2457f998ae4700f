//! Complex FFT for arbitrary lengths: iterative radix-2 for powers of two,
//! Bluestein's chirp-z for everything else.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// Precomputed tables for one transform length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Radix2 { twiddles: Vec<Complex64> },
    Bluestein {
        m: usize,
        inner: Vec<Complex64>,
        chirp: Vec<Complex64>,
        filter_hat: Vec<Complex64>,
    },
}

fn radix2_twiddles(n: usize) -> Vec<Complex64> {
    (0..n / 2)
        .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// Forward radix-2 transform in place. `tw` holds `exp(-2 pi i k / n)`.
fn radix2(buf: &mut [Complex64], tw: &[Complex64], inverse: bool) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let step = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = if inverse { tw[k * step].conj() } else { tw[k * step] };
                let a = buf[start + k];
                let b = buf[start + k + len / 2] * w;
                buf[start + k] = a + b;
                buf[start + k + len / 2] = a - b;
            }
        }
        len <<= 1;
    }
}

impl FftPlan {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "FFT length must be positive");
        if n.is_power_of_two() {
            return FftPlan {
                n,
                kind: Kind::Radix2 {
                    twiddles: radix2_twiddles(n),
                },
            };
        }
        let m = (2 * n - 1).next_power_of_two();
        // chirp[k] = exp(-i pi k^2 / n); k^2 reduced mod 2n to keep the angle small.
        let chirp: Vec<Complex64> = (0..n)
            .map(|k| {
                let k2 = (k as u128 * k as u128 % (2 * n as u128)) as f64;
                Complex64::from_polar(1.0, -PI * k2 / n as f64)
            })
            .collect();
        let inner = radix2_twiddles(m);
        let mut filter = vec![Complex64::new(0.0, 0.0); m];
        filter[0] = chirp[0].conj();
        for k in 1..n {
            filter[k] = chirp[k].conj();
            filter[m - k] = chirp[k].conj();
        }
        radix2(&mut filter, &inner, false);
        FftPlan {
            n,
            kind: Kind::Bluestein {
                m,
                inner,
                chirp,
                filter_hat: filter,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized transform: forward uses `exp(-2 pi i jk/n)`, inverse the
    /// conjugate kernel.
    pub fn process(&self, buf: &mut [Complex64], inverse: bool) {
        assert_eq!(buf.len(), self.n, "buffer length does not match plan");
        match &self.kind {
            Kind::Radix2 { twiddles } => radix2(buf, twiddles, inverse),
            Kind::Bluestein {
                m,
                inner,
                chirp,
                filter_hat,
            } => {
                // The inverse is the conjugate of the forward transform of the conjugate.
                if inverse {
                    buf.iter_mut().for_each(|z| *z = z.conj());
                }
                let mut a = vec![Complex64::new(0.0, 0.0); *m];
                for k in 0..self.n {
                    a[k] = buf[k] * chirp[k];
                }
                radix2(&mut a, inner, false);
                for (x, h) in a.iter_mut().zip(filter_hat) {
                    *x *= h;
                }
                radix2(&mut a, inner, true);
                let scale = 1.0 / *m as f64;
                for k in 0..self.n {
                    buf[k] = a[k] * chirp[k] * scale;
                }
                if inverse {
                    buf.iter_mut().for_each(|z| *z = z.conj());
                }
            }
        }
    }
}

/// Unnormalized forward transform.
pub fn fft(buf: &mut [Complex64]) {
    FftPlan::new(buf.len()).process(buf, false);
}

/// Inverse transform scaled by `1/n`.
pub fn ifft(buf: &mut [Complex64]) {
    let n = buf.len() as f64;
    FftPlan::new(buf.len()).process(buf, true);
    buf.iter_mut().for_each(|z| *z /= n);
}

/// Separable 2-D transform of a row-major `width x height` grid. The inverse
/// is scaled by `1/(width*height)`.
pub fn fft2(data: &mut [Complex64], width: usize, height: usize, inverse: bool) {
    assert_eq!(data.len(), width * height);
    let rows = FftPlan::new(width);
    for row in data.chunks_exact_mut(width) {
        rows.process(row, inverse);
    }
    let cols = FftPlan::new(height);
    let mut col = vec![Complex64::new(0.0, 0.0); height];
    for x in 0..width {
        for y in 0..height {
            col[y] = data[y * width + x];
        }
        cols.process(&mut col, inverse);
        for y in 0..height {
            data[y * width + x] = col[y];
        }
    }
    if inverse {
        let s = 1.0 / (width * height) as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn naive_dft(x: &[Complex64], inverse: bool) -> Vec<Complex64> {
        let n = x.len();
        let sign = if inverse { 1.0 } else { -1.0 };
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (j, &v)| {
                    let ang = sign * 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    acc + v * Complex64::from_polar(1.0, ang)
                })
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_for_many_lengths() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [1usize, 2, 3, 5, 8, 12, 17, 32, 45, 64, 100, 135] {
            let x: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            for inverse in [false, true] {
                let mut got = x.clone();
                FftPlan::new(n).process(&mut got, inverse);
                let want = naive_dft(&x, inverse);
                for (g, w) in got.iter().zip(&want) {
                    assert!((g - w).norm() < 1e-9 * n as f64, "n={n} inverse={inverse}");
                }
            }
        }
    }

    #[test]
    fn round_trip_2d() {
        let (w, h) = (12, 10);
        let x: Vec<Complex64> = (0..w * h).map(|i| Complex64::new(i as f64, -(i as f64) / 3.0)).collect();
        let mut y = x.clone();
        fft2(&mut y, w, h, false);
        fft2(&mut y, w, h, true);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).norm() < 1e-9);
        }
    }
}
