use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fft::fft2;
use crate::rng::rng_from_seed;
use crate::{Error, Result};

/// Row-major height field with unit sample spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightMap {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
    pub beta: f64,
    pub sigma_rms: f64,
}

impl HeightMap {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Sample standard deviation (n - 1 denominator).
    pub fn std_dev(&self) -> f64 {
        let m = self.mean();
        let ss: f64 = self.data.iter().map(|v| (v - m) * (v - m)).sum();
        (ss / (self.data.len() as f64 - 1.0)).sqrt()
    }
}

/// Signed frequency index of FFT bin `k` for length `n`.
fn signed(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Isotropic random-phase noise with amplitude spectrum `1/f^beta`.
///
/// Radial frequency is in cycles per image, the DC term is zero and the
/// phases are conjugate-symmetric so the inverse transform is real. The
/// result is shifted to zero mean and scaled to sample standard deviation
/// `sigma_rms`.
pub fn synth_surface(beta: f64, sigma_rms: f64, seed: u64, width: usize, height: usize) -> Result<HeightMap> {
    if !(1.0..=3.0).contains(&beta) {
        return Err(Error::arg(alloc::format!("beta {beta} outside [1, 3]")));
    }
    if !(sigma_rms > 0.0 && sigma_rms.is_finite()) {
        return Err(Error::arg("sigma_rms must be positive"));
    }
    if width < 2 || height < 2 {
        return Err(Error::arg("surface must be at least 2 x 2"));
    }
    let mut rng = rng_from_seed(seed);
    let zero = Complex64::new(0.0, 0.0);
    let mut spec = vec![zero; width * height];
    let mut set = vec![false; width * height];
    for ky in 0..height {
        for kx in 0..width {
            let i = ky * width + kx;
            if set[i] {
                continue;
            }
            let (px, py) = ((width - kx) % width, (height - ky) % height);
            let j = py * width + px;
            let f = signed(kx, width).hypot(signed(ky, height));
            let amp = if f == 0.0 { 0.0 } else { f.powf(-beta) };
            if i == j {
                // Self-conjugate bins must be real.
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                spec[i] = Complex64::new(sign * amp, 0.0);
            } else {
                let phase = rng.random_range(0.0..2.0 * PI);
                spec[i] = Complex64::from_polar(amp, phase);
                spec[j] = spec[i].conj();
                set[j] = true;
            }
            set[i] = true;
        }
    }
    fft2(&mut spec, width, height, true);
    let mut data: Vec<f64> = spec.iter().map(|z| z.re).collect();
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    data.iter_mut().for_each(|v| *v -= mean);
    let sd = (data.iter().map(|v| v * v).sum::<f64>() / (n - 1.0)).sqrt();
    if sd == 0.0 {
        return Err(Error::Degenerate("surface has zero variance".into()));
    }
    let k = sigma_rms / sd;
    data.iter_mut().for_each(|v| *v *= k);
    Ok(HeightMap {
        width,
        height,
        data,
        beta,
        sigma_rms,
    })
}
