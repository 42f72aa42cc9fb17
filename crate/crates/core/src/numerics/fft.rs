use crate::{Error, Result, C64};
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Forward and inverse transforms of one length, planned once. The inverse
/// carries the `1/N` factor.
#[derive(Clone)]
pub struct FftPlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPlan").field("len", &self.len).finish()
    }
}

impl FftPlan {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Shape(len));
        }
        let mut planner = FftPlanner::new();
        Ok(Self { len, forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len) })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, data: &mut [C64]) {
        assert_eq!(data.len(), self.len);
        self.forward.process(data);
    }

    pub fn inverse(&self, data: &mut [C64]) {
        assert_eq!(data.len(), self.len);
        self.inverse.process(data);
        let s = 1.0 / self.len as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }
}

pub fn fft(samples: &[C64]) -> Result<Vec<C64>> {
    let plan = FftPlan::new(samples.len())?;
    let mut out = samples.to_vec();
    plan.forward(&mut out);
    Ok(out)
}

pub fn ifft(samples: &[C64]) -> Result<Vec<C64>> {
    let plan = FftPlan::new(samples.len())?;
    let mut out = samples.to_vec();
    plan.inverse(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn dft(x: &[C64]) -> Vec<C64> {
        let n = x.len();
        (0..n).map(|k| (0..n).map(|j| x[j] * C64::from_polar(1.0, -TAU * (j * k) as f64 / n as f64)).sum()).collect()
    }

    #[test]
    fn constant_and_single_mode() {
        let n = 32;
        let c = fft(&vec![C64::new(1.0, 0.0); n]).unwrap();
        assert!((c[0] - C64::new(n as f64, 0.0)).norm() < 1e-12);
        assert!(c[1..].iter().all(|z| z.norm() < 1e-12));
        let wave: Vec<C64> = (0..n).map(|j| C64::from_polar(1.0, TAU * j as f64 / n as f64)).collect();
        let w = fft(&wave).unwrap();
        for (k, z) in w.iter().enumerate() {
            let expect = if k == 1 { n as f64 } else { 0.0 };
            assert!((z.norm() - expect).abs() < 1e-10, "bin {k}");
        }
    }

    #[test]
    fn matches_direct_dft() {
        // Deterministic pseudo-random samples.
        let x: Vec<C64> = (0..64)
            .map(|i| {
                let s = (i as f64 * 12.9898).sin() * 43758.5453;
                let t = (i as f64 * 78.233).sin() * 12345.678;
                C64::new(s.fract(), t.fract())
            })
            .collect();
        let fast = fft(&x).unwrap();
        let slow = dft(&x);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-11);
        }
        let back = ifft(&fast).unwrap();
        for (a, b) in back.iter().zip(&x) {
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert_eq!(fft(&[C64::new(0.0, 0.0); 12]).unwrap_err(), Error::Shape(12));
    }

    proptest! {
        #[test]
        fn round_trip(log2 in 4u32..=16, seed in 0u64..1000) {
            let n = 1usize << log2;
            let x: Vec<C64> = (0..n)
                .map(|i| {
                    let v = ((i as u64).wrapping_mul(6364136223846793005).wrapping_add(seed) >> 11) as f64
                        / (1u64 << 53) as f64;
                    C64::new(v - 0.5, (v * 7.0).fract() - 0.5)
                })
                .collect();
            let back = ifft(&fft(&x).unwrap()).unwrap();
            let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (a, b) in back.iter().zip(&x) {
                prop_assert!((a - b).norm() <= 1e-12 * scale.max(1.0) * (log2 as f64));
            }
        }
    }
}
