use crate::{Error, Result};

/// Uniform grid on `[-L/2, L/2)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Grid1D {
    length: f64,
    points: usize,
    periodic: bool,
}

impl Grid1D {
    pub fn new(length: f64, points: usize, periodic: bool) -> Result<Self> {
        let mut errs = Vec::new();
        if !(length.is_finite() && length > 0.0) {
            errs.push(format!("grid length must be positive, got {length}"));
        }
        if points < 16 || !points.is_power_of_two() {
            errs.push(format!("point count must be a power of two >= 16, got {points}"));
        }
        if errs.is_empty() {
            Ok(Self { length, points, periodic })
        } else {
            Err(Error::Validation(errs))
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn dx(&self) -> f64 {
        self.length / self.points as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.x(i)).collect()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.points;
        let dk = std::f64::consts::TAU / self.length;
        (0..n).map(|i| if i < n / 2 { i as f64 * dk } else { (i as f64 - n as f64) * dk }).collect()
    }

    /// Index of the mirror point `-x_i` (the grid contains `x = 0`).
    pub fn mirror(&self, i: usize) -> usize {
        (self.points - i) % self.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(Grid1D::new(10.0, 15, true).is_err());
        assert!(Grid1D::new(10.0, 8, true).is_err());
        assert!(Grid1D::new(-1.0, 64, true).is_err());
        let g = Grid1D::new(10.0, 64, true).unwrap();
        assert_eq!(g.x(0), -5.0);
        assert!((g.x(32)).abs() < 1e-15);
        assert_eq!(g.mirror(0), 0);
        assert_eq!(g.mirror(33), 31);
    }
}
