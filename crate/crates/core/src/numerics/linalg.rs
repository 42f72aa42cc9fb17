use crate::{Error, Result, C64};

/// Small dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Solve `A x = b` by LU with partial pivoting.
pub fn solve_dense(a: &CMatrix, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::Domain(format!("rhs length {} != matrix size {n}", b.len())));
    }
    let scale = a.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let (piv, mag) = (col..n).map(|r| (r, m[(r, col)].norm())).fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(mag > 1e-14 * scale) {
            return Err(Error::Singular { column: col, pivot: mag });
        }
        if piv != col {
            for j in 0..n {
                m.data.swap(piv * n + j, col * n + j);
            }
            x.swap(piv, col);
        }
        let inv = 1.0 / m[(col, col)];
        for r in col + 1..n {
            let factor = m[(r, col)] * inv;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(r, j)] -= factor * v;
            }
            let v = x[col];
            x[r] -= factor * v;
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for j in col + 1..n {
            acc -= m[(col, j)] * x[j];
        }
        x[col] = acc / m[(col, col)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_and_diagonal() {
        let b = vec![C64::new(1.0, 2.0), C64::new(-3.0, 0.5), c(4.0)];
        assert_eq!(solve_dense(&CMatrix::identity(3), &b).unwrap(), b);
        let mut d = CMatrix::zeros(2);
        d[(0, 0)] = c(2.0);
        d[(1, 1)] = c(4.0);
        let x = solve_dense(&d, &[c(2.0), c(4.0)]).unwrap();
        assert!((x[0] - c(1.0)).norm() < 1e-15 && (x[1] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn residual_of_nine_by_nine() {
        let n = 9;
        let mut a = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let s = ((i * 31 + j * 17) as f64).sin();
                let t = ((i * 7 + j * 3) as f64).cos();
                a[(i, j)] = C64::new(s, t) + if i == j { c(5.0) } else { c(0.0) };
            }
        }
        let b: Vec<C64> = (0..n).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let x = solve_dense(&a, &b).unwrap();
        let r = a.mul_vec(&x);
        let res: f64 = r.iter().zip(&b).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(res <= 1e-10 * nb);
    }

    #[test]
    fn singular_is_reported() {
        let mut a = CMatrix::zeros(2);
        a[(0, 0)] = c(1.0);
        a[(0, 1)] = c(2.0);
        a[(1, 0)] = c(2.0);
        a[(1, 1)] = c(4.0);
        assert!(matches!(solve_dense(&a, &[c(1.0), c(1.0)]), Err(Error::Singular { .. })));
    }
}
