use crate::{Error, Result};

/// Default bracket tolerance for root finding.
pub const ROOT_TOL: f64 = 1e-12;

/// Brent's method on a sign-changing bracket; every step falls back to
/// bisection when interpolation would leave the bracket or stall.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa * fb > 0.0 || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket { lo, hi });
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let (mut c, mut fc) = (a, fa);
    let mut bisected = true;
    let mut d = 0.0;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() < tol {
            return Ok(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo_s = (3.0 * a + b) / 4.0;
        let outside = !((s > lo_s.min(b)) && (s < lo_s.max(b)));
        let slow = if bisected {
            (s - b).abs() >= 0.5 * (b - c).abs() || (b - c).abs() < tol
        } else {
            (s - b).abs() >= 0.5 * (c - d).abs() || (c - d).abs() < tol
        };
        bisected = outside || slow;
        if bisected {
            s = 0.5 * (a + b);
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    // atanh(y) = Σ y^(2n+1)/(2n+1)
    fn atanh_series(y: f64) -> f64 {
        (0..200).map(|n| y.powi(2 * n + 1) / (2 * n + 1) as f64).sum()
    }

    #[test]
    fn examples() {
        let r = find_root(|x| x * x - 2.0, 1.0, 2.0, ROOT_TOL).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        let r = find_root(|x| x.tanh() - 0.5, 0.0, 2.0, ROOT_TOL).unwrap();
        assert!((r - atanh_series(0.5)).abs() < 1e-12);
        assert!((r - 0.549_306).abs() < 1e-6);
        let r = find_root(|x| x, -1.0, 1.0, ROOT_TOL).unwrap();
        assert!(r.abs() < 1e-12);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(find_root(|x| x * x + 1.0, -1.0, 1.0, ROOT_TOL), Err(Error::Bracket { .. })));
    }
}
