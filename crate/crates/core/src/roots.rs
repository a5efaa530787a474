//! Bracketed scalar root finding (Brent's bisection/secant/inverse-quadratic hybrid).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct BrentOptions {
    /// Relative tolerance on the abscissa.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for BrentOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_iter: 200,
        }
    }
}

/// Root of `f` in `[a, b]`, which must bracket a sign change.
pub fn brent<F>(mut f: F, mut a: f64, mut b: f64, opts: BrentOptions) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoRootInBracket { lo: a, hi: b });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.rel_tol * b.abs();
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::RootNotConverged {
        iterations: opts.max_iter,
    })
}

/// Number of sign changes of `f` on an `n`-point uniform scan of `[a, b]`.
pub fn count_sign_changes<F>(mut f: F, a: f64, b: f64, n: usize) -> Result<usize>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut changes = 0;
    let mut prev: Option<f64> = None;
    for i in 0..n {
        let x = a + (b - a) * i as f64 / (n - 1) as f64;
        let v = f(x)?;
        if v == 0.0 {
            continue;
        }
        if let Some(p) = prev {
            if p.signum() != v.signum() {
                changes += 1;
            }
        }
        prev = Some(v);
    }
    Ok(changes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt2() {
        let r = brent(|x| Ok(x * x - 2.0), 0.0, 2.0, BrentOptions::default()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn no_bracket() {
        let r = brent(|x| Ok(x * x + 1.0), -1.0, 1.0, BrentOptions::default());
        assert!(matches!(r, Err(Error::NoRootInBracket { .. })));
    }

    #[test]
    fn large_scale_relative_tolerance() {
        let root = 1.234_567_890_123e15;
        let r = brent(|x| Ok((x - root) / root), 1e15, 2e15, BrentOptions::default()).unwrap();
        assert!(((r - root) / root).abs() < 1e-12);
    }

    #[test]
    fn sign_change_count() {
        let n = count_sign_changes(|x| Ok(x.sin()), 0.5, 9.0, 64).unwrap();
        assert_eq!(n, 2);
    }
}
