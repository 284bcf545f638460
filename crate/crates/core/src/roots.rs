//! Scan, bracket and refine roots of one-dimensional functions whose pole
//! lattice is known in advance.

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("no convergence after {iterations} iterations in [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64, iterations: usize },
    #[error("sign change at x = {x} is a singularity, not a root")]
    Singular { x: f64 },
    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },
}

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_EXCLUSION: f64 = 1e-6;
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: Bracket,
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Every sign change between adjacent samples on `range`, skipping intervals
/// that contain a registered singularity. Samples closer than the exclusion
/// radius (`DEFAULT_EXCLUSION` × range width) to a singularity are moved just
/// outside it.
pub fn scan_brackets<F: Fn(f64) -> f64>(
    f: F,
    range: (f64, f64),
    n_samples: usize,
    singularities: &[f64],
) -> Vec<Bracket> {
    scan_brackets_with(f, range, n_samples, singularities, DEFAULT_EXCLUSION)
}

pub fn scan_brackets_with<F: Fn(f64) -> f64>(
    f: F,
    range: (f64, f64),
    n_samples: usize,
    singularities: &[f64],
    exclusion: f64,
) -> Vec<Bracket> {
    let (a, b) = range;
    if n_samples < 2 || !(a < b) || !a.is_finite() || !b.is_finite() {
        return Vec::new();
    }
    let radius = exclusion * (b - a);
    let poles: Vec<f64> = singularities
        .iter()
        .copied()
        .filter(|s| *s >= a - radius && *s <= b + radius)
        .collect();
    let near_pole = |x: f64| poles.iter().any(|s| (x - s).abs() <= radius);

    let mut xs: Vec<f64> = (0..n_samples)
        .map(|i| a + (b - a) * i as f64 / (n_samples - 1) as f64)
        .filter(|x| !near_pole(*x))
        .collect();
    for s in &poles {
        for x in [s - 1.5 * radius, s + 1.5 * radius] {
            if x >= a && x <= b && !near_pole(x) {
                xs.push(x);
            }
        }
    }
    xs.sort_by(|p, q| p.total_cmp(q));
    xs.dedup();

    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for &x in &xs {
        let fx = f(x);
        if !fx.is_finite() {
            last = None;
            continue;
        }
        if fx == 0.0 {
            continue;
        }
        if let Some((x0, f0)) = last {
            let straddles = poles.iter().any(|s| *s > x0 && *s < x);
            if !straddles && sign(f0) != sign(fx) {
                out.push(Bracket { lo: x0, hi: x, f_lo: f0, f_hi: fx });
            }
        }
        last = Some((x, fx));
    }
    out
}

/// Brent's bisection/secant/inverse-quadratic hybrid. The sign change is kept
/// at every step; `tol` is absolute in x (0 means refine to adjacent floats).
pub fn refine<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<RootResult, RootError> {
    let Bracket { lo, hi, f_lo, f_hi } = bracket;
    if !(lo < hi) || sign(f_lo) * sign(f_hi) > 0 {
        return Err(RootError::InvalidBracket { lo, hi });
    }
    let done = |x: f64, fx: f64, other: f64, f_other: f64, it: usize| RootResult {
        x,
        residual: fx,
        iterations: it,
        bracket: if x <= other {
            Bracket { lo: x, hi: other.max(x), f_lo: fx, f_hi: f_other }
        } else {
            Bracket { lo: other, hi: x, f_lo: f_other, f_hi: fx }
        },
    };
    if f_lo == 0.0 {
        return Ok(done(lo, 0.0, hi, f_hi, 0));
    }
    if f_hi == 0.0 {
        return Ok(done(hi, 0.0, lo, f_lo, 0));
    }
    let scale = f_lo.abs().max(f_hi.abs());

    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f_lo, f_hi);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for it in 1..=MAX_ITERATIONS {
        if sign(fb) == sign(fc) {
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
        let tol1 = (2.0 * f64::EPSILON * b.abs() + 0.5 * tol).max(1e-300);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            if fb.abs() > scale {
                return Err(RootError::Singular { x: b });
            }
            return Ok(done(b, fb, c, fc, it));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if fb.is_nan() {
            return Err(RootError::Singular { x: b });
        }
    }
    Err(RootError::NoConvergence { lo, hi, iterations: MAX_ITERATIONS })
}

/// Refine many brackets in parallel; results come back in bracket order.
pub fn refine_all<F>(f: &F, brackets: &[Bracket], tol: f64) -> Vec<Result<RootResult, RootError>>
where
    F: Fn(f64) -> f64 + Sync,
{
    brackets.par_iter().map(|b| refine(f, *b, tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn tan_roots_skip_poles() {
        let poles = [PI / 2.0, 1.5 * PI, 2.5 * PI];
        let br = scan_brackets(f64::tan, (0.0, 10.0), 1000, &poles);
        let roots: Vec<f64> = br
            .iter()
            .map(|b| refine(f64::tan, *b, 1e-14).unwrap().x)
            .collect();
        assert_eq!(roots.len(), 3, "{roots:?}");
        for (r, m) in roots.iter().zip([PI, 2.0 * PI, 3.0 * PI]) {
            assert!((r - m).abs() < 1e-12);
        }
    }

    #[test]
    fn unregistered_pole_is_flagged() {
        let br = scan_brackets(f64::tan, (1.0, 2.0), 11, &[]);
        assert_eq!(br.len(), 1);
        assert!(matches!(refine(f64::tan, br[0], 1e-14), Err(RootError::Singular { .. })));
    }

    #[test]
    fn sqrt_two() {
        let f = |x: f64| x * x - 2.0;
        let b = Bracket { lo: 1.0, hi: 2.0, f_lo: f(1.0), f_hi: f(2.0) };
        let r = refine(f, b, 1e-14).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
        assert!(r.x >= r.bracket.lo && r.x <= r.bracket.hi);
    }

    #[test]
    fn box_roots_at_lambda_zero() {
        let f = |k: f64| k * (k * 1.0).sin();
        let br = scan_brackets(f, (0.1, 16.0), 400, &[]);
        assert_eq!(br.len(), 5);
        for (b, n) in br.iter().zip(1..) {
            let r = refine(f, *b, 1e-13).unwrap();
            assert!((r.x - n as f64 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_zero_on_sample() {
        let f = |x: f64| x - 0.5;
        let br = scan_brackets(f, (0.0, 1.0), 11, &[]);
        assert_eq!(br.len(), 1);
        assert_eq!((br[0].lo, br[0].hi), (0.4, 0.6));
        assert_eq!(refine(f, br[0], 0.0).unwrap().x, 0.5);
    }

    #[test]
    fn bad_bracket_rejected() {
        let b = Bracket { lo: 0.0, hi: 1.0, f_lo: 1.0, f_hi: 2.0 };
        assert!(refine(|x| x + 1.0, b, 1e-12).is_err());
    }
}
