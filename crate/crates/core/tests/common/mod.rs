//! Oracles shared by the integration tests. None of this goes through the
//! library's own numerics.
#![allow(dead_code)]

pub const PARAMS: (f64, f64, f64, f64) = (1.05, 1.30, 1.20, 0.94);

/// Number of eigenvalues of the pencil `(H, D)` below `sigma`: the count of
/// negative pivots of `H − σD` (sign changes of the leading minors).
pub fn count_below(h: &[Vec<f64>], d: &[f64], sigma: f64) -> usize {
    let n = d.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| h[i][j] - if i == j { sigma * d[i] } else { 0.0 }).collect())
        .collect();
    let mut negatives = 0;
    for k in 0..n {
        let mut p = a[k][k];
        if p == 0.0 {
            p = -1e-300;
        }
        if p < 0.0 {
            negatives += 1;
        }
        for i in (k + 1)..n {
            let f = a[i][k] / p;
            for j in (k + 1)..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    negatives
}

pub fn bisection_eigenvalues(h: &[Vec<f64>], d: &[f64]) -> Vec<f64> {
    let n = d.len();
    let radius = (0..n)
        .map(|i| (0..n).map(|j| h[i][j].abs() / (d[i] * d[j]).sqrt()).sum::<f64>())
        .fold(0.0, f64::max);
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(h, d, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// `φ` written out directly, without the library's exponent bookkeeping.
pub fn phi_direct(simple: bool, t: f64) -> f64 {
    let (a, b, c, d) = PARAMS;
    let w = if simple { t.sinh() } else { a * (b * t).exp() - c * (-d * t).exp() };
    if w > 0.0 {
        w + (-w).exp().ln_1p()
    } else {
        w.exp().ln_1p()
    }
}

pub fn exponent_slope(simple: bool, t: f64) -> f64 {
    let (a, b, c, d) = PARAMS;
    if simple {
        t.cosh()
    } else {
        a * b * (b * t).exp() + c * d * (-d * t).exp()
    }
}

pub fn richardson(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    (4.0 * f(h / 2.0) - f(h)) / 3.0
}

pub fn fd1(f: &impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    richardson(|s| (f(t + s) - f(t - s)) / (2.0 * s), h)
}

pub fn fd2(f: &impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    richardson(|s| (f(t + s) - 2.0 * f(t) + f(t - s)) / (s * s), h)
}

pub fn fd3(f: &impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    richardson(
        |s| (f(t + 2.0 * s) - 2.0 * f(t + s) + 2.0 * f(t - s) - f(t - 2.0 * s)) / (2.0 * s * s * s),
        h,
    )
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `−√φ′ · d/dt((1/φ′) · d/dt √φ′)` by three nested finite differences.
pub fn curvature_nested(simple: bool, t: f64) -> f64 {
    let f = move |s: f64| phi_direct(simple, s);
    let dphi = move |s: f64| fd1(&f, s, 2e-3);
    let root = move |s: f64| dphi(s).sqrt();
    let inner = move |s: f64| fd1(&root, s, 4e-3) / dphi(s);
    -root(t) * fd1(&inner, t, 8e-3)
}

