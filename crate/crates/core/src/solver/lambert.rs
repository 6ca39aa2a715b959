use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITER: usize = 64;

/// Principal branch `W₀(x)` of the Lambert W function for `x ≥ 0`.
///
/// Halley iteration on `w e^w − x` from a logarithmic starting point; for
/// very large `x` the iteration runs on `w + ln w − ln x` instead so that
/// `e^w` never overflows.
pub fn lambert_w<T: Real>(x: T) -> Result<T> {
    if x.is_nan() || x < T::zero() {
        return Err(Error::Domain(format!(
            "Lambert W is only evaluated on the non-negative axis, got {x}"
        )));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x.is_infinite() {
        return Ok(x);
    }
    let one = T::one();
    let two = T::lit(2.0);
    let eps = T::epsilon();

    let mut w = if x < T::E() {
        // Winitzki-type start, good to a few percent on [0, e]
        let l = x.ln_1p();
        l * (one - l.ln_1p() / (two + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    if x > T::max_value().sqrt() {
        let lx = x.ln();
        for _ in 0..MAX_ITER {
            let g = w + w.ln() - lx;
            let dw = g / (one + one / w);
            w = w - dw;
            if dw.abs() <= eps * w.abs() {
                break;
            }
        }
        return Ok(w);
    }

    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + one;
        let denom = ew * wp1 - (w + two) * f / (two * wp1);
        let dw = f / denom;
        w = w - dw;
        if dw.abs() <= eps * w.abs() || f == T::zero() {
            break;
        }
    }
    Ok(w)
}
