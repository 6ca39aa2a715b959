//! Conformal maps from the real line onto `(0, ∞)` and the quantities derived
//! from them: the transformed potential `Ṽ` and the double-exponential decay
//! profile that fixes the collocation mesh.
//!
//! Both maps have the form `φ(t) = log(1 + e^{w(t)})` with an inner exponent
//! `w`: `sinh t` for [`ConformalMap::Simple`] and `a e^{bt} − c e^{−dt}` for
//! [`ConformalMap::Generalized`]. All evaluation goes through `w` and its
//! derivatives so that nothing overflows for `|t|` in the tens.

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::scalar::{logistic, softplus, Real};

/// Parameters `(a, b, c, d)` of `φ̃(t) = log(exp(a e^{bt} − c e^{−dt}) + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> MapParams<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Parameter(format!(
                    "map parameter {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { a, b, c, d })
    }
}

impl<T: Real> Default for MapParams<T> {
    /// `a = 1.05, b = 1.30, c = 1.20, d = 0.94`.
    fn default() -> Self {
        Self { a: T::lit(1.05), b: T::lit(1.30), c: T::lit(1.20), d: T::lit(0.94) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConformalMap<T> {
    /// `φ(t) = log(e^{sinh t} + 1)`
    Simple,
    /// `φ̃(t) = log(exp(a e^{bt} − c e^{−dt}) + 1)`
    Generalized(MapParams<T>),
}

impl<T: Real> Default for ConformalMap<T> {
    fn default() -> Self {
        ConformalMap::Generalized(MapParams::default())
    }
}

/// `φ` and its first three derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapDerivatives<T> {
    pub phi: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

/// Inner exponent `w(t)` with derivatives; `w1 > 0` everywhere.
#[derive(Debug, Clone, Copy)]
struct Exponent<T> {
    w: T,
    w1: T,
    w2: T,
    w3: T,
}

// Below this `e^w` is negligible against 1 in both f32 and f64.
const DEEP_LEFT: f64 = -30.0;

impl<T: Real> ConformalMap<T> {
    /// Parameters whose tails match the map: the simple map behaves like
    /// `e^t/2` on the right and `exp(−e^{−t}/2)` on the left, i.e. like the
    /// generalized map with `a = c = 1/2, b = d = 1`.
    pub fn tail_params(&self) -> MapParams<T> {
        match *self {
            ConformalMap::Simple => {
                let half = T::lit(0.5);
                MapParams { a: half, b: T::one(), c: half, d: T::one() }
            }
            ConformalMap::Generalized(p) => p,
        }
    }

    fn exponent(&self, t: T) -> Result<Exponent<T>> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("map argument must be finite, got {t}")));
        }
        Ok(match *self {
            ConformalMap::Simple => {
                let (s, c) = (t.sinh(), t.cosh());
                Exponent { w: s, w1: c, w2: s, w3: c }
            }
            ConformalMap::Generalized(MapParams { a, b, c, d }) => {
                let right = a * (b * t).exp();
                let left = c * (-d * t).exp();
                Exponent {
                    w: right - left,
                    w1: b * right + d * left,
                    w2: b * b * right - d * d * left,
                    w3: b * b * b * right + d * d * d * left,
                }
            }
        })
    }

    /// `φ(t), φ′(t), φ″(t), φ‴(t)`.
    pub fn eval(&self, t: T) -> Result<MapDerivatives<T>> {
        let Exponent { w, w1, w2, w3 } = self.exponent(t)?;
        let s = logistic(w);
        let sm = logistic(-w);
        let s1 = s * sm;
        let three = T::lit(3.0);
        Ok(MapDerivatives {
            phi: softplus(w),
            d1: s * w1,
            d2: s1 * w1 * w1 + s * w2,
            d3: s1 * (sm - s) * w1 * w1 * w1 + three * s1 * w1 * w2 + s * w3,
        })
    }

    /// `ln φ(t)`, finite even where `φ` itself underflows.
    pub fn ln_phi(&self, t: T) -> Result<T> {
        let w = self.exponent(t)?.w;
        if w < T::lit(DEEP_LEFT) {
            // log1p(e^w) = e^w (1 − e^w/2 + …)
            Ok(w - w.exp() / T::lit(2.0))
        } else {
            Ok(softplus(w).ln())
        }
    }

    /// `ln φ′(t)`, finite even where `φ′` underflows.
    pub fn ln_d1(&self, t: T) -> Result<T> {
        let e = self.exponent(t)?;
        Ok(-softplus(-e.w) + e.w1.ln())
    }

    /// The Eggert curvature term `(3/4)(φ″/φ′)² − φ‴/(2φ′)`, which equals
    /// `−√φ′ · d/dt((1/φ′) · d/dt √φ′)`.
    ///
    /// The ratios are formed in terms of `w` so the result stays finite when
    /// `φ′` underflows.
    pub fn curvature(&self, t: T) -> Result<T> {
        let Exponent { w, w1, w2, w3 } = self.exponent(t)?;
        let s = logistic(w);
        let sm = logistic(-w);
        let three = T::lit(3.0);
        let r2 = sm * w1 + w2 / w1;
        let r3 = sm * (sm - s) * w1 * w1 + three * sm * w2 + w3 / w1;
        Ok(T::lit(0.75) * r2 * r2 - r3 / T::lit(2.0))
    }

    /// `φ′(t)/φ(t)`.
    fn log_slope(&self, e: &Exponent<T>) -> T {
        let ratio = if e.w < T::lit(DEEP_LEFT) {
            // σ(w)/log1p(e^w) → 1 − e^w/2
            T::one() - e.w.exp() / T::lit(2.0)
        } else {
            logistic(e.w) / softplus(e.w)
        };
        ratio * e.w1
    }

    /// `Ṽ(t) = (3/4)(φ″/φ′)² − φ‴/(2φ′) + (φ′)² V(φ(t))`.
    pub fn transformed_potential(&self, p: &Potential<T>, t: T) -> Result<T> {
        let e = self.exponent(t)?;
        let q = self.log_slope(&e);
        // (φ′)² V(φ) = (φ′/φ)² · φ² V(φ), and φ² V(φ) → a₋₂ as φ → 0
        let value = self.curvature(t)? + q * q * p.evaluate_times_square(softplus(e.w));
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Domain(format!("transformed potential is not finite at t = {t}")))
        }
    }
}

/// How the right-tail decay rate of the transformed wavefunction is chosen.
///
/// With `φ ~ a e^{bt}` on the right, the WKB tail gives
/// `v ~ exp(−S a^{(n+2)/2} e^{b(n+2)t/2})` with `S = 2√aₙ/(n+2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateMode {
    /// `γ_R = b(n+2)/2`, `B_R = (√aₙ/(n+2)) a^{(n+2)/2}`. Reproduces the
    /// reference `V₁` convergence digits to about 1e-12.
    #[default]
    Tuned,
    /// `γ_R = b/2`, `B_R = S a^{(n+2)/2}`.
    Linear,
    /// `γ_R = b(n+2)/2`, `B_R = S a^{(n+2)/2}`.
    Carried,
}

/// Double-exponential envelope `|v(t)| ≤ A exp(−B e^{γ|t|})` of the
/// transformed wavefunction, per side, and the resulting strip half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayProfile<T> {
    pub gamma_left: T,
    pub b_left: T,
    pub gamma_right: T,
    pub b_right: T,
    pub gamma: T,
    /// Half-width `π/(2γ)` of the analyticity strip.
    pub d_strip: T,
    pub b: T,
}

impl<T: Real> DecayProfile<T> {
    /// Combines the two sides: `γ = max(γ_L, γ_R)` with the `B` of that side.
    /// On a tie the smaller `B` is kept.
    pub fn from_sides(gamma_left: T, b_left: T, gamma_right: T, b_right: T) -> Result<Self> {
        for (name, v) in [
            ("gamma_left", gamma_left),
            ("B_left", b_left),
            ("gamma_right", gamma_right),
            ("B_right", b_right),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Parameter(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let (gamma, b) = if gamma_left > gamma_right {
            (gamma_left, b_left)
        } else if gamma_right > gamma_left {
            (gamma_right, b_right)
        } else {
            (gamma_left, b_left.min(b_right))
        };
        Ok(Self {
            gamma_left,
            b_left,
            gamma_right,
            b_right,
            gamma,
            d_strip: T::PI() / (T::lit(2.0) * gamma),
            b,
        })
    }

    /// A symmetric profile with explicitly chosen `γ` and `B`.
    pub fn explicit(gamma: T, b: T) -> Result<Self> {
        Self::from_sides(gamma, b, gamma, b)
    }

    /// Replaces `γ` and/or `B` while keeping the rest of the profile.
    pub fn with_overrides(self, gamma: Option<T>, b: Option<T>) -> Result<Self> {
        match (gamma, b) {
            (None, None) => Ok(self),
            (g, b) => Self::explicit(g.unwrap_or(self.gamma), b.unwrap_or(self.b)),
        }
    }
}

/// Decay profile of the transformed wavefunction for `p` under `map`.
///
/// Left side: `γ_L = d`, `B_L = c·r` with `r` the Frobenius root, which
/// ignores the `√φ′` factor of the Eggert substitution. Right side per
/// [`RateMode`]. `p` should already be the dilated potential when a scaling
/// factor is in use.
pub fn decay_profile<T: Real>(
    map: &ConformalMap<T>,
    p: &Potential<T>,
    mode: RateMode,
) -> Result<DecayProfile<T>> {
    let MapParams { a, b, c, d } = map.tail_params();
    let asym = p.asymptotics();
    let right_b = asym.wkb_rate * a.powf(asym.wkb_power);
    let (gamma_right, b_right) = match mode {
        RateMode::Linear => (b / T::lit(2.0), right_b),
        RateMode::Carried => (b * asym.wkb_power, right_b),
        RateMode::Tuned => (b * asym.wkb_power, right_b / T::lit(2.0)),
    };
    DecayProfile::from_sides(d, c * asym.frobenius_root, gamma_right, b_right)
}
