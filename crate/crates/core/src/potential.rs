//! Anharmonic Coulombic potentials `V(x) = Σ a_j x^j`, `j ∈ [-2, n]`.
//!
//! A [`Potential`] stores its nonzero coefficients sparsely by power. The
//! dilation `x = τy` is represented by [`ScaledPotential`], whose coefficients
//! are `τ^{j+2} a_j`; eigenvalues of the dilated problem map back through
//! [`unscale_eigenvalue`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MIN_POWER: i32 = -2;

#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    // ascending by power, coefficients nonzero
    terms: Vec<(i32, T)>,
}

impl<T: Real> Potential<T> {
    /// Builds a potential from `(power, coefficient)` pairs.
    ///
    /// Zero coefficients are dropped. Rejected: powers below −2, repeated
    /// powers, a nonzero constant term, a negative `a₋₂`, a highest power
    /// below 1 or with a non-positive coefficient, and non-finite values.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i32, T)>,
    {
        let mut terms: Vec<(i32, T)> = Vec::new();
        for (power, coeff) in pairs {
            if !coeff.is_finite() {
                return Err(Error::InvalidPotential(format!(
                    "coefficient of x^{power} is not finite"
                )));
            }
            if power < MIN_POWER {
                return Err(Error::InvalidPotential(format!(
                    "power {power} is below the lowest admissible power {MIN_POWER}"
                )));
            }
            if terms.iter().any(|&(p, _)| p == power) {
                return Err(Error::InvalidPotential(format!(
                    "power {power} appears more than once"
                )));
            }
            if power == 0 && coeff != T::zero() {
                return Err(Error::InvalidPotential(format!(
                    "constant term must be zero, got {coeff}"
                )));
            }
            terms.push((power, coeff));
        }
        // keep duplicate detection above independent of zero filtering
        terms.retain(|&(_, c)| c != T::zero());
        terms.sort_by_key(|&(p, _)| p);

        let &(degree, leading) = terms
            .last()
            .ok_or_else(|| Error::InvalidPotential("no nonzero coefficients".into()))?;
        if degree < 1 {
            return Err(Error::InvalidPotential(format!(
                "highest power must be at least 1, got {degree}"
            )));
        }
        if leading <= T::zero() {
            return Err(Error::InvalidPotential(format!(
                "leading coefficient a_{degree} must be positive, got {leading}"
            )));
        }
        let inverse_square = terms
            .iter()
            .find(|&&(p, _)| p == MIN_POWER)
            .map_or(T::zero(), |&(_, c)| c);
        if inverse_square < T::zero() {
            return Err(Error::InvalidPotential(format!(
                "a_-2 must be non-negative, got {inverse_square}"
            )));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(i32, T)] {
        &self.terms
    }

    /// Highest power `n`.
    pub fn degree(&self) -> i32 {
        self.terms.last().map(|&(p, _)| p).unwrap_or(0)
    }

    pub fn leading_coefficient(&self) -> T {
        self.terms.last().map(|&(_, c)| c).unwrap_or_else(T::zero)
    }

    pub fn coefficient(&self, power: i32) -> T {
        self.terms
            .iter()
            .find(|&&(p, _)| p == power)
            .map_or(T::zero(), |&(_, c)| c)
    }

    /// `V(x)` for `x > 0`.
    pub fn evaluate(&self, x: T) -> Result<T> {
        if !(x > T::zero()) || !x.is_finite() {
            return Err(Error::Domain(format!(
                "potential is singular at x = {x}; require 0 < x < ∞"
            )));
        }
        Ok(self.terms.iter().map(|&(p, c)| c * x.powi(p)).fold(T::zero(), |s, v| s + v))
    }

    /// `x² V(x) = Σ a_j x^{j+2}`, which stays finite as `x → 0⁺`.
    pub(crate) fn evaluate_times_square(&self, x: T) -> T {
        self.terms
            .iter()
            .map(|&(p, c)| c * x.powi(p + 2))
            .fold(T::zero(), |s, v| s + v)
    }

    /// Dilates the domain by `x = τy`: coefficient `a_j` becomes `τ^{j+2} a_j`.
    pub fn scale(&self, tau: T) -> Result<ScaledPotential<T>> {
        check_tau(tau)?;
        let scaled = Potential {
            terms: self.terms.iter().map(|&(p, c)| (p, tau.powi(p + 2) * c)).collect(),
        };
        Ok(ScaledPotential { base: self.clone(), tau, scaled })
    }

    pub fn asymptotics(&self) -> AsymptoticData<T> {
        AsymptoticData::of(self)
    }
}

impl<T: Real> fmt::Display for Potential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if c < T::zero() { " - " } else { " + " })?;
            } else if c < T::zero() {
                f.write_str("-")?;
            }
            write!(f, "{}", c.abs())?;
            match p {
                1 => f.write_str("·x")?,
                p => write!(f, "·x^{p}")?,
            }
        }
        Ok(())
    }
}

fn check_tau<T: Real>(tau: T) -> Result<()> {
    if !(tau > T::zero()) || !tau.is_finite() {
        return Err(Error::Parameter(format!("scaling factor must be positive and finite, got {tau}")));
    }
    Ok(())
}

/// A potential after the dilation `x = τy`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPotential<T> {
    base: Potential<T>,
    tau: T,
    scaled: Potential<T>,
}

impl<T: Real> ScaledPotential<T> {
    pub fn base(&self) -> &Potential<T> {
        &self.base
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// The dilated potential `Σ τ^{j+2} a_j y^j` as an ordinary potential.
    pub fn as_potential(&self) -> &Potential<T> {
        &self.scaled
    }

    pub fn unscale_eigenvalue(&self, scaled_eigenvalue: T) -> T {
        scaled_eigenvalue / (self.tau * self.tau)
    }
}

/// Maps an eigenvalue of the dilated problem back to the original: `E = Ẽ/τ²`.
pub fn unscale_eigenvalue<T: Real>(scaled_eigenvalue: T, tau: T) -> Result<T> {
    check_tau(tau)?;
    Ok(scaled_eigenvalue / (tau * tau))
}

/// Boundary behaviour of the radial wavefunction.
///
/// Near the origin `ψ ~ x^r` with `r` the larger root of `−r(r−1) + a₋₂ = 0`;
/// at infinity `ψ ~ x^{−n/4} exp(−wkb_rate · x^{wkb_power})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticData<T> {
    pub frobenius_root: T,
    pub wkb_rate: T,
    pub wkb_power: T,
    pub wkb_prefactor_power: T,
}

impl<T: Real> AsymptoticData<T> {
    fn of(p: &Potential<T>) -> Self {
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        let a_minus2 = p.coefficient(MIN_POWER);
        let n = T::from_i32(p.degree()).expect("degree fits the scalar type");
        Self {
            frobenius_root: (T::one() + (T::one() + four * a_minus2).sqrt()) / two,
            wkb_rate: two * p.leading_coefficient().sqrt() / (n + two),
            wkb_power: (n + two) / two,
            wkb_prefactor_power: -n / four,
        }
    }
}

/// The six benchmark potentials with closed-form ground states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinPotential {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
}

impl BuiltinPotential {
    pub const ALL: [BuiltinPotential; 6] = [
        BuiltinPotential::V1,
        BuiltinPotential::V2,
        BuiltinPotential::V3,
        BuiltinPotential::V4,
        BuiltinPotential::V5,
        BuiltinPotential::V6,
    ];

    pub fn coefficients(self) -> &'static [(i32, f64)] {
        use BuiltinPotential::*;
        match self {
            V1 => &[(-2, 2.0), (-1, -16.0), (1, 2.0), (2, 1.0 / 16.0)],
            V2 => &[(-2, 6.0), (-1, -24.0), (1, 2.0), (2, 1.0 / 16.0)],
            V3 => &[(-2, 15.0 / 4.0), (-1, -20.0), (1, 2.0), (2, 1.0 / 16.0)],
            V4 => &[(-2, 35.0 / 4.0), (-1, -28.0), (1, 2.0), (2, 1.0 / 16.0)],
            V5 => &[(-2, 2.0), (2, 1.0)],
            V6 => &[(-2, 3.0 / 4.0), (2, 1.0)],
        }
    }

    pub fn potential<T: Real>(self) -> Potential<T> {
        Potential::new(self.coefficients().iter().map(|&(p, c)| (p, T::lit(c))))
            .expect("builtin potentials are valid")
    }

    pub fn exact_ground_state(self) -> f64 {
        use BuiltinPotential::*;
        match self {
            V1 => -59.0 / 4.0,
            V2 => -57.0 / 4.0,
            V3 => -58.0 / 4.0,
            V4 => -14.0,
            V5 => 5.0,
            V6 => 4.0,
        }
    }
}

impl fmt::Display for BuiltinPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for BuiltinPotential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinPotential::ALL
            .into_iter()
            .find(|v| v.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parameter(format!("unknown builtin potential `{s}` (expected V1..V6)")))
    }
}
