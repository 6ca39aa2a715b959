//! Sinc collocation of the transformed radial problem.
//!
//! On the uniform mesh `t_k = kh`, `k = −N..N`, the transformed equation
//! becomes the generalized symmetric eigenproblem `H c = E D c` with
//! `D = diag(φ′(t_k)²)`. It is solved through the similarity
//! `D^{-1/2} H D^{-1/2}`.

mod eigen;
mod lambert;

pub use eigen::{symmetric_eigen, Matrix, SymmetricEigen};
pub use lambert::lambert_w;

use crate::error::{Error, Result};
use crate::maps::{ConformalMap, DecayProfile};
use crate::potential::ScaledPotential;
use crate::scalar::Real;

/// Second-derivative Sinc matrix entry `δ⁽²⁾_{jk}`.
pub fn delta2<T: Real>(j: i64, k: i64) -> T {
    if j == k {
        -T::PI() * T::PI() / T::lit(3.0)
    } else {
        let m = j - k;
        let sign = if m % 2 == 0 { -T::one() } else { T::one() };
        sign * T::lit(2.0) / T::lit((m * m) as f64)
    }
}

/// `sin(πz)`, exactly zero at the integers.
fn sin_pi<T: Real>(z: T) -> T {
    let two = T::lit(2.0);
    let r = z - two * (z / two).round();
    let half = T::lit(0.5);
    if r > half {
        (T::PI() * (T::one() - r)).sin()
    } else if r < -half {
        -(T::PI() * (T::one() + r)).sin()
    } else {
        (T::PI() * r).sin()
    }
}

/// Shifted Sinc basis function `S(j, h)(x) = sinc((x − jh)/h)`.
pub fn sinc_basis<T: Real>(j: i64, h: T, x: T) -> T {
    let z = x / h - T::lit(j as f64);
    if z == T::zero() {
        T::one()
    } else {
        sin_pi(z) / (T::PI() * z)
    }
}

/// Mesh size balancing truncation and discretization error:
/// `h = W(π d γ N / B) / (γ N)`.
pub fn mesh_size<T: Real>(half_width: usize, profile: &DecayProfile<T>) -> Result<T> {
    if half_width == 0 {
        return Err(Error::Parameter("the half-width N must be at least 1".into()));
    }
    let n = T::lit(half_width as f64);
    let arg = T::PI() * profile.d_strip * profile.gamma * n / profile.b;
    let h = lambert_w(arg)? / (profile.gamma * n);
    if !(h.is_finite() && h > T::zero()) {
        return Err(Error::Parameter(format!("degenerate mesh size {h}")));
    }
    Ok(h)
}

/// Assembled collocation matrices for one `(N, h)`.
#[derive(Debug, Clone)]
pub struct CollocationSystem<T> {
    pub half_width: usize,
    pub step: T,
    pub tau: T,
    /// Symmetric `(2N+1)²` matrix `−δ⁽²⁾/h² + diag(Ṽ(t_k))`, rows ordered by
    /// node `k = −N..N`.
    pub h: Matrix<T>,
    /// Diagonal of `D`, `φ′(t_k)²`.
    pub d: Vec<T>,
}

impl<T: Real> CollocationSystem<T> {
    pub fn size(&self) -> usize {
        self.d.len()
    }

    pub fn node(&self, index: usize) -> T {
        T::lit(index as f64 - self.half_width as f64) * self.step
    }

    /// Smallest admissible entry of `D`.
    fn d_floor() -> T {
        T::lit(1e-300).max(T::min_positive_value())
    }

    /// `1/φ′(t_k)`, checking that `D` is representable.
    fn inverse_sqrt_d(&self) -> Result<Vec<T>> {
        let floor = Self::d_floor();
        self.d
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if v.is_finite() && v >= floor {
                    Ok(T::one() / v.sqrt())
                } else {
                    Err(Error::Underflow { index: i, value: v.as_f64() })
                }
            })
            .collect()
    }

    /// `D^{-1/2} H D^{-1/2}`.
    pub fn reduced_matrix(&self) -> Result<Matrix<T>> {
        let s = self.inverse_sqrt_d()?;
        let n = self.size();
        let a = Matrix::from_fn(n, |i, j| self.h[(i, j)] * s[i] * s[j]);
        for i in 0..n {
            for j in 0..n {
                if !a[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(a)
    }
}

/// Builds `H` and `D` on the mesh dictated by `profile`.
pub fn assemble<T: Real>(
    potential: &ScaledPotential<T>,
    map: &ConformalMap<T>,
    half_width: usize,
    profile: &DecayProfile<T>,
) -> Result<CollocationSystem<T>> {
    let h = mesh_size(half_width, profile)?;
    let size = 2 * half_width + 1;
    let inv_h2 = T::one() / (h * h);
    let p = potential.as_potential();

    let mut diag = Vec::with_capacity(size);
    let mut d = Vec::with_capacity(size);
    for i in 0..size {
        let k = i as i64 - half_width as i64;
        let t = T::lit(k as f64) * h;
        let assembly = |_| Error::Assembly { node: k, t: t.as_f64() };
        let vt = map.transformed_potential(p, t).map_err(assembly)?;
        let dphi = map.eval(t).map_err(assembly)?.d1;
        diag.push(vt);
        d.push(dphi * dphi);
    }

    let mut m = Matrix::zeros(size);
    let d0 = -delta2::<T>(0, 0) * inv_h2;
    for i in 0..size {
        m[(i, i)] = d0 + diag[i];
        for j in 0..i {
            let v = -delta2::<T>(i as i64, j as i64) * inv_h2;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    for i in 0..size {
        if !m[(i, i)].is_finite() {
            return Err(Error::NonFinite { row: i, col: i });
        }
    }

    Ok(CollocationSystem { half_width, step: h, tau: potential.tau(), h: m, d })
}

/// How [`SpectrumResult::condition_number`] is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConditionMeasure {
    /// `max|λ| / min|λ|` of the reduced symmetric matrix.
    #[default]
    Reduced,
    /// `cond(H) · cond(D)`, an upper bound for the pencil.
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    pub condition: ConditionMeasure,
    /// Condition numbers above this are reported as
    /// [`Error::IllConditioned`].
    pub max_condition: Option<T>,
    pub eigenvectors: bool,
}

impl<T> Default for SolveOptions<T> {
    fn default() -> Self {
        Self { condition: ConditionMeasure::Reduced, max_condition: None, eigenvectors: false }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumResult<T> {
    /// Eigenvalues of the scaled problem, ascending.
    pub eigenvalues: Vec<T>,
    pub condition_number: T,
    pub half_width: usize,
    pub step: T,
    pub tau: T,
    /// Eigenvectors of the reduced matrix, one per column, node order.
    /// Coefficients of the Sinc expansion are `D^{-1/2}` times these.
    pub eigenvectors: Option<Matrix<T>>,
}

impl<T: Real> SpectrumResult<T> {
    /// Eigenvalues of the original (unscaled) potential.
    pub fn unscaled_eigenvalues(&self) -> Vec<T> {
        let t2 = self.tau * self.tau;
        self.eigenvalues.iter().map(|&e| e / t2).collect()
    }
}

fn spectral_condition<T: Real>(values: &[T]) -> T {
    let mut lo = T::infinity();
    let mut hi = T::zero();
    for v in values {
        lo = lo.min(v.abs());
        hi = hi.max(v.abs());
    }
    if lo == T::zero() {
        T::infinity()
    } else {
        hi / lo
    }
}

/// Reorders a node-ordered matrix so that node `k = +N` comes first and
/// `k = −N` last; the left tail, where `D` is tiniest, then sits in the
/// bottom-right corner.
fn reversed<T: Real>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.dim();
    Matrix::from_fn(n, |i, j| a[(n - 1 - i, n - 1 - j)])
}

/// Eigenvalues of the pencil `(H, D)`.
pub fn solve<T: Real>(system: &CollocationSystem<T>, options: &SolveOptions<T>) -> Result<SpectrumResult<T>> {
    let a = reversed(&system.reduced_matrix()?);
    let eig = symmetric_eigen(&a, options.eigenvectors)?;

    let condition_number = match options.condition {
        ConditionMeasure::Reduced => spectral_condition(&eig.values),
        ConditionMeasure::Product => {
            let h_values = symmetric_eigen(&reversed(&system.h), false)?.values;
            spectral_condition(&h_values) * spectral_condition(&system.d)
        }
    };
    if let Some(limit) = options.max_condition {
        if !(condition_number <= limit) {
            return Err(Error::IllConditioned {
                condition: condition_number.as_f64(),
                limit: limit.as_f64(),
            });
        }
    }

    let eigenvectors = eig.vectors.map(|v| {
        let n = v.dim();
        Matrix::from_fn(n, |i, j| v[(n - 1 - i, j)])
    });
    Ok(SpectrumResult {
        eigenvalues: eig.values,
        condition_number,
        half_width: system.half_width,
        step: system.step,
        tau: system.tau,
        eigenvectors,
    })
}
