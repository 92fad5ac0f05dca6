//! Calculus of isotropic translation-invariant kernels in radial Fourier
//! representation.
//!
//! A kernel h(x, y) = h(|x - y|) on three-dimensional space is represented by
//! samples of its radial Fourier transform h̃(k) on a strictly increasing
//! wave-number grid.  Because every kernel handled here is translation
//! invariant, the ⊙-product of two kernels,
//!
//! ```text
//! (h1 ⊙ h2)(x, y) = ∫ dr h1(x, r) h2(r, y)
//! ```
//!
//! becomes a pointwise product of Fourier diagonals, operator inversion
//! becomes a pointwise reciprocal, and conjugation by a mollifier g becomes
//! multiplication by g̃².  Real-space values are recovered by the inverse
//! radial transform in [`transform`].

mod csv;
mod mollifier;
pub mod transform;

pub use csv::KernelMeta;
pub use mollifier::{Mollifier, MollifierKind};
pub use transform::TransformOptions;

use thiserror::Error;

/// Minimum number of grid points accepted for a [`FourierKernel`].
pub const MIN_GRID_POINTS: usize = 64;

/// Default number of points for [`default_grid`].
pub const DEFAULT_GRID_POINTS: usize = 512;

/// Default relative floor used by [`FourierKernel::inverse`].
pub const DEFAULT_INVERSE_FLOOR: f64 = 1e-12;

/// Errors from kernel construction and algebra.
#[derive(Debug, Error)]
pub enum KernelError {
    #[error("gravitational constant must be positive, got {0}")]
    NonPositiveG(f64),
    #[error("invalid wave-number grid: {0}")]
    InvalidGrid(String),
    #[error("kernel values must be finite (value {value} at k = {k})")]
    NonFiniteValue { k: f64, value: f64 },
    #[error("kernels live on different wave-number grids")]
    GridMismatch,
    #[error("operation requires a sign-definite kernel, got a mixed-sign one")]
    MixedSign,
    #[error("reciprocal overflow: {count} grid entries lie at zero with flooring disabled")]
    ReciprocalOverflow { count: usize },
    #[error("radial transform diverges: {0}")]
    DivergentIntegral(String),
    #[error("radial transform did not reach the requested tolerance (residual {residual:.3e})")]
    IntegralDidNotConverge { residual: f64 },
    #[error("kernel CSV is malformed: {0}")]
    MalformedCsv(String),
}

/// Sign-definiteness of the sampled Fourier diagonal.
///
/// `Positive` means every sample is ≥ 0, `Negative` every sample ≤ 0,
/// `Indefinite` that both signs occur.  The flag is derived from the samples
/// on construction, so it can never disagree with them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
    Indefinite,
}

impl Definiteness {
    fn of(values: &[f64]) -> Self {
        let any_pos = values.iter().any(|&v| v > 0.0);
        let any_neg = values.iter().any(|&v| v < 0.0);
        match (any_pos, any_neg) {
            (true, true) => Definiteness::Indefinite,
            (false, true) => Definiteness::Negative,
            _ => Definiteness::Positive,
        }
    }

    /// Sign propagation under pointwise products.
    fn product(self, other: Self) -> Self {
        use Definiteness::*;
        match (self, other) {
            (Positive, Positive) | (Negative, Negative) => Positive,
            (Positive, Negative) | (Negative, Positive) => Negative,
            _ => Indefinite,
        }
    }

    pub fn is_definite(self) -> bool {
        self != Definiteness::Indefinite
    }
}

impl std::fmt::Display for Definiteness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Definiteness::Positive => write!(f, "positive"),
            Definiteness::Negative => write!(f, "negative"),
            Definiteness::Indefinite => write!(f, "indefinite"),
        }
    }
}

/// An isotropic translation-invariant kernel stored as samples of its radial
/// Fourier transform.
///
/// Off-grid wave numbers are reached by log-log interpolation (power-law
/// segments), which is exact for pure power-law kernels such as the Newtonian
/// pair potential.  Below the first and above the last grid point the kernel
/// is extrapolated by the power law fitted to the outermost two samples; a
/// kernel whose last sample is zero (for instance a Gaussian-regularized one
/// that underflowed) is treated as compactly supported.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierKernel {
    k: Vec<f64>,
    values: Vec<f64>,
    definiteness: Definiteness,
}

/// Power-law model `coeff * k^exponent` used for extrapolation beyond the grid.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PowerLaw {
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerLaw {
    pub fn eval(&self, k: f64) -> f64 {
        if self.coeff == 0.0 {
            0.0
        } else {
            self.coeff * k.powf(self.exponent)
        }
    }

    fn fit(k0: f64, v0: f64, k1: f64, v1: f64) -> Self {
        if v0 != 0.0 && v1 != 0.0 && (v0 > 0.0) == (v1 > 0.0) {
            let exponent = (v1 / v0).abs().ln() / (k1 / k0).ln();
            let coeff = v0 / k0.powf(exponent);
            PowerLaw { coeff, exponent }
        } else if v0 != 0.0 && v1 == 0.0 {
            // Receding into an underflowed region: treat as compactly supported.
            PowerLaw { coeff: 0.0, exponent: 0.0 }
        } else {
            // No usable power law; fall back to a constant.
            PowerLaw { coeff: v0, exponent: 0.0 }
        }
    }
}

/// Build a logarithmic wave-number grid with `n` points spanning
/// `[k_min, k_max]`, endpoints included.
pub fn log_grid(k_min: f64, k_max: f64, n: usize) -> Result<Vec<f64>, KernelError> {
    if !(k_min.is_finite() && k_max.is_finite()) || k_min <= 0.0 || k_max <= k_min {
        return Err(KernelError::InvalidGrid(format!(
            "need 0 < k_min < k_max, got [{k_min}, {k_max}]"
        )));
    }
    if n < MIN_GRID_POINTS {
        return Err(KernelError::InvalidGrid(format!(
            "need at least {MIN_GRID_POINTS} points, got {n}"
        )));
    }
    let ratio = (k_max / k_min).ln();
    let mut grid: Vec<f64> = (0..n)
        .map(|i| k_min * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect();
    grid[n - 1] = k_max;
    Ok(grid)
}

/// The default grid for a problem whose smallest active smearing length is
/// `sigma_ref`: 512 points covering `[1e-3/σ, 1e3/σ]`, which resolves both the
/// 1/k² infrared growth of the pair potential and the mollifier cutoff.
pub fn default_grid(sigma_ref: f64) -> Result<Vec<f64>, KernelError> {
    log_grid(1e-3 / sigma_ref, 1e3 / sigma_ref, DEFAULT_GRID_POINTS)
}

impl FourierKernel {
    /// Build a kernel from a wave-number grid and matching samples.
    pub fn new(k: Vec<f64>, values: Vec<f64>) -> Result<Self, KernelError> {
        if k.len() < MIN_GRID_POINTS {
            return Err(KernelError::InvalidGrid(format!(
                "need at least {MIN_GRID_POINTS} grid points, got {}",
                k.len()
            )));
        }
        if k.len() != values.len() {
            return Err(KernelError::InvalidGrid(format!(
                "grid has {} points but {} values were supplied",
                k.len(),
                values.len()
            )));
        }
        if !k[0].is_finite() || k[0] <= 0.0 {
            return Err(KernelError::InvalidGrid(format!(
                "wave numbers must be strictly positive, first is {}",
                k[0]
            )));
        }
        for w in k.windows(2) {
            if !w[1].is_finite() || w[1] <= w[0] {
                return Err(KernelError::InvalidGrid(format!(
                    "grid must be strictly increasing, found {} after {}",
                    w[1], w[0]
                )));
            }
        }
        for (&ki, &v) in k.iter().zip(values.iter()) {
            if !v.is_finite() {
                return Err(KernelError::NonFiniteValue { k: ki, value: v });
            }
        }
        let definiteness = Definiteness::of(&values);
        Ok(FourierKernel { k, values, definiteness })
    }

    /// Sample a closure on a grid.
    pub fn from_fn(k: Vec<f64>, f: impl Fn(f64) -> f64) -> Result<Self, KernelError> {
        let values = k.iter().map(|&ki| f(ki)).collect();
        Self::new(k, values)
    }

    /// The Newtonian pair potential 𝒱̃(k) = −4πG/k², the Green function of
    /// ∇²Φ = 4πGμ.  Negative definite; singular at k = 0, which the grid
    /// invariant already excludes.
    pub fn newtonian(g: f64, k: Vec<f64>) -> Result<Self, KernelError> {
        if !g.is_finite() || g <= 0.0 {
            return Err(KernelError::NonPositiveG(g));
        }
        Self::from_fn(k, |ki| -4.0 * std::f64::consts::PI * g / (ki * ki))
    }

    /// A constant Fourier diagonal, i.e. a multiple of the Dirac kernel.
    pub fn constant(c: f64, k: Vec<f64>) -> Result<Self, KernelError> {
        Self::from_fn(k, |_| c)
    }

    pub fn k_grid(&self) -> &[f64] {
        &self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn definiteness(&self) -> Definiteness {
        self.definiteness
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Evaluate the kernel at an arbitrary wave number `k > 0` using the
    /// interpolation rule (log-log inside the grid, power law outside).
    pub fn value_at(&self, k: f64) -> f64 {
        assert!(k > 0.0 && k.is_finite(), "wave number must be positive and finite");
        let n = self.k.len();
        if k <= self.k[0] {
            if k == self.k[0] {
                return self.values[0];
            }
            return self.head_law().eval(k);
        }
        if k >= self.k[n - 1] {
            if k == self.k[n - 1] {
                return self.values[n - 1];
            }
            return self.tail_law().eval(k);
        }
        let j = match self.k.binary_search_by(|x| x.partial_cmp(&k).unwrap()) {
            Ok(i) => return self.values[i],
            Err(i) => i,
        };
        let (k0, k1) = (self.k[j - 1], self.k[j]);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        interp_segment(k0, v0, k1, v1, k)
    }

    pub(crate) fn head_law(&self) -> PowerLaw {
        PowerLaw::fit(self.k[0], self.values[0], self.k[1], self.values[1])
    }

    pub(crate) fn tail_law(&self) -> PowerLaw {
        let n = self.k.len();
        let (k0, v0) = (self.k[n - 2], self.values[n - 2]);
        let (k1, v1) = (self.k[n - 1], self.values[n - 1]);
        if v1 == 0.0 {
            return PowerLaw { coeff: 0.0, exponent: 0.0 };
        }
        PowerLaw::fit(k0, v0, k1, v1)
    }

    /// Pointwise ⊙-product of Fourier diagonals.  Both kernels must live on
    /// the identical grid; resample first if they do not.
    pub fn product(&self, other: &FourierKernel) -> Result<FourierKernel, KernelError> {
        if self.k != other.k {
            return Err(KernelError::GridMismatch);
        }
        let values: Vec<f64> = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b)
            .collect();
        let definiteness = self.definiteness.product(other.definiteness);
        Ok(FourierKernel { k: self.k.clone(), values, definiteness })
    }

    /// Resample onto another grid through the interpolation rule.
    pub fn resample(&self, k: Vec<f64>) -> Result<FourierKernel, KernelError> {
        let values = k.iter().map(|&ki| self.value_at(ki)).collect();
        FourierKernel::new(k, values)
    }

    /// Pointwise reciprocal of a sign-definite kernel — the precision kernel
    /// when applied to a monitoring strength γ.
    ///
    /// Entries whose magnitude falls below `floor_rel · max|h̃|` are excluded
    /// from inversion and set to zero in the result (the pseudo-inverse
    /// convention, matching the lattice-side eigenvalue flooring) rather than
    /// inverted into huge numbers.  With `floor_rel = 0` a zero entry is a
    /// [`KernelError::ReciprocalOverflow`].
    pub fn inverse(&self, floor_rel: f64) -> Result<FourierKernel, KernelError> {
        if !self.definiteness.is_definite() {
            return Err(KernelError::MixedSign);
        }
        let cut = floor_rel * self.max_abs();
        let zeros = self.values.iter().filter(|v| v.abs() <= cut).count();
        if cut == 0.0 && zeros > 0 {
            return Err(KernelError::ReciprocalOverflow { count: zeros });
        }
        let values: Vec<f64> = self
            .values
            .iter()
            .map(|&v| if v.abs() <= cut { 0.0 } else { 1.0 / v })
            .collect();
        let definiteness = Definiteness::of(&values);
        Ok(FourierKernel { k: self.k.clone(), values, definiteness })
    }

    /// Conjugation by a mollifier: h → g ⊙ h ⊙ g, i.e. h̃(k) → g̃²(k) h̃(k).
    pub fn conjugate(&self, m: &Mollifier) -> FourierKernel {
        let values: Vec<f64> = self
            .k
            .iter()
            .zip(self.values.iter())
            .map(|(&ki, &v)| m.squared(ki) * v)
            .collect();
        let definiteness = Definiteness::of(&values);
        FourierKernel { k: self.k.clone(), values, definiteness }
    }

    /// Multiply every sample by a constant.
    pub fn scale(&self, c: f64) -> FourierKernel {
        let values: Vec<f64> = self.values.iter().map(|v| c * v).collect();
        let definiteness = Definiteness::of(&values);
        FourierKernel { k: self.k.clone(), values, definiteness }
    }

    /// Pointwise absolute value.
    pub fn abs(&self) -> FourierKernel {
        let values: Vec<f64> = self.values.iter().map(|v| v.abs()).collect();
        FourierKernel { k: self.k.clone(), values, definiteness: Definiteness::Positive }
    }

    /// Inverse radial Fourier transform at radius `r`, with default options.
    ///
    /// For r > 0 this is f(r) = (1/2π²r) ∫₀^∞ k f̃(k) sin(kr) dk; at r = 0 it
    /// degenerates to (1/2π²) ∫₀^∞ k² f̃(k) dk, which only converges for
    /// regularized kernels.  A divergent integral is reported as
    /// [`KernelError::DivergentIntegral`], never as a large number.
    pub fn to_real_space(&self, r: f64) -> Result<f64, KernelError> {
        transform::to_real_space(self, r, &TransformOptions::default())
    }

    pub fn to_real_space_with(&self, r: f64, opts: &TransformOptions) -> Result<f64, KernelError> {
        transform::to_real_space(self, r, opts)
    }
}

/// Interpolate one grid segment.  Same-sign endpoints use a power-law (log-log
/// linear) segment; anything touching zero or changing sign falls back to a
/// linear segment in ln k.
fn interp_segment(k0: f64, v0: f64, k1: f64, v1: f64, k: f64) -> f64 {
    if v0 != 0.0 && v1 != 0.0 && (v0 > 0.0) == (v1 > 0.0) {
        let t = (k / k0).ln() / (k1 / k0).ln();
        let sign = v0.signum();
        sign * ((1.0 - t) * v0.abs().ln() + t * v1.abs().ln()).exp()
    } else {
        let t = (k / k0).ln() / (k1 / k0).ln();
        v0 + (v1 - v0) * t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn grid() -> Vec<f64> {
        default_grid(1.0).unwrap()
    }

    #[test]
    fn newtonian_values_match_green_function() {
        let grid = log_grid(0.25, 4.0, 64).unwrap();
        let v = FourierKernel::newtonian(1.0, grid).unwrap();
        assert_relative_eq!(v.value_at(1.0), -4.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(v.value_at(2.0), -PI, max_relative = 1e-14);
        assert_eq!(v.definiteness(), Definiteness::Negative);
    }

    #[test]
    fn newtonian_rejects_nonpositive_g() {
        let g = grid();
        assert!(matches!(
            FourierKernel::newtonian(0.0, g.clone()),
            Err(KernelError::NonPositiveG(_))
        ));
        assert!(matches!(FourierKernel::newtonian(-1.0, g), Err(KernelError::NonPositiveG(_))));
    }

    #[test]
    fn grid_rejects_zero_wave_number() {
        let mut k = grid();
        k[0] = 0.0;
        let values = vec![1.0; k.len()];
        assert!(FourierKernel::new(k, values).is_err());
    }

    #[test]
    fn interpolation_is_exact_on_power_laws() {
        let v = FourierKernel::newtonian(2.0, grid()).unwrap();
        // Off-grid points of a pure power law are reproduced exactly.
        for &k in &[1.7e-3, 0.031, 0.99, 7.3, 431.0] {
            assert_relative_eq!(v.value_at(k), -8.0 * PI / (k * k), max_relative = 1e-13);
        }
        // Extrapolation continues the same power law.
        assert_relative_eq!(v.value_at(5e-4), -8.0 * PI / 25e-8, max_relative = 1e-12);
        assert_relative_eq!(v.value_at(4e3), -8.0 * PI / 16e6, max_relative = 1e-12);
    }

    #[test]
    fn product_squares_the_newtonian_kernel() {
        let v = FourierKernel::newtonian(1.0, grid()).unwrap();
        let vv = v.product(&v).unwrap();
        assert_relative_eq!(vv.value_at(1.0), (4.0 * PI).powi(2), max_relative = 1e-13);
        assert_eq!(vv.definiteness(), Definiteness::Positive);
    }

    #[test]
    fn product_with_identity_is_identity() {
        let v = FourierKernel::newtonian(1.0, grid()).unwrap();
        let one = FourierKernel::constant(1.0, grid()).unwrap();
        let p = v.product(&one).unwrap();
        assert_eq!(p.values(), v.values());
    }

    #[test]
    fn product_requires_matching_grids() {
        let v = FourierKernel::newtonian(1.0, grid()).unwrap();
        let other = FourierKernel::newtonian(1.0, log_grid(1e-2, 1e2, 128).unwrap()).unwrap();
        assert!(matches!(v.product(&other), Err(KernelError::GridMismatch)));
        // Resampling onto a common grid recovers the product.
        let resampled = other.resample(grid()).unwrap();
        assert!(v.product(&resampled).is_ok());
    }

    #[test]
    fn conjugated_product_expands_by_hand() {
        // (g ⊙ 𝒱 ⊙ g)̃(1) = g̃²(1) 𝒱̃(1) = e^{-1} · (-4π) under the
        // g̃(k) = exp(-σ²k²/2) convention with σ = 1.
        let v = FourierKernel::newtonian(1.0, grid()).unwrap();
        let g = Mollifier::gaussian(1.0).unwrap();
        let gk = g.as_kernel(grid().to_vec()).unwrap();
        let via_products = gk.product(&v).unwrap().product(&gk).unwrap();
        let via_conjugate = v.conjugate(&g);
        assert_relative_eq!(
            via_conjugate.value_at(1.0),
            -4.0 * PI * (-1.0_f64).exp(),
            max_relative = 1e-12
        );
        // conjugate(h, g) must agree with g ⊙ h ⊙ g exactly.
        for (a, b) in via_products.values().iter().zip(via_conjugate.values().iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-15, epsilon = 1e-300);
        }
    }

    #[test]
    fn inverse_of_constant_two_is_half() {
        let h = FourierKernel::constant(2.0, grid()).unwrap();
        let inv = h.inverse(DEFAULT_INVERSE_FLOOR).unwrap();
        assert!(inv.values().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn inverse_is_an_involution_on_definite_kernels() {
        let v = FourierKernel::newtonian(1.0, grid()).unwrap();
        let back = v.inverse(0.0).unwrap().inverse(0.0).unwrap();
        for (a, b) in back.values().iter().zip(v.values().iter()) {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
        assert_eq!(back.definiteness(), Definiteness::Negative);
    }

    #[test]
    fn inverse_rejects_mixed_sign() {
        let k = grid();
        let values: Vec<f64> = k.iter().map(|&ki| if ki < 1.0 { -1.0 } else { 1.0 }).collect();
        let h = FourierKernel::new(k, values).unwrap();
        assert!(matches!(h.inverse(1e-12), Err(KernelError::MixedSign)));
    }

    #[test]
    fn inverse_floors_small_entries_to_zero() {
        let k = grid();
        let n = k.len();
        let mut values = vec![1.0; n];
        values[10] = 1e-300;
        let h = FourierKernel::new(k, values).unwrap();
        let inv = h.inverse(1e-12).unwrap();
        assert_eq!(inv.values()[10], 0.0);
        assert_eq!(inv.values()[0], 1.0);
        // With flooring disabled a hard zero is an overflow error.
        let k = grid();
        let mut values = vec![1.0; n];
        values[3] = 0.0;
        let h = FourierKernel::new(k, values).unwrap();
        assert!(matches!(h.inverse(0.0), Err(KernelError::ReciprocalOverflow { count: 1 })));
    }

    #[test]
    fn sandwich_simplifies_symbolically() {
        // 𝒱 ⊙ γ⁻¹ ⊙ 𝒱 with γ = -2𝒱 equals -𝒱/2, i.e. +2π at G = 1, k = 1.
        let v = FourierKernel::newtonian(1.0, grid()).unwrap();
        let gamma = v.scale(-2.0);
        let sandwich = v.product(&gamma.inverse(0.0).unwrap()).unwrap().product(&v).unwrap();
        assert_relative_eq!(sandwich.value_at(1.0), 2.0 * PI, max_relative = 1e-12);
        for (s, vv) in sandwich.values().iter().zip(v.values().iter()) {
            assert_relative_eq!(s, &(-vv / 2.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn definiteness_propagates_through_products() {
        let v = FourierKernel::newtonian(1.0, grid()).unwrap();
        let g = Mollifier::gaussian(0.5).unwrap();
        assert_eq!(v.product(&v).unwrap().definiteness(), Definiteness::Positive);
        assert_eq!(v.conjugate(&g).definiteness(), Definiteness::Negative);
        assert_eq!(v.scale(-1.0).definiteness(), Definiteness::Positive);
    }
}
