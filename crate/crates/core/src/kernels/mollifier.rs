//! Short-distance mollifiers.
//!
//! Both variants are transparent at long wavelength (g̃(0) = 1) and carry a
//! single smearing length σ:
//!
//! * gaussian — g̃(k) = exp(−σ²k²/2), so conjugating a kernel multiplies its
//!   diagonal by exp(−σ²k²);
//! * biharmonic — g̃(k) = (1 + σ²k²)^(−1/2), the quasi-local regularization
//!   obtained by adding a −σ²∇⁴ term to the field equation.

use super::{FourierKernel, KernelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MollifierKind {
    Gaussian,
    Biharmonic,
}

impl std::fmt::Display for MollifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MollifierKind::Gaussian => write!(f, "gaussian"),
            MollifierKind::Biharmonic => write!(f, "biharmonic"),
        }
    }
}

impl std::str::FromStr for MollifierKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gaussian" => Ok(MollifierKind::Gaussian),
            "biharmonic" => Ok(MollifierKind::Biharmonic),
            other => Err(format!("unknown mollifier kind `{other}`")),
        }
    }
}

/// A smearing function g with g̃(k) ∈ (0, 1] and g̃(k) → 1 as k → 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    kind: MollifierKind,
    sigma: f64,
}

impl Mollifier {
    pub fn new(kind: MollifierKind, sigma: f64) -> Result<Self, KernelError> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(KernelError::InvalidGrid(format!(
                "smearing length must be positive, got {sigma}"
            )));
        }
        Ok(Mollifier { kind, sigma })
    }

    pub fn gaussian(sigma: f64) -> Result<Self, KernelError> {
        Self::new(MollifierKind::Gaussian, sigma)
    }

    pub fn biharmonic(sigma: f64) -> Result<Self, KernelError> {
        Self::new(MollifierKind::Biharmonic, sigma)
    }

    pub fn kind(&self) -> MollifierKind {
        self.kind
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// g̃(k).
    pub fn eval(&self, k: f64) -> f64 {
        assert!(k >= 0.0, "wave number must be non-negative");
        let x = self.sigma * k;
        match self.kind {
            MollifierKind::Gaussian => (-0.5 * x * x).exp(),
            MollifierKind::Biharmonic => 1.0 / (1.0 + x * x).sqrt(),
        }
    }

    /// g̃²(k), the factor a conjugation applies to a Fourier diagonal.
    pub fn squared(&self, k: f64) -> f64 {
        let x = self.sigma * k;
        match self.kind {
            MollifierKind::Gaussian => (-x * x).exp(),
            MollifierKind::Biharmonic => 1.0 / (1.0 + x * x),
        }
    }

    /// Sample g̃ on a grid so a mollifier can enter kernel products directly.
    pub fn as_kernel(&self, k: Vec<f64>) -> Result<FourierKernel, KernelError> {
        FourierKernel::from_fn(k, |ki| self.eval(ki))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_is_normalized_at_zero() {
        let g = Mollifier::gaussian(1.0).unwrap();
        assert_eq!(g.eval(0.0), 1.0);
    }

    #[test]
    fn biharmonic_value() {
        let g = Mollifier::biharmonic(1.0).unwrap();
        assert_relative_eq!(g.eval(1.0), 1.0 / 2.0_f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn gaussian_width_two() {
        let g = Mollifier::gaussian(2.0).unwrap();
        assert_relative_eq!(g.eval(1.0), (-2.0_f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn rejects_nonpositive_sigma() {
        assert!(Mollifier::gaussian(0.0).is_err());
        assert!(Mollifier::biharmonic(-1.0).is_err());
    }

    #[test]
    fn values_stay_in_unit_interval() {
        for kind in [MollifierKind::Gaussian, MollifierKind::Biharmonic] {
            let g = Mollifier::new(kind, 0.7).unwrap();
            for i in 0..200 {
                let k = 1e-3 * (1.1_f64).powi(i);
                let v = g.eval(k);
                assert!(v <= 1.0 && v >= 0.0, "g̃ out of range at k = {k}");
            }
        }
    }
}
