//! Inverse radial Fourier transforms of sampled kernels.
//!
//! For an isotropic kernel with radial Fourier samples f̃(k), the real-space
//! profile is
//!
//! ```text
//! f(r) = (1 / 2π²r) ∫₀^∞ k f̃(k) sin(kr) dk,          r > 0
//! f(0) = (1 / 2π²)  ∫₀^∞ k² f̃(k) dk.
//! ```
//!
//! The integrand is oscillatory with algebraic decay, so the r > 0 integral
//! is evaluated as a sum over half-periods of sin(kr) (each half-period
//! integrated by Gauss–Legendre panels split at the grid points, where the
//! interpolant has kinks), and the alternating partial sums are accelerated
//! with Wynn's epsilon algorithm.  The head below the first panel boundary is
//! handled by dyadic refinement towards k = 0, where the integrand is a plain
//! power law.  Tails beyond the grid follow the kernel's power-law
//! extrapolation; a tail that cannot decay fast enough is reported as a
//! divergent integral.

use super::{FourierKernel, KernelError};
use std::sync::OnceLock;

/// Tuning knobs for the radial quadrature.
#[derive(Debug, Clone, Copy)]
pub struct TransformOptions {
    /// Target relative tolerance of the returned value.
    pub rel_tol: f64,
    /// Hard cap on the number of half-period panels.
    pub max_panels: usize,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions { rel_tol: 1e-9, max_panels: 4096 }
    }
}

/// Weight entering [`weighted_moment`]: a smooth bounded function w(k) whose
/// oscillations have wavelength no shorter than π / `osc_scale`.
pub struct MomentWeight<'a> {
    pub eval: &'a dyn Fn(f64) -> f64,
    /// Largest length scale of the weight's oscillations (0 for smooth weights).
    pub osc_scale: f64,
    /// lim_{k→∞} w(k), used for the analytic tail of the integral.
    pub tail_limit: f64,
    /// Bound B with |w(k) − tail_limit| ≤ B/k beyond the grid.
    pub tail_osc_bound: f64,
}

/// Inverse radial transform at radius `r ≥ 0`.
pub fn to_real_space(
    kernel: &FourierKernel,
    r: f64,
    opts: &TransformOptions,
) -> Result<f64, KernelError> {
    assert!(r.is_finite() && r >= 0.0, "radius must be finite and non-negative");
    let two_pi_sq = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
    if r == 0.0 {
        let unit = |_: f64| 1.0;
        let w = MomentWeight { eval: &unit, osc_scale: 0.0, tail_limit: 1.0, tail_osc_bound: 0.0 };
        Ok(weighted_moment(kernel, &w, opts)? / two_pi_sq)
    } else {
        Ok(sine_integral(kernel, r, opts)? / (two_pi_sq * r))
    }
}

/// ∫₀^∞ k f̃(k) sin(kr) dk for r > 0.
pub fn sine_integral(
    kernel: &FourierKernel,
    r: f64,
    opts: &TransformOptions,
) -> Result<f64, KernelError> {
    let head = kernel.head_law();
    if head.coeff != 0.0 && head.exponent <= -3.0 + 1e-12 {
        return Err(KernelError::DivergentIntegral(format!(
            "kernel grows like k^{:.3} towards k = 0",
            head.exponent
        )));
    }
    let tail = kernel.tail_law();
    if tail.coeff != 0.0 && tail.exponent >= -1.0 - 1e-12 {
        return Err(KernelError::DivergentIntegral(format!(
            "kernel decays like k^{:.3} at large k; the oscillatory integral does not converge",
            tail.exponent
        )));
    }

    let gl = gauss_legendre_16();
    let grid = kernel.k_grid();
    let integrand = |k: f64| k * kernel.value_at(k) * (k * r).sin();

    let half_period = std::f64::consts::PI / r;
    let b0 = grid[0].min(half_period);

    // Head [0, b0]: dyadic refinement towards the origin.
    let mut total = dyadic_head(&integrand, b0, opts.rel_tol);

    // Half-period panels, each split at interior grid points.
    let mut partials: Vec<f64> = Vec::with_capacity(256);
    let mut lo = b0;
    let mut n = (b0 / half_period).floor() as usize;
    let mut abs_scale = total.abs();
    let mut small_streak = 0usize;
    let mut last_eps: Option<f64> = None;
    loop {
        let hi = half_period * (n + 1) as f64;
        let hi = if hi <= lo { half_period * ((lo / half_period).floor() + 1.0) } else { hi };
        let panel = integrate_piecewise(&integrand, lo, hi, grid, gl);
        total += panel;
        partials.push(total);
        abs_scale = abs_scale.max(total.abs()).max(panel.abs());
        let floor = abs_scale.max(f64::MIN_POSITIVE);

        if panel.abs() <= 0.01 * opts.rel_tol * floor {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(total);
            }
        } else {
            small_streak = 0;
        }

        let count = partials.len();
        if count >= 16 && count % 8 == 0 {
            let window = &partials[count.saturating_sub(40)..];
            let (estimate, err) = wynn_epsilon(window);
            let stable = match last_eps {
                Some(prev) => (estimate - prev).abs() <= opts.rel_tol * floor,
                None => false,
            };
            if err <= opts.rel_tol * floor && stable {
                return Ok(estimate);
            }
            last_eps = Some(estimate);
        }

        if partials.len() >= opts.max_panels {
            let window = &partials[partials.len().saturating_sub(40)..];
            let (estimate, err) = wynn_epsilon(window);
            if err <= 10.0 * opts.rel_tol * abs_scale.max(estimate.abs()) {
                return Ok(estimate);
            }
            return Err(KernelError::IntegralDidNotConverge { residual: err });
        }

        lo = hi;
        n += 1;
    }
}

/// ∫₀^∞ k² f̃(k) w(k) dk for a smooth bounded weight.
pub fn weighted_moment(
    kernel: &FourierKernel,
    w: &MomentWeight<'_>,
    opts: &TransformOptions,
) -> Result<f64, KernelError> {
    let head = kernel.head_law();
    if head.coeff != 0.0 && head.exponent <= -3.0 + 1e-12 {
        return Err(KernelError::DivergentIntegral(format!(
            "kernel grows like k^{:.3} towards k = 0",
            head.exponent
        )));
    }
    let tail = kernel.tail_law();
    if tail.coeff != 0.0 && tail.exponent >= -3.0 - 1e-9 {
        return Err(KernelError::DivergentIntegral(format!(
            "kernel decays like k^{:.3} at large k; the k² moment does not converge",
            tail.exponent
        )));
    }

    let gl = gauss_legendre_16();
    let grid = kernel.k_grid();
    let k_min = grid[0];
    let k_max = grid[grid.len() - 1];
    let integrand = |k: f64| k * k * kernel.value_at(k) * (w.eval)(k);

    let mut total = dyadic_head(&integrand, k_min, opts.rel_tol);

    // Grid cells, split further if the weight oscillates within a cell.
    let max_width =
        if w.osc_scale > 0.0 { std::f64::consts::PI / w.osc_scale } else { f64::INFINITY };
    for cell in grid.windows(2) {
        let (lo, hi) = (cell[0], cell[1]);
        let pieces = if (hi - lo) > max_width {
            ((hi - lo) / max_width).ceil() as usize
        } else {
            1
        };
        let step = (hi - lo) / pieces as f64;
        for p in 0..pieces {
            total += gl.integrate(&integrand, lo + p as f64 * step, lo + (p + 1) as f64 * step);
        }
    }

    // Analytic tail: the weight tends to `tail_limit`, the kernel follows its
    // fitted power law.
    if tail.coeff != 0.0 {
        let e = tail.exponent;
        total += tail.coeff * w.tail_limit * k_max.powf(e + 3.0) / (-(e + 3.0));
        let osc_bound = (tail.coeff * w.tail_osc_bound).abs() * k_max.powf(e + 2.0) / (e + 2.0).abs();
        if osc_bound > opts.rel_tol * total.abs().max(f64::MIN_POSITIVE) {
            return Err(KernelError::IntegralDidNotConverge { residual: osc_bound });
        }
    }
    Ok(total)
}

/// Integrate over [0, b] by halving towards the origin; the integrand is a
/// power law there, so the piece contributions form a geometric series whose
/// remainder is extrapolated.
fn dyadic_head(integrand: &dyn Fn(f64) -> f64, b: f64, rel_tol: f64) -> f64 {
    let gl = gauss_legendre_16();
    let mut acc = 0.0_f64;
    let mut hi = b;
    let mut prev_piece: Option<f64> = None;
    for _ in 0..64 {
        let lo = hi * 0.5;
        let piece = gl.integrate(integrand, lo, hi);
        acc += piece;
        if piece == 0.0 || piece.abs() <= 1e-3 * rel_tol * acc.abs() {
            if let Some(prev) = prev_piece {
                if prev.abs() <= 1e-3 * rel_tol * acc.abs().max(f64::MIN_POSITIVE) {
                    return acc;
                }
            }
        }
        if let Some(prev) = prev_piece {
            let ratio = piece / prev;
            if ratio.is_finite() && ratio > 0.0 && ratio < 0.75 {
                let remainder = piece * ratio / (1.0 - ratio);
                if remainder.abs() <= rel_tol * acc.abs().max(f64::MIN_POSITIVE) {
                    return acc + remainder;
                }
            }
        }
        prev_piece = Some(piece);
        hi = lo;
    }
    // Extrapolate whatever geometric trend is left.
    if let Some(prev) = prev_piece {
        if prev != 0.0 {
            acc += prev; // crude bound on the unresolved remainder
        }
    }
    acc
}

/// Integrate a function over [lo, hi], splitting at interior kernel grid
/// points where the interpolant is not smooth.
fn integrate_piecewise(
    integrand: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid: &[f64],
    gl: &GaussLegendre,
) -> f64 {
    debug_assert!(hi > lo);
    let start = grid.partition_point(|&k| k <= lo);
    let end = grid.partition_point(|&k| k < hi);
    let mut acc = 0.0;
    let mut a = lo;
    for &kp in &grid[start..end] {
        if kp > a {
            acc += gl.integrate(integrand, a, kp);
            a = kp;
        }
    }
    if hi > a {
        acc += gl.integrate(integrand, a, hi);
    }
    acc
}

/// Wynn's epsilon acceleration of a sequence of partial sums.  Returns the
/// accelerated estimate and a crude error gauge (distance between the last
/// two even-column estimates).
fn wynn_epsilon(s: &[f64]) -> (f64, f64) {
    let n = s.len();
    if n < 3 {
        let last = *s.last().unwrap_or(&0.0);
        return (last, f64::INFINITY);
    }
    let mut prev: Vec<f64> = vec![0.0; n];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = *s.last().unwrap();
    let mut prev_best = best;
    for col in 1..n {
        let len = n - col;
        let mut next = vec![0.0; len];
        for i in 0..len {
            let denom = cur[i + 1] - cur[i];
            if denom.abs() < 1e-300 {
                return (best, (best - prev_best).abs());
            }
            next[i] = prev[i + 1] + 1.0 / denom;
        }
        prev = std::mem::replace(&mut cur, next);
        if col % 2 == 0 {
            prev_best = best;
            best = *cur.last().unwrap();
        }
    }
    (best, (best - prev_best).abs())
}

/// Fixed-order Gauss–Legendre rule on [-1, 1], mapped to arbitrary intervals.
pub(crate) struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights via Newton iteration on the Legendre polynomial.
    fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Chebyshev-based initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    fn integrate(&self, f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(self.weights.iter()) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gauss_legendre_16() -> &'static GaussLegendre {
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    GL.get_or_init(|| GaussLegendre::new(16))
}
