use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::cutoff::smooth_step;
use crate::doi::divided_difference;
use crate::error::{Error, Result};
use crate::funclib::LipschitzFn;

/// Default bridge width of [`tan_symbol`].
pub const TAN_DELTA: f64 = PI / 16.0;
/// Default number of retained harmonics of [`tan_symbol`].
pub const TAN_K_MAX: usize = 64;
/// Circle samples used to build [`tan_symbol`].
pub const TAN_SAMPLES: usize = 4096;
/// Samples per retained harmonic required by [`symbol_from_samples`].
pub const ALIAS_FACTOR: usize = 4;
/// Relative tolerance of the conjugate-symmetry check on real symbols.
pub const REALITY_TOL: f64 = 1e-12;

const MEAN_ROUNDING: f64 = 1e-14;

type AngularFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function of the angle on the circle, extended homogeneously of degree
/// zero to `R² \ {0}`, stored through its Fourier coefficients
/// `α_k, |k| ≤ K_max`. Symbols built from an explicit real profile keep it
/// for exact pointwise evaluation.
#[derive(Clone)]
pub struct CircleSymbol {
    k_max: usize,
    coefficients: Vec<Complex64>,
    real: bool,
    truncation_residual: f64,
    profile: Option<AngularFn>,
}

impl fmt::Debug for CircleSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircleSymbol")
            .field("k_max", &self.k_max)
            .field("real", &self.real)
            .field("truncation_residual", &self.truncation_residual)
            .field("has_profile", &self.profile.is_some())
            .finish()
    }
}

/// `1 / i^{|k|}`.
fn inv_i_pow(k: i64) -> Complex64 {
    match k.unsigned_abs() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

impl CircleSymbol {
    /// `coefficients[k + K_max] = α_k`. With `real` set, checks
    /// `α_{-k} = conj(α_k)`.
    pub fn new(coefficients: Vec<Complex64>, real: bool) -> Result<Self> {
        if coefficients.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "coefficient vector must have odd length 2 K_max + 1, got {}",
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("circle coefficient".into()));
        }
        let k_max = coefficients.len() / 2;
        if real {
            let scale = coefficients.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for k in 1..=k_max {
                let d = (coefficients[k_max + k] - coefficients[k_max - k].conj()).norm();
                if d > REALITY_TOL * (1.0 + scale) {
                    return Err(Error::InvalidParameter(format!(
                        "real symbol needs conjugate-symmetric coefficients; defect {d:e} at k = {k}"
                    )));
                }
            }
        }
        Ok(Self {
            k_max,
            coefficients,
            real,
            truncation_residual: 0.0,
            profile: None,
        })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// `α_k`, zero for `|k| > K_max`.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.k_max {
            return Complex64::new(0.0, 0.0);
        }
        self.coefficients[(k + self.k_max as i64) as usize]
    }

    /// `L²` mass of the sampled function beyond `K_max`.
    pub fn truncation_residual(&self) -> f64 {
        self.truncation_residual
    }

    /// Smallest `C` with `|α_k| ≤ C (1 + |k|)^{-4}` for the retained `k`.
    pub fn decay_constant(&self) -> f64 {
        (-(self.k_max as i64)..=self.k_max as i64)
            .map(|k| self.coefficient(k).norm() * (1.0 + k.abs() as f64).powi(4))
            .fold(0.0, f64::max)
    }

    /// Bound on `sup |h - h_{K_max}|` for the kernel profile `h` implied by
    /// the quartic decay certificate: `C / (2π (1 + K_max)²)`. Zero for
    /// symbols given by an exact finite coefficient list.
    pub fn kernel_tail_bound(&self) -> f64 {
        if self.truncation_residual == 0.0 {
            return 0.0;
        }
        self.decay_constant() / (2.0 * PI * (1.0 + self.k_max as f64).powi(2))
    }

    /// `Σ α_k e^{ikθ}`.
    pub fn series(&self, theta: f64) -> Complex64 {
        (-(self.k_max as i64)..=self.k_max as i64)
            .map(|k| self.coefficient(k) * Complex64::from_polar(1.0, k as f64 * theta))
            .sum()
    }

    /// Symbol value at angle `θ`: the exact profile when one is stored, the
    /// truncated series otherwise.
    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        match &self.profile {
            Some(p) => Complex64::new(p(theta), 0.0),
            None => self.series(theta),
        }
    }

    /// Homogeneous extension `g(x, y) = g(e^{i atan2(y, x)})`; zero at the
    /// origin.
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        if x == 0.0 && y == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.eval_angle(y.atan2(x))
    }

    /// `c_k = α_k |k| / (2π i^{|k|})` for `k ≠ 0`, the coefficients of the
    /// kernel profile `h`.
    pub fn kernel_coefficients(&self) -> Vec<(i64, Complex64)> {
        (-(self.k_max as i64)..=self.k_max as i64)
            .filter(|&k| k != 0)
            .map(|k| (k, self.coefficient(k) * inv_i_pow(k) * (k.abs() as f64 / (2.0 * PI))))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect()
    }

    /// `h(e^{iθ}) = Σ_{k≠0} α_k |k| / (2π i^{|k|}) e^{ikθ}`.
    pub fn kernel_profile(&self, theta: f64) -> Complex64 {
        self.kernel_coefficients()
            .into_iter()
            .map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * theta))
            .sum()
    }

    /// Largest `|g|` over `samples` equally spaced angles.
    pub fn max_abs(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|j| self.eval_angle(2.0 * PI * j as f64 / samples as f64).norm())
            .fold(0.0, f64::max)
    }

    /// Rows `k,re,im` for `k = -K_max..=K_max`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,re,im\n");
        for k in -(self.k_max as i64)..=self.k_max as i64 {
            let z = self.coefficient(k);
            let _ = writeln!(out, "{k},{:e},{:e}", z.re, z.im);
        }
        out
    }

    /// Inverse of [`CircleSymbol::to_csv`]; missing `k` are zero. The
    /// result is flagged real when the coefficients are conjugate-symmetric.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with('k')) {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            let bad = |message: String| Error::Parse { line: i + 1, message };
            if parts.len() != 3 {
                return Err(bad(format!("expected 3 fields, got {}", parts.len())));
            }
            let k: i64 = parts[0].trim().parse().map_err(|e| bad(format!("{e}")))?;
            let re: f64 = parts[1].trim().parse().map_err(|e| bad(format!("{e}")))?;
            let im: f64 = parts[2].trim().parse().map_err(|e| bad(format!("{e}")))?;
            rows.push((k, Complex64::new(re, im)));
        }
        let k_max = rows.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coefficients = vec![Complex64::new(0.0, 0.0); 2 * k_max + 1];
        for (k, z) in rows {
            coefficients[(k + k_max as i64) as usize] = z;
        }
        Self::new(coefficients.clone(), false).map(|mut s| {
            s.real = Self::new(coefficients, true).is_ok();
            s
        })
    }
}

/// Coefficients `α_k, |k| ≤ K_max`, of the function sampled at
/// `θ_j = 2πj / M`, by the discrete Fourier transform.
pub fn symbol_from_samples(values: &[Complex64], k_max: usize) -> Result<CircleSymbol> {
    let m = values.len();
    let needed = ALIAS_FACTOR * k_max.max(1);
    if m < needed {
        return Err(Error::Aliasing {
            samples: m,
            k_max,
            needed,
        });
    }
    let mut spectrum = values.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut spectrum);
    let inv = 1.0 / m as f64;
    let coefficients: Vec<Complex64> = (-(k_max as i64)..=k_max as i64)
        .map(|k| spectrum[k.rem_euclid(m as i64) as usize] * inv)
        .collect();
    let total: f64 = values.iter().map(|z| z.norm_sqr()).sum::<f64>() * inv;
    let kept: f64 = coefficients.iter().map(|z| z.norm_sqr()).sum();
    let real = values.iter().all(|z| z.im == 0.0);
    let mut s = CircleSymbol::new(coefficients, false)?;
    s.real = real;
    s.truncation_residual = (total - kept).max(0.0).sqrt();
    Ok(s)
}

/// The tapered tan profile before mean subtraction: `tan θ` where
/// `|θ mod π| ≤ π/4`, `cot θ` where `|θ mod π| ≥ π/4 + δ`, and a smooth
/// blend in between. Odd and `π`-periodic.
pub fn tan_profile(theta: f64, delta: f64) -> f64 {
    let t = (theta + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
    let u = t.abs();
    if u <= FRAC_PI_4 {
        return t.tan();
    }
    let w = smooth_step((FRAC_PI_4 + delta - u) / delta);
    let cot = if u >= FRAC_PI_2 { 0.0 } else { 1.0 / t.tan() };
    if w == 0.0 {
        return cot;
    }
    w * t.tan() + (1.0 - w) * cot
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < FRAC_PI_4) {
        return Err(Error::InvalidParameter(format!("taper width must lie in (0, π/4), got {delta}")));
    }
    Ok(())
}

/// Mean-zero tapered tan symbol with [`TAN_K_MAX`] harmonics.
pub fn tan_symbol(delta: f64) -> Result<CircleSymbol> {
    tan_symbol_with(delta, TAN_K_MAX)
}

/// Mean-zero tapered tan symbol with `k_max` harmonics, sampled on at least
/// [`TAN_SAMPLES`] points.
pub fn tan_symbol_with(delta: f64, k_max: usize) -> Result<CircleSymbol> {
    check_delta(delta)?;
    let m = TAN_SAMPLES.max(16 * k_max);
    let samples: Vec<Complex64> = (0..m)
        .map(|j| Complex64::new(tan_profile(2.0 * PI * j as f64 / m as f64, delta), 0.0))
        .collect();
    let mut s = symbol_from_samples(&samples, k_max)?;
    // the profile is odd, so a computed mean at rounding level is zero
    let mean = s.coefficient(0).re;
    let mean = if mean.abs() <= MEAN_ROUNDING { 0.0 } else { mean };
    s.coefficients[k_max] = Complex64::new(0.0, 0.0);
    s.profile = Some(Arc::new(move |theta| tan_profile(theta, delta) - mean));
    Ok(s)
}

/// `max |g(i - j, f(i) - f(j)) - f^{[1]}(i, j)|` over integers
/// `|i|, |j| ≤ range`, `i ≠ j`. Every direction must lie on the closed tan
/// arcs `|dy| ≤ |dx|`.
pub fn symbol_divided_difference_identity(g: &CircleSymbol, f: &LipschitzFn, range: i64) -> Result<f64> {
    if f.lipschitz_constant() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "`{}` needs Lipschitz constant < 1, got {}",
            f.name(),
            f.lipschitz_constant()
        )));
    }
    let mut worst: f64 = 0.0;
    for i in -range..=range {
        for j in -range..=range {
            if i == j {
                continue;
            }
            let (a, b) = (i as f64, j as f64);
            let (dx, dy) = (a - b, f.eval(a) - f.eval(b));
            if dy.abs() > dx.abs() {
                return Err(Error::SlopeBound { i, j, dx, dy });
            }
            let lhs = g.eval(dx, dy);
            let rhs = divided_difference(f, a, b);
            worst = worst.max((lhs - Complex64::new(rhs, 0.0)).norm());
        }
    }
    Ok(worst)
}
