use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest admissible spacing for smoothing experiments.
pub const H_MAX: f64 = 0.125;
/// Gaussian `G_l` needs a half-width of at least `8 l`.
pub const GAUSSIAN_REACH: f64 = 8.0;

/// Uniform periodic grid on `[-L, L)^dim` with `N` points per axis.
/// Point `j` sits at `-L + j h`, `h = 2L / N`; the origin is index `N / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    dim: usize,
    half_width: f64,
    n: usize,
}

/// Smallest even `m >= n` whose only prime factors are 2, 3 and 5.
pub fn next_fast_len(n: usize) -> usize {
    let mut m = n.max(2);
    loop {
        if m.is_multiple_of(2) {
            let mut r = m;
            for p in [2, 3, 5] {
                while r.is_multiple_of(p) {
                    r /= p;
                }
            }
            if r == 1 {
                return m;
            }
        }
        m += 1;
    }
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, n: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidParameter(format!("grid dimension must be 1 or 2, got {dim}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter(format!("half-width must be positive, got {half_width}")));
        }
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("samples per axis must be even and positive, got {n}")));
        }
        Ok(Self { dim, half_width, n })
    }

    /// Grid for experiments with `G_l`: half-width `π ⌈8l/π⌉`, so integer
    /// frequencies lie on the lattice, and spacing at most `h_max`.
    pub fn for_gaussian(l: f64, dim: usize, h_max: f64) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidParameter(format!("l must be positive, got {l}")));
        }
        let half_width = PI * (GAUSSIAN_REACH * l / PI).ceil();
        let n = next_fast_len((2.0 * half_width / h_max).ceil() as usize);
        Self::new(dim, half_width, n)
    }

    /// Grid with spacing exactly `h` (which must divide 1 evenly in binary,
    /// e.g. 1/8) and half-width at least `reach`; integer points are nodes.
    pub fn with_spacing(dim: usize, reach: f64, h: f64) -> Result<Self> {
        let n = next_fast_len((2.0 * reach / h).ceil() as usize);
        Self::new(dim, n as f64 * h / 2.0, n)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// `h^dim`.
    pub fn cell(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Frequency of DFT index `k`: `π s / L` with `s` the signed index.
    pub fn frequency(&self, k: usize) -> f64 {
        let s = if k < self.n / 2 { k as isize } else { k as isize - self.n as isize };
        PI * s as f64 / self.half_width
    }

    /// Lattice spacing `π / L` of representable frequencies.
    pub fn frequency_step(&self) -> f64 {
        PI / self.half_width
    }

    /// Point coordinates of flat index `idx` (second entry 0 in 1D).
    pub fn point(&self, idx: usize) -> [f64; 2] {
        if self.dim == 1 {
            [self.coord(idx), 0.0]
        } else {
            [self.coord(idx / self.n), self.coord(idx % self.n)]
        }
    }

    /// Frequency vector of flat DFT index `idx`.
    pub fn frequency_at(&self, idx: usize) -> [f64; 2] {
        if self.dim == 1 {
            [self.frequency(idx), 0.0]
        } else {
            [self.frequency(idx / self.n), self.frequency(idx % self.n)]
        }
    }

    /// `(-1)^(k_1 + ... + k_d)` for flat DFT index `idx`: the phase that
    /// recenters a field whose origin is at index `N / 2`.
    pub fn center_sign(&self, idx: usize) -> f64 {
        let parity = if self.dim == 1 { idx } else { idx / self.n + idx % self.n };
        if parity % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Rounds `k` to the nearest lattice frequency; returns it with the
    /// Euclidean snap distance.
    pub fn snap_to_lattice(&self, k: &[f64]) -> (Vec<f64>, f64) {
        let step = self.frequency_step();
        let snapped: Vec<f64> = k.iter().map(|&x| (x / step).round() * step).collect();
        let dist = k.iter().zip(&snapped).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        (snapped, dist)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// Complex samples on a [`GridSpec`], row-major in 2D.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl GridField {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::DimensionMismatch {
                expected: spec.len(),
                found: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(format!("grid value at index {pos}")));
        }
        Ok(Self { spec, values })
    }

    pub(crate) fn from_raw(spec: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), spec.len());
        Self { spec, values }
    }

    pub fn from_fn(spec: GridSpec, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        Self::from_raw(spec, (0..spec.len()).map(|i| f(spec.point(i))).collect())
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self::from_raw(spec, vec![Complex64::new(0.0, 0.0); spec.len()])
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Value at the point nearest to `x` (no interpolation).
    pub fn nearest(&self, x: [f64; 2]) -> Complex64 {
        let h = self.spec.spacing();
        let idx = |c: f64| (((c + self.spec.half_width) / h).round() as usize).min(self.spec.n - 1);
        if self.spec.dim == 1 {
            self.values[idx(x[0])]
        } else {
            self.values[idx(x[0]) * self.spec.n + idx(x[1])]
        }
    }

    /// `Σ |v| h^d`.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).sum::<f64>() * self.spec.cell()
    }

    /// `(Σ |v|^2 h^d)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.spec.cell()).sqrt()
    }

    /// `Σ v h^d`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.spec.cell()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_raw(self.spec, self.values.iter().map(|z| z * c).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.spec.check_same(&other.spec)?;
        Ok(Self::from_raw(
            self.spec,
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.spec.check_same(&other.spec)?;
        Ok(Self::from_raw(
            self.spec,
            self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.spec.check_same(&other.spec)?;
        Ok(Self::from_raw(
            self.spec,
            self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        ))
    }

    /// `f ⊗ g` of two 1D fields on the same axis grid.
    pub fn tensor(f: &Self, g: &Self) -> Result<Self> {
        f.spec.check_same(&g.spec)?;
        if f.spec.dim != 1 {
            return Err(Error::InvalidParameter("tensor expects 1D factors".into()));
        }
        let spec = GridSpec::new(2, f.spec.half_width, f.spec.n)?;
        let n = f.spec.n;
        Ok(Self::from_raw(spec, (0..n * n).map(|i| f.values[i / n] * g.values[i % n]).collect()))
    }

    /// CSV: first line `dim,L,N` with the values, then one `re,im` row per
    /// sample in row-major order.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.values.len() * 24);
        writeln!(s, "{},{},{}", self.spec.dim, self.spec.half_width, self.spec.n).unwrap();
        for z in &self.values {
            writeln!(s, "{},{}", z.re, z.im).unwrap();
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let head = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let fields: Vec<&str> = head.1.split(',').collect();
        let bad_head = || Error::Parse {
            line: 1,
            message: format!("expected `dim,L,N`, found `{}`", head.1),
        };
        if fields.len() != 3 {
            return Err(bad_head());
        }
        let dim: usize = fields[0].parse().map_err(|_| bad_head())?;
        let l: f64 = fields[1].parse().map_err(|_| bad_head())?;
        let n: usize = fields[2].parse().map_err(|_| bad_head())?;
        let spec = GridSpec::new(dim, l, n)?;
        let mut values = Vec::with_capacity(spec.len());
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse {
                line: idx + 1,
                message: format!("bad row `{line}`"),
            };
            let (re, im) = line.split_once(',').ok_or_else(bad)?;
            values.push(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?));
        }
        Self::new(spec, values)
    }
}

/// `G_l(s) = e^{-(s/l)^2} / (l √π)`.
pub fn gaussian(l: f64, s: f64) -> f64 {
    let u = s / l;
    (-u * u).exp() / (l * PI.sqrt())
}

/// Sampled `G_l^{⊗d}`. Requires `L >= 8 l`.
pub fn gaussian_density(l: f64, grid: &GridSpec) -> Result<GridField> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidParameter(format!("l must be positive, got {l}")));
    }
    if grid.half_width < GAUSSIAN_REACH * l * (1.0 - 1e-12) {
        return Err(Error::GridTooSmall(format!(
            "half-width {} < 8 l = {}: the periodized Gaussian would overlap itself",
            grid.half_width,
            GAUSSIAN_REACH * l
        )));
    }
    let axis: Vec<f64> = (0..grid.n).map(|j| gaussian(l, grid.coord(j))).collect();
    let values = if grid.dim == 1 {
        axis.iter().map(|&v| Complex64::new(v, 0.0)).collect()
    } else {
        (0..grid.len()).map(|i| Complex64::new(axis[i / grid.n] * axis[i % grid.n], 0.0)).collect()
    };
    Ok(GridField::from_raw(*grid, values))
}

/// Samples of `e^{i<k, t>}`; `k` has `dim` entries.
pub fn plane_wave(k: &[f64], grid: &GridSpec) -> Result<GridField> {
    if k.len() != grid.dim {
        return Err(Error::DimensionMismatch {
            expected: grid.dim,
            found: k.len(),
        });
    }
    let k2 = if grid.dim == 2 { k[1] } else { 0.0 };
    Ok(GridField::from_fn(*grid, |x| Complex64::from_polar(1.0, k[0] * x[0] + k2 * x[1])))
}

/// Discrete delta: `1 / h^d` at the origin node.
pub fn delta(grid: &GridSpec) -> GridField {
    let mut f = GridField::zeros(*grid);
    let c = grid.n / 2;
    let idx = if grid.dim == 1 { c } else { c * grid.n + c };
    f.values[idx] = Complex64::new(1.0 / grid.cell(), 0.0);
    f
}

/// Indicator of `[a, b)` on a 1D grid.
pub fn indicator(grid: &GridSpec, a: f64, b: f64) -> GridField {
    GridField::from_fn(*grid, |x| Complex64::new(if x[0] >= a && x[0] < b { 1.0 } else { 0.0 }, 0.0))
}
