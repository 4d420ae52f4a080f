use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{GridField, GridSpec};
use crate::error::{Error, Result};

/// Forward and inverse DFT over every axis of a grid. The forward transform
/// is unnormalized (`Σ x_j e^{-2πi jk/N}`); the inverse divides by `N^d`.
pub struct Dft {
    spec: GridSpec,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

const BLOCK: usize = 32;

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for bi in (0..n).step_by(BLOCK) {
        for bj in (0..n).step_by(BLOCK) {
            for i in bi..(bi + BLOCK).min(n) {
                for j in bj..(bj + BLOCK).min(n) {
                    dst[j * n + i] = src[i * n + j];
                }
            }
        }
    }
}

impl Dft {
    pub fn new(spec: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            spec: *spec,
            forward: planner.plan_fft_forward(spec.n()),
            inverse: planner.plan_fft_inverse(spec.n()),
        }
    }

    fn run(&self, plan: &Arc<dyn Fft<f64>>, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.spec.len());
        let n = self.spec.n();
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        if self.spec.dim() == 2 {
            let mut t = vec![Complex64::new(0.0, 0.0); data.len()];
            transpose(data, &mut t, n);
            plan.process_with_scratch(&mut t, &mut scratch);
            transpose(&t, data, n);
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(&self.forward, data);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(&self.inverse, data);
        let scale = 1.0 / self.spec.len() as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }
}

/// `h^d · IDFT(DFT f · DFT g · (-1)^k)`: periodic convolution approximating
/// `∫ f(y) g(x - y) dy`, with `g` centered at the origin node.
pub fn convolve(f: &GridField, g: &GridField) -> Result<GridField> {
    f.spec().check_same(g.spec())?;
    let spec = *f.spec();
    let dft = Dft::new(&spec);
    let mut a = f.values().to_vec();
    let mut b = g.values().to_vec();
    dft.forward(&mut a);
    dft.forward(&mut b);
    let cell = spec.cell();
    for (idx, (x, y)) in a.iter_mut().zip(&b).enumerate() {
        *x *= y * (spec.center_sign(idx) * cell);
    }
    dft.inverse(&mut a);
    Ok(GridField::from_raw(spec, a))
}

/// Multiplier values on the DFT lattice of a grid, in DFT index order.
#[derive(Clone, Debug)]
pub struct FrequencySymbol {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl FrequencySymbol {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::DimensionMismatch {
                expected: spec.len(),
                found: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(format!(
                "symbol value at frequency {:?}",
                spec.frequency_at(pos)
            )));
        }
        Ok(Self { spec, values })
    }

    /// Samples `m(ξ)` at every lattice frequency.
    pub fn from_fn(spec: GridSpec, m: impl Fn([f64; 2]) -> Complex64) -> Result<Self> {
        Self::new(spec, (0..spec.len()).map(|i| m(spec.frequency_at(i))).collect())
    }

    pub fn constant(spec: GridSpec, c: Complex64) -> Self {
        Self {
            spec,
            values: vec![c; spec.len()],
        }
    }

    /// Symbol of convolution with the sampled kernel `k`.
    pub fn from_kernel(k: &GridField) -> Self {
        let spec = *k.spec();
        let mut v = k.values().to_vec();
        Dft::new(&spec).forward(&mut v);
        let cell = spec.cell();
        for (idx, z) in v.iter_mut().enumerate() {
            *z *= spec.center_sign(idx) * cell;
        }
        Self { spec, values: v }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `IDFT(m · DFT x)`.
pub fn multiplier_apply(symbol: &FrequencySymbol, x: &GridField) -> Result<GridField> {
    symbol.spec.check_same(x.spec())?;
    let dft = Dft::new(&symbol.spec);
    let mut v = x.values().to_vec();
    dft.forward(&mut v);
    for (z, m) in v.iter_mut().zip(&symbol.values) {
        *z *= m;
    }
    dft.inverse(&mut v);
    Ok(GridField::from_raw(symbol.spec, v))
}

/// In-place `x ← IDFT(m · DFT x)` with `m` evaluated lazily, for grids too
/// large to hold a separate symbol table.
pub fn multiplier_apply_in_place(x: &mut GridField, m: impl Fn([f64; 2]) -> Complex64) -> Result<()> {
    let spec = *x.spec();
    let dft = Dft::new(&spec);
    let v = x.values_mut();
    dft.forward(v);
    for (idx, z) in v.iter_mut().enumerate() {
        let s = m(spec.frequency_at(idx));
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::NonFinite(format!("symbol value at frequency {:?}", spec.frequency_at(idx))));
        }
        *z *= s;
    }
    dft.inverse(v);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::grid::{delta, gaussian_density, indicator, plane_wave, H_MAX};
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn plane_wave_lands_on_one_bin() {
        let grid = GridSpec::new(1, PI * 4.0, 64).unwrap();
        let mut v = plane_wave(&[3.0], &grid).unwrap().into_values();
        Dft::new(&grid).forward(&mut v);
        let peak = (0..64).max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm())).unwrap();
        assert!((grid.frequency(peak) - 3.0).abs() < 1e-12);
        let rest: f64 = v.iter().enumerate().filter(|(i, _)| *i != peak).map(|(_, z)| z.norm()).sum();
        assert!(rest < 1e-9);
    }

    #[test]
    fn roundtrip_and_parseval() {
        for dim in [1, 2] {
            let grid = GridSpec::new(dim, 3.0, 30).unwrap();
            let f = GridField::from_fn(grid, |x| Complex64::new((x[0] * 1.3).sin() + x[1], x[0] * x[1] - 0.2));
            let mut v = f.values().to_vec();
            let dft = Dft::new(&grid);
            dft.forward(&mut v);
            let spectral: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>() / grid.len() as f64;
            let direct: f64 = f.values().iter().map(|z| z.norm_sqr()).sum();
            assert!((spectral - direct).abs() <= 1e-10 * direct);
            dft.inverse(&mut v);
            let back = GridField::new(grid, v).unwrap();
            assert!(back.sub(&f).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_with_delta_is_identity() {
        for dim in [1, 2] {
            let grid = GridSpec::new(dim, 4.0, 32).unwrap();
            let f = GridField::from_fn(grid, |x| Complex64::new((-x[0] * x[0] - x[1]).exp(), x[1]));
            let out = convolve(&f, &delta(&grid)).unwrap();
            assert!(out.sub(&f).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn positive_convolution_preserves_mass_and_young() {
        let grid = GridSpec::with_spacing(1, 20.0, H_MAX).unwrap();
        let f = indicator(&grid, 0.0, 1.0);
        let g = gaussian_density(2.0, &grid).unwrap();
        let out = convolve(&f, &g).unwrap();
        let expect = f.integral().re * g.integral().re;
        assert!((out.integral().re - expect).abs() < 1e-8);
        assert!(out.l1_norm() <= f.l1_norm() * g.l1_norm() + 1e-8);
    }

    #[test]
    fn convolution_matches_direct_sum() {
        let grid = GridSpec::new(1, 2.0, 16).unwrap();
        let f = GridField::from_fn(grid, |x| Complex64::new(x[0].cos(), 0.3 * x[0]));
        let g = GridField::from_fn(grid, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let out = convolve(&f, &g).unwrap();
        let n = 16;
        let h = grid.spacing();
        for m in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                // g at x_m - x_j, wrapped periodically around the origin node
                let r = (m + n + n / 2 - j) % n;
                s += f.values()[j] * g.values()[r] * h;
            }
            assert!((s - out.values()[m]).norm() < 1e-12);
        }
    }

    #[test]
    fn multiplier_examples() {
        let grid = GridSpec::new(2, 5.0, 40).unwrap();
        let x = GridField::from_fn(grid, |p| Complex64::new((-p[0] * p[0] - 0.5 * p[1] * p[1]).exp(), p[0] * 0.01));
        let id = multiplier_apply(&FrequencySymbol::constant(grid, Complex64::new(1.0, 0.0)), &x).unwrap();
        assert!(id.sub(&x).unwrap().max_abs() < 1e-13);
        let two = multiplier_apply(&FrequencySymbol::constant(grid, Complex64::new(2.5, 0.0)), &x).unwrap();
        assert!(two.sub(&x.scale(Complex64::new(2.5, 0.0))).unwrap().max_abs() < 1e-13);

        let k = GridField::from_fn(grid, |p| Complex64::new((-(p[0] - 0.5).powi(2) - p[1] * p[1]).exp(), 0.1 * p[1]));
        let via_symbol = multiplier_apply(&FrequencySymbol::from_kernel(&k), &x).unwrap();
        let direct = convolve(&x, &k).unwrap();
        assert!(via_symbol.sub(&direct).unwrap().max_abs() < 1e-9);

        let bad = FrequencySymbol::from_fn(grid, |xi| Complex64::new(1.0 / xi[0], 0.0));
        assert!(matches!(bad, Err(Error::NonFinite(_))));
        let mut y = x.clone();
        assert!(multiplier_apply_in_place(&mut y, |xi| Complex64::new(1.0 / xi[0], 0.0)).is_err());
    }

    #[test]
    fn plane_wave_is_an_eigenfunction() {
        let grid = GridSpec::for_gaussian(1.0, 2, H_MAX).unwrap();
        let e = plane_wave(&[2.0, -1.0], &grid).unwrap();
        let sym = FrequencySymbol::from_fn(grid, |xi| Complex64::new(xi[0] * xi[0] + xi[1], 0.0)).unwrap();
        let out = multiplier_apply(&sym, &e).unwrap();
        assert!(out.sub(&e.scale(Complex64::new(3.0, 0.0))).unwrap().max_abs() < 1e-9);
    }
}
