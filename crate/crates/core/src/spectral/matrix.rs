use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!(
                "entry ({}, {}) = {}",
                pos / n,
                pos % n,
                data[pos]
            )));
        }
        Ok(Self { n, data })
    }

    pub(crate) fn from_raw(n: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_raw(n, vec![Complex64::new(0.0, 0.0); n * n])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::from_raw(n, data)
    }

    /// Real row-major entries.
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(n, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n, data)
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(v, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.n + j] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_raw(self.n, self.data.iter().map(|z| z * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self::from_raw(self.n, self.data.iter().map(|z| z * c).collect())
    }

    /// Entrywise (Schur) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::from_raw(
            self.n,
            self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect(),
        ))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.matmul(other))
    }

    fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self::from_raw(n, out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise deviation from Hermitian symmetry and where it occurs.
    pub fn hermitian_defect(&self) -> (f64, usize, usize) {
        let n = self.n;
        let mut worst = (0.0, 0, 0);
        for i in 0..n {
            for j in i..n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    /// Largest entrywise deviation from `M* = -M`.
    pub fn anti_hermitian_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) + self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Block matrix `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        a.check_dim(b)?;
        a.check_dim(c)?;
        a.check_dim(d)?;
        let n = a.n;
        Ok(Self::from_fn(2 * n, |i, j| {
            let block = match (i < n, j < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            block.get(i % n, j % n)
        }))
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Plain-text serialization: a line with `n`, then `n` rows of
    /// space-separated `re+imj` entries.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.n).unwrap();
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    s.push(' ');
                }
                s.push_str(&format_complex(self.get(i, j)));
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let n: usize = first.trim().parse().map_err(|e| Error::Parse {
            line: 1,
            message: format!("bad dimension: {e}"),
        })?;
        let mut data = Vec::with_capacity(n * n);
        for row in 0..n {
            let (idx, line) = lines.next().ok_or(Error::Parse {
                line: row + 2,
                message: "missing row".into(),
            })?;
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != n {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {n} entries, found {}", fields.len()),
                });
            }
            for field in fields {
                data.push(parse_complex(field).ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    message: format!("bad entry `{field}`"),
                })?);
            }
        }
        Self::new(n, data)
    }
}

fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", z.re, sign, z.im.abs())
}

fn parse_complex(field: &str) -> Option<Complex64> {
    let body = field.strip_suffix('j')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let re: f64 = body[..split].parse().ok()?;
    let im: f64 = body[split..].parse().ok()?;
    Some(Complex64::new(re, im))
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on dimension mismatch.
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix addition");
        ComplexMatrix::from_raw(self.n, self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix subtraction");
        ComplexMatrix::from_raw(self.n, self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        self.matmul(rhs)
    }
}

/// Self-adjoint matrix. Construction checks the Hermitian defect against
/// `1e-12 * (1 + max|a_ij|)` and then stores the exactly symmetrized part.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    base: ComplexMatrix,
}

pub const HERM_TOL: f64 = 1e-12;

impl HermitianMatrix {
    pub fn new(base: ComplexMatrix) -> Result<Self> {
        let tolerance = HERM_TOL * (1.0 + base.max_abs());
        let (deviation, row, col) = base.hermitian_defect();
        if deviation > tolerance {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation,
                tolerance,
            });
        }
        Ok(Self::symmetrized(base))
    }

    /// `(M + M*) / 2` without any tolerance check.
    pub fn symmetrized(base: ComplexMatrix) -> Self {
        let n = base.dim();
        let data = ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(base.get(i, i).re, 0.0)
            } else {
                (base.get(i, j) + base.get(j, i).conj()) * 0.5
            }
        });
        Self { base: data }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self {
            base: ComplexMatrix::diag(values),
        }
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real(n, entries)?)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.base
    }
}

impl AsRef<ComplexMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.base
    }
}
