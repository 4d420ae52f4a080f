//! Real Lipschitz functions with known constants.
//!
//! Catalog entries carry exact constants. User rules carry a declared bound
//! that is checked on random sample pairs when they are registered.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Number of random pairs drawn by [`check_lipschitz`].
pub const REGISTRATION_PAIRS: usize = 10_000;
/// Relative slack allowed by the Lipschitz sample check.
pub const REGISTRATION_TOL: f64 = 1e-12;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Rule {
    Identity,
    Abs,
    Sin,
    SoftAbs(f64),
    Piecewise(PiecewiseLinear),
    /// `a * f(t - b)`
    Scaled { inner: Box<LipschitzFn>, a: f64, b: f64 },
    /// `n * f(t / n)`
    Rescaled { inner: Box<LipschitzFn>, n: f64 },
    Custom(RealFn),
}

/// A real function `f` together with an upper bound for `||f'||_∞`.
#[derive(Clone)]
pub struct LipschitzFn {
    name: String,
    rule: Rule,
    lipschitz_constant: f64,
}

impl fmt::Debug for LipschitzFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LipschitzFn")
            .field("name", &self.name)
            .field("lipschitz_constant", &self.lipschitz_constant)
            .finish()
    }
}

impl LipschitzFn {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lipschitz_constant(&self) -> f64 {
        self.lipschitz_constant
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.rule {
            Rule::Identity => t,
            Rule::Abs => t.abs(),
            Rule::Sin => t.sin(),
            Rule::SoftAbs(eps) => t.hypot(*eps),
            Rule::Piecewise(p) => p.eval(t),
            Rule::Scaled { inner, a, b } => a * inner.eval(t - b),
            Rule::Rescaled { inner, n } => n * inner.eval(t / n),
            Rule::Custom(g) => g(t),
        }
    }

    /// Breakpoints and slopes when the function is a catalog piecewise rule.
    pub fn as_piecewise(&self) -> Option<&PiecewiseLinear> {
        match &self.rule {
            Rule::Piecewise(p) => Some(p),
            _ => None,
        }
    }

    /// True for the identity rule, possibly under a trivial rescale.
    pub fn is_identity(&self) -> bool {
        match &self.rule {
            Rule::Identity => true,
            Rule::Rescaled { inner, .. } => inner.is_identity(),
            _ => false,
        }
    }

    /// The same rule under a new name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

pub fn identity() -> LipschitzFn {
    LipschitzFn {
        name: "identity".into(),
        rule: Rule::Identity,
        lipschitz_constant: 1.0,
    }
}

pub fn abs() -> LipschitzFn {
    LipschitzFn {
        name: "abs".into(),
        rule: Rule::Abs,
        lipschitz_constant: 1.0,
    }
}

pub fn sin() -> LipschitzFn {
    LipschitzFn {
        name: "sin".into(),
        rule: Rule::Sin,
        lipschitz_constant: 1.0,
    }
}

/// `sqrt(t^2 + eps^2)`.
pub fn soft_abs(eps: f64) -> Result<LipschitzFn> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidParameter(format!("soft_abs needs eps >= 0, got {eps}")));
    }
    Ok(LipschitzFn {
        name: format!("soft_abs:{eps}"),
        rule: Rule::SoftAbs(eps),
        lipschitz_constant: 1.0,
    })
}

/// Continuous piecewise-linear function anchored at `f(breakpoints[0]) = 0`.
/// `slopes[i]` applies left of `breakpoints[i]`; the last slope applies to
/// the right of the last breakpoint.
pub fn piecewise_linear(breakpoints: &[f64], slopes: &[f64]) -> Result<LipschitzFn> {
    let p = PiecewiseLinear::new(breakpoints.to_vec(), slopes.to_vec())?;
    let lipschitz_constant = p.slopes.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    Ok(LipschitzFn {
        name: "piecewise_linear".into(),
        rule: Rule::Piecewise(p),
        lipschitz_constant,
    })
}

/// `a * f(t - b)` with constant `|a| * L`.
pub fn scaled(f: &LipschitzFn, a: f64, b: f64) -> Result<LipschitzFn> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("scaled needs finite a and b".into()));
    }
    Ok(LipschitzFn {
        name: format!("scaled({},{a},{b})", f.name),
        rule: Rule::Scaled {
            inner: Box::new(f.clone()),
            a,
            b,
        },
        lipschitz_constant: a.abs() * f.lipschitz_constant,
    })
}

/// `|t - c|`.
pub fn abs_shift(c: f64) -> Result<LipschitzFn> {
    Ok(scaled(&abs(), 1.0, c)?.renamed(format!("abs_shift:{c}")))
}

/// The fixed piecewise-linear function used by the experiment suites:
/// breakpoints `(-1, -1/4, 1/2, 1)`, slopes `(0.3, -1, 0.6, -0.8, 1)`.
pub fn pinned_piecewise() -> LipschitzFn {
    piecewise_linear(&[-1.0, -0.25, 0.5, 1.0], &[0.3, -1.0, 0.6, -0.8, 1.0])
        .expect("valid breakpoints")
        .renamed("piecewise")
}

/// A user rule with a declared Lipschitz bound, checked on
/// [`REGISTRATION_PAIRS`] random pairs drawn from `domain`.
pub fn custom(
    name: &str,
    rule: impl Fn(f64) -> f64 + Send + Sync + 'static,
    declared: f64,
    domain: (f64, f64),
    seed: u64,
) -> Result<LipschitzFn> {
    if !(declared.is_finite() && declared >= 0.0) {
        return Err(Error::InvalidParameter(format!("declared bound must be >= 0, got {declared}")));
    }
    let f = LipschitzFn {
        name: name.to_string(),
        rule: Rule::Custom(Arc::new(rule)),
        lipschitz_constant: declared,
    };
    check_lipschitz(&f, domain, REGISTRATION_PAIRS, seed)?;
    Ok(f)
}

/// Draws `pairs` uniform pairs in `domain` and verifies
/// `|f(a) - f(b)| <= L |a - b|` up to a relative slack of `1e-12`.
pub fn check_lipschitz(f: &LipschitzFn, domain: (f64, f64), pairs: usize, seed: u64) -> Result<()> {
    let (lo, hi) = domain;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!("degenerate domain [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = f.lipschitz_constant;
    for _ in 0..pairs {
        let a = rng.random_range(lo..hi);
        let b = rng.random_range(lo..hi);
        let (fa, fb) = (f.eval(a), f.eval(b));
        if !(fa.is_finite() && fb.is_finite()) {
            return Err(Error::NonFinite(format!("{} at {a} or {b}", f.name)));
        }
        let diff = (fa - fb).abs();
        let bound = l * (a - b).abs();
        if diff > bound + REGISTRATION_TOL * (bound + fa.abs() + fb.abs()) {
            return Err(Error::LipschitzViolation {
                name: f.name.clone(),
                declared: l,
                observed: diff / (a - b).abs(),
                a,
                b,
            });
        }
    }
    Ok(())
}

/// `t -> n f(t / n)`; the Lipschitz constant is unchanged.
pub fn rescale(f: &LipschitzFn, n: f64) -> Result<LipschitzFn> {
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidParameter(format!("rescale factor must be positive, got {n}")));
    }
    Ok(LipschitzFn {
        name: format!("rescale({},{n})", f.name),
        rule: Rule::Rescaled {
            inner: Box::new(f.clone()),
            n,
        },
        lipschitz_constant: f.lipschitz_constant,
    })
}

/// Largest difference quotient between neighbours of a uniform grid with
/// `samples` points on `[lo, hi]`. A lower bound for `||f'||_∞` there.
pub fn estimate_constant(f: &LipschitzFn, interval: (f64, f64), samples: usize) -> Result<f64> {
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!("degenerate interval [{lo}, {hi}]")));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("estimate_constant needs at least 2 samples".into()));
    }
    let step = (hi - lo) / (samples - 1) as f64;
    let mut prev_t = lo;
    let mut prev_f = f.eval(lo);
    let mut best = 0.0f64;
    for i in 1..samples {
        let t = if i == samples - 1 { hi } else { lo + step * i as f64 };
        let ft = f.eval(t);
        best = best.max((ft - prev_f).abs() / (t - prev_t));
        prev_t = t;
        prev_f = ft;
    }
    Ok(best)
}

/// Builds a catalog entry. `params` holds the numeric arguments:
/// `soft_abs` takes `eps`, `abs_shift` takes `c`, `piecewise_linear` takes
/// `m` breakpoints followed by `m + 1` slopes.
pub fn catalog(name: &str, params: &[f64]) -> Result<LipschitzFn> {
    let arity = |k: usize| -> Result<()> {
        if params.len() != k {
            return Err(Error::InvalidParameter(format!(
                "{name} takes {k} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(())
    };
    match name {
        "identity" => arity(0).map(|_| identity()),
        "abs" => arity(0).map(|_| abs()),
        "sin" => arity(0).map(|_| sin()),
        "soft_abs" => {
            if params.is_empty() {
                soft_abs(0.1)
            } else {
                arity(1)?;
                soft_abs(params[0])
            }
        }
        "abs_shift" => {
            if params.is_empty() {
                abs_shift(1.0)
            } else {
                arity(1)?;
                abs_shift(params[0])
            }
        }
        "piecewise" => arity(0).map(|_| pinned_piecewise()),
        "piecewise_linear" => {
            if params.len().is_multiple_of(2) {
                return Err(Error::InvalidParameter(
                    "piecewise_linear takes m breakpoints and m + 1 slopes".into(),
                ));
            }
            let m = params.len() / 2;
            piecewise_linear(&params[..m], &params[m..])
        }
        other => Err(Error::UnknownFunction(other.to_string())),
    }
}

/// Parses `name[:p1,p2,...]` as used on the command line.
pub fn parse(spec: &str) -> Result<LipschitzFn> {
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (spec, None),
    };
    let mut params = Vec::new();
    if let Some(rest) = rest {
        for tok in rest.split(',') {
            params.push(tok.trim().parse::<f64>().map_err(|_| {
                Error::InvalidParameter(format!("bad numeric parameter `{tok}` in `{spec}`"))
            })?);
        }
    }
    catalog(name, &params)
}

/// Names accepted by [`parse`] without parameters.
pub const CATALOG_NAMES: &[&str] = &["identity", "abs", "sin", "soft_abs", "abs_shift", "piecewise"];

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<f64>,
    slopes: Vec<f64>,
    knots: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidParameter("piecewise_linear needs at least one breakpoint".into()));
        }
        if slopes.len() != breakpoints.len() + 1 {
            return Err(Error::DimensionMismatch {
                expected: breakpoints.len() + 1,
                found: slopes.len(),
            });
        }
        if breakpoints.iter().chain(&slopes).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("piecewise_linear parameters".into()));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "breakpoints not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
        let mut knots = vec![0.0];
        for i in 1..breakpoints.len() {
            let prev = knots[i - 1];
            knots.push(prev + slopes[i] * (breakpoints[i] - breakpoints[i - 1]));
        }
        Ok(Self {
            breakpoints,
            slopes,
            knots,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn eval(&self, t: f64) -> f64 {
        let b = &self.breakpoints;
        if t <= b[0] {
            return self.slopes[0] * (t - b[0]);
        }
        // index of the last breakpoint <= t
        let i = b.partition_point(|&x| x <= t) - 1;
        self.knots[i] + self.slopes[i + 1] * (t - b[i])
    }

    /// CSV with header `breakpoint,left_slope`, one row per breakpoint, and
    /// a final row `,slope` for the rightmost piece.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("breakpoint,left_slope\n");
        for (b, sl) in self.breakpoints.iter().zip(&self.slopes) {
            s.push_str(&format!("{b},{sl}\n"));
        }
        s.push_str(&format!(",{}\n", self.slopes[self.slopes.len() - 1]));
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "breakpoint,left_slope" => {}
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "expected header `breakpoint,left_slope`".into(),
                })
            }
        }
        let mut breakpoints = Vec::new();
        let mut slopes = Vec::new();
        let mut closed = false;
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Parse { line: idx + 1, message };
            if closed {
                return Err(bad("rows after the trailing slope row".into()));
            }
            let (b, s) = line.split_once(',').ok_or_else(|| bad("expected two fields".into()))?;
            let slope: f64 = s.parse().map_err(|_| bad(format!("bad slope `{s}`")))?;
            if b.is_empty() {
                closed = true;
            } else {
                breakpoints.push(b.parse().map_err(|_| bad(format!("bad breakpoint `{b}`")))?);
            }
            slopes.push(slope);
        }
        if !closed {
            return Err(Error::Parse {
                line: text.lines().count(),
                message: "missing trailing slope row".into(),
            });
        }
        Self::new(breakpoints, slopes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog_entries() -> Vec<LipschitzFn> {
        vec![
            identity(),
            abs(),
            sin(),
            soft_abs(0.1).unwrap(),
            pinned_piecewise(),
            abs_shift(1.0).unwrap(),
            scaled(&sin(), -2.5, 0.3).unwrap(),
            rescale(&pinned_piecewise(), 3.0).unwrap(),
        ]
    }

    #[test]
    fn catalog_values() {
        assert_eq!(abs().eval(-3.0), 3.0);
        let tent = piecewise_linear(&[0.0], &[1.0, -1.0]).unwrap();
        assert_eq!(tent.eval(2.0), -2.0);
        assert_eq!(tent.eval(-1.0), -1.0);
        assert_eq!(tent.lipschitz_constant(), 1.0);
        assert!((soft_abs(0.1).unwrap().eval(0.0) - 0.1).abs() < 1e-16);
        assert_eq!(pinned_piecewise().lipschitz_constant(), 1.0);
        assert_eq!(abs_shift(1.0).unwrap().eval(3.0), 2.0);
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(catalog("cosh", &[]), Err(Error::UnknownFunction(_))));
        assert!(piecewise_linear(&[0.0, 0.0], &[1.0, 1.0, 1.0]).is_err());
        assert!(piecewise_linear(&[1.0, 0.0], &[1.0, 1.0, 1.0]).is_err());
        assert!(parse("soft_abs:x").is_err());
        assert!(rescale(&abs(), 0.0).is_err());
        assert!(estimate_constant(&abs(), (1.0, 1.0), 10).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse("soft_abs:0.5").unwrap().eval(0.0), 0.5);
        assert_eq!(parse("abs_shift:2").unwrap().eval(0.0), 2.0);
        assert_eq!(parse("piecewise_linear:0,1,-1").unwrap().eval(3.0), -3.0);
        for name in CATALOG_NAMES {
            parse(name).unwrap();
        }
    }

    #[test]
    fn piecewise_is_continuous_at_breakpoints() {
        let f = pinned_piecewise();
        let p = f.as_piecewise().unwrap();
        for &b in p.breakpoints() {
            let left = f.eval(b - 1e-12);
            let right = f.eval(b + 1e-12);
            assert!((left - right).abs() < 1e-11);
        }
        assert_eq!(f.eval(-1.0), 0.0);
    }

    #[test]
    fn registration_check_on_catalog() {
        for f in catalog_entries() {
            check_lipschitz(&f, (-10.0, 10.0), REGISTRATION_PAIRS, 1).unwrap();
        }
    }

    #[test]
    fn custom_rules_are_certified() {
        let ok = custom("half_sin", |t| 0.5 * t.sin(), 0.5, (-5.0, 5.0), 3).unwrap();
        assert_eq!(ok.lipschitz_constant(), 0.5);
        let err = custom("steep", |t| 2.0 * t, 1.5, (-1.0, 1.0), 3).unwrap_err();
        assert!(matches!(err, Error::LipschitzViolation { .. }));
    }

    #[test]
    fn estimates_stay_below_constants() {
        for f in catalog_entries() {
            let est = estimate_constant(&f, (-4.0, 4.0), 4001).unwrap();
            assert!(est <= f.lipschitz_constant() * (1.0 + 1e-9), "{}: {est}", f.name());
        }
        assert_eq!(estimate_constant(&identity(), (0.0, 1.0), 2).unwrap(), 1.0);
        assert!((estimate_constant(&abs(), (-1.0, 1.0), 1000).unwrap() - 1.0).abs() < 1e-9);
        let s = estimate_constant(&sin(), (0.0, 2.0 * std::f64::consts::PI), 10_000).unwrap();
        assert!(s >= 0.999);
    }

    #[test]
    fn rescale_examples() {
        let f = rescale(&identity(), 5.0).unwrap();
        assert!((f.eval(3.7) - 3.7).abs() < 1e-15);
        assert_eq!(rescale(&abs(), 2.0).unwrap().eval(-4.0), 4.0);
        let g = rescale(&rescale(&sin(), 3.0).unwrap(), 1.0 / 3.0).unwrap();
        for i in 0..50 {
            let t = -5.0 + 0.2 * i as f64;
            assert!((g.eval(t) - t.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn divided_difference_covariance_under_rescale() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let f = pinned_piecewise();
        for _ in 0..100 {
            let lam: f64 = rng.random_range(-2.0..2.0);
            let mu: f64 = rng.random_range(-2.0..2.0);
            let n: f64 = rng.random_range(0.5..20.0);
            let g = rescale(&f, n).unwrap();
            let lhs = (g.eval(n * lam) - g.eval(n * mu)) / (n * lam - n * mu);
            let rhs = (f.eval(lam) - f.eval(mu)) / (lam - mu);
            assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn piecewise_csv_roundtrip() {
        let f = pinned_piecewise();
        let p = f.as_piecewise().unwrap();
        let csv = p.to_csv();
        assert!(csv.ends_with(",1\n"));
        assert_eq!(&PiecewiseLinear::from_csv(&csv).unwrap(), p);
        assert!(PiecewiseLinear::from_csv("breakpoint,left_slope\n0,1\n").is_err());
    }
}
