//! Target representation functions and sparsity bounds.
//!
//! A [`TargetFunction`] is a function `f: Z -> N0 ∪ {∞}` with finitely many
//! zeros, described by a finite window of explicit values and a constant
//! default outside it. A [`SparsityBound`] is a monotone, unbounded function
//! `φ` that caps the counting function of the constructed set, or
//! [`SparsityBound::Unbounded`] when no cap is wanted.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TargetError {
    #[error("default value must be at least 1 so that f has finitely many zeros")]
    ZeroDefault,
    #[error("window is inverted: window_lo = {lo} > window_hi = {hi}")]
    InvertedWindow { lo: i64, hi: i64 },
    #[error("n = {0} lies outside the declared window")]
    OutsideWindow(i64),
    #[error("invalid sparsity bound: {0}")]
    InvalidPhi(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An element of `N0 ∪ {∞}`.
///
/// Every finite value is smaller than [`ExtCount::Infinite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtCount {
    Finite(u64),
    Infinite,
}

impl ExtCount {
    pub fn is_zero(self) -> bool {
        self == ExtCount::Finite(0)
    }

    /// `self >= n`.
    pub fn covers(self, n: u64) -> bool {
        match self {
            ExtCount::Finite(v) => v >= n,
            ExtCount::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtCount::Finite(v) => Some(v),
            ExtCount::Infinite => None,
        }
    }
}

impl From<u64> for ExtCount {
    fn from(v: u64) -> Self {
        ExtCount::Finite(v)
    }
}

impl PartialEq<u64> for ExtCount {
    fn eq(&self, other: &u64) -> bool {
        *self == ExtCount::Finite(*other)
    }
}

impl PartialOrd<u64> for ExtCount {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(self.cmp(&ExtCount::Finite(*other)))
    }
}

impl fmt::Display for ExtCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCount::Finite(v) => write!(f, "{v}"),
            ExtCount::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtCount {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inf" | "infinity" | "∞" => Ok(ExtCount::Infinite),
            _ => s
                .parse::<u64>()
                .map(ExtCount::Finite)
                .map_err(|_| format!("expected a count or `inf`, found `{s}`")),
        }
    }
}

/// `f: Z -> N0 ∪ {∞}` given by explicit values on a window and a default
/// elsewhere. Zeros can only occur inside the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetFunction {
    window: Option<(i64, i64)>,
    values: Vec<ExtCount>,
    default: ExtCount,
}

impl TargetFunction {
    /// The constant function `f(n) = value`.
    pub fn constant(value: ExtCount) -> Result<Self, TargetError> {
        if value.is_zero() {
            return Err(TargetError::ZeroDefault);
        }
        Ok(TargetFunction {
            window: None,
            values: Vec::new(),
            default: value,
        })
    }

    /// A function equal to `default` everywhere, with an editable window
    /// `[lo, hi]`.
    pub fn with_window(lo: i64, hi: i64, default: ExtCount) -> Result<Self, TargetError> {
        if lo > hi {
            return Err(TargetError::InvertedWindow { lo, hi });
        }
        let mut f = Self::constant(default)?;
        let len = usize::try_from(hi - lo + 1).expect("window too large");
        f.window = Some((lo, hi));
        f.values = vec![default; len];
        Ok(f)
    }

    /// Zeros on `|n| <= delta`, one elsewhere (`Δ = 2δ + 1`).
    pub fn symmetric_gap(delta: u32) -> Self {
        let d = i64::from(delta);
        let mut f = Self::with_window(-d, d, ExtCount::Finite(1)).unwrap();
        for n in -d..=d {
            f.set(n, ExtCount::Finite(0)).unwrap();
        }
        f
    }

    /// Zeros on `-delta <= n <= delta - 1`, one elsewhere (`Δ = 2δ`).
    pub fn shifted_gap(delta: u32) -> Self {
        let one = ExtCount::Finite(1);
        if delta == 0 {
            return Self::constant(one).unwrap();
        }
        let d = i64::from(delta);
        let mut f = Self::with_window(-d, d - 1, one).unwrap();
        for n in -d..d {
            f.set(n, ExtCount::Finite(0)).unwrap();
        }
        f
    }

    pub fn set(&mut self, n: i64, value: ExtCount) -> Result<(), TargetError> {
        let idx = self.index(n).ok_or(TargetError::OutsideWindow(n))?;
        self.values[idx] = value;
        Ok(())
    }

    fn index(&self, n: i64) -> Option<usize> {
        let (lo, hi) = self.window?;
        if n < lo || n > hi {
            return None;
        }
        usize::try_from(n - lo).ok()
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        self.window
    }

    pub fn default_value(&self) -> ExtCount {
        self.default
    }

    pub fn eval_i64(&self, n: i64) -> ExtCount {
        match self.index(n) {
            Some(idx) => self.values[idx],
            None => self.default,
        }
    }

    pub fn eval(&self, n: &BigInt) -> ExtCount {
        match n.to_i64() {
            Some(n) => self.eval_i64(n),
            None => self.default,
        }
    }

    /// Window entries as `(n, f(n))` pairs in increasing `n`.
    pub fn window_entries(&self) -> impl Iterator<Item = (i64, ExtCount)> + '_ {
        let lo = self.window.map_or(0, |(lo, _)| lo);
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (lo + i as i64, *v))
    }

    pub fn zeros(&self) -> impl Iterator<Item = i64> + '_ {
        self.window_entries()
            .filter(|(_, v)| v.is_zero())
            .map(|(n, _)| n)
    }

    /// `Δ = card(f⁻¹(0))`.
    pub fn delta(&self) -> u64 {
        self.zeros().count() as u64
    }

    /// The least `d >= 0` with `f(n) >= 1` whenever `|n| >= d`.
    pub fn d0(&self) -> u64 {
        self.zeros()
            .map(|n| n.unsigned_abs() + 1)
            .max()
            .unwrap_or(0)
    }
}

/// Built-in families of sparsity bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiFamily {
    LogScaled,
    Power,
    Affine,
    Table,
    /// No sparsity requirement at all (`φ ≡ ∞`).
    Unbounded,
}

impl PhiFamily {
    pub fn name(self) -> &'static str {
        match self {
            PhiFamily::LogScaled => "log-scaled",
            PhiFamily::Power => "power",
            PhiFamily::Affine => "affine",
            PhiFamily::Table => "table",
            PhiFamily::Unbounded => "none",
        }
    }
}

impl FromStr for PhiFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log-scaled" | "log" => Ok(PhiFamily::LogScaled),
            "power" => Ok(PhiFamily::Power),
            "affine" => Ok(PhiFamily::Affine),
            "table" => Ok(PhiFamily::Table),
            "none" => Ok(PhiFamily::Unbounded),
            _ => Err(format!("unknown phi family `{s}`")),
        }
    }
}

/// A nonnegative, nondecreasing, unbounded function `φ` on `x >= 0`.
///
/// Parameters are exact rationals and every comparison `φ(x) >= t` is
/// decided exactly, including for the logarithmic and fractional-power
/// families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SparsityBound {
    /// `slope * x + intercept`
    Affine {
        slope: BigRational,
        intercept: BigRational,
    },
    /// `coeff * x^exponent`
    Power {
        coeff: BigRational,
        exponent: BigRational,
    },
    /// `coeff * log2(1 + x) + intercept`
    LogScaled {
        coeff: BigRational,
        intercept: BigRational,
    },
    /// Step function through `(x_i, v_i)`, continued past the last
    /// breakpoint as `v_m + growth * (x - x_m)`.
    Table {
        breakpoints: Vec<(BigInt, BigRational)>,
        growth: BigRational,
    },
    /// `φ ≡ ∞`: every threshold is `0` and the sparsity check is vacuous.
    Unbounded,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn small_exponent(r: &BigInt) -> Result<u32, TargetError> {
    r.to_u32()
        .ok_or_else(|| TargetError::InvalidPhi(format!("exponent part {r} is too large")))
}

impl SparsityBound {
    /// `φ(x) = x`.
    pub fn identity() -> Self {
        SparsityBound::Affine {
            slope: rat(1),
            intercept: rat(0),
        }
    }

    pub fn from_params(family: PhiFamily, params: &[BigRational]) -> Result<Self, TargetError> {
        let bad = |msg: &str| Err(TargetError::InvalidPhi(format!("{}: {msg}", family.name())));
        let phi = match family {
            PhiFamily::Affine => {
                let (slope, intercept) = match params {
                    [s] => (s.clone(), rat(0)),
                    [s, i] => (s.clone(), i.clone()),
                    _ => return bad("expected `slope[,intercept]`"),
                };
                if !slope.is_positive() || intercept.is_negative() {
                    return bad("slope must be positive and intercept nonnegative");
                }
                SparsityBound::Affine { slope, intercept }
            }
            PhiFamily::Power => {
                let [coeff, exponent] = params else {
                    return bad("expected `coeff,exponent`");
                };
                if !coeff.is_positive() || !exponent.is_positive() {
                    return bad("coefficient and exponent must be positive");
                }
                small_exponent(exponent.numer())?;
                small_exponent(exponent.denom())?;
                SparsityBound::Power {
                    coeff: coeff.clone(),
                    exponent: exponent.clone(),
                }
            }
            PhiFamily::LogScaled => {
                let (coeff, intercept) = match params {
                    [c] => (c.clone(), rat(0)),
                    [c, i] => (c.clone(), i.clone()),
                    _ => return bad("expected `coeff[,intercept]`"),
                };
                if !coeff.is_positive() || intercept.is_negative() {
                    return bad("coefficient must be positive and intercept nonnegative");
                }
                SparsityBound::LogScaled { coeff, intercept }
            }
            PhiFamily::Table => {
                if params.len() < 3 || params.len().is_multiple_of(2) {
                    return bad("expected `x1,v1,...,xm,vm,growth`");
                }
                let growth = params[params.len() - 1].clone();
                let mut breakpoints: Vec<(BigInt, BigRational)> = Vec::new();
                for pair in params[..params.len() - 1].chunks(2) {
                    if !pair[0].is_integer() {
                        return bad("breakpoint positions must be integers");
                    }
                    let x = pair[0].to_integer();
                    let v = pair[1].clone();
                    if v.is_negative() {
                        return bad("values must be nonnegative");
                    }
                    if let Some((px, pv)) = breakpoints.last() {
                        if x <= *px || v < *pv {
                            return bad("breakpoints must increase and values must not decrease");
                        }
                    } else if !x.is_zero() {
                        return bad("first breakpoint must be at x = 0");
                    }
                    breakpoints.push((x, v));
                }
                if !growth.is_positive() {
                    return bad("growth must be positive");
                }
                SparsityBound::Table {
                    breakpoints,
                    growth,
                }
            }
            PhiFamily::Unbounded => {
                if !params.is_empty() {
                    return bad("takes no parameters");
                }
                SparsityBound::Unbounded
            }
        };
        Ok(phi)
    }

    pub fn family(&self) -> PhiFamily {
        match self {
            SparsityBound::Affine { .. } => PhiFamily::Affine,
            SparsityBound::Power { .. } => PhiFamily::Power,
            SparsityBound::LogScaled { .. } => PhiFamily::LogScaled,
            SparsityBound::Table { .. } => PhiFamily::Table,
            SparsityBound::Unbounded => PhiFamily::Unbounded,
        }
    }

    pub fn params(&self) -> Vec<BigRational> {
        match self {
            SparsityBound::Affine { slope, intercept } => vec![slope.clone(), intercept.clone()],
            SparsityBound::Power { coeff, exponent } => vec![coeff.clone(), exponent.clone()],
            SparsityBound::LogScaled { coeff, intercept } => {
                vec![coeff.clone(), intercept.clone()]
            }
            SparsityBound::Table {
                breakpoints,
                growth,
            } => breakpoints
                .iter()
                .flat_map(|(x, v)| [BigRational::from_integer(x.clone()), v.clone()])
                .chain(std::iter::once(growth.clone()))
                .collect(),
            SparsityBound::Unbounded => Vec::new(),
        }
    }

    /// Decides `φ(x) >= target` exactly. `x` is clamped to `0` from below.
    pub fn reaches(&self, x: &BigInt, target: u64) -> bool {
        let x = if x.is_negative() {
            BigInt::zero()
        } else {
            x.clone()
        };
        let t = BigRational::from_integer(BigInt::from(target));
        match self {
            SparsityBound::Affine { slope, intercept } => {
                slope * BigRational::from_integer(x) + intercept >= t
            }
            SparsityBound::Power { coeff, exponent } => {
                if !t.is_positive() {
                    return true;
                }
                // x^(p/q) >= a/b  <=>  x^p * b^q >= a^q
                let ratio = t / coeff;
                let p = exponent.numer().to_u32().unwrap();
                let q = exponent.denom().to_u32().unwrap();
                Pow::pow(&x, p) * Pow::pow(ratio.denom(), q) >= Pow::pow(ratio.numer(), q)
            }
            SparsityBound::LogScaled { coeff, intercept } => {
                let ratio = (t - intercept) / coeff;
                if !ratio.is_positive() {
                    return true;
                }
                // log2(1+x) >= a/b  <=>  (1+x)^b >= 2^a
                let (Some(a), Some(b)) = (ratio.numer().to_u32(), ratio.denom().to_u32()) else {
                    return false;
                };
                Pow::pow(&(x + 1u32), b) >= Pow::pow(&BigInt::from(2u32), a)
            }
            SparsityBound::Table {
                breakpoints,
                growth,
            } => {
                let idx = breakpoints.partition_point(|(bx, _)| *bx <= x) - 1;
                let (bx, v) = &breakpoints[idx];
                let value = if idx + 1 == breakpoints.len() {
                    v + growth * BigRational::from_integer(&x - bx)
                } else {
                    v.clone()
                };
                value >= t
            }
            SparsityBound::Unbounded => true,
        }
    }

    /// Approximate `φ(x)` for display purposes.
    pub fn approx(&self, x: f64) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let x = x.max(0.0);
        match self {
            SparsityBound::Affine { slope, intercept } => f(slope) * x + f(intercept),
            SparsityBound::Power { coeff, exponent } => f(coeff) * x.powf(f(exponent)),
            SparsityBound::LogScaled { coeff, intercept } => {
                f(coeff) * (1.0 + x).log2() + f(intercept)
            }
            SparsityBound::Table {
                breakpoints,
                growth,
            } => {
                let idx = breakpoints
                    .partition_point(|(bx, _)| bx.to_f64().unwrap_or(f64::INFINITY) <= x)
                    .max(1)
                    - 1;
                let (bx, v) = &breakpoints[idx];
                if idx + 1 == breakpoints.len() {
                    f(v) + f(growth) * (x - bx.to_f64().unwrap_or(0.0))
                } else {
                    f(v)
                }
            }
            SparsityBound::Unbounded => f64::INFINITY,
        }
    }
}

/// `w_k`: the least integer `x >= 0` with `φ(x) >= 2k`.
///
/// Found by doubling until the bound is reached, then bisecting; monotonicity
/// of `φ` makes the answer valid for every `y >= x` as well.
pub fn sparsity_threshold(phi: &SparsityBound, k: u64) -> BigInt {
    let target = 2 * k;
    if phi.reaches(&BigInt::zero(), target) {
        return BigInt::zero();
    }
    let mut lo = BigInt::zero(); // invariant: !reaches(lo)
    let mut hi = BigInt::one();
    while !phi.reaches(&hi, target) {
        lo = hi.clone();
        hi <<= 1;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if phi.reaches(&mid, target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("malformed integer `{t}`"))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(BigRational::new(parse_int(p)?, q))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One meaningful line of a config file: a key and its value tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigLine {
    pub line: usize,
    pub key: String,
    pub args: Vec<String>,
}

impl ConfigLine {
    pub fn error(&self, msg: impl Into<String>) -> TargetError {
        TargetError::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    /// The single value of a `key = value` line.
    pub fn value(&self) -> Result<&str, TargetError> {
        match self.args.as_slice() {
            [v] => Ok(v),
            _ => Err(self.error(format!("`{}` expects exactly one value", self.key))),
        }
    }

    pub fn parse_value<T: FromStr>(&self) -> Result<T, TargetError> {
        let v = self.value()?;
        v.parse()
            .map_err(|_| self.error(format!("malformed value `{v}` for `{}`", self.key)))
    }
}

/// Splits config text into key/argument lines. `=` and whitespace both
/// separate tokens, `#` starts a comment and blank lines are skipped.
pub fn config_lines(text: &str) -> Vec<ConfigLine> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = body
                .split(|c: char| c == '=' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(str::to_owned);
            let key = tokens.next()?;
            Some(ConfigLine {
                line: i + 1,
                key,
                args: tokens.collect(),
            })
        })
        .collect()
}

/// The target function and sparsity bound read from a config file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetConfig {
    pub f: TargetFunction,
    pub phi: SparsityBound,
}

impl TargetConfig {
    /// Parses the target-function keys, returning the lines it did not
    /// recognise so a caller can layer further keys on top.
    pub fn from_lines(lines: Vec<ConfigLine>) -> Result<(Self, Vec<ConfigLine>), TargetError> {
        let mut lo = None;
        let mut hi = None;
        let mut default = ExtCount::Finite(1);
        let mut values = Vec::new();
        let mut family = None;
        let mut params = None;
        let mut rest = Vec::new();
        for line in lines {
            match line.key.as_str() {
                "window_lo" => lo = Some(line.parse_value::<i64>()?),
                "window_hi" => hi = Some(line.parse_value::<i64>()?),
                "default" => default = line.parse_value()?,
                "value" => {
                    let [n, v] = line.args.as_slice() else {
                        return Err(line.error("expected `value <n> <count|inf>`"));
                    };
                    let n: i64 = n
                        .parse()
                        .map_err(|_| line.error(format!("malformed integer `{n}`")))?;
                    let v: ExtCount = v.parse().map_err(|e: String| line.error(e))?;
                    values.push((line.line, n, v));
                }
                "phi_family" => {
                    family = Some(
                        line.value()?
                            .parse::<PhiFamily>()
                            .map_err(|e| line.error(e))?,
                    )
                }
                "phi_params" => {
                    let joined = line.args.join("");
                    let parsed = joined
                        .split(',')
                        .filter(|t| !t.is_empty())
                        .map(parse_rational)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| line.error(e))?;
                    params = Some(parsed);
                }
                _ => rest.push(line),
            }
        }
        let mut f = match (lo, hi) {
            (Some(lo), Some(hi)) => TargetFunction::with_window(lo, hi, default)?,
            (None, None) => TargetFunction::constant(default)?,
            _ => {
                return Err(TargetError::Parse {
                    line: 0,
                    msg: "window_lo and window_hi must be given together".into(),
                })
            }
        };
        for (line, n, v) in values {
            f.set(n, v).map_err(|e| TargetError::Parse {
                line,
                msg: e.to_string(),
            })?;
        }
        let phi = match (family, params) {
            (Some(family), Some(params)) => SparsityBound::from_params(family, &params)?,
            (Some(PhiFamily::Unbounded), None) | (None, None) => SparsityBound::Unbounded,
            (Some(family), None) => {
                return Err(TargetError::InvalidPhi(format!(
                    "phi_family = {} given without phi_params",
                    family.name()
                )))
            }
            (None, Some(_)) => {
                return Err(TargetError::InvalidPhi(
                    "phi_params given without phi_family".into(),
                ))
            }
        };
        Ok((TargetConfig { f, phi }, rest))
    }

    /// Parses a config that contains only target-function keys.
    pub fn parse(text: &str) -> Result<Self, TargetError> {
        let (cfg, rest) = Self::from_lines(config_lines(text))?;
        if let Some(line) = rest.first() {
            return Err(line.error(format!("unknown key `{}`", line.key)));
        }
        Ok(cfg)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some((lo, hi)) = self.f.window() {
            out.push_str(&format!("window_lo={lo}\nwindow_hi={hi}\n"));
        }
        out.push_str(&format!("default={}\n", self.f.default_value()));
        for (n, v) in self.f.window_entries() {
            out.push_str(&format!("value {n} {v}\n"));
        }
        out.push_str(&format!("phi_family={}\n", self.phi.family().name()));
        let params: Vec<String> = self.phi.params().iter().map(render_rational).collect();
        if !params.is_empty() {
            out.push_str(&format!("phi_params={}\n", params.join(",")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(s: &str) -> Vec<BigRational> {
        s.split(',').map(|t| parse_rational(t).unwrap()).collect()
    }

    fn log2_phi() -> SparsityBound {
        SparsityBound::from_params(PhiFamily::LogScaled, &params("2")).unwrap()
    }

    #[test]
    fn ext_count_order() {
        assert!(ExtCount::Finite(u64::MAX) < ExtCount::Infinite);
        assert!(ExtCount::Finite(2) > ExtCount::Finite(1));
        assert!(ExtCount::Infinite.covers(1 << 40));
        assert!(!ExtCount::Finite(3).covers(4));
        assert_eq!("inf".parse::<ExtCount>(), Ok(ExtCount::Infinite));
        assert!("-1".parse::<ExtCount>().is_err());
    }

    #[test]
    fn eval_window_and_default() {
        let mut f = TargetFunction::with_window(0, 0, ExtCount::Finite(1)).unwrap();
        f.set(0, ExtCount::Finite(0)).unwrap();
        assert_eq!(f.eval_i64(0), 0);
        assert_eq!(f.eval_i64(7), 1);
        assert_eq!(TargetFunction::symmetric_gap(1).eval_i64(1), 0);
        let huge: BigInt = BigInt::from(10).pow(40u32);
        assert_eq!(f.eval(&huge), 1);
    }

    #[test]
    fn delta_and_d0() {
        let one = TargetFunction::constant(ExtCount::Finite(1)).unwrap();
        assert_eq!((one.delta(), one.d0()), (0, 0));
        let odd = TargetFunction::symmetric_gap(1);
        assert_eq!((odd.delta(), odd.d0()), (3, 2));
        let even = TargetFunction::shifted_gap(2);
        assert_eq!((even.delta(), even.d0()), (4, 3));
        assert_eq!(TargetFunction::shifted_gap(0), one);
    }

    #[test]
    fn rejects_bad_targets() {
        assert_eq!(
            TargetFunction::constant(ExtCount::Finite(0)),
            Err(TargetError::ZeroDefault)
        );
        assert!(matches!(
            TargetFunction::with_window(2, 1, ExtCount::Finite(1)),
            Err(TargetError::InvertedWindow { .. })
        ));
        let mut f = TargetFunction::with_window(0, 1, ExtCount::Finite(1)).unwrap();
        assert_eq!(
            f.set(5, ExtCount::Finite(0)),
            Err(TargetError::OutsideWindow(5))
        );
    }

    #[test]
    fn thresholds() {
        assert_eq!(
            sparsity_threshold(&SparsityBound::identity(), 3),
            BigInt::from(6)
        );
        assert_eq!(sparsity_threshold(&log2_phi(), 2), BigInt::from(3));
        let table = SparsityBound::from_params(PhiFamily::Table, &params("0,10,100,10,1")).unwrap();
        assert_eq!(sparsity_threshold(&table, 5), BigInt::zero());
        assert_eq!(sparsity_threshold(&table, 6), BigInt::from(102));
        assert_eq!(
            sparsity_threshold(&SparsityBound::Unbounded, 1 << 40),
            BigInt::zero()
        );
    }

    #[test]
    fn phi_defaults_to_unbounded() {
        let cfg = TargetConfig::parse("default = 1\n").unwrap();
        assert_eq!(cfg.phi, SparsityBound::Unbounded);
        assert_eq!(cfg.render(), "default=1\nphi_family=none\n");
        assert!(TargetConfig::parse("phi_family = none\nphi_params = 1\n").is_err());
    }

    #[test]
    fn exact_log_and_power_comparisons() {
        let phi = log2_phi();
        // 2 log2(1 + x) >= 4  <=>  x >= 3
        assert!(!phi.reaches(&BigInt::from(2), 4));
        assert!(phi.reaches(&BigInt::from(3), 4));
        let sqrt = SparsityBound::from_params(PhiFamily::Power, &params("1,1/2")).unwrap();
        assert!(sqrt.reaches(&BigInt::from(9), 3));
        assert!(!sqrt.reaches(&BigInt::from(8), 3));
        assert_eq!(sparsity_threshold(&sqrt, 5), BigInt::from(100));
    }

    #[test]
    fn rejects_bad_phi() {
        for (family, p) in [
            (PhiFamily::Affine, "0"),
            (PhiFamily::Affine, "1,-1"),
            (PhiFamily::Power, "1,0"),
            (PhiFamily::LogScaled, "-2"),
            (PhiFamily::Table, "0,10"),
            (PhiFamily::Table, "1,10,0"),
            (PhiFamily::Table, "0,10,5,3,1"),
            (PhiFamily::Table, "0,1,1/2,2,1"),
        ] {
            assert!(
                SparsityBound::from_params(family, &params(p)).is_err(),
                "{family:?} {p}"
            );
        }
    }

    #[test]
    fn config_round_trip() {
        let text = "\
# odd gap
window_lo = -1
window_hi = 2
value -1 0
value 0 0
value 1 0
value 2 inf
default = 2
phi_family = log-scaled
phi_params = 3/2, 1
";
        let cfg = TargetConfig::parse(text).unwrap();
        assert_eq!(cfg.f.delta(), 3);
        assert_eq!(cfg.f.eval_i64(2), ExtCount::Infinite);
        assert_eq!(cfg.f.eval_i64(-5), 2);
        let again = TargetConfig::parse(&cfg.render()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn config_errors_name_the_line() {
        let err = TargetConfig::parse("window_lo = 0\nwindow_hi = 0\nvalue 3 1\n").unwrap_err();
        assert!(matches!(err, TargetError::Parse { line: 3, .. }), "{err}");
        let err = TargetConfig::parse("default = zero\n").unwrap_err();
        assert!(matches!(err, TargetError::Parse { line: 1, .. }));
        assert!(TargetConfig::parse("bogus = 1\n").is_err());
        assert!(TargetConfig::parse("default = 0\n").is_err());
        assert!(TargetConfig::parse("phi_params = 1/0\nphi_family = affine\n").is_err());
    }
}
