//! Weighted monogamy and polygamy bounds.
//!
//! Everything rests on two scalar estimates of `(1+t)^x` for `t ≥ a ≥ 1`:
//!
//! ```text
//! (1+t)^x ≥ (1+a)^{x-1} + (1+1/a)^{x-1} t^x      0 < x ≤ 1
//! (1+t)^x ≤ (1+a)^{x-1} + (1+1/a)^{x-1} t^x      x ≥ 1
//! ```
//!
//! and the older family `f + ((1+a)^x - f)/a^x · t^x` with `f = 1`,
//! `f = p^x` or `f = (1/2)^x`, which the first estimate dominates.
//! Applying the estimate to `Q^α = (Q^r)^{α/r}` turns a base relation on
//! the `r`-th power (`Q^r_{A1|rest} ≥ Σ Q^r_{A1Ai}`, or the reverse with
//! exponent `s` for polygamy) into weighted relations for other powers.
//!
//! Pairwise values are always sorted descending before use; ties keep
//! their original order. A pairwise value of exactly zero contributes
//! `0^x = 0` for `x > 0` and counts as satisfying the ratio condition.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::measures::{MeasureKind, MeasureVector};

/// Relative slack when testing `v_i^e ≥ a v_{i+1}^e`, so that `a` equal to the
/// largest admissible value passes despite rounding.
pub const RATIO_RTOL: f64 = 1e-12;

/// Bases above this are raised to powers in log space.
pub const LOG_SPACE_THRESHOLD: f64 = 1e8;

/// Absolute comparison tolerance for values of order one.
pub const ABS_TOL: f64 = 1e-9;

/// Relative comparison tolerance, used once magnitudes exceed [`REL_TOL_ABOVE`].
pub const REL_TOL: f64 = 1e-9;

pub const REL_TOL_ABOVE: f64 = 1e3;

/// Comparison tolerance for a quantity of the given magnitude.
pub fn comparison_tolerance(magnitude: f64) -> f64 {
    if magnitude.abs() > REL_TOL_ABOVE {
        REL_TOL * magnitude.abs()
    } else {
        ABS_TOL
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("ratio parameter a = {0} must be finite and at least 1")]
    InvalidA(f64),
    #[error("t = {t} must satisfy t >= a = {a}")]
    TBelowA { t: f64, a: f64 },
    #[error("exponent x = {x} outside the {what} domain")]
    ExponentDomain { x: f64, what: &'static str },
    #[error("{0}")]
    InvalidSpec(String),
    #[error("{variant} needs parameter in {range}, got {value}")]
    VariantParameter {
        variant: &'static str,
        range: &'static str,
        value: f64,
    },
    #[error("values must be sorted in descending order")]
    Unsorted,
    #[error("values must be finite and nonnegative, got {0}")]
    Negative(f64),
    #[error("ratio condition fails for a = {a} (largest admissible a is {max_admissible})")]
    RatioCondition { a: f64, max_admissible: f64 },
    #[error("variant {variant} is only defined for two pairwise values, got {count}")]
    TripartiteOnly { variant: Variant, count: usize },
}

pub type Result<T> = std::result::Result<T, BoundError>;

/// Which estimate of `(1+t)^x` a bound is built on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", content = "param", rename_all = "snake_case")]
pub enum Variant {
    /// `(1+a)^{x-1} + (1+1/a)^{x-1} t^x`
    Ours,
    /// `f = 1`
    Jfq,
    /// `f = p^x`, with `p ∈ [1/2, 1]` for lower bounds and `q ∈ (0, 1]` for upper bounds.
    Zjz1(f64),
    /// `f = (1/2)^x`
    Zjz2,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Ours => "ours",
            Variant::Jfq => "jfq",
            Variant::Zjz1(_) => "zjz1",
            Variant::Zjz2 => "zjz2",
        }
    }

    /// The offset `f(x)` of the older family; `None` for [`Variant::Ours`].
    fn offset(self, x: f64) -> Option<f64> {
        match self {
            Variant::Ours => None,
            Variant::Jfq => Some(1.0),
            Variant::Zjz1(p) => Some(p.powf(x)),
            Variant::Zjz2 => Some(0.5f64.powf(x)),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Zjz1(p) => write!(f, "zjz1({p})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Variant {
    type Err = String;

    /// Accepts `ours`, `jfq`, `zjz2`, `zjz1` (p = 1/2) and `zjz1(0.75)` / `zjz1:0.75`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "ours" => return Ok(Variant::Ours),
            "jfq" => return Ok(Variant::Jfq),
            "zjz2" => return Ok(Variant::Zjz2),
            "zjz1" => return Ok(Variant::Zjz1(0.5)),
            _ => {}
        }
        let param = key
            .strip_prefix("zjz1(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| key.strip_prefix("zjz1:"));
        match param.map(crate::state_spec::parse_number) {
            Some(Ok(p)) => Ok(Variant::Zjz1(p)),
            _ => Err(format!(
                "unknown variant '{s}' (expected ours, jfq, zjz1[(p)] or zjz2)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Monogamy,
    Polygamy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Monogamy => "monogamy",
            Mode::Polygamy => "polygamy",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "monogamy" | "mono" | "lower" => Ok(Mode::Monogamy),
            "polygamy" | "poly" | "upper" => Ok(Mode::Polygamy),
            _ => Err(format!(
                "unknown mode '{s}' (expected monogamy or polygamy)"
            )),
        }
    }
}

/// `base^exp`, switching to `exp(exp · ln base)` for large bases.
fn power(base: f64, exp: f64) -> f64 {
    if base > LOG_SPACE_THRESHOLD {
        (exp * base.ln()).exp()
    } else {
        base.powf(exp)
    }
}

/// `weight_base^weight_exp · v^x` with the zero convention `0^x = 0` for `x > 0`.
fn weighted_power(weight_base: f64, weight_exp: f64, v: f64, x: f64) -> f64 {
    if v == 0.0 {
        return if x == 0.0 {
            power(weight_base, weight_exp)
        } else {
            0.0
        };
    }
    if weight_base > LOG_SPACE_THRESHOLD || v > LOG_SPACE_THRESHOLD {
        (weight_exp * weight_base.ln() + x * v.ln()).exp()
    } else {
        weight_base.powf(weight_exp) * v.powf(x)
    }
}

fn check_a(a: f64) -> Result<()> {
    if !a.is_finite() || a < 1.0 {
        return Err(BoundError::InvalidA(a));
    }
    Ok(())
}

fn check_t(t: f64, a: f64) -> Result<()> {
    if !t.is_finite() || t < a {
        return Err(BoundError::TBelowA { t, a });
    }
    Ok(())
}

fn scalar_family(t: f64, x: f64, a: f64, variant: Variant) -> f64 {
    match variant.offset(x) {
        None => power(1.0 + a, x - 1.0) + weighted_power(1.0 + 1.0 / a, x - 1.0, t, x),
        Some(f) => f + (power(1.0 + a, x) - f) / power(a, x) * power(t, x),
    }
}

/// Lower estimate of `(1+t)^x` for `t ≥ a ≥ 1`.
///
/// `x ∈ [0, 1]` for `Ours` and `Jfq`, `x ∈ [0, 1/2]` for the `Zjz` variants
/// (`p ∈ [1/2, 1]`).
pub fn scalar_lower_bound(t: f64, x: f64, a: f64, variant: Variant) -> Result<f64> {
    check_a(a)?;
    check_t(t, a)?;
    check_lower_variant(x, variant)?;
    Ok(scalar_family(t, x, a, variant))
}

/// Upper estimate of `(1+t)^x` for `t ≥ a ≥ 1` and `x ≥ 1` (`q ∈ (0, 1]` for `Zjz1`).
pub fn scalar_upper_bound(t: f64, x: f64, a: f64, variant: Variant) -> Result<f64> {
    check_a(a)?;
    check_t(t, a)?;
    check_upper_variant(x, variant)?;
    Ok(scalar_family(t, x, a, variant))
}

fn check_lower_variant(x: f64, variant: Variant) -> Result<()> {
    match variant {
        Variant::Ours | Variant::Jfq => {
            if !(0.0..=1.0).contains(&x) {
                return Err(BoundError::ExponentDomain {
                    x,
                    what: "0 <= x <= 1",
                });
            }
        }
        Variant::Zjz1(_) | Variant::Zjz2 => {
            if let Variant::Zjz1(p) = variant {
                if !(0.5..=1.0).contains(&p) {
                    return Err(BoundError::VariantParameter {
                        variant: "zjz1",
                        range: "[1/2, 1]",
                        value: p,
                    });
                }
            }
            if !(0.0..=0.5).contains(&x) {
                return Err(BoundError::ExponentDomain {
                    x,
                    what: "0 <= x <= 1/2",
                });
            }
        }
    }
    Ok(())
}

fn check_upper_variant(x: f64, variant: Variant) -> Result<()> {
    if !(x >= 1.0 && x.is_finite()) {
        return Err(BoundError::ExponentDomain { x, what: "x >= 1" });
    }
    if let Variant::Zjz1(q) = variant {
        if !(q > 0.0 && q <= 1.0) {
            return Err(BoundError::VariantParameter {
                variant: "zjz1",
                range: "(0, 1]",
                value: q,
            });
        }
    }
    Ok(())
}

fn check_values(values: &[f64]) -> Result<()> {
    if let Some(&v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(BoundError::Negative(v));
    }
    Ok(())
}

fn check_sorted(values: &[f64]) -> Result<()> {
    check_values(values)?;
    if values.windows(2).any(|w| w[0] < w[1]) {
        return Err(BoundError::Unsorted);
    }
    Ok(())
}

/// `(1+a)^{x-1} Σ_{i=1}^{n} ((1+1/a)^{x-1})^{n-i} v_(i)^x` over values sorted descending.
///
/// This is a lower bound on `(Σ v)^x` for `x ≤ 1` and an upper bound for
/// `x ≥ 1`, whenever `v_(i) ≥ a v_(i+1)`. For two values it is weaker than
/// [`chained_weighted_sum`] by the factor `(1+a)^{x-1}` on the leading term.
pub fn ordered_weighted_sum(values: &[f64], x: f64, a: f64) -> Result<f64> {
    check_sorted(values)?;
    check_a(a)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(BoundError::ExponentDomain { x, what: "x >= 0" });
    }
    let n = values.len();
    let sum: f64 = values
        .iter()
        .enumerate()
        .map(|(i, &v)| weighted_power(1.0 + 1.0 / a, (x - 1.0) * (n - 1 - i) as f64, v, x))
        .sum();
    Ok(power(1.0 + a, x - 1.0) * sum)
}

/// The bound obtained by peeling off the smallest value with the scalar
/// estimate until one value is left:
///
/// ```text
/// c^{n-1} v_(1)^x + (1+a)^{x-1} Σ_{i=2}^{n} c^{n-i} v_(i)^x,   c = (1+1/a)^{x-1}
/// ```
///
/// For two values this is exactly `(1+a)^{x-1} v_(2)^x + (1+1/a)^{x-1} v_(1)^x`.
pub fn chained_weighted_sum(values: &[f64], x: f64, a: f64) -> Result<f64> {
    check_sorted(values)?;
    check_a(a)?;
    if !(x >= 0.0 && x.is_finite()) {
        return Err(BoundError::ExponentDomain { x, what: "x >= 0" });
    }
    let n = values.len();
    let Some(&lead) = values.first() else {
        return Ok(0.0);
    };
    let head = weighted_power(1.0 + 1.0 / a, (x - 1.0) * (n - 1) as f64, lead, x);
    let tail: f64 = values[1..]
        .iter()
        .enumerate()
        .map(|(j, &v)| weighted_power(1.0 + 1.0 / a, (x - 1.0) * (n - 2 - j) as f64, v, x))
        .sum();
    Ok(head + power(1.0 + a, x - 1.0) * tail)
}

/// Values sorted descending; ties keep their input order.
pub fn sorted_descending(values: &[f64]) -> Vec<f64> {
    let mut out = values.to_vec();
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

/// Whether `v_(i)^e ≥ a v_(i+1)^e` for every consecutive pair of the sorted values.
pub fn ratio_condition(values: &[f64], a: f64, exponent: f64) -> bool {
    sorted_descending(values).windows(2).all(|w| {
        let (hi, lo) = (w[0], w[1]);
        lo == 0.0 || hi.powf(exponent) >= a * lo.powf(exponent) * (1.0 - RATIO_RTOL)
    })
}

/// The largest `a` for which [`ratio_condition`] holds, `+∞` when every trailing value is zero.
pub fn max_admissible_a(values: &[f64], exponent: f64) -> f64 {
    sorted_descending(values)
        .windows(2)
        .filter(|w| w[1] > 0.0)
        .map(|w| (w[0] / w[1]).powf(exponent))
        .fold(f64::INFINITY, f64::min)
}

/// `a = max(1, max_admissible_a)`, or 1 when no finite ratio exists.
pub fn default_a(values: &[f64], exponent: f64) -> f64 {
    let m = max_admissible_a(values, exponent);
    if m.is_finite() {
        m.max(1.0)
    } else {
        1.0
    }
}

/// Parameters of one bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSpec {
    /// Ratio parameter; `None` selects [`default_a`].
    pub a: Option<f64>,
    /// `r` for monogamy, `s` for polygamy.
    pub base_exp: f64,
    /// `α` for monogamy, `β` for polygamy.
    pub target_exp: f64,
    pub variant: Variant,
}

impl BoundSpec {
    pub fn new(base_exp: f64, target_exp: f64) -> Self {
        Self {
            a: None,
            base_exp,
            target_exp,
            variant: Variant::Ours,
        }
    }

    pub fn with_a(mut self, a: f64) -> Self {
        self.a = Some(a);
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    /// `x = target / base`
    pub fn exponent_ratio(&self) -> f64 {
        self.target_exp / self.base_exp
    }

    fn validate(&self, mode: Mode) -> Result<()> {
        let (b, t) = (self.base_exp, self.target_exp);
        if !b.is_finite() || !t.is_finite() {
            return Err(BoundError::InvalidSpec("exponents must be finite".into()));
        }
        match mode {
            Mode::Monogamy => {
                if b < 2.0 {
                    return Err(BoundError::InvalidSpec(format!(
                        "monogamy needs r >= 2, got r = {b}"
                    )));
                }
                if !(0.0..=b).contains(&t) {
                    return Err(BoundError::InvalidSpec(format!(
                        "monogamy needs 0 <= alpha <= r, got alpha = {t}, r = {b}"
                    )));
                }
                check_lower_variant(t / b, self.variant)
            }
            Mode::Polygamy => {
                if !(b > 0.0 && b <= 1.0) {
                    return Err(BoundError::InvalidSpec(format!(
                        "polygamy needs 0 < s <= 1, got s = {b}"
                    )));
                }
                if t < b {
                    return Err(BoundError::InvalidSpec(format!(
                        "polygamy needs beta >= s, got beta = {t}, s = {b}"
                    )));
                }
                check_upper_variant(t / b, self.variant)
            }
        }?;
        if let Some(a) = self.a {
            check_a(a)?;
        }
        Ok(())
    }
}

/// Outcome of evaluating one bound on one measure vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub mode: Mode,
    pub variant: Variant,
    pub a: f64,
    pub base_exp: f64,
    pub target_exp: f64,
    pub bound_value: f64,
    /// `one_vs_rest^target_exp`
    pub measured_value: f64,
    /// `measured - bound` for monogamy, `bound - measured` for polygamy.
    pub margin: f64,
    pub ratio_condition_ok: bool,
    /// `+∞` (serialized as `null`) when at most one pairwise value is nonzero.
    pub max_admissible_a: f64,
    /// True when the base relation for this measure and exponent is not a known result.
    pub base_relation_assumed: bool,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.margin >= -comparison_tolerance(self.measured_value.max(self.bound_value))
    }
}

/// Whether the base power relation is a known result for this measure.
pub fn base_relation_known(kind: MeasureKind, mode: Mode, base_exp: f64) -> bool {
    match (kind, mode) {
        // CKW and its multiqubit extension; powers r ≥ 2 follow from r = 2
        (MeasureKind::Concurrence, Mode::Monogamy) => base_exp >= 2.0,
        // squared negativity on qubits coincides with squared concurrence
        (MeasureKind::NegativityScren, Mode::Monogamy) => base_exp >= 1.0,
        (MeasureKind::Screnoa, Mode::Polygamy) => base_exp <= 1.0,
        (MeasureKind::ConcurrenceAssistance, Mode::Polygamy) => base_exp <= 2.0,
        _ => false,
    }
}

/// Bound value on raw pairwise values (any order) for the given mode.
///
/// Returns `(bound, a_used)`. Does not check the ratio condition.
pub fn bound_value(pairwise: &[f64], mode: Mode, spec: &BoundSpec) -> Result<(f64, f64)> {
    spec.validate(mode)?;
    check_values(pairwise)?;
    let sorted = sorted_descending(pairwise);
    let a = spec.a.unwrap_or_else(|| default_a(&sorted, spec.base_exp));
    let x = spec.exponent_ratio();
    let alpha = spec.target_exp;
    let powered: Vec<f64> = sorted.iter().map(|v| v.powf(spec.base_exp)).collect();
    let value = match spec.variant {
        Variant::Ours if sorted.len() == 2 => chained_weighted_sum(&powered, x, a)?,
        Variant::Ours => ordered_weighted_sum(&powered, x, a)?,
        other => {
            if sorted.len() != 2 {
                return Err(BoundError::TripartiteOnly {
                    variant: other,
                    count: sorted.len(),
                });
            }
            let f = other.offset(x).expect("prior variants carry an offset");
            let (larger, smaller) = (sorted[0], sorted[1]);
            let smaller_pow = if smaller == 0.0 && alpha > 0.0 {
                0.0
            } else {
                smaller.powf(alpha)
            };
            let larger_pow = if larger == 0.0 && alpha > 0.0 {
                0.0
            } else {
                larger.powf(alpha)
            };
            f * smaller_pow + (power(1.0 + a, x) - f) / power(a, x) * larger_pow
        }
    };
    Ok((value, a))
}

/// Evaluates a bound and reports the ratio condition instead of failing on it.
pub fn bound_report(mv: &MeasureVector, mode: Mode, spec: &BoundSpec) -> Result<BoundReport> {
    let (value, a) = bound_value(&mv.pairwise, mode, spec)?;
    let measured = mv.one_vs_rest.powf(spec.target_exp);
    let margin = match mode {
        Mode::Monogamy => measured - value,
        Mode::Polygamy => value - measured,
    };
    Ok(BoundReport {
        mode,
        variant: spec.variant,
        a,
        base_exp: spec.base_exp,
        target_exp: spec.target_exp,
        bound_value: value,
        measured_value: measured,
        margin,
        ratio_condition_ok: ratio_condition(&mv.pairwise, a, spec.base_exp),
        max_admissible_a: max_admissible_a(&mv.pairwise, spec.base_exp),
        base_relation_assumed: !base_relation_known(mv.kind, mode, spec.base_exp),
    })
}

fn strict(report: BoundReport) -> Result<BoundReport> {
    if !report.ratio_condition_ok {
        return Err(BoundError::RatioCondition {
            a: report.a,
            max_admissible: report.max_admissible_a,
        });
    }
    Ok(report)
}

/// Weighted lower bound on `Q^α_{A1|rest}`; errors when the ratio condition fails.
pub fn monogamy_bound(mv: &MeasureVector, spec: &BoundSpec) -> Result<BoundReport> {
    strict(bound_report(mv, Mode::Monogamy, spec)?)
}

/// Weighted upper bound on `Q^β_{A1|rest}`; errors when the ratio condition fails.
pub fn polygamy_bound(mv: &MeasureVector, spec: &BoundSpec) -> Result<BoundReport> {
    strict(bound_report(mv, Mode::Polygamy, spec)?)
}
