//! Randomized verification of the bounds and reproduction of the example surfaces.
//!
//! Every suite draws from a single `ChaCha8` stream seeded by the caller, so
//! identical arguments give identical reports.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundError, BoundSpec, Mode, Variant};
use crate::measures::{self, MeasureError, MeasureKind, MeasureVector};
use crate::numfmt::fmt_g;
use crate::states::{self, StateError, StateRng};

/// Cap on recorded failure samples per report.
pub const MAX_FAILURE_SAMPLES: usize = 100;

/// Cap on the number of cells in a sweep grid.
pub const MAX_GRID_CELLS: usize = 1_000_000;

/// Floor on the per-sample polygamy exponent, keeping `β/s` bounded.
pub const MIN_PER_SAMPLE_S: f64 = 0.05;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    State(#[from] StateError),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

/// A check passes when `margin ≥ -max(abs, rel·|magnitude|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const SCALAR: Tolerance = Tolerance {
        abs: 1e-12,
        rel: 1e-9,
    };
    pub const STATES: Tolerance = Tolerance {
        abs: 1e-8,
        rel: 1e-9,
    };
    pub const DOMINANCE: Tolerance = Tolerance {
        abs: 1e-12,
        rel: 0.0,
    };

    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub fn allowance(&self, magnitude: f64) -> f64 {
        self.abs.max(self.rel * magnitude.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureSample {
    pub check: String,
    pub inputs: String,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub total: u64,
    pub failures: u64,
    pub skipped: u64,
    /// Smallest margin seen; `None` when nothing was checked.
    pub worst_margin: Option<f64>,
    pub failure_samples: Vec<FailureSample>,
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self::new()
    }
}

impl VerificationReport {
    pub fn new() -> Self {
        Self {
            total: 0,
            failures: 0,
            skipped: 0,
            worst_margin: None,
            failure_samples: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Records one inequality with `margin ≥ 0` meaning it holds.
    pub fn record(
        &mut self,
        check: &str,
        margin: f64,
        magnitude: f64,
        tol: Tolerance,
        inputs: impl FnOnce() -> String,
    ) {
        self.total += 1;
        self.worst_margin = Some(match self.worst_margin {
            Some(w) if w <= margin => w,
            _ => margin,
        });
        let ok = margin >= -tol.allowance(magnitude);
        if !ok {
            self.failures += 1;
            if self.failure_samples.len() < MAX_FAILURE_SAMPLES {
                self.failure_samples.push(FailureSample {
                    check: check.to_string(),
                    inputs: inputs(),
                    margin,
                });
            }
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.total += other.total;
        self.failures += other.failures;
        self.skipped += other.skipped;
        if let Some(m) = other.worst_margin {
            self.worst_margin = Some(self.worst_margin.map_or(m, |w| w.min(m)));
        }
        let room = MAX_FAILURE_SAMPLES.saturating_sub(self.failure_samples.len());
        self.failure_samples
            .extend(other.failure_samples.into_iter().take(room));
    }
}

/// `x` uniform on `(0, hi]`.
fn open_closed(rng: &mut StateRng, hi: f64) -> f64 {
    (1.0 - rng.random::<f64>()) * hi
}

/// Samples each scalar family `n` times.
///
/// * lower estimate: `(1+t)^x ≥ ours`, `x ∈ (0,1]`, `a ∈ [1,10]`, `t ∈ [a,100]`
/// * upper estimate: `(1+t)^x ≤ ours`, `x ∈ [1,8]`
/// * lower dominance: `ours ≥ jfq` for `x ∈ (0,1]`, `ours ≥ zjz1(p), zjz2` for `x ∈ (0,1/2]`
/// * upper dominance: `ours ≤ jfq ≤ zjz1(q), zjz2` for `x ∈ [1,8]`, `q ∈ (0,1]`
pub fn verify_scalar(n: usize, seed: u64, tol: Tolerance) -> VerificationReport {
    let mut rng = StateRng::seed_from_u64(seed);
    let mut report = VerificationReport::new();
    let draw_at = |rng: &mut StateRng| {
        let a = rng.random_range(1.0..=10.0);
        let t = a + (100.0 - a) * rng.random::<f64>();
        (a, t)
    };
    let lower = |t: f64, x: f64, a: f64, v: Variant| {
        bounds::scalar_lower_bound(t, x, a, v).expect("sampled in domain")
    };
    let upper = |t: f64, x: f64, a: f64, v: Variant| {
        bounds::scalar_upper_bound(t, x, a, v).expect("sampled in domain")
    };

    for _ in 0..n {
        let (a, t) = draw_at(&mut rng);
        let x = open_closed(&mut rng, 1.0);
        let exact = (1.0 + t).powf(x);
        let ours = lower(t, x, a, Variant::Ours);
        report.record("lower_estimate", exact - ours, exact, tol, || {
            format!("t={t}, a={a}, x={x}")
        });
    }
    for _ in 0..n {
        let (a, t) = draw_at(&mut rng);
        let x = rng.random_range(1.0..=8.0);
        let exact = (1.0 + t).powf(x);
        let ours = upper(t, x, a, Variant::Ours);
        report.record("upper_estimate", ours - exact, exact, tol, || {
            format!("t={t}, a={a}, x={x}")
        });
    }
    for _ in 0..n {
        let (a, t) = draw_at(&mut rng);
        let x = open_closed(&mut rng, 1.0);
        let xz = open_closed(&mut rng, 0.5);
        let p = rng.random_range(0.5..=1.0);
        let ours = lower(t, x, a, Variant::Ours);
        let jfq = lower(t, x, a, Variant::Jfq);
        report.record("lower_dominance_jfq", ours - jfq, ours, tol, || {
            format!("t={t}, a={a}, x={x}")
        });
        let ours_z = lower(t, xz, a, Variant::Ours);
        let zjz1 = lower(t, xz, a, Variant::Zjz1(p));
        let zjz2 = lower(t, xz, a, Variant::Zjz2);
        report.record("lower_dominance_zjz1", ours_z - zjz1, ours_z, tol, || {
            format!("t={t}, a={a}, x={xz}, p={p}")
        });
        report.record("lower_dominance_zjz2", ours_z - zjz2, ours_z, tol, || {
            format!("t={t}, a={a}, x={xz}")
        });
    }
    for _ in 0..n {
        let (a, t) = draw_at(&mut rng);
        let x = rng.random_range(1.0..=8.0);
        let q = open_closed(&mut rng, 1.0);
        let ours = upper(t, x, a, Variant::Ours);
        let jfq = upper(t, x, a, Variant::Jfq);
        let zjz1 = upper(t, x, a, Variant::Zjz1(q));
        let zjz2 = upper(t, x, a, Variant::Zjz2);
        report.record("upper_dominance_jfq", jfq - ours, jfq, tol, || {
            format!("t={t}, a={a}, x={x}")
        });
        report.record("upper_dominance_zjz1", zjz1 - jfq, zjz1, tol, || {
            format!("t={t}, a={a}, x={x}, q={q}")
        });
        report.record("upper_dominance_zjz2", zjz2 - jfq, zjz2, tol, || {
            format!("t={t}, a={a}, x={x}")
        });
    }
    report
}

/// Checks the weighted monogamy bound of one measure vector at every `α`,
/// with `a` defaulting to the largest admissible value.
pub fn verify_monogamy_vector(
    mv: &MeasureVector,
    r: f64,
    a: Option<f64>,
    alpha_grid: &[f64],
    tol: Tolerance,
    report: &mut VerificationReport,
) -> Result<()> {
    let a = a.unwrap_or_else(|| bounds::default_a(&mv.pairwise, r));
    for &alpha in alpha_grid {
        let spec = BoundSpec::new(r, alpha).with_a(a);
        let rep = bounds::bound_report(mv, Mode::Monogamy, &spec)?;
        if !rep.ratio_condition_ok {
            report.skip();
            continue;
        }
        report.record(
            "monogamy",
            rep.margin,
            rep.measured_value.max(rep.bound_value),
            tol,
            || format!("alpha={alpha}, r={r}, a={a}, vector={mv:?}"),
        );
    }
    Ok(())
}

/// Haar-random `qubits`-qubit states, concurrence, `a` = largest admissible value.
pub fn verify_monogamy_states(
    n: usize,
    qubits: usize,
    seed: u64,
    r: f64,
    alpha_grid: &[f64],
    tol: Tolerance,
) -> Result<VerificationReport> {
    let mut rng = StateRng::seed_from_u64(seed);
    let dims = vec![2; qubits];
    let mut report = VerificationReport::new();
    for _ in 0..n {
        let psi = states::haar_random_pure_with(&dims, &mut rng)?;
        let mv = measures::measure_vector(&psi, MeasureKind::Concurrence)?;
        verify_monogamy_vector(&mv, r, None, alpha_grid, tol, &mut report)?;
    }
    Ok(report)
}

/// Exponent `s` used for the polygamy suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExponentChoice {
    Fixed(f64),
    /// `s = min(1, log2(v_(1)/v_(2)))`, floored at [`MIN_PER_SAMPLE_S`]; 1 when `v_(2) = 0`.
    PerSample,
}

/// `β` values used for the polygamy suite.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaGrid {
    /// Fixed values; those below `s` are skipped.
    Absolute(Vec<f64>),
    /// `points` evenly spaced values from `s` to `stop`.
    Span { points: usize, stop: f64 },
}

impl BetaGrid {
    fn values(&self, s: f64) -> Vec<f64> {
        match self {
            BetaGrid::Absolute(v) => v.clone(),
            BetaGrid::Span { points: 0, .. } => Vec::new(),
            BetaGrid::Span { points: 1, .. } => vec![s],
            BetaGrid::Span { points, stop } => (0..*points)
                .map(|k| s + k as f64 * (stop - s) / (*points - 1) as f64)
                .collect(),
        }
    }
}

fn per_sample_s(pairwise: &[f64]) -> f64 {
    let sorted = bounds::sorted_descending(pairwise);
    match sorted.as_slice() {
        [hi, lo, ..] if *lo > 0.0 => (hi / lo).log2().clamp(MIN_PER_SAMPLE_S, 1.0),
        _ => 1.0,
    }
}

/// Checks the weighted polygamy bound of one measure vector.
///
/// With `a = None` the largest admissible value is used. Cells where the
/// ratio condition fails, or `β < s`, are counted as skipped.
pub fn verify_polygamy_vector(
    mv: &MeasureVector,
    s: ExponentChoice,
    a: Option<f64>,
    beta_grid: &BetaGrid,
    tol: Tolerance,
    report: &mut VerificationReport,
) -> Result<()> {
    let s = match s {
        ExponentChoice::Fixed(s) => s,
        ExponentChoice::PerSample => per_sample_s(&mv.pairwise),
    };
    let a = a.unwrap_or_else(|| bounds::default_a(&mv.pairwise, s));
    if !bounds::ratio_condition(&mv.pairwise, a, s) {
        report.skipped += beta_grid.values(s).len() as u64;
        return Ok(());
    }
    for beta in beta_grid.values(s) {
        if beta < s {
            report.skip();
            continue;
        }
        let spec = BoundSpec::new(s, beta).with_a(a);
        let rep = bounds::bound_report(mv, Mode::Polygamy, &spec)?;
        report.record(
            "polygamy",
            rep.margin,
            rep.measured_value.max(rep.bound_value),
            tol,
            || format!("beta={beta}, s={s}, a={a}, vector={mv:?}"),
        );
    }
    Ok(())
}

/// Random W-class states `a|100> + b|010> + c|001>` with SCRENoA.
pub fn verify_polygamy_states(
    n: usize,
    seed: u64,
    s: ExponentChoice,
    a: Option<f64>,
    beta_grid: &BetaGrid,
    tol: Tolerance,
) -> Result<VerificationReport> {
    let mut rng = StateRng::seed_from_u64(seed);
    let mut report = VerificationReport::new();
    for _ in 0..n {
        let psi = random_w_class(&mut rng)?;
        let mv = measures::measure_vector(&psi, MeasureKind::Screnoa)?;
        verify_polygamy_vector(&mv, s, a, beta_grid, tol, &mut report)?;
    }
    Ok(report)
}

/// W-class state with coefficients drawn uniformly from the positive octant of the sphere.
pub fn random_w_class(rng: &mut StateRng) -> Result<states::PureState> {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal).abs());
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return Ok(states::w_class_state(
                v[0] / norm,
                v[1] / norm,
                v[2] / norm,
            )?);
        }
    }
}

/// CKW-type base relation `C^2_{A|rest} ≥ Σ C^2_{A A_i}` on Haar-random states.
pub fn verify_ckw(
    n: usize,
    qubits: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<VerificationReport> {
    let mut rng = StateRng::seed_from_u64(seed);
    let dims = vec![2; qubits];
    let mut report = VerificationReport::new();
    for _ in 0..n {
        let psi = states::haar_random_pure_with(&dims, &mut rng)?;
        let mv = measures::measure_vector(&psi, MeasureKind::Concurrence)?;
        let sum: f64 = mv.pairwise.iter().map(|c| c * c).sum();
        let whole = mv.one_vs_rest * mv.one_vs_rest;
        report.record("ckw", whole - sum, whole, tol, || format!("vector={mv:?}"));
    }
    Ok(report)
}

/// Base polygamy relation `SCRENoA_{A|BC} ≤ Σ SCRENoA_{A A_i}` on random W-class states.
pub fn verify_screnoa_polygamy(n: usize, seed: u64, tol: Tolerance) -> Result<VerificationReport> {
    let mut rng = StateRng::seed_from_u64(seed);
    let mut report = VerificationReport::new();
    for _ in 0..n {
        let psi = random_w_class(&mut rng)?;
        let mv = measures::measure_vector(&psi, MeasureKind::Screnoa)?;
        let sum: f64 = mv.pairwise.iter().sum();
        report.record("screnoa_polygamy", sum - mv.one_vs_rest, sum, tol, || {
            format!("vector={mv:?}")
        });
    }
    Ok(report)
}

/// One axis of a sweep: `start + k·step` for `k = 0, 1, ...` while `≤ stop`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(name: &str, start: f64, stop: f64, step: f64) -> Self {
        Self {
            name: name.to_string(),
            start,
            stop,
            step,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(VerifyError::Grid(format!(
                "{}: step must be positive",
                self.name
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(VerifyError::Grid(format!(
                "{}: range must be finite",
                self.name
            )));
        }
        Ok(())
    }

    fn points_from(&self, start: f64) -> Vec<f64> {
        if start > self.stop {
            return Vec::new();
        }
        let count = ((self.stop - start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| start + k as f64 * self.step).collect()
    }

    pub fn points(&self) -> Vec<f64> {
        self.points_from(self.start)
    }
}

/// Two-axis sweep. Rows run over `outer`, then `inner`; with
/// `inner_from_outer` the inner axis starts at the current outer value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub inner: Axis,
    pub outer: Axis,
    pub inner_from_outer: bool,
}

impl SweepGrid {
    /// `α ∈ [0,1]` step 0.02, `r ∈ [2,5]` step 0.05.
    pub fn example1_default() -> Self {
        Self {
            inner: Axis::new("alpha", 0.0, 1.0, 0.02),
            outer: Axis::new("r", 2.0, 5.0, 0.05),
            inner_from_outer: false,
        }
    }

    /// `s ∈ [0.6,1]` step 0.01, `β ∈ [s,3]` step 0.05.
    pub fn example2_default() -> Self {
        Self {
            inner: Axis::new("beta", 0.6, 3.0, 0.05),
            outer: Axis::new("s", 0.6, 1.0, 0.01),
            inner_from_outer: true,
        }
    }

    /// `(inner, outer)` pairs in row order.
    pub fn cells(&self) -> Result<Vec<(f64, f64)>> {
        self.inner.validate()?;
        self.outer.validate()?;
        let outer = self.outer.points();
        if outer.is_empty() {
            return Err(VerifyError::Grid(format!(
                "{}: empty range",
                self.outer.name
            )));
        }
        let mut cells = Vec::new();
        for o in outer {
            let start = if self.inner_from_outer {
                o
            } else {
                self.inner.start
            };
            let inner = self.inner.points_from(start);
            if cells.len() + inner.len() > MAX_GRID_CELLS {
                return Err(VerifyError::Grid(format!(
                    "more than {MAX_GRID_CELLS} cells"
                )));
            }
            cells.extend(inner.into_iter().map(|i| (i, o)));
        }
        if cells.is_empty() {
            return Err(VerifyError::Grid(format!(
                "{}: empty range",
                self.inner.name
            )));
        }
        Ok(cells)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Example {
    /// Generalized Schmidt state, concurrence, monogamy side.
    Example1,
    /// W state, SCRENoA, polygamy side.
    Example2,
}

impl std::str::FromStr for Example {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "example1" | "1" => Ok(Example::Example1),
            "example2" | "2" => Ok(Example::Example2),
            _ => Err(format!(
                "unknown example '{s}' (expected example1 or example2)"
            )),
        }
    }
}

impl Example {
    /// Ratio parameter used throughout the example.
    pub fn a(self) -> f64 {
        match self {
            Example::Example1 => 6f64.sqrt() / 2.0,
            Example::Example2 => 2f64.powf(0.6),
        }
    }

    /// The example's measure vector in closed form.
    pub fn measure_vector(self) -> MeasureVector {
        match self {
            Example::Example1 => MeasureVector {
                kind: MeasureKind::Concurrence,
                one_vs_rest: 21f64.sqrt() / 6.0,
                pairwise: vec![6f64.sqrt() / 6.0, 0.5],
            },
            Example::Example2 => MeasureVector {
                kind: MeasureKind::Screnoa,
                one_vs_rest: 0.75,
                pairwise: vec![0.25, 0.5],
            },
        }
    }

    pub fn default_grid(self) -> SweepGrid {
        match self {
            Example::Example1 => SweepGrid::example1_default(),
            Example::Example2 => SweepGrid::example2_default(),
        }
    }

    pub fn csv_header(self) -> &'static str {
        match self {
            Example::Example1 => "alpha,r,Z1,Z2,Z3",
            Example::Example2 => "beta,s,W1,W2,W3,W1_minus_W3,W2_minus_W3",
        }
    }
}

/// Bound values at one grid cell: `[jfq, zjz, ours]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceRow {
    pub inner: f64,
    pub outer: f64,
    pub jfq: f64,
    /// `None` outside the zjz domain (`α/r > 1/2` on the monogamy side).
    pub zjz: Option<f64>,
    pub ours: f64,
}

impl DominanceRow {
    /// Amount by which ours improves on jfq (positive is better).
    pub fn gain_over_jfq(&self, example: Example) -> f64 {
        match example {
            Example::Example1 => self.ours - self.jfq,
            Example::Example2 => self.jfq - self.ours,
        }
    }

    pub fn gain_over_zjz(&self, example: Example) -> Option<f64> {
        self.zjz.map(|z| match example {
            Example::Example1 => self.ours - z,
            Example::Example2 => z - self.ours,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceTable {
    pub example: Example,
    pub rows: Vec<DominanceRow>,
}

impl DominanceTable {
    /// Checks that ours is at least as good as both prior bounds at every
    /// cell, except cells with `α = 0` on the monogamy side.
    pub fn check(&self, tol: Tolerance) -> VerificationReport {
        let mut report = VerificationReport::new();
        for row in &self.rows {
            if self.example == Example::Example1 && row.inner == 0.0 {
                report.skip();
                continue;
            }
            let cell = || format!("inner={}, outer={}", row.inner, row.outer);
            report.record(
                "dominance_jfq",
                row.gain_over_jfq(self.example),
                row.ours,
                tol,
                cell,
            );
            if let Some(g) = row.gain_over_zjz(self.example) {
                report.record("dominance_zjz", g, row.ours, tol, cell);
            }
        }
        report
    }

    /// CSV with a header row and `\n` line endings; out-of-domain cells are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(self.example.csv_header());
        out.push('\n');
        for row in &self.rows {
            let zjz = row.zjz.map(fmt_g).unwrap_or_default();
            match self.example {
                Example::Example1 => {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        fmt_g(row.inner),
                        fmt_g(row.outer),
                        fmt_g(row.jfq),
                        zjz,
                        fmt_g(row.ours)
                    );
                }
                Example::Example2 => {
                    let w2_minus = row.zjz.map(|z| fmt_g(z - row.ours)).unwrap_or_default();
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        fmt_g(row.inner),
                        fmt_g(row.outer),
                        fmt_g(row.jfq),
                        zjz,
                        fmt_g(row.ours),
                        fmt_g(row.jfq - row.ours),
                        w2_minus
                    );
                }
            }
        }
        out
    }
}

/// Evaluates ours, jfq and zjz2 for the example over the grid.
///
/// The inner axis is the target exponent (`α` or `β`), the outer axis the
/// base exponent (`r` or `s`). Any cell outside the bound domains is an error,
/// apart from zjz cells with `α/r > 1/2`, which are left empty.
pub fn dominance_scan(example: Example, grid: &SweepGrid) -> Result<DominanceTable> {
    let mv = example.measure_vector();
    let a = example.a();
    let mode = match example {
        Example::Example1 => Mode::Monogamy,
        Example::Example2 => Mode::Polygamy,
    };
    let mut rows = Vec::new();
    for (inner, outer) in grid.cells()? {
        let spec = BoundSpec::new(outer, inner).with_a(a);
        if !bounds::ratio_condition(&mv.pairwise, a, outer) {
            return Err(VerifyError::Grid(format!(
                "ratio condition fails at {}={outer} for a={a}",
                grid.outer.name
            )));
        }
        let (ours, _) = bounds::bound_value(&mv.pairwise, mode, &spec)?;
        let (jfq, _) = bounds::bound_value(&mv.pairwise, mode, &spec.with_variant(Variant::Jfq))?;
        let zjz_in_domain = mode == Mode::Polygamy || inner / outer <= 0.5;
        let zjz = if zjz_in_domain {
            Some(bounds::bound_value(&mv.pairwise, mode, &spec.with_variant(Variant::Zjz2))?.0)
        } else {
            None
        };
        rows.push(DominanceRow {
            inner,
            outer,
            jfq,
            zjz,
            ours,
        });
    }
    Ok(DominanceTable { example, rows })
}
