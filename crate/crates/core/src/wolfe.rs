//! Wolfe's minimum-norm-point algorithm over a polytope given by a linear
//! optimization oracle.
//!
//! A major cycle asks the oracle for `q = argmin x·q`, stops if
//! `‖x‖² ≤ x·q + ε²`, and otherwise adds `q` to the active set. Minor cycles
//! then pull the affine minimizer of the active set back into its convex hull,
//! deleting at least one point each time, until the affine minimizer is a
//! convex combination; it becomes the new iterate.

use serde::{Deserialize, Serialize};

use crate::affine::{AffineSolution, IncrementalAffine};
use crate::error::{check_finite, Error, Result};
use crate::linalg::{combine, dot, norm_inf, norm_sq};
use crate::polytope::{LinearOracle, Vertex};

/// Coefficients below `-NEG_TOL` count as negative.
pub const NEG_TOL: f64 = 1e-12;
/// Convex coefficients at or below `ZERO_TOL` are deleted.
pub const ZERO_TOL: f64 = 1e-12;
/// A major cycle that lowers `‖x‖²` by less than this fraction is a stall.
pub const STALL_TOL: f64 = 1e-14;
/// Iterations between recomputations of `x` from its convex representation.
pub const REEXPRESS_EVERY: usize = 50;

/// The active set `S`, its convex coefficients and the iterate they define.
#[derive(Debug, Clone)]
pub struct ActiveSet {
    vertices: Vec<Vec<f64>>,
    ids: Vec<u64>,
    lambda: Vec<f64>,
    x: Vec<f64>,
    affine: IncrementalAffine,
    next_id: u64,
}

/// Summary of one minor cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorStep {
    pub theta: f64,
    pub norm_sq_before: f64,
    pub norm_sq_after: f64,
    pub size_before: usize,
    pub size_after: usize,
}

impl ActiveSet {
    /// `S = {v}`, `λ = (1)`.
    pub fn singleton(v: Vec<f64>) -> Result<Self> {
        Self::from_convex(vec![v], vec![1.0])
    }

    /// Builds a state from affinely independent vertices and positive convex
    /// coefficients.
    pub fn from_convex(vertices: Vec<Vec<f64>>, lambda: Vec<f64>) -> Result<Self> {
        if vertices.is_empty() || vertices.len() != lambda.len() {
            return Err(Error::InvalidInput(
                "need one coefficient per vertex and at least one vertex".into(),
            ));
        }
        check_finite(&lambda)?;
        if lambda.iter().any(|&l| l <= 0.0) || (lambda.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(
                "coefficients must be positive and sum to one".into(),
            ));
        }
        let dim = vertices[0].len();
        let mut affine = IncrementalAffine::new(dim);
        for v in &vertices {
            affine.push(v.clone())?;
        }
        let x = combine(&vertices, &lambda, dim);
        let m = vertices.len() as u64;
        Ok(Self {
            vertices,
            ids: (0..m).collect(),
            lambda,
            x,
            affine,
            next_id: m,
        })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Stable identifiers of the vertices, in insertion order.
    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, q: &[f64]) -> bool {
        self.vertices.iter().any(|v| v.as_slice() == q)
    }

    /// Adds `q` with coefficient zero; returns its id.
    pub fn insert(&mut self, q: Vec<f64>) -> Result<u64> {
        self.affine.push(q.clone())?;
        self.vertices.push(q);
        self.lambda.push(0.0);
        let id = self.next_id;
        self.next_id += 1;
        self.ids.push(id);
        Ok(id)
    }

    fn delete(&mut self, index: usize) {
        self.vertices.remove(index);
        self.lambda.remove(index);
        self.ids.remove(index);
        self.affine.remove(index);
    }

    /// Deletes every vertex whose coefficient is at or below [`ZERO_TOL`] and
    /// renormalizes the rest. Returns the number deleted.
    fn prune(&mut self) -> usize {
        let mut deleted = 0;
        let mut i = 0;
        while i < self.lambda.len() {
            if self.lambda[i] <= ZERO_TOL {
                self.delete(i);
                deleted += 1;
            } else {
                i += 1;
            }
        }
        let total: f64 = self.lambda.iter().sum();
        for l in &mut self.lambda {
            *l /= total;
        }
        deleted
    }

    /// Runs minor cycles until the affine minimizer of `S` lies in its convex
    /// hull, then moves `x` there. `on_minor` sees every minor cycle.
    pub fn minor_loop(&mut self, mut on_minor: impl FnMut(MinorStep)) -> Result<usize> {
        let mut cycles = 0;
        loop {
            let AffineSolution { y, alpha } = self.affine.solve();
            if alpha.iter().any(|&a| a < -NEG_TOL) {
                let step = self.theta_step(&y, &alpha)?;
                cycles += 1;
                on_minor(step);
                continue;
            }
            // Coefficients in [-NEG_TOL, ZERO_TOL] are treated as zero: drop
            // those points and re-solve on the smaller set.
            if alpha.iter().any(|&a| a <= ZERO_TOL) && alpha.len() > 1 {
                self.lambda = alpha;
                self.prune();
                continue;
            }
            self.lambda = alpha;
            self.x = y;
            return Ok(cycles);
        }
    }

    /// One minor cycle: `x ← θy + (1-θ)x`, `λ ← θα + (1-θ)λ`, prune.
    fn theta_step(&mut self, y: &[f64], alpha: &[f64]) -> Result<MinorStep> {
        let theta = alpha
            .iter()
            .zip(&self.lambda)
            .filter(|(&a, _)| a < -NEG_TOL)
            .map(|(&a, &l)| l / (l - a))
            .fold(f64::INFINITY, f64::min);
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::InvariantViolation(format!(
                "minor cycle step θ = {theta} outside [0, 1)"
            )));
        }
        let norm_sq_before = norm_sq(&self.x);
        let size_before = self.len();
        for (xi, yi) in self.x.iter_mut().zip(y) {
            *xi = theta * yi + (1.0 - theta) * *xi;
        }
        for (l, a) in self.lambda.iter_mut().zip(alpha) {
            *l = theta * a + (1.0 - theta) * *l;
        }
        let deleted = self.prune();
        if deleted == 0 {
            return Err(Error::InvariantViolation(
                "minor cycle deleted no point".into(),
            ));
        }
        Ok(MinorStep {
            theta,
            norm_sq_before,
            norm_sq_after: norm_sq(&self.x),
            size_before,
            size_after: self.len(),
        })
    }

    /// Recomputes `x` from the vertices and coefficients.
    pub fn reexpress(&mut self) {
        self.x = combine(&self.vertices, &self.lambda, self.x.len());
    }

    /// Checks the convex-combination invariants of the state.
    pub fn check(&self) -> Result<()> {
        if self.lambda.iter().any(|&l| l <= 0.0) {
            return Err(Error::InvariantViolation("non-positive coefficient".into()));
        }
        let sum: f64 = self.lambda.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvariantViolation(format!(
                "coefficients sum to {sum}"
            )));
        }
        let recon = combine(&self.vertices, &self.lambda, self.x.len());
        let scale = self.vertices.iter().map(|v| norm_inf(v)).fold(1.0, f64::max);
        let err = recon
            .iter()
            .zip(&self.x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if err > 1e-8 * scale {
            return Err(Error::InvariantViolation(format!(
                "x drifted {err} from its convex representation"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    Major,
    Minor,
}

/// One iteration of the solver.
///
/// Records appear in completion order: the minor cycles of a major cycle come
/// first, then the major record, whose `norm_sq_before` is the norm at the
/// oracle call and whose `norm_sq_after` is the norm once the cycle ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub kind: CycleKind,
    pub norm_sq_before: f64,
    pub norm_sq_after: f64,
    pub active_size_before: usize,
    pub active_size_after: usize,
    /// `Δ(x, q) = ‖x‖² - x·q` at the oracle call (major cycles).
    pub delta: Option<f64>,
    /// Step length (minor cycles).
    pub theta: Option<f64>,
    /// Minor cycles run inside this major cycle.
    pub minor_cycles: usize,
    /// Whether the vertex added by this major cycle is still active when it
    /// ends.
    pub new_vertex_survived: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// `‖x‖² ≤ x·q + ε²` held at the last oracle call.
    Converged,
    IterationCap,
    /// The oracle returned an active vertex, the new vertex was affinely
    /// dependent on the active set, `‖x‖²` grew, or more than `dim`
    /// consecutive major cycles failed to lower it.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct WolfeOptions {
    pub epsilon: f64,
    /// Cap on major plus minor cycles.
    pub max_iterations: usize,
    pub start: Option<Vertex>,
    /// Retain every vertex the oracle returned.
    pub keep_vertices: bool,
}

impl WolfeOptions {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            max_iterations: 100_000,
            start: None,
            keep_vertices: false,
        }
    }

    pub fn max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = cap;
        self
    }

    pub fn start(mut self, v: Vertex) -> Self {
        self.start = Some(v);
        self
    }

    pub fn keep_vertices(mut self, yes: bool) -> Self {
        self.keep_vertices = yes;
        self
    }
}

#[derive(Debug, Clone)]
pub struct WolfeResult {
    pub x: Vec<f64>,
    /// `Δ(x) = ‖x‖² - min_q x·q` at the returned `x`.
    pub delta_certificate: f64,
    pub termination: Termination,
    pub iterations: Vec<IterationRecord>,
    pub major_cycles: usize,
    pub minor_cycles: usize,
    pub active: ActiveSet,
    pub oracle_vertices: Option<Vec<Vec<f64>>>,
}

impl WolfeResult {
    pub fn total_iterations(&self) -> usize {
        self.major_cycles + self.minor_cycles
    }
}

/// Outcome of [`WolfeSolver::major_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MajorOutcome {
    Continue,
    Terminate(Termination),
}

/// Stepwise solver state.
pub struct WolfeSolver<'a, L> {
    lo: &'a L,
    epsilon: f64,
    state: ActiveSet,
    records: Vec<IterationRecord>,
    major: usize,
    minor: usize,
    last_delta: f64,
    x_at_last_call: Vec<f64>,
    since_reexpress: usize,
    flat_cycles: usize,
    /// `max(1, ‖x₀‖²)`; roundoff in `‖x‖²` is proportional to it.
    norm_scale: f64,
    vertices: Option<Vec<Vec<f64>>>,
}

impl<'a, L: LinearOracle> WolfeSolver<'a, L> {
    pub fn new(lo: &'a L, opts: &WolfeOptions) -> Result<Self> {
        if !(opts.epsilon >= 0.0) || !opts.epsilon.is_finite() {
            return Err(Error::InvalidInput(format!(
                "epsilon must be finite and nonnegative, got {}",
                opts.epsilon
            )));
        }
        let start = match &opts.start {
            Some(v) => v.clone(),
            None => lo.minimize(&vec![1.0; lo.dimension()])?,
        };
        if start.dim() != lo.dimension() {
            return Err(Error::DimensionMismatch {
                expected: lo.dimension(),
                found: start.dim(),
            });
        }
        let vertices = opts.keep_vertices.then(|| vec![start.coords.clone()]);
        let norm_scale = norm_sq(&start.coords).max(1.0);
        Ok(Self {
            lo,
            epsilon: opts.epsilon,
            state: ActiveSet::singleton(start.coords)?,
            records: Vec::new(),
            major: 0,
            minor: 0,
            last_delta: f64::INFINITY,
            x_at_last_call: Vec::new(),
            since_reexpress: 0,
            flat_cycles: 0,
            norm_scale,
            vertices,
        })
    }

    pub fn state(&self) -> &ActiveSet {
        &self.state
    }

    pub fn records(&self) -> &[IterationRecord] {
        &self.records
    }

    pub fn iterations(&self) -> usize {
        self.major + self.minor
    }

    /// Calls the oracle at the current `x` and returns `(q, Δ(x, q))`.
    fn call_oracle(&mut self) -> Result<(Vertex, f64)> {
        let q = self.lo.minimize(self.state.x())?;
        let x = self.state.x();
        let delta = norm_sq(x) - dot(x, &q.coords);
        self.last_delta = delta;
        self.x_at_last_call = x.to_vec();
        Ok((q, delta))
    }

    /// One major cycle: oracle call, termination test, insertion, and the
    /// minor loop that follows.
    pub fn major_step(&mut self) -> Result<MajorOutcome> {
        let (q, delta) = self.call_oracle()?;
        let norm_sq_before = norm_sq(self.state.x());
        if norm_sq_before <= dot(self.state.x(), &q.coords) + self.epsilon * self.epsilon {
            return Ok(MajorOutcome::Terminate(Termination::Converged));
        }
        if self.state.contains(&q.coords) {
            return Ok(MajorOutcome::Terminate(Termination::Stalled));
        }
        let size_before = self.state.len();
        let saved = self.state.clone();
        if let Some(vs) = &mut self.vertices {
            vs.push(q.coords.clone());
        }
        let id = match self.state.insert(q.coords) {
            Ok(id) => id,
            Err(Error::Degenerate { .. }) => {
                return Ok(MajorOutcome::Terminate(Termination::Stalled))
            }
            Err(e) => return Err(e),
        };

        let first = self.records.len();
        let base_iter = self.iterations();
        let mut minors = Vec::new();
        let cycles = self.state.minor_loop(|step| minors.push(step))?;
        for (k, step) in minors.into_iter().enumerate() {
            self.records.push(IterationRecord {
                iter: base_iter + k,
                kind: CycleKind::Minor,
                norm_sq_before: step.norm_sq_before,
                norm_sq_after: step.norm_sq_after,
                active_size_before: step.size_before,
                active_size_after: step.size_after,
                delta: None,
                theta: Some(step.theta),
                minor_cycles: 0,
                new_vertex_survived: None,
            });
        }
        debug_assert_eq!(self.records.len() - first, cycles);
        self.minor += cycles;
        self.major += 1;
        let norm_sq_after = norm_sq(self.state.x());
        let survived = self.state.ids().contains(&id);
        self.records.push(IterationRecord {
            iter: base_iter + cycles,
            kind: CycleKind::Major,
            norm_sq_before,
            norm_sq_after,
            active_size_before: size_before,
            active_size_after: self.state.len(),
            delta: Some(delta),
            theta: None,
            minor_cycles: cycles,
            new_vertex_survived: Some(survived),
        });
        if !survived || norm_sq_after > norm_sq_before + STALL_TOL * self.norm_scale {
            // Progress is below roundoff; undo the cycle and stop.
            self.state = saved;
            self.records.truncate(first);
            self.minor -= cycles;
            self.major -= 1;
            return Ok(MajorOutcome::Terminate(Termination::Stalled));
        }
        self.since_reexpress += cycles + 1;
        if self.since_reexpress >= REEXPRESS_EVERY {
            self.state.reexpress();
            self.since_reexpress = 0;
        }
        if norm_sq_after < norm_sq_before {
            self.flat_cycles = 0;
        } else {
            self.flat_cycles += 1;
            if self.flat_cycles > self.lo.dimension() {
                return Ok(MajorOutcome::Terminate(Termination::Stalled));
            }
        }
        Ok(MajorOutcome::Continue)
    }

    /// Runs minor cycles on the current state (normally done by
    /// [`major_step`](Self::major_step)).
    pub fn minor_loop(&mut self) -> Result<usize> {
        let cycles = self.state.minor_loop(|_| {})?;
        self.minor += cycles;
        Ok(cycles)
    }

    fn finish(mut self, termination: Termination) -> Result<WolfeResult> {
        // The reported certificate must belong to the returned x.
        if self.x_at_last_call.as_slice() != self.state.x() {
            self.call_oracle()?;
        }
        Ok(WolfeResult {
            x: self.state.x().to_vec(),
            delta_certificate: self.last_delta,
            termination,
            iterations: self.records,
            major_cycles: self.major,
            minor_cycles: self.minor,
            active: self.state,
            oracle_vertices: self.vertices,
        })
    }
}

/// Runs Wolfe's algorithm to `Δ(x) ≤ ε²` or until a stop condition.
pub fn run<L: LinearOracle>(lo: &L, opts: &WolfeOptions) -> Result<WolfeResult> {
    let mut solver = WolfeSolver::new(lo, opts)?;
    loop {
        if solver.iterations() >= opts.max_iterations {
            return solver.finish(Termination::IterationCap);
        }
        if let MajorOutcome::Terminate(t) = solver.major_step()? {
            return solver.finish(t);
        }
    }
}

/// A trace invariant that failed.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceViolation {
    NormNotDecreasing { iter: usize, before: f64, after: f64 },
    ActiveSetTooLarge { iter: usize, size: usize },
    MinorWithoutDeletion { iter: usize },
    NewVertexDeleted { iter: usize },
    NoGoodMajorInWindow { start: usize },
}

/// Checks the trace of a run on a polytope in `R^dim`:
/// strict decrease of `‖x‖²` per iteration (slack [`STALL_TOL`] times the
/// largest `‖x‖²` in the trace, at least one), `|S| ≤ dim`, at least one deletion per minor cycle,
/// survival of each newly added vertex through its major cycle, and a major
/// cycle with at most one minor cycle in every `3·dim + 1` consecutive
/// iterations.
pub fn check_trace(records: &[IterationRecord], dim: usize) -> Vec<TraceViolation> {
    let mut out = Vec::new();
    let slack = STALL_TOL * records.iter().map(|r| r.norm_sq_before).fold(1.0, f64::max);
    for r in records {
        if !(r.norm_sq_after < r.norm_sq_before + slack) {
            out.push(TraceViolation::NormNotDecreasing {
                iter: r.iter,
                before: r.norm_sq_before,
                after: r.norm_sq_after,
            });
        }
        if r.active_size_after > dim {
            out.push(TraceViolation::ActiveSetTooLarge {
                iter: r.iter,
                size: r.active_size_after,
            });
        }
        match r.kind {
            CycleKind::Minor => {
                if r.active_size_after >= r.active_size_before {
                    out.push(TraceViolation::MinorWithoutDeletion { iter: r.iter });
                }
            }
            CycleKind::Major => {
                if r.new_vertex_survived == Some(false) {
                    out.push(TraceViolation::NewVertexDeleted { iter: r.iter });
                }
            }
        }
    }
    let window = 3 * dim + 1;
    if records.len() >= window {
        for start in 0..=records.len() - window {
            let good = records[start..start + window]
                .iter()
                .any(|r| r.kind == CycleKind::Major && r.minor_cycles <= 1);
            if !good {
                out.push(TraceViolation::NoGoodMajorInWindow { start });
            }
        }
    }
    out
}

/// Writes the trace as CSV with columns `iter,kind,norm_sq,active_size,delta,theta`.
pub fn write_trace_csv<W: std::io::Write>(records: &[IterationRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "iter,kind,norm_sq,active_size,delta,theta")?;
    for r in records {
        let kind = match r.kind {
            CycleKind::Major => "major",
            CycleKind::Minor => "minor",
        };
        let opt = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
        writeln!(
            w,
            "{},{},{:e},{},{},{}",
            r.iter,
            kind,
            r.norm_sq_after,
            r.active_size_after,
            opt(r.delta),
            opt(r.theta)
        )?;
    }
    Ok(())
}
