//! Brouwer labelings of the grid and fully-labeled queries.
//!
//! The induced labeling of a map `g` is
//! `ℓ(x) = max { k : (x)_k > 0, g_k(x) ≤ (x)_k }` with `ℓ(x) = 0` when no
//! axis qualifies. It always satisfies
//!
//! * (B1) `(x)_k = 0 ⇒ ℓ(x) ≠ k`
//! * (B2) `(x)_k = 1 ⇒ ℓ(x) ≥ k`
//!
//! provided the map's output is clamped into the cube.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::grid::{GridPoint, GridSpec, StringK};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("map `{name}` expects {expected} inputs, got {found}")]
    DimensionMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("map `{name}` failed at {point:?}: {reason}")]
    EvaluationFailed {
        name: String,
        point: Vec<f64>,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabelError {
    #[error("map evaluation failed at grid point {point}: {source}")]
    MapEvaluationFailed { point: GridPoint, source: MapError },
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
    #[error("no label assigned to grid point {0}")]
    Unlabeled(GridPoint),
}

type EvalFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A continuous self-map of `[0,1]^n`. Output is clamped into the cube.
#[derive(Clone)]
pub struct MapFn {
    name: String,
    n: usize,
    eval: Arc<EvalFn>,
    lipschitz: Option<f64>,
    fixed_points: Vec<Vec<f64>>,
}

impl MapFn {
    pub fn new<F>(name: impl Into<String>, n: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            n,
            eval: Arc::new(f),
            lipschitz: None,
            fixed_points: Vec::new(),
        }
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn with_fixed_points(mut self, fps: Vec<Vec<f64>>) -> Self {
        self.fixed_points = fps;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Declared sup-norm Lipschitz constant, when known.
    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    /// Documented exact fixed points, when known.
    pub fn fixed_points(&self) -> &[Vec<f64>] {
        &self.fixed_points
    }

    pub fn eval(&self, p: &[f64]) -> Result<Vec<f64>, MapError> {
        if p.len() != self.n {
            return Err(MapError::DimensionMismatch {
                name: self.name.clone(),
                expected: self.n,
                found: p.len(),
            });
        }
        let mut out = (self.eval)(p);
        if out.len() != self.n {
            return Err(MapError::EvaluationFailed {
                name: self.name.clone(),
                point: p.to_vec(),
                reason: format!("returned {} components, expected {}", out.len(), self.n),
            });
        }
        if out.iter().any(|v| v.is_nan()) {
            return Err(MapError::EvaluationFailed {
                name: self.name.clone(),
                point: p.to_vec(),
                reason: "non-numeric output".into(),
            });
        }
        for v in &mut out {
            *v = v.clamp(0.0, 1.0);
        }
        Ok(out)
    }
}

impl fmt::Debug for MapFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapFn")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

/// An assignment of labels in `0..=n` to grid points.
pub trait Labeling: Sync {
    fn spec(&self) -> GridSpec;

    fn label(&self, x: &GridPoint) -> Result<usize, LabelError>;
}

/// The max-rule labeling induced by a map, memoized per grid point.
pub struct InducedLabeling {
    spec: GridSpec,
    map: MapFn,
    cache: RwLock<HashMap<GridPoint, usize>>,
    evals: AtomicU64,
}

impl InducedLabeling {
    pub fn new(spec: GridSpec, map: MapFn) -> Self {
        assert_eq!(spec.n(), map.n(), "grid and map dimensions differ");
        Self {
            spec,
            map,
            cache: RwLock::new(HashMap::new()),
            evals: AtomicU64::new(0),
        }
    }

    pub fn map(&self) -> &MapFn {
        &self.map
    }

    /// Number of map evaluations performed so far.
    pub fn evaluations(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    fn compute(&self, x: &GridPoint) -> Result<usize, LabelError> {
        let real = self.spec.to_real(x);
        self.evals.fetch_add(1, Ordering::Relaxed);
        let g = self
            .map
            .eval(&real)
            .map_err(|source| LabelError::MapEvaluationFailed {
                point: x.clone(),
                source,
            })?;
        Ok((1..=self.spec.n())
            .rev()
            .find(|&k| x.coord(k) > 0 && g[k - 1] <= real[k - 1])
            .unwrap_or(0))
    }
}

impl Labeling for InducedLabeling {
    fn spec(&self) -> GridSpec {
        self.spec
    }

    fn label(&self, x: &GridPoint) -> Result<usize, LabelError> {
        self.spec.check(x)?;
        if let Some(&l) = self.cache.read().unwrap().get(x) {
            return Ok(l);
        }
        let l = self.compute(x)?;
        self.cache.write().unwrap().insert(x.clone(), l);
        Ok(l)
    }
}

/// Explicit label table, for hand-built or random labelings.
#[derive(Debug, Clone)]
pub struct TableLabeling {
    spec: GridSpec,
    labels: HashMap<GridPoint, usize>,
}

impl TableLabeling {
    pub fn new(spec: GridSpec) -> Self {
        Self {
            spec,
            labels: HashMap::new(),
        }
    }

    /// Labels every grid point with `f`.
    pub fn from_fn(spec: GridSpec, mut f: impl FnMut(&GridPoint) -> usize) -> Self {
        let labels = spec.points().map(|p| {
            let l = f(&p);
            (p, l)
        });
        Self {
            spec,
            labels: labels.collect(),
        }
    }

    pub fn set(&mut self, x: GridPoint, label: usize) {
        self.labels.insert(x, label);
    }
}

impl Labeling for TableLabeling {
    fn spec(&self) -> GridSpec {
        self.spec
    }

    fn label(&self, x: &GridPoint) -> Result<usize, LabelError> {
        self.labels
            .get(x)
            .copied()
            .ok_or_else(|| LabelError::Unlabeled(x.clone()))
    }
}

/// Which Brouwer condition a point breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// `(x)_k = 0` but `ℓ(x) = k`.
    B1,
    /// `(x)_k = m` but `ℓ(x) < k`.
    B2,
    /// `ℓ(x) > n`.
    Range,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub point: GridPoint,
    pub label: usize,
    pub rule: Rule,
    pub axis: usize,
}

/// First (B1)/(B2) violation at `x`, if any.
pub fn brouwer_violation(spec: &GridSpec, x: &GridPoint, label: usize) -> Option<Violation> {
    let n = spec.n();
    if label > n {
        return Some(Violation {
            point: x.clone(),
            label,
            rule: Rule::Range,
            axis: label,
        });
    }
    if label > 0 && x.coord(label) == 0 {
        return Some(Violation {
            point: x.clone(),
            label,
            rule: Rule::B1,
            axis: label,
        });
    }
    (1..=n)
        .rev()
        .find(|&k| x.coord(k) == spec.m() && label < k)
        .map(|axis| Violation {
            point: x.clone(),
            label,
            rule: Rule::B2,
            axis,
        })
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationConfig {
    /// Largest grid checked exhaustively.
    pub budget: u128,
    /// Points sampled when the grid exceeds the budget.
    pub sample: usize,
    pub seed: u64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            budget: 1_000_000,
            sample: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checked: usize,
    pub exhaustive: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks (B1)/(B2) on every grid point, or on a uniform sample when the grid
/// is larger than the configured budget.
pub fn validate_brouwer(
    lab: &dyn Labeling,
    cfg: &ValidationConfig,
) -> Result<ValidationReport, LabelError> {
    let spec = lab.spec();
    let exhaustive = spec.point_count() <= cfg.budget;
    let mut violations = Vec::new();
    let mut checked = 0;
    let mut check = |x: GridPoint| -> Result<(), LabelError> {
        let l = lab.label(&x)?;
        checked += 1;
        if let Some(v) = brouwer_violation(&spec, &x, l) {
            violations.push(v);
        }
        Ok(())
    };
    if exhaustive {
        for x in spec.points() {
            check(x)?;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.sample {
            let c = (0..spec.n()).map(|_| rng.gen_range(0..=spec.m())).collect();
            check(GridPoint::new(c))?;
        }
    }
    Ok(ValidationReport {
        checked,
        exhaustive,
        violations,
    })
}

/// Labels of the string's vertices in chain order.
pub fn labels_of(lab: &dyn Labeling, s: &StringK) -> Result<Vec<usize>, LabelError> {
    s.vertices().iter().map(|v| lab.label(v)).collect()
}

/// Whether `labels` (k+1 of them) are exactly `{0, …, k}`.
pub fn is_fully_labeled_set(labels: &[usize]) -> bool {
    let mut seen = vec![false; labels.len()];
    labels.iter().all(|&l| match seen.get_mut(l) {
        Some(s) if !*s => {
            *s = true;
            true
        }
        _ => false,
    })
}

/// Omitted indices `h` whose face carries exactly the labels `{0, …, k−1}`,
/// where `k + 1 = labels.len()`.
pub fn fully_labeled_faces(labels: &[usize]) -> Vec<usize> {
    let k = labels.len().saturating_sub(1);
    if labels.is_empty() {
        return Vec::new();
    }
    // Tally labels below k; anything ≥ k must be the omitted vertex.
    let mut count = vec![0usize; k];
    let mut high = 0;
    for &l in labels {
        if l < k {
            count[l] += 1;
        } else {
            high += 1;
        }
    }
    (0..=k)
        .filter(|&h| {
            let l = labels[h];
            let removes_high = l >= k;
            if high != usize::from(removes_high) {
                return false;
            }
            (0..k).all(|j| count[j] - usize::from(j == l) == 1)
        })
        .collect()
}

pub fn is_fully_labeled(lab: &dyn Labeling, s: &StringK) -> Result<bool, LabelError> {
    Ok(is_fully_labeled_set(&labels_of(lab, s)?))
}

/// Omitted indices of the (k−1)-fully-labeled faces of `s`.
pub fn count_fully_labeled_faces(
    lab: &dyn Labeling,
    s: &StringK,
) -> Result<Vec<usize>, LabelError> {
    Ok(fully_labeled_faces(&labels_of(lab, s)?))
}
