//! Refinement loop: label the grid at increasing resolutions, find an
//! n-fully-labeled string, and report its best vertex once the residual
//! `‖g(z) − z‖_∞` drops below tolerance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{GridError, GridPoint, GridSpec, StringK};
use crate::labeling::{labels_of, InducedLabeling, LabelError, Labeling, MapError, MapFn};
use crate::search::{exhaustive_fully_labeled, path_follow, SearchError, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Oracle,
    PathFollow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub initial_m: u32,
    pub growth: u32,
    pub max_m: u32,
    pub tol: f64,
    pub engine: Engine,
    /// Enumeration budget for the oracle engine.
    pub budget: u128,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            initial_m: 2,
            growth: 2,
            max_m: 1 << 16,
            tol: 1e-6,
            engine: Engine::PathFollow,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.initial_m < 1 {
            return Err(SolveError::ConfigInvalid("initial_m must be at least 1".into()));
        }
        if self.growth < 2 {
            return Err(SolveError::ConfigInvalid("growth must be at least 2".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(SolveError::ConfigInvalid("tol must be positive".into()));
        }
        if self.max_m < self.initial_m {
            return Err(SolveError::ConfigInvalid("max_m is below initial_m".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub base: GridPoint,
    pub perm: Vec<usize>,
    pub labels: Vec<usize>,
}

impl Certificate {
    pub fn string(&self, spec: &GridSpec) -> Result<StringK, GridError> {
        StringK::new(spec, self.base.clone(), self.perm.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub m: u32,
    pub residual: f64,
    pub diameter: f64,
    pub evals: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    pub z: Vec<f64>,
    pub residual: f64,
    /// Resolution of the certificate.
    pub m_final: u32,
    pub converged: bool,
    pub certificate: Certificate,
    pub history: Vec<HistoryEntry>,
}

/// `max_k |g_k(p) − p_k|`.
pub fn residual(g: &MapFn, p: &[f64]) -> Result<f64, MapError> {
    let y = g.eval(p)?;
    Ok(y.iter().zip(p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// The vertex of `s` with the smallest residual (first one on ties), and that
/// residual.
pub fn select_witness(g: &MapFn, spec: &GridSpec, s: &StringK) -> Result<(Vec<f64>, f64), MapError> {
    let mut best: Option<(Vec<f64>, f64)> = None;
    for v in s.vertices() {
        let p = spec.to_real(&v);
        let r = residual(g, &p)?;
        if best.as_ref().is_none_or(|(_, b)| r < *b) {
            best = Some((p, r));
        }
    }
    Ok(best.expect("strings have at least one vertex"))
}

/// Diameter of an n-string at resolution m.
pub fn diameter(n: usize, m: u32) -> f64 {
    (n as f64).sqrt() / m as f64
}

/// Checks the inequality pair carried by a fully-labeled certificate:
/// the label-0 vertex has `g_j ≥ x_j` on every axis, and each label-k vertex
/// has `g_k ≤ x_k`.
pub fn check_sandwich(g: &MapFn, spec: &GridSpec, cert: &Certificate) -> Result<bool, SolveError> {
    let s = cert.string(spec)?;
    for (v, &l) in s.vertices().iter().zip(&cert.labels) {
        let p = spec.to_real(v);
        let y = g.eval(&p)?;
        let ok = if l == 0 {
            y.iter().zip(&p).all(|(gy, x)| gy >= x)
        } else {
            y[l - 1] <= p[l - 1]
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn find_certificate(lab: &InducedLabeling, cfg: &SolveConfig) -> Result<StringK, SolveError> {
    match cfg.engine {
        Engine::PathFollow => Ok(path_follow(lab)?.0),
        Engine::Oracle => {
            let n = lab.spec().n();
            let found = exhaustive_fully_labeled(lab, n, cfg.budget)?;
            found.into_iter().next().ok_or_else(|| {
                SolveError::Search(SearchError::LabelingInvalid(
                    "no n-fully-labeled string exists".into(),
                ))
            })
        }
    }
}

struct Best {
    m: u32,
    z: Vec<f64>,
    residual: f64,
    cert: Certificate,
}

/// Runs the resolution schedule `initial_m, initial_m·growth, … ≤ max_m`.
pub fn solve(g: &MapFn, cfg: &SolveConfig) -> Result<SolveReport, SolveError> {
    cfg.validate()?;
    let n = g.n();
    let mut history = Vec::new();
    let mut best: Option<Best> = None;
    let mut converged = false;
    let mut m = cfg.initial_m;
    loop {
        let spec = GridSpec::new(n, m)?;
        let lab = InducedLabeling::new(spec, g.clone());
        let s = find_certificate(&lab, cfg)?;
        let labels = labels_of(&lab, &s)?;
        let (z, r) = select_witness(g, &spec, &s)?;
        history.push(HistoryEntry {
            m,
            residual: r,
            diameter: diameter(n, m),
            evals: lab.evaluations(),
        });
        if best.as_ref().is_none_or(|b| r < b.residual) {
            best = Some(Best {
                m,
                z,
                residual: r,
                cert: Certificate {
                    base: s.base().clone(),
                    perm: s.perm().to_vec(),
                    labels,
                },
            });
        }
        if r <= cfg.tol {
            converged = true;
            break;
        }
        match m.checked_mul(cfg.growth) {
            Some(next) if next <= cfg.max_m => m = next,
            _ => break,
        }
    }
    let best = best.expect("at least one resolution runs");
    let residual = residual(g, &best.z)?;
    Ok(SolveReport {
        n,
        z: best.z,
        residual,
        m_final: best.m,
        converged,
        certificate: best.cert,
        history,
    })
}
