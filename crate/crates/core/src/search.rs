//! Locating fully-labeled strings.
//!
//! Two independent routes:
//!
//! * [`exhaustive_fully_labeled`] and [`parity_check`] enumerate every
//!   k-string. The parity check tallies strings by how many (k−1)-fully-labeled
//!   faces they carry (`S1`, `S2`) and faces by how many strings contain them
//!   (`T1`, `T2`), then confirms `S1 + 2·S2 = T1 + 2·T2` and that `S1` is odd.
//! * [`path_follow`] walks door to door from the 0-string. Nodes are strings
//!   of every level `0..=n` that carry a fully-labeled face of their level (or
//!   are the 0-string). Doors of a k-string are its (k−1)-fully-labeled faces
//!   plus an "up" door when it is itself k-fully labeled. A face lying in
//!   `L_{k−1}` leads down to the (k−1)-string it is; an up door leads to the
//!   lift. Every node has exactly two doors except `⟨0⟩` and the n-fully-labeled
//!   n-strings, so the walk from `⟨0⟩` ends at one of the latter.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{GridError, GridPoint, GridSpec, StringK};
use crate::labeling::{
    brouwer_violation, fully_labeled_faces, is_fully_labeled_set, labels_of, LabelError,
    Labeling, Violation,
};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("enumeration needs {required} strings, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("path exceeded {limit} steps; the walk is not a simple path")]
    StepLimitExceeded { limit: u128 },
    #[error("labeling is not Brouwer: {0}")]
    LabelingInvalid(String),
    #[error("level {k} exceeds dimension {n}")]
    LevelOutOfRange { k: usize, n: usize },
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

fn check_budget(spec: &GridSpec, k: usize, budget: u128) -> Result<(), SearchError> {
    if k > spec.n() {
        return Err(SearchError::LevelOutOfRange { k, n: spec.n() });
    }
    let required = spec.string_count(k);
    if required > budget {
        return Err(SearchError::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// All k-fully-labeled k-strings, ordered by base then σ.
pub fn exhaustive_fully_labeled(
    lab: &dyn Labeling,
    k: usize,
    budget: u128,
) -> Result<Vec<StringK>, SearchError> {
    let spec = lab.spec();
    check_budget(&spec, k, budget)?;
    let mut out = Vec::new();
    for s in spec.strings(k) {
        if is_fully_labeled_set(&labels_of(lab, &s)?) {
            out.push(s);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelParity {
    pub k: usize,
    #[serde(rename = "S1")]
    pub s1: u64,
    #[serde(rename = "S2")]
    pub s2: u64,
    #[serde(rename = "T1")]
    pub t1: u64,
    #[serde(rename = "T2")]
    pub t2: u64,
    /// k-fully-labeled k-strings, counted directly.
    pub fully_labeled: u64,
    pub identity_ok: bool,
    pub odd_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub levels: Vec<LevelParity>,
}

impl ParityReport {
    pub fn ok(&self) -> bool {
        self.levels.iter().all(|l| l.identity_ok && l.odd_ok)
    }
}

/// Double-counting tallies for every level `1..=n`.
pub fn parity_check(lab: &dyn Labeling, budget: u128) -> Result<ParityReport, SearchError> {
    let spec = lab.spec();
    let mut levels = Vec::with_capacity(spec.n());
    for k in 1..=spec.n() {
        check_budget(&spec, k, budget)?;
        levels.push(level_parity(lab, &spec, k)?);
    }
    Ok(ParityReport { levels })
}

fn level_parity(lab: &dyn Labeling, spec: &GridSpec, k: usize) -> Result<LevelParity, SearchError> {
    let (mut s1, mut s2, mut fully_labeled) = (0u64, 0u64, 0u64);
    let mut containing: HashMap<Vec<GridPoint>, u64> = HashMap::new();
    for s in spec.strings(k) {
        let labels = labels_of(lab, &s)?;
        if is_fully_labeled_set(&labels) {
            fully_labeled += 1;
        }
        let faces = fully_labeled_faces(&labels);
        match faces.len() {
            1 => s1 += 1,
            2 => s2 += 1,
            _ => {}
        }
        for h in faces {
            let mut verts = s.face(h)?.vertices();
            verts.sort();
            *containing.entry(verts).or_default() += 1;
        }
    }
    let t1 = containing.values().filter(|&&c| c == 1).count() as u64;
    let t2 = containing.values().filter(|&&c| c == 2).count() as u64;
    let overfull = containing.values().any(|&c| c > 2);
    Ok(LevelParity {
        k,
        s1,
        s2,
        t1,
        t2,
        fully_labeled,
        identity_ok: !overfull && s1 + 2 * s2 == t1 + 2 * t2,
        odd_ok: s1 % 2 == 1 && s1 == fully_labeled,
    })
}

/// A way into or out of a string along the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Door {
    /// The face omitting vertex `x_h`.
    Face(usize),
    /// Between a fully-labeled k-string and its lift.
    Up,
}

impl Serialize for Door {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Door::Face(h) => s.serialize_u64(*h as u64),
            Door::Up => s.serialize_str("up"),
        }
    }
}

impl<'de> Deserialize<'de> for Door {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Face(usize),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Face(h) => Ok(Door::Face(h)),
            Raw::Tag(t) if t == "up" => Ok(Door::Up),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!("unknown door `{t}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub level: usize,
    pub base: GridPoint,
    pub perm: Vec<usize>,
    pub labels: Vec<usize>,
    /// `None` only for the 0-string the walk starts from.
    pub entry: Option<Door>,
    /// `None` only for the final n-fully-labeled string.
    pub exit: Option<Door>,
}

impl TraceStep {
    pub fn string(&self, spec: &GridSpec) -> Result<StringK, GridError> {
        StringK::new(spec, self.base.clone(), self.perm.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceOutcome {
    FullyLabeled {
        base: GridPoint,
        perm: Vec<usize>,
        labels: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathTrace {
    pub steps: Vec<TraceStep>,
    pub outcome: TraceOutcome,
}

impl PathTrace {
    /// Number of same-level pivots taken along the walk.
    pub fn pivots(&self) -> usize {
        self.steps
            .windows(2)
            .filter(|w| w[0].level == w[1].level)
            .count()
    }
}

/// Upper bound on distinct nodes of the walk graph, plus one.
pub fn step_limit(spec: &GridSpec) -> u128 {
    (0..=spec.n())
        .map(|k| spec.string_count(k))
        .fold(1u128, |a, b| a.saturating_add(b))
}

fn checked_labels(lab: &dyn Labeling, spec: &GridSpec, s: &StringK) -> Result<Vec<usize>, SearchError> {
    let labels = labels_of(lab, s)?;
    for (v, &l) in s.vertices().iter().zip(&labels) {
        if let Some(viol) = brouwer_violation(spec, v, l) {
            return Err(SearchError::LabelingInvalid(describe(&viol)));
        }
    }
    Ok(labels)
}

fn describe(v: &Violation) -> String {
    format!("{:?} fails at {} (label {}, axis {})", v.rule, v.point, v.label, v.axis)
}

/// Walks from `⟨0⟩` to an n-fully-labeled n-string.
pub fn path_follow(lab: &dyn Labeling) -> Result<(StringK, PathTrace), SearchError> {
    let spec = lab.spec();
    let n = spec.n();
    let limit = step_limit(&spec);
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut current = StringK::zero(&spec);
    let mut entry: Option<Door> = None;
    loop {
        if steps.len() as u128 >= limit {
            return Err(SearchError::StepLimitExceeded { limit });
        }
        let k = current.k();
        let labels = checked_labels(lab, &spec, &current)?;
        let fully = is_fully_labeled_set(&labels);
        let mut doors: Vec<Door> = if k == 0 {
            Vec::new()
        } else {
            fully_labeled_faces(&labels).into_iter().map(Door::Face).collect()
        };
        if fully {
            doors.push(Door::Up);
        }
        steps.push(TraceStep {
            level: k,
            base: current.base().clone(),
            perm: current.perm().to_vec(),
            labels: labels.clone(),
            entry,
            exit: None,
        });

        if fully && k == n {
            let outcome = TraceOutcome::FullyLabeled {
                base: current.base().clone(),
                perm: current.perm().to_vec(),
                labels,
            };
            return Ok((current, PathTrace { steps, outcome }));
        }

        let exits: Vec<Door> = doors.iter().copied().filter(|d| Some(*d) != entry).collect();
        let expected_doors = if entry.is_none() { 1 } else { 2 };
        if doors.len() != expected_doors || exits.len() != 1 {
            return Err(SearchError::LabelingInvalid(format!(
                "{current} with labels {labels:?} has doors {doors:?} (entered by {entry:?})"
            )));
        }
        let exit = exits[0];
        steps.last_mut().expect("just pushed").exit = Some(exit);

        match exit {
            Door::Up => {
                current = current.lift(&spec)?;
                entry = Some(Door::Face(current.k()));
            }
            Door::Face(h) => {
                let face = current.face(h)?;
                if let Some(lower) = face.as_string() {
                    current = lower;
                    entry = Some(Door::Up);
                } else {
                    match face.pivot(&spec) {
                        Ok(other) => {
                            entry = Some(Door::Face(other.omitted()));
                            current = other.parent().clone();
                        }
                        Err(GridError::BoundaryFace { .. }) => {
                            return Err(SearchError::LabelingInvalid(format!(
                                "fully-labeled face omitting x_{h} of {current} lies on the grid boundary"
                            )));
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
    }
}

/// Checks that consecutive trace entries meet in a shared door: the larger
/// string's level K, exactly K common vertices, and those vertices are
/// (K−1)-fully labeled. Also rejects repeated strings and a non-final end.
pub fn verify_trace(lab: &dyn Labeling, trace: &PathTrace) -> Result<(), String> {
    let spec = lab.spec();
    let mut strings = Vec::with_capacity(trace.steps.len());
    for st in &trace.steps {
        let s = st.string(&spec).map_err(|e| e.to_string())?;
        let labels = labels_of(lab, &s).map_err(|e| e.to_string())?;
        if labels != st.labels {
            return Err(format!("recorded labels {:?} differ from {:?} at {s}", st.labels, labels));
        }
        strings.push(s);
    }
    let first = strings.first().ok_or("empty trace")?;
    if *first != StringK::zero(&spec) {
        return Err(format!("trace starts at {first}, not the 0-string"));
    }
    let mut seen = std::collections::HashSet::new();
    for s in &strings {
        if !seen.insert(s) {
            return Err(format!("{s} repeats"));
        }
    }
    for w in strings.windows(2) {
        let top = w[0].k().max(w[1].k());
        let a = w[0].vertices();
        let b = w[1].vertices();
        let common: Vec<&GridPoint> = a.iter().filter(|v| b.contains(v)).collect();
        if common.len() != top {
            return Err(format!("{} and {} share {} vertices, expected {top}", w[0], w[1], common.len()));
        }
        let labels = common
            .iter()
            .map(|v| lab.label(v))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        if !is_fully_labeled_set(&labels) {
            return Err(format!("door between {} and {} has labels {labels:?}", w[0], w[1]));
        }
    }
    let last = strings.last().expect("nonempty");
    let last_labels = labels_of(lab, last).map_err(|e| e.to_string())?;
    if last.k() != spec.n() || !is_fully_labeled_set(&last_labels) {
        return Err(format!("trace ends at {last}, which is not n-fully labeled"));
    }
    let TraceOutcome::FullyLabeled { base, perm, .. } = &trace.outcome;
    if base != last.base() || perm.as_slice() != last.perm() {
        return Err("outcome does not match the final step".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::{InducedLabeling, MapFn, TableLabeling};

    fn p(c: &[u32]) -> GridPoint {
        GridPoint::new(c.to_vec())
    }

    fn reflect_lab() -> InducedLabeling {
        InducedLabeling::new(
            GridSpec::new(1, 4).unwrap(),
            MapFn::new("reflect", 1, |x| vec![1.0 - x[0]]),
        )
    }

    fn half_lab() -> InducedLabeling {
        InducedLabeling::new(
            GridSpec::new(2, 2).unwrap(),
            MapFn::new("half", 2, |_| vec![0.5, 0.5]),
        )
    }

    #[test]
    fn oracle_examples() {
        let lab = reflect_lab();
        let found = exhaustive_fully_labeled(&lab, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].vertices(), vec![p(&[1]), p(&[2])]);

        let lab = half_lab();
        let found = exhaustive_fully_labeled(&lab, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].vertices(), vec![p(&[0, 0]), p(&[1, 0]), p(&[1, 1])]);

        let zero = exhaustive_fully_labeled(&lab, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(zero, vec![StringK::zero(&lab.spec())]);
    }

    #[test]
    fn oracle_budget() {
        let lab = half_lab();
        assert_eq!(
            exhaustive_fully_labeled(&lab, 2, 7),
            Err(SearchError::BudgetExceeded { required: 8, budget: 7 })
        );
        assert!(matches!(
            exhaustive_fully_labeled(&lab, 3, DEFAULT_BUDGET),
            Err(SearchError::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn parity_reflect() {
        let rep = parity_check(&reflect_lab(), DEFAULT_BUDGET).unwrap();
        let l = &rep.levels[0];
        assert_eq!((l.s1, l.s2, l.t1, l.t2), (1, 1, 1, 1));
        assert!(rep.ok());
    }

    #[test]
    fn parity_half() {
        let rep = parity_check(&half_lab(), DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.levels[1].s1, 1);
        assert!(rep.ok());
    }

    #[test]
    fn parity_flags_constant_zero() {
        let g = GridSpec::new(2, 3).unwrap();
        let lab = TableLabeling::from_fn(g, |_| 0);
        let rep = parity_check(&lab, DEFAULT_BUDGET).unwrap();
        assert!(!rep.ok());
        assert!(rep.levels.iter().all(|l| l.s1 == 0 && !l.odd_ok));
    }

    #[test]
    fn path_half_lifts_straight_up() {
        let lab = half_lab();
        let (s, trace) = path_follow(&lab).unwrap();
        assert_eq!(s.vertices(), vec![p(&[0, 0]), p(&[1, 0]), p(&[1, 1])]);
        let levels: Vec<_> = trace.steps.iter().map(|t| t.level).collect();
        assert_eq!(levels, vec![0, 1, 2]);
        assert_eq!(trace.pivots(), 0);
        verify_trace(&lab, &trace).unwrap();
    }

    #[test]
    fn path_reflect_one_pivot() {
        let lab = reflect_lab();
        let (s, trace) = path_follow(&lab).unwrap();
        assert_eq!(s.vertices(), vec![p(&[1]), p(&[2])]);
        assert_eq!(trace.steps.len(), 3);
        assert_eq!(trace.steps[1].labels, vec![0, 0]);
        assert_eq!(trace.steps[1].entry, Some(Door::Face(1)));
        assert_eq!(trace.steps[1].exit, Some(Door::Face(0)));
        assert_eq!(trace.pivots(), 1);
        verify_trace(&lab, &trace).unwrap();
    }

    #[test]
    fn path_on_unit_grid() {
        let lab = InducedLabeling::new(
            GridSpec::new(1, 1).unwrap(),
            MapFn::new("sq", 1, |x| vec![x[0] * x[0]]),
        );
        let (s, trace) = path_follow(&lab).unwrap();
        assert_eq!(s.vertices(), vec![p(&[0]), p(&[1])]);
        assert_eq!(trace.steps.len(), 2);
    }

    #[test]
    fn path_rejects_non_brouwer() {
        let g = GridSpec::new(1, 3).unwrap();
        let lab = TableLabeling::from_fn(g, |_| 0);
        assert!(matches!(path_follow(&lab), Err(SearchError::LabelingInvalid(_))));
    }

    #[test]
    fn verify_trace_catches_tampering() {
        let lab = reflect_lab();
        let (_, mut trace) = path_follow(&lab).unwrap();
        trace.steps.remove(1);
        assert!(verify_trace(&lab, &trace).is_err());
    }

    #[test]
    fn door_json() {
        let s = serde_json::to_string(&[Some(Door::Face(2)), Some(Door::Up), None]).unwrap();
        assert_eq!(s, r#"[2,"up",null]"#);
        let back: Vec<Option<Door>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![Some(Door::Face(2)), Some(Door::Up), None]);
    }
}
