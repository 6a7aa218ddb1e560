//! Integer lattice {0,…,m}^n, the level slabs `L_k`, and k-strings.
//!
//! A k-string is a chain of k+1 grid points `x_0, …, x_k` in `L_k` where
//! `x_j = x_0 + Σ_{i≤j} e_{σ(i)}` for a permutation σ of the axes `1..=k`.
//! Strings are stored canonically as `(base, σ)`. Axes are 1-based
//! everywhere in the public API.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("invalid grid: n = {n}, m = {m} (both must be at least 1)")]
    InvalidSpec { n: usize, m: u32 },
    #[error("point {point} is not in the grid {{0,…,{m}}}^{n}")]
    PointOutsideGrid { point: GridPoint, n: usize, m: u32 },
    #[error("not a string: {0}")]
    NotAString(String),
    #[error("cannot lift a {from}-string in dimension {n}")]
    DimensionExceeded { from: usize, n: usize },
    #[error("face omitting x_{h} lies on the grid boundary; no second string contains it")]
    BoundaryFace { h: usize },
    #[error("omitted index {h} is out of range for a {k}-string")]
    InvalidFace { h: usize, k: usize },
}

/// Dimension `n` and resolution `m` of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    m: u32,
}

impl GridSpec {
    pub fn new(n: usize, m: u32) -> Result<Self, GridError> {
        if n == 0 || m == 0 {
            return Err(GridError::InvalidSpec { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `(m+1)^n`, saturating.
    pub fn point_count(&self) -> u128 {
        (self.m as u128 + 1).saturating_pow(self.n as u32)
    }

    pub fn contains(&self, x: &GridPoint) -> bool {
        x.dim() == self.n && x.0.iter().all(|&c| c <= self.m)
    }

    pub fn check(&self, x: &GridPoint) -> Result<(), GridError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GridError::PointOutsideGrid {
                point: x.clone(),
                n: self.n,
                m: self.m,
            })
        }
    }

    pub fn origin(&self) -> GridPoint {
        GridPoint(vec![0; self.n])
    }

    /// Real embedding `x / m`.
    pub fn to_real(&self, x: &GridPoint) -> Vec<f64> {
        x.0.iter().map(|&c| self.coord_to_real(c)).collect()
    }

    pub fn coord_to_real(&self, c: u32) -> f64 {
        c as f64 / self.m as f64
    }

    /// Every grid point, lexicographic in integer coordinates.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.n)
            .map(|_| 0..=self.m)
            .multi_cartesian_product()
            .map(GridPoint)
    }

    /// Number of k-strings, `m^k · k!`, saturating.
    pub fn string_count(&self, k: usize) -> u128 {
        let fact = (1..=k as u128).fold(1u128, |acc, i| acc.saturating_mul(i));
        (self.m as u128).saturating_pow(k as u32).saturating_mul(fact)
    }

    /// Every k-string exactly once, ordered by base (lexicographic) then σ
    /// (lexicographic).
    pub fn strings(&self, k: usize) -> impl Iterator<Item = StringK> + '_ {
        assert!(k <= self.n, "level {k} exceeds dimension {}", self.n);
        let n = self.n;
        let bases: Box<dyn Iterator<Item = Vec<u32>>> = if k == 0 {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new((0..k).map(|_| 0..self.m).multi_cartesian_product())
        };
        bases.flat_map(move |head| {
            let mut coords = head;
            coords.resize(n, 0);
            let base = GridPoint(coords);
            (1..=k)
                .permutations(k)
                .map(move |perm| StringK {
                    k,
                    base: base.clone(),
                    perm,
                })
        })
    }
}

/// A lattice point; `coords[i]` is in `0..=m` and stands for `coords[i] / m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GridPoint(Vec<u32>);

impl GridPoint {
    pub fn new(coords: Vec<u32>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinate on 1-based `axis`.
    pub fn coord(&self, axis: usize) -> u32 {
        self.0[axis - 1]
    }

    pub fn coord_sum(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Membership in `L_k`: every coordinate past axis k is zero.
    pub fn in_level(&self, k: usize) -> bool {
        self.0.iter().skip(k).all(|&c| c == 0)
    }

    fn stepped(&self, axis: usize, up: bool) -> Self {
        let mut c = self.0.clone();
        if up {
            c[axis - 1] += 1;
        } else {
            c[axis - 1] -= 1;
        }
        Self(c)
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// A k-string in canonical `(base, σ)` form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StringK {
    k: usize,
    base: GridPoint,
    perm: Vec<usize>,
}

impl StringK {
    /// Validates that `perm` is a permutation of `1..=k`, `base` lies in
    /// `L_k`, and every stepped axis has room for one step.
    pub fn new(spec: &GridSpec, base: GridPoint, perm: Vec<usize>) -> Result<Self, GridError> {
        spec.check(&base)?;
        let k = perm.len();
        if k > spec.n() {
            return Err(GridError::NotAString(format!(
                "permutation length {k} exceeds dimension {}",
                spec.n()
            )));
        }
        let mut seen = vec![false; k + 1];
        for &a in &perm {
            if a == 0 || a > k || seen[a] {
                return Err(GridError::NotAString(format!(
                    "{perm:?} is not a permutation of 1..={k}"
                )));
            }
            seen[a] = true;
        }
        if !base.in_level(k) {
            return Err(GridError::NotAString(format!("base {base} is not in L_{k}")));
        }
        if let Some(axis) = (1..=k).find(|&a| base.coord(a) >= spec.m()) {
            return Err(GridError::NotAString(format!(
                "base {base} has no room to step on axis {axis}"
            )));
        }
        Ok(Self { k, base, perm })
    }

    /// The unique 0-string `⟨0⟩`.
    pub fn zero(spec: &GridSpec) -> Self {
        Self {
            k: 0,
            base: spec.origin(),
            perm: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &GridPoint {
        &self.base
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// `⟨x_0, …, x_k⟩` in chain order.
    pub fn vertices(&self) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(self.k + 1);
        let mut cur = self.base.clone();
        out.push(cur.clone());
        for &axis in &self.perm {
            cur = cur.stepped(axis, true);
            out.push(cur.clone());
        }
        out
    }

    /// Recovers the unique string whose vertex set is `pts` (any order).
    pub fn from_vertices(spec: &GridSpec, pts: &[GridPoint]) -> Result<Self, GridError> {
        if pts.is_empty() {
            return Err(GridError::NotAString("empty vertex set".into()));
        }
        for p in pts {
            spec.check(p)?;
        }
        let mut sorted: Vec<&GridPoint> = pts.iter().collect();
        sorted.sort_by_key(|p| p.coord_sum());
        let k = sorted.len() - 1;
        let mut perm = Vec::with_capacity(k);
        for (a, b) in sorted.iter().tuple_windows() {
            if b.coord_sum() != a.coord_sum() + 1 {
                return Err(GridError::NotAString(format!(
                    "coordinate sums {} and {} are not consecutive",
                    a.coord_sum(),
                    b.coord_sum()
                )));
            }
            let diff: Vec<usize> = (0..spec.n())
                .filter(|&i| a.0[i] != b.0[i])
                .collect();
            match diff.as_slice() {
                [i] if b.0[*i] == a.0[*i] + 1 => perm.push(i + 1),
                _ => {
                    return Err(GridError::NotAString(format!(
                        "{b} is not a unit step from {a}"
                    )))
                }
            }
        }
        Self::new(spec, sorted[0].clone(), perm)
    }

    /// The unique (k+1)-string containing this string, obtained by one step
    /// on axis k+1 from `x_k`.
    pub fn lift(&self, spec: &GridSpec) -> Result<Self, GridError> {
        if self.k >= spec.n() {
            return Err(GridError::DimensionExceeded {
                from: self.k,
                n: spec.n(),
            });
        }
        let mut perm = self.perm.clone();
        perm.push(self.k + 1);
        Ok(Self {
            k: self.k + 1,
            base: self.base.clone(),
            perm,
        })
    }

    /// Face omitting vertex `x_h`.
    pub fn face(&self, h: usize) -> Result<Face, GridError> {
        if h > self.k {
            return Err(GridError::InvalidFace { h, k: self.k });
        }
        Ok(Face {
            parent: self.clone(),
            omitted: h,
        })
    }

    /// The other k-string through the face omitting `x_h`.
    pub fn pivot(&self, spec: &GridSpec, h: usize) -> Result<Self, GridError> {
        self.face(h)?.pivot(spec).map(|f| f.parent)
    }
}

impl fmt::Display for StringK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.vertices().iter().join(", "))
    }
}

/// A k-string minus one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    parent: StringK,
    omitted: usize,
}

impl Face {
    pub fn parent(&self) -> &StringK {
        &self.parent
    }

    pub fn omitted(&self) -> usize {
        self.omitted
    }

    pub fn vertices(&self) -> Vec<GridPoint> {
        let mut v = self.parent.vertices();
        v.remove(self.omitted);
        v
    }

    /// True when the face lies in `L_{k-1}`. This happens exactly when the
    /// last vertex is omitted, σ(k) = k and the base sits at zero on axis k;
    /// the face is then itself a (k-1)-string (see [`Face::as_string`]).
    pub fn in_lower_level(&self) -> bool {
        let s = &self.parent;
        s.k > 0
            && self.omitted == s.k
            && s.perm[s.k - 1] == s.k
            && s.base.coord(s.k) == 0
    }

    /// The face as a (k-1)-string, when it is one.
    pub fn as_string(&self) -> Option<StringK> {
        let s = &self.parent;
        if s.k == 0 || self.omitted != s.k || s.perm[s.k - 1] != s.k {
            return None;
        }
        if s.base.coord(s.k) != 0 {
            return None;
        }
        Some(StringK {
            k: s.k - 1,
            base: s.base.clone(),
            perm: s.perm[..s.k - 1].to_vec(),
        })
    }

    /// The same vertex set seen from the other k-string that contains it.
    pub fn pivot(&self, spec: &GridSpec) -> Result<Face, GridError> {
        let s = &self.parent;
        let k = s.k;
        let h = self.omitted;
        if k == 0 {
            return Err(GridError::InvalidFace { h, k });
        }
        if h == 0 {
            // ⟨x_1, …, x_k, x_k + e_σ(1)⟩
            let first = s.perm[0];
            if s.base.coord(first) + 1 >= spec.m() {
                return Err(GridError::BoundaryFace { h });
            }
            let mut perm = s.perm[1..].to_vec();
            perm.push(first);
            Ok(Face {
                parent: StringK {
                    k,
                    base: s.base.stepped(first, true),
                    perm,
                },
                omitted: k,
            })
        } else if h < k {
            let mut perm = s.perm.clone();
            perm.swap(h - 1, h);
            Ok(Face {
                parent: StringK {
                    k,
                    base: s.base.clone(),
                    perm,
                },
                omitted: h,
            })
        } else {
            // ⟨x_0 − e_σ(k), x_0, …, x_{k−1}⟩
            let last = s.perm[k - 1];
            if s.base.coord(last) == 0 {
                return Err(GridError::BoundaryFace { h });
            }
            let mut perm = Vec::with_capacity(k);
            perm.push(last);
            perm.extend_from_slice(&s.perm[..k - 1]);
            Ok(Face {
                parent: StringK {
                    k,
                    base: s.base.stepped(last, false),
                    perm,
                },
                omitted: 0,
            })
        }
    }
}
