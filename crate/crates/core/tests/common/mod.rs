#![allow(dead_code)]

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stringchase::functions::{builtin, parse, CATALOG};
use stringchase::labeling::{Labeling, MapFn, TableLabeling};
use stringchase::{GridPoint, GridSpec, StringK};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Text of a random polynomial map in `n` variables: each component is a sum
/// of up to four monomials of degree ≤ 3 with coefficients in [−1, 1].
pub fn random_poly_text(rng: &mut impl Rng, n: usize) -> String {
    let comps: Vec<String> = (0..n)
        .map(|_| {
            let mut s = format!("{:.2}", rng.gen_range(0.0..1.0));
            for _ in 0..rng.gen_range(1..=4) {
                let coef = format!("{:.2}", rng.gen_range(0.0..1.0));
                let sign = if rng.gen_bool(0.5) { "+" } else { "-" };
                let mono: Vec<String> = (0..rng.gen_range(1..=3))
                    .map(|_| {
                        let v = rng.gen_range(1..=n);
                        match rng.gen_range(1..=3u32) {
                            1 => format!("x{v}"),
                            e => format!("x{v}^{e}"),
                        }
                    })
                    .collect();
                s.push_str(&format!(" {sign} {coef}*{}", mono.join("*")));
            }
            s
        })
        .collect();
    comps.join("; ")
}

pub fn random_poly_map(rng: &mut impl Rng, n: usize) -> MapFn {
    let text = random_poly_text(rng, n);
    parse(&text, n)
        .unwrap_or_else(|e| panic!("generated `{text}` does not parse: {e}"))
        .into_map_fn(text)
}

/// Every builtin that can be instantiated in dimension `n`.
pub fn builtins_for(n: usize) -> Vec<MapFn> {
    let mut out: Vec<MapFn> = CATALOG
        .iter()
        .filter_map(|name| builtin(name, Some(n), None).ok())
        .collect();
    if n == 1 {
        out.push(builtin("avg-c", None, Some(&[0.8])).unwrap());
        out.push(builtin("const-c", None, Some(&[0.3])).unwrap());
    }
    if n == 3 {
        out.push(builtin("avg-c", None, Some(&[0.1, 0.9, 0.5])).unwrap());
    }
    out
}

/// Random labeling obeying (B1) and (B2).
pub fn random_brouwer_labeling(rng: &mut impl Rng, spec: GridSpec) -> TableLabeling {
    let n = spec.n();
    let m = spec.m();
    TableLabeling::from_fn(spec, |x| {
        let floor = (1..=n).rev().find(|&k| x.coord(k) == m).unwrap_or(0);
        let allowed: Vec<usize> = (floor..=n)
            .filter(|&l| l == 0 || x.coord(l) > 0)
            .collect();
        allowed[rng.gen_range(0..allowed.len())]
    })
}

/// Every chain `x_0 → … → x_k` in `L_k` stepping once along each of the axes
/// `1..=k`, found by depth-first search over unit steps.
pub fn chains_by_dfs(spec: &GridSpec, k: usize) -> HashSet<Vec<GridPoint>> {
    fn go(
        spec: &GridSpec,
        k: usize,
        chain: &mut Vec<Vec<u32>>,
        used: &mut Vec<bool>,
        out: &mut HashSet<Vec<GridPoint>>,
    ) {
        if chain.len() == k + 1 {
            out.insert(chain.iter().cloned().map(GridPoint::new).collect());
            return;
        }
        for axis in 0..k {
            if used[axis] {
                continue;
            }
            let mut next = chain.last().unwrap().clone();
            if next[axis] == spec.m() {
                continue;
            }
            next[axis] += 1;
            used[axis] = true;
            chain.push(next);
            go(spec, k, chain, used, out);
            chain.pop();
            used[axis] = false;
        }
    }
    let mut out = HashSet::new();
    for p in spec.points().filter(|p| p.in_level(k)) {
        let mut chain = vec![p.coords().to_vec()];
        go(spec, k, &mut chain, &mut vec![false; k], &mut out);
    }
    out
}

/// Brute-force: which k-subsets of `labels` (by omitted index) carry label
/// set exactly {0..k−1}.
pub fn fl_faces_by_subsets(labels: &[usize]) -> Vec<usize> {
    let k = labels.len() - 1;
    let want: HashSet<usize> = (0..k).collect();
    (0..=k)
        .filter(|&h| {
            let got: HashSet<usize> = labels
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != h)
                .map(|(_, &l)| l)
                .collect();
            got == want
        })
        .collect()
}

pub fn is_fl_by_set(labels: &[usize]) -> bool {
    let got: HashSet<usize> = labels.iter().copied().collect();
    got == (0..labels.len()).collect()
}

/// Every k-string containing all of `verts`, by scanning the enumeration.
pub fn containing_strings(spec: &GridSpec, k: usize, verts: &[GridPoint]) -> Vec<StringK> {
    spec.strings(k)
        .filter(|s| {
            let vs = s.vertices();
            verts.iter().all(|v| vs.contains(v))
        })
        .collect()
}

pub fn labels(lab: &dyn Labeling, pts: &[GridPoint]) -> Vec<usize> {
    pts.iter().map(|p| lab.label(p).unwrap()).collect()
}

/// Root of `cos(x) − x` on [0, 1] by bisection.
pub fn dottie_by_bisection(tol: f64) -> f64 {
    let f = |x: f64| x.cos() - x;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
