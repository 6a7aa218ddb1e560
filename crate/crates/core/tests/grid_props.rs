mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use stringchase::{GridError, GridPoint, GridSpec, StringK};

fn small_grids() -> impl Iterator<Item = GridSpec> {
    (1..=3).flat_map(|n| (1..=3).map(move |m| GridSpec::new(n, m).unwrap()))
}

#[test]
fn enumeration_matches_chain_search() {
    for spec in small_grids() {
        for k in 0..=spec.n() {
            let listed: Vec<Vec<GridPoint>> = spec.strings(k).map(|s| s.vertices()).collect();
            let unique: HashSet<_> = listed.iter().cloned().collect();
            assert_eq!(unique.len(), listed.len(), "duplicates at {spec:?} k={k}");
            assert_eq!(unique, common::chains_by_dfs(&spec, k), "{spec:?} k={k}");
            assert_eq!(listed.len() as u128, spec.string_count(k));
        }
    }
}

#[test]
fn enumeration_is_sorted() {
    let spec = GridSpec::new(3, 2).unwrap();
    let all: Vec<StringK> = spec.strings(3).collect();
    let mut sorted = all.clone();
    sorted.sort_by(|a, b| (a.base(), a.perm()).cmp(&(b.base(), b.perm())));
    assert_eq!(all, sorted);
}

#[test]
fn vertex_round_trip_and_sum_ladder() {
    for spec in small_grids() {
        for k in 0..=spec.n() {
            for s in spec.strings(k) {
                let v = s.vertices();
                assert_eq!(v.len(), k + 1);
                let sums: Vec<u64> = v.iter().map(|p| p.coord_sum()).collect();
                let base = sums[0];
                assert_eq!(sums, (0..=k as u64).map(|j| base + j).collect::<Vec<_>>());
                let last: Vec<u32> = (1..=spec.n())
                    .map(|a| s.base().coord(a) + u32::from(a <= k))
                    .collect();
                assert_eq!(v[k], GridPoint::new(last));
                let mut shuffled = v.clone();
                shuffled.reverse();
                assert_eq!(StringK::from_vertices(&spec, &shuffled).unwrap(), s);
            }
        }
    }
}

#[test]
fn pivot_is_an_involution_preserving_the_face() {
    for spec in small_grids() {
        for k in 1..=spec.n() {
            for s in spec.strings(k) {
                for h in 0..=k {
                    let face = s.face(h).unwrap();
                    match face.pivot(&spec) {
                        Ok(other) => {
                            let t = other.parent();
                            assert_ne!(t, &s);
                            let mut a = face.vertices();
                            let mut b = other.vertices();
                            a.sort();
                            b.sort();
                            assert_eq!(a, b);
                            let new_vertex = &t.vertices()[other.omitted()];
                            assert_ne!(new_vertex, &s.vertices()[h]);
                            let back = other.pivot(&spec).unwrap();
                            assert_eq!(back.parent(), &s);
                            assert_eq!(back.omitted(), h);
                            // the new string is itself valid
                            StringK::new(&spec, t.base().clone(), t.perm().to_vec()).unwrap();
                        }
                        Err(GridError::BoundaryFace { .. }) => {
                            // only one k-string contains a boundary face
                            let holders = common::containing_strings(&spec, k, &face.vertices());
                            assert_eq!(holders, vec![s.clone()]);
                        }
                        Err(e) => panic!("unexpected {e}"),
                    }
                }
            }
        }
    }
}

#[test]
fn every_face_lies_in_at_most_two_strings() {
    for spec in small_grids() {
        for k in 1..=spec.n() {
            for s in spec.strings(k) {
                for h in 0..=k {
                    let face = s.face(h).unwrap();
                    let holders = common::containing_strings(&spec, k, &face.vertices());
                    let expected = if face.pivot(&spec).is_ok() { 2 } else { 1 };
                    assert_eq!(holders.len(), expected, "{s} minus x_{h}");
                }
            }
        }
    }
}

#[test]
fn lift_is_the_unique_extension() {
    for spec in small_grids() {
        for k in 1..=spec.n() {
            for c in spec.strings(k - 1) {
                let lifted = c.lift(&spec).unwrap();
                let holders = common::containing_strings(&spec, k, &c.vertices());
                assert_eq!(holders, vec![lifted.clone()]);
                assert_eq!(lifted.face(k).unwrap().as_string(), Some(c));
            }
        }
    }
}

#[test]
fn lower_level_faces_are_strings() {
    for spec in small_grids() {
        for k in 1..=spec.n() {
            for s in spec.strings(k) {
                for h in 0..=k {
                    let face = s.face(h).unwrap();
                    let in_lower = face.vertices().iter().all(|v| v.in_level(k - 1));
                    assert_eq!(face.in_lower_level(), in_lower);
                    if in_lower {
                        let c = face.as_string().unwrap();
                        assert_eq!(c.vertices(), face.vertices());
                        assert_eq!(face.pivot(&spec), Err(GridError::BoundaryFace { h }));
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn from_vertices_rejects_non_chains(
        pts in prop::collection::vec(prop::collection::vec(0u32..=3, 2), 1..4)
    ) {
        let spec = GridSpec::new(2, 3).unwrap();
        let pts: Vec<GridPoint> = pts.into_iter().map(GridPoint::new).collect();
        let listed: HashSet<Vec<GridPoint>> = (0..=2)
            .flat_map(|k| spec.strings(k).map(|s| { let mut v = s.vertices(); v.sort(); v }))
            .collect();
        let mut key = pts.clone();
        key.sort();
        key.dedup();
        let is_string = key.len() == pts.len() && listed.contains(&key);
        prop_assert_eq!(StringK::from_vertices(&spec, &pts).is_ok(), is_string);
    }

    #[test]
    fn pivot_involution_on_large_grids(
        n in 1usize..=5,
        m in 2u32..=50,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, seq::SliceRandom};
        let spec = GridSpec::new(n, m).unwrap();
        let mut rng = common::rng(seed);
        let k = rng.gen_range(1..=n);
        let mut coords: Vec<u32> = (0..k).map(|_| rng.gen_range(0..m)).collect();
        coords.resize(n, 0);
        let mut perm: Vec<usize> = (1..=k).collect();
        perm.shuffle(&mut rng);
        let s = StringK::new(&spec, GridPoint::new(coords), perm).unwrap();
        for h in 0..=k {
            if let Ok(other) = s.face(h).unwrap().pivot(&spec) {
                let back = other.pivot(&spec).unwrap();
                prop_assert_eq!(back.parent(), &s);
            }
        }
    }
}
