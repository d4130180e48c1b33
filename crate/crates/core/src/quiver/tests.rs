use super::*;
use crate::fixtures::{
    arb_quiver, arb_quiver_with_subset, line3, single_loop, two_cycle, vset, wheel_mn,
};
use proptest::prelude::*;

#[test]
fn rejects_duplicate_ids_and_dangling_edges() {
    assert!(matches!(
        Quiver::new(["a", "a"], Vec::<(&str, &str, &str)>::new()),
        Err(QuiverError::DuplicateVertex(_))
    ));
    assert!(matches!(
        Quiver::new(["a", "b"], [("e", "a", "b"), ("e", "b", "a")]),
        Err(QuiverError::DuplicateEdge(_))
    ));
    assert!(matches!(
        Quiver::new(["a"], [("e", "a", "zzz")]),
        Err(QuiverError::DanglingEdge { .. })
    ));
}

#[test]
fn classify_line_loop_and_two_cycle() {
    let classes = line3().classify_vertices();
    assert_eq!(classes[&VertexId::from("1")], VertexClass::Source);
    assert_eq!(classes[&VertexId::from("2")], VertexClass::Regular);
    assert_eq!(classes[&VertexId::from("3")], VertexClass::Sink);

    let classes = single_loop().classify_vertices();
    assert_eq!(classes[&VertexId::from("v")], VertexClass::Regular);

    let classes = two_cycle().classify_vertices();
    assert!(classes.values().all(|c| *c == VertexClass::Regular));

    let isolated = Quiver::new(["v"], Vec::<(&str, &str, &str)>::new()).unwrap();
    assert_eq!(
        isolated.classify_vertices()[&VertexId::from("v")],
        VertexClass::BothSourceAndSink
    );
}

#[test]
fn reaches_along_and_against_the_line() {
    let q = line3();
    assert!(q.reaches_set(&"1".into(), &vset(&["3"])).unwrap());
    assert!(!q.reaches_set(&"3".into(), &vset(&["1"])).unwrap());
    assert!(q.reaches_set(&"3".into(), &vset(&["3"])).unwrap());
    assert!(matches!(
        q.reaches_set(&"zzz".into(), &vset(&["3"])),
        Err(QuiverError::UnknownVertex(_))
    ));
}

#[test]
fn every_dropped_vertex_of_the_wheel_reaches_the_hub() {
    let q = wheel_mn(2, 3);
    let hub = vset(&["A"]);
    for v in q.vertices() {
        assert!(q.reaches_set(v, &hub).unwrap(), "{v} should reach A");
    }
}

#[test]
fn tree_examples() {
    let q = line3();
    assert_eq!(q.tree(&"3".into()).unwrap(), vset(&["3"]));
    assert_eq!(q.tree(&"1".into()).unwrap(), vset(&["1", "2", "3"]));
    assert_eq!(two_cycle().tree(&"1".into()).unwrap(), vset(&["1", "2"]));
}

#[test]
fn closure_of_empty_set_is_empty() {
    for q in [line3(), two_cycle(), single_loop(), wheel_mn(2, 3)] {
        assert!(q
            .hereditary_saturated_closure(&BTreeSet::new())
            .unwrap()
            .is_empty());
    }
}

#[test]
fn closure_saturates_up_the_line() {
    let trace = line3().closure_trace(&vset(&["3"])).unwrap();
    assert_eq!(trace.closure, vset(&["1", "2", "3"]));
    assert_eq!(
        trace.levels,
        vec![vset(&["3"]), vset(&["2", "3"]), vset(&["1", "2", "3"])]
    );
}

#[test]
fn closure_of_hub_covers_the_wheel() {
    let q = wheel_mn(2, 3);
    let closure = q.hereditary_saturated_closure(&vset(&["A"])).unwrap();
    assert_eq!(closure, q.vertices().iter().cloned().collect());
}

#[test]
fn bridge_paths_on_the_line() {
    let q = line3();
    let b = q.bridge_paths(&vset(&["2", "3"])).unwrap();
    assert_eq!(b[&"1".into()], vec![Path::single("a")]);
    assert_eq!(b[&"2".into()], vec![Path::single("b")]);
    assert!(b[&"3".into()].is_empty());
}

#[test]
fn bridge_paths_on_the_two_cycle() {
    let b = two_cycle().bridge_paths(&vset(&["1"])).unwrap();
    assert_eq!(
        b[&"1".into()],
        vec![Path::from_edges(vec!["a".into(), "b".into()])]
    );
    assert_eq!(b[&"2".into()], vec![Path::single("b")]);
}

#[test]
fn bridge_paths_guard_reports_the_avoiding_cycle() {
    let err = single_loop().bridge_paths(&BTreeSet::new()).unwrap_err();
    assert!(matches!(err, QuiverError::CycleAvoidsKeep(_)));
}

#[test]
fn cycles_meet_examples() {
    assert!(two_cycle().cycles_meet(&vset(&["1"])).unwrap());
    assert!(!single_loop().cycles_meet(&BTreeSet::new()).unwrap());
    assert!(wheel_mn(2, 3).cycles_meet(&vset(&["A"])).unwrap());
}

#[test]
fn incidence_examples() {
    assert_eq!(
        single_loop().incidence(),
        IntMatrix::from_rows(vec![vec![1]]).unwrap()
    );
    // Two parallel edges a -> b plus a loop at b.
    let q2 = Quiver::new(
        ["a", "b"],
        [("e0", "a", "b"), ("e1", "a", "b"), ("l", "b", "b")],
    )
    .unwrap();
    assert_eq!(
        q2.incidence(),
        IntMatrix::from_rows(vec![vec![0, 2], vec![0, 1]]).unwrap()
    );
}

#[test]
fn from_incidence_matches_edge_counts() {
    let m = IntMatrix::from_rows(vec![vec![0, 1], vec![0, 1]]).unwrap();
    let q = Quiver::from_incidence(&m).unwrap();
    let q1 = Quiver::new(["u", "w"], [("e", "u", "w"), ("l", "w", "w")]).unwrap();
    assert!(is_isomorphic(&q, &q1).is_isomorphic());
    assert!(matches!(
        Quiver::from_incidence(&IntMatrix::from_rows(vec![vec![0, 1]]).unwrap()),
        Err(QuiverError::NonSquareMatrix { .. })
    ));
}

#[test]
fn isomorphism_identity_and_rename() {
    let q = line3();
    let w = match is_isomorphic(&q, &q) {
        IsoOutcome::Isomorphic(w) => w,
        other => panic!("expected isomorphism, got {other:?}"),
    };
    for (a, b) in &w.vertex_map {
        assert_eq!(a, b);
    }
    let renamed = Quiver::new(["x", "y", "z"], [("p", "x", "y"), ("q", "y", "z")]).unwrap();
    assert!(is_isomorphic(&q, &renamed).is_isomorphic());
    let reversed = Quiver::new(["1", "2"], [("a", "2", "1")]).unwrap();
    let forward = Quiver::new(["1", "2"], [("a", "1", "2")]).unwrap();
    assert!(is_isomorphic(&forward, &reversed).is_isomorphic());
}

#[test]
fn isomorphism_negative_and_undecided() {
    assert_eq!(
        is_isomorphic(&line3(), &two_cycle()),
        IsoOutcome::NotIsomorphic
    );
    let big: Vec<String> = (0..11).map(|i| format!("v{i:02}")).collect();
    let q = Quiver::new(big.clone(), Vec::<(&str, String, String)>::new()).unwrap();
    assert_eq!(
        is_isomorphic(&q, &q),
        IsoOutcome::Undecided {
            bound: ISO_VERTEX_BOUND
        }
    );
}

#[test]
fn json_round_trip_is_canonical() {
    let q = Quiver::new(["b", "a"], [("z", "a", "b"), ("y", "b", "a")]).unwrap();
    let s = q.to_json();
    assert_eq!(
        s,
        r#"{"vertices":["a","b"],"edges":[{"id":"y","src":"b","dst":"a"},{"id":"z","src":"a","dst":"b"}]}"#
    );
    let back = Quiver::from_json(&s).unwrap();
    assert_eq!(back, q);
    assert_eq!(back.content_hash(), q.content_hash());
}

#[test]
fn dot_export_is_deterministic() {
    let q = line3();
    let dot = q.to_dot();
    assert_eq!(
        dot,
        "digraph quiver {\n    \"1\";\n    \"2\";\n    \"3\";\n    \"1\" -> \"2\" [label=\"a\"];\n    \"2\" -> \"3\" [label=\"b\"];\n}\n"
    );
}

#[test]
fn paths_of_length_counts() {
    let q = two_cycle();
    assert_eq!(q.paths_of_length(0).len(), 2);
    assert_eq!(q.paths_of_length(1).len(), 2);
    assert_eq!(q.paths_of_length(2).len(), 2);
    assert_eq!(q.paths_of_length(3).len(), 2);
}

#[test]
fn path_prefix_and_concat() {
    let q = line3();
    let a = Path::single("a");
    let ab = Path::from_edges(vec!["a".into(), "b".into()]);
    assert_eq!(
        a.strip_prefix(&ab, &q).unwrap(),
        Some(Path::single("b"))
    );
    assert_eq!(
        a.strip_prefix(&a, &q).unwrap(),
        Some(Path::trivial("2"))
    );
    let b = Path::single("b");
    assert_eq!(b.strip_prefix(&ab, &q).unwrap(), None);
    assert_eq!(a.concat(&b, &q).unwrap(), ab);
    assert!(b.concat(&a, &q).is_err());
    assert_eq!(Path::trivial("1").concat(&a, &q).unwrap(), a);
}

/// Independent acyclicity oracle: Kahn peeling on the induced subquiver.
fn kahn_acyclic(q: &Quiver, keep: &BTreeSet<VertexId>) -> bool {
    let mut verts: BTreeSet<&VertexId> =
        q.vertices().iter().filter(|v| !keep.contains(*v)).collect();
    loop {
        let removable: Vec<&VertexId> = verts
            .iter()
            .filter(|v| {
                q.out_edges(v)
                    .all(|e| keep.contains(&e.dst) || !verts.contains(&e.dst))
            })
            .cloned()
            .collect();
        if removable.is_empty() {
            return verts.is_empty();
        }
        for v in removable {
            verts.remove(v);
        }
    }
}

/// Independent bridge-path counting oracle: memoised recursion
/// `|B_v| = sum over out-edges e of (1 if r(e) in keep else |B_{r(e)}|)`.
fn bridge_count_oracle(
    q: &Quiver,
    keep: &BTreeSet<VertexId>,
    v: &VertexId,
    memo: &mut BTreeMap<VertexId, usize>,
) -> usize {
    if let Some(&c) = memo.get(v) {
        return c;
    }
    let mut total = 0;
    for e in q.out_edges(v) {
        if keep.contains(&e.dst) {
            total += 1;
        } else {
            total += bridge_count_oracle(q, keep, &e.dst, memo);
        }
    }
    memo.insert(v.clone(), total);
    total
}

proptest! {
    #[test]
    fn closure_is_a_hereditary_saturated_fixpoint((q, x) in arb_quiver_with_subset(8, 12)) {
        let closure = q.hereditary_saturated_closure(&x).unwrap();
        prop_assert!(x.iter().all(|v| closure.contains(v)));
        prop_assert!(q.is_hereditary(&closure));
        prop_assert!(q.is_saturated(&closure));
        prop_assert_eq!(q.hereditary_saturated_closure(&closure).unwrap(), closure);
    }

    #[test]
    fn incidence_round_trips_up_to_isomorphism(q in arb_quiver(8, 12)) {
        let back = Quiver::from_incidence(&q.incidence()).unwrap();
        prop_assert!(is_isomorphic(&q, &back).is_isomorphic());
    }

    #[test]
    fn cycles_meet_agrees_with_kahn_oracle((q, keep) in arb_quiver_with_subset(8, 12)) {
        prop_assert_eq!(q.cycles_meet(&keep).unwrap(), kahn_acyclic(&q, &keep));
    }

    #[test]
    fn bridge_paths_match_counting_oracle((q, keep) in arb_quiver_with_subset(6, 10)) {
        prop_assume!(q.cycles_meet(&keep).unwrap());
        let bridges = q.bridge_paths(&keep).unwrap();
        let mut memo = BTreeMap::new();
        for v in q.vertices() {
            let expected = bridge_count_oracle(&q, &keep, v, &mut memo);
            prop_assert_eq!(bridges[v].len(), expected);
            for p in &bridges[v] {
                prop_assert!(p.validate(&q).is_ok());
                prop_assert_eq!(p.source(&q).unwrap(), v.clone());
                prop_assert!(keep.contains(&p.range(&q).unwrap()));
                for interior in p.interior_ranges(&q).unwrap() {
                    prop_assert!(!keep.contains(&interior));
                }
            }
        }
    }

    #[test]
    fn iso_witnesses_verify((q, _) in arb_quiver_with_subset(6, 8)) {
        if let IsoOutcome::Isomorphic(w) = is_isomorphic(&q, &q) {
            prop_assert!(w.verify(&q, &q));
        } else {
            prop_assert!(false, "quiver not isomorphic to itself");
        }
    }
}
