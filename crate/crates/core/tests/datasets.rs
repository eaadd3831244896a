use cloudlab::datasets::{checksums, dataset, load, names};
use cloudlab::states::{
    classify_pair, enumerate_states, ks_check, state_properties, Kind, Relation,
};

#[test]
fn shipped_files_match_their_checksums() {
    for (name, stored, actual) in checksums().unwrap() {
        assert_eq!(stored.as_deref(), Some(actual.as_str()), "{name}");
    }
}

#[test]
fn shipped_files_match_their_expectations() {
    for name in names().into_iter().filter(|n| *n != "single") {
        let d = dataset(name, &[]).unwrap();
        let (c, e) = (&d.cloud, &d.expected);
        let states = enumerate_states(c).unwrap();
        let props = state_properties(c, &states).unwrap();
        for key in e.keys() {
            assert!(e.origin(key).is_some(), "{name}.{key} has no origin");
            match key {
                "vertices" => assert_eq!(e.int(key), Some(c.vertex_count() as i64), "{name}"),
                "contexts" => assert_eq!(e.int(key), Some(c.context_count() as i64), "{name}"),
                "states" => assert_eq!(e.int(key), Some(states.len() as i64), "{name}"),
                "separating" => assert_eq!(e.bool(key), Some(props.separating), "{name}"),
                "kochen_specker" => {
                    assert_eq!(e.bool(key), Some(ks_check(c).kochen_specker), "{name}")
                }
                "forced_zero" => {
                    let got: Vec<&str> = props
                        .forced_zero
                        .iter()
                        .map(|&i| c.vertex(i).as_str())
                        .collect();
                    assert_eq!(e.strings(key), Some(got), "{name}");
                }
                "states_with_a_true" => {
                    let (a, _) = c.terminals().unwrap();
                    let n = states.iter().filter(|s| s.is_one(a)).count();
                    assert_eq!(e.int(key), Some(n as i64), "{name}");
                }
                "relation_ii" | "relation_iii" => {
                    let kind = if key == "relation_ii" {
                        Kind::II
                    } else {
                        Kind::III
                    };
                    let (a, b) = c.terminal_names().unwrap();
                    let r = classify_pair(c, a.as_str(), b.as_str(), kind).unwrap();
                    let want: Relation = e.str(key).unwrap().parse().unwrap();
                    assert_eq!(r, want, "{name}.{key}");
                }
                // Checked by the acceptance suite.
                "stated_vertices" | "tifs_pairs_stated" => {}
                other => panic!("{name}: unhandled key {other}"),
            }
        }
    }
}

#[test]
fn single_context_has_one_state_per_vertex() {
    for d in 2..=6 {
        let ds = load(&format!("single({d})")).unwrap();
        assert_eq!(enumerate_states(&ds.cloud).unwrap().len(), d);
    }
}
