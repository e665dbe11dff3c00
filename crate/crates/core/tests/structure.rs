use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use bept::io::read_model;
use bept::petri::{tar_set, DEFAULT_STATE_BOUND};
use bept::rpst::{decompose, expand_tars, simplify, Component, ComponentKind};

fn corpus() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "pnet"))
        .collect();
    files.sort();
    files
}

fn check(c: &Component, name: &str) {
    if c.kind == ComponentKind::Trivial {
        assert_eq!(c.arcs.len(), 1, "{name}");
        return;
    }
    let mut union: Vec<(String, String)> = c.children.iter().flat_map(|x| x.arcs.clone()).collect();
    union.sort();
    assert_eq!(union, c.arcs, "{name}: children partition the arcs of {:?}", c.kind);
    for child in &c.children {
        assert_eq!(child.depth, c.depth + 1, "{name}");
        check(child, name);
    }
}

#[test]
fn every_corpus_net_decomposes() {
    for file in corpus() {
        let name = file.file_stem().unwrap().to_string_lossy().to_string();
        let system = read_model(&file).unwrap().system;
        let tree = decompose(&system).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(tree.root.depth, 0);
        assert_eq!(tree.root.leaves(), system.net.arcs().len(), "{name}");
        check(&tree.root, &name);
        let transitions: BTreeSet<&String> = system.net.transitions().iter().collect();
        assert_eq!(tree.depth_of.keys().collect::<BTreeSet<_>>(), transitions, "{name}");
    }
}

#[test]
fn simplification_preserves_behavior() {
    for file in corpus() {
        let name = file.file_stem().unwrap().to_string_lossy().to_string();
        let system = read_model(&file).unwrap().system;
        let tree = decompose(&system).unwrap();
        let (simple, subs) = simplify(&system, &tree).unwrap();
        if subs.is_empty() {
            assert_eq!(simple, system, "{name}");
            continue;
        }
        let inner: BTreeMap<_, _> = subs
            .iter()
            .map(|(k, s)| (k.clone(), tar_set(&s.system, DEFAULT_STATE_BOUND).unwrap()))
            .collect();
        let got = expand_tars(&tar_set(&simple, DEFAULT_STATE_BOUND).unwrap(), &subs, &inner);
        assert_eq!(got, tar_set(&system, DEFAULT_STATE_BOUND).unwrap(), "{name}");
    }
}

#[test]
fn structured_corpus_nets_have_no_rigids() {
    for stem in ["n1", "sequence", "xor_bond", "xor_three", "and_bond", "simple_loop", "nested_loop"] {
        let file = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("corpus/{stem}.pnet"));
        let tree = decompose(&read_model(&file).unwrap().system).unwrap();
        assert!(tree.is_structured(), "{stem}");
    }
}
