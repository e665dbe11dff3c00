//! Graphviz output.

use std::fmt::Write as _;

use crate::paths::BehaviorPath;
use crate::petri::{NetSystem, NodeKind};
use crate::unfold::Cfp;

pub(crate) fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Places are circles, transitions boxes; marked places carry their token count.
pub fn net_to_dot(system: &NetSystem) -> String {
    let net = &system.net;
    let mut out = String::from("digraph net {\n  rankdir=LR;\n");
    for p in net.places() {
        let tokens = system.initial.tokens(p);
        let mut attrs = format!("shape=circle, label={}", dot_id(p));
        if tokens > 0 {
            attrs = format!("shape=circle, label={}", dot_id(&format!("{p}\n{tokens}")));
        }
        if system.finals.contains(p) {
            attrs.push_str(", peripheries=2");
        }
        let _ = writeln!(out, "  {} [{attrs}];", dot_id(p));
    }
    for t in net.transitions() {
        let label = match net.label(t) {
            Some(l) => format!("{t}\n{l}"),
            None => t.clone(),
        };
        let _ = writeln!(out, "  {} [shape=box, label={}];", dot_id(t), dot_id(&label));
    }
    for (a, b) in net.arcs() {
        let _ = writeln!(out, "  {} -> {};", dot_id(a), dot_id(b));
    }
    out.push_str("}\n");
    out
}

/// Occurrence nets: cut-off events are dashed, shadow conditions filled.
pub fn cfp_to_dot(cfp: &Cfp) -> String {
    let mut out = String::from("digraph cfp {\n  rankdir=LR;\n");
    for n in cfp.nodes() {
        let label = dot_id(&format!("{}\n{}", n.id, n.origin));
        let attrs = match n.kind {
            NodeKind::Place => {
                let idx = cfp.condition(&n.id).expect("listed condition");
                if cfp.shadows.contains(&idx) {
                    format!("shape=circle, label={label}, style=filled, fillcolor=gray, shadow=true")
                } else {
                    format!("shape=circle, label={label}")
                }
            }
            NodeKind::Transition => {
                let idx = cfp.event(&n.id).expect("listed event");
                if cfp.events[idx].cutoff {
                    format!("shape=box, label={label}, style=dashed")
                } else {
                    format!("shape=box, label={label}")
                }
            }
        };
        let _ = writeln!(out, "  {} [{attrs}];", dot_id(&n.id));
    }
    for (a, b) in cfp.arcs() {
        let _ = writeln!(out, "  {} -> {};", dot_id(&a), dot_id(&b));
    }
    out.push_str("}\n");
    out
}

/// One box per step of the path, edges follow the causal order.
pub fn path_to_dot(cfp: &Cfp, path: &BehaviorPath) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n", dot_id(&path.id));
    for (i, step) in path.chain.steps.iter().enumerate() {
        let label = &cfp.events[step.event].origin;
        let _ = writeln!(out, "  s{i} [shape=box, label={}];", dot_id(label));
    }
    for (i, step) in path.chain.steps.iter().enumerate() {
        for a in &step.after {
            let _ = writeln!(out, "  s{a} -> s{i};");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_dsl;
    use crate::paths::{enumerate_paths, extract_segments, DEFAULT_CHAIN_BOUND};
    use crate::unfold::{unfold, DEFAULT_EVENT_BOUND};

    fn count(dot: &str) -> (usize, usize) {
        let edges = dot.lines().filter(|l| l.contains("->")).count();
        let nodes = dot.lines().filter(|l| l.contains('[') && !l.contains("->")).count();
        (nodes, edges)
    }

    #[test]
    fn n1_net() {
        let system = parse_dsl(include_str!("../../corpus/n1.pnet")).unwrap().system;
        assert_eq!(count(&net_to_dot(&system)), (8, 8));
    }

    #[test]
    fn empty_net_has_only_frame() {
        let system = parse_dsl("").unwrap().system;
        assert_eq!(net_to_dot(&system), "digraph net {\n  rankdir=LR;\n}\n");
    }

    #[test]
    fn prefix_marks_shadows_and_cutoffs() {
        let system = parse_dsl(include_str!("../../corpus/nstar.pnet")).unwrap().system;
        let cfp = unfold(&system, DEFAULT_EVENT_BOUND).unwrap();
        let dot = cfp_to_dot(&cfp);
        assert_eq!(dot.matches("shadow=true").count(), cfp.shadows.len());
        assert_eq!(dot.matches("style=dashed").count(), cfp.cutoffs().len());
        assert_eq!(count(&dot).1, cfp.arcs().len());
    }

    #[test]
    fn path_edges_follow_steps() {
        let system = parse_dsl(include_str!("../../corpus/n1.pnet")).unwrap().system;
        let cfp = unfold(&system, DEFAULT_EVENT_BOUND).unwrap();
        let segs = extract_segments(&cfp, &system).unwrap();
        let set = enumerate_paths(&cfp, &system, &segs, DEFAULT_CHAIN_BOUND);
        let dot = path_to_dot(&cfp, &set.paths[0]);
        assert_eq!(count(&dot), (3, 2));
    }
}
