//! Place/transition nets, the token game, and exhaustive behavioral oracles.
//!
//! Everything downstream (unfolding, behavior paths, text) is checked against
//! the functions in this module, so they deliberately work on the plain
//! reachability graph and nothing cleverer.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on distinct markings visited by the oracles.
pub const DEFAULT_STATE_BOUND: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Place,
    Transition,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PetriNet {
    places: BTreeSet<String>,
    transitions: BTreeSet<String>,
    arcs: BTreeSet<(String, String)>,
    labels: BTreeMap<String, String>,
}

impl PetriNet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_place(&mut self, id: impl Into<String>) -> Result<()> {
        let id = id.into();
        if self.contains(&id) {
            return Err(Error::DuplicateNode(id));
        }
        self.places.insert(id);
        Ok(())
    }

    /// Adds a transition. `None` (or an all-whitespace label) makes it silent.
    pub fn add_transition(&mut self, id: impl Into<String>, label: Option<&str>) -> Result<()> {
        let id = id.into();
        if self.contains(&id) {
            return Err(Error::DuplicateNode(id));
        }
        if let Some(label) = label.map(str::trim).filter(|l| !l.is_empty()) {
            self.labels.insert(id.clone(), label.to_string());
        }
        self.transitions.insert(id);
        Ok(())
    }

    pub fn add_arc(&mut self, from: &str, to: &str) -> Result<()> {
        let kinds = (self.kind(from), self.kind(to));
        match kinds {
            (None, _) => Err(Error::UnknownNode(from.to_string())),
            (_, None) => Err(Error::UnknownNode(to.to_string())),
            (Some(a), Some(b)) if a == b => Err(Error::NotBipartite {
                from: from.to_string(),
                to: to.to_string(),
            }),
            _ => {
                self.arcs.insert((from.to_string(), to.to_string()));
                Ok(())
            }
        }
    }

    pub fn set_label(&mut self, transition: &str, label: Option<&str>) -> Result<()> {
        if !self.transitions.contains(transition) {
            return Err(Error::UnknownTransition(transition.to_string()));
        }
        match label.map(str::trim).filter(|l| !l.is_empty()) {
            Some(l) => self.labels.insert(transition.to_string(), l.to_string()),
            None => self.labels.remove(transition),
        };
        Ok(())
    }

    /// Removes a node together with its arcs.
    pub fn remove_node(&mut self, id: &str) {
        self.places.remove(id);
        self.transitions.remove(id);
        self.labels.remove(id);
        self.arcs.retain(|(a, b)| a != id && b != id);
    }

    pub fn places(&self) -> &BTreeSet<String> {
        &self.places
    }

    pub fn transitions(&self) -> &BTreeSet<String> {
        &self.transitions
    }

    pub fn arcs(&self) -> &BTreeSet<(String, String)> {
        &self.arcs
    }

    pub fn labels(&self) -> &BTreeMap<String, String> {
        &self.labels
    }

    pub fn label(&self, transition: &str) -> Option<&str> {
        self.labels.get(transition).map(String::as_str)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.places.contains(id) || self.transitions.contains(id)
    }

    pub fn kind(&self, id: &str) -> Option<NodeKind> {
        if self.places.contains(id) {
            Some(NodeKind::Place)
        } else if self.transitions.contains(id) {
            Some(NodeKind::Transition)
        } else {
            None
        }
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty() && self.transitions.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.places.len() + self.transitions.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &String> {
        self.places.iter().chain(self.transitions.iter())
    }

    /// `•n`
    pub fn preset(&self, id: &str) -> BTreeSet<&str> {
        self.arcs
            .iter()
            .filter(|(_, b)| b == id)
            .map(|(a, _)| a.as_str())
            .collect()
    }

    /// `n•`
    pub fn postset(&self, id: &str) -> BTreeSet<&str> {
        self.arcs
            .iter()
            .filter(|(a, _)| a == id)
            .map(|(_, b)| b.as_str())
            .collect()
    }

    /// Nodes without inputs and nodes without outputs.
    pub fn boundary_nodes(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut has_in = BTreeSet::new();
        let mut has_out = BTreeSet::new();
        for (a, b) in &self.arcs {
            has_out.insert(a.as_str());
            has_in.insert(b.as_str());
        }
        let sources = self
            .nodes()
            .filter(|n| !has_in.contains(n.as_str()))
            .cloned()
            .collect();
        let sinks = self
            .nodes()
            .filter(|n| !has_out.contains(n.as_str()))
            .cloned()
            .collect();
        (sources, sinks)
    }
}

/// A bag of tokens over places. Zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Marking(BTreeMap<String, u32>);

impl Marking {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_places<I, S>(places: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut m = Marking::new();
        for p in places {
            m.add(&p.into(), 1);
        }
        m
    }

    pub fn tokens(&self, place: &str) -> u32 {
        self.0.get(place).copied().unwrap_or(0)
    }

    pub fn set(&mut self, place: &str, count: u32) {
        if count == 0 {
            self.0.remove(place);
        } else {
            self.0.insert(place.to_string(), count);
        }
    }

    pub fn add(&mut self, place: &str, count: u32) {
        let c = self.tokens(place) + count;
        self.set(place, c);
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn places(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if c == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}:{c}")?;
            }
        }
        f.write_str("}")
    }
}

/// A net with its initial marking. `finals` lists places where the process
/// may legitimately come to rest even though they have outgoing arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetSystem {
    pub net: PetriNet,
    pub initial: Marking,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub finals: BTreeSet<String>,
}

impl NetSystem {
    pub fn new(net: PetriNet, initial: Marking) -> Result<Self> {
        for p in initial.places() {
            if !net.places().contains(p) {
                return Err(Error::UnknownPlace(p.to_string()));
            }
        }
        Ok(Self {
            net,
            initial,
            finals: BTreeSet::new(),
        })
    }

    pub fn with_finals<I, S>(mut self, finals: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for f in finals {
            let f = f.into();
            if !self.net.places().contains(&f) {
                return Err(Error::UnknownPlace(f));
            }
            self.finals.insert(f);
        }
        Ok(self)
    }

    /// Source and sink places plus declared final places.
    pub fn boundary_places(&self) -> BTreeSet<String> {
        let (sources, sinks) = self.net.boundary_nodes();
        sources
            .into_iter()
            .chain(sinks)
            .filter(|n| self.net.places().contains(n))
            .chain(self.finals.iter().cloned())
            .collect()
    }

    /// Places on which a run may end.
    pub fn terminal_places(&self) -> BTreeSet<String> {
        let (_, sinks) = self.net.boundary_nodes();
        sinks
            .into_iter()
            .filter(|n| self.net.places().contains(n))
            .chain(self.finals.iter().cloned())
            .collect()
    }

    pub fn is_terminal(&self, marking: &Marking) -> bool {
        let terminal = self.terminal_places();
        marking.places().all(|p| terminal.contains(p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tar {
    pub first: String,
    pub second: String,
}

impl Tar {
    pub fn new(first: impl Into<String>, second: impl Into<String>) -> Self {
        Self {
            first: first.into(),
            second: second.into(),
        }
    }
}

impl fmt::Display for Tar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<{}", self.first, self.second)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace(pub Vec<String>);

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

/// Fires `t` under `marking`: `M \ •t ∪ t•`.
pub fn fire_from(net: &PetriNet, marking: &Marking, t: &str) -> Result<Marking> {
    if !net.transitions().contains(t) {
        return Err(Error::UnknownTransition(t.to_string()));
    }
    let pre = net.preset(t);
    if pre.iter().any(|p| marking.tokens(p) == 0) {
        return Err(Error::NotEnabled(t.to_string()));
    }
    let mut next = marking.clone();
    for p in pre {
        next.set(p, marking.tokens(p) - 1);
    }
    for p in net.postset(t) {
        next.add(p, 1);
    }
    Ok(next)
}

/// Fires `t` from the system's initial marking.
pub fn fire(system: &NetSystem, t: &str) -> Result<Marking> {
    fire_from(&system.net, &system.initial, t)
}

/// Replays a firing sequence from the initial marking.
pub fn replay<S: AsRef<str>>(system: &NetSystem, sequence: &[S]) -> Result<Marking> {
    sequence
        .iter()
        .try_fold(system.initial.clone(), |m, t| fire_from(&system.net, &m, t.as_ref()))
}

/// Index-based view of a net for the explorers.
pub(crate) struct Compiled {
    pub places: Vec<String>,
    pub transitions: Vec<String>,
    pub pre: Vec<Vec<usize>>,
    pub post: Vec<Vec<usize>>,
}

impl Compiled {
    pub fn new(net: &PetriNet) -> Self {
        let places: Vec<String> = net.places().iter().cloned().collect();
        let transitions: Vec<String> = net.transitions().iter().cloned().collect();
        let pidx: HashMap<&str, usize> = places
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), i))
            .collect();
        let tidx: HashMap<&str, usize> = transitions
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i))
            .collect();
        let mut pre = vec![Vec::new(); transitions.len()];
        let mut post = vec![Vec::new(); transitions.len()];
        for (a, b) in net.arcs() {
            if let Some(&t) = tidx.get(b.as_str()) {
                pre[t].push(pidx[a.as_str()]);
            } else {
                post[tidx[a.as_str()]].push(pidx[b.as_str()]);
            }
        }
        Self {
            places,
            transitions,
            pre,
            post,
        }
    }

    pub fn vector(&self, marking: &Marking) -> Vec<u32> {
        self.places.iter().map(|p| marking.tokens(p)).collect()
    }

    pub fn marking(&self, v: &[u32]) -> Marking {
        let mut m = Marking::new();
        for (p, &c) in self.places.iter().zip(v) {
            m.set(p, c);
        }
        m
    }

    pub fn enabled(&self, m: &[u32], t: usize) -> bool {
        self.pre[t].iter().all(|&p| m[p] > 0)
    }

    pub fn enabled_set(&self, m: &[u32]) -> Vec<usize> {
        (0..self.transitions.len())
            .filter(|&t| self.enabled(m, t))
            .collect()
    }

    pub fn fire(&self, m: &[u32], t: usize) -> Vec<u32> {
        let mut next = m.to_vec();
        for &p in &self.pre[t] {
            next[p] -= 1;
        }
        for &p in &self.post[t] {
            next[p] += 1;
        }
        next
    }
}

/// Reachability graph explored breadth-first, with parent links for witness
/// reconstruction.
struct Reachability {
    states: Vec<Vec<u32>>,
    parent: Vec<Option<(usize, usize)>>,
    edges: Vec<Vec<(usize, usize)>>,
}

impl Reachability {
    fn explore(c: &Compiled, initial: Vec<u32>, bound: usize) -> Result<Self> {
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut states = vec![initial.clone()];
        let mut parent = vec![None];
        let mut edges = vec![Vec::new()];
        index.insert(initial, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            for t in c.enabled_set(&states[s]) {
                let next = c.fire(&states[s], t);
                let target = match index.get(&next) {
                    Some(&i) => i,
                    None => {
                        if states.len() >= bound {
                            return Err(Error::StateSpaceExceeded(bound));
                        }
                        let i = states.len();
                        index.insert(next.clone(), i);
                        states.push(next);
                        parent.push(Some((s, t)));
                        edges.push(Vec::new());
                        queue.push_back(i);
                        i
                    }
                };
                edges[s].push((t, target));
            }
        }
        Ok(Self {
            states,
            parent,
            edges,
        })
    }

    fn path_to(&self, c: &Compiled, mut s: usize) -> Vec<String> {
        let mut seq = Vec::new();
        while let Some((p, t)) = self.parent[s] {
            seq.push(c.transitions[t].clone());
            s = p;
        }
        seq.reverse();
        seq
    }
}

/// TARs with one witnessing firing sequence each. Each witness ends with the
/// two transitions of its TAR.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TarAnalysis {
    pub witnesses: BTreeMap<Tar, Vec<String>>,
    pub states: usize,
}

impl TarAnalysis {
    pub fn tars(&self) -> BTreeSet<Tar> {
        self.witnesses.keys().cloned().collect()
    }

    /// Re-fires every witness against `system`.
    pub fn verify(&self, system: &NetSystem) -> Result<()> {
        for (tar, w) in &self.witnesses {
            let n = w.len();
            if n < 2 || w[n - 2] != tar.first || w[n - 1] != tar.second {
                return Err(Error::NotEnabled(format!("witness of {tar} is malformed")));
            }
            replay(system, w)?;
        }
        Ok(())
    }
}

pub fn analyze_tars(system: &NetSystem, state_bound: usize) -> Result<TarAnalysis> {
    let c = Compiled::new(&system.net);
    let graph = Reachability::explore(&c, c.vector(&system.initial), state_bound.max(1))?;
    let mut witnesses = BTreeMap::new();
    for (s, out) in graph.edges.iter().enumerate() {
        for &(a, mid) in out {
            for &(b, _) in &graph.edges[mid] {
                let tar = Tar::new(c.transitions[a].clone(), c.transitions[b].clone());
                if witnesses.contains_key(&tar) {
                    continue;
                }
                let mut w = graph.path_to(&c, s);
                w.push(tar.first.clone());
                w.push(tar.second.clone());
                witnesses.insert(tar, w);
            }
        }
    }
    Ok(TarAnalysis {
        witnesses,
        states: graph.states.len(),
    })
}

/// All pairs of transitions that fire contiguously in some reachable run.
pub fn tar_set(system: &NetSystem, state_bound: usize) -> Result<BTreeSet<Tar>> {
    Ok(analyze_tars(system, state_bound)?.tars())
}

/// Every marking reachable from the initial one.
pub fn reachable_markings(system: &NetSystem, state_bound: usize) -> Result<BTreeSet<Marking>> {
    let c = Compiled::new(&system.net);
    let graph = Reachability::explore(&c, c.vector(&system.initial), state_bound.max(1))?;
    Ok(graph.states.iter().map(|m| c.marking(m)).collect())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TraceSet {
    pub traces: BTreeSet<Trace>,
    /// Set when some run was cut at `max_len` or the trace cap was hit.
    pub truncated: bool,
}

/// Firing sequences that carry the initial tokens onto terminal places.
pub fn trace_set(system: &NetSystem, max_len: usize, max_traces: usize) -> TraceSet {
    let c = Compiled::new(&system.net);
    let terminal: Vec<bool> = {
        let t = system.terminal_places();
        c.places.iter().map(|p| t.contains(p)).collect()
    };
    let mut out = TraceSet::default();
    let mut seq = Vec::new();
    let start = c.vector(&system.initial);
    walk_traces(&c, &terminal, &start, &mut seq, max_len.max(1), max_traces.max(1), &mut out);
    out
}

fn walk_traces(
    c: &Compiled,
    terminal: &[bool],
    m: &[u32],
    seq: &mut Vec<usize>,
    max_len: usize,
    max_traces: usize,
    out: &mut TraceSet,
) {
    if !seq.is_empty() && m.iter().zip(terminal).all(|(&n, &t)| n == 0 || t) {
        if out.traces.len() >= max_traces {
            out.truncated = true;
            return;
        }
        out.traces.insert(Trace(
            seq.iter().map(|&t| c.transitions[t].clone()).collect(),
        ));
    }
    let enabled = c.enabled_set(m);
    if enabled.is_empty() {
        return;
    }
    if seq.len() >= max_len {
        out.truncated = true;
        return;
    }
    for t in enabled {
        let next = c.fire(m, t);
        seq.push(t);
        walk_traces(c, terminal, &next, seq, max_len, max_traces, out);
        seq.pop();
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Diagnosis {
    pub dead_transitions: Vec<String>,
    /// Reachable non-terminal markings with nothing enabled.
    pub deadlocks: Vec<Marking>,
    /// Places that can hold more than one token.
    pub unsafe_places: Vec<String>,
    pub states: usize,
}

impl Diagnosis {
    pub fn is_clean(&self) -> bool {
        self.dead_transitions.is_empty() && self.deadlocks.is_empty()
    }
}

pub fn diagnose(system: &NetSystem, state_bound: usize) -> Result<Diagnosis> {
    let c = Compiled::new(&system.net);
    let graph = Reachability::explore(&c, c.vector(&system.initial), state_bound.max(1))?;
    let mut fired = vec![false; c.transitions.len()];
    let mut deadlocks = Vec::new();
    let mut unsafe_places = BTreeSet::new();
    for (s, m) in graph.states.iter().enumerate() {
        for &(t, _) in &graph.edges[s] {
            fired[t] = true;
        }
        for (p, &n) in m.iter().enumerate() {
            if n > 1 {
                unsafe_places.insert(c.places[p].clone());
            }
        }
        if graph.edges[s].is_empty() {
            let marking = c.marking(m);
            if !system.is_terminal(&marking) {
                deadlocks.push(marking);
            }
        }
    }
    deadlocks.sort();
    Ok(Diagnosis {
        dead_transitions: c
            .transitions
            .iter()
            .zip(&fired)
            .filter(|(_, &f)| !f)
            .map(|(t, _)| t.clone())
            .collect(),
        deadlocks,
        unsafe_places: unsafe_places.into_iter().collect(),
        states: graph.states.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn n1() -> NetSystem {
        let mut net = PetriNet::new();
        for p in ["P_a", "P_b", "P_c", "P_d"] {
            net.add_place(p).unwrap();
        }
        net.add_transition("T_a", Some("extract genes")).unwrap();
        net.add_transition("T_b", Some("sequence DNA")).unwrap();
        net.add_transition("T_c", Some("analyze DNA")).unwrap();
        net.add_transition("T_d", Some("record data")).unwrap();
        for (a, b) in [
            ("P_a", "T_a"),
            ("T_a", "P_b"),
            ("P_b", "T_b"),
            ("P_b", "T_c"),
            ("T_b", "P_c"),
            ("T_c", "P_c"),
            ("P_c", "T_d"),
            ("T_d", "P_d"),
        ] {
            net.add_arc(a, b).unwrap();
        }
        NetSystem::new(net, Marking::from_places(["P_a"])).unwrap()
    }

    fn tars(pairs: &[(&str, &str)]) -> BTreeSet<Tar> {
        pairs.iter().map(|(a, b)| Tar::new(*a, *b)).collect()
    }

    #[test]
    fn boundary_of_n1() {
        let (s, t) = n1().net.boundary_nodes();
        assert_eq!(s, BTreeSet::from(["P_a".to_string()]));
        assert_eq!(t, BTreeSet::from(["P_d".to_string()]));
    }

    #[test]
    fn boundary_of_isolated_place_and_cycle() {
        let mut net = PetriNet::new();
        net.add_place("p").unwrap();
        let (s, t) = net.boundary_nodes();
        assert_eq!(s, BTreeSet::from(["p".to_string()]));
        assert_eq!(s, t);

        net.add_transition("t", None).unwrap();
        net.add_arc("p", "t").unwrap();
        net.add_arc("t", "p").unwrap();
        let (s, t) = net.boundary_nodes();
        assert!(s.is_empty() && t.is_empty());
    }

    #[test]
    fn fire_moves_token() {
        let m = fire(&n1(), "T_a").unwrap();
        assert_eq!(m, Marking::from_places(["P_b"]));
    }

    #[test]
    fn fire_errors() {
        let sys = n1();
        assert!(matches!(fire(&sys, "T_d"), Err(Error::NotEnabled(_))));
        assert!(matches!(fire(&sys, "nope"), Err(Error::UnknownTransition(_))));
    }

    #[test]
    fn fire_synchronizes() {
        let mut net = PetriNet::new();
        for p in ["p1", "p2", "p3"] {
            net.add_place(p).unwrap();
        }
        net.add_transition("t", None).unwrap();
        net.add_arc("p1", "t").unwrap();
        net.add_arc("p2", "t").unwrap();
        net.add_arc("t", "p3").unwrap();
        let sys = NetSystem::new(net, Marking::from_places(["p1", "p2"])).unwrap();
        assert_eq!(fire(&sys, "t").unwrap(), Marking::from_places(["p3"]));
    }

    #[test]
    fn arcs_must_be_bipartite() {
        let mut net = PetriNet::new();
        net.add_place("a").unwrap();
        net.add_place("b").unwrap();
        assert!(matches!(net.add_arc("a", "b"), Err(Error::NotBipartite { .. })));
        assert!(matches!(net.add_transition("a", None), Err(Error::DuplicateNode(_))));
    }

    #[test]
    fn n1_tars_and_traces() {
        let sys = n1();
        let analysis = analyze_tars(&sys, 100).unwrap();
        analysis.verify(&sys).unwrap();
        assert_eq!(
            analysis.tars(),
            tars(&[("T_a", "T_b"), ("T_a", "T_c"), ("T_b", "T_d"), ("T_c", "T_d")])
        );
        let traces = trace_set(&sys, 10, 10);
        assert!(!traces.truncated);
        let got: Vec<String> = traces.traces.iter().map(|t| t.to_string()).collect();
        assert_eq!(got, ["T_a T_b T_d", "T_a T_c T_d"]);
    }

    #[test]
    fn single_transition_has_no_tar() {
        let mut net = PetriNet::new();
        net.add_place("p").unwrap();
        net.add_place("q").unwrap();
        net.add_transition("t", None).unwrap();
        net.add_arc("p", "t").unwrap();
        net.add_arc("t", "q").unwrap();
        let sys = NetSystem::new(net, Marking::from_places(["p"])).unwrap();
        assert!(tar_set(&sys, 10).unwrap().is_empty());
    }

    #[test]
    fn empty_net_has_no_traces() {
        let sys = NetSystem::new(PetriNet::new(), Marking::new()).unwrap();
        let ts = trace_set(&sys, 5, 5);
        assert!(ts.traces.is_empty());
        assert!(!ts.truncated);
    }

    #[test]
    fn unbounded_net_exceeds_bound() {
        let mut net = PetriNet::new();
        net.add_place("p").unwrap();
        net.add_place("q").unwrap();
        net.add_transition("t", None).unwrap();
        net.add_arc("p", "t").unwrap();
        net.add_arc("t", "p").unwrap();
        net.add_arc("t", "q").unwrap();
        let sys = NetSystem::new(net, Marking::from_places(["p"])).unwrap();
        assert!(matches!(tar_set(&sys, 50), Err(Error::StateSpaceExceeded(50))));
    }

    #[test]
    fn diagnose_dead_transition() {
        let mut net = PetriNet::new();
        for p in ["p", "q", "o1", "o2"] {
            net.add_place(p).unwrap();
        }
        net.add_transition("t1", None).unwrap();
        net.add_transition("t2", None).unwrap();
        net.add_arc("p", "t1").unwrap();
        net.add_arc("t1", "o1").unwrap();
        net.add_arc("q", "t2").unwrap();
        net.add_arc("t2", "o2").unwrap();
        let sys = NetSystem::new(net, Marking::from_places(["p"])).unwrap();
        let d = diagnose(&sys, 100).unwrap();
        assert_eq!(d.dead_transitions, ["t2"]);
        assert!(d.deadlocks.is_empty());
    }

    #[test]
    fn diagnose_and_join_deadlock() {
        // i -> x -> a ; b never marked ; a,b -> j -> o
        let mut net = PetriNet::new();
        for p in ["i", "a", "b", "o"] {
            net.add_place(p).unwrap();
        }
        net.add_transition("x", None).unwrap();
        net.add_transition("j", None).unwrap();
        for (s, t) in [("i", "x"), ("x", "a"), ("a", "j"), ("b", "j"), ("j", "o")] {
            net.add_arc(s, t).unwrap();
        }
        let sys = NetSystem::new(net, Marking::from_places(["i"])).unwrap();
        let d = diagnose(&sys, 100).unwrap();
        assert_eq!(d.deadlocks, vec![Marking::from_places(["a"])]);
        assert_eq!(d.dead_transitions, ["j"]);
        assert!(diagnose(&n1(), 100).unwrap().is_clean());
    }
}
