//! Behavior segments, linking, behavior paths and TAR pruning.
//!
//! A segment is a connected set of prefix events bounded by shadow places.
//! Segments are glued into chains by identifying exit places of the chain
//! with entry places of the next segment that have the same image (the joint
//! places). A chain becomes a path once it runs from the initial places to
//! terminal places (main) or returns to the image it started from (loop).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::petri::{fire_from, Marking, NetSystem, Tar};
use crate::unfold::Cfp;

/// Default cap on chains explored during path enumeration.
pub const DEFAULT_CHAIN_BOUND: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub id: String,
    /// Event indices into the prefix, ascending (a topological order).
    pub events: Vec<usize>,
    pub entries: Vec<usize>,
    pub exits: Vec<usize>,
    pub interior: Vec<usize>,
    /// TARs among the segment's own transitions.
    pub tars: BTreeSet<Tar>,
}

impl Segment {
    pub fn arcs(&self, cfp: &Cfp) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for &e in &self.events {
            let ev = &cfp.events[e];
            for &b in &ev.preset {
                out.push((cfp.conditions[b].id.clone(), ev.id.clone()));
            }
            for &b in &ev.postset {
                out.push((ev.id.clone(), cfp.conditions[b].id.clone()));
            }
        }
        out
    }

    pub fn transitions<'a>(&self, cfp: &'a Cfp) -> Vec<&'a str> {
        self.events
            .iter()
            .map(|&e| cfp.events[e].origin.as_str())
            .collect()
    }
}

fn image(cfp: &Cfp, conditions: impl IntoIterator<Item = usize>) -> Vec<String> {
    let mut v: Vec<String> = conditions
        .into_iter()
        .map(|b| cfp.conditions[b].origin.clone())
        .collect();
    v.sort();
    v
}

/// TARs of a partial order: `a` may fire immediately before `b` iff `b` does
/// not precede `a` and no event lies strictly between them.
fn order_tars(preds: &[Vec<usize>], origins: &[&str]) -> BTreeSet<Tar> {
    let n = preds.len();
    // below[x][y]: y strictly precedes x. Steps are topologically indexed.
    let mut below = vec![vec![false; n]; n];
    for x in 0..n {
        for &p in &preds[x] {
            below[x][p] = true;
            let (lo, hi) = below.split_at_mut(x);
            for (y, flag) in lo[p].iter().enumerate() {
                if *flag {
                    hi[0][y] = true;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || below[a][b] {
                continue;
            }
            let between = (0..n).any(|c| c != a && c != b && below[c][a] && below[b][c]);
            if !between {
                out.insert(Tar::new(origins[a], origins[b]));
            }
        }
    }
    out
}

struct Closure<'a> {
    cfp: &'a Cfp,
    shadow: Vec<bool>,
}

impl Closure<'_> {
    fn consumed_by_other(&self, set: &BTreeSet<usize>, e: usize) -> bool {
        let pre = &self.cfp.events[e].preset;
        set.iter()
            .any(|&f| f != e && self.cfp.events[f].preset.iter().any(|b| pre.contains(b)))
    }

    fn search(&self, set: BTreeSet<usize>, out: &mut BTreeSet<Vec<usize>>) {
        let cfp = self.cfp;
        for &e in &set {
            for &b in &cfp.events[e].preset {
                if self.shadow[b] {
                    continue;
                }
                match cfp.conditions[b].producer {
                    Some(p) if !set.contains(&p) => {
                        if !self.consumed_by_other(&set, p) {
                            let mut next = set.clone();
                            next.insert(p);
                            self.search(next, out);
                        }
                        return;
                    }
                    Some(_) => {}
                    None => return,
                }
            }
        }
        for &e in &set {
            for &b in &cfp.events[e].postset {
                if self.shadow[b] {
                    continue;
                }
                let consumers = &cfp.conditions[b].consumers;
                let inside = consumers.iter().filter(|c| set.contains(c)).count();
                if inside > 1 {
                    return;
                }
                if inside == 0 {
                    for &c in consumers {
                        let mut next = set.clone();
                        next.insert(c);
                        if !self.consumed_by_other(&next, c) {
                            self.search(next, out);
                        }
                    }
                    return;
                }
            }
        }
        // a shadow place may bound a segment but never sit inside it
        for &e in &set {
            for &b in &cfp.events[e].postset {
                if self.shadow[b] && cfp.conditions[b].consumers.iter().any(|c| set.contains(c)) {
                    return;
                }
            }
        }
        out.insert(set.into_iter().collect());
    }
}

fn replay_segment(cfp: &Cfp, system: &NetSystem, seg: &Segment) -> Result<()> {
    let mut m = Marking::new();
    for &b in &seg.entries {
        m.add(&cfp.conditions[b].origin, 1);
    }
    for &e in &seg.events {
        m = fire_from(&system.net, &m, &cfp.events[e].origin).map_err(|_| Error::ReplayViolation {
            segment: seg.id.clone(),
            witness: format!("{} not enabled at {m}", cfp.events[e].origin),
        })?;
    }
    let mut expected = Marking::new();
    for &b in &seg.exits {
        expected.add(&cfp.conditions[b].origin, 1);
    }
    if m != expected {
        return Err(Error::ReplayViolation {
            segment: seg.id.clone(),
            witness: format!("ends at {m}, expected {expected}"),
        });
    }
    Ok(())
}

/// Every shadow-bounded, closed, conflict-free event set of the prefix, in
/// order of their sorted event indices. Each one is replayed on the original
/// net.
pub fn extract_segments(cfp: &Cfp, system: &NetSystem) -> Result<Vec<Segment>> {
    let mut shadow = vec![false; cfp.conditions.len()];
    for &s in &cfp.shadows {
        shadow[s] = true;
    }
    let closure = Closure { cfp, shadow };
    let mut found = BTreeSet::new();
    for e in 0..cfp.events.len() {
        closure.search(BTreeSet::from([e]), &mut found);
    }
    let mut segments = Vec::new();
    for (i, events) in found.into_iter().enumerate() {
        let set: BTreeSet<usize> = events.iter().copied().collect();
        let mut entries = BTreeSet::new();
        let mut exits = BTreeSet::new();
        let mut interior = BTreeSet::new();
        for &e in &events {
            for &b in &cfp.events[e].preset {
                match cfp.conditions[b].producer {
                    Some(p) if set.contains(&p) => {
                        interior.insert(b);
                    }
                    _ => {
                        entries.insert(b);
                    }
                }
            }
            for &b in &cfp.events[e].postset {
                if !cfp.conditions[b].consumers.iter().any(|c| set.contains(c)) {
                    exits.insert(b);
                }
            }
        }
        let position: BTreeMap<usize, usize> =
            events.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let preds: Vec<Vec<usize>> = events
            .iter()
            .map(|&e| {
                cfp.events[e]
                    .preset
                    .iter()
                    .filter_map(|&b| cfp.conditions[b].producer)
                    .filter_map(|p| position.get(&p).copied())
                    .collect()
            })
            .collect();
        let origins: Vec<&str> = events.iter().map(|&e| cfp.events[e].origin.as_str()).collect();
        let seg = Segment {
            id: format!("S{}", i + 1),
            tars: order_tars(&preds, &origins),
            events,
            entries: entries.into_iter().collect(),
            exits: exits.into_iter().collect(),
            interior: interior.into_iter().collect(),
        };
        replay_segment(cfp, system, &seg)?;
        segments.push(seg);
    }
    Ok(segments)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    /// Prefix event index.
    pub event: usize,
    /// Position of the owning segment within the chain.
    pub position: usize,
    /// Steps that must fire before this one.
    pub after: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Joint {
    /// Position of the segment whose entry was glued.
    pub position: usize,
    pub entry: usize,
    pub joint: usize,
    /// More than one exit place had the entry's image.
    pub ambiguous: bool,
}

/// A chain of linked segments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Linked {
    /// Segment indices in link order.
    pub segments: Vec<usize>,
    pub steps: Vec<Step>,
    pub joints: Vec<Joint>,
    pub entries: Vec<usize>,
    /// Open exit places with the step that produced them.
    pub exits: Vec<(usize, Option<usize>)>,
    arcs: usize,
}

impl Linked {
    pub fn new(cfp: &Cfp, segments: &[Segment], s: usize) -> Self {
        let mut chain = Linked {
            segments: Vec::new(),
            steps: Vec::new(),
            joints: Vec::new(),
            entries: segments[s].entries.clone(),
            exits: Vec::new(),
            arcs: 0,
        };
        let glue = segments[s].entries.iter().map(|&b| (b, None)).collect();
        chain.append(cfp, segments, s, glue);
        chain
    }

    fn append(&mut self, cfp: &Cfp, segments: &[Segment], s: usize, glue: BTreeMap<usize, Option<usize>>) {
        let seg = &segments[s];
        let position = self.segments.len();
        self.segments.push(s);
        self.arcs += seg.arcs(cfp).len();
        let mut step_of = BTreeMap::new();
        for &e in &seg.events {
            let mut after = BTreeSet::new();
            for &b in &cfp.events[e].preset {
                if let Some(source) = glue.get(&b) {
                    after.extend(*source);
                } else if let Some(p) = cfp.conditions[b].producer {
                    after.insert(step_of[&p]);
                }
            }
            step_of.insert(e, self.steps.len());
            self.steps.push(Step {
                event: e,
                position,
                after: after.into_iter().collect(),
            });
        }
        for &b in &seg.exits {
            let producer = cfp.conditions[b].producer.map(|p| step_of[&p]);
            self.exits.push((b, producer));
        }
    }

    /// Glues `segments[s]` onto the chain. Each entry place is joined with
    /// the open exit of equal image that has the smallest occurrence index.
    pub fn link(&self, cfp: &Cfp, segments: &[Segment], s: usize) -> Result<Linked> {
        let mut next = self.clone();
        let mut glue = BTreeMap::new();
        let position = next.segments.len();
        for &q in &segments[s].entries {
            let origin = &cfp.conditions[q].origin;
            let mut candidates: Vec<usize> = (0..next.exits.len())
                .filter(|&i| cfp.conditions[next.exits[i].0].origin == *origin)
                .collect();
            candidates.sort_by_key(|&i| next.exits[i].0);
            let Some(&pick) = candidates.first() else {
                return Err(Error::NotLinkable {
                    exits: image(cfp, self.exits.iter().map(|x| x.0)),
                    entries: image(cfp, segments[s].entries.iter().copied()),
                });
            };
            let (joint, producer) = next.exits.remove(pick);
            next.joints.push(Joint {
                position,
                entry: q,
                joint,
                ambiguous: candidates.len() > 1,
            });
            glue.insert(q, producer);
        }
        next.append(cfp, segments, s, glue);
        Ok(next)
    }

    pub fn entry_image(&self, cfp: &Cfp) -> Vec<String> {
        image(cfp, self.entries.iter().copied())
    }

    pub fn exit_image(&self, cfp: &Cfp) -> Vec<String> {
        image(cfp, self.exits.iter().map(|x| x.0))
    }

    /// Arcs of the linked graph; joint substitution never merges arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs
    }

    pub fn tars(&self, cfp: &Cfp) -> BTreeSet<Tar> {
        let preds: Vec<Vec<usize>> = self.steps.iter().map(|s| s.after.clone()).collect();
        let origins: Vec<&str> = self
            .steps
            .iter()
            .map(|s| cfp.events[s.event].origin.as_str())
            .collect();
        order_tars(&preds, &origins)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Main,
    Loop,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BehaviorPath {
    pub id: String,
    pub kind: PathKind,
    pub chain: Linked,
    /// Transition ids in step order.
    pub sequence: Vec<String>,
    /// For loops this includes the TARs across the wrap-around joint.
    pub tars: BTreeSet<Tar>,
}

impl BehaviorPath {
    pub fn segment_ids<'a>(&self, segments: &'a [Segment]) -> Vec<&'a str> {
        self.chain
            .segments
            .iter()
            .map(|&s| segments[s].id.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathSet {
    pub paths: Vec<BehaviorPath>,
    /// Set when the chain bound stopped the search early.
    pub truncated: bool,
}

struct Search<'a> {
    cfp: &'a Cfp,
    segments: &'a [Segment],
    initial: Vec<usize>,
    terminal: BTreeSet<String>,
    budget: usize,
    truncated: bool,
    found: Vec<(PathKind, Linked)>,
}

impl Search<'_> {
    fn is_main(&self, chain: &Linked) -> bool {
        chain.entries == self.initial
            && chain
                .exits
                .iter()
                .all(|&(b, _)| self.terminal.contains(&self.cfp.conditions[b].origin))
    }

    /// `images` holds the exit images seen so far, starting with the entry
    /// image. `closable` is false once an intermediate image repeated, after
    /// which the chain can only still become a main path.
    fn visit(&mut self, chain: Linked, images: &mut Vec<Vec<String>>, closable: bool) {
        if self.budget == 0 {
            self.truncated = true;
            return;
        }
        self.budget -= 1;
        let img = chain.exit_image(self.cfp);
        if self.is_main(&chain) {
            self.found.push((PathKind::Main, chain));
            return;
        }
        if img == images[0] {
            if closable && !chain.entries.is_empty() {
                self.found.push((PathKind::Loop, chain));
            }
            return;
        }
        let closable = closable && !images.contains(&img);
        images.push(img);
        for s in 0..self.segments.len() {
            if chain.segments.contains(&s) {
                continue;
            }
            if let Ok(next) = chain.link(self.cfp, self.segments, s) {
                self.visit(next, images, closable);
            }
        }
        images.pop();
    }
}

/// Depth-first search over the linking relation from every segment. Each
/// segment occurs at most once per chain; loops must not revisit an
/// intermediate image. Paths come back ordered: main paths first, then loops,
/// each group greedily by how many not-yet-covered TARs a path adds, ties by
/// transition sequence.
pub fn enumerate_paths(cfp: &Cfp, system: &NetSystem, segments: &[Segment], chain_bound: usize) -> PathSet {
    let initial: Vec<usize> = cfp
        .conditions
        .iter()
        .enumerate()
        .filter(|(_, c)| c.producer.is_none())
        .map(|(i, _)| i)
        .collect();
    let mut search = Search {
        cfp,
        segments,
        initial,
        terminal: system.terminal_places(),
        budget: chain_bound.max(1),
        truncated: false,
        found: Vec::new(),
    };
    for s in 0..segments.len() {
        let chain = Linked::new(cfp, segments, s);
        let mut images = vec![chain.entry_image(cfp)];
        search.visit(chain, &mut images, true);
    }
    let mut candidates: Vec<BehaviorPath> = search
        .found
        .into_iter()
        .map(|(kind, chain)| {
            let tars = match kind {
                PathKind::Main => chain.tars(cfp),
                PathKind::Loop => {
                    let first = chain.segments[0];
                    match chain.link(cfp, segments, first) {
                        Ok(wrapped) => wrapped.tars(cfp),
                        Err(_) => chain.tars(cfp),
                    }
                }
            };
            let sequence = chain
                .steps
                .iter()
                .map(|s| cfp.events[s.event].origin.clone())
                .collect();
            BehaviorPath {
                id: String::new(),
                kind,
                chain,
                sequence,
                tars,
            }
        })
        .collect();
    let mut ordered = Vec::new();
    let mut covered = BTreeSet::new();
    for kind in [PathKind::Main, PathKind::Loop] {
        let mut pool: Vec<BehaviorPath> = Vec::new();
        let mut rest = Vec::new();
        for p in candidates {
            if p.kind == kind {
                pool.push(p);
            } else {
                rest.push(p);
            }
        }
        candidates = rest;
        while !pool.is_empty() {
            let best = (0..pool.len())
                .min_by(|&i, &j| {
                    let gain = |p: &BehaviorPath| p.tars.difference(&covered).count();
                    gain(&pool[j])
                        .cmp(&gain(&pool[i]))
                        .then_with(|| pool[i].sequence.cmp(&pool[j].sequence))
                        .then_with(|| pool[i].chain.segments.cmp(&pool[j].chain.segments))
                })
                .expect("pool is not empty");
            let p = pool.remove(best);
            covered.extend(p.tars.iter().cloned());
            ordered.push(p);
        }
    }
    for (i, p) in ordered.iter_mut().enumerate() {
        p.id = format!("P{}", i + 1);
    }
    PathSet {
        paths: ordered,
        truncated: search.truncated,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrunedPath {
    /// Index into the path list that was pruned.
    pub path: usize,
    pub kept: BTreeSet<Tar>,
}

/// Keeps each TAR at the first path that has it; paths left with nothing
/// are dropped.
pub fn prune(paths: &[BehaviorPath]) -> Vec<PrunedPath> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        let kept: BTreeSet<Tar> = p.tars.iter().filter(|t| !seen.contains(*t)).cloned().collect();
        if kept.is_empty() {
            continue;
        }
        seen.extend(kept.iter().cloned());
        out.push(PrunedPath { path: i, kept });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_dsl;
    use crate::petri::{tar_set, DEFAULT_STATE_BOUND};
    use crate::unfold::unfold;

    fn prepare(src: &str) -> (NetSystem, Cfp, Vec<Segment>) {
        let system = parse_dsl(src).unwrap().system;
        let cfp = unfold(&system, 1000).unwrap();
        let segments = extract_segments(&cfp, &system).unwrap();
        (system, cfp, segments)
    }

    fn tars(pairs: &[(&str, &str)]) -> BTreeSet<Tar> {
        pairs.iter().map(|(a, b)| Tar::new(*a, *b)).collect()
    }

    fn event_ids<'a>(cfp: &'a Cfp, seg: &Segment) -> Vec<&'a str> {
        seg.events.iter().map(|&e| cfp.events[e].id.as_str()).collect()
    }

    #[test]
    fn nstar_segments() {
        let (_, cfp, segs) = prepare(include_str!("../corpus/nstar.pnet"));
        let got: Vec<Vec<&str>> = segs.iter().map(|s| event_ids(&cfp, s)).collect();
        assert_eq!(
            got,
            vec![vec!["T_a1"], vec!["T_b1", "T_c1"], vec!["T_b1", "T_d1"], vec!["T_e1"]]
        );
        let bounds = |s: &Segment| {
            (
                s.entries.iter().map(|&b| cfp.conditions[b].id.as_str()).collect::<Vec<_>>(),
                s.exits.iter().map(|&b| cfp.conditions[b].id.as_str()).collect::<Vec<_>>(),
            )
        };
        assert_eq!(bounds(&segs[0]), (vec!["P_a1"], vec!["P_b1"]));
        assert_eq!(bounds(&segs[2]), (vec!["P_b1"], vec!["P_a2"]));
        assert_eq!(segs[1].tars, tars(&[("T_b", "T_c")]));
    }

    #[test]
    fn linking_joins_mutual_places() {
        let (_, cfp, segs) = prepare(include_str!("../corpus/nstar.pnet"));
        let chain = Linked::new(&cfp, &segs, 2).link(&cfp, &segs, 0).unwrap();
        let j = &chain.joints[0];
        assert_eq!(cfp.conditions[j.entry].id, "P_a1");
        assert_eq!(cfp.conditions[j.joint].id, "P_a2");
        assert_eq!(chain.entry_image(&cfp), ["P_b"]);
        assert_eq!(chain.exit_image(&cfp), ["P_b"]);
        let longer = chain.link(&cfp, &segs, 1).unwrap();
        let arcs: usize = [2, 0, 1].iter().map(|&s| segs[s].arcs(&cfp).len()).sum();
        assert_eq!(longer.arc_count(), arcs);
        assert!(matches!(
            Linked::new(&cfp, &segs, 0).link(&cfp, &segs, 3),
            Err(Error::NotLinkable { .. })
        ));
    }

    #[test]
    fn nstar_paths_and_pruning() {
        let (system, cfp, segs) = prepare(include_str!("../corpus/nstar.pnet"));
        let set = enumerate_paths(&cfp, &system, &segs, DEFAULT_CHAIN_BOUND);
        assert!(!set.truncated);
        let listed: Vec<(PathKind, Vec<&str>)> = set
            .paths
            .iter()
            .map(|p| (p.kind, p.segment_ids(&segs)))
            .collect();
        assert_eq!(
            listed,
            vec![
                (PathKind::Main, vec!["S1", "S2"]),
                (PathKind::Loop, vec!["S1", "S3"]),
                (PathKind::Loop, vec!["S2", "S4"]),
                (PathKind::Loop, vec!["S3", "S1"]),
                (PathKind::Loop, vec!["S4", "S2"]),
            ]
        );
        let pruned = prune(&set.paths);
        let kept: Vec<BTreeSet<Tar>> = pruned.iter().map(|p| p.kept.clone()).collect();
        assert_eq!(
            kept,
            vec![
                tars(&[("T_a", "T_b"), ("T_b", "T_c")]),
                tars(&[("T_b", "T_d"), ("T_d", "T_a")]),
                tars(&[("T_c", "T_e"), ("T_e", "T_b")]),
            ]
        );
        let oracle = tar_set(&system, DEFAULT_STATE_BOUND).unwrap();
        let union: BTreeSet<Tar> = set.paths.iter().flat_map(|p| p.tars.iter().cloned()).collect();
        assert_eq!(union, oracle);
    }

    #[test]
    fn n1_has_two_main_paths() {
        let (system, cfp, segs) = prepare(include_str!("../corpus/n1.pnet"));
        assert_eq!(segs.len(), 3);
        let set = enumerate_paths(&cfp, &system, &segs, DEFAULT_CHAIN_BOUND);
        let seqs: Vec<Vec<&str>> = set
            .paths
            .iter()
            .map(|p| p.sequence.iter().map(String::as_str).collect())
            .collect();
        assert_eq!(seqs, vec![vec!["T_a", "T_b", "T_d"], vec!["T_a", "T_c", "T_d"]]);
        assert!(set.paths.iter().all(|p| p.kind == PathKind::Main));
    }

    #[test]
    fn sequence_is_one_segment_and_one_path() {
        let (system, cfp, segs) = prepare(
            "place i *\nplace m\nplace o\ntrans a\ntrans b\narc i a\narc a m\narc m b\narc b o\n",
        );
        assert_eq!(segs.len(), 1);
        let set = enumerate_paths(&cfp, &system, &segs, 100);
        assert_eq!(set.paths.len(), 1);
        assert_eq!(set.paths[0].chain.segments, [0]);
    }

    #[test]
    fn concurrency_stays_inside_one_segment() {
        let (system, cfp, segs) = prepare(
            "place i *\nplace a\nplace b\nplace c\nplace d\nplace o\n\
             trans s\ntrans x\ntrans y\ntrans j\n\
             arc i s\narc s a\narc s b\narc a x\narc b y\narc x c\narc y d\narc c j\narc d j\narc j o\n",
        );
        assert_eq!(segs.len(), 1);
        let oracle = tar_set(&system, 1000).unwrap();
        assert_eq!(segs[0].tars, oracle);
        let set = enumerate_paths(&cfp, &system, &segs, 100);
        assert_eq!(set.paths[0].tars, oracle);
    }

    #[test]
    fn source_transition_bounds_a_single_segment() {
        let (system, cfp, segs) = prepare(
            "place a\nplace b\nplace c\ntrans s\ntrans x\ntrans y\n\
             arc s a\narc s b\narc a x\narc b y\narc x c\narc y c\n",
        );
        assert_eq!(segs.len(), 1);
        assert!(segs[0].entries.is_empty());
        let set = enumerate_paths(&cfp, &system, &segs, 100);
        assert_eq!(set.paths.len(), 1);
        assert_eq!(set.paths[0].kind, PathKind::Main);
    }

    #[test]
    fn prune_drops_duplicates() {
        let (system, cfp, segs) = prepare(include_str!("../corpus/n1.pnet"));
        let set = enumerate_paths(&cfp, &system, &segs, 100);
        let one = prune(&set.paths[..1]);
        assert_eq!(one[0].kept, set.paths[0].tars);
        let twice = vec![set.paths[0].clone(), set.paths[0].clone()];
        assert_eq!(prune(&twice).len(), 1);
    }
}
