//! Complete finite prefix of a net's unfolding.
//!
//! Events are added in size-lexicographic order of their local
//! configurations: smaller configurations first, ties broken by the sorted
//! sequence of original transition ids. An event whose configuration leads to
//! the initial marking or to the cut of an earlier event is a cut-off; it stays
//! in the prefix but nothing is appended after it.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::petri::{Compiled, Marking, NetSystem, NodeKind, PetriNet};

pub const DEFAULT_EVENT_BOUND: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub id: String,
    pub origin: String,
    pub producer: Option<usize>,
    pub consumers: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Event {
    pub id: String,
    pub origin: String,
    pub preset: Vec<usize>,
    pub postset: Vec<usize>,
    pub cutoff: bool,
    /// For a cut-off, the earlier event with the same cut; `None` when the cut
    /// equals the initial marking.
    pub correspondent: Option<usize>,
    /// Local configuration, sorted, including the event itself.
    pub local: Vec<usize>,
}

/// A node of the prefix together with its image under the folding map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CfpNode {
    pub id: String,
    pub kind: NodeKind,
    pub origin: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cfp {
    pub conditions: Vec<Condition>,
    pub events: Vec<Event>,
    /// Indices into `conditions`.
    pub shadows: BTreeSet<usize>,
}

impl Cfp {
    pub fn condition(&self, id: &str) -> Option<usize> {
        self.conditions.iter().position(|c| c.id == id)
    }

    pub fn event(&self, id: &str) -> Option<usize> {
        self.events.iter().position(|e| e.id == id)
    }

    pub fn nodes(&self) -> Vec<CfpNode> {
        let places = self.conditions.iter().map(|c| CfpNode {
            id: c.id.clone(),
            kind: NodeKind::Place,
            origin: c.origin.clone(),
        });
        let transitions = self.events.iter().map(|e| CfpNode {
            id: e.id.clone(),
            kind: NodeKind::Transition,
            origin: e.origin.clone(),
        });
        places.chain(transitions).collect()
    }

    /// The folding map on node ids.
    pub fn origin(&self, id: &str) -> Option<&str> {
        self.condition(id)
            .map(|c| self.conditions[c].origin.as_str())
            .or_else(|| self.event(id).map(|e| self.events[e].origin.as_str()))
    }

    pub fn arcs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for e in &self.events {
            for &b in &e.preset {
                out.push((self.conditions[b].id.clone(), e.id.clone()));
            }
            for &b in &e.postset {
                out.push((e.id.clone(), self.conditions[b].id.clone()));
            }
        }
        out.sort();
        out
    }

    pub fn cutoffs(&self) -> Vec<&str> {
        self.events
            .iter()
            .filter(|e| e.cutoff)
            .map(|e| e.id.as_str())
            .collect()
    }

    /// Cut-off id to the id of its correspondent (`None` for the initial cut).
    pub fn correspondents(&self) -> BTreeMap<String, Option<String>> {
        self.events
            .iter()
            .filter(|e| e.cutoff)
            .map(|e| {
                (
                    e.id.clone(),
                    e.correspondent.map(|c| self.events[c].id.clone()),
                )
            })
            .collect()
    }

    /// Two distinct places with the same image.
    pub fn mutual(&self, p: &str, q: &str) -> Result<bool> {
        let a = self
            .condition(p)
            .ok_or_else(|| Error::UnknownNode(p.to_string()))?;
        let b = self
            .condition(q)
            .ok_or_else(|| Error::UnknownNode(q.to_string()))?;
        Ok(a != b && self.conditions[a].origin == self.conditions[b].origin)
    }

    /// Places without producer plus places without consumer.
    pub fn boundary(&self) -> BTreeSet<usize> {
        self.conditions
            .iter()
            .enumerate()
            .filter(|(_, c)| c.producer.is_none() || c.consumers.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn shadow_ids(&self) -> BTreeSet<String> {
        self.shadows
            .iter()
            .map(|&i| self.conditions[i].id.clone())
            .collect()
    }

    /// The marking reached by firing a configuration, mapped back to the net.
    pub fn cut(&self, configuration: &BTreeSet<usize>) -> Marking {
        let events: Vec<usize> = configuration.iter().copied().collect();
        let mut m = Marking::new();
        for b in self.cut_conditions(&events) {
            m.add(&self.conditions[b].origin, 1);
        }
        m
    }

    /// Conditions marked after firing a configuration.
    pub fn cut_conditions(&self, configuration: &[usize]) -> BTreeSet<usize> {
        let fired: BTreeSet<usize> = configuration.iter().copied().collect();
        self.conditions
            .iter()
            .enumerate()
            .filter(|(_, c)| match c.producer {
                None => true,
                Some(e) => fired.contains(&e),
            })
            .filter(|(_, c)| !c.consumers.iter().any(|e| fired.contains(e)))
            .map(|(i, _)| i)
            .collect()
    }

    /// Causally closed and conflict-free.
    pub fn is_configuration(&self, events: &BTreeSet<usize>) -> bool {
        let mut used = BTreeSet::new();
        for &e in events {
            for &b in &self.events[e].preset {
                if !used.insert(b) {
                    return false;
                }
                if let Some(p) = self.conditions[b].producer {
                    if !events.contains(&p) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The prefix as an ordinary (occurrence) net; transitions keep the
    /// labels of their origins.
    pub fn to_net(&self, original: &PetriNet) -> PetriNet {
        let mut net = PetriNet::new();
        for c in &self.conditions {
            net.add_place(c.id.clone()).expect("occurrence ids are unique");
        }
        for e in &self.events {
            net.add_transition(e.id.clone(), original.label(&e.origin))
                .expect("occurrence ids are unique");
        }
        for (a, b) in self.arcs() {
            net.add_arc(&a, &b).expect("prefix arcs are bipartite");
        }
        net
    }
}

/// Places mutual with a boundary place of the prefix, or mapped onto a
/// boundary place of the original system. Boundary places of the prefix are
/// shadows themselves. In addition, the whole cut of every cut-off and of its
/// correspondent is shadowed, so that a continuation can be glued on at every
/// place of the repeated marking, including places of concurrent branches.
pub fn shadow_places(cfp: &Cfp, system: &NetSystem) -> BTreeSet<usize> {
    let mut classes: BTreeSet<&str> = cfp
        .boundary()
        .into_iter()
        .map(|i| cfp.conditions[i].origin.as_str())
        .collect();
    let original = system.boundary_places();
    classes.extend(original.iter().map(String::as_str));
    let mut out: BTreeSet<usize> = cfp
        .conditions
        .iter()
        .enumerate()
        .filter(|(_, c)| classes.contains(c.origin.as_str()))
        .map(|(i, _)| i)
        .collect();
    for e in cfp.events.iter().filter(|e| e.cutoff) {
        out.extend(cfp.cut_conditions(&e.local));
        match e.correspondent {
            Some(c) => out.extend(cfp.cut_conditions(&cfp.events[c].local)),
            None => out.extend(cfp.cut_conditions(&[])),
        }
    }
    out
}

struct Builder<'a> {
    net: &'a Compiled,
    conditions: Vec<Condition>,
    events: Vec<Event>,
    event_origin: Vec<usize>,
    condition_origin: Vec<usize>,
    counters: HashMap<String, usize>,
}

struct Candidate {
    transition: usize,
    preset: Vec<usize>,
    local: Vec<usize>,
}

impl Builder<'_> {
    fn fresh_id(&mut self, origin: &str) -> String {
        let n = self.counters.entry(origin.to_string()).or_insert(0);
        *n += 1;
        if origin.ends_with(|c: char| c.is_ascii_digit()) {
            format!("{origin}_{n}")
        } else {
            format!("{origin}{n}")
        }
    }

    fn add_condition(&mut self, place: usize, producer: Option<usize>) -> usize {
        let origin = self.net.places[place].clone();
        let id = self.fresh_id(&origin);
        self.conditions.push(Condition {
            id,
            origin,
            producer,
            consumers: Vec::new(),
        });
        self.condition_origin.push(place);
        self.conditions.len() - 1
    }

    /// Local configuration of the producer of `b` (empty for initial places).
    fn history(&self, b: usize) -> &[usize] {
        match self.conditions[b].producer {
            Some(e) => &self.events[e].local,
            None => &[],
        }
    }

    fn concurrent(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        let union: BTreeSet<usize> = self
            .history(a)
            .iter()
            .chain(self.history(b))
            .copied()
            .collect();
        let mut used = BTreeSet::new();
        for &e in &union {
            for &c in &self.events[e].preset {
                if c == a || c == b || !used.insert(c) {
                    return false;
                }
            }
        }
        true
    }

    fn extensions(&self, seen: &BTreeSet<(usize, Vec<usize>)>) -> Vec<Candidate> {
        let mut pools: Vec<Vec<usize>> = vec![Vec::new(); self.net.places.len()];
        for (i, c) in self.conditions.iter().enumerate() {
            let live = match c.producer {
                Some(e) => !self.events[e].cutoff,
                None => true,
            };
            if live {
                pools[self.condition_origin[i]].push(i);
            }
        }
        let mut out = Vec::new();
        for t in 0..self.net.transitions.len() {
            let places = &self.net.pre[t];
            let mut chosen = Vec::new();
            self.choose(t, places, &pools, &mut chosen, seen, &mut out);
        }
        out
    }

    fn choose(
        &self,
        t: usize,
        places: &[usize],
        pools: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        seen: &BTreeSet<(usize, Vec<usize>)>,
        out: &mut Vec<Candidate>,
    ) {
        let Some((&p, rest)) = places.split_first() else {
            let mut preset = chosen.clone();
            preset.sort_unstable();
            if seen.contains(&(t, preset.clone())) {
                return;
            }
            let local: BTreeSet<usize> = preset
                .iter()
                .flat_map(|&b| self.history(b).iter().copied())
                .collect();
            out.push(Candidate {
                transition: t,
                preset,
                local: local.into_iter().collect(),
            });
            return;
        };
        for &b in &pools[p] {
            if chosen.iter().all(|&a| self.concurrent(a, b)) {
                chosen.push(b);
                self.choose(t, rest, pools, chosen, seen, out);
                chosen.pop();
            }
        }
    }

    fn order_key(&self, c: &Candidate) -> (usize, Vec<&str>, Vec<usize>) {
        let mut origins: Vec<&str> = c
            .local
            .iter()
            .map(|&e| self.events[e].origin.as_str())
            .chain(std::iter::once(self.net.transitions[c.transition].as_str()))
            .collect();
        origins.sort_unstable();
        (c.local.len() + 1, origins, c.preset.clone())
    }

    fn cut_vector(&self, initial: &[u32], local: &[usize]) -> Vec<u32> {
        let mut m: Vec<i64> = initial.iter().map(|&x| i64::from(x)).collect();
        for &e in local {
            let t = self.event_origin[e];
            for &p in &self.net.pre[t] {
                m[p] -= 1;
            }
            for &p in &self.net.post[t] {
                m[p] += 1;
            }
        }
        m.into_iter().map(|x| x.max(0) as u32).collect()
    }
}

pub fn unfold(system: &NetSystem, event_bound: usize) -> Result<Cfp> {
    let compiled = Compiled::new(&system.net);
    let mut b = Builder {
        net: &compiled,
        conditions: Vec::new(),
        events: Vec::new(),
        event_origin: Vec::new(),
        condition_origin: Vec::new(),
        counters: HashMap::new(),
    };
    let initial = compiled.vector(&system.initial);
    for (p, &n) in initial.iter().enumerate() {
        for _ in 0..n {
            b.add_condition(p, None);
        }
    }
    let mut seen = BTreeSet::new();
    let mut cuts: Vec<Vec<u32>> = Vec::new();
    loop {
        let candidates = b.extensions(&seen);
        let Some(next) = candidates
            .into_iter()
            .min_by(|x, y| b.order_key(x).cmp(&b.order_key(y)))
        else {
            break;
        };
        if b.events.len() >= event_bound.max(1) {
            return Err(Error::EventBoundExceeded(event_bound));
        }
        let e = b.events.len();
        let mut local = next.local.clone();
        local.push(e);
        let origin = compiled.transitions[next.transition].clone();
        let id = b.fresh_id(&origin);
        b.events.push(Event {
            id,
            origin,
            preset: next.preset.clone(),
            postset: Vec::new(),
            cutoff: false,
            correspondent: None,
            local: local.clone(),
        });
        b.event_origin.push(next.transition);
        let cut = b.cut_vector(&initial, &local);
        if cut == initial {
            b.events[e].cutoff = true;
        } else if let Some(c) = cuts.iter().position(|m| *m == cut) {
            b.events[e].cutoff = true;
            b.events[e].correspondent = Some(c);
        }
        cuts.push(cut);
        for &c in &next.preset {
            b.conditions[c].consumers.push(e);
        }
        let post = compiled.post[next.transition].clone();
        for p in post {
            let c = b.add_condition(p, Some(e));
            b.events[e].postset.push(c);
        }
        seen.insert((next.transition, next.preset));
    }
    let mut cfp = Cfp {
        conditions: b.conditions,
        events: b.events,
        shadows: BTreeSet::new(),
    };
    cfp.shadows = shadow_places(&cfp, system);
    Ok(cfp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_dsl;

    fn load(src: &str) -> NetSystem {
        parse_dsl(src).unwrap().system
    }

    fn ids(v: &BTreeSet<String>) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }

    #[test]
    fn n1_prefix() {
        let system = load(include_str!("../corpus/n1.pnet"));
        let cfp = unfold(&system, 100).unwrap();
        assert_eq!(cfp.cutoffs(), ["T_c1"]);
        assert_eq!(cfp.correspondents()["T_c1"].as_deref(), Some("T_b1"));
        assert_eq!(cfp.events.len(), 4);
        assert_eq!(cfp.conditions.len(), 5);
        assert!(cfp.mutual("P_c1", "P_c2").unwrap());
        assert!(!cfp.mutual("P_c1", "P_c1").unwrap());
        assert_eq!(
            ids(&cfp.shadow_ids()),
            ["P_a1", "P_c1", "P_c2", "P_d1"]
        );
    }

    #[test]
    fn nstar_prefix() {
        let system = load(include_str!("../corpus/nstar.pnet"));
        let cfp = unfold(&system, 100).unwrap();
        assert_eq!(cfp.cutoffs(), ["T_d1", "T_e1"]);
        let corr = cfp.correspondents();
        assert_eq!(corr["T_d1"], None);
        assert_eq!(corr["T_e1"].as_deref(), Some("T_a1"));
        assert_eq!(
            ids(&cfp.shadow_ids()),
            ["P_a1", "P_a2", "P_b1", "P_b2", "P_d1"]
        );
        assert!(!cfp.mutual("P_a1", "P_b1").unwrap());
        assert!(matches!(cfp.mutual("P_a1", "zz"), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn sequence_prefix_is_the_net() {
        let system = load(
            "place i *\nplace m\nplace o\ntrans a\ntrans b\narc i a\narc a m\narc m b\narc b o\n",
        );
        let cfp = unfold(&system, 100).unwrap();
        assert!(cfp.cutoffs().is_empty());
        assert_eq!(cfp.arcs().len(), system.net.arcs().len());
        assert_eq!(ids(&cfp.shadow_ids()), ["i1", "o1"]);
    }

    #[test]
    fn digit_suffixed_ids_stay_readable() {
        let system = load("place p1 *\nplace p2\ntrans t1\narc p1 t1\narc t1 p2\n");
        let cfp = unfold(&system, 10).unwrap();
        assert_eq!(cfp.conditions[0].id, "p1_1");
        assert_eq!(cfp.events[0].id, "t1_1");
    }

    #[test]
    fn growing_net_hits_the_bound() {
        let system = load("place p *\nplace q\ntrans t\narc p t\narc t p\narc t q\n");
        assert!(matches!(unfold(&system, 50), Err(Error::EventBoundExceeded(50))));
    }

    #[test]
    fn concurrent_branches_share_no_conditions() {
        let system = load(
            "place i *\nplace a\nplace b\nplace c\nplace d\nplace o\n\
             trans s\ntrans x\ntrans y\ntrans j\n\
             arc i s\narc s a\narc s b\narc a x\narc b y\narc x c\narc y d\narc c j\narc d j\narc j o\n",
        );
        let cfp = unfold(&system, 100).unwrap();
        assert_eq!(cfp.events.len(), 4);
        assert!(cfp.cutoffs().is_empty());
        let all: BTreeSet<usize> = (0..4).collect();
        assert!(cfp.is_configuration(&all));
        assert_eq!(cfp.cut(&all), Marking::from_places(["o"]));
    }
}
