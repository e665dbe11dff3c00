//! Refined process structure tree and rigid simplification.
//!
//! Fragments are found by brute force: for every pair of nodes the remaining
//! edges fall into split components, and every union of those that has
//! exactly the pair as boundary (one entry, one exit) is a SESE fragment.
//! Canonical fragments are the ones overlapping no other fragment. A return
//! edge from the exit to the entry of the whole graph makes the two global
//! boundary nodes behave like any other boundary node.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::petri::{Marking, NetSystem, NodeKind, PetriNet, Tar};

/// Entry node added when a net has several (or no proper) entries.
pub const SYNTHETIC_ENTRY: &str = "(entry)";
/// Exit node added when a net has several (or no proper) exits.
pub const SYNTHETIC_EXIT: &str = "(exit)";

/// Beyond this many split components only single components and their full
/// union are tried for a node pair.
const MAX_SPLIT_COMPONENTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Trivial,
    Polygon,
    Bond,
    Rigid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub entry: String,
    pub exit: String,
    /// Sorted.
    pub arcs: Vec<(String, String)>,
    pub children: Vec<Component>,
    pub depth: usize,
}

impl Component {
    pub fn nodes(&self) -> BTreeSet<&str> {
        self.arcs
            .iter()
            .flat_map(|(a, b)| [a.as_str(), b.as_str()])
            .collect()
    }

    /// Nodes other than the entry and the exit.
    pub fn interior(&self) -> BTreeSet<&str> {
        let mut n = self.nodes();
        n.remove(self.entry.as_str());
        n.remove(self.exit.as_str());
        n
    }

    pub fn leaves(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(Component::leaves).sum()
        }
    }

    /// Pre-order walk.
    pub fn walk(&self) -> Vec<&Component> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }

    fn set_depth(&mut self, depth: usize) {
        self.depth = depth;
        for c in &mut self.children {
            c.set_depth(depth + 1);
        }
    }

    /// Kind implied by the children alone.
    pub fn classify(&self) -> ComponentKind {
        if self.children.is_empty() {
            return if self.arcs.len() == 1 {
                ComponentKind::Trivial
            } else {
                ComponentKind::Rigid
            };
        }
        let ends = |c: &Component| {
            let mut v = [c.entry.clone(), c.exit.clone()];
            v.sort();
            v
        };
        let own = ends(self);
        if self.children.len() > 1 && self.children.iter().all(|c| ends(c) == own) {
            return ComponentKind::Bond;
        }
        let chained = self.children.first().is_some_and(|c| c.entry == self.entry)
            && self.children.last().is_some_and(|c| c.exit == self.exit)
            && self.children.windows(2).all(|w| w[0].exit == w[1].entry);
        if chained {
            ComponentKind::Polygon
        } else {
            ComponentKind::Rigid
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RpstTree {
    pub root: Component,
    /// Modeling depth of every transition.
    pub depth_of: BTreeMap<String, usize>,
    /// A synthetic entry and exit were added before decomposition.
    pub wrapped: bool,
}

impl RpstTree {
    /// True when no component is rigid.
    pub fn is_structured(&self) -> bool {
        self.root.walk().iter().all(|c| c.kind != ComponentKind::Rigid)
    }
}

pub fn is_structured(tree: &RpstTree) -> bool {
    tree.is_structured()
}

struct Graph {
    nodes: Vec<String>,
    /// (from, to) node indices; the last edge is the return edge.
    edges: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
}

type Bits = Vec<u64>;

fn bits_new(n: usize) -> Bits {
    vec![0; n.div_ceil(64)]
}

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_get(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn bit_count(b: &Bits) -> u32 {
    b.iter().map(|w| w.count_ones()).sum()
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn disjoint(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

struct Fragment {
    edges: Bits,
    entry: usize,
    exit: usize,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl Graph {
    fn boundary(&self, f: &Bits) -> Option<(usize, usize)> {
        let mut found = Vec::new();
        let mut touched = HashSet::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if bit_get(f, i) {
                touched.insert(a);
                touched.insert(b);
            }
        }
        for &n in &touched {
            if self.incident[n].iter().any(|&e| !bit_get(f, e)) {
                found.push(n);
                if found.len() > 2 {
                    return None;
                }
            }
        }
        if found.len() != 2 {
            return None;
        }
        let role = |n: usize| {
            let mut in_f = false;
            let mut out_all = true;
            let mut out_f = false;
            let mut in_all = true;
            for &e in &self.incident[n] {
                let (a, b) = self.edges[e];
                let inside = bit_get(f, e);
                if b == n {
                    in_f |= inside;
                    in_all &= inside;
                }
                if a == n {
                    out_f |= inside;
                    out_all &= inside;
                }
            }
            let entry = !in_f || out_all;
            let exit = !out_f || in_all;
            (entry, exit, !in_f)
        };
        let (u, v) = (found[0], found[1]);
        let (ue, ux, u_clean) = role(u);
        let (ve, vx, v_clean) = role(v);
        match (ue && vx, ve && ux) {
            (true, false) => Some((u, v)),
            (false, true) => Some((v, u)),
            (true, true) => Some(if u_clean || !v_clean { (u, v) } else { (v, u) }),
            (false, false) => None,
        }
    }

    fn fragments(&self) -> Vec<Fragment> {
        let m = self.edges.len();
        let ret = m - 1;
        let mut seen: HashSet<Bits> = HashSet::new();
        let mut out = Vec::new();
        for u in 0..self.nodes.len() {
            for v in (u + 1)..self.nodes.len() {
                let mut parent: Vec<usize> = (0..m).collect();
                for w in 0..self.nodes.len() {
                    if w == u || w == v {
                        continue;
                    }
                    let inc = &self.incident[w];
                    for pair in inc.windows(2) {
                        let (a, b) = (find(&mut parent, pair[0]), find(&mut parent, pair[1]));
                        parent[a] = b;
                    }
                }
                let ret_root = find(&mut parent, ret);
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for e in 0..ret {
                    let r = find(&mut parent, e);
                    if r != ret_root {
                        groups.entry(r).or_default().push(e);
                    }
                }
                let comps: Vec<Bits> = groups
                    .values()
                    .filter(|es| {
                        es.iter().any(|&e| {
                            let (a, b) = self.edges[e];
                            a == u || a == v || b == u || b == v
                        })
                    })
                    .map(|es| {
                        let mut b = bits_new(m);
                        for &e in es {
                            bit_set(&mut b, e);
                        }
                        b
                    })
                    .collect();
                let k = comps.len();
                let mut masks: Vec<u64> = Vec::new();
                if k <= MAX_SPLIT_COMPONENTS {
                    masks.extend(1..(1u64 << k));
                } else {
                    masks.extend((0..k).map(|i| 1u64 << i));
                    masks.push((1u64 << k) - 1);
                }
                for mask in masks {
                    let mut f = bits_new(m);
                    for (i, c) in comps.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            for (w, x) in f.iter_mut().zip(c) {
                                *w |= x;
                            }
                        }
                    }
                    if seen.contains(&f) {
                        continue;
                    }
                    if let Some((entry, exit)) = self.boundary(&f) {
                        if [entry, exit].contains(&u) && [entry, exit].contains(&v) {
                            seen.insert(f.clone());
                            out.push(Fragment { edges: f, entry, exit });
                        }
                    }
                }
            }
        }
        out
    }
}

fn connected(net: &PetriNet) -> bool {
    let nodes: Vec<&String> = net.nodes().collect();
    let Some(first) = nodes.first() else {
        return true;
    };
    let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
    for (a, b) in net.arcs() {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen = HashSet::from([first.as_str()]);
    let mut stack = vec![first.as_str()];
    while let Some(n) = stack.pop() {
        for &m in adj.get(n).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(m) {
                stack.push(m);
            }
        }
    }
    seen.len() == nodes.len()
}

/// Entry and exit candidates of a system: marked places and source nodes,
/// sink nodes and final places.
fn boundary_of(system: &NetSystem) -> (BTreeSet<String>, BTreeSet<String>) {
    let (sources, sinks) = system.net.boundary_nodes();
    let mut entries: BTreeSet<String> = system.initial.places().map(str::to_string).collect();
    entries.extend(sources);
    let mut exits = sinks;
    exits.extend(system.finals.iter().cloned());
    (entries, exits)
}

fn build(
    g: &Graph,
    frags: &[Fragment],
    idx: usize,
    children_of: &BTreeMap<usize, Vec<usize>>,
) -> Component {
    let f = &frags[idx];
    let mut arcs: Vec<(String, String)> = (0..g.edges.len() - 1)
        .filter(|&e| bit_get(&f.edges, e))
        .map(|e| (g.nodes[g.edges[e].0].clone(), g.nodes[g.edges[e].1].clone()))
        .collect();
    arcs.sort();
    let children: Vec<Component> = children_of
        .get(&idx)
        .map(|cs| cs.iter().map(|&c| build(g, frags, c, children_of)).collect())
        .unwrap_or_default();
    let mut comp = Component {
        kind: ComponentKind::Trivial,
        entry: g.nodes[f.entry].clone(),
        exit: g.nodes[f.exit].clone(),
        arcs,
        children,
        depth: 0,
    };
    order_children(&mut comp);
    comp.kind = comp.classify();
    comp
}

/// Polygon children follow the control flow; others sort by entry id.
fn order_children(c: &mut Component) {
    let mut rest = std::mem::take(&mut c.children);
    rest.sort_by(|a, b| (&a.entry, &a.exit, &a.arcs).cmp(&(&b.entry, &b.exit, &b.arcs)));
    let mut chain = Vec::new();
    let mut at = c.entry.clone();
    while let Some(pos) = rest.iter().position(|x| x.entry == at && x.exit != c.entry) {
        let next = rest.remove(pos);
        at = next.exit.clone();
        chain.push(next);
        if at == c.exit {
            break;
        }
    }
    if rest.is_empty() && at == c.exit {
        c.children = chain;
    } else {
        chain.extend(rest);
        chain.sort_by(|a, b| (&a.entry, &a.exit, &a.arcs).cmp(&(&b.entry, &b.exit, &b.arcs)));
        c.children = chain;
    }
}

fn is_synthetic(n: &str) -> bool {
    n == SYNTHETIC_ENTRY || n == SYNTHETIC_EXIT
}

/// Drops synthetic arcs, empty components and single-child wrappers.
fn strip(mut c: Component) -> Option<Component> {
    c.arcs.retain(|(a, b)| !is_synthetic(a) && !is_synthetic(b));
    if c.arcs.is_empty() {
        return None;
    }
    let children: Vec<Component> = std::mem::take(&mut c.children)
        .into_iter()
        .filter_map(strip)
        .collect();
    c.children = children;
    if c.children.len() == 1 {
        return c.children.pop();
    }
    if c.entry == SYNTHETIC_ENTRY || c.exit == SYNTHETIC_EXIT {
        if let ComponentKind::Polygon = c.kind {
            if let Some(first) = c.children.first() {
                c.entry = first.entry.clone();
            }
            if let Some(last) = c.children.last() {
                c.exit = last.exit.clone();
            }
        }
    }
    c.kind = c.classify();
    Some(c)
}

/// Runs of two or more trivial children of a polygon that also has a
/// non-trivial child are grouped into their own polygon.
fn group_trivial_runs(c: &mut Component) {
    for child in &mut c.children {
        group_trivial_runs(child);
    }
    if c.kind != ComponentKind::Polygon
        || c.children.iter().all(|x| x.kind == ComponentKind::Trivial)
    {
        return;
    }
    let mut grouped = Vec::new();
    let mut run: Vec<Component> = Vec::new();
    let flush = |run: &mut Vec<Component>, out: &mut Vec<Component>| {
        if run.len() >= 2 {
            let mut arcs: Vec<(String, String)> = run.iter().flat_map(|x| x.arcs.clone()).collect();
            arcs.sort();
            out.push(Component {
                kind: ComponentKind::Polygon,
                entry: run[0].entry.clone(),
                exit: run[run.len() - 1].exit.clone(),
                arcs,
                children: std::mem::take(run),
                depth: 0,
            });
        } else {
            out.append(run);
        }
    };
    for child in std::mem::take(&mut c.children) {
        if child.kind == ComponentKind::Trivial {
            run.push(child);
        } else {
            flush(&mut run, &mut grouped);
            grouped.push(child);
        }
    }
    flush(&mut run, &mut grouped);
    c.children = grouped;
}

fn modeling_depths(root: &Component, net: &PetriNet) -> BTreeMap<String, usize> {
    let mut depth: BTreeMap<String, usize> =
        net.transitions().iter().map(|t| (t.clone(), 0)).collect();
    for c in root.walk() {
        if c.children.is_empty() {
            continue;
        }
        for n in c.interior() {
            if let Some(d) = depth.get_mut(n) {
                *d = (*d).max(c.depth);
            }
        }
    }
    depth
}

/// Decomposes a net system into its process structure tree. Initially
/// marked places and source nodes act as entries, sink nodes and final
/// places as exits; if that is not a single source and a single sink, a
/// synthetic entry and exit are attached first and removed afterwards.
pub fn decompose(system: &NetSystem) -> Result<RpstTree> {
    let net = &system.net;
    if net.arcs().is_empty() {
        return Err(if net.node_count() <= 1 {
            Error::EmptyNet
        } else {
            Error::DisconnectedNet
        });
    }
    if !connected(net) {
        return Err(Error::DisconnectedNet);
    }
    let (mut entries, exits) = boundary_of(system);
    let (sources, sinks) = net.boundary_nodes();
    if entries.is_empty() {
        entries.insert(net.nodes().next().cloned().expect("net has nodes"));
    }
    let wrapped = !(entries.len() == 1
        && exits.len() == 1
        && entries.iter().all(|e| sources.contains(e))
        && exits.iter().all(|x| sinks.contains(x)));

    let mut nodes: Vec<String> = net.nodes().cloned().collect();
    nodes.sort();
    if wrapped {
        nodes.push(SYNTHETIC_ENTRY.to_string());
        nodes.push(SYNTHETIC_EXIT.to_string());
    }
    let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut edges: Vec<(usize, usize)> = net
        .arcs()
        .iter()
        .map(|(a, b)| (index[a.as_str()], index[b.as_str()]))
        .collect();
    let (source, sink) = if wrapped {
        let s = index[SYNTHETIC_ENTRY];
        let t = index[SYNTHETIC_EXIT];
        for e in &entries {
            edges.push((s, index[e.as_str()]));
        }
        for x in &exits {
            edges.push((index[x.as_str()], t));
        }
        (s, t)
    } else {
        (
            index[entries.iter().next().unwrap().as_str()],
            index[exits.iter().next().unwrap().as_str()],
        )
    };
    edges.push((sink, source));
    let mut incident = vec![Vec::new(); nodes.len()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(i);
        if b != a {
            incident[b].push(i);
        }
    }
    let g = Graph { nodes, edges, incident };

    let mut frags = g.fragments();
    let m = g.edges.len();
    let mut whole = bits_new(m);
    for e in 0..m - 1 {
        bit_set(&mut whole, e);
    }
    if !frags.iter().any(|f| f.edges == whole) {
        frags.push(Fragment { edges: whole, entry: source, exit: sink });
    }
    for e in 0..m - 1 {
        let mut b = bits_new(m);
        bit_set(&mut b, e);
        if !frags.iter().any(|f| f.edges == b) {
            frags.push(Fragment { edges: b, entry: g.edges[e].0, exit: g.edges[e].1 });
        }
    }
    let canonical: Vec<usize> = (0..frags.len())
        .filter(|&i| {
            frags.iter().enumerate().all(|(j, other)| {
                i == j
                    || disjoint(&frags[i].edges, &other.edges)
                    || subset(&frags[i].edges, &other.edges)
                    || subset(&other.edges, &frags[i].edges)
            })
        })
        .collect();
    let mut by_size = canonical.clone();
    by_size.sort_by_key(|&i| bit_count(&frags[i].edges));
    let mut children_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut root = None;
    for (pos, &i) in by_size.iter().enumerate() {
        let parent = by_size[pos + 1..]
            .iter()
            .find(|&&j| frags[j].edges != frags[i].edges && subset(&frags[i].edges, &frags[j].edges));
        match parent {
            Some(&p) => children_of.entry(p).or_default().push(i),
            None => root = Some(i),
        }
    }
    let root = root.expect("the whole graph is a fragment");
    let tree = build(&g, &frags, root, &children_of);
    let mut root = if wrapped {
        strip(tree).ok_or(Error::EmptyNet)?
    } else {
        tree
    };
    group_trivial_runs(&mut root);
    root.set_depth(0);
    let depth_of = modeling_depths(&root, net);
    Ok(RpstTree { root, depth_of, wrapped })
}

/// A sub-model cut out of a rigid and replaced by one transition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Substitution {
    pub component: Component,
    /// The component as a system of its own: one token on the entry place,
    /// the exit place final.
    pub system: NetSystem,
    /// Transitions consuming from the entry place inside the component.
    pub first: BTreeSet<String>,
    /// Transitions producing into the exit place inside the component.
    pub last: BTreeSet<String>,
}

fn fresh_id(net: &PetriNet, taken: &BTreeSet<String>, n: &mut usize) -> String {
    loop {
        *n += 1;
        let id = format!("sub_{n}");
        if !net.contains(&id) && !taken.contains(&id) {
            return id;
        }
    }
}

fn collect_replaceable<'a>(c: &'a Component, net: &PetriNet, out: &mut Vec<&'a Component>) {
    if c.kind == ComponentKind::Rigid {
        for child in &c.children {
            let places = net.kind(&child.entry) == Some(NodeKind::Place)
                && net.kind(&child.exit) == Some(NodeKind::Place);
            let transitions = child
                .interior()
                .iter()
                .filter(|n| net.kind(n) == Some(NodeKind::Transition))
                .count();
            if child.kind != ComponentKind::Trivial && places && transitions >= 2 {
                out.push(child);
            } else {
                collect_replaceable(child, net, out);
            }
        }
    } else {
        for child in &c.children {
            collect_replaceable(child, net, out);
        }
    }
}

/// Replaces every place-bordered, multi-activity child of a rigid by a
/// single unlabeled transition.
pub fn simplify(system: &NetSystem, tree: &RpstTree) -> Result<(NetSystem, BTreeMap<String, Substitution>)> {
    let mut found = Vec::new();
    collect_replaceable(&tree.root, &system.net, &mut found);
    let mut net = system.net.clone();
    let mut subs = BTreeMap::new();
    let mut counter = 0;
    let mut taken = BTreeSet::new();
    for comp in found {
        let id = fresh_id(&system.net, &taken, &mut counter);
        taken.insert(id.clone());
        let mut sub = PetriNet::new();
        for n in comp.nodes() {
            match system.net.kind(n) {
                Some(NodeKind::Place) => sub.add_place(n)?,
                Some(NodeKind::Transition) => sub.add_transition(n, system.net.label(n))?,
                None => return Err(Error::UnknownNode(n.to_string())),
            }
        }
        for (a, b) in &comp.arcs {
            sub.add_arc(a, b)?;
        }
        let first = sub.postset(&comp.entry).iter().map(|s| s.to_string()).collect();
        let last = sub.preset(&comp.exit).iter().map(|s| s.to_string()).collect();
        let sub_system =
            NetSystem::new(sub, Marking::from_places([comp.entry.as_str()]))?.with_finals([comp.exit.clone()])?;
        for n in comp.interior() {
            net.remove_node(n);
        }
        net.add_transition(id.clone(), None)?;
        net.add_arc(&comp.entry, &id)?;
        net.add_arc(&id, &comp.exit)?;
        subs.insert(
            id,
            Substitution {
                component: comp.clone(),
                system: sub_system,
                first,
                last,
            },
        );
    }
    let mut simplified = NetSystem::new(net, system.initial.clone())?;
    simplified.finals = system.finals.clone();
    Ok((simplified, subs))
}

/// Rewrites TARs of a simplified net in terms of the original transitions:
/// a synthetic transition stands for its first transitions when it is the
/// second element and for its last transitions when it is the first element.
/// `inner` supplies the TARs inside each substitution.
pub fn expand_tars(
    tars: &BTreeSet<Tar>,
    subs: &BTreeMap<String, Substitution>,
    inner: &BTreeMap<String, BTreeSet<Tar>>,
) -> BTreeSet<Tar> {
    let heads = |t: &str| -> Vec<String> {
        subs.get(t)
            .map(|s| s.first.iter().cloned().collect())
            .unwrap_or_else(|| vec![t.to_string()])
    };
    let tails = |t: &str| -> Vec<String> {
        subs.get(t)
            .map(|s| s.last.iter().cloned().collect())
            .unwrap_or_else(|| vec![t.to_string()])
    };
    let mut out = BTreeSet::new();
    for tar in tars {
        for a in tails(&tar.first) {
            for b in heads(&tar.second) {
                out.insert(Tar::new(a.clone(), b));
            }
        }
    }
    for set in inner.values() {
        out.extend(set.iter().cloned());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_dsl;
    use crate::petri::{tar_set, DEFAULT_STATE_BOUND};

    fn load(src: &str) -> NetSystem {
        parse_dsl(src).unwrap().system
    }

    fn kinds(c: &Component) -> Vec<ComponentKind> {
        c.children.iter().map(|x| x.kind).collect()
    }

    #[test]
    fn n1_layers() {
        let tree = decompose(&load(include_str!("../corpus/n1.pnet"))).unwrap();
        use ComponentKind::*;
        assert!(!tree.wrapped);
        assert_eq!(tree.root.kind, Polygon);
        assert_eq!(kinds(&tree.root), [Polygon, Bond, Polygon]);
        let bond = &tree.root.children[1];
        assert_eq!((bond.entry.as_str(), bond.exit.as_str()), ("P_b", "P_c"));
        assert_eq!(kinds(bond), [Polygon, Polygon]);
        assert_eq!(kinds(&tree.root.children[0]), [Trivial, Trivial]);
        let depths: Vec<usize> = tree.depth_of.values().copied().collect();
        assert_eq!(depths, [1, 2, 2, 1]);
        assert!(tree.is_structured());
    }

    #[test]
    fn single_arc_is_trivial() {
        let tree = decompose(&load("place p *\ntrans t\narc p t\n")).unwrap();
        assert_eq!(tree.root.kind, ComponentKind::Trivial);
        assert!(is_structured(&tree));
    }

    #[test]
    fn nstar_is_rigid() {
        let tree = decompose(&load(include_str!("../corpus/nstar.pnet"))).unwrap();
        assert!(tree.wrapped);
        assert_eq!(tree.root.kind, ComponentKind::Rigid);
        assert_eq!(tree.root.children.len(), 5);
        assert!(!tree.is_structured());
        assert!(tree.depth_of.values().all(|&d| d == 1));
    }

    #[test]
    fn disconnected_and_empty() {
        assert!(matches!(
            decompose(&load("place a\nplace b\n")),
            Err(Error::DisconnectedNet)
        ));
        assert!(matches!(decompose(&load("")), Err(Error::EmptyNet)));
        assert!(matches!(
            decompose(&load("place a *\ntrans t\nplace b\ntrans u\narc a t\narc b u\n")),
            Err(Error::DisconnectedNet)
        ));
    }

    #[test]
    fn simplification_restores_nstar() {
        let expanded = load(include_str!("../corpus/nstar_expanded.pnet"));
        let tree = decompose(&expanded).unwrap();
        let (simple, subs) = simplify(&expanded, &tree).unwrap();
        assert_eq!(subs.len(), 1);
        let (id, sub) = subs.iter().next().unwrap();
        assert_eq!(sub.first, BTreeSet::from(["T_e1".to_string()]));
        assert_eq!(sub.last, BTreeSet::from(["T_e2".to_string()]));
        let nstar = load(include_str!("../corpus/nstar.pnet"));
        let mut renamed: Vec<(String, String)> = simple
            .net
            .arcs()
            .iter()
            .map(|(a, b)| {
                let r = |x: &String| if x == id { "T_e".to_string() } else { x.clone() };
                (r(a), r(b))
            })
            .collect();
        renamed.sort();
        let want: Vec<(String, String)> = nstar.net.arcs().iter().cloned().collect();
        assert_eq!(renamed, want);

        let inner = BTreeMap::from([(id.clone(), tar_set(&sub.system, 1000).unwrap())]);
        let got = expand_tars(&tar_set(&simple, 1000).unwrap(), &subs, &inner);
        assert_eq!(got, tar_set(&expanded, 1000).unwrap());
    }

    #[test]
    fn structured_net_is_left_alone() {
        let system = load(include_str!("../corpus/n1.pnet"));
        let tree = decompose(&system).unwrap();
        let (simple, subs) = simplify(&system, &tree).unwrap();
        assert!(subs.is_empty());
        assert_eq!(simple, system);
    }

    #[test]
    fn rigid_with_two_bonds() {
        // p1 -(b1|b2)-> p2 and p2 -(d1|d2)-> p3 are bonds inside an
        // unstructured region p1..o.
        let system = load(
            "place p1 *\nplace p2\nplace p3\nplace o\n\
             trans b1\ntrans b2\ntrans c\ntrans d1\ntrans d2\ntrans f\ntrans g\ntrans z\n\
             arc p1 b1\narc p1 b2\narc b1 p2\narc b2 p2\n\
             arc p1 c\narc c p3\narc p2 d1\narc p2 d2\narc d1 p3\narc d2 p3\n\
             arc p2 f\narc f o\narc p3 g\narc g o\narc o z\n",
        );
        assert_eq!(system.net.node_count(), 12);
        let tree = decompose(&system).unwrap();
        assert!(!tree.is_structured());
        let (simple, subs) = simplify(&system, &tree).unwrap();
        assert_eq!(subs.len(), 2);
        let inner: BTreeMap<String, BTreeSet<Tar>> = subs
            .iter()
            .map(|(k, s)| (k.clone(), tar_set(&s.system, 1000).unwrap()))
            .collect();
        let got = expand_tars(&tar_set(&simple, DEFAULT_STATE_BOUND).unwrap(), &subs, &inner);
        assert_eq!(got, tar_set(&system, DEFAULT_STATE_BOUND).unwrap());
    }
}
