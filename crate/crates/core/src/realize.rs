//! Sentence planning and surface realization.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{DNode, DSynT, Dependency, Lexicon, Number, Rdt, Tense, Voice, WordClass};
use crate::paths::{BehaviorPath, Linked, PathKind, PrunedPath, Segment};
use crate::petri::{Diagnosis, Marking, NetSystem, PetriNet, Tar};
use crate::rpst::Substitution;
use crate::unfold::Cfp;

const BUNDLED_TEMPLATES: &str = include_str!("../data/templates.toml");

pub const DEFAULT_MAX_PARAGRAPH_WORDS: usize = 75;
const CONNECTIVES: [&str; 3] = ["Then", "Subsequently", "Afterwards"];
const SERIES: &str = "the series of activities";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GatewayType {
    PlaceSplit,
    TransitionSplit,
    PlaceJoin,
    TransitionJoin,
    LoopEntry,
    LoopBack,
    Start,
    End,
    Deadlock,
    DeadTransition,
    UnsymmetricBond,
    RigidIntro,
    MainBranchIntro,
    LoopIntro,
}

impl GatewayType {
    pub const ALL: [GatewayType; 14] = [
        GatewayType::PlaceSplit,
        GatewayType::TransitionSplit,
        GatewayType::PlaceJoin,
        GatewayType::TransitionJoin,
        GatewayType::LoopEntry,
        GatewayType::LoopBack,
        GatewayType::Start,
        GatewayType::End,
        GatewayType::Deadlock,
        GatewayType::DeadTransition,
        GatewayType::UnsymmetricBond,
        GatewayType::RigidIntro,
        GatewayType::MainBranchIntro,
        GatewayType::LoopIntro,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSelector {
    Yes,
    No,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountSelector {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "many")]
    Many,
    #[serde(rename = "any")]
    Any,
}

impl CountSelector {
    fn bucket(count: usize) -> CountSelector {
        match count {
            0 | 1 => CountSelector::One,
            2 => CountSelector::Two,
            _ => CountSelector::Many,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub id: String,
    pub gateway: GatewayType,
    pub label: LabelSelector,
    pub count: CountSelector,
    pub text: String,
}

impl Template {
    fn matches(&self, sel: &Selector) -> Option<u8> {
        if self.gateway != sel.gateway {
            return None;
        }
        let label = match self.label {
            LabelSelector::Any => 0,
            LabelSelector::Yes if sel.has_label => 1,
            LabelSelector::No if !sel.has_label => 1,
            _ => return None,
        };
        let count = match self.count {
            CountSelector::Any => 0,
            c if c == CountSelector::bucket(sel.count) => 1,
            _ => return None,
        };
        Some(label + count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selector {
    pub gateway: GatewayType,
    pub has_label: bool,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    templates: Vec<Template>,
}

#[derive(Deserialize)]
struct CatalogFile {
    template: Vec<Template>,
}

impl Catalog {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TEMPLATES).expect("bundled catalog is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses a catalog and checks that every selector resolves to exactly
    /// one most specific template.
    pub fn parse(text: &str) -> Result<Self> {
        let file: CatalogFile = toml::from_str(text).map_err(|e| Error::Catalog(e.to_string()))?;
        let mut ids = BTreeSet::new();
        for t in &file.template {
            if !ids.insert(t.id.clone()) {
                return Err(Error::Catalog(format!("duplicate template id {}", t.id)));
            }
        }
        let catalog = Catalog { templates: file.template };
        for sel in Self::selector_space() {
            select_template(&catalog, &sel)?;
        }
        Ok(catalog)
    }

    /// Every gateway type with and without a label, for one, two and many
    /// branches.
    pub fn selector_space() -> Vec<Selector> {
        let mut out = Vec::new();
        for gateway in GatewayType::ALL {
            for has_label in [false, true] {
                for count in [1, 2, 3] {
                    out.push(Selector { gateway, has_label, count });
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }
}

pub fn select_template<'a>(catalog: &'a Catalog, sel: &Selector) -> Result<&'a Template> {
    let mut best: Vec<(u8, &Template)> = catalog
        .templates
        .iter()
        .filter_map(|t| t.matches(sel).map(|s| (s, t)))
        .collect();
    best.sort_by_key(|b| std::cmp::Reverse(b.0));
    let describe = || format!("{:?} label={} count={}", sel.gateway, sel.has_label, sel.count);
    match best.as_slice() {
        [] => Err(Error::NoTemplate(describe())),
        [(s, t), rest @ ..] => {
            if rest.first().is_some_and(|(r, _)| r == s) {
                Err(Error::Catalog(format!("ambiguous templates for {}", describe())))
            } else {
                Ok(t)
            }
        }
    }
}

pub fn number_word(n: usize) -> String {
    const WORDS: [&str; 13] = [
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    ];
    WORDS.get(n).map(|w| w.to_string()).unwrap_or_else(|| n.to_string())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Slots {
    pub count: usize,
    pub label: Option<String>,
    pub activity: Option<String>,
    pub subject: Option<String>,
}

pub fn fill(template: &Template, slots: &Slots) -> String {
    template
        .text
        .replace("{count}", &number_word(slots.count))
        .replace("{label}", slots.label.as_deref().unwrap_or(""))
        .replace("{activity}", slots.activity.as_deref().unwrap_or(""))
        .replace("{subject}", slots.subject.as_deref().unwrap_or(""))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SentenceKind {
    /// Describes one or more activities.
    Activity,
    /// Refers back to an activity described earlier.
    Continue,
    /// Stands for a simplified component whose text follows one level deeper.
    Placeholder,
    Template,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SentencePlan {
    pub kind: SentenceKind,
    pub dsynt: Option<DSynT>,
    pub template: Option<String>,
    pub slots_activity: Option<String>,
    pub slots_subject: Option<String>,
    pub slots_label: Option<String>,
    pub slots_count: usize,
    /// Gerund phrase of the activity this sentence follows.
    pub anchor: Option<String>,
    pub modal: bool,
    /// Refer to the role with a pronoun.
    pub pronoun: bool,
    pub depth: usize,
    /// Sentences of different groups never share a paragraph.
    pub group: usize,
    pub ends_paragraph: bool,
    pub source: Option<String>,
    pub activities: Vec<String>,
    pub path: Option<String>,
    pub position: Option<usize>,
    pub tars: BTreeSet<Tar>,
}

impl SentencePlan {
    fn template(id: &str, slots: &Slots, depth: usize, group: usize) -> Self {
        SentencePlan {
            kind: SentenceKind::Template,
            dsynt: None,
            template: Some(id.to_string()),
            slots_activity: slots.activity.clone(),
            slots_subject: slots.subject.clone(),
            slots_label: slots.label.clone(),
            slots_count: slots.count,
            anchor: None,
            modal: false,
            pronoun: false,
            depth,
            group,
            ends_paragraph: false,
            source: None,
            activities: Vec::new(),
            path: None,
            position: None,
            tars: BTreeSet::new(),
        }
    }

    /// Role performing the sentence, used for pronouns.
    pub fn role(&self) -> Option<&str> {
        match self.kind {
            SentenceKind::Activity => self.dsynt.as_ref().and_then(|d| d.role()),
            SentenceKind::Continue => self.slots_subject.as_deref(),
            _ => None,
        }
    }
}

/// A model ready for planning: the simplified system with its prefix,
/// segments, paths and RDT, plus the same for every substitution.
pub struct PlanInput<'a> {
    pub system: &'a NetSystem,
    pub cfp: &'a Cfp,
    pub segments: &'a [Segment],
    pub paths: &'a [BehaviorPath],
    pub pruned: &'a [PrunedPath],
    pub rdt: &'a Rdt,
    pub diagnosis: Option<&'a Diagnosis>,
    pub substitutions: BTreeMap<String, (&'a Substitution, PlanInput<'a>)>,
}

struct Planner<'a> {
    catalog: &'a Catalog,
    md: &'a BTreeMap<String, usize>,
    out: Vec<SentencePlan>,
    groups: usize,
    records: Vec<(String, Provenance)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StepRole {
    Activity,
    Silent,
    Placeholder,
    Continue,
    Anchor,
    Skip,
}

enum Block {
    Step(usize),
    Parallel(Vec<Vec<Block>>),
}

/// `prec[a][b]`: step a precedes step b.
fn precedence(chain: &Linked) -> Vec<Vec<bool>> {
    let n = chain.steps.len();
    let mut prec = vec![vec![false; n]; n];
    for b in 0..n {
        for &a in &chain.steps[b].after {
            prec[a][b] = true;
            for row in prec.iter_mut() {
                if row[a] {
                    row[b] = true;
                }
            }
        }
    }
    prec
}

fn blocks(steps: &[usize], prec: &[Vec<bool>]) -> Vec<Block> {
    if steps.len() <= 1 {
        return steps.iter().map(|&s| Block::Step(s)).collect();
    }
    let comparable = |a: usize, b: usize| prec[a][b] || prec[b][a];
    let is_cut = |k: usize| steps.iter().all(|&o| o == k || comparable(k, o));
    let mut out = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    let flush = |run: &mut Vec<usize>, out: &mut Vec<Block>| {
        if run.is_empty() {
            return;
        }
        let mut comp: Vec<usize> = (0..run.len()).collect();
        for i in 0..run.len() {
            for j in 0..run.len() {
                if i != j && comparable(run[i], run[j]) {
                    let (a, b) = (comp[i], comp[j]);
                    for c in comp.iter_mut() {
                        if *c == b {
                            *c = a;
                        }
                    }
                }
            }
        }
        let mut branches: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &k) in run.iter().enumerate() {
            branches.entry(comp[i]).or_default().push(k);
        }
        let mut branches: Vec<Vec<usize>> = branches.into_values().collect();
        branches.sort_by_key(|b| b[0]);
        if branches.len() >= 2 {
            out.push(Block::Parallel(branches.iter().map(|b| blocks(b, prec)).collect()));
        } else if run.len() == steps.len() {
            out.extend(run.iter().map(|&s| Block::Step(s)));
        } else {
            out.extend(blocks(run, prec));
        }
        run.clear();
    };
    for &k in steps {
        if is_cut(k) {
            flush(&mut run, &mut out);
            out.push(Block::Step(k));
        } else {
            run.push(k);
        }
    }
    flush(&mut run, &mut out);
    out
}

fn block_steps(b: &[Block], out: &mut Vec<usize>) {
    for x in b {
        match x {
            Block::Step(k) => out.push(*k),
            Block::Parallel(branches) => branches.iter().for_each(|br| block_steps(br, out)),
        }
    }
}

/// Serializable trace of what a text covers, enough to rebuild the model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub initial: Marking,
    pub finals: Vec<String>,
    pub paths: Vec<PathRecord>,
    pub substitutions: BTreeMap<String, SubstitutionRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRecord {
    pub id: String,
    pub kind: PathKind,
    pub sequence: Vec<String>,
    pub kept: Vec<Tar>,
    pub consumes: Vec<(String, String)>,
    pub produces: Vec<(String, String)>,
    pub labels: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionRecord {
    pub entry: String,
    pub exit: String,
    pub provenance: Provenance,
}

impl<'a> Planner<'a> {
    fn group(&mut self) -> usize {
        self.groups += 1;
        self.groups
    }

    fn push_template(&mut self, gateway: GatewayType, slots: Slots, depth: usize) -> Result<()> {
        let sel = Selector { gateway, has_label: slots.label.is_some(), count: slots.count };
        let t = select_template(self.catalog, &sel)?;
        let group = self.group();
        self.out.push(SentencePlan::template(&t.id, &slots, depth, group));
        Ok(())
    }

    fn plan_model(&mut self, input: &PlanInput, base: usize, prefix: &str, top: bool) -> Result<Provenance> {
        let mut prov = Provenance {
            initial: input.system.initial.clone(),
            finals: input.system.finals.iter().cloned().collect(),
            ..Provenance::default()
        };
        let kept: BTreeMap<usize, &BTreeSet<Tar>> = input.pruned.iter().map(|p| (p.path, &p.kept)).collect();
        let empty = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut chosen = Vec::new();
        for (i, p) in input.paths.iter().enumerate() {
            let k = kept.get(&i).copied().unwrap_or(&empty);
            let fresh = p.sequence.iter().any(|t| !seen.contains(t));
            if !k.is_empty() || fresh {
                seen.extend(p.sequence.iter().cloned());
                chosen.push((i, k));
            }
        }
        let mains: Vec<_> = chosen.iter().filter(|(i, _)| input.paths[*i].kind == PathKind::Main).collect();
        let loops: Vec<_> = chosen.iter().filter(|(i, _)| input.paths[*i].kind == PathKind::Loop).collect();
        let opener = mains.len() > 1 || !loops.is_empty();
        let mut described = BTreeSet::new();
        if top && !mains.is_empty() && !opener {
            self.push_template(GatewayType::Start, Slots::default(), base)?;
        }
        let inner = if opener { base + 1 } else { base };
        if opener && !mains.is_empty() {
            self.push_template(GatewayType::MainBranchIntro, Slots { count: mains.len(), ..Slots::default() }, base)?;
        }
        for (i, k) in &mains {
            let rec = self.plan_path(input, *i, k, inner, prefix, &mut described)?;
            prov.paths.push(rec);
        }
        if !loops.is_empty() {
            self.push_template(GatewayType::LoopIntro, Slots { count: loops.len(), ..Slots::default() }, base)?;
            for (i, k) in &loops {
                let rec = self.plan_path(input, *i, k, base + 1, prefix, &mut described)?;
                prov.paths.push(rec);
            }
        }
        if top {
            if let Some(diag) = input.diagnosis {
                for t in &diag.dead_transitions {
                    let label = input.system.net.label(t).map(str::to_string);
                    let slots = Slots { count: 1, activity: Some(t.clone()), label, ..Slots::default() };
                    self.push_template(GatewayType::DeadTransition, slots, base)?;
                }
                for m in &diag.deadlocks {
                    let places: Vec<&str> = m.places().collect();
                    let slots = Slots { count: 1, label: Some(join_and(&places)), ..Slots::default() };
                    self.push_template(GatewayType::Deadlock, slots, base)?;
                }
            }
            if !mains.is_empty() {
                self.push_template(GatewayType::End, Slots::default(), base)?;
            }
        }
        for (id, rec) in self.records.drain(..).collect::<Vec<_>>() {
            if let Some((sub, _)) = input.substitutions.get(&id) {
                prov.substitutions.insert(
                    id,
                    SubstitutionRecord { entry: sub.component.entry.clone(), exit: sub.component.exit.clone(), provenance: rec },
                );
            }
        }
        Ok(prov)
    }

    fn gerund(input: &PlanInput, t: &str) -> Option<String> {
        if input.substitutions.contains_key(t) {
            return Some(SERIES.to_string());
        }
        input.rdt.labels.get(t).map(|l| l.gerund_phrase.clone())
    }

    /// Rewrites TARs that mention a substitution in terms of its first and
    /// last transitions.
    fn expand(input: &PlanInput, tars: &BTreeSet<Tar>) -> BTreeSet<Tar> {
        let heads = |t: &str| -> Vec<String> {
            match input.substitutions.get(t) {
                Some((s, _)) => s.first.iter().cloned().collect(),
                None => vec![t.to_string()],
            }
        };
        let tails = |t: &str| -> Vec<String> {
            match input.substitutions.get(t) {
                Some((s, _)) => s.last.iter().cloned().collect(),
                None => vec![t.to_string()],
            }
        };
        let mut out = BTreeSet::new();
        for tar in tars {
            for a in tails(&tar.first) {
                for b in heads(&tar.second) {
                    out.insert(Tar::new(a.clone(), b));
                }
            }
        }
        out
    }

    fn plan_path(
        &mut self,
        input: &PlanInput,
        index: usize,
        kept: &BTreeSet<Tar>,
        depth: usize,
        prefix: &str,
        described: &mut BTreeSet<String>,
    ) -> Result<PathRecord> {
        let path = &input.paths[index];
        let cfp = input.cfp;
        let n = path.chain.steps.len();
        let mut chain = path.chain.clone();
        if path.kind == PathKind::Loop {
            for &s in &path.chain.segments {
                match chain.link(cfp, input.segments, s) {
                    Ok(next) => chain = next,
                    Err(_) => break,
                }
            }
        }
        let origins: Vec<&str> = chain.steps.iter().map(|s| cfp.events[s.event].origin.as_str()).collect();
        let prec = precedence(&chain);
        let len = chain.steps.len();
        let adjacent = |i: usize, j: usize| {
            i != j && !prec[j][i] && !(0..len).any(|c| c != i && c != j && prec[i][c] && prec[c][j])
        };
        let silent = |t: &str| input.rdt.placeholders.contains(t) && !input.substitutions.contains_key(t);
        let fresh: BTreeSet<&str> = path
            .sequence
            .iter()
            .map(String::as_str)
            .filter(|t| !described.contains(*t) && !silent(t))
            .collect();

        // Smallest window of the (doubled, for loops) chain covering every
        // kept TAR and every activity not described yet.
        let starts = if path.kind == PathKind::Loop { n } else { 1 };
        let mut best: Option<Window> = None;
        for s in 0..starts {
            let mut pairs = BTreeMap::new();
            let mut lo = usize::MAX;
            let mut hi = 0;
            let mut ok = true;
            for tar in kept {
                let found = (s..len)
                    .flat_map(|i| (i + 1..len).map(move |j| (i, j)))
                    .filter(|&(i, j)| origins[i] == tar.first && origins[j] == tar.second && adjacent(i, j))
                    .min_by_key(|&(i, j)| (j, std::cmp::Reverse(i)));
                match found {
                    Some((i, j)) => {
                        lo = lo.min(i);
                        hi = hi.max(j);
                        pairs.insert(tar.clone(), (i, j));
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            for t in &fresh {
                match (s..len).find(|&k| origins[k] == *t) {
                    Some(k) => {
                        lo = lo.min(k);
                        hi = hi.max(k);
                    }
                    None => ok = false,
                }
            }
            if !ok || lo == usize::MAX {
                continue;
            }
            let better = match &best {
                None => true,
                Some((blo, bhi, _)) => (hi - lo, lo) < (bhi - blo, *blo),
            };
            if better {
                best = Some((lo, hi, pairs));
            }
        }
        let (lo, hi, pairs) = match best {
            Some(w) => w,
            None => (0, n.saturating_sub(1), BTreeMap::new()),
        };
        let mut targets: BTreeMap<usize, BTreeSet<Tar>> = BTreeMap::new();
        let mut firsts = BTreeSet::new();
        for (tar, &(i, j)) in &pairs {
            targets.entry(j).or_default().insert(tar.clone());
            firsts.insert(i);
        }
        let mut orphans: BTreeSet<Tar> = kept.iter().filter(|t| !pairs.contains_key(*t)).cloned().collect();

        let window: Vec<usize> = (lo..=hi.min(len.saturating_sub(1))).collect();
        let mut roles = BTreeMap::new();
        for &k in &window {
            let t = origins[k];
            let role = if !described.contains(t) {
                described.insert(t.to_string());
                if input.substitutions.contains_key(t) {
                    StepRole::Placeholder
                } else if silent(t) {
                    StepRole::Silent
                } else {
                    StepRole::Activity
                }
            } else if targets.contains_key(&k) {
                StepRole::Continue
            } else if firsts.contains(&k) {
                StepRole::Anchor
            } else {
                StepRole::Skip
            };
            roles.insert(k, role);
        }

        let id = format!("{prefix}{}", path.id);
        let group = self.group();
        let structure = blocks(&window, &prec);
        let mut state = EmitState {
            id: id.clone(),
            anchor: None,
            pending: BTreeSet::new(),
            first: self.out.len(),
            suppress: None,
            group,
        };
        self.emit_blocks(input, &structure, depth, &origins, &roles, &targets, &mut state, prefix)?;
        orphans.extend(std::mem::take(&mut state.pending));
        if !orphans.is_empty() {
            let expanded = Self::expand(input, &orphans);
            let target = if self.out.len() > state.first {
                self.out[state.first..].iter_mut().rev().find(|s| s.kind != SentenceKind::Template)
            } else {
                None
            };
            match target {
                Some(s) => s.tars.extend(expanded),
                None => {
                    if let Some(s) = self.out.last_mut() {
                        s.tars.extend(expanded);
                    }
                }
            }
        }

        let mut consumes = BTreeSet::new();
        let mut produces = BTreeSet::new();
        let mut labels = BTreeMap::new();
        for step in &path.chain.steps {
            let ev = &cfp.events[step.event];
            for &b in &ev.preset {
                consumes.insert((cfp.conditions[b].origin.clone(), ev.origin.clone()));
            }
            for &b in &ev.postset {
                produces.insert((ev.origin.clone(), cfp.conditions[b].origin.clone()));
            }
            if let Some(l) = input.system.net.label(&ev.origin) {
                labels.insert(ev.origin.clone(), l.to_string());
            }
        }
        Ok(PathRecord {
            id,
            kind: path.kind,
            sequence: path.sequence.clone(),
            kept: kept.iter().cloned().collect(),
            consumes: consumes.into_iter().collect(),
            produces: produces.into_iter().collect(),
            labels,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn emit_blocks(
        &mut self,
        input: &PlanInput,
        structure: &[Block],
        depth: usize,
        origins: &[&str],
        roles: &BTreeMap<usize, StepRole>,
        targets: &BTreeMap<usize, BTreeSet<Tar>>,
        state: &mut EmitState,
        prefix: &str,
    ) -> Result<()> {
        for (bi, block) in structure.iter().enumerate() {
            match block {
                Block::Step(k) => {
                    let next = structure.get(bi + 1).and_then(|b| match b {
                        Block::Step(x) => Some(*x),
                        Block::Parallel(_) => None,
                    });
                    self.emit_step(input, *k, next, depth, origins, roles, targets, state, prefix)?;
                }
                Block::Parallel(branches) => {
                    let speaking = branches
                        .iter()
                        .filter(|br| {
                            let mut ks = Vec::new();
                            block_steps(br, &mut ks);
                            ks.iter().any(|k| {
                                matches!(
                                    roles.get(k),
                                    Some(StepRole::Activity | StepRole::Continue | StepRole::Placeholder)
                                )
                            })
                        })
                        .count();
                    if speaking < 2 {
                        for br in branches {
                            self.emit_blocks(input, br, depth, origins, roles, targets, state, prefix)?;
                        }
                        continue;
                    }
                    let slots = Slots { count: branches.len(), ..Slots::default() };
                    self.push_template(GatewayType::TransitionSplit, slots.clone(), depth)?;
                    if let Some(a) = state.anchor.take() {
                        if let Some(last) = self.out.last_mut() {
                            last.anchor = Some(a);
                        }
                    }
                    for br in branches {
                        state.group = self.group();
                        self.emit_blocks(input, br, depth + 1, origins, roles, targets, state, prefix)?;
                    }
                    self.push_template(GatewayType::TransitionJoin, slots, depth)?;
                    state.group = self.group();
                }
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn emit_step(
        &mut self,
        input: &PlanInput,
        k: usize,
        next: Option<usize>,
        depth: usize,
        origins: &[&str],
        roles: &BTreeMap<usize, StepRole>,
        targets: &BTreeMap<usize, BTreeSet<Tar>>,
        state: &mut EmitState,
        prefix: &str,
    ) -> Result<()> {
        let t = origins[k];
        let role = roles.get(&k).copied().unwrap_or(StepRole::Skip);
        let mut tars = targets.get(&k).cloned().unwrap_or_default();
        let md = self.md.get(t).copied().unwrap_or(0);
        let base = |kind: SentenceKind, group: usize| SentencePlan {
            kind,
            dsynt: None,
            template: None,
            slots_activity: None,
            slots_subject: None,
            slots_label: None,
            slots_count: 0,
            anchor: None,
            modal: false,
            pronoun: false,
            depth,
            group,
            ends_paragraph: false,
            source: Some(t.to_string()),
            activities: Vec::new(),
            path: Some(state.id.clone()),
            position: Some(k),
            tars: BTreeSet::new(),
        };
        match role {
            StepRole::Skip => {}
            StepRole::Anchor => state.anchor = Self::gerund(input, t),
            StepRole::Silent => state.pending.extend(tars),
            StepRole::Activity => {
                tars.extend(std::mem::take(&mut state.pending));
                let mut s = base(SentenceKind::Activity, state.group);
                s.dsynt = input.rdt.dsynts.get(t).cloned();
                s.depth = depth.max(md);
                s.anchor = state.anchor.take();
                s.modal = s.anchor.is_some();
                s.activities = vec![t.to_string()];
                s.tars = Self::expand(input, &tars);
                self.out.push(s);
            }
            StepRole::Continue => {
                if state.suppress == Some(k) {
                    state.suppress = None;
                    if let Some(p) = self.out.iter_mut().rev().find(|s| s.kind == SentenceKind::Placeholder) {
                        p.tars.extend(Self::expand(input, &tars));
                    }
                    return Ok(());
                }
                tars.extend(std::mem::take(&mut state.pending));
                let template = select_template(
                    self.catalog,
                    &Selector { gateway: GatewayType::LoopBack, has_label: false, count: 1 },
                )?;
                let mut s = base(SentenceKind::Continue, state.group);
                s.template = Some(template.id.clone());
                s.slots_activity = Self::gerund(input, t);
                s.slots_subject = input.rdt.labels.get(t).and_then(|l| l.role.clone());
                s.depth = depth.max(md);
                s.anchor = state.anchor.take();
                s.tars = Self::expand(input, &tars);
                self.out.push(s);
            }
            StepRole::Placeholder => {
                tars.extend(std::mem::take(&mut state.pending));
                let before = next
                    .filter(|x| origins.get(*x).is_some_and(|o| !input.rdt.placeholders.contains(*o)))
                    .or_else(|| {
                        origins
                            .iter()
                            .enumerate()
                            .skip(k + 1)
                            .find(|(_, o)| !input.rdt.placeholders.contains(**o))
                            .map(|(i, _)| i)
                    });
                let activity = before.and_then(|b| Self::gerund(input, origins[b]));
                let sel = Selector { gateway: GatewayType::RigidIntro, has_label: activity.is_some(), count: 1 };
                let template = select_template(self.catalog, &sel)?;
                let mut s = base(SentenceKind::Placeholder, state.group);
                s.template = Some(template.id.clone());
                s.slots_activity = activity;
                s.anchor = state.anchor.take();
                s.ends_paragraph = true;
                s.tars = Self::expand(input, &tars);
                self.out.push(s);
                if let Some(b) = before.filter(|b| Some(*b) == next && roles.get(b) == Some(&StepRole::Continue)) {
                    state.suppress = Some(b);
                }
                let (_, sub) = &input.substitutions[t];
                let sub_prefix = format!("{prefix}{t}/");
                let rec = self.plan_model(sub, depth + 1, &sub_prefix, false)?;
                self.records.push((t.to_string(), rec));
                state.group = self.group();
            }
        }
        Ok(())
    }
}

/// First and last step of a window and the step pair chosen for each TAR.
type Window = (usize, usize, BTreeMap<Tar, (usize, usize)>);

struct EmitState {
    id: String,
    anchor: Option<String>,
    pending: BTreeSet<Tar>,
    first: usize,
    suppress: Option<usize>,
    group: usize,
}

fn join_and(items: &[&str]) -> String {
    match items {
        [] => String::new(),
        [one] => one.to_string(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

/// Plans the sentences of a model. Activity sentences are indented at least
/// as deep as the modeling depth `md` of their activity.
pub fn plan_sentences(
    input: &PlanInput,
    md: &BTreeMap<String, usize>,
    catalog: &Catalog,
) -> Result<(Vec<SentencePlan>, Provenance)> {
    let mut planner = Planner { catalog, md, out: Vec::new(), groups: 0, records: Vec::new() };
    let prov = planner.plan_model(input, 0, "", true)?;
    Ok((planner.out, prov))
}

/// Fills in default grammatical features and rejects empty lexemes.
pub fn check_grammar_meta(mut plan: Vec<SentencePlan>) -> Result<Vec<SentencePlan>> {
    fn complete(n: &mut DNode, path: String) -> Result<()> {
        if n.lexeme.trim().is_empty() {
            return Err(Error::IncompleteDsynt(path));
        }
        match n.class {
            WordClass::Verb => {
                n.meta.tense.get_or_insert(Tense::Present);
                n.meta.person.get_or_insert(3);
                let has_subject = n.children.iter().any(|(d, _)| *d == Dependency::I);
                if !has_subject {
                    n.meta.voice = Some(Voice::Passive);
                } else {
                    n.meta.voice.get_or_insert(Voice::Active);
                }
            }
            WordClass::Noun => {
                n.meta.number.get_or_insert(Number::Singular);
                n.meta.definite.get_or_insert(true);
            }
            WordClass::Phrase => {}
        }
        for (i, (_, c)) in n.children.iter_mut().enumerate() {
            complete(c, format!("{path}/{i}"))?;
        }
        Ok(())
    }
    for (i, s) in plan.iter_mut().enumerate() {
        if let Some(d) = &mut s.dsynt {
            let root = d.root.lexeme.clone();
            complete(&mut d.root, format!("sentence {i}/{root}"))?;
        }
    }
    Ok(plan)
}

fn mergeable<'a>(a: &'a SentencePlan, b: &'a SentencePlan) -> Option<(&'a DSynT, &'a DSynT)> {
    if a.kind != SentenceKind::Activity
        || b.kind != SentenceKind::Activity
        || a.group != b.group
        || a.depth != b.depth
        || b.anchor.is_some()
        || a.modal
        || b.modal
        || a.activities.len() > 1
    {
        return None;
    }
    let (da, db) = (a.dsynt.as_ref()?, b.dsynt.as_ref()?);
    if da.role().is_none() || da.role() != db.role() || da.root.class != WordClass::Verb {
        return None;
    }
    let plain = |d: &DSynT| d.root.attrs().next().is_none();
    if !plain(da) || !plain(db) {
        return None;
    }
    Some((da, db))
}

/// Merges adjacent sentences sharing role and action (objects coordinated)
/// or role and objects (actions coordinated), then replaces a repeated role
/// by a pronoun in every other sentence of a run.
pub fn aggregate(plan: Vec<SentencePlan>) -> Vec<SentencePlan> {
    let mut out: Vec<SentencePlan> = Vec::new();
    let mut merged_last = false;
    for s in plan {
        if let Some(prev) = out.last() {
            if !merged_last {
                if let Some((da, db)) = mergeable(prev, &s) {
                    let same_action = da.action() == db.action()
                        && !da.objects().is_empty()
                        && !db.objects().is_empty()
                        && da.objects() != db.objects();
                    let same_objects = da.action() != db.action() && !da.objects().is_empty() && da.objects() == db.objects();
                    if same_action || same_objects {
                        let mut merged = da.clone();
                        if same_action {
                            let extra: Vec<DNode> = std::iter::once(db.root.child(Dependency::II).cloned())
                                .flatten()
                                .flat_map(|ii| {
                                    let mut v = vec![DNode { children: Vec::new(), ..ii.clone() }];
                                    v.extend(ii.children.iter().filter(|(d, _)| *d == Dependency::Attr).map(|(_, n)| n.clone()));
                                    v
                                })
                                .collect();
                            if let Some(ii) = merged.root.child_mut(Dependency::II) {
                                for e in extra {
                                    ii.children.push((Dependency::Attr, e));
                                }
                            }
                        } else {
                            let mut verb = DNode::new(db.root.lexeme.clone(), WordClass::Verb);
                            verb.meta = db.root.meta.clone();
                            merged.root.children.push((Dependency::Attr, verb));
                        }
                        let prev = out.last_mut().expect("checked above");
                        prev.dsynt = Some(merged);
                        prev.activities.extend(s.activities.iter().cloned());
                        prev.tars.extend(s.tars.iter().cloned());
                        merged_last = true;
                        continue;
                    }
                }
            }
        }
        merged_last = false;
        out.push(s);
    }
    for i in 1..out.len() {
        let (before, rest) = out.split_at_mut(i);
        let prev = &before[i - 1];
        let cur = &mut rest[0];
        let same = cur.group == prev.group
            && cur.depth == prev.depth
            && cur.anchor.is_none()
            && !prev.pronoun
            && prev.role().is_some()
            && prev.role() == cur.role();
        if same {
            cur.pronoun = true;
            if let Some(d) = &mut cur.dsynt {
                if let Some(subject) = d.root.child_mut(Dependency::I) {
                    subject.meta.pronoun = true;
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizeConfig {
    pub max_paragraph_words: usize,
    pub pronoun: String,
}

impl Default for RealizeConfig {
    fn default() -> Self {
        RealizeConfig { max_paragraph_words: DEFAULT_MAX_PARAGRAPH_WORDS, pronoun: "he".to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizedSentence {
    pub text: String,
    pub depth: usize,
    pub kind: SentenceKind,
    pub source: Option<String>,
    pub activities: Vec<String>,
    pub template: Option<String>,
    pub path: Option<String>,
    pub position: Option<usize>,
    pub tars: Vec<Tar>,
    pub paragraph: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub depth: usize,
    pub sentences: Vec<usize>,
    pub words: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realized {
    pub sentences: Vec<RealizedSentence>,
    pub paragraphs: Vec<Paragraph>,
    pub markdown: String,
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
        None => String::new(),
    }
}

fn decapitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) if !s.starts_with("DNA") => f.to_lowercase().collect::<String>() + c.as_str(),
        Some(f) => f.to_string() + c.as_str(),
        None => String::new(),
    }
}

fn is_acronym(w: &str) -> bool {
    w.chars().filter(|c| c.is_alphabetic()).count() >= 2 && w.chars().all(|c| !c.is_lowercase())
}

fn noun_phrase(lex: &Lexicon, n: &DNode) -> String {
    let mut words: Vec<String> = n.lexeme.split_whitespace().map(str::to_string).collect();
    if n.meta.number == Some(Number::Plural) {
        if let Some(last) = words.last_mut() {
            if !is_acronym(last) {
                *last = lex.plural(last);
            }
        }
    }
    let body = words.join(" ");
    if n.meta.definite == Some(false) {
        body
    } else {
        format!("the {body}")
    }
}

fn coordinated_objects(lex: &Lexicon, ii: &DNode) -> (String, bool) {
    let mut parts = vec![noun_phrase(lex, ii)];
    let mut plural = ii.meta.number == Some(Number::Plural) && !lex.is_mass(&ii.lexeme);
    for c in ii.attrs().filter(|c| c.class == WordClass::Noun) {
        parts.push(noun_phrase(lex, c));
        plural = true;
    }
    let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
    (join_and(&refs), plural)
}

/// Realizes the clause of a deep-syntactic tree, without final punctuation.
pub fn realize_clause(lex: &Lexicon, d: &DSynT, modal: bool, pronoun: &str) -> String {
    let root = &d.root;
    if root.class != WordClass::Verb {
        return format!("{} is executed", root.lexeme);
    }
    let mut verbs = vec![root.lexeme.as_str()];
    verbs.extend(root.attrs().filter(|n| n.class == WordClass::Verb).map(|n| n.lexeme.as_str()));
    let phrases: Vec<&str> = root.attrs().filter(|n| n.class == WordClass::Phrase).map(|n| n.lexeme.as_str()).collect();
    let objects = root.child(Dependency::II).map(|ii| coordinated_objects(lex, ii));
    let modal_words = if modal { "can also " } else { "" };
    let mut clause = match (root.meta.voice, root.child(Dependency::I)) {
        (Some(Voice::Active) | None, Some(subject)) => {
            let subj = if subject.meta.pronoun { pronoun.to_string() } else { noun_phrase(lex, subject) };
            let inflected: Vec<String> = verbs
                .iter()
                .map(|v| if modal { v.to_string() } else { lex.third_person(v) })
                .collect();
            let refs: Vec<&str> = inflected.iter().map(String::as_str).collect();
            let mut c = format!("{subj} {modal_words}{}", join_and(&refs));
            if let Some((obj, _)) = &objects {
                c.push(' ');
                c.push_str(obj);
            }
            c
        }
        _ => {
            let participles: Vec<String> = verbs.iter().map(|v| lex.participle(v)).collect();
            let refs: Vec<&str> = participles.iter().map(String::as_str).collect();
            let (subj, plural) = match &objects {
                Some((obj, plural)) => (obj.clone(), *plural),
                None => (lex.gerund(verbs[0]), false),
            };
            let be = match (modal, plural) {
                (true, _) => "can also be",
                (false, true) => "are",
                (false, false) => "is",
            };
            let verb_part = if objects.is_some() { join_and(&refs) } else { "performed".to_string() };
            format!("{subj} {be} {verb_part}")
        }
    };
    for p in phrases {
        clause.push(' ');
        clause.push_str(p);
    }
    clause
}

fn realize_sentence(
    lex: &Lexicon,
    catalog: &Catalog,
    s: &SentencePlan,
    position: usize,
    pronoun_ok: bool,
    cfg: &RealizeConfig,
) -> Result<String> {
    let anchor = match &s.anchor {
        Some(a) => {
            let sel = Selector { gateway: GatewayType::LoopEntry, has_label: false, count: 1 };
            Some(fill(select_template(catalog, &sel)?, &Slots { activity: Some(a.clone()), ..Slots::default() }))
        }
        None => None,
    };
    let lead = |body: String| -> String {
        match (&anchor, position) {
            (Some(a), _) => format!("{a}{}", decapitalize(&body)),
            (None, 0) => body,
            (None, p) => format!("{}, {}", CONNECTIVES[(p - 1) % CONNECTIVES.len()], decapitalize(&body)),
        }
    };
    let template_text = |s: &SentencePlan| -> Result<String> {
        let id = s.template.as_deref().unwrap_or_default();
        let t = catalog
            .templates()
            .iter()
            .find(|t| t.id == id)
            .ok_or_else(|| Error::NoTemplate(id.to_string()))?;
        Ok(fill(
            t,
            &Slots {
                count: s.slots_count,
                label: s.slots_label.clone(),
                activity: s.slots_activity.clone(),
                subject: s.slots_subject.clone(),
            },
        ))
    };
    let text = match s.kind {
        SentenceKind::Template => {
            let body = template_text(s)?;
            match &anchor {
                Some(a) => format!("{a}{}", decapitalize(&body)),
                None => body,
            }
        }
        SentenceKind::Activity => {
            let d = s.dsynt.as_ref().ok_or_else(|| Error::IncompleteDsynt("activity without tree".into()))?;
            let mut d = d.clone();
            if !pronoun_ok {
                if let Some(subject) = d.root.child_mut(Dependency::I) {
                    subject.meta.pronoun = false;
                }
            }
            lead(format!("{}.", realize_clause(lex, &d, s.modal, &cfg.pronoun)))
        }
        SentenceKind::Continue => {
            let subject = match (&s.slots_subject, s.pronoun && pronoun_ok) {
                (Some(_), true) => cfg.pronoun.clone(),
                (Some(r), false) => format!("the {r}"),
                (None, _) => "the process".to_string(),
            };
            let mut c = s.clone();
            c.slots_subject = Some(subject);
            lead(template_text(&c)?)
        }
        SentenceKind::Placeholder => lead(template_text(s)?),
    };
    Ok(capitalize(&text))
}

fn word_count(s: &str) -> usize {
    s.split_whitespace().count()
}

/// Realizes a plan into sentences grouped into paragraphs and renders
/// markdown with one nested bullet per paragraph. A paragraph is closed
/// before a sentence that would push it over the word limit.
pub fn realize_text(plan: &[SentencePlan], lex: &Lexicon, catalog: &Catalog, cfg: &RealizeConfig) -> Result<Realized> {
    let mut out = Realized::default();
    let mut texts: Vec<String> = Vec::new();
    for (i, s) in plan.iter().enumerate() {
        let prev = i.checked_sub(1).map(|p| &plan[p]);
        let continues = match (prev, out.paragraphs.last()) {
            (Some(p), Some(_)) => {
                p.group == s.group
                    && p.depth == s.depth
                    && p.kind != SentenceKind::Template
                    && s.kind != SentenceKind::Template
                    && !p.ends_paragraph
            }
            _ => false,
        };
        let mut text = None;
        if continues {
            let para = out.paragraphs.last().expect("continuing paragraph");
            let same_role = prev.and_then(|p| p.role()).is_some() && prev.and_then(|p| p.role()) == s.role();
            let t = realize_sentence(lex, catalog, s, para.sentences.len(), same_role, cfg)?;
            if para.words + word_count(&t) <= cfg.max_paragraph_words {
                text = Some(t);
            }
        }
        match text {
            Some(t) => {
                let para = out.paragraphs.last_mut().expect("continuing paragraph");
                para.words += word_count(&t);
                para.sentences.push(i);
                texts.push(t);
            }
            None => {
                let t = realize_sentence(lex, catalog, s, 0, false, cfg)?;
                out.paragraphs.push(Paragraph { depth: s.depth, sentences: vec![i], words: word_count(&t) });
                texts.push(t);
            }
        }
    }
    for (pi, p) in out.paragraphs.iter().enumerate() {
        for &i in &p.sentences {
            let s = &plan[i];
            out.sentences.push(RealizedSentence {
                text: texts[i].clone(),
                depth: s.depth,
                kind: s.kind,
                source: s.source.clone(),
                activities: s.activities.clone(),
                template: s.template.clone(),
                path: s.path.clone(),
                position: s.position,
                tars: s.tars.iter().cloned().collect(),
                paragraph: pi,
            });
        }
        let body: Vec<&str> = p.sentences.iter().map(|&i| texts[i].as_str()).collect();
        out.markdown.push_str(&"  ".repeat(p.depth));
        out.markdown.push_str("- ");
        out.markdown.push_str(&body.join(" "));
        out.markdown.push('\n');
    }
    Ok(out)
}

/// A generated text together with the provenance needed to evaluate it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextDocument {
    pub name: Option<String>,
    pub markdown: String,
    pub sentences: Vec<RealizedSentence>,
    pub paragraphs: Vec<Paragraph>,
    pub provenance: Provenance,
    /// Labeled transitions no activity sentence describes.
    pub neglected: Vec<String>,
    pub silent: Vec<String>,
    pub flags: Vec<String>,
    pub warnings: Vec<String>,
}

impl TextDocument {
    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Parses a generated document, insisting on the provenance fields.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("provenance").is_none() {
            return Err(Error::MissingProvenance("provenance".into()));
        }
        let sentences = value
            .get("sentences")
            .and_then(|s| s.as_array())
            .ok_or_else(|| Error::MissingProvenance("sentences".into()))?;
        if let Some(i) = sentences.iter().position(|s| s.get("depth").is_none()) {
            return Err(Error::MissingProvenance(format!("depth of sentence {i}")));
        }
        Ok(serde_json::from_value(value)?)
    }
}

/// Rebuilds a net system from provenance alone: the places, transitions
/// and arcs touched by the described paths, with substitutions expanded.
pub fn reconstruct(prov: &Provenance) -> Result<NetSystem> {
    let mut net = PetriNet::new();
    add_paths(&mut net, prov)?;
    let mut system = NetSystem::new(net, prov.initial.clone())?;
    system.finals = prov.finals.iter().cloned().collect();
    Ok(system)
}

fn add_paths(net: &mut PetriNet, prov: &Provenance) -> Result<()> {
    let ensure_place = |net: &mut PetriNet, p: &str| -> Result<()> {
        if !net.contains(p) {
            net.add_place(p)?;
        }
        Ok(())
    };
    for rec in &prov.paths {
        let touched = rec.consumes.iter().map(|(p, t)| (p, t)).chain(rec.produces.iter().map(|(t, p)| (p, t)));
        for (p, t) in touched {
            ensure_place(net, p)?;
            if !net.contains(t) {
                net.add_transition(t.as_str(), rec.labels.get(t).map(String::as_str))?;
            }
        }
        for (p, t) in &rec.consumes {
            net.add_arc(p, t)?;
        }
        for (t, p) in &rec.produces {
            net.add_arc(t, p)?;
        }
    }
    for p in prov.initial.places().chain(prov.finals.iter().map(String::as_str)) {
        ensure_place(net, p)?;
    }
    for (id, sub) in &prov.substitutions {
        net.remove_node(id);
        add_paths(net, &sub.provenance)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{build_dsynt, classify_label};

    #[test]
    fn catalog_has_32_entries_and_covers_every_selector() {
        let c = Catalog::bundled();
        assert_eq!(c.len(), 32);
        for sel in Catalog::selector_space() {
            select_template(&c, &sel).unwrap();
        }
    }

    #[test]
    fn selection_examples() {
        let c = Catalog::bundled();
        let pick = |gateway, has_label, count| {
            fill(select_template(&c, &Selector { gateway, has_label, count }).unwrap(), &Slots { count, ..Slots::default() })
        };
        assert_eq!(pick(GatewayType::PlaceSplit, false, 2), "One of the branches is executed:");
        assert_eq!(pick(GatewayType::MainBranchIntro, false, 2), "The following main branches are executed:");
        assert_eq!(pick(GatewayType::LoopIntro, false, 2), "Attention, there are two loops which may conditionally occur:");
        assert_eq!(pick(GatewayType::LoopIntro, false, 1), "Attention, there is one loop which may conditionally occur:");
    }

    #[test]
    fn catalog_gaps_and_ambiguity_are_rejected() {
        let gap = "[[template]]\nid = \"a\"\ngateway = \"start\"\nlabel = \"any\"\ncount = \"any\"\ntext = \"x\"\n";
        assert!(matches!(Catalog::parse(gap), Err(Error::NoTemplate(_))));
        let mut twice = String::new();
        for g in GatewayType::ALL {
            let name = serde_json::to_value(g).unwrap();
            twice.push_str(&format!(
                "[[template]]\nid = \"{0}\"\ngateway = {1}\nlabel = \"any\"\ncount = \"any\"\ntext = \"x\"\n",
                name.as_str().unwrap(),
                name
            ));
        }
        assert!(Catalog::parse(&twice).is_ok());
        let dup = format!("{twice}[[template]]\nid = \"start2\"\ngateway = \"start\"\nlabel = \"any\"\ncount = \"any\"\ntext = \"y\"\n");
        assert!(matches!(Catalog::parse(&dup), Err(Error::Catalog(_))));
    }

    fn activity(label: &str, role: Option<&str>) -> SentencePlan {
        let lex = Lexicon::bundled();
        let info = classify_label(label, &lex).unwrap();
        let mut s = SentencePlan::template("x", &Slots::default(), 1, 1);
        s.kind = SentenceKind::Activity;
        s.template = None;
        s.dsynt = Some(build_dsynt(&info, role));
        s.activities = vec![label.to_string()];
        s
    }

    #[test]
    fn clauses() {
        let lex = Lexicon::bundled();
        let plan = check_grammar_meta(vec![
            activity("extract genes", Some("experimenter")),
            activity("record data", None),
            activity("ship", None),
        ])
        .unwrap();
        let text = |i: usize, modal| realize_clause(&lex, plan[i].dsynt.as_ref().unwrap(), modal, "he");
        assert_eq!(text(0, false), "the experimenter extracts the genes");
        assert_eq!(text(1, false), "the data is recorded");
        assert_eq!(text(1, true), "the data can also be recorded");
        assert_eq!(text(2, false), "shipping is performed");
        assert_eq!(text(0, true), "the experimenter can also extract the genes");
    }

    #[test]
    fn grammar_meta_defaults() {
        let mut s = activity("extract genes", Some("experimenter"));
        s.dsynt.as_mut().unwrap().root.meta.tense = None;
        let out = check_grammar_meta(vec![s]).unwrap();
        assert_eq!(out[0].dsynt.as_ref().unwrap().root.meta.tense, Some(Tense::Present));

        let mut s = activity("extract genes", Some("experimenter"));
        s.dsynt.as_mut().unwrap().root.children.retain(|(d, _)| *d != Dependency::I);
        s.dsynt.as_mut().unwrap().root.meta.voice = Some(Voice::Active);
        let out = check_grammar_meta(vec![s]).unwrap();
        assert_eq!(out[0].dsynt.as_ref().unwrap().root.meta.voice, Some(Voice::Passive));

        let mut s = activity("extract genes", Some("experimenter"));
        s.dsynt.as_mut().unwrap().root.lexeme.clear();
        assert!(matches!(check_grammar_meta(vec![s]), Err(Error::IncompleteDsynt(_))));
    }

    #[test]
    fn aggregation() {
        let lex = Lexicon::bundled();
        let cat = Catalog::bundled();
        let cfg = RealizeConfig::default();
        let render = |plan: Vec<SentencePlan>| {
            let plan = aggregate(check_grammar_meta(plan).unwrap());
            realize_text(&plan, &lex, &cat, &cfg).unwrap().markdown
        };
        assert_eq!(
            render(vec![activity("extract genes", Some("experimenter")), activity("sequence DNA", Some("experimenter"))]),
            "  - The experimenter extracts the genes. Then, he sequences the DNA.\n"
        );
        assert_eq!(
            render(vec![activity("remove impurities", Some("experimenter")), activity("remove residues", Some("experimenter"))]),
            "  - The experimenter removes the impurities and the residues.\n"
        );
        assert_eq!(
            render(vec![activity("check invoice", Some("clerk")), activity("approve invoice", Some("clerk"))]),
            "  - The clerk checks and approves the invoice.\n"
        );
        assert_eq!(render(vec![activity("check invoice", Some("clerk"))]), "  - The clerk checks the invoice.\n");
        assert_eq!(render(Vec::new()), "");
    }

    #[test]
    fn long_paragraphs_are_split() {
        let lex = Lexicon::bundled();
        let cat = Catalog::bundled();
        let cfg = RealizeConfig { max_paragraph_words: 12, ..RealizeConfig::default() };
        let plan: Vec<SentencePlan> = ["check invoice", "approve order", "send letter", "archive file"]
            .iter()
            .map(|l| activity(l, Some("clerk")))
            .collect();
        let plan = aggregate(check_grammar_meta(plan).unwrap());
        let r = realize_text(&plan, &lex, &cat, &cfg).unwrap();
        assert!(r.paragraphs.len() >= 2);
        assert!(r.paragraphs.iter().all(|p| p.words <= 12 || p.sentences.len() == 1));
        for p in &r.paragraphs {
            assert!(r.sentences[p.sentences[0]].text.starts_with("The clerk"));
        }
    }
}
