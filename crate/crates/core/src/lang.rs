//! Activity labels: lexicon, labeling styles, deep-syntactic trees and the
//! RPST with a tree attached to every activity.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rpst::RpstTree;

const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.tsv");

const PREPOSITIONS: &[&str] = &[
    "of", "for", "to", "from", "with", "in", "on", "at", "by", "into", "about", "via", "per", "through",
    "after", "before", "within", "without", "under", "over",
];
const CONJUNCTIONS: &[&str] = &["and", "or", "&", "as", "well"];
const ARTICLES: &[&str] = &["a", "an", "the"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct VerbForms {
    third: Option<String>,
    past: Option<String>,
    participle: Option<String>,
    gerund: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct NounForms {
    plural: Option<String>,
    mass: bool,
}

/// Word lists for classification and inflection. Tab separated lines of
/// `lemma  pos  forms`, where pos is `verb`, `noun` or `nominal` and forms
/// is a comma separated list of `key=value` overrides (`3sg`, `past`, `pp`,
/// `ing` for verbs; `plural` and the flag `mass` for nouns; `verb` for
/// nominalizations).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    verbs: BTreeMap<String, VerbForms>,
    nouns: BTreeMap<String, NounForms>,
    nominals: BTreeMap<String, String>,
    irregular: BTreeMap<String, String>,
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn syllables(w: &str) -> usize {
    let mut groups = 0;
    let mut prev = false;
    for c in w.chars() {
        let v = is_vowel(c) || c == 'y' && prev;
        if v && !prev {
            groups += 1;
        }
        prev = v;
    }
    groups
}

/// Single-syllable words ending consonant-vowel-consonant double the final
/// consonant before a suffix: ship -> shipping.
fn doubles(w: &str) -> bool {
    let c: Vec<char> = w.chars().collect();
    let n = c.len();
    n >= 3
        && syllables(w) == 1
        && !is_vowel(c[n - 1])
        && !matches!(c[n - 1], 'w' | 'x' | 'y')
        && is_vowel(c[n - 2])
        && !is_vowel(c[n - 3])
}

fn ends_sibilant(w: &str) -> bool {
    ["s", "x", "z", "ch", "sh"].iter().any(|s| w.ends_with(s))
}

fn consonant_y(w: &str) -> bool {
    let c: Vec<char> = w.chars().collect();
    c.len() >= 2 && c[c.len() - 1] == 'y' && !is_vowel(c[c.len() - 2])
}

impl Lexicon {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEXICON).expect("bundled lexicon is well formed")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = Lexicon::default();
        let mut pending_nominals = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim_end();
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() < 2 || cols.len() > 3 {
                return Err(Error::Lexicon {
                    line,
                    message: format!("expected 2 or 3 tab separated columns, found {}", cols.len()),
                });
            }
            let lemma = cols[0].trim().to_lowercase();
            if lemma.is_empty() || lemma.contains(' ') {
                return Err(Error::Lexicon { line, message: format!("bad lemma `{}`", cols[0]) });
            }
            let mut forms = BTreeMap::new();
            let mut flags = BTreeSet::new();
            for item in cols.get(2).unwrap_or(&"").split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match item.split_once('=') {
                    Some((k, v)) => {
                        forms.insert(k.trim().to_string(), v.trim().to_lowercase());
                    }
                    None => {
                        flags.insert(item.to_string());
                    }
                }
            }
            let unknown = |keys: &[&str]| {
                forms
                    .keys()
                    .find(|k| !keys.contains(&k.as_str()))
                    .map(|k| Error::Lexicon { line, message: format!("unknown form `{k}`") })
            };
            match cols[1].trim() {
                "verb" => {
                    if let Some(e) = unknown(&["3sg", "past", "pp", "ing"]) {
                        return Err(e);
                    }
                    let v = VerbForms {
                        third: forms.get("3sg").cloned(),
                        past: forms.get("past").cloned(),
                        participle: forms.get("pp").cloned(),
                        gerund: forms.get("ing").cloned(),
                    };
                    for f in [&v.third, &v.past, &v.participle, &v.gerund].into_iter().flatten() {
                        lex.irregular.insert(f.clone(), lemma.clone());
                    }
                    lex.verbs.insert(lemma, v);
                }
                "noun" => {
                    if let Some(e) = unknown(&["plural"]) {
                        return Err(e);
                    }
                    let n = NounForms {
                        plural: forms.get("plural").cloned(),
                        mass: flags.contains("mass"),
                    };
                    if let Some(p) = &n.plural {
                        if *p != lemma {
                            lex.irregular.insert(p.clone(), lemma.clone());
                        }
                    }
                    lex.nouns.insert(lemma, n);
                }
                "nominal" => {
                    let Some(v) = forms.get("verb") else {
                        return Err(Error::Lexicon { line, message: "nominal without verb=".into() });
                    };
                    pending_nominals.push((line, lemma, v.clone()));
                }
                other => {
                    return Err(Error::Lexicon { line, message: format!("unknown part of speech `{other}`") });
                }
            }
        }
        for (line, lemma, verb) in pending_nominals {
            if !lex.verbs.contains_key(&verb) {
                return Err(Error::Lexicon { line, message: format!("`{verb}` is not a listed verb") });
            }
            lex.nominals.insert(lemma, verb);
        }
        Ok(lex)
    }

    pub fn verb_count(&self) -> usize {
        self.verbs.len()
    }

    pub fn noun_count(&self) -> usize {
        self.nouns.len()
    }

    pub fn is_verb(&self, lemma: &str) -> bool {
        self.verbs.contains_key(&lemma.to_lowercase())
    }

    pub fn is_noun(&self, lemma: &str) -> bool {
        self.nouns.contains_key(&lemma.to_lowercase())
    }

    /// Lemma of a gerund if its stem is a known verb.
    pub fn gerund_stem(&self, word: &str) -> Option<String> {
        let w = word.to_lowercase();
        if let Some(l) = self.irregular.get(&w) {
            if self.verbs.get(l).and_then(|v| v.gerund.as_ref()) == Some(&w) {
                return Some(l.clone());
            }
        }
        let stem = w.strip_suffix("ing")?;
        let mut candidates = vec![stem.to_string(), format!("{stem}e")];
        let c: Vec<char> = stem.chars().collect();
        if c.len() >= 2 && c[c.len() - 1] == c[c.len() - 2] {
            candidates.push(c[..c.len() - 1].iter().collect());
        }
        if let Some(s) = stem.strip_suffix('y') {
            candidates.push(format!("{s}ie"));
        }
        candidates.into_iter().find(|c| self.verbs.contains_key(c))
    }

    /// Verb for an action noun: table first, then suffix rules checked
    /// against the verb list.
    pub fn verbalize(&self, noun: &str) -> Option<String> {
        let n = noun.to_lowercase();
        if let Some(v) = self.nominals.get(&n) {
            return Some(v.clone());
        }
        if self.verbs.contains_key(&n) {
            return Some(n);
        }
        if let Some(v) = self.gerund_stem(&n) {
            return Some(v);
        }
        let mut candidates = Vec::new();
        for (suffix, repl) in [
            ("ation", ""),
            ("ation", "e"),
            ("ication", "y"),
            ("sion", "d"),
            ("sion", "de"),
            ("ion", ""),
            ("ion", "e"),
            ("ment", ""),
            ("al", ""),
            ("al", "e"),
            ("ance", ""),
            ("ance", "e"),
            ("ence", ""),
            ("ure", ""),
            ("ure", "e"),
        ] {
            if let Some(stem) = n.strip_suffix(suffix) {
                candidates.push(format!("{stem}{repl}"));
            }
        }
        candidates.into_iter().find(|c| self.verbs.contains_key(c))
    }

    /// Singular form of a noun and whether the word was plural.
    pub fn singular(&self, word: &str) -> (String, bool) {
        if is_acronym(word) {
            return (word.to_string(), false);
        }
        let w = word.to_lowercase();
        if let Some(n) = self.nouns.get(&w) {
            return (word.to_string(), n.plural.as_deref() == Some(w.as_str()) && !n.mass);
        }
        if let Some(l) = self.irregular.get(&w) {
            if self.nouns.contains_key(l) {
                return (l.clone(), true);
            }
        }
        let candidates: Vec<String> = if let Some(s) = w.strip_suffix("ies") {
            vec![format!("{s}y")]
        } else if let Some(s) = w.strip_suffix("es").filter(|s| ends_sibilant(s)) {
            vec![s.to_string(), format!("{s}e")]
        } else if w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is") {
            vec![w[..w.len() - 1].to_string()]
        } else {
            Vec::new()
        };
        if let Some(c) = candidates.iter().find(|c| self.nouns.contains_key(*c)) {
            return (c.clone(), true);
        }
        match candidates.into_iter().next() {
            Some(c) => (c, true),
            None => (word.to_string(), false),
        }
    }

    /// Mass nouns always agree in the singular.
    pub fn is_mass(&self, lemma: &str) -> bool {
        is_acronym(lemma) || self.nouns.get(&lemma.to_lowercase()).is_some_and(|n| n.mass)
    }

    pub fn plural(&self, lemma: &str) -> String {
        if let Some(p) = self.nouns.get(&lemma.to_lowercase()).and_then(|n| n.plural.clone()) {
            return p;
        }
        if consonant_y(lemma) {
            format!("{}ies", &lemma[..lemma.len() - 1])
        } else if ends_sibilant(lemma) {
            format!("{lemma}es")
        } else {
            format!("{lemma}s")
        }
    }

    pub fn third_person(&self, verb: &str) -> String {
        if let Some(f) = self.verbs.get(verb).and_then(|v| v.third.clone()) {
            return f;
        }
        if consonant_y(verb) {
            format!("{}ies", &verb[..verb.len() - 1])
        } else if ends_sibilant(verb) || verb.ends_with('o') {
            format!("{verb}es")
        } else {
            format!("{verb}s")
        }
    }

    pub fn participle(&self, verb: &str) -> String {
        if let Some(f) = self.verbs.get(verb).and_then(|v| v.participle.clone()) {
            return f;
        }
        if verb.ends_with('e') {
            format!("{verb}d")
        } else if consonant_y(verb) {
            format!("{}ied", &verb[..verb.len() - 1])
        } else if doubles(verb) {
            format!("{verb}{}ed", verb.chars().last().unwrap())
        } else {
            format!("{verb}ed")
        }
    }

    pub fn gerund(&self, verb: &str) -> String {
        if let Some(f) = self.verbs.get(verb).and_then(|v| v.gerund.clone()) {
            return f;
        }
        if let Some(s) = verb.strip_suffix("ie") {
            format!("{s}ying")
        } else if verb.ends_with('e') && !verb.ends_with("ee") && !verb.ends_with("ye") && !verb.ends_with("oe") && verb.len() > 2 {
            format!("{}ing", &verb[..verb.len() - 1])
        } else if doubles(verb) {
            format!("{verb}{}ing", verb.chars().last().unwrap())
        } else {
            format!("{verb}ing")
        }
    }
}

fn is_acronym(w: &str) -> bool {
    w.chars().filter(|c| c.is_alphabetic()).count() >= 2 && w.chars().all(|c| !c.is_lowercase())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LabelStyle {
    GerundVerbPhrase,
    VerbPhrase,
    NounPhrase,
    NounOfPhrase,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Noun {
    pub lemma: String,
    pub plural: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelInfo {
    pub style: LabelStyle,
    pub role: Option<String>,
    pub action: String,
    pub objects: Vec<Noun>,
    /// Prepositional phrase trailing the objects, verbatim.
    pub modifier: Option<String>,
    pub has_preposition: bool,
    pub has_conjunction: bool,
    /// No verb was found; the action is the support verb `perform`.
    pub support_verb: bool,
    /// The label with its first word in gerund form, e.g. "sequencing DNA".
    pub gerund_phrase: String,
}

fn words(label: &str) -> Vec<String> {
    label
        .split_whitespace()
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric() && c != '&' && c != '-').to_string())
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .collect()
}

fn lower(w: &str) -> String {
    w.to_lowercase()
}

/// Splits noun words into coordinated phrases; the head of each phrase is
/// lemmatized.
fn noun_phrases(lex: &Lexicon, ws: &[String]) -> Vec<Noun> {
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    let flush = |current: &mut Vec<&str>, out: &mut Vec<Noun>| {
        if let Some((head, mods)) = current.split_last() {
            let (lemma, plural) = lex.singular(head);
            let mut parts: Vec<String> = mods.iter().map(|s| s.to_string()).collect();
            parts.push(lemma);
            out.push(Noun { lemma: parts.join(" "), plural });
        }
        current.clear();
    };
    for w in ws {
        let l = lower(w);
        if CONJUNCTIONS.contains(&l.as_str()) {
            flush(&mut current, &mut out);
        } else if !ARTICLES.contains(&l.as_str()) {
            current.push(w);
        }
    }
    flush(&mut current, &mut out);
    out
}

/// Splits at the first preposition (excluding position 0).
fn split_modifier(ws: &[String]) -> (&[String], Option<String>) {
    match ws.iter().position(|w| PREPOSITIONS.contains(&lower(w).as_str())) {
        Some(i) => (&ws[..i], Some(ws[i..].join(" "))),
        None => (ws, None),
    }
}

pub fn classify_label(label: &str, lexicon: &Lexicon) -> Result<LabelInfo> {
    let ws = words(label);
    if ws.is_empty() {
        return Err(Error::EmptyLabel);
    }
    let lw: Vec<String> = ws.iter().map(|w| lower(w)).collect();
    let has_preposition = lw.iter().any(|w| PREPOSITIONS.contains(&w.as_str()));
    let has_conjunction = lw.iter().any(|w| CONJUNCTIONS.contains(&w.as_str()));
    let first_prep = lw.iter().position(|w| PREPOSITIONS.contains(&w.as_str()));
    let rest_raw = ws[1..].join(" ");
    let verb_phrase = |style: LabelStyle, action: String, gerund_phrase: String| {
        let (objs, modifier) = split_modifier(&ws[1..]);
        LabelInfo {
            style,
            role: None,
            objects: noun_phrases(lexicon, objs),
            modifier,
            has_preposition,
            has_conjunction,
            support_verb: false,
            gerund_phrase,
            action,
        }
    };
    let join = |head: String| {
        if rest_raw.is_empty() {
            head
        } else {
            format!("{head} {rest_raw}")
        }
    };

    if lw[0].ends_with("ing") {
        if let Some(stem) = lexicon.gerund_stem(&lw[0]) {
            return Ok(verb_phrase(LabelStyle::GerundVerbPhrase, stem, join(lw[0].clone())));
        }
    }
    if lexicon.is_verb(&lw[0]) {
        let action = lw[0].clone();
        return Ok(verb_phrase(LabelStyle::VerbPhrase, action.clone(), join(lexicon.gerund(&action))));
    }

    let noun_style = |style: LabelStyle, head: &str, objs: Vec<Noun>, modifier: Option<String>| {
        let (action, support) = match lexicon.verbalize(head) {
            Some(v) => (v, false),
            None => ("perform".to_string(), true),
        };
        let objects = if support {
            vec![Noun { lemma: label.trim().to_string(), plural: false }]
        } else {
            objs
        };
        let mut phrase = vec![lexicon.gerund(&action)];
        phrase.extend(objects.iter().map(|o| o.lemma.clone()));
        let gerund_phrase = phrase.join(" ");
        LabelInfo {
            style,
            role: None,
            action,
            modifier: if support { None } else { modifier },
            objects,
            has_preposition,
            has_conjunction,
            support_verb: support,
            gerund_phrase,
        }
    };

    if let Some(p) = first_prep.filter(|&p| lw[p] == "of" && p > 0) {
        let head = &lw[p - 1];
        let (objs, modifier) = split_modifier(&ws[p + 1..]);
        let objects = noun_phrases(lexicon, objs);
        return Ok(noun_style(LabelStyle::NounOfPhrase, head, objects, modifier));
    }
    let end = first_prep.unwrap_or(ws.len()).max(1);
    let head = &lw[end - 1];
    let objects = noun_phrases(lexicon, &ws[..end - 1]);
    let modifier = first_prep.map(|p| ws[p..].join(" "));
    Ok(noun_style(LabelStyle::NounPhrase, head, objects, modifier))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WordClass {
    Verb,
    Noun,
    /// Verbatim text such as a prepositional phrase.
    Phrase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dependency {
    I,
    II,
    #[serde(rename = "ATTR")]
    Attr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    Present,
    Past,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Voice {
    Active,
    Passive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Singular,
    Plural,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Meta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tense: Option<Tense>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voice: Option<Voice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub person: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub number: Option<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub definite: Option<bool>,
    /// Realize the noun as a pronoun.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub pronoun: bool,
    /// Modal phrase in front of the verb, e.g. "can also".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modal: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DNode {
    pub lexeme: String,
    pub class: WordClass,
    pub meta: Meta,
    pub children: Vec<(Dependency, DNode)>,
}

impl DNode {
    pub fn new(lexeme: impl Into<String>, class: WordClass) -> Self {
        DNode { lexeme: lexeme.into(), class, meta: Meta::default(), children: Vec::new() }
    }

    pub fn child(&self, dep: Dependency) -> Option<&DNode> {
        self.children.iter().find(|(d, _)| *d == dep).map(|(_, n)| n)
    }

    pub fn child_mut(&mut self, dep: Dependency) -> Option<&mut DNode> {
        self.children.iter_mut().find(|(d, _)| *d == dep).map(|(_, n)| n)
    }

    pub fn attrs(&self) -> impl Iterator<Item = &DNode> {
        self.children.iter().filter(|(d, _)| *d == Dependency::Attr).map(|(_, n)| n)
    }
}

/// Deep-syntactic tree of one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DSynT {
    pub root: DNode,
}

impl DSynT {
    /// Checks that no verb has more than one I or II dependent.
    pub fn validate(&self) -> Result<()> {
        fn walk(n: &DNode, path: &str) -> Result<()> {
            if n.class == WordClass::Verb {
                for dep in [Dependency::I, Dependency::II] {
                    if n.children.iter().filter(|(d, _)| *d == dep).count() > 1 {
                        return Err(Error::IncompleteDsynt(format!("{path}: repeated {dep:?}")));
                    }
                }
            }
            for (i, (_, c)) in n.children.iter().enumerate() {
                walk(c, &format!("{path}/{i}"))?;
            }
            Ok(())
        }
        walk(&self.root, &self.root.lexeme)
    }

    pub fn role(&self) -> Option<&str> {
        self.root.child(Dependency::I).map(|n| n.lexeme.as_str())
    }

    pub fn action(&self) -> &str {
        &self.root.lexeme
    }

    /// Object lemmas: the II dependent and its coordinated ATTR nouns.
    pub fn objects(&self) -> Vec<&str> {
        let Some(ii) = self.root.child(Dependency::II) else {
            return Vec::new();
        };
        let mut out = vec![ii.lexeme.as_str()];
        out.extend(ii.attrs().filter(|n| n.class == WordClass::Noun).map(|n| n.lexeme.as_str()));
        out
    }
}

fn noun_node(n: &Noun) -> DNode {
    let mut node = DNode::new(n.lemma.clone(), WordClass::Noun);
    node.meta.number = Some(if n.plural { Number::Plural } else { Number::Singular });
    node.meta.definite = Some(true);
    node
}

/// Verb root, I = role, II = first object; further objects hang off the II
/// noun as coordinated ATTRs; a trailing prepositional phrase is an ATTR of
/// the verb. Without a role the tree is passive.
pub fn build_dsynt(info: &LabelInfo, role: Option<&str>) -> DSynT {
    let mut root = DNode::new(info.action.clone(), WordClass::Verb);
    root.meta.voice = Some(if role.is_some() { Voice::Active } else { Voice::Passive });
    if let Some(r) = role {
        let mut subject = DNode::new(r, WordClass::Noun);
        subject.meta.number = Some(Number::Singular);
        subject.meta.definite = Some(true);
        root.children.push((Dependency::I, subject));
    }
    if let Some((first, rest)) = info.objects.split_first() {
        let mut ii = noun_node(first);
        for o in rest {
            ii.children.push((Dependency::Attr, noun_node(o)));
        }
        root.children.push((Dependency::II, ii));
    }
    if let Some(m) = &info.modifier {
        root.children.push((Dependency::Attr, DNode::new(m.clone(), WordClass::Phrase)));
    }
    DSynT { root }
}

/// Tree standing in for a transition without a label or for a simplified
/// component.
pub fn placeholder_dsynt(id: &str) -> DSynT {
    DSynT { root: DNode::new(id, WordClass::Phrase) }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rdt {
    pub rpst: RpstTree,
    pub dsynts: BTreeMap<String, DSynT>,
    pub labels: BTreeMap<String, LabelInfo>,
    /// Transitions carrying a placeholder tree.
    pub placeholders: BTreeSet<String>,
}

/// Attaches a tree to every transition leaf. `transitions` lists all
/// transitions with their optional label and role.
pub fn build_rdt(
    tree: &RpstTree,
    transitions: &BTreeMap<String, (Option<String>, Option<String>)>,
    lexicon: &Lexicon,
) -> Result<Rdt> {
    let mut dsynts = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut placeholders = BTreeSet::new();
    for (t, (label, role)) in transitions {
        match label {
            Some(l) => {
                let mut info = classify_label(l, lexicon).map_err(|e| Error::Label {
                    transition: t.clone(),
                    source: Box::new(e),
                })?;
                info.role = role.clone();
                dsynts.insert(t.clone(), build_dsynt(&info, role.as_deref()));
                labels.insert(t.clone(), info);
            }
            None => {
                dsynts.insert(t.clone(), placeholder_dsynt(t));
                placeholders.insert(t.clone());
            }
        }
    }
    Ok(Rdt { rpst: tree.clone(), dsynts, labels, placeholders })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::bundled()
    }

    #[test]
    fn styles() {
        let l = lex();
        let style = |s: &str| classify_label(s, &l).unwrap().style;
        assert_eq!(style("extracting gene"), LabelStyle::GerundVerbPhrase);
        assert_eq!(style("extract gene"), LabelStyle::VerbPhrase);
        assert_eq!(style("creation of database"), LabelStyle::NounOfPhrase);
        assert_eq!(style("gene extraction"), LabelStyle::NounPhrase);
    }

    #[test]
    fn verb_phrase_extraction() {
        let info = classify_label("remove impurities", &lex()).unwrap();
        assert_eq!(info.action, "remove");
        assert_eq!(info.objects, vec![Noun { lemma: "impurity".into(), plural: true }]);
        assert_eq!(info.gerund_phrase, "removing impurities");
    }

    #[test]
    fn noun_styles_are_verbalized() {
        let l = lex();
        let info = classify_label("creation of database", &l).unwrap();
        assert_eq!(info.action, "create");
        assert_eq!(info.objects[0].lemma, "database");
        assert!(info.has_preposition);
        let info = classify_label("gene extraction", &l).unwrap();
        assert_eq!((info.action.as_str(), info.objects[0].lemma.as_str()), ("extract", "gene"));
        let info = classify_label("quarterly synergy", &l).unwrap();
        assert!(info.support_verb);
        assert_eq!(info.action, "perform");
    }

    #[test]
    fn conjunctions_split_objects() {
        let info = classify_label("check invoice and order", &lex()).unwrap();
        assert!(info.has_conjunction);
        let lemmas: Vec<&str> = info.objects.iter().map(|o| o.lemma.as_str()).collect();
        assert_eq!(lemmas, ["invoice", "order"]);
        let d = build_dsynt(&info, Some("clerk"));
        assert_eq!(d.objects(), ["invoice", "order"]);
        d.validate().unwrap();
    }

    #[test]
    fn modifiers_are_kept() {
        let info = classify_label("send invoice to customer", &lex()).unwrap();
        assert_eq!(info.modifier.as_deref(), Some("to customer"));
        assert_eq!(info.objects.len(), 1);
    }

    #[test]
    fn empty_label() {
        assert!(matches!(classify_label("  ", &lex()), Err(Error::EmptyLabel)));
        assert!(matches!(classify_label("--", &lex()), Err(Error::EmptyLabel)));
    }

    #[test]
    fn dsynt_voice_follows_role() {
        let l = lex();
        let info = classify_label("extract genes", &l).unwrap();
        let d = build_dsynt(&info, Some("experimenter"));
        assert_eq!(d.root.meta.voice, Some(Voice::Active));
        assert_eq!(d.role(), Some("experimenter"));
        let info = classify_label("record data", &l).unwrap();
        let d = build_dsynt(&info, None);
        assert_eq!(d.root.meta.voice, Some(Voice::Passive));
        assert!(d.root.child(Dependency::I).is_none());
        let info = classify_label("ship", &l).unwrap();
        let d = build_dsynt(&info, Some("clerk"));
        assert!(d.root.child(Dependency::II).is_none());
    }

    #[test]
    fn inflection() {
        let l = lex();
        assert_eq!(l.third_person("extract"), "extracts");
        assert_eq!(l.third_person("approach"), "approaches");
        assert_eq!(l.third_person("verify"), "verifies");
        assert_eq!(l.third_person("have"), "has");
        assert_eq!(l.participle("ship"), "shipped");
        assert_eq!(l.participle("record"), "recorded");
        assert_eq!(l.participle("send"), "sent");
        assert_eq!(l.participle("submit"), "submitted");
        assert_eq!(l.gerund("sequence"), "sequencing");
        assert_eq!(l.gerund("open"), "opening");
        assert_eq!(l.gerund("plan"), "planning");
        assert_eq!(l.gerund_stem("shipping").as_deref(), Some("ship"));
        assert_eq!(l.gerund_stem("string"), None);
        assert_eq!(l.singular("impurities"), ("impurity".to_string(), true));
        assert_eq!(l.singular("data"), ("data".to_string(), false));
        assert_eq!(l.singular("DNA"), ("DNA".to_string(), false));
        assert_eq!(l.plural("analysis"), "analyses");
    }

    #[test]
    fn lexicon_errors_carry_lines() {
        match Lexicon::parse("# c\nship\tverb\nx\tadverb\n") {
            Err(Error::Lexicon { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(Lexicon::parse("creation\tnominal\tverb=create\n").is_err());
        assert!(Lexicon::bundled().verb_count() > 250);
    }

    #[test]
    fn rdt_has_a_tree_per_transition() {
        use crate::io::parse_dsl;
        use crate::rpst::decompose;
        let doc = parse_dsl(include_str!("../corpus/nstar.pnet")).unwrap();
        let tree = decompose(&doc.system).unwrap();
        let transitions = doc
            .system
            .net
            .transitions()
            .iter()
            .map(|t| {
                (
                    t.clone(),
                    (doc.system.net.label(t).map(str::to_string), doc.role(t).map(str::to_string)),
                )
            })
            .collect();
        let rdt = build_rdt(&tree, &transitions, &lex()).unwrap();
        assert_eq!(rdt.dsynts.len(), 5);
        assert!(rdt.placeholders.is_empty());
        let a = &rdt.dsynts["T_a"];
        assert_eq!((a.action(), a.role(), a.objects()), ("extract", Some("experimenter"), vec!["gene"]));

        let unlabeled: BTreeMap<_, _> = transitions_without_labels(&doc.system.net);
        let rdt = build_rdt(&tree, &unlabeled, &lex()).unwrap();
        assert_eq!(rdt.placeholders.len(), 5);
    }

    fn transitions_without_labels(
        net: &crate::petri::PetriNet,
    ) -> BTreeMap<String, (Option<String>, Option<String>)> {
        net.transitions().iter().map(|t| (t.clone(), (None, None))).collect()
    }
}
