//! Text quality measures: depth consistency, information gain and
//! perplexity, and F1 between an original and a reproduced model.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::petri::{tar_set, Compiled, NetSystem, PetriNet};
use crate::realize::{SentenceKind, TextDocument};

const EPS: f64 = 1e-12;

/// Pearson correlation between modeling depths and description depths.
/// Two constant, identical distributions count as perfectly consistent.
pub fn consistency(md: &[f64], dd: &[f64]) -> Result<f64> {
    if md.len() != dd.len() {
        return Err(Error::LengthMismatch(md.len(), dd.len()));
    }
    if md.len() < 2 {
        return Err(Error::TooFewActivities(md.len()));
    }
    let n = md.len() as f64;
    let mx = md.iter().sum::<f64>() / n;
    let my = dd.iter().sum::<f64>() / n;
    let sxy: f64 = md.iter().zip(dd).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = md.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = dd.iter().map(|y| (y - my).powi(2)).sum();
    if sxx < EPS || syy < EPS {
        if sxx < EPS && syy < EPS && md.iter().zip(dd).all(|(x, y)| (x - y).abs() < EPS) {
            return Ok(1.0);
        }
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Information gain of a paragraph describing `described` activities while
/// `neglected` activities stay undescribed.
pub fn info_gain(described: usize, neglected: usize) -> f64 {
    let t = described as f64;
    let entropy = if described <= 1 { 0.0 } else { t * t.log2() };
    entropy.exp() * t * neglected as f64
}

/// Cumulative gain after each paragraph.
pub fn igl(gains: &[f64]) -> Vec<f64> {
    gains
        .iter()
        .scan(0.0, |acc, g| {
            *acc += g;
            Some(*acc)
        })
        .collect()
}

/// Area under the broken line through `(0, 0)` and `(i, gain_1 + .. + gain_i)`.
pub fn perplexity(gains: &[f64]) -> f64 {
    let mut prev = 0.0;
    let mut area = 0.0;
    for y in igl(gains) {
        area += (prev + y) / 2.0;
        prev = y;
    }
    area
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Precision and recall were both zero; `f1` is reported as 0.
    pub undefined: bool,
}

pub fn f1(precision: f64, recall: f64, beta: f64) -> Score {
    let b2 = beta * beta;
    let denom = b2 * precision + recall;
    if denom < EPS {
        return Score { precision, recall, f1: 0.0, undefined: true };
    }
    Score { precision, recall, f1: (1.0 + b2) * precision * recall / denom, undefined: false }
}

/// Precision and recall of `reproduced` against `original`. Two empty sets
/// agree perfectly.
pub fn score_sets<T: Ord>(original: &BTreeSet<T>, reproduced: &BTreeSet<T>) -> Score {
    if original.is_empty() && reproduced.is_empty() {
        return f1(1.0, 1.0, 1.0);
    }
    let hit = original.intersection(reproduced).count() as f64;
    let ratio = |n: usize| if n == 0 { 0.0 } else { hit / n as f64 };
    f1(ratio(reproduced.len()), ratio(original.len()), 1.0)
}

fn name(net: &PetriNet, id: &str) -> String {
    net.label(id).unwrap_or(id).to_string()
}

/// Nodes with more than one incoming or outgoing arc.
pub fn gateways(net: &PetriNet) -> BTreeSet<String> {
    net.nodes()
        .filter(|n| net.preset(n).len() > 1 || net.postset(n).len() > 1)
        .cloned()
        .collect()
}

/// Runs that fire every transition at most once and end in a terminal
/// marking, written as label sequences.
pub fn loop_free_traces(system: &NetSystem, max_traces: usize) -> BTreeSet<Vec<String>> {
    let c = Compiled::new(&system.net);
    let terminal = system.terminal_places();
    let terminal: Vec<bool> = c.places.iter().map(|p| terminal.contains(p)).collect();
    let mut out = BTreeSet::new();
    let mut used = vec![false; c.transitions.len()];
    let mut seq = Vec::new();
    walk(&c, &terminal, &c.vector(&system.initial), &mut used, &mut seq, max_traces, &mut out);
    out.into_iter()
        .map(|s: Vec<usize>| s.into_iter().map(|t| name(&system.net, &c.transitions[t])).collect())
        .collect()
}

fn walk(
    c: &Compiled,
    terminal: &[bool],
    m: &[u32],
    used: &mut [bool],
    seq: &mut Vec<usize>,
    max: usize,
    out: &mut BTreeSet<Vec<usize>>,
) {
    if out.len() >= max {
        return;
    }
    if !seq.is_empty() && m.iter().zip(terminal).all(|(&n, &t)| n == 0 || t) {
        out.insert(seq.clone());
    }
    for t in c.enabled_set(m) {
        if used[t] {
            continue;
        }
        used[t] = true;
        seq.push(t);
        walk(c, terminal, &c.fire(m, t), used, seq, max, out);
        seq.pop();
        used[t] = false;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F1Report {
    pub places: Score,
    pub transitions: Score,
    pub gateways: Score,
    pub elements: Score,
    pub tars: Score,
    pub traces: Score,
}

pub const MAX_COMPARED_TRACES: usize = 10_000;

/// Compares a reproduced model with the original. Places and transitions
/// are matched by id; elements, TARs and traces by label, falling back to id.
pub fn compare(original: &NetSystem, reproduced: &NetSystem, state_bound: usize) -> Result<F1Report> {
    let (o, r) = (&original.net, &reproduced.net);
    let elements = |n: &PetriNet| -> BTreeSet<String> { n.nodes().map(|x| name(n, x)).collect() };
    let tars = |s: &NetSystem| -> Result<BTreeSet<(String, String)>> {
        Ok(tar_set(s, state_bound)?
            .into_iter()
            .map(|t| (name(&s.net, &t.first), name(&s.net, &t.second)))
            .collect())
    };
    Ok(F1Report {
        places: score_sets(o.places(), r.places()),
        transitions: score_sets(o.transitions(), r.transitions()),
        gateways: score_sets(&gateways(o), &gateways(r)),
        elements: score_sets(&elements(o), &elements(r)),
        tars: score_sets(&tars(original)?, &tars(reproduced)?),
        traces: score_sets(
            &loop_free_traces(original, MAX_COMPARED_TRACES),
            &loop_free_traces(reproduced, MAX_COMPARED_TRACES),
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthPair {
    pub activity: String,
    pub md: usize,
    pub dd: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub depths: Vec<DepthPair>,
    /// `None` when the correlation is undefined; see `consistency_error`.
    pub consistency: Option<f64>,
    pub consistency_error: Option<String>,
    pub neglected: Vec<String>,
    pub gains: Vec<f64>,
    pub igl: Vec<f64>,
    pub perplexity: f64,
    pub f1: Option<F1Report>,
}

/// Pairs every described activity with its modeling depth and the depth of
/// the sentence describing it.
pub fn depth_pairs(doc: &TextDocument, md: &BTreeMap<String, usize>) -> Vec<DepthPair> {
    let mut seen = BTreeMap::new();
    for s in doc.sentences.iter().filter(|s| s.kind == SentenceKind::Activity) {
        for a in &s.activities {
            if let Some(&m) = md.get(a) {
                seen.entry(a.clone()).or_insert(DepthPair { activity: a.clone(), md: m, dd: s.depth });
            }
        }
    }
    seen.into_values().collect()
}

/// Labeled transitions of `model` that no activity sentence describes.
pub fn neglected(model: &PetriNet, doc: &TextDocument) -> BTreeSet<String> {
    let described: BTreeSet<&str> = doc
        .sentences
        .iter()
        .filter(|s| s.kind == SentenceKind::Activity)
        .flat_map(|s| s.activities.iter().map(String::as_str))
        .collect();
    model.labels().keys().filter(|t| !described.contains(t.as_str())).cloned().collect()
}

/// Per-paragraph gains; paragraphs describing no activity are left out.
pub fn paragraph_gains(doc: &TextDocument, neglected: usize) -> Vec<f64> {
    let mut per: BTreeMap<usize, BTreeSet<&str>> = BTreeMap::new();
    for s in doc.sentences.iter().filter(|s| s.kind == SentenceKind::Activity) {
        per.entry(s.paragraph).or_default().extend(s.activities.iter().map(String::as_str));
    }
    per.values().filter(|t| !t.is_empty()).map(|t| info_gain(t.len(), neglected)).collect()
}

pub fn evaluate(
    model: &NetSystem,
    md: &BTreeMap<String, usize>,
    doc: &TextDocument,
    reproduced: Option<&NetSystem>,
    state_bound: usize,
) -> Result<EvalReport> {
    let depths = depth_pairs(doc, md);
    let xs: Vec<f64> = depths.iter().map(|d| d.md as f64).collect();
    let ys: Vec<f64> = depths.iter().map(|d| d.dd as f64).collect();
    let (rho, rho_error) = match consistency(&xs, &ys) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let neglected = neglected(&model.net, doc);
    let gains = paragraph_gains(doc, neglected.len());
    Ok(EvalReport {
        depths,
        consistency: rho,
        consistency_error: rho_error,
        neglected: neglected.into_iter().collect(),
        igl: igl(&gains),
        perplexity: perplexity(&gains),
        gains,
        f1: reproduced.map(|r| compare(model, r, state_bound)).transpose()?,
    })
}
