//! End-to-end translation, intermediate dumps and evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{cfp_to_dot, path_to_dot, read_model, ModelDocument};
use crate::lang::{build_rdt, Lexicon, Rdt};
use crate::metrics::{evaluate, EvalReport};
use crate::paths::{enumerate_paths, extract_segments, prune, PathSet, PrunedPath, Segment, DEFAULT_CHAIN_BOUND};
use crate::petri::{diagnose, Diagnosis, NetSystem, DEFAULT_STATE_BOUND};
use crate::realize::{
    aggregate, check_grammar_meta, plan_sentences, realize_text, Catalog, PlanInput, RealizeConfig, TextDocument,
    DEFAULT_MAX_PARAGRAPH_WORDS,
};
use crate::rpst::{decompose, simplify, RpstTree, Substitution};
use crate::unfold::{unfold, Cfp, DEFAULT_EVENT_BOUND};

pub const DEFAULT_RECURSION_LIMIT: usize = 32;
pub const LEXICON_ENV: &str = "BEPT_LEXICON";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Md,
    Json,
    #[default]
    Both,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" => Ok(OutputFormat::Md),
            "json" => Ok(OutputFormat::Json),
            "both" => Ok(OutputFormat::Both),
            other => Err(Error::InvalidConfig(format!("unknown output format {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub max_paragraph_words: usize,
    pub state_bound: usize,
    pub event_bound: usize,
    pub chain_bound: usize,
    pub lexicon_path: Option<PathBuf>,
    pub template_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub include_diagnosis: bool,
    pub default_role: Option<String>,
    pub pronoun: String,
    pub recursion_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_paragraph_words: DEFAULT_MAX_PARAGRAPH_WORDS,
            state_bound: DEFAULT_STATE_BOUND,
            event_bound: DEFAULT_EVENT_BOUND,
            chain_bound: DEFAULT_CHAIN_BOUND,
            lexicon_path: None,
            template_path: None,
            output_format: OutputFormat::default(),
            include_diagnosis: true,
            default_role: None,
            pronoun: "he".to_string(),
            recursion_limit: DEFAULT_RECURSION_LIMIT,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let bounds = [
            ("state_bound", self.state_bound),
            ("event_bound", self.event_bound),
            ("chain_bound", self.chain_bound),
            ("recursion_limit", self.recursion_limit),
        ];
        for (name, v) in bounds {
            if v < 1 {
                return Err(Error::InvalidConfig(format!("{name} must be at least 1")));
            }
        }
        if self.max_paragraph_words < 10 {
            return Err(Error::InvalidConfig("max_paragraph_words must be at least 10".into()));
        }
        if self.default_role.as_deref().is_some_and(|r| r.trim().is_empty()) {
            return Err(Error::InvalidConfig("default_role is empty".into()));
        }
        if self.pronoun.trim().is_empty() {
            return Err(Error::InvalidConfig("pronoun is empty".into()));
        }
        Ok(())
    }

    /// The configured lexicon, else the one named by `BEPT_LEXICON`, else
    /// the bundled one.
    pub fn lexicon(&self) -> Result<Lexicon> {
        let env = std::env::var_os(LEXICON_ENV).map(PathBuf::from);
        match self.lexicon_path.clone().or(env) {
            Some(p) => Lexicon::load(&p),
            None => Ok(Lexicon::bundled()),
        }
    }

    pub fn catalog(&self) -> Result<Catalog> {
        match &self.template_path {
            Some(p) => Catalog::load(p),
            None => Ok(Catalog::bundled()),
        }
    }
}

/// Everything computed about one (possibly simplified) model.
#[derive(Debug, Clone)]
pub struct Analysis {
    /// Decomposition of the model before simplification.
    pub tree: RpstTree,
    pub system: NetSystem,
    pub cfp: Cfp,
    pub segments: Vec<Segment>,
    pub paths: PathSet,
    pub pruned: Vec<PrunedPath>,
    pub rdt: Rdt,
    pub diagnosis: Option<Diagnosis>,
    pub substitutions: BTreeMap<String, (Substitution, Analysis)>,
}

impl Analysis {
    pub fn plan_input(&self) -> PlanInput<'_> {
        PlanInput {
            system: &self.system,
            cfp: &self.cfp,
            segments: &self.segments,
            paths: &self.paths.paths,
            pruned: &self.pruned,
            rdt: &self.rdt,
            diagnosis: self.diagnosis.as_ref(),
            substitutions: self
                .substitutions
                .iter()
                .map(|(id, (s, a))| (id.clone(), (s, a.plan_input())))
                .collect(),
        }
    }

    fn collect_flags(&self, out: &mut BTreeSet<String>) {
        for (t, info) in &self.rdt.labels {
            if info.support_verb {
                out.insert(format!("{t}: no verb in label, using \"perform\""));
            }
        }
        for (_, a) in self.substitutions.values() {
            a.collect_flags(out);
        }
    }
}

pub struct Pipeline {
    pub config: Config,
    lexicon: Lexicon,
    catalog: Catalog,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub warnings: Vec<String>,
    pub neglected: Vec<String>,
    pub timings_ms: BTreeMap<&'static str, f64>,
}

pub struct Translation {
    pub document: TextDocument,
    pub analysis: Option<Analysis>,
    pub report: Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Rpst,
    Cfp,
    Segments,
    Paths,
    Rdt,
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rpst" => Ok(Stage::Rpst),
            "cfp" => Ok(Stage::Cfp),
            "segments" => Ok(Stage::Segments),
            "paths" => Ok(Stage::Paths),
            "rdt" => Ok(Stage::Rdt),
            other => Err(Error::UnknownStage(other.to_string())),
        }
    }
}

fn timed<T>(timings: &mut BTreeMap<&'static str, f64>, phase: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let start = Instant::now();
    let out = f().map_err(|e| e.in_phase(phase));
    *timings.entry(phase).or_default() += start.elapsed().as_secs_f64() * 1000.0;
    out
}

impl Pipeline {
    pub fn new(config: Config) -> Result<Self> {
        config.validate()?;
        let lexicon = config.lexicon()?;
        let catalog = config.catalog()?;
        Ok(Pipeline { config, lexicon, catalog })
    }

    /// Decomposes, simplifies and unfolds a model, then recurses into every
    /// simplified component.
    pub fn analyze_system(
        &self,
        system: &NetSystem,
        roles: &BTreeMap<String, String>,
        depth: usize,
        report: &mut Report,
    ) -> Result<Analysis> {
        if depth > self.config.recursion_limit {
            return Err(Error::RecursionLimit(self.config.recursion_limit));
        }
        let cfg = &self.config;
        let t = &mut report.timings_ms;
        let (tree, simplified, subs) = timed(t, "structure embedding", || {
            let tree = decompose(system)?;
            let (simplified, subs) = simplify(system, &tree)?;
            Ok((tree, simplified, subs))
        })?;
        let (cfp, segments, paths, pruned) = timed(t, "behavior embedding", || {
            let cfp = unfold(&simplified, cfg.event_bound)?;
            let segments = extract_segments(&cfp, &simplified)?;
            let paths = enumerate_paths(&cfp, &simplified, &segments, cfg.chain_bound);
            let pruned = prune(&paths.paths);
            Ok((cfp, segments, paths, pruned))
        })?;
        if paths.truncated {
            report.warnings.push(format!("path enumeration stopped at {} chains", cfg.chain_bound));
        }
        let rdt = timed(&mut report.timings_ms, "deep-syntactic embedding", || {
            let transitions = simplified
                .net
                .transitions()
                .iter()
                .map(|t| {
                    let role = roles.get(t).cloned().or_else(|| cfg.default_role.clone());
                    (t.clone(), (simplified.net.label(t).map(str::to_string), role))
                })
                .collect();
            build_rdt(&tree, &transitions, &self.lexicon)
        })?;
        let diagnosis = if depth == 0 && cfg.include_diagnosis {
            match diagnose(system, cfg.state_bound) {
                Ok(d) => Some(d),
                Err(e @ Error::StateSpaceExceeded(_)) => {
                    report.warnings.push(format!("diagnosis skipped: {e}"));
                    None
                }
                Err(e) => return Err(e.in_phase("diagnosis")),
            }
        } else {
            None
        };
        let mut substitutions = BTreeMap::new();
        for (id, sub) in subs {
            let inner = self.analyze_system(&sub.system, roles, depth + 1, report)?;
            substitutions.insert(id, (sub, inner));
        }
        Ok(Analysis { tree, system: simplified, cfp, segments, paths, pruned, rdt, diagnosis, substitutions })
    }

    pub fn translate(&self, model: &ModelDocument) -> Result<Translation> {
        let mut report = Report { warnings: model.warnings.clone(), ..Report::default() };
        let original = &model.system;
        let silent: Vec<String> =
            original.net.transitions().iter().filter(|t| original.net.label(t).is_none()).cloned().collect();
        if original.net.is_empty() {
            let document = TextDocument {
                name: model.name().map(str::to_string),
                provenance: crate::realize::Provenance {
                    initial: original.initial.clone(),
                    finals: original.finals.iter().cloned().collect(),
                    ..Default::default()
                },
                warnings: report.warnings.clone(),
                ..TextDocument::default()
            };
            return Ok(Translation { document, analysis: None, report });
        }
        let analysis = self.analyze_system(original, &model.roles(), 0, &mut report)?;
        let input = analysis.plan_input();
        let md = &analysis.tree.depth_of;
        let cfg = RealizeConfig { max_paragraph_words: self.config.max_paragraph_words, pronoun: self.config.pronoun.clone() };
        let (plan, provenance) = timed(&mut report.timings_ms, "sentence planning", || {
            let (plan, provenance) = plan_sentences(&input, md, &self.catalog)?;
            Ok((aggregate(check_grammar_meta(plan)?), provenance))
        })?;
        let realized = timed(&mut report.timings_ms, "surface realization", || {
            realize_text(&plan, &self.lexicon, &self.catalog, &cfg)
        })?;
        let mut document = TextDocument {
            name: model.name().map(str::to_string),
            markdown: realized.markdown,
            sentences: realized.sentences,
            paragraphs: realized.paragraphs,
            provenance,
            neglected: Vec::new(),
            silent,
            flags: Vec::new(),
            warnings: Vec::new(),
        };
        document.neglected = crate::metrics::neglected(&original.net, &document).into_iter().collect();
        let mut flags = BTreeSet::new();
        analysis.collect_flags(&mut flags);
        document.flags = flags.into_iter().collect();
        document.warnings = report.warnings.clone();
        report.neglected = document.neglected.clone();
        drop(input);
        Ok(Translation { document, analysis: Some(analysis), report })
    }

    pub fn translate_file(&self, path: &Path) -> Result<Translation> {
        let model = read_model(path).map_err(|e| e.in_phase("parse"))?;
        self.translate(&model)
    }

    /// Dumps one intermediate result, as JSON or (for the prefix and the
    /// paths) as DOT.
    pub fn analyze(&self, model: &ModelDocument, stage: Stage, dot: bool) -> Result<String> {
        let mut report = Report::default();
        let system = &model.system;
        if stage == Stage::Rpst {
            return Ok(serde_json::to_string_pretty(&decompose(system)?)?);
        }
        let a = self.analyze_system(system, &model.roles(), 0, &mut report)?;
        let json = match stage {
            Stage::Rpst => unreachable!("handled above"),
            Stage::Cfp if dot => return Ok(cfp_to_dot(&a.cfp)),
            Stage::Paths if dot => {
                return Ok(a.paths.paths.iter().map(|p| path_to_dot(&a.cfp, p)).collect::<Vec<_>>().join("\n"))
            }
            Stage::Cfp => serde_json::json!({
                "conditions": a.cfp.conditions,
                "events": a.cfp.events,
                "cutoffs": a.cfp.cutoffs(),
                "shadows": a.cfp.shadow_ids(),
            }),
            Stage::Segments => serde_json::json!(a
                .segments
                .iter()
                .map(|s| serde_json::json!({
                    "id": s.id,
                    "transitions": s.transitions(&a.cfp),
                    "arcs": s.arcs(&a.cfp),
                    "tars": s.tars,
                }))
                .collect::<Vec<_>>()),
            Stage::Paths => serde_json::json!({
                "truncated": a.paths.truncated,
                "paths": a.paths.paths.iter().enumerate().map(|(i, p)| serde_json::json!({
                    "id": p.id,
                    "kind": p.kind,
                    "segments": p.segment_ids(&a.segments),
                    "sequence": p.sequence,
                    "tars": p.tars,
                    "kept": a.pruned.iter().find(|k| k.path == i).map(|k| &k.kept),
                })).collect::<Vec<_>>(),
            }),
            Stage::Rdt => serde_json::to_value(&a.rdt)?,
        };
        Ok(serde_json::to_string_pretty(&json)?)
    }

    pub fn eval(&self, model: &ModelDocument, generated: &str, reproduced: Option<&ModelDocument>) -> Result<EvalReport> {
        let doc = TextDocument::from_json(generated)?;
        let tree = decompose(&model.system)?;
        evaluate(&model.system, &tree.depth_of, &doc, reproduced.map(|m| &m.system), self.config.state_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_bounds() {
        assert!(Config::default().validate().is_ok());
        let small = Config { max_paragraph_words: 9, ..Config::default() };
        assert!(matches!(small.validate(), Err(Error::InvalidConfig(_))));
        let zero = Config { state_bound: 0, ..Config::default() };
        assert!(matches!(zero.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn stages_and_formats() {
        assert_eq!("paths".parse::<Stage>().unwrap(), Stage::Paths);
        assert!(matches!("tree".parse::<Stage>(), Err(Error::UnknownStage(_))));
        assert_eq!("md".parse::<OutputFormat>().unwrap(), OutputFormat::Md);
        assert!("pdf".parse::<OutputFormat>().is_err());
    }
}
