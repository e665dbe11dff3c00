//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the lines are always printed.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bept::io::read_model;
use bept::metrics::{compare, consistency, f1, info_gain, loop_free_traces, perplexity};
use bept::paths::{enumerate_paths, extract_segments, prune, PathKind, DEFAULT_CHAIN_BOUND};
use bept::petri::{tar_set, trace_set, NetSystem, Tar, DEFAULT_STATE_BOUND};
use bept::pipeline::{Config, Pipeline};
use bept::realize::{reconstruct, SentenceKind, TextDocument};
use bept::rpst::{decompose, ComponentKind};
use bept::unfold::{unfold, DEFAULT_EVENT_BOUND};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn corpus() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(root().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "pnet"))
        .collect();
    files.sort();
    files
}

fn model(name: &str) -> Result<NetSystem, String> {
    read_model(&root().join(format!("corpus/{name}.pnet"))).map(|m| m.system).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tars(pairs: &[(&str, &str)]) -> BTreeSet<Tar> {
    pairs.iter().map(|(a, b)| Tar::new(*a, *b)).collect()
}

fn worked_example() -> Check {
    let start = Instant::now();
    let n1 = model("n1")?;
    let got = tar_set(&n1, DEFAULT_STATE_BOUND).map_err(|e| e.to_string())?;
    let want = tars(&[("T_a", "T_b"), ("T_a", "T_c"), ("T_b", "T_d"), ("T_c", "T_d")]);
    ensure(got == want, || format!("TARs {got:?}"))?;
    let traces: BTreeSet<String> = trace_set(&n1, 20, 100).traces.iter().map(|t| t.0.join(" ")).collect();
    let want: BTreeSet<String> = ["T_a T_b T_d", "T_a T_c T_d"].iter().map(|s| s.to_string()).collect();
    ensure(traces == want, || format!("traces {traces:?}"))?;
    let tree = decompose(&n1).map_err(|e| e.to_string())?;
    let layer: Vec<ComponentKind> = tree.root.children.iter().map(|c| c.kind).collect();
    ensure(layer == [ComponentKind::Polygon, ComponentKind::Bond, ComponentKind::Polygon], || {
        format!("first layer {layer:?}")
    })?;
    let cfp = unfold(&n1, DEFAULT_EVENT_BOUND).map_err(|e| e.to_string())?;
    ensure(cfp.cutoffs() == ["T_c1"], || format!("cut-offs {:?}", cfp.cutoffs()))?;
    ensure(start.elapsed() < Duration::from_secs(1), || format!("took {:?}", start.elapsed()))
}

fn running_example() -> Check {
    let nstar = model("nstar")?;
    let cfp = unfold(&nstar, DEFAULT_EVENT_BOUND).map_err(|e| e.to_string())?;
    let shadows: Vec<String> = cfp.shadow_ids().into_iter().collect();
    ensure(shadows == ["P_a1", "P_a2", "P_b1", "P_b2", "P_d1"], || format!("shadows {shadows:?}"))?;
    let mut cut: Vec<&str> = cfp.cutoffs();
    cut.sort();
    ensure(cut == ["T_d1", "T_e1"], || format!("cut-offs {cut:?}"))?;
    let segments = extract_segments(&cfp, &nstar).map_err(|e| e.to_string())?;
    ensure(segments.len() == 4, || format!("{} segments", segments.len()))?;
    let set = enumerate_paths(&cfp, &nstar, &segments, DEFAULT_CHAIN_BOUND);
    let p4 = set.paths.iter().find(|p| p.segment_ids(&segments) == ["S3", "S1"]);
    let p4 = p4.ok_or("no path S3,S1")?;
    ensure(p4.chain.entry_image(&cfp) == ["P_b"] && p4.chain.exit_image(&cfp) == ["P_b"], || {
        "P4 boundary is not {P_b}".into()
    })?;

    let pipeline = Pipeline::new(Config::default()).map_err(|e| e.to_string())?;
    let doc = pipeline.translate_file(&root().join("corpus/nstar.pnet")).map_err(|e| e.to_string())?.document;
    let golden = std::fs::read_to_string(root().join("tests/golden/nstar.md")).map_err(|e| e.to_string())?;
    ensure(doc.markdown == golden, || "markdown differs from golden".into())?;
    let kinds: Vec<PathKind> = doc.provenance.paths.iter().map(|p| p.kind).collect();
    ensure(kinds == [PathKind::Main, PathKind::Loop, PathKind::Loop], || format!("paths {kinds:?}"))?;
    let main: Vec<&str> = doc
        .sentences
        .iter()
        .filter(|s| s.kind == SentenceKind::Activity && s.path.as_deref() == Some("P1"))
        .flat_map(|s| s.activities.iter().map(String::as_str))
        .collect();
    ensure(main == ["T_a", "T_b", "T_c"], || format!("main paragraph {main:?}"))?;
    let bullets: Vec<usize> = doc.paragraphs.iter().map(|p| p.depth).collect();
    ensure(bullets == [0, 1, 0, 1, 1, 0], || format!("paragraph depths {bullets:?}"))
}

fn property_suite() -> Check {
    let start = Instant::now();
    let files = corpus();
    ensure(files.len() >= 20, || format!("corpus has {} nets", files.len()))?;
    for file in &files {
        let name = file.file_stem().unwrap().to_string_lossy().to_string();
        let system = read_model(file).map_err(|e| format!("{name}: {e}"))?.system;
        let oracle = tar_set(&system, DEFAULT_STATE_BOUND).map_err(|e| format!("{name}: {e}"))?;
        let cfp = unfold(&system, DEFAULT_EVENT_BOUND).map_err(|e| format!("{name}: {e}"))?;
        let segments = extract_segments(&cfp, &system).map_err(|e| format!("{name}: {e}"))?;
        let set = enumerate_paths(&cfp, &system, &segments, DEFAULT_CHAIN_BOUND);
        let mut union = BTreeSet::new();
        for p in &set.paths {
            ensure(p.tars.is_subset(&oracle), || format!("{name}: {} not behavior", p.id))?;
            union.extend(p.tars.iter().cloned());
        }
        ensure(union == oracle, || format!("{name}: paths miss TARs"))?;
        let mut kept = BTreeSet::new();
        for p in prune(&set.paths) {
            for t in p.kept {
                ensure(kept.insert(t.clone()), || format!("{name}: {t} kept twice"))?;
            }
        }
        ensure(kept == oracle, || format!("{name}: pruning lost TARs"))?;
    }
    ensure(start.elapsed() < Duration::from_secs(30), || format!("took {:?}", start.elapsed()))
}

fn round_trip() -> Check {
    let pipeline = Pipeline::new(Config::default()).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for file in corpus() {
        let system = read_model(&file).map_err(|e| e.to_string())?.system;
        let acyclic = trace_set(&system, system.net.transitions().len() + 1, 100_000).traces.iter().all(|t| {
            let distinct: BTreeSet<&String> = t.0.iter().collect();
            distinct.len() == t.0.len()
        });
        if !acyclic || loop_free_traces(&system, 1).is_empty() {
            continue;
        }
        let doc = pipeline.translate(&read_model(&file).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let json = serde_json::to_string(&doc.document).map_err(|e| e.to_string())?;
        let back = TextDocument::from_json(&json).map_err(|e| e.to_string())?;
        let rebuilt = reconstruct(&back.provenance).map_err(|e| e.to_string())?;
        let r = compare(&system, &rebuilt, DEFAULT_STATE_BOUND).map_err(|e| e.to_string())?;
        ensure(r.tars.f1 == 1.0 && r.traces.f1 == 1.0, || {
            format!("{file:?}: TAR F1 {} trace F1 {}", r.tars.f1, r.traces.f1)
        })?;
        checked += 1;
    }
    ensure(checked >= 10, || format!("only {checked} loop-free nets"))
}

fn metric_units() -> Check {
    let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
    let r = consistency(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).map_err(|e| e.to_string())?;
    ensure(close(r, 1.0), || format!("rho {r}"))?;
    let r = consistency(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).map_err(|e| e.to_string())?;
    ensure(close(r, -1.0), || format!("rho {r}"))?;
    let psi = info_gain(2, 1);
    ensure(close(psi, 2.0 * std::f64::consts::E.powi(2)), || format!("psi {psi}"))?;
    let p = perplexity(&[2.0, 2.0]);
    ensure(close(p, 4.0), || format!("perplexity {p}"))?;
    let s = f1(0.5, 1.0, 1.0).f1;
    ensure(close(s, 2.0 / 3.0), || format!("F1 {s}"))
}

fn determinism() -> Check {
    let run = || -> Result<Vec<(String, String)>, String> {
        let pipeline = Pipeline::new(Config::default()).map_err(|e| e.to_string())?;
        corpus()
            .iter()
            .map(|f| {
                let d = pipeline.translate_file(f).map_err(|e| e.to_string())?.document;
                Ok((d.markdown.clone(), serde_json::to_string_pretty(&d).map_err(|e| e.to_string())?))
            })
            .collect()
    };
    ensure(run()? == run()?, || "outputs differ between runs".into())
}

fn paragraph_threshold() -> Check {
    let seq = read_model(&root().join("corpus/seq40.pnet")).map_err(|e| e.to_string())?;
    ensure(seq.system.net.transitions().len() == 40, || "seq40 is not 40 activities".into())?;
    let pipeline = Pipeline::new(Config::default()).map_err(|e| e.to_string())?;
    let doc = pipeline.translate(&seq).map_err(|e| e.to_string())?.document;
    let over: Vec<usize> = doc.paragraphs.iter().filter(|p| p.words > 75 && p.sentences.len() > 1).map(|p| p.words).collect();
    ensure(over.is_empty(), || format!("paragraphs over 75 words: {over:?}"))?;
    ensure(doc.paragraphs.len() > 3, || "text was not split".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("worked example N1", worked_example),
        ("running example N*", running_example),
        ("path properties over the corpus", property_suite),
        ("round trip of loop-free nets", round_trip),
        ("metric unit checks", metric_units),
        ("determinism", determinism),
        ("paragraph threshold", paragraph_threshold),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {}: PASS  {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
