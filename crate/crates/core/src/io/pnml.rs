//! PNML subset: `net`, `page`, `place`, `transition`, `arc`, `name`,
//! `initialMarking`, plus `finalmarkings` and a `toolspecific` role block.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use roxmltree::{Document, Node};

use super::{ModelDocument, NAME_KEY};
use crate::error::{Error, Location, Result};
use crate::petri::{Marking, NetSystem, PetriNet};

const TOOL: &str = "bept";

fn location(doc: &Document, node: Node) -> Location {
    let pos = doc.text_pos_at(node.range().start);
    Location {
        line: pos.row as usize,
        column: pos.col as usize,
    }
}

fn err_at(doc: &Document, node: Node, message: impl Into<String>) -> Error {
    let at = location(doc, node);
    Error::parse(at.line, at.column, message)
}

fn child<'a, 'i>(node: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    node.children()
        .find(|c| c.is_element() && c.tag_name().name() == name)
}

/// Text of `<tag><text>..</text></tag>`.
fn text_of(node: Node, tag: &str) -> Option<String> {
    child(node, tag)
        .and_then(|n| child(n, "text"))
        .and_then(|t| t.text())
        .map(|s| s.trim().to_string())
}

/// Accepts `1` as well as the `Default,1` form some tools emit.
fn parse_count(doc: &Document, node: Node, raw: &str) -> Result<u32> {
    let tail = raw.rsplit(',').next().unwrap_or(raw).trim();
    if tail.is_empty() {
        return Ok(0);
    }
    tail.parse()
        .map_err(|_| err_at(doc, node, format!("bad token count `{raw}`")))
}

struct Collected<'a, 'i> {
    places: Vec<Node<'a, 'i>>,
    transitions: Vec<Node<'a, 'i>>,
    arcs: Vec<Node<'a, 'i>>,
}

fn collect<'a, 'i>(
    doc: &Document,
    container: Node<'a, 'i>,
    out: &mut Collected<'a, 'i>,
    warnings: &mut Vec<String>,
) {
    for n in container.children().filter(|c| c.is_element()) {
        match n.tag_name().name() {
            "place" => out.places.push(n),
            "transition" => out.transitions.push(n),
            "arc" => out.arcs.push(n),
            "page" => collect(doc, n, out, warnings),
            "name" | "graphics" => {}
            other => warnings.push(format!("{}: ignored <{other}>", location(doc, n))),
        }
    }
}

pub fn parse_pnml(bytes: &[u8]) -> Result<ModelDocument> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::parse(1, 1, format!("input is not UTF-8: {e}")))?;
    let doc = Document::parse(text).map_err(|e| {
        let pos = e.pos();
        Error::parse(pos.row as usize, pos.col as usize, e.to_string())
    })?;
    let root = doc.root_element();
    let net_node = if root.tag_name().name() == "net" {
        root
    } else if root.tag_name().name() == "pnml" {
        match child(root, "net") {
            Some(n) => n,
            None => return Err(err_at(&doc, root, "no <net> element")),
        }
    } else {
        return Err(err_at(&doc, root, format!("unexpected root <{}>", root.tag_name().name())));
    };

    let mut warnings = Vec::new();
    let mut found = Collected {
        places: Vec::new(),
        transitions: Vec::new(),
        arcs: Vec::new(),
    };
    collect(&doc, net_node, &mut found, &mut warnings);

    let mut net = PetriNet::new();
    let mut initial = Marking::new();
    let mut roles = BTreeMap::new();
    let id_of = |n: Node| -> Result<String> {
        n.attribute("id")
            .map(str::to_string)
            .ok_or_else(|| err_at(&doc, n, format!("<{}> without id", n.tag_name().name())))
    };
    for p in &found.places {
        let id = id_of(*p)?;
        net.add_place(id.clone()).map_err(|_| Error::DuplicateId {
            id: id.clone(),
            location: location(&doc, *p),
        })?;
        if let Some(raw) = text_of(*p, "initialMarking") {
            initial.add(&id, parse_count(&doc, *p, &raw)?);
        }
    }
    for t in &found.transitions {
        let id = id_of(*t)?;
        let label = text_of(*t, "name");
        net.add_transition(id.clone(), label.as_deref())
            .map_err(|_| Error::DuplicateId {
                id: id.clone(),
                location: location(&doc, *t),
            })?;
        for ts in t
            .children()
            .filter(|c| c.is_element() && c.tag_name().name() == "toolspecific")
        {
            if ts.attribute("tool") == Some(TOOL) {
                if let Some(role) = child(ts, "role").and_then(|r| r.text()).map(str::trim) {
                    if role.is_empty() {
                        return Err(err_at(&doc, ts, "empty role"));
                    }
                    roles.insert(id.clone(), role.to_string());
                }
            } else {
                warnings.push(format!(
                    "{}: ignored toolspecific block of {}",
                    location(&doc, ts),
                    ts.attribute("tool").unwrap_or("unknown tool")
                ));
            }
        }
    }
    for a in &found.arcs {
        let (Some(src), Some(dst)) = (a.attribute("source"), a.attribute("target")) else {
            return Err(err_at(&doc, *a, "arc needs source and target"));
        };
        match (net.kind(src), net.kind(dst)) {
            (None, _) => return Err(err_at(&doc, *a, format!("unknown node `{src}`"))),
            (_, None) => return Err(err_at(&doc, *a, format!("unknown node `{dst}`"))),
            (Some(x), Some(y)) if x == y => {
                return Err(Error::BipartiteViolation {
                    from: src.to_string(),
                    to: dst.to_string(),
                    location: location(&doc, *a),
                })
            }
            _ => net.add_arc(src, dst)?,
        }
    }

    let mut finals = Vec::new();
    if let Some(fm) = child(root, "finalmarkings").or_else(|| child(net_node, "finalmarkings")) {
        for marking in fm.children().filter(|c| c.is_element()) {
            for p in marking.children().filter(|c| c.is_element()) {
                let Some(idref) = p.attribute("idref") else {
                    return Err(err_at(&doc, p, "final marking place without idref"));
                };
                let count = match child(p, "text").and_then(|t| t.text()) {
                    Some(raw) => parse_count(&doc, p, raw)?,
                    None => 1,
                };
                if count > 0 {
                    if !net.places().contains(idref) {
                        return Err(err_at(&doc, p, format!("unknown place `{idref}`")));
                    }
                    finals.push(idref.to_string());
                }
            }
        }
    }

    let system = NetSystem::new(net, initial)?.with_finals(finals)?;
    let mut out = ModelDocument::new(system);
    if let Some(name) = text_of(net_node, "name") {
        out.metadata.insert(NAME_KEY.to_string(), name);
    }
    for (t, r) in roles {
        out.set_role(&t, &r)?;
    }
    out.warnings = warnings;
    Ok(out)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn write_pnml(doc: &ModelDocument) -> String {
    let net = &doc.system.net;
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pnml>\n");
    let id = doc.name().unwrap_or("net");
    let _ = writeln!(
        out,
        "  <net id=\"{}\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">",
        escape(id)
    );
    if let Some(name) = doc.name() {
        let _ = writeln!(out, "    <name><text>{}</text></name>", escape(name));
    }
    out.push_str("    <page id=\"page0\">\n");
    for p in net.places() {
        let tokens = doc.system.initial.tokens(p);
        if tokens == 0 {
            let _ = writeln!(out, "      <place id=\"{}\"/>", escape(p));
        } else {
            let _ = writeln!(
                out,
                "      <place id=\"{}\"><initialMarking><text>{tokens}</text></initialMarking></place>",
                escape(p)
            );
        }
    }
    for t in net.transitions() {
        let _ = write!(out, "      <transition id=\"{}\">", escape(t));
        if let Some(label) = net.label(t) {
            let _ = write!(out, "<name><text>{}</text></name>", escape(label));
        }
        if let Some(role) = doc.role(t) {
            let _ = write!(
                out,
                "<toolspecific tool=\"{TOOL}\" version=\"1\"><role>{}</role></toolspecific>",
                escape(role)
            );
        }
        out.push_str("</transition>\n");
    }
    for (i, (a, b)) in net.arcs().iter().enumerate() {
        let _ = writeln!(
            out,
            "      <arc id=\"a{i}\" source=\"{}\" target=\"{}\"/>",
            escape(a),
            escape(b)
        );
    }
    out.push_str("    </page>\n  </net>\n");
    if !doc.system.finals.is_empty() {
        out.push_str("  <finalmarkings>\n    <marking>\n");
        for p in &doc.system.finals {
            let _ = writeln!(out, "      <place idref=\"{}\"><text>1</text></place>", escape(p));
        }
        out.push_str("    </marking>\n  </finalmarkings>\n");
    }
    out.push_str("</pnml>\n");
    out
}
