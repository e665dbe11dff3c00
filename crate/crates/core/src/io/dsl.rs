//! Line-oriented model format.
//!
//! ```text
//! # comment
//! name "bioinformatics"
//! place P_a *          # one initial token (`*3` for three)
//! place P_d final      # the process may rest here
//! trans T_a "extract genes" role="experimenter"
//! trans T_s            # silent
//! arc P_a T_a
//! meta author "lab 4"
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{ModelDocument, NAME_KEY, SOURCE_KEY};
use crate::error::{Error, Location, Result};
use crate::petri::{Marking, NetSystem, PetriNet};

#[derive(Debug, Clone)]
struct Token {
    text: String,
    quoted: bool,
    column: usize,
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let column = i + 1;
        let mut text = String::new();
        let mut quoted = false;
        // a bare prefix such as `role=` may be followed by a quoted value
        while i < chars.len() && !chars[i].is_whitespace() && chars[i] != '"' && chars[i] != '#' {
            text.push(chars[i]);
            i += 1;
        }
        if i < chars.len() && chars[i] == '"' {
            quoted = true;
            i += 1;
            let mut closed = false;
            while i < chars.len() {
                match chars[i] {
                    '\\' if i + 1 < chars.len() => {
                        text.push(chars[i + 1]);
                        i += 2;
                    }
                    '"' => {
                        closed = true;
                        i += 1;
                        break;
                    }
                    ch => {
                        text.push(ch);
                        i += 1;
                    }
                }
            }
            if !closed {
                return Err(Error::parse(line_no, column, "unterminated string"));
            }
        }
        tokens.push(Token {
            text,
            quoted,
            column,
        });
    }
    Ok(tokens)
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':'))
}

struct PlaceDecl {
    id: String,
    tokens: u32,
    is_final: bool,
    at: Location,
}

struct TransDecl {
    id: String,
    label: Option<String>,
    role: Option<String>,
    at: Location,
}

pub fn parse_dsl(text: &str) -> Result<ModelDocument> {
    let mut places = Vec::new();
    let mut transitions = Vec::new();
    let mut arcs = Vec::new();
    let mut metadata = BTreeMap::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = tokenize(line, line_no)?;
        let Some(head) = tokens.first() else { continue };
        let at = Location {
            line: line_no,
            column: head.column,
        };
        let ident = |i: usize, what: &str| -> Result<String> {
            match tokens.get(i) {
                Some(t) if !t.quoted && is_identifier(&t.text) => Ok(t.text.clone()),
                Some(t) => Err(Error::parse(line_no, t.column, format!("invalid {what} `{}`", t.text))),
                None => Err(Error::parse(line_no, line.len() + 1, format!("missing {what}"))),
            }
        };
        match head.text.as_str() {
            "name" => {
                let value = tokens
                    .get(1)
                    .ok_or_else(|| Error::parse(line_no, head.column, "missing model name"))?;
                metadata.insert(NAME_KEY.to_string(), value.text.clone());
            }
            "meta" => {
                let key = ident(1, "metadata key")?;
                let value = tokens
                    .get(2)
                    .ok_or_else(|| Error::parse(line_no, head.column, "missing metadata value"))?;
                metadata.insert(key, value.text.clone());
            }
            "place" => {
                let id = ident(1, "place id")?;
                let mut decl = PlaceDecl {
                    id,
                    tokens: 0,
                    is_final: false,
                    at,
                };
                for t in &tokens[2..] {
                    if t.text == "final" && !t.quoted {
                        decl.is_final = true;
                    } else if let Some(n) = t.text.strip_prefix('*').filter(|_| !t.quoted) {
                        decl.tokens = if n.is_empty() {
                            1
                        } else {
                            n.parse().map_err(|_| {
                                Error::parse(line_no, t.column, format!("bad token count `{}`", t.text))
                            })?
                        };
                    } else {
                        return Err(Error::parse(line_no, t.column, format!("unexpected `{}`", t.text)));
                    }
                }
                places.push(decl);
            }
            "trans" => {
                let id = ident(1, "transition id")?;
                let mut decl = TransDecl {
                    id,
                    label: None,
                    role: None,
                    at,
                };
                for t in &tokens[2..] {
                    if let Some(role) = t.text.strip_prefix("role=") {
                        if role.trim().is_empty() {
                            return Err(Error::parse(line_no, t.column, "empty role"));
                        }
                        decl.role = Some(role.trim().to_string());
                    } else if t.quoted && decl.label.is_none() {
                        decl.label = Some(t.text.clone());
                    } else {
                        return Err(Error::parse(line_no, t.column, format!("unexpected `{}`", t.text)));
                    }
                }
                transitions.push(decl);
            }
            "arc" => {
                let from = ident(1, "arc source")?;
                let to = ident(2, "arc target")?;
                if let Some(extra) = tokens.get(3) {
                    return Err(Error::parse(line_no, extra.column, "trailing input after arc"));
                }
                arcs.push((from, to, at));
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    head.column,
                    format!("unknown statement `{other}`"),
                ))
            }
        }
    }

    let mut net = PetriNet::new();
    let mut initial = Marking::new();
    let mut finals = Vec::new();
    for p in &places {
        net.add_place(p.id.clone()).map_err(|_| Error::DuplicateId {
            id: p.id.clone(),
            location: p.at,
        })?;
        initial.add(&p.id, p.tokens);
        if p.is_final {
            finals.push(p.id.clone());
        }
    }
    for t in &transitions {
        net.add_transition(t.id.clone(), t.label.as_deref())
            .map_err(|_| Error::DuplicateId {
                id: t.id.clone(),
                location: t.at,
            })?;
    }
    for (from, to, at) in &arcs {
        match (net.kind(from), net.kind(to)) {
            (None, _) => return Err(Error::parse(at.line, at.column, format!("unknown node `{from}`"))),
            (_, None) => return Err(Error::parse(at.line, at.column, format!("unknown node `{to}`"))),
            (Some(a), Some(b)) if a == b => {
                return Err(Error::BipartiteViolation {
                    from: from.clone(),
                    to: to.clone(),
                    location: *at,
                })
            }
            _ => net.add_arc(from, to)?,
        }
    }
    let system = NetSystem::new(net, initial)?.with_finals(finals)?;
    let mut doc = ModelDocument::new(system);
    doc.metadata = metadata;
    for t in &transitions {
        if let Some(role) = &t.role {
            doc.set_role(&t.id, role)?;
        }
    }
    Ok(doc)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Serializes in canonical order: name, metadata, places, transitions, arcs.
pub fn write_dsl(doc: &ModelDocument) -> String {
    let mut out = String::new();
    let net = &doc.system.net;
    if let Some(name) = doc.name() {
        let _ = writeln!(out, "name {}", quote(name));
    }
    for (k, v) in &doc.metadata {
        if k == NAME_KEY || k == SOURCE_KEY || k.starts_with("role:") || !is_identifier(k) {
            continue;
        }
        let _ = writeln!(out, "meta {k} {}", quote(v));
    }
    for p in net.places() {
        let _ = write!(out, "place {p}");
        match doc.system.initial.tokens(p) {
            0 => {}
            1 => out.push_str(" *"),
            n => {
                let _ = write!(out, " *{n}");
            }
        }
        if doc.system.finals.contains(p) {
            out.push_str(" final");
        }
        out.push('\n');
    }
    for t in net.transitions() {
        let _ = write!(out, "trans {t}");
        if let Some(label) = net.label(t) {
            let _ = write!(out, " {}", quote(label));
        }
        if let Some(role) = doc.role(t) {
            let _ = write!(out, " role={}", quote(role));
        }
        out.push('\n');
    }
    for (a, b) in net.arcs() {
        let _ = writeln!(out, "arc {a} {b}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const N1: &str = r#"
# bioinformatics example
name "N1"
place P_a *
place P_b
place P_c
place P_d
trans T_a "extract genes" role="experimenter"
trans T_b "sequence DNA" role="experimenter"
trans T_c "analyze DNA"
trans T_d "record data"
arc P_a T_a
arc T_a P_b
arc P_b T_b
"#;

    #[test]
    fn parses_statements() {
        let doc = parse_dsl(N1).unwrap();
        let net = &doc.system.net;
        assert_eq!(net.places().len(), 4);
        assert_eq!(net.transitions().len(), 4);
        assert_eq!(net.arcs().len(), 3);
        assert_eq!(net.label("T_a"), Some("extract genes"));
        assert_eq!(doc.role("T_a"), Some("experimenter"));
        assert_eq!(doc.role("T_c"), None);
        assert_eq!(doc.system.initial.tokens("P_a"), 1);
        assert_eq!(doc.name(), Some("N1"));
    }

    #[test]
    fn blank_file_is_empty_net() {
        let doc = parse_dsl("\n# nothing here\n   \n").unwrap();
        assert!(doc.system.net.is_empty());
    }

    #[test]
    fn transition_to_transition_arc_is_rejected() {
        let err = parse_dsl("trans T_a\ntrans T_b\narc T_a T_b\n").unwrap_err();
        match err {
            Error::BipartiteViolation { location, .. } => assert_eq!(location.line, 3),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn duplicate_id_reports_line() {
        let err = parse_dsl("place p\ntrans p\n").unwrap_err();
        match err {
            Error::DuplicateId { id, location } => {
                assert_eq!(id, "p");
                assert_eq!(location.line, 2);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn errors_carry_locations() {
        for (src, line) in [
            ("place p\nfoo bar\n", 2),
            ("trans t \"open\n", 1),
            ("place p *x\n", 1),
            ("place p\narc p q\n", 2),
        ] {
            match parse_dsl(src).unwrap_err() {
                Error::Parse { location, .. } => assert_eq!(location.line, line, "{src}"),
                e => panic!("unexpected {e}"),
            }
        }
    }

    #[test]
    fn final_places_and_token_counts() {
        let doc = parse_dsl("place a *2\nplace b final\n").unwrap();
        assert_eq!(doc.system.initial.tokens("a"), 2);
        assert!(doc.system.finals.contains("b"));
        let again = parse_dsl(&write_dsl(&doc)).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn escaped_quotes_survive() {
        let doc = parse_dsl(r#"trans t "say \"hi\"" role="a \\ b""#).unwrap();
        assert_eq!(doc.system.net.label("t"), Some(r#"say "hi""#));
        assert_eq!(parse_dsl(&write_dsl(&doc)).unwrap(), doc);
    }
}
