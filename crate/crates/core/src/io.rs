//! Line-oriented text format for torus graphs and weighted site sets.
//!
//! ```text
//! version 1
//! torus 1 0 0 1
//! vertex v0 0.0 0.0
//! edge a v0 v0 1 0
//! edge b v0 v0 0 1
//! edge c v0 v0 1 1
//! rotation v0 +a +c +b -a -c -b
//! stress a 1.0
//! weight v0 0.0
//! ```
//!
//! `+e` in a rotation is the dart of `e` leaving its tail, `-e` the dart
//! leaving its head. `#` starts a comment. `stress` and `weight` sections are
//! optional but must be complete when present.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::coherence::{Site, SiteSet, VertexWeights};
use crate::equilibrium::Stress;
use crate::error::{Error, Result};
use crate::geometry::{IVec2, Mat2, TorusShape, Vec2};
use crate::graph::{Dart, EdgeSpec, TorusGraph, VertexSpec};

pub const FORMAT_VERSION: u32 = 1;

/// A parsed graph file.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDocument {
    pub graph: TorusGraph,
    pub stress: Option<Stress>,
    pub weights: Option<VertexWeights>,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn float(&self) -> Result<f64> {
        match self.text.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(self.error(format!("expected a finite number, found `{}`", self.text))),
        }
    }

    fn int(&self) -> Result<i64> {
        self.text
            .parse::<i64>()
            .map_err(|_| self.error(format!("expected an integer, found `{}`", self.text)))
    }
}

/// Non-empty, comment-stripped lines split into tokens with 1-based columns.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (j, ch) in body
            .char_indices()
            .chain(std::iter::once((body.len(), ' ')))
        {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &body[s..j],
                        line: i + 1,
                        column: body[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            lines.push(tokens);
        }
    }
    lines
}

fn expect_arity(tokens: &[Token<'_>], n: usize, usage: &str) -> Result<()> {
    if tokens.len() != n {
        let at = tokens.get(n).unwrap_or(&tokens[0]);
        return Err(at.error(format!("expected `{usage}`")));
    }
    Ok(())
}

fn parse_torus(tokens: &[Token<'_>]) -> Result<TorusShape> {
    expect_arity(tokens, 5, "torus a b c d")?;
    let m = Mat2::new(
        tokens[1].float()?,
        tokens[2].float()?,
        tokens[3].float()?,
        tokens[4].float()?,
    );
    TorusShape::new(m).map_err(|e| tokens[0].error(e.to_string()))
}

fn parse_version(lines: &[Vec<Token<'_>>]) -> Result<()> {
    let Some(first) = lines.first() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "empty document".into(),
        });
    };
    if first[0].text != "version" {
        return Err(first[0].error("document must start with `version 1`"));
    }
    expect_arity(first, 2, "version 1")?;
    if first[1].int()? != FORMAT_VERSION as i64 {
        return Err(first[1].error(format!("unsupported version {}", first[1].text)));
    }
    Ok(())
}

/// Parses a graph document and validates the resulting map.
pub fn parse(text: &str) -> Result<GraphDocument> {
    let lines = tokenize(text);
    parse_version(&lines)?;

    let mut shape = None;
    let mut vertices: Vec<VertexSpec> = Vec::new();
    let mut vertex_lines: Vec<usize> = Vec::new();
    let mut vertex_ids: HashMap<&str, usize> = HashMap::new();
    let mut edges: Vec<EdgeSpec> = Vec::new();
    let mut edge_ids: HashMap<&str, usize> = HashMap::new();
    let mut rotation_lines = Vec::new();
    let mut stress_lines = Vec::new();
    let mut weight_lines = Vec::new();

    for tokens in &lines[1..] {
        let head = tokens[0];
        match head.text {
            "torus" => {
                if shape.is_some() {
                    return Err(head.error("duplicate `torus` line"));
                }
                shape = Some(parse_torus(tokens)?);
            }
            "vertex" => {
                expect_arity(tokens, 4, "vertex name x y")?;
                let name = tokens[1].text;
                if vertex_ids.insert(name, vertices.len()).is_some() {
                    return Err(tokens[1].error(format!("duplicate vertex `{name}`")));
                }
                let p = Vec2::new(tokens[2].float()?, tokens[3].float()?);
                vertices.push(VertexSpec::new(name, p));
                vertex_lines.push(head.line);
            }
            "edge" => {
                expect_arity(tokens, 6, "edge name tail head hx hy")?;
                let name = tokens[1].text;
                let lookup = |t: &Token<'_>| {
                    vertex_ids
                        .get(t.text)
                        .copied()
                        .ok_or_else(|| t.error(format!("unknown vertex `{}`", t.text)))
                };
                let tail = lookup(&tokens[2])?;
                let head_v = lookup(&tokens[3])?;
                let h = IVec2::new(tokens[4].int()?, tokens[5].int()?);
                if edge_ids.insert(name, edges.len()).is_some() {
                    return Err(tokens[1].error(format!("duplicate edge `{name}`")));
                }
                edges.push(EdgeSpec::new(name, tail, head_v, h));
            }
            "rotation" => rotation_lines.push(tokens),
            "stress" => stress_lines.push(tokens),
            "weight" => weight_lines.push(tokens),
            "version" => return Err(head.error("duplicate `version` line")),
            other => return Err(head.error(format!("unknown record `{other}`"))),
        }
    }
    let Some(shape) = shape else {
        return Err(Error::Parse {
            line: lines[0][0].line,
            column: 1,
            message: "missing `torus` line".into(),
        });
    };

    let mut rotations: Vec<Option<Vec<Dart>>> = vec![None; vertices.len()];
    for tokens in rotation_lines {
        if tokens.len() < 2 {
            return Err(tokens[0].error("expected `rotation vertex ±edge ...`"));
        }
        let v = *vertex_ids
            .get(tokens[1].text)
            .ok_or_else(|| tokens[1].error(format!("unknown vertex `{}`", tokens[1].text)))?;
        if rotations[v].is_some() {
            return Err(tokens[1].error(format!("duplicate rotation for `{}`", tokens[1].text)));
        }
        let mut darts = Vec::with_capacity(tokens.len() - 2);
        for t in &tokens[2..] {
            let (reference, name) = if let Some(rest) = t.text.strip_prefix('+') {
                (true, rest)
            } else if let Some(rest) = t.text.strip_prefix('-') {
                (false, rest)
            } else {
                return Err(t.error(format!("dart `{}` must start with + or -", t.text)));
            };
            let e = *edge_ids
                .get(name)
                .ok_or_else(|| t.error(format!("unknown edge `{name}`")))?;
            darts.push(if reference {
                Dart::reference(e)
            } else {
                Dart::reversal(e)
            });
        }
        rotations[v] = Some(darts);
    }
    let rotations = rotations
        .into_iter()
        .enumerate()
        .map(|(v, r)| {
            r.ok_or_else(|| Error::Parse {
                line: vertex_lines[v],
                column: 1,
                message: format!("missing rotation for vertex `{}`", vertices[v].name),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let stress = collect_section(&stress_lines, &edge_ids, "stress", "edge")?.map(Stress::new);
    let weights =
        collect_section(&weight_lines, &vertex_ids, "weight", "vertex")?.map(VertexWeights::new);

    let graph = TorusGraph::build(shape, vertices, edges, rotations)?;
    Ok(GraphDocument {
        graph,
        stress,
        weights,
    })
}

/// Reads `keyword name value` lines into a dense vector indexed by `ids`.
fn collect_section(
    lines: &[&Vec<Token<'_>>],
    ids: &HashMap<&str, usize>,
    keyword: &str,
    kind: &str,
) -> Result<Option<Vec<f64>>> {
    if lines.is_empty() {
        return Ok(None);
    }
    let mut values = vec![None; ids.len()];
    for tokens in lines {
        expect_arity(tokens, 3, &format!("{keyword} {kind} value"))?;
        let i = *ids
            .get(tokens[1].text)
            .ok_or_else(|| tokens[1].error(format!("unknown {kind} `{}`", tokens[1].text)))?;
        if values[i].is_some() {
            return Err(tokens[1].error(format!("duplicate {keyword} for `{}`", tokens[1].text)));
        }
        values[i] = Some(tokens[2].float()?);
    }
    let last = lines[lines.len() - 1][0];
    let mut names: Vec<(&str, usize)> = ids.iter().map(|(k, v)| (*k, *v)).collect();
    names.sort_by_key(|(_, i)| *i);
    for (name, i) in names {
        if values[i].is_none() {
            return Err(last.error(format!(
                "{keyword} section has no value for {kind} `{name}`"
            )));
        }
    }
    Ok(Some(values.into_iter().map(Option::unwrap).collect()))
}

/// Reads a standalone stress file of `stress edge value` lines for `g`.
pub fn parse_stress(text: &str, g: &TorusGraph) -> Result<Stress> {
    let lines = tokenize(text);
    let ids: HashMap<&str, usize> = (0..g.edge_count()).map(|e| (g.edge_name(e), e)).collect();
    let mut stress_lines = Vec::new();
    for tokens in &lines {
        if tokens[0].text != "stress" {
            return Err(tokens[0].error(format!("unknown record `{}`", tokens[0].text)));
        }
        stress_lines.push(tokens);
    }
    match collect_section(&stress_lines, &ids, "stress", "edge")? {
        Some(values) => Ok(Stress::new(values)),
        None => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no `stress` lines".into(),
        }),
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical text for a graph, with optional stress and weight sections.
pub fn serialize(
    g: &TorusGraph,
    stress: Option<&Stress>,
    weights: Option<&VertexWeights>,
) -> String {
    let mut out = String::new();
    let m = g.shape().matrix();
    writeln!(out, "version {FORMAT_VERSION}").unwrap();
    writeln!(
        out,
        "torus {} {} {} {}",
        num(m.a),
        num(m.b),
        num(m.c),
        num(m.d)
    )
    .unwrap();
    for (v, spec) in g.vertices().iter().enumerate() {
        let p = g.position(v);
        writeln!(out, "vertex {} {} {}", spec.name, num(p.x), num(p.y)).unwrap();
    }
    for e in g.edge_specs() {
        writeln!(
            out,
            "edge {} {} {} {} {}",
            e.name,
            g.vertex_name(e.tail),
            g.vertex_name(e.head),
            e.homology.x,
            e.homology.y
        )
        .unwrap();
    }
    for v in 0..g.vertex_count() {
        write!(out, "rotation {}", g.vertex_name(v)).unwrap();
        for d in g.rotation(v) {
            let sign = if d.is_reference() { '+' } else { '-' };
            write!(out, " {sign}{}", g.edge_name(d.edge())).unwrap();
        }
        out.push('\n');
    }
    if let Some(s) = stress {
        for e in 0..g.edge_count() {
            writeln!(out, "stress {} {}", g.edge_name(e), num(s.get(e))).unwrap();
        }
    }
    if let Some(w) = weights {
        for v in 0..g.vertex_count() {
            writeln!(out, "weight {} {}", g.vertex_name(v), num(w.get(v))).unwrap();
        }
    }
    out
}

pub fn serialize_document(doc: &GraphDocument) -> String {
    serialize(&doc.graph, doc.stress.as_ref(), doc.weights.as_ref())
}

/// Parses a sites file: one `torus a b c d` line then `site name x y weight`
/// lines.
pub fn parse_sites(text: &str) -> Result<SiteSet> {
    let lines = tokenize(text);
    let mut shape = None;
    let mut sites = Vec::new();
    let mut names = HashMap::new();
    for tokens in &lines {
        let head = tokens[0];
        match head.text {
            "torus" => {
                if shape.is_some() {
                    return Err(head.error("duplicate `torus` line"));
                }
                shape = Some(parse_torus(tokens)?);
            }
            "site" => {
                expect_arity(tokens, 5, "site name x y weight")?;
                let name = tokens[1].text;
                if names.insert(name, sites.len()).is_some() {
                    return Err(tokens[1].error(format!("duplicate site `{name}`")));
                }
                let p = Vec2::new(tokens[2].float()?, tokens[3].float()?);
                sites.push(Site::new(name, p, tokens[4].float()?));
            }
            other => return Err(head.error(format!("unknown record `{other}`"))),
        }
    }
    let shape = shape.ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing `torus` line".into(),
    })?;
    if sites.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no `site` lines".into(),
        });
    }
    Ok(SiteSet { shape, sites })
}

pub fn serialize_sites(set: &SiteSet) -> String {
    let mut out = String::new();
    let m = set.shape.matrix();
    writeln!(
        out,
        "torus {} {} {} {}",
        num(m.a),
        num(m.b),
        num(m.c),
        num(m.d)
    )
    .unwrap();
    for s in &set.sites {
        writeln!(
            out,
            "site {} {} {} {}",
            s.name,
            num(s.position.x),
            num(s.position.y),
            num(s.weight)
        )
        .unwrap();
    }
    out
}
