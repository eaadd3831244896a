//! The line-oriented cloud file format.
//!
//! ```text
//! # comment
//! cloud firefly
//! vertex a label "|a>"
//! context a v2 v3
//! context v3 v4 b
//! terminals a b
//! vector b = (1*r2, 1, 1)
//! tolerance 1e-9
//! ```
//!
//! Exact scalars are `R`, `R*r2`, `R+R*r2` or `R-R*r2` with `R` an optionally
//! signed integer or `int/int`. Float scalars are decimal literals. Plain
//! integers fit both; a file may not mix the other two kinds.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::cloud::{is_token, Cloud, CloudError};
use crate::geometry::{GeometryError, QScalar, Ray, Representation, DEFAULT_TOLERANCE};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed file: the cloud and, if any `vector` lines were present, its
/// representation.
#[derive(Clone, Debug, PartialEq)]
pub struct CloudFile {
    pub cloud: Cloud,
    pub representation: Option<Representation>,
}

pub fn parse_cloud(text: &str) -> Result<Cloud, ParseError> {
    parse_cloud_file(text).map(|f| f.cloud)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum ScalarKind {
    Neutral,
    Exact,
    Float,
}

struct RawScalar {
    text: String,
    kind: ScalarKind,
    column: usize,
}

struct RawVector {
    vertex: String,
    line: usize,
    column: usize,
    scalars: Vec<RawScalar>,
}

pub fn parse_cloud_file(text: &str) -> Result<CloudFile, ParseError> {
    let mut builder = Cloud::builder("cloud");
    let mut named = false;
    let mut terminals_at: Option<(usize, usize)> = None;
    let mut context_lines: Vec<(usize, usize)> = Vec::new();
    let mut vectors: Vec<RawVector> = Vec::new();
    let mut tolerance: Option<f64> = None;

    for (li, raw) in text.lines().enumerate() {
        let line_no = li + 1;
        let line = strip_comment(raw);
        let words = split_words(line);
        let Some(&(kw_col, kw)) = words.first() else {
            continue;
        };
        let err = |column: usize, message: String| ParseError {
            line: line_no,
            column,
            message,
        };
        let ids = |ws: &[(usize, &str)]| -> Result<Vec<String>, ParseError> {
            ws.iter()
                .map(|&(c, w)| {
                    if is_token(w) {
                        Ok(w.to_string())
                    } else {
                        Err(err(c, format!("invalid vertex name `{w}`")))
                    }
                })
                .collect()
        };
        match kw {
            "cloud" => {
                if named {
                    return Err(err(kw_col, "second `cloud` header".into()));
                }
                match &words[1..] {
                    [(_, name)] if is_token(name) => {
                        builder.name(*name);
                        named = true;
                    }
                    [(c, name)] => return Err(err(*c, format!("invalid cloud name `{name}`"))),
                    _ => return Err(err(kw_col, "expected `cloud <name>`".into())),
                }
            }
            "vertex" => {
                let rest = &line[kw_col - 1 + kw.len()..];
                let (id_col, id, label) =
                    parse_vertex_line(rest, kw_col - 1 + kw.len()).map_err(|(c, m)| err(c, m))?;
                if !is_token(id) {
                    return Err(err(id_col, format!("invalid vertex name `{id}`")));
                }
                builder
                    .vertex(id, label.as_deref())
                    .map_err(|e| err(id_col, e.to_string()))?;
            }
            "context" => {
                let members = ids(&words[1..])?;
                if members.len() < 2 {
                    return Err(err(kw_col, "a context needs at least 2 vertices".into()));
                }
                builder
                    .context(&members)
                    .map_err(|e| err(kw_col, e.to_string()))?;
                context_lines.push((line_no, kw_col));
            }
            "terminals" => {
                if terminals_at.is_some() {
                    return Err(err(kw_col, "second `terminals` line".into()));
                }
                let t = ids(&words[1..])?;
                if t.len() != 2 {
                    return Err(err(kw_col, "expected `terminals <a> <b>`".into()));
                }
                builder.terminals(&t[0], &t[1]);
                terminals_at = Some((line_no, words[1].0));
            }
            "vector" => {
                let rest_start = kw_col - 1 + kw.len();
                vectors.push(
                    parse_vector_line(&line[rest_start..], rest_start, line_no)
                        .map_err(|(c, m)| err(c, m))?,
                );
            }
            "tolerance" => match &words[1..] {
                [(c, t)] => match t.parse::<f64>() {
                    Ok(x) if x > 0.0 && x.is_finite() => tolerance = Some(x),
                    _ => return Err(err(*c, format!("invalid tolerance `{t}`"))),
                },
                _ => return Err(err(kw_col, "expected `tolerance <decimal>`".into())),
            },
            other => return Err(err(kw_col, format!("unknown directive `{other}`"))),
        }
    }

    let cloud = builder.build().map_err(|e| {
        let (line, column) = match &e {
            CloudError::DuplicateContext { index, .. }
            | CloudError::ContextTooSmall { index, .. }
            | CloudError::RepeatedMember { index, .. } => context_lines[*index],
            _ => terminals_at.unwrap_or((1, 1)),
        };
        ParseError {
            line,
            column,
            message: e.to_string(),
        }
    })?;

    let representation = if vectors.is_empty() {
        None
    } else {
        Some(build_representation(&cloud, vectors, tolerance)?)
    };
    Ok(CloudFile {
        cloud,
        representation,
    })
}

fn build_representation(
    cloud: &Cloud,
    vectors: Vec<RawVector>,
    tolerance: Option<f64>,
) -> Result<Representation, ParseError> {
    let mut exact_at = None;
    let mut float_at = None;
    for v in &vectors {
        for s in &v.scalars {
            match s.kind {
                ScalarKind::Exact => exact_at = exact_at.or(Some((v.line, s.column))),
                ScalarKind::Float => float_at = float_at.or(Some((v.line, s.column))),
                ScalarKind::Neutral => {}
            }
        }
        if v.scalars.len() != 3 {
            float_at = float_at.or(Some((v.line, v.column)));
        }
    }
    if let (Some(e), Some(f)) = (exact_at, float_at) {
        let (line, column) = e.max(f);
        return Err(ParseError {
            line,
            column,
            message: "exact and float coordinates mixed in one file (non-3D vectors are float)"
                .into(),
        });
    }
    let float = float_at.is_some();
    let mut rep = if float {
        Representation::float(tolerance.unwrap_or(DEFAULT_TOLERANCE)).expect("positive tolerance")
    } else {
        Representation::exact()
    };
    for v in vectors {
        let at = |column: usize, message: String| ParseError {
            line: v.line,
            column,
            message,
        };
        let Some(i) = cloud.index_of(&v.vertex) else {
            return Err(at(
                v.column,
                format!("vector for unknown vertex `{}`", v.vertex),
            ));
        };
        if rep.get(&v.vertex).is_some() {
            return Err(at(v.column, format!("second vector for `{}`", v.vertex)));
        }
        let ray = if float {
            let mut comps = Vec::with_capacity(v.scalars.len());
            for s in &v.scalars {
                comps.push(
                    s.text
                        .parse::<f64>()
                        .map_err(|_| at(s.column, format!("invalid number `{}`", s.text)))?,
                );
            }
            Ray::float(comps)
        } else {
            let mut comps = Vec::with_capacity(3);
            for s in &v.scalars {
                comps.push(
                    parse_exact(&s.text)
                        .ok_or_else(|| at(s.column, format!("invalid scalar `{}`", s.text)))?,
                );
            }
            let arr: [QScalar; 3] = comps.try_into().expect("three components");
            Ray::exact(arr)
        };
        let ray = ray.map_err(|e: GeometryError| at(v.column, e.to_string()))?;
        rep.insert(cloud.vertex(i).clone(), ray)
            .map_err(|e| at(v.column, e.to_string()))?;
    }
    Ok(rep)
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Whitespace-separated words with 1-based columns.
fn split_words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

type LineResult<T> = Result<T, (usize, String)>;

/// `<id> [label "<text>"]`; `offset` is the byte offset of `rest` in the line.
fn parse_vertex_line(rest: &str, offset: usize) -> LineResult<(usize, &str, Option<String>)> {
    let words = split_words(rest);
    let Some(&(id_col, id)) = words.first() else {
        return Err((offset + 1, "expected `vertex <id>`".into()));
    };
    let id_col = id_col + offset;
    let after = rest[id_col - offset - 1 + id.len()..].trim_start();
    if after.is_empty() {
        return Ok((id_col, id, None));
    }
    let col = offset + rest.len() - after.len() + 1;
    let Some(after) = after.strip_prefix("label") else {
        return Err((col, "expected `label \"<text>\"`".into()));
    };
    let after = after.trim();
    if after.len() >= 2 && after.starts_with('"') && after.ends_with('"') {
        let inner = &after[1..after.len() - 1];
        if inner.contains('"') {
            return Err((col, "labels cannot contain `\"`".into()));
        }
        Ok((id_col, id, Some(inner.to_string())))
    } else {
        Err((col, "label text must be in double quotes".into()))
    }
}

/// `<id> = (<s>, <s>, ...)`.
fn parse_vector_line(rest: &str, offset: usize, line: usize) -> LineResult<RawVector> {
    let Some(eq) = rest.find('=') else {
        return Err((offset + 1, "expected `vector <id> = (...)`".into()));
    };
    let head = split_words(&rest[..eq]);
    let [(id_col, id)] = head[..] else {
        return Err((offset + 1, "expected exactly one vertex before `=`".into()));
    };
    if !is_token(id) {
        return Err((offset + id_col, format!("invalid vertex name `{id}`")));
    }
    let body = &rest[eq + 1..];
    let trimmed = body.trim();
    let body_col = offset + eq + 2 + (body.len() - body.trim_start().len());
    if !(trimmed.starts_with('(') && trimmed.ends_with(')')) {
        return Err((body_col, "coordinates must be in parentheses".into()));
    }
    let inner = &trimmed[1..trimmed.len() - 1];
    let mut scalars = Vec::new();
    let mut pos = 0;
    for part in inner.split(',') {
        let text = part.trim();
        let column = body_col + 1 + pos + (part.len() - part.trim_start().len());
        pos += part.len() + 1;
        let kind = classify_scalar(text).ok_or((column, format!("invalid scalar `{text}`")))?;
        scalars.push(RawScalar {
            text: text.to_string(),
            kind,
            column,
        });
    }
    Ok(RawVector {
        vertex: id.to_string(),
        line,
        column: offset + id_col,
        scalars,
    })
}

fn classify_scalar(s: &str) -> Option<ScalarKind> {
    if s.is_empty() {
        return None;
    }
    if parse_int(s).is_some() {
        return Some(ScalarKind::Neutral);
    }
    if parse_exact(s).is_some() {
        return Some(ScalarKind::Exact);
    }
    let decimal = s
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    if decimal && s.parse::<f64>().is_ok_and(f64::is_finite) {
        return Some(ScalarKind::Float);
    }
    None
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `int` or `int/int`, optionally signed.
fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        None => parse_int(s).map(BigRational::from_integer),
        Some((n, d)) => {
            if d.starts_with(['+', '-']) {
                return None;
            }
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
    }
}

/// One exact scalar in the file grammar.
pub fn parse_exact(s: &str) -> Option<QScalar> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let surd = |t: &str| -> Option<BigRational> {
        match t {
            "r2" | "+r2" => Some(BigRational::from_integer(1.into())),
            "-r2" => Some(BigRational::from_integer((-1).into())),
            _ => parse_rational(t.strip_suffix("*r2")?),
        }
    };
    if let Some(p) = parse_rational(&s) {
        return Some(QScalar::new(p, BigRational::zero()));
    }
    if let Some(q) = surd(&s) {
        return Some(QScalar::new(BigRational::zero(), q));
    }
    // R+R*r2 or R-R*r2: split at the sign that starts the surd part.
    let bytes = s.as_bytes();
    for i in (1..bytes.len()).rev() {
        if bytes[i] == b'+' || bytes[i] == b'-' {
            let (head, tail) = s.split_at(i);
            if let (Some(p), Some(q)) = (parse_rational(head), surd(tail)) {
                return Some(QScalar::new(p, q));
            }
        }
    }
    None
}

/// Writes a cloud (and optional representation) in the file format.
pub fn serialize(cloud: &Cloud, rep: Option<&Representation>) -> String {
    let mut out = String::new();
    out.push_str(&format!("cloud {}\n", cloud.name()));
    let mut mention = Vec::new();
    let mut seen = vec![false; cloud.vertex_count()];
    for c in cloud.contexts() {
        for &v in c.members() {
            if !seen[v] {
                seen[v] = true;
                mention.push(v);
            }
        }
    }
    let natural = mention == (0..cloud.vertex_count()).collect::<Vec<_>>();
    let vertex_line = |v: usize| match cloud.label(v) {
        Some(l) => format!("vertex {} label \"{l}\"\n", cloud.vertex(v)),
        None => format!("vertex {}\n", cloud.vertex(v)),
    };
    if !natural {
        for v in 0..cloud.vertex_count() {
            out.push_str(&vertex_line(v));
        }
    }
    for ci in 0..cloud.context_count() {
        let names: Vec<&str> = cloud.context_names(ci).iter().map(|v| v.as_str()).collect();
        out.push_str(&format!("context {}\n", names.join(" ")));
    }
    if natural {
        for v in 0..cloud.vertex_count() {
            if cloud.label(v).is_some() {
                out.push_str(&vertex_line(v));
            }
        }
    }
    if let Some((a, b)) = cloud.terminal_names() {
        out.push_str(&format!("terminals {a} {b}\n"));
    }
    if let Some(rep) = rep {
        if let crate::geometry::Mode::Float { tolerance } = rep.mode() {
            out.push_str(&format!("tolerance {tolerance:e}\n"));
        }
        for v in cloud.vertices() {
            if let Some(r) = rep.get(v.as_str()) {
                out.push_str(&format!("vector {v} = {r}\n"));
            }
        }
    }
    out
}

impl fmt::Display for Cloud {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self, None))
    }
}
