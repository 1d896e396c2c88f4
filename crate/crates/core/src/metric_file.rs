//! The line-oriented metric file format.
//!
//! ```text
//! # comment
//! [chart]
//! name = schwarzschild
//! coords = t, r, theta, phi
//!
//! [params]
//! M = 1
//!
//! [metric]
//! g[t,t] = 1 - 2*M/r
//! g[t,r] = 0
//! ...                      # all ten entries with a <= b in some order
//!
//! [tetrad]                 # optional; contravariant components
//! k    = [1/(1-2*M/r), 1, 0, 0]
//! l    = [1/2, -(1-2*M/r)/2, 0, 0]
//! m_re = [0, 0, 1/(sqrt(2)*r), 0]
//! m_im = [0, 0, 0, 1/(sqrt(2)*r*sin(theta))]
//!
//! [points]
//! p1 = t=0, r=3, theta=pi/3, phi=0
//!
//! [flags]                  # optional
//! static = true
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::expr::{parse_expr, Bindings, Expr, Scope};
use crate::geometry::{GeometryError, MetricField, SamplePoint, SYM_PAIRS};
use crate::np::{validate_tetrad, NullTetrad};

/// Tolerance used for tetrad normalization when a file is loaded.
pub const LOAD_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("[{section}] {message}")]
    Validation { section: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid tetrad at point `{point}`: failing products {}", failing.join(", "))]
    Tetrad { point: String, failing: Vec<String> },
}

impl LoadError {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::Geometry(
                GeometryError::Degenerate { .. } | GeometryError::Signature { .. },
            ) => 2,
            LoadError::Tetrad { .. } => 3,
            _ => 1,
        }
    }
}

/// A parsed and validated metric file.
#[derive(Debug, Clone)]
pub struct MetricFile {
    pub metric: MetricField,
    pub is_static: bool,
}

impl MetricFile {
    pub fn name(&self) -> &str {
        self.metric.name()
    }
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

const SECTIONS: [&str; 6] = ["chart", "params", "metric", "tetrad", "points", "flags"];

fn parse_err(line: usize, message: impl Into<String>) -> LoadError {
    LoadError::Parse {
        line,
        message: message.into(),
    }
}

fn validation(section: &str, message: impl Into<String>) -> LoadError {
    LoadError::Validation {
        section: section.to_string(),
        message: message.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits on commas that are not inside parentheses or brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn sections(text: &str) -> Result<BTreeMap<String, Vec<Entry>>, LoadError> {
    let mut out: BTreeMap<String, Vec<Entry>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line, "unterminated section header"))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(parse_err(line, format!("unknown section `[{name}]`")));
            }
            if out.contains_key(name) {
                return Err(parse_err(line, format!("section `[{name}]` appears twice")));
            }
            out.insert(name.to_string(), Vec::new());
            current = Some(name.to_string());
            continue;
        }
        let section = current
            .as_ref()
            .ok_or_else(|| parse_err(line, "entry before any section header"))?;
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
        let key = key.trim().to_string();
        let entries = out.get_mut(section).expect("section exists");
        if entries.iter().any(|e| e.key == key) {
            return Err(parse_err(line, format!("duplicate key `{key}` in [{section}]")));
        }
        entries.push(Entry {
            line,
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(out)
}

fn expr_at(text: &str, scope: &Scope, line: usize) -> Result<Expr, LoadError> {
    parse_expr(text, scope).map_err(|e| parse_err(line, format!("in `{text}`: {e}")))
}

fn constant_at(text: &str, scope: &Scope, params: &[f64], line: usize) -> Result<f64, LoadError> {
    let e = expr_at(text, scope, line)?;
    e.eval(&Bindings::from_slices(&[], params))
        .map_err(|err| parse_err(line, err.to_string()))
}

/// Parses metric file text. `default_name` is used when `[chart]` has no `name`.
pub fn parse_metric_file(text: &str, default_name: &str) -> Result<MetricFile, LoadError> {
    let secs = sections(text)?;
    let empty = Vec::new();
    let get = |name: &str| secs.get(name).unwrap_or(&empty);

    // [chart]
    let chart = secs
        .get("chart")
        .ok_or_else(|| validation("chart", "missing section"))?;
    let mut name = default_name.to_string();
    let mut coords: Option<Vec<String>> = None;
    for e in chart {
        match e.key.as_str() {
            "name" => name = e.value.clone(),
            "coords" => {
                let list: Vec<String> = e.value.split(',').map(|s| s.trim().to_string()).collect();
                if list.len() != 4 {
                    return Err(parse_err(
                        e.line,
                        format!("a chart needs exactly 4 coordinates, got {}", list.len()),
                    ));
                }
                for (i, c) in list.iter().enumerate() {
                    if !is_ident(c) || c == "pi" {
                        return Err(parse_err(e.line, format!("`{c}` is not a valid coordinate name")));
                    }
                    if list[..i].contains(c) {
                        return Err(parse_err(e.line, format!("coordinate `{c}` repeated")));
                    }
                }
                coords = Some(list);
            }
            other => return Err(parse_err(e.line, format!("unknown key `{other}` in [chart]"))),
        }
    }
    let coords = coords.ok_or_else(|| validation("chart", "missing `coords`"))?;

    // [params]
    let mut param_names: Vec<String> = Vec::new();
    let mut param_values: Vec<f64> = Vec::new();
    for e in get("params") {
        if !is_ident(&e.key) || e.key == "pi" || coords.contains(&e.key) {
            return Err(parse_err(e.line, format!("`{}` is not a valid parameter name", e.key)));
        }
        let scope = Scope::new::<&str>(&[], &param_names.iter().map(String::as_str).collect::<Vec<_>>());
        let v = constant_at(&e.value, &scope, &param_values, e.line)?;
        param_names.push(e.key.clone());
        param_values.push(v);
    }
    let scope = Scope::new(&coords, &param_names);
    let param_scope = Scope::new::<String>(&[], &param_names);

    // [metric]
    let mut comps: Vec<Option<Expr>> = vec![None; 10];
    for e in get("metric") {
        let inner = e
            .key
            .strip_prefix("g[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| parse_err(e.line, format!("expected `g[a,b]`, got `{}`", e.key)))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| parse_err(e.line, format!("expected `g[a,b]`, got `{}`", e.key)))?;
        let index = |c: &str| {
            scope
                .coord_index(c.trim())
                .ok_or_else(|| parse_err(e.line, format!("`{}` is not a coordinate", c.trim())))
        };
        let (a, b) = (index(a)?, index(b)?);
        let k = crate::geometry::sym_index(a, b);
        if comps[k].is_some() {
            return Err(parse_err(e.line, format!("metric entry `{}` given twice", e.key)));
        }
        comps[k] = Some(expr_at(&e.value, &scope, e.line)?);
    }
    let mut components = Vec::with_capacity(10);
    for (k, c) in comps.into_iter().enumerate() {
        let (a, b) = SYM_PAIRS[k];
        components.push(c.ok_or_else(|| {
            validation("metric", format!("missing entry g[{},{}]", coords[a], coords[b]))
        })?);
    }

    // [points]
    let mut points = Vec::new();
    for e in get("points") {
        let mut values: [Option<f64>; 4] = [None; 4];
        for binding in split_top_level(&e.value) {
            let (c, v) = binding
                .split_once('=')
                .ok_or_else(|| parse_err(e.line, format!("expected `coord=value`, got `{binding}`")))?;
            let i = scope
                .coord_index(c.trim())
                .ok_or_else(|| parse_err(e.line, format!("`{}` is not a coordinate", c.trim())))?;
            if values[i].is_some() {
                return Err(parse_err(e.line, format!("coordinate `{}` bound twice", coords[i])));
            }
            values[i] = Some(constant_at(v.trim(), &param_scope, &param_values, e.line)?);
        }
        let mut xs = [0.0; 4];
        for i in 0..4 {
            xs[i] = values[i].ok_or_else(|| {
                parse_err(e.line, format!("point `{}` does not bind `{}`", e.key, coords[i]))
            })?;
        }
        points.push(SamplePoint {
            name: e.key.clone(),
            coords: xs,
        });
    }
    if points.is_empty() {
        return Err(validation("points", "at least one sample point is required"));
    }
    points.sort_by(|a, b| a.name.cmp(&b.name));

    // [tetrad]
    let tetrad = match secs.get("tetrad") {
        None => None,
        Some(entries) => {
            let mut fields: BTreeMap<&str, [Expr; 4]> = BTreeMap::new();
            for e in entries {
                if !["k", "l", "m_re", "m_im"].contains(&e.key.as_str()) {
                    return Err(parse_err(e.line, format!("unknown tetrad field `{}`", e.key)));
                }
                let list = e
                    .value
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| parse_err(e.line, "expected `[e1, e2, e3, e4]`"))?;
                let parts = split_top_level(list);
                if parts.len() != 4 {
                    return Err(parse_err(e.line, format!("expected 4 components, got {}", parts.len())));
                }
                let exprs = parts
                    .iter()
                    .map(|p| expr_at(p, &scope, e.line))
                    .collect::<Result<Vec<_>, _>>()?;
                fields.insert(
                    match e.key.as_str() {
                        "k" => "k",
                        "l" => "l",
                        "m_re" => "m_re",
                        _ => "m_im",
                    },
                    exprs.try_into().expect("four components"),
                );
            }
            let mut take = |k: &str| {
                fields
                    .remove(k)
                    .ok_or_else(|| validation("tetrad", format!("missing field `{k}`")))
            };
            let (k, l, m_re, m_im) = (take("k")?, take("l")?, take("m_re")?, take("m_im")?);
            Some(NullTetrad::new(k, l, m_re, m_im).map_err(GeometryError::from)?)
        }
    };

    // [flags]
    let mut is_static = false;
    for e in get("flags") {
        match (e.key.as_str(), e.value.as_str()) {
            ("static", "true") => is_static = true,
            ("static", "false") => is_static = false,
            ("static", other) => {
                return Err(parse_err(e.line, format!("`static` must be true or false, got `{other}`")))
            }
            (other, _) => return Err(parse_err(e.line, format!("unknown flag `{other}`"))),
        }
    }

    let mut metric = MetricField::new(name, scope, param_values, components)?.with_points(points);
    if let Some(t) = tetrad {
        metric = metric.with_tetrad(t);
    }
    for p in metric.points() {
        metric.check_point(p)?;
        if metric.tetrad().is_some() {
            let report = validate_tetrad(&metric, p, LOAD_TOL)?;
            if !report.valid {
                return Err(LoadError::Tetrad {
                    point: p.name.clone(),
                    failing: report
                        .failing(LOAD_TOL)
                        .iter()
                        .map(|r| r.product.clone())
                        .collect(),
                });
            }
        }
    }
    Ok(MetricFile { metric, is_static })
}

pub fn load_metric_file(path: &Path) -> Result<MetricFile, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("metric");
    parse_metric_file(&text, stem)
}
