//! Readers for the point, height, subdivision and dimension-vector formats.

use std::fs;
use std::path::Path;

use secpoly::gale::HighDimConfiguration;
use secpoly::rational::parse_rational;
use secpoly::{validate_subdivision, Cell, Error, HeightVector, PointConfiguration, Rational, Result, Subdivision};
use serde_json::Value;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, message: format!("{}: {e}", path.display()) })
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty lines with comments removed, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn rational_token(line: usize, tok: &str) -> Result<Rational> {
    parse_rational(tok).ok_or_else(|| parse_error(line, format!("not a rational number: {tok:?}")))
}

/// One point per line, coordinates separated by whitespace; the dimension
/// is the column count of the first point.
pub fn parse_points_text(text: &str) -> Result<HighDimConfiguration> {
    let mut points = Vec::new();
    let mut dim = None;
    for (line, l) in content_lines(text) {
        let coords = l.split_whitespace().map(|t| rational_token(line, t)).collect::<Result<Vec<_>>>()?;
        let d = *dim.get_or_insert(coords.len());
        if coords.len() != d {
            return Err(parse_error(line, format!("expected {d} coordinates, found {}", coords.len())));
        }
        points.push(coords);
    }
    let dim = dim.ok_or_else(|| parse_error(0, "no points"))?;
    HighDimConfiguration::new(dim, points)
}

pub fn parse_points(path: &Path) -> Result<HighDimConfiguration> {
    parse_points_text(&read(path)?)
}

pub fn parse_planar(path: &Path) -> Result<PointConfiguration> {
    parse_points(path)?.to_planar()
}

/// One height per line; `a;b;c` gives the successive infinitesimal levels.
pub fn parse_heights_text(text: &str, n: usize) -> Result<HeightVector> {
    let mut rows = Vec::new();
    for (line, l) in content_lines(text) {
        let values = l.split(';').map(|t| rational_token(line, t.trim())).collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            let first: &Vec<Rational> = first;
            if first.len() != values.len() {
                return Err(parse_error(line, format!("expected {} levels, found {}", first.len(), values.len())));
            }
        }
        rows.push(values);
    }
    if rows.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: rows.len() });
    }
    let depth = rows[0].len();
    HeightVector::from_levels((0..depth).map(|k| rows.iter().map(|r| r[k].clone()).collect()).collect())
}

pub fn parse_heights(path: &Path, n: usize) -> Result<HeightVector> {
    parse_heights_text(&read(path)?, n)
}

fn label_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    let arr = v.as_array().ok_or_else(|| parse_error(0, format!("{what} must be an array")))?;
    arr.iter()
        .map(|x| x.as_u64().map(|u| u as usize).ok_or_else(|| parse_error(0, format!("{what} must hold labels"))))
        .collect()
}

/// `{"cells": [[labels], ...], "unused": [labels]}`, checked for validity.
pub fn parse_subdivision_text(text: &str, config: &PointConfiguration) -> Result<Subdivision> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_error(e.line(), e.to_string()))?;
    let cells = v
        .get("cells")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_error(0, "missing \"cells\" array"))?
        .iter()
        .map(|c| label_list(c, "a cell").map(Cell::new))
        .collect::<Result<Vec<_>>>()?;
    let sub = Subdivision::new(cells, config.len());
    if let Some(unused) = v.get("unused") {
        let mut unused = label_list(unused, "\"unused\"")?;
        unused.sort_unstable();
        if unused != sub.unused {
            return Err(Error::InvalidSubdivision(format!("unused labels {unused:?} differ from {:?}", sub.unused)));
        }
    }
    let violations = validate_subdivision(config, &sub);
    if !violations.is_empty() {
        return Err(Error::InvalidSubdivision(format!("{violations:?}")));
    }
    Ok(sub)
}

pub fn parse_subdivision(path: &Path, config: &PointConfiguration) -> Result<Subdivision> {
    parse_subdivision_text(&read(path)?, config)
}

/// Comma-separated non-negative integers; the empty string is the empty list.
pub fn parse_csv(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::InvalidDelta(format!("not a non-negative integer: {t:?}"))))
        .collect()
}
