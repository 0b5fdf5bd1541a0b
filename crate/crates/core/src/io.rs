//! Deterministic file formats: JSON for structured artifacts (root system
//! specs, polynomial bases, reports), CSV for sampled grids.
//!
//! All floats are serialized with 17 significant digits and object keys are
//! sorted, so identical inputs produce byte-identical files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::innerprod::{Backend, PairingTable, QuadratureGrid};
use crate::jacobi::{BasisEntry, JacobiBasis};
use crate::rootsys::{build_root_system, RootSystem, SystemName};
use crate::trigpoly::TrigPoly;
use crate::{Error, Result};

/// 17 significant digits: one leading digit plus 16 after the point.
pub fn format_sig17(v: f64) -> String {
    format!("{v:.16e}")
}

struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{}", format_sig17(value))
    }
}

/// Serializes a JSON value with sorted keys and pinned float formatting.
pub fn to_json_string(value: &Value) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    serde::Serialize::serialize(value, &mut ser)?;
    Ok(String::from_utf8(out).expect("json is utf8"))
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut s = to_json_string(value)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

/// `{"type": "A2", "multiplicities": {"short": 1.0}}`
pub fn system_to_json(rs: &RootSystem) -> Value {
    let mults: BTreeMap<String, f64> = rs
        .classes
        .iter()
        .map(|c| (c.name.to_string(), c.multiplicity))
        .collect();
    json!({ "type": rs.name.as_str(), "multiplicities": mults })
}

pub fn system_from_json(v: &Value) -> Result<Arc<RootSystem>> {
    let name = v
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidInput("missing root system `type`".into()))?;
    let name = SystemName::parse(name)?;
    let map = v
        .get("multiplicities")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::InvalidInput("missing `multiplicities`".into()))?;
    // Resolve per-class values by class name.
    let probe = build_root_system(name, &vec![0.0; class_count(name)])?;
    let mut mults = Vec::new();
    for c in &probe.classes {
        let m = map
            .get(c.name)
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::InvalidInput(format!("missing multiplicity `{}`", c.name)))?;
        mults.push(m);
    }
    build_root_system(name, &mults)
}

fn class_count(name: SystemName) -> usize {
    match name {
        SystemName::A1 | SystemName::A2 => 1,
        SystemName::BC2 => 3,
        _ => 2,
    }
}

fn backend_to_json(b: Backend) -> Value {
    match b {
        Backend::Exact => json!({ "kind": "exact" }),
        Backend::Quadrature { n } => json!({ "kind": "quadrature", "grid_n": n }),
    }
}

fn backend_from_json(v: &Value) -> Result<Backend> {
    match v.get("kind").and_then(Value::as_str) {
        Some("exact") => Ok(Backend::Exact),
        Some("quadrature") => {
            let n = v
                .get("grid_n")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidInput("missing `grid_n`".into()))? as usize;
            Ok(Backend::Quadrature { n })
        }
        _ => Err(Error::InvalidInput("unknown backend".into())),
    }
}

fn poly_to_json(p: &TrigPoly) -> Value {
    let terms: Vec<Value> = p
        .sorted_terms()
        .into_iter()
        .map(|(w, c)| json!({ "coords": w.coords.to_vec(), "re": c.re, "im": c.im }))
        .collect();
    Value::Array(terms)
}

fn poly_from_json(rs: &Arc<RootSystem>, v: &Value) -> Result<TrigPoly> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("polynomial must be an array".into()))?;
    let mut p = TrigPoly::zero(rs.clone());
    for term in arr {
        let coords = coords_from_json(term.get("coords"))?;
        let re = term.get("re").and_then(Value::as_f64).unwrap_or(0.0);
        let im = term.get("im").and_then(Value::as_f64).unwrap_or(0.0);
        p.add_term(coords, Complex64::new(re, im));
    }
    Ok(p)
}

fn coords_from_json(v: Option<&Value>) -> Result<[i32; 2]> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("missing weight coordinates".into()))?;
    let mut out = [0i32; 2];
    for (i, x) in arr.iter().enumerate().take(2) {
        out[i] = x
            .as_i64()
            .ok_or_else(|| Error::InvalidInput("weight coordinates must be integers".into()))?
            as i32;
    }
    Ok(out)
}

pub fn basis_to_json(basis: &JacobiBasis) -> Value {
    let entries: Vec<Value> = basis
        .entries
        .iter()
        .map(|e| {
            json!({
                "lambda": e.lambda.coords.to_vec(),
                "value_at_zero": e.value_at_zero,
                "norm_sq": e.norm_sq,
                "r": e.r,
                "theta": e.theta,
                "poly": poly_to_json(&e.poly),
            })
        })
        .collect();
    json!({
        "system": system_to_json(basis.root_system()),
        "max_shell": basis.max_shell,
        "backend": backend_to_json(basis.table().backend()),
        "quadrature_error_estimate": basis.table().err_estimate,
        "quadrature_doubling_delta": basis.table().doubling_delta,
        "entries": entries,
    })
}

pub fn write_basis(path: &Path, basis: &JacobiBasis) -> Result<()> {
    write_json(path, &basis_to_json(basis))
}

/// Reloads a basis. Entry data is taken from the file; the pairing table is
/// rebuilt deterministically for the stored backend.
pub fn basis_from_json(v: &Value) -> Result<JacobiBasis> {
    let rs = system_from_json(
        v.get("system")
            .ok_or_else(|| Error::InvalidInput("missing `system`".into()))?,
    )?;
    let max_shell = v
        .get("max_shell")
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::InvalidInput("missing `max_shell`".into()))?;
    let backend = backend_from_json(
        v.get("backend")
            .ok_or_else(|| Error::InvalidInput("missing `backend`".into()))?,
    )?;
    let table = PairingTable::build(&rs, backend, 2.0 * max_shell + 1e-9)?;
    let mut entries = Vec::new();
    for ev in v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("missing `entries`".into()))?
    {
        let coords = coords_from_json(ev.get("lambda"))?;
        let poly = poly_from_json(&rs, ev.get("poly").unwrap_or(&Value::Null))?;
        let value_at_zero = ev
            .get("value_at_zero")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::InvalidInput("missing `value_at_zero`".into()))?;
        let norm_sq = ev
            .get("norm_sq")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::InvalidInput("missing `norm_sq`".into()))?;
        let r = ev.get("r").and_then(Value::as_f64).unwrap_or(0.0);
        let theta = ev.get("theta").and_then(Value::as_f64).unwrap_or(0.0);
        let rpoly = poly.scaled(Complex64::new(1.0 / value_at_zero, 0.0));
        entries.push(BasisEntry {
            lambda: rs.weight(coords),
            poly,
            rpoly,
            value_at_zero,
            norm_sq,
            r,
            theta,
        });
    }
    Ok(JacobiBasis::from_parts(rs, entries, max_shell, table))
}

pub fn read_basis(path: &Path) -> Result<JacobiBasis> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    basis_from_json(&v)
}

/// CSV with one row per grid node: Cartesian coordinates then re, im.
pub fn write_samples(path: &Path, grid: &QuadratureGrid, values: &[Complex64]) -> Result<()> {
    let rank = grid.root_system().rank;
    let mut out = String::new();
    out.push_str(if rank == 1 { "x0,re,im\n" } else { "x0,x1,re,im\n" });
    for (i, v) in values.iter().enumerate() {
        let x = grid.node(i);
        if rank == 1 {
            out.push_str(&format!(
                "{},{},{}\n",
                format_sig17(x[0]),
                format_sig17(v.re),
                format_sig17(v.im)
            ));
        } else {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_sig17(x[0]),
                format_sig17(x[1]),
                format_sig17(v.re),
                format_sig17(v.im)
            ));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads samples written by [`write_samples`]; node coordinates are checked
/// against the expected grid.
pub fn read_samples(path: &Path, grid: &QuadratureGrid) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path)?;
    let rank = grid.root_system().rank;
    let mut values = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if ln == 0 && line.starts_with('x') {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        let need = if rank == 1 { 3 } else { 4 };
        if parts.len() != need {
            return Err(Error::InvalidInput(format!(
                "csv line {} has {} fields, expected {need}",
                ln + 1,
                parts.len()
            )));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("bad number on line {}", ln + 1)))
            })
            .collect::<Result<_>>()?;
        let idx = values.len();
        if idx >= grid.num_nodes() {
            return Err(Error::GridMismatch);
        }
        let node = grid.node(idx);
        let (coords, re, im) = if rank == 1 {
            ([nums[0], 0.0], nums[1], nums[2])
        } else {
            ([nums[0], nums[1]], nums[2], nums[3])
        };
        if (coords[0] - node[0]).abs() > 1e-9 || (coords[1] - node[1]).abs() > 1e-9 {
            return Err(Error::GridMismatch);
        }
        values.push(Complex64::new(re, im));
    }
    if values.len() != grid.num_nodes() {
        return Err(Error::GridMismatch);
    }
    Ok(values)
}

/// Parses a complex scalar like `0.3+0.1i`, `-1.2`, `0.5i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let err = || Error::InvalidInput(format!("cannot parse complex number `{s}`"));
    if let Some(stripped) = s.strip_suffix('i') {
        // Split mantissa at the last +/- that is not an exponent sign.
        let bytes = stripped.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let b = bytes[i];
            if (b == b'+' || b == b'-') && bytes[i - 1] != b'e' && bytes[i - 1] != b'E' {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = stripped[..i].parse().map_err(|_| err())?;
                let im_str = &stripped[i..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().map_err(|_| err())?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if stripped.is_empty() {
                    1.0
                } else {
                    stripped.parse().map_err(|_| err())?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().map_err(|_| err())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Parses a comma-separated complex vector, zero-padded to two components.
pub fn parse_complex_point(s: &str) -> Result<[Complex64; 2]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.is_empty() || parts.len() > 2 {
        return Err(Error::InvalidInput(format!("bad point `{s}`")));
    }
    let mut out = [Complex64::ZERO; 2];
    for (i, p) in parts.iter().enumerate() {
        out[i] = parse_complex(p)?;
    }
    Ok(out)
}

/// Parses a comma-separated real vector, zero-padded to two components.
pub fn parse_real_point(s: &str) -> Result<crate::rootsys::Vec2> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.is_empty() || parts.len() > 2 {
        return Err(Error::InvalidInput(format!("bad point `{s}`")));
    }
    let mut out = [0.0; 2];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad number `{p}`")))?;
    }
    Ok(out)
}
