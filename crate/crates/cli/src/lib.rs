//! Batch front end for the groupoid homology engine: parse a JSON document
//! of named groupoids, homomorphisms and sheaves, run a computation, and
//! print a deterministic machine-readable report.

pub mod input;

use ghom_core::cyclic::{localize_by_loop_orbit, loop_comparison};
use ghom_core::groupoid::morita_check;
use ghom_core::homology::{cohomology, groupoid_homology_range, leray_spectral_sequence};
use ghom_core::linalg::{AbGroupClass, Coefficients};
use input::{parse_document, parse_coefficients, Document, InputError};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Exit codes: 0 success, 2 input error, 3 unsupported coefficients.
#[derive(Debug)]
pub enum CmdError {
    Input(InputError),
    UnsupportedCoefficients(String),
    Engine(String),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Input(e) => write!(f, "{e}"),
            CmdError::UnsupportedCoefficients(m) => write!(f, "unsupported coefficients: {m}"),
            CmdError::Engine(m) => write!(f, "{m}"),
        }
    }
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Input(_) => 2,
            CmdError::UnsupportedCoefficients(_) => 3,
            CmdError::Engine(_) => 1,
        }
    }
}

impl From<InputError> for CmdError {
    fn from(e: InputError) -> Self {
        CmdError::Input(e)
    }
}

fn group_json(g: &AbGroupClass) -> Value {
    json!({
        "betti": g.betti,
        "torsion": g.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "pretty": g.to_string(),
    })
}

fn load(text: &str) -> Result<Document, CmdError> {
    Ok(parse_document(text)?)
}

pub fn cmd_homology(
    text: &str,
    groupoid: Option<&str>,
    sheaf: Option<&str>,
    coeff: &str,
    max_degree: usize,
) -> Result<Value, CmdError> {
    let doc = load(text)?;
    let coefficients = parse_coefficients(coeff)?;
    let (gname, g) = doc.the_groupoid(groupoid)?;
    let a = doc.sheaf(sheaf, g, coefficients)?;
    let h = groupoid_homology_range(g, &a, max_degree, coefficients)
        .map_err(|e| CmdError::Engine(e.to_string()))?;
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "homology",
        "groupoid": gname,
        "sheaf": sheaf.unwrap_or("(constant rank 1)"),
        "coefficients": coefficients.to_string(),
        "max_degree": max_degree,
        "results": h.iter().enumerate().map(|(n, g)| json!({
            "degree": n,
            "group": group_json(g),
        })).collect::<Vec<_>>(),
    }))
}

pub fn cmd_cohomology(
    text: &str,
    groupoid: Option<&str>,
    sheaf: Option<&str>,
    coeff: &str,
    max_degree: usize,
) -> Result<Value, CmdError> {
    let doc = load(text)?;
    let coefficients = parse_coefficients(coeff)?;
    let (gname, g) = doc.the_groupoid(groupoid)?;
    let a = doc.sheaf(sheaf, g, coefficients)?;
    let mut results = Vec::new();
    for n in 0..=max_degree {
        let h = cohomology(g, &a, n, coefficients).map_err(|e| CmdError::Engine(e.to_string()))?;
        results.push(json!({"degree": n, "group": group_json(&h)}));
    }
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "cohomology",
        "groupoid": gname,
        "sheaf": sheaf.unwrap_or("(constant rank 1)"),
        "coefficients": coefficients.to_string(),
        "max_degree": max_degree,
        "results": results,
    }))
}

pub fn cmd_leray(
    text: &str,
    hom: &str,
    sheaf: Option<&str>,
    coeff: &str,
    max_degree: usize,
) -> Result<Value, CmdError> {
    let doc = load(text)?;
    let coefficients = parse_coefficients(coeff)?;
    if !coefficients.is_field() {
        return Err(CmdError::UnsupportedCoefficients(
            "the spectral sequence needs field coefficients".into(),
        ));
    }
    let phi = doc.the_hom(hom)?;
    let a = doc.sheaf(sheaf, &phi.dom, coefficients)?;
    let report = leray_spectral_sequence(phi, &a, max_degree)
        .map_err(|e| CmdError::Engine(e.to_string()))?;
    let dims_table = |dims: &std::collections::BTreeMap<(usize, usize), usize>| -> Value {
        let rows: Vec<Value> = dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&(p, q), &d)| json!([p, q, d]))
            .collect();
        Value::Array(rows)
    };
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "leray",
        "hom": hom,
        "coefficients": coefficients.to_string(),
        "max_degree": max_degree,
        "e2": dims_table(&report.e2),
        "e2_matches_derived_sheaf": report.e2_matches_derived_sheaf,
        "pages": report.pages.iter().map(|(r, dims)| json!({
            "r": r,
            "cells": dims_table(dims),
        })).collect::<Vec<_>>(),
        "stabilization_page": report.stabilization_page,
        "abutment": report.abutment,
        "abutment_consistent": report.abutment_consistent,
    }))
}

pub fn cmd_morita(text: &str, hom: &str) -> Result<Value, CmdError> {
    let doc = load(text)?;
    let phi = doc.the_hom(hom)?;
    let report = morita_check(phi);
    let witness = if report.is_equivalence() {
        Value::Null
    } else if let Some(x) = report.unreachable_object {
        json!({"condition": "essential_surjectivity", "unreachable_object": x})
    } else if let Some((y, y2)) = report.failing_pair {
        json!({"condition": "full_faithfulness", "object_pair": [y, y2]})
    } else {
        Value::Null
    };
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "morita",
        "hom": hom,
        "verdict": report.is_equivalence(),
        "essentially_surjective": report.essentially_surjective,
        "fully_faithful": report.fully_faithful,
        "witness": witness,
    }))
}

pub fn cmd_cyclic(
    text: &str,
    groupoid: Option<&str>,
    coeff: &str,
    max_degree: usize,
    localize: Option<&str>,
    compare_loops: bool,
) -> Result<Value, CmdError> {
    let doc = load(text)?;
    let coefficients = parse_coefficients(coeff)?;
    if coefficients != Coefficients::Rationals {
        return Err(CmdError::UnsupportedCoefficients(
            "cyclic homology commands run over Q".into(),
        ));
    }
    let (gname, g) = doc.the_groupoid(groupoid)?;
    let loc = localize_by_loop_orbit(g, coefficients, max_degree + 1)
        .map_err(|e| CmdError::Engine(e.to_string()))?;
    let hh = loc
        .hochschild_total()
        .map_err(|e| CmdError::Engine(e.to_string()))?;
    let hc: Vec<usize> = loc
        .mixed
        .cyclic()
        .map_err(|e| CmdError::Engine(e.to_string()))?
        .iter()
        .map(|x| x.betti)
        .collect();

    let mut out = serde_json::Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!("cyclic"));
    out.insert("groupoid".into(), json!(gname));
    out.insert("coefficients".into(), json!(coefficients.to_string()));
    out.insert("max_degree".into(), json!(max_degree));
    out.insert("hochschild".into(), json!(hh[..=max_degree.min(hh.len() - 1)]));
    out.insert("cyclic".into(), json!(hc[..=max_degree.min(hc.len() - 1)]));

    match localize {
        Some("units") => {
            let units = loc.unit_orbits();
            let mx = loc.restrict(&units);
            let h: Vec<usize> = mx
                .hochschild()
                .map_err(|e| CmdError::Engine(e.to_string()))?
                .iter()
                .map(|x| x.betti)
                .collect();
            out.insert("localized_units_hochschild".into(), json!(h));
        }
        Some("all-orbits") => {
            let by_orbit = loc
                .hochschild_by_orbit()
                .map_err(|e| CmdError::Engine(e.to_string()))?;
            let table: Vec<Value> = by_orbit
                .iter()
                .enumerate()
                .map(|(o, h)| {
                    json!({
                        "orbit": o,
                        "representative_loop": loc.orbit_reps[o],
                        "is_units": loc.orbit_is_units[o],
                        "hochschild": h,
                    })
                })
                .collect();
            out.insert("localized_orbits".into(), json!(table));
            let complete = loc
                .completeness_verified()
                .map_err(|e| CmdError::Engine(e.to_string()))?;
            out.insert("localization_complete".into(), json!(complete));
        }
        Some(other) => {
            return Err(CmdError::Input(InputError::Parse(format!(
                "bad --localize value '{other}' (expected units or all-orbits)"
            ))));
        }
        None => {}
    }

    if compare_loops {
        let rep = loop_comparison(g, coefficients, max_degree)
            .map_err(|e| CmdError::Engine(e.to_string()))?;
        out.insert(
            "loop_comparison".into(),
            json!({
                "hochschild": rep.hochschild_dims,
                "loop_homology": rep.loop_homology_dims,
                "verdict_equal": rep.hochschild_matches_loops,
                "hp_units": rep.hp_units,
                "hp_expected": rep.hp_expected,
                "hp_matches": rep.hp_matches,
            }),
        );
    }

    Ok(Value::Object(out))
}

/// Render a report for stdout: pretty JSON with sorted keys and a trailing
/// newline, byte-identical across runs.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
