//! Report rendering: deterministic machine-readable JSON and fixed-width
//! text tables.
//!
//! Machine format contract: one JSON document per invocation, stable key
//! order (keys are sorted by the serializer), a `schema_version` field,
//! and every integer rendered as a decimal string so arbitrary-precision
//! values survive any consumer. Quadratic numbers a + b√d are rendered as
//! `{d, a_num, a_den, b_num, b_den}`.

use inoue::affine_group::RelationReport;
use inoue::centralizer::CentralizerGen;
use inoue::conjugacy::SimilarityClass;
use inoue::cubic::{BetaLabel, TypeIReport};
use inoue::exact_arith::QuadElem;
use inoue::intmat::IMat;
use inoue::moduli_core::{ClassReport, ComponentType, Kind};
use num_bigint::BigInt;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1";

pub fn big(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn int_str(v: i64) -> Value {
    Value::String(v.to_string())
}

pub fn usize_str(v: usize) -> Value {
    Value::String(v.to_string())
}

pub fn matrix_json(m: &IMat) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| {
            let row: Vec<Value> = (0..m.cols()).map(|j| big(m.at(i, j))).collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

pub fn quad_json(q: &QuadElem) -> Value {
    json!({
        "d": big(q.radicand()),
        "a_num": big(q.rat_part().numer()),
        "a_den": big(q.rat_part().denom()),
        "b_num": big(q.quad_part().numer()),
        "b_den": big(q.quad_part().denom()),
    })
}

fn component_str(c: ComponentType) -> &'static str {
    match c {
        ComponentType::C => "C",
        ComponentType::Cstar => "Cstar",
    }
}

fn generator_json(g: &CentralizerGen) -> Value {
    json!({
        "matrix": matrix_json(&g.k),
        "det": int_str(g.eps as i64),
        "theta_eig": quad_json(&g.theta_eig),
        "power_to_n": g.power_to_n.map(int_str).unwrap_or(Value::Null),
    })
}

/// JSON for one `type2`/`type3` classification run.
pub fn class_report_json(verb: &str, rpt: &ClassReport) -> Value {
    let total_key = match rpt.kind {
        Kind::Plus => "deformation_classes",
        Kind::Minus => "biholomorphism_classes",
    };
    let classes: Vec<Value> = rpt
        .classes
        .iter()
        .map(|entry| {
            let orbits: Vec<Value> = entry
                .orbits
                .iter()
                .map(|o| {
                    let reps: Vec<Value> = o
                        .representatives
                        .iter()
                        .map(|p| Value::Array(vec![big(&p[0]), big(&p[1])]))
                        .collect();
                    json!({
                        "size": usize_str(o.representatives.len()),
                        "component": o.component
                            .map(|c| Value::String(component_str(c).into()))
                            .unwrap_or(Value::Null),
                        "representatives": Value::Array(reps),
                    })
                })
                .collect();
            json!({
                "matrix": matrix_json(&entry.matrix),
                "centralizer_generator": generator_json(&entry.generator),
                "quotient_order": big(&entry.quotient_order),
                "divisors": [big(&entry.divisors.0), big(&entry.divisors.1)],
                "orbit_count": usize_str(entry.orbits.len()),
                "orbits": Value::Array(orbits),
            })
        })
        .collect();
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "verb": verb,
        "theta": int_str(rpt.theta),
        "r": int_str(rpt.r),
        "det": int_str(match rpt.kind { Kind::Plus => 1, Kind::Minus => -1 }),
        "similarity_classes": usize_str(rpt.classes.len()),
        "classes": Value::Array(classes),
    });
    doc.as_object_mut()
        .unwrap()
        .insert(total_key.to_string(), usize_str(rpt.total));
    doc
}

/// Text table for one `type2`/`type3` run.
pub fn class_report_text(rpt: &ClassReport, list_orbits: bool) -> String {
    let mut out = String::new();
    let det = match rpt.kind {
        Kind::Plus => 1,
        Kind::Minus => -1,
    };
    let total_label = match rpt.kind {
        Kind::Plus => "deformation classes",
        Kind::Minus => "biholomorphism classes",
    };
    out.push_str(&format!(
        "theta {:<4} r {:<4} det {:+}\n",
        rpt.theta, rpt.r, det
    ));
    out.push_str(&format!(
        "{:<24} {}\n{:<24} {}\n",
        "similarity classes:",
        rpt.classes.len(),
        format!("{total_label}:"),
        rpt.total
    ));
    for (i, entry) in rpt.classes.iter().enumerate() {
        out.push_str(&format!(
            "class {:<3} N = {}  |Z_N,r| = {}  divisors ({}, {})  orbits {}\n",
            i + 1,
            mat_inline(&entry.matrix),
            entry.quotient_order,
            entry.divisors.0,
            entry.divisors.1,
            entry.orbits.len()
        ));
        out.push_str(&format!(
            "          K = {}  det {:+}  {}\n",
            mat_inline(&entry.generator.k),
            entry.generator.eps,
            match entry.generator.power_to_n {
                Some(e) => format!("K^{e} = N"),
                None => "N not a power of K".to_string(),
            }
        ));
        if list_orbits {
            for (j, o) in entry.orbits.iter().enumerate() {
                let reps: Vec<String> = o
                    .representatives
                    .iter()
                    .map(|p| format!("({}, {})", p[0], p[1]))
                    .collect();
                out.push_str(&format!(
                    "          orbit {:<3} size {:<4} component {:<6} {}\n",
                    j + 1,
                    o.representatives.len(),
                    o.component.map(component_str).unwrap_or("-"),
                    reps.join(" ")
                ));
            }
        } else {
            for (j, o) in entry.orbits.iter().enumerate() {
                out.push_str(&format!(
                    "          orbit {:<3} size {:<4} component {}\n",
                    j + 1,
                    o.representatives.len(),
                    o.component.map(component_str).unwrap_or("-")
                ));
            }
        }
    }
    out
}

pub fn type1_report_json(rpt: &TypeIReport) -> Value {
    let classes: Vec<Value> = rpt
        .classes
        .iter()
        .map(|c| {
            json!({
                "ideal_hnf": matrix_json(&c.ideal.hnf_basis),
                "ideal_norm": big(&c.ideal.norm),
                "label": match c.label { BetaLabel::Beta => "beta", BetaLabel::BetaConj => "beta_conj" },
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "verb": "type1",
        "theta2": int_str(rpt.input.theta2),
        "theta1": int_str(rpt.input.theta1),
        "disc": big(&rpt.disc),
        "h": usize_str(rpt.h),
        "biholomorphism_classes": usize_str(rpt.biholo_count),
        "norm_bound": usize_str(rpt.bound as usize),
        "stable": Value::Bool(rpt.stable),
        "classes": Value::Array(classes),
    })
}

pub fn type1_report_text(rpt: &TypeIReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "theta2 {:<4} theta1 {:<4} disc {}\n",
        rpt.input.theta2, rpt.input.theta1, rpt.disc
    ));
    out.push_str(&format!(
        "{:<24} {}\n{:<24} {}\n{:<24} {} (stable: {})\n",
        "ideal classes h:",
        rpt.h,
        "biholomorphism classes:",
        rpt.biholo_count,
        "norm bound:",
        rpt.bound,
        rpt.stable
    ));
    for (i, c) in rpt.classes.iter().enumerate() {
        out.push_str(&format!(
            "class {:<3} label {:<9} norm {:<6} hnf {}\n",
            i + 1,
            match c.label {
                BetaLabel::Beta => "beta",
                BetaLabel::BetaConj => "beta_conj",
            },
            c.ideal.norm,
            mat_inline(&c.ideal.hnf_basis)
        ));
    }
    out
}

pub fn classes_report_json(theta: i64, det: i64, classes: &[SimilarityClass]) -> Value {
    let entries: Vec<Value> = classes
        .iter()
        .map(|c| {
            json!({
                "representative": matrix_json(&c.representative),
                "trace": big(&c.trace),
                "det": big(&c.det),
                "cycle_length": usize_str(c.cycle.len()),
                "merged_mirror_cycle": Value::Bool(c.mirror_cycle.is_some()),
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "verb": "classes",
        "theta": int_str(theta),
        "det": int_str(det),
        "count": usize_str(classes.len()),
        "classes": Value::Array(entries),
    })
}

pub fn classes_report_text(theta: i64, det: i64, classes: &[SimilarityClass]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "theta {:<4} det {:+}\n{:<24} {}\n",
        theta,
        det,
        "similarity classes:",
        classes.len()
    ));
    for (i, c) in classes.iter().enumerate() {
        out.push_str(&format!(
            "class {:<3} N = {}  cycle length {:<4} mirror merged {}\n",
            i + 1,
            mat_inline(&c.representative),
            c.cycle.len(),
            c.mirror_cycle.is_some()
        ));
    }
    out
}

pub fn centralizer_report_json(n: &IMat, g: &CentralizerGen) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "verb": "centralizer",
        "matrix": matrix_json(n),
        "generator": generator_json(g),
    })
}

pub fn centralizer_report_text(n: &IMat, g: &CentralizerGen) -> String {
    format!(
        "N = {}\nK = {}  det {:+}  {}\n",
        mat_inline(n),
        mat_inline(&g.k),
        g.eps,
        match g.power_to_n {
            Some(e) => format!("K^{e} = N"),
            None => "N not a power of K".to_string(),
        }
    )
}

pub fn verify_report_json(kind: u8, rpt: &RelationReport) -> Value {
    let findings: Vec<Value> = rpt
        .relations
        .iter()
        .map(|(name, ok)| json!({"name": name, "ok": Value::Bool(*ok)}))
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "verb": "verify",
        "kind": int_str(kind as i64),
        "relations": Value::Array(findings),
        "matrix_readback": matrix_json(&rpt.matrix_readback),
        "p_readback": rpt
            .p_readback
            .as_ref()
            .map(|p| Value::Array(vec![big(&p[0]), big(&p[1])]))
            .unwrap_or(Value::Null),
        "all_ok": Value::Bool(rpt.all_ok),
    })
}

pub fn verify_report_text(kind: u8, rpt: &RelationReport) -> String {
    let mut out = format!("relation report (kind {kind})\n");
    for (name, ok) in &rpt.relations {
        out.push_str(&format!(
            "  {:<28} {}\n",
            name,
            if *ok { "ok" } else { "FAIL" }
        ));
    }
    out.push_str(&format!(
        "  matrix readback: {}\n",
        mat_inline(&rpt.matrix_readback)
    ));
    if let Some(p) = &rpt.p_readback {
        out.push_str(&format!("  p readback: ({}, {})\n", p[0], p[1]));
    }
    out.push_str(&format!(
        "  all relations: {}\n",
        if rpt.all_ok { "ok" } else { "FAIL" }
    ));
    out
}

/// `[a b; c d]` inline matrix notation.
pub fn mat_inline(m: &IMat) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m.at(i, j).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Wrap several machine reports into one deterministic document.
pub fn wrap_reports(reports: Vec<Value>) -> Value {
    if reports.len() == 1 {
        reports.into_iter().next().unwrap()
    } else {
        json!({
            "schema_version": SCHEMA_VERSION,
            "reports": Value::Array(reports),
        })
    }
}
