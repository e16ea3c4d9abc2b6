//! Structural validation of JSON reports (schema version 1).

use serde_json::{Map, Value};
use sitc_core::diagnostics::Code;
use sitc_core::eval::EvalRule;
use sitc_core::typecheck::Rule;

type Obj = Map<String, Value>;

fn obj<'a>(v: &'a Value, at: &str) -> Result<&'a Obj, String> {
    v.as_object()
        .ok_or_else(|| format!("{at}: expected an object"))
}

fn field<'a>(o: &'a Obj, key: &str, at: &str) -> Result<&'a Value, String> {
    o.get(key).ok_or_else(|| format!("{at}: missing `{key}`"))
}

fn string<'a>(o: &'a Obj, key: &str, at: &str) -> Result<&'a str, String> {
    field(o, key, at)?
        .as_str()
        .ok_or_else(|| format!("{at}.{key}: expected a string"))
}

fn array<'a>(o: &'a Obj, key: &str, at: &str) -> Result<&'a Vec<Value>, String> {
    field(o, key, at)?
        .as_array()
        .ok_or_else(|| format!("{at}.{key}: expected an array"))
}

fn span(v: &Value, at: &str) -> Result<(), String> {
    let o = obj(v, at)?;
    for key in ["start", "end", "line", "column", "end_line", "end_column"] {
        if !field(o, key, at)?.is_u64() {
            return Err(format!("{at}.{key}: expected a non-negative integer"));
        }
    }
    Ok(())
}

fn rule_name(name: &str) -> bool {
    Rule::ALL.iter().any(|r| r.name() == name)
}

/// Checks a derivation tree node and its premises.
pub fn validate_derivation(v: &Value, at: &str) -> Result<(), String> {
    let o = obj(v, at)?;
    let rule = string(o, "rule", at)?;
    if !rule_name(rule) {
        return Err(format!("{at}.rule: unknown rule `{rule}`"));
    }
    string(o, "subject", at)?;
    string(o, "type", at)?;
    for (i, p) in array(o, "premises", at)?.iter().enumerate() {
        validate_derivation(p, &format!("{at}.premises[{i}]"))?;
    }
    Ok(())
}

fn diagnostic(v: &Value, at: &str) -> Result<(), String> {
    let o = obj(v, at)?;
    let code = string(o, "code", at)?;
    if Code::parse(code).is_none() {
        return Err(format!("{at}.code: unknown code `{code}`"));
    }
    let sev = string(o, "severity", at)?;
    if sev != "error" && sev != "warning" {
        return Err(format!("{at}.severity: `{sev}`"));
    }
    string(o, "message", at)?;
    span(field(o, "span", at)?, &format!("{at}.span"))?;
    for (i, r) in array(o, "related", at)?.iter().enumerate() {
        span(r, &format!("{at}.related[{i}]"))?;
    }
    for (i, f) in array(o, "fixes", at)?.iter().enumerate() {
        let at = format!("{at}.fixes[{i}]");
        let fo = obj(f, &at)?;
        let kind = string(fo, "kind", &at)?;
        if kind != "WrapInRelationalFluent" && kind != "AddSituationArgument" {
            return Err(format!("{at}.kind: `{kind}`"));
        }
        span(field(fo, "target", &at)?, &format!("{at}.target"))?;
        for key in ["original", "replacement", "declaration", "rationale"] {
            string(fo, key, &at)?;
        }
    }
    Ok(())
}

fn statement(v: &Value, at: &str) -> Result<(), String> {
    let o = obj(v, at)?;
    string(o, "name", at)?;
    let status = string(o, "status", at)?;
    if status != "well-typed" && status != "ill-typed" {
        return Err(format!("{at}.status: `{status}`"));
    }
    match field(o, "type", at)? {
        Value::Null if status == "ill-typed" => {}
        Value::String(_) if status == "well-typed" => {}
        _ => {
            return Err(format!(
                "{at}.type: must be a string exactly when well-typed"
            ))
        }
    }
    for s in array(o, "sides", at)? {
        s.as_str()
            .ok_or_else(|| format!("{at}.sides: expected strings"))?;
    }
    for r in array(o, "rule-trace", at)? {
        let name = r
            .as_str()
            .ok_or_else(|| format!("{at}.rule-trace: expected strings"))?;
        if !rule_name(name) {
            return Err(format!("{at}.rule-trace: unknown rule `{name}`"));
        }
    }
    for (i, d) in array(o, "diagnostics", at)?.iter().enumerate() {
        diagnostic(d, &format!("{at}.diagnostics[{i}]"))?;
    }
    if let Some(d) = o.get("derivation") {
        validate_derivation(d, &format!("{at}.derivation"))?;
    }
    if let Some(ds) = o.get("partial-derivations") {
        let ds = ds
            .as_array()
            .ok_or_else(|| format!("{at}.partial-derivations: expected an array"))?;
        for (i, d) in ds.iter().enumerate() {
            validate_derivation(d, &format!("{at}.partial-derivations[{i}]"))?;
        }
    }
    if let Some(ev) = o.get("evaluation") {
        let at = format!("{at}.evaluation");
        let e = obj(ev, &at)?;
        let outcome = string(e, "outcome", &at)?;
        if !["value", "normal", "stuck", "out-of-fuel"].contains(&outcome) {
            return Err(format!("{at}.outcome: `{outcome}`"));
        }
        if !field(e, "steps", &at)?.is_u64() {
            return Err(format!("{at}.steps: expected an integer"));
        }
        string(e, "result", &at)?;
        for (i, t) in array(e, "trace", &at)?.iter().enumerate() {
            let at = format!("{at}.trace[{i}]");
            let to = obj(t, &at)?;
            let rule = string(to, "rule", &at)?;
            if !EvalRule::ALL.iter().any(|r| r.name() == rule) {
                return Err(format!("{at}.rule: unknown rule `{rule}`"));
            }
            string(to, "node", &at)?;
        }
    }
    if let Some(sat) = o.get("satisfied") {
        sat.as_bool()
            .ok_or_else(|| format!("{at}.satisfied: expected a boolean"))?;
    }
    Ok(())
}

/// Validates one file report.
pub fn validate_report(v: &Value) -> Result<(), String> {
    let o = obj(v, "report")?;
    if field(o, "schema", "report")?.as_u64() != Some(1) {
        return Err("report.schema: expected 1".into());
    }
    string(o, "file", "report")?;
    let cmd = string(o, "command", "report")?;
    if !["check", "eval", "sat", "fix"].contains(&cmd) {
        return Err(format!("report.command: `{cmd}`"));
    }
    for (i, s) in array(o, "statements", "report")?.iter().enumerate() {
        statement(s, &format!("report.statements[{i}]"))?;
    }
    for (i, d) in array(o, "diagnostics", "report")?.iter().enumerate() {
        diagnostic(d, &format!("report.diagnostics[{i}]"))?;
    }
    if let Some(fx) = o.get("fixed") {
        let fo = obj(fx, "report.fixed")?;
        string(fo, "output", "report.fixed")?;
        array(fo, "applied", "report.fixed")?;
    }
    Ok(())
}
