use serde::Serialize;
use sitc_core::diagnostics::{Diagnostic, Fix};
use sitc_core::typecheck::{derivation_tree, render_derivation, DerivationNode, Judgment};

use crate::config::Format;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct FileReport {
    pub schema: u32,
    pub file: String,
    pub command: &'static str,
    pub statements: Vec<StatementReport>,
    /// Diagnostics not tied to a statement, e.g. syntax errors.
    pub diagnostics: Vec<DiagnosticReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed: Option<FixedReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedReport {
    pub output: String,
    pub applied: Vec<Fix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StatementReport {
    pub name: String,
    pub status: &'static str,
    #[serde(rename = "type")]
    pub ty: Option<String>,
    /// Types of the top-level components (sides of `=>`/`=`, conjuncts).
    pub sides: Vec<String>,
    #[serde(rename = "rule-trace")]
    pub rule_trace: Vec<String>,
    pub diagnostics: Vec<DiagnosticReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<DerivationNode>,
    #[serde(rename = "partial-derivations", skip_serializing_if = "Vec::is_empty")]
    pub partial_derivations: Vec<DerivationNode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<EvalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfied: Option<bool>,
    #[serde(skip)]
    pub explain_text: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticReport {
    #[serde(flatten)]
    pub diagnostic: Diagnostic,
    pub fixes: Vec<Fix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub outcome: &'static str,
    pub steps: usize,
    pub result: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    pub rule: String,
    pub node: String,
}

/// Renders a derivation: one indented line per rule application, or the
/// structured tree as JSON.
pub fn emit_derivation(j: &Judgment, format: Format) -> String {
    match format {
        Format::Human => render_derivation(j),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&derivation_tree(j)).expect("serializable");
            s.push('\n');
            s
        }
    }
}

fn indent(text: &str, by: &str) -> String {
    text.lines().map(|l| format!("{by}{l}\n")).collect()
}

fn render_diagnostic(file: &str, d: &DiagnosticReport, err: &mut String) {
    err.push_str(&d.diagnostic.render(file));
    err.push('\n');
    for fix in &d.fixes {
        err.push_str(&format!(
            "  fix: replace `{}` with `{}` and declare `{}`\n",
            fix.original_text(),
            fix.replacement_text(),
            sitc_core::parser::print_declaration(&fix.declaration)
        ));
    }
}

/// Human rendering: verdicts on the first string (stdout), diagnostics on
/// the second (stderr).
pub fn render_human(r: &FileReport) -> (String, String) {
    let mut out = String::new();
    let mut err = String::new();
    out.push_str(&format!("{}\n", r.file));
    for d in &r.diagnostics {
        render_diagnostic(&r.file, d, &mut err);
    }
    if let Some(fixed) = &r.fixed {
        out.push_str(&format!(
            "  wrote {} ({} fix(es) applied)\n",
            fixed.output,
            fixed.applied.len()
        ));
        for fix in &fixed.applied {
            out.push_str(&format!(
                "    {}: `{}` -> `{}`\n",
                fix.declaration.name(),
                fix.original_text(),
                fix.replacement_text()
            ));
        }
    }
    for s in &r.statements {
        match &s.ty {
            Some(ty) => out.push_str(&format!("  {}: {} : {}\n", s.name, s.status, ty)),
            None => out.push_str(&format!("  {}: {}\n", s.name, s.status)),
        }
        if !s.sides.is_empty() {
            out.push_str(&format!("    sides: {}\n", s.sides.join(", ")));
        }
        if !s.rule_trace.is_empty() {
            out.push_str(&format!("    rules: {}\n", s.rule_trace.join(", ")));
        }
        if let Some(ev) = &s.evaluation {
            out.push_str(&format!(
                "    evaluation: {} after {} step(s): {}\n",
                ev.outcome, ev.steps, ev.result
            ));
            for t in &ev.trace {
                out.push_str(&format!("      {}  {}\n", t.rule, t.node));
            }
        }
        if let Some(sat) = s.satisfied {
            out.push_str(&format!("    satisfied: {sat}\n"));
        }
        if !s.explain_text.is_empty() {
            out.push_str(&indent(&s.explain_text, "    | "));
        }
        for d in &s.diagnostics {
            render_diagnostic(&r.file, d, &mut err);
        }
    }
    (out, err)
}
