//! Batch front-end: checks `.sitc` files, prints verdicts and derivations,
//! runs evaluation traces and the satisfaction oracle, and applies fixes.
//!
//! Exit codes: 0 when everything checked out, 1 when diagnostics were
//! emitted, 2 on usage or I/O errors.

pub mod config;
pub mod report;
pub mod schema;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sitc_core::ast::{Node, SourceProgram, Statement};
use sitc_core::diagnostics::{apply_fix, suggest_fixes, Code, Diagnostic, Severity};
use sitc_core::eval::{satisfies, AppendHistory, Machine, Outcome};
use sitc_core::parser::{parse_program, print_node, print_program};
use sitc_core::typecheck::{
    derivation_tree, expand_quantifiers, rule_trace, typecheck_formula, Judgment, TypeErrorKind,
};
use sitc_core::{Span, TypingContext, World};

pub use config::{Cli, Command, Format, RunConfig};
pub use report::{emit_derivation, FileReport};
pub use schema::validate_report;

use report::{DiagnosticReport, EvalReport, FixedReport, StatementReport, TraceEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Runs one invocation, writing results to `out` and messages to `err`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_inner(cfg, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "sitc: {msg}");
            EXIT_USAGE
        }
    }
}

fn run_inner(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    if cfg.inputs.is_empty() {
        return Err("no input files".into());
    }
    if cfg.fuel == 0 {
        return Err("--fuel must be at least 1".into());
    }
    if cfg.apply_fixes && matches!(cfg.command, Command::Eval | Command::Sat) {
        return Err("--apply-fixes is only valid with `check` or `fix`".into());
    }
    let world = match (&cfg.world, cfg.command) {
        (Some(path), _) => Some(load_world(path)?),
        (None, Command::Sat) => return Err("`sat` requires --world <PATH>".into()),
        (None, _) => None,
    };
    let mut code = EXIT_OK;
    for path in &cfg.inputs {
        let file_code = match process_file(cfg, path, world.as_ref()) {
            Ok((report, file_code)) => {
                emit(cfg, &report, out, err).map_err(|e| format!("cannot write output: {e}"))?;
                file_code
            }
            Err(msg) => {
                writeln!(err, "sitc: {msg}").map_err(|e| e.to_string())?;
                EXIT_USAGE
            }
        };
        code = code.max(file_code);
    }
    Ok(code)
}

fn load_world(path: &Path) -> Result<World, String> {
    let src = fs::read_to_string(path)
        .map_err(|e| format!("cannot read world {}: {e}", path.display()))?;
    World::parse(&src).map_err(|e| format!("invalid world {}: {e}", path.display()))
}

fn emit(
    cfg: &RunConfig,
    r: &FileReport,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<()> {
    match cfg.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(r).expect("reports serialize");
            writeln!(out, "{text}")
        }
        Format::Human => {
            let (o, e) = report::render_human(r);
            out.write_all(o.as_bytes())?;
            err.write_all(e.as_bytes())
        }
    }
}

fn plain(d: Diagnostic) -> DiagnosticReport {
    DiagnosticReport {
        diagnostic: d,
        fixes: Vec::new(),
    }
}

fn empty_report(cfg: &RunConfig, file: String) -> FileReport {
    FileReport {
        schema: report::SCHEMA_VERSION,
        file,
        command: cfg.command.name(),
        statements: Vec::new(),
        diagnostics: Vec::new(),
        fixed: None,
    }
}

/// Builds the report for one file and its exit code.
pub fn process_file(
    cfg: &RunConfig,
    path: &Path,
    world: Option<&World>,
) -> Result<(FileReport, i32), String> {
    let src =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut report = empty_report(cfg, path.display().to_string());
    let program = match parse_program(&src) {
        Ok(p) => p,
        Err(e) => {
            report.diagnostics.push(plain(Diagnostic::from(&e)));
            return Ok((report, EXIT_DIAGNOSTICS));
        }
    };
    let w = match TypingContext::from_program(&program) {
        Ok(w) => w,
        Err(e) => {
            report.diagnostics.push(plain(Diagnostic::error(
                Code::E101,
                e.to_string(),
                Span::default(),
            )));
            return Ok((report, EXIT_DIAGNOSTICS));
        }
    };

    let (program, w) = if cfg.apply_fixes {
        let fixed = fix_program(&program, &w);
        let output = fixed_path(path);
        fs::write(&output, print_program(&fixed.0))
            .map_err(|e| format!("cannot write {}: {e}", output.display()))?;
        report.fixed = Some(FixedReport {
            output: output.display().to_string(),
            applied: fixed.1,
        });
        let w = TypingContext::from_program(&fixed.0).map_err(|e| e.to_string())?;
        (fixed.0, w)
    } else {
        (program, w)
    };

    let suggest = cfg.suggest_fixes || cfg.command == Command::Fix;
    for stmt in &program.statements {
        let mut s = statement_report(cfg, &w, stmt, suggest);
        match cfg.command {
            Command::Eval => evaluate_statement(cfg, &w, stmt, &mut s),
            Command::Sat => {
                s.diagnostics.clear();
                let world = world.expect("checked by caller");
                satisfy_statement(cfg, world, stmt, &mut s);
            }
            Command::Check | Command::Fix => {}
        }
        report.statements.push(s);
    }

    if let Some(limit) = cfg.max_errors {
        let mut budget = limit;
        let mut take = |v: &mut Vec<DiagnosticReport>| {
            let keep = v.len().min(budget);
            v.truncate(keep);
            budget -= keep;
        };
        take(&mut report.diagnostics);
        for s in &mut report.statements {
            take(&mut s.diagnostics);
        }
    }

    // Type diagnostics are dropped for `sat`, so ill-typedness only counts
    // for the other commands (and survives --max-errors truncation).
    let any_diagnostic = !report.diagnostics.is_empty()
        || report.statements.iter().any(|s| !s.diagnostics.is_empty());
    let unsatisfied = report.statements.iter().any(|s| s.satisfied == Some(false));
    let code =
        if any_diagnostic || unsatisfied || (cfg.command != Command::Sat && ill_typed(&report)) {
            EXIT_DIAGNOSTICS
        } else {
            EXIT_OK
        };
    Ok((report, code))
}

fn ill_typed(r: &FileReport) -> bool {
    r.statements.iter().any(|s| s.status == "ill-typed")
}

/// `dir/name.sitc` becomes `dir/name.fixed.sitc`.
pub fn fixed_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    path.with_file_name(format!("{stem}.fixed.sitc"))
}

/// Applies every fix suggested for the program's type errors.
pub fn fix_program(
    program: &SourceProgram,
    w: &TypingContext,
) -> (SourceProgram, Vec<sitc_core::diagnostics::Fix>) {
    let mut fixed = program.clone();
    let mut applied = Vec::new();
    for stmt in &program.statements {
        let Err(e) = typecheck_formula(w, &stmt.formula) else {
            continue;
        };
        for fix in suggest_fixes(w, &stmt.formula, &Diagnostic::from(&e)) {
            if let Ok(next) = apply_fix(&fixed, &fix) {
                fixed = next;
                applied.push(fix);
            }
        }
    }
    (fixed, applied)
}

fn error_judgments(kind: &TypeErrorKind) -> Vec<&Judgment> {
    match kind {
        TypeErrorKind::SupsetMismatch { left, right }
        | TypeErrorKind::EqMismatch { left, right } => {
            vec![&**left, &**right]
        }
        TypeErrorKind::NonUniform { components, .. } => components.iter().collect(),
        _ => Vec::new(),
    }
}

fn statement_report(
    cfg: &RunConfig,
    w: &TypingContext,
    stmt: &Statement,
    suggest: bool,
) -> StatementReport {
    let mut s = StatementReport {
        name: stmt.name.name.clone(),
        status: "well-typed",
        ty: None,
        sides: Vec::new(),
        rule_trace: Vec::new(),
        diagnostics: Vec::new(),
        derivation: None,
        partial_derivations: Vec::new(),
        evaluation: None,
        satisfied: None,
        explain_text: String::new(),
    };
    match typecheck_formula(w, &stmt.formula) {
        Ok(j) => {
            s.ty = Some(j.ty.to_string());
            s.sides = j.premises.iter().map(|p| p.ty.to_string()).collect();
            s.rule_trace = rule_trace(&j)
                .iter()
                .map(|r| r.name().to_string())
                .collect();
            if cfg.explain {
                s.derivation = Some(derivation_tree(&j));
                s.explain_text = emit_derivation(&j, Format::Human);
            }
        }
        Err(e) => {
            s.status = "ill-typed";
            let parts = error_judgments(&e.kind);
            s.sides = parts.iter().map(|j| j.ty.to_string()).collect();
            if cfg.explain {
                s.partial_derivations = parts.iter().map(|j| derivation_tree(j)).collect();
                s.explain_text = parts
                    .iter()
                    .map(|j| emit_derivation(j, Format::Human))
                    .collect();
            }
            let d = Diagnostic::from(&e);
            let fixes = if suggest {
                suggest_fixes(w, &stmt.formula, &d)
            } else {
                Vec::new()
            };
            s.diagnostics.push(DiagnosticReport {
                diagnostic: d,
                fixes,
            });
        }
    }
    s
}

fn evaluate_statement(
    cfg: &RunConfig,
    w: &TypingContext,
    stmt: &Statement,
    s: &mut StatementReport,
) {
    let f = expand_quantifiers(&stmt.formula, cfg.quantifier_mode)
        .unwrap_or_else(|_| stmt.formula.clone());
    let ev = Machine::with_context(&AppendHistory, w).evaluate(&Node::Formula(f), cfg.fuel);
    let reason = match &ev.outcome {
        Outcome::Stuck { reason, .. } => {
            s.diagnostics
                .push(plain(Diagnostic::stuck(reason, stmt.formula.span())));
            Some(reason.clone())
        }
        Outcome::OutOfFuel(_) => {
            s.diagnostics.push(plain(Diagnostic {
                severity: Severity::Warning,
                ..Diagnostic::error(
                    Code::E007,
                    format!("evaluation did not finish within {} step(s)", cfg.fuel),
                    stmt.formula.span(),
                )
            }));
            None
        }
        _ => None,
    };
    s.evaluation = Some(EvalReport {
        outcome: ev.outcome.label(),
        steps: ev.steps(),
        result: ev.outcome.node_text(),
        reason,
        trace: ev
            .trace
            .iter()
            .map(|t| TraceEntry {
                rule: t.rule.name().to_string(),
                node: print_node(&t.node),
            })
            .collect(),
    });
}

fn satisfy_statement(cfg: &RunConfig, world: &World, stmt: &Statement, s: &mut StatementReport) {
    let f = expand_quantifiers(&stmt.formula, cfg.quantifier_mode)
        .unwrap_or_else(|_| stmt.formula.clone());
    match satisfies(world, &Node::Formula(f)) {
        Ok(b) => s.satisfied = Some(b),
        Err(e) => s.diagnostics.push(plain(Diagnostic::from(&e))),
    }
}
