//! Type checking, small-step evaluation and diagnostics for a lightweight
//! situation calculus.

// Type errors carry partial derivations by value.
#![allow(clippy::result_large_err)]

pub mod ast;
pub mod context;
pub mod diagnostics;
pub mod eval;
pub mod parser;
pub mod typecheck;
pub mod types;
pub mod world;

pub use ast::{BehavioralTerm, Formula, Node, SourceProgram, Span, Term, Value};
pub use context::TypingContext;
pub use types::{FluentKind, Type};
pub use world::World;

#[cfg(feature = "testkit")]
pub mod testkit;
