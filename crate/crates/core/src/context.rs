//! Typing context `W`: variable bindings (each a set of candidate types) and
//! fluent signatures.
//!
//! The context is persistent. [`TypingContext::extend`] returns a new context
//! with one more scope frame; [`TypingContext::exit_scope`] drops it again.
//! The original value is never modified, so contexts can be shared freely
//! between threads.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::ast::{Declaration, SourceProgram};
use crate::types::{FluentKind, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("cannot bind `{0}` to an empty set of types")]
    EmptyTypeSet(String),
    #[error("`{0}` is already bound in this scope")]
    Duplicate(String),
    #[error("`{name}` has signature `{signature}`, which is neither a relational nor a functional fluent")]
    BadSignature { name: String, signature: Type },
}

#[derive(Debug)]
struct Frame {
    name: String,
    types: BTreeSet<Type>,
    parent: Option<Arc<Frame>>,
}

#[derive(Debug, Clone, Default)]
pub struct TypingContext {
    globals: Arc<BTreeMap<String, BTreeSet<Type>>>,
    fluents: Arc<BTreeMap<String, Type>>,
    scope: Option<Arc<Frame>>,
}

impl TypingContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the context declared by a program's `var`/`rel`/`fun` lines.
    pub fn from_program(program: &SourceProgram) -> Result<Self, ContextError> {
        Self::from_declarations(&program.declarations)
    }

    pub fn from_declarations(decls: &[Declaration]) -> Result<Self, ContextError> {
        let mut ctx = TypingContext::new();
        for decl in decls {
            match decl {
                Declaration::Var { name, types, .. } => {
                    ctx = ctx.with_global(&name.name, types.iter().cloned().collect())?;
                }
                Declaration::Fluent { name, .. } => {
                    let sig = decl.signature().expect("fluent declaration");
                    ctx = ctx.with_fluent(&name.name, sig)?;
                }
            }
        }
        Ok(ctx)
    }

    /// Adds a top-level variable binding.
    pub fn with_global(&self, name: &str, types: BTreeSet<Type>) -> Result<Self, ContextError> {
        if types.is_empty() {
            return Err(ContextError::EmptyTypeSet(name.to_string()));
        }
        if self.globals.contains_key(name) {
            return Err(ContextError::Duplicate(name.to_string()));
        }
        let mut globals = (*self.globals).clone();
        globals.insert(name.to_string(), types);
        Ok(TypingContext {
            globals: Arc::new(globals),
            ..self.clone()
        })
    }

    pub fn with_fluent(&self, name: &str, signature: Type) -> Result<Self, ContextError> {
        if signature.fluent_kind().is_none() {
            return Err(ContextError::BadSignature {
                name: name.to_string(),
                signature,
            });
        }
        if self.fluents.contains_key(name) {
            return Err(ContextError::Duplicate(name.to_string()));
        }
        let mut fluents = (*self.fluents).clone();
        fluents.insert(name.to_string(), signature);
        Ok(TypingContext {
            fluents: Arc::new(fluents),
            ..self.clone()
        })
    }

    /// Opens a scope binding `name`. Inner bindings shadow outer ones.
    pub fn extend(&self, name: &str, types: BTreeSet<Type>) -> Result<Self, ContextError> {
        if types.is_empty() {
            return Err(ContextError::EmptyTypeSet(name.to_string()));
        }
        Ok(TypingContext {
            scope: Some(Arc::new(Frame {
                name: name.to_string(),
                types,
                parent: self.scope.clone(),
            })),
            ..self.clone()
        })
    }

    /// Closes the innermost scope. Returns `None` at top level.
    pub fn exit_scope(&self) -> Option<Self> {
        let frame = self.scope.as_ref()?;
        Some(TypingContext {
            scope: frame.parent.clone(),
            ..self.clone()
        })
    }

    pub fn depth(&self) -> usize {
        let mut n = 0;
        let mut cur = self.scope.as_deref();
        while let Some(frame) = cur {
            n += 1;
            cur = frame.parent.as_deref();
        }
        n
    }

    /// Bound type set of a variable; empty when unbound.
    pub fn lookup(&self, name: &str) -> BTreeSet<Type> {
        let mut cur = self.scope.as_deref();
        while let Some(frame) = cur {
            if frame.name == name {
                return frame.types.clone();
            }
            cur = frame.parent.as_deref();
        }
        self.globals.get(name).cloned().unwrap_or_default()
    }

    /// The single bound type, if the binding is a singleton.
    pub fn lookup_unique(&self, name: &str) -> Option<Type> {
        let set = self.lookup(name);
        if set.len() == 1 {
            set.into_iter().next()
        } else {
            None
        }
    }

    pub fn fluent(&self, name: &str) -> Option<&Type> {
        self.fluents.get(name)
    }

    pub fn fluent_kind(&self, name: &str) -> Option<FluentKind> {
        self.fluent(name).and_then(Type::fluent_kind)
    }

    pub fn fluents(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.fluents.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Every variable visible here with its effective types, innermost first.
    pub fn visible_vars(&self) -> BTreeMap<String, BTreeSet<Type>> {
        let mut out: BTreeMap<String, BTreeSet<Type>> = self
            .globals
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let mut frames = Vec::new();
        let mut cur = self.scope.as_deref();
        while let Some(frame) = cur {
            frames.push(frame);
            cur = frame.parent.as_deref();
        }
        for frame in frames.into_iter().rev() {
            out.insert(frame.name.clone(), frame.types.clone());
        }
        out
    }

    /// Variables whose only candidate type is `ty`.
    pub fn vars_of_type(&self, ty: &Type) -> Vec<String> {
        self.visible_vars()
            .into_iter()
            .filter(|(_, ts)| ts.len() == 1 && ts.contains(ty))
            .map(|(name, _)| name)
            .collect()
    }

    /// Variables bound to a single type, for runtime sort checks.
    pub fn var_sorts(&self) -> BTreeMap<String, Type> {
        self.visible_vars()
            .into_iter()
            .filter_map(|(name, ts)| {
                (ts.len() == 1).then(|| (name, ts.into_iter().next().expect("singleton")))
            })
            .collect()
    }
}

impl PartialEq for TypingContext {
    fn eq(&self, other: &Self) -> bool {
        self.visible_vars() == other.visible_vars() && self.fluents == other.fluents
    }
}
