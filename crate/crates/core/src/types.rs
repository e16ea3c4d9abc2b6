//! The type language: five base types and curried fluent signatures.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Type {
    Unit,
    Bool,
    Situation,
    Action,
    Object,
    /// Curried signature `p1 -> ... -> pn -> result`, stored uncurried.
    Arrow {
        params: Vec<Type>,
        result: Box<Type>,
    },
}

/// Which of the two fluent families a signature belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FluentKind {
    /// `r(t.., s)`, typed `Situation`; the last parameter is the situation.
    Relational,
    /// `f(t..)`, typed `Action`.
    Functional,
}

impl FluentKind {
    pub fn keyword(self) -> &'static str {
        match self {
            FluentKind::Relational => "rel",
            FluentKind::Functional => "fun",
        }
    }
}

impl Type {
    pub const BASE: [Type; 5] = [
        Type::Unit,
        Type::Bool,
        Type::Situation,
        Type::Action,
        Type::Object,
    ];

    pub fn is_base(&self) -> bool {
        !matches!(self, Type::Arrow { .. })
    }

    /// Builds the signature of a relational fluent whose object parameters are
    /// `params`; the situation parameter and result are appended.
    pub fn relational(params: Vec<Type>) -> Type {
        let mut params = params;
        params.push(Type::Situation);
        Type::Arrow {
            params,
            result: Box::new(Type::Situation),
        }
    }

    pub fn functional(params: Vec<Type>) -> Type {
        Type::Arrow {
            params,
            result: Box::new(Type::Action),
        }
    }

    /// Classifies an arrow as a fluent signature. `None` for base types and
    /// for arrows that are neither well-formed relational nor functional.
    pub fn fluent_kind(&self) -> Option<FluentKind> {
        let Type::Arrow { params, result } = self else {
            return None;
        };
        if params.is_empty() || !params.iter().all(Type::is_base) {
            return None;
        }
        match **result {
            Type::Situation if params.len() >= 2 && params.last() == Some(&Type::Situation) => {
                Some(FluentKind::Relational)
            }
            Type::Action => Some(FluentKind::Functional),
            _ => None,
        }
    }

    pub fn short_name(&self) -> String {
        match self {
            Type::Unit => "Unit".into(),
            Type::Bool => "Bool".into(),
            Type::Situation => "Stn".into(),
            Type::Action => "Atn".into(),
            Type::Object => "Obj".into(),
            Type::Arrow { params, result } => {
                let mut out = String::new();
                for p in params {
                    out.push_str(&p.short_name());
                    out.push_str("->");
                }
                out.push_str(&result.short_name());
                out
            }
        }
    }

    pub fn from_name(name: &str) -> Option<Type> {
        Some(match name {
            "Unit" => Type::Unit,
            "Bool" => Type::Bool,
            "Situation" => Type::Situation,
            "Action" => Type::Action,
            "Object" => Type::Object,
            _ => return None,
        })
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Unit => f.write_str("Unit"),
            Type::Bool => f.write_str("Bool"),
            Type::Situation => f.write_str("Situation"),
            Type::Action => f.write_str("Action"),
            Type::Object => f.write_str("Object"),
            Type::Arrow { params, result } => {
                for p in params {
                    write!(f, "{p} -> ")?;
                }
                write!(f, "{result}")
            }
        }
    }
}
