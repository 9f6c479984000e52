//! Reading instance files.

use std::path::Path;

use awfslab::json::{generators_from_value, parse, Codec};
use awfslab::Arrow;
use serde_json::Value;

use crate::report::CliError;
use crate::Ctx;

pub fn read_value(ctx: &Ctx, p: &Path) -> Result<Value, CliError> {
    let path = ctx.path(p);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::input("io", format!("{}: {e}", p.display())))?;
    Ok(parse(&text)?)
}

/// The three instance categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Graph,
    Category,
    SSet,
}

impl Kind {
    pub fn of_map(v: &Value) -> Result<Kind, CliError> {
        match v.get("kind").and_then(Value::as_str) {
            Some("graph_map") => Ok(Kind::Graph),
            Some("functor") => Ok(Kind::Category),
            Some("ss_map") => Ok(Kind::SSet),
            Some(k) => Err(CliError::input("schema_violation", format!("expected a map, found kind `{k}`"))),
            None => Err(CliError::input("schema_violation", "missing field `kind`")),
        }
    }

    pub fn of_object(v: &Value) -> Result<Kind, CliError> {
        match v.get("kind").and_then(Value::as_str) {
            Some("graph") => Ok(Kind::Graph),
            Some("category") => Ok(Kind::Category),
            Some("ssset") => Ok(Kind::SSet),
            Some(k) => Err(CliError::input("schema_violation", format!("expected an object, found kind `{k}`"))),
            None => Err(CliError::input("schema_violation", "missing field `kind`")),
        }
    }
}

/// Calls a generic function at the instance type named by a [`Kind`].
macro_rules! by_kind {
    ($kind:expr, $f:ident ( $($arg:expr),* )) => {
        match $kind {
            $crate::input::Kind::Graph => $f::<awfslab::FiniteGraph>($($arg),*),
            $crate::input::Kind::Category => $f::<awfslab::FiniteCategory>($($arg),*),
            $crate::input::Kind::SSet => $f::<awfslab::SemiSimplicialSet>($($arg),*),
        }
    };
}

/// Like [`by_kind`] for operations that need pushouts.
macro_rules! by_presheaf_kind {
    ($kind:expr, $f:ident ( $($arg:expr),* )) => {
        match $kind {
            $crate::input::Kind::Graph => $f::<awfslab::FiniteGraph>($($arg),*),
            $crate::input::Kind::SSet => $f::<awfslab::SemiSimplicialSet>($($arg),*),
            $crate::input::Kind::Category => Err($crate::report::CliError::input(
                "unsupported",
                "cell attachment needs pushouts, which are only computed for graphs and semi-simplicial sets",
            )),
        }
    };
}

pub(crate) use {by_kind, by_presheaf_kind};

/// A generator file, or a named generating set at dimension `dim`.
pub fn generators<C: Codec>(ctx: &Ctx, arg: &str, dim: usize) -> Result<Vec<Arrow<C>>, CliError> {
    if C::GENERATOR_NAMES.contains(&arg) {
        return Ok(generators_from_value(&Value::String(arg.into()), dim)?);
    }
    let v = read_value(ctx, Path::new(arg))?;
    Ok(generators_from_value(&v, dim)?)
}
