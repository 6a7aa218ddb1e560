//! Map sources: a builtin catalog and a small expression language.

mod builtins;
mod expr;
mod parser;

pub use builtins::{builtin, BuiltinError, CATALOG, DOTTIE};
pub use expr::{BinaryOp, Expr, MapSpec, UnaryOp};
pub use parser::{parse, ParseError};
