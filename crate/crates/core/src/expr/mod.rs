//! The scene language: arithmetic expressions over named parameters, and the
//! statement-level program built from them.

mod lexer;
mod parser;
mod printer;
mod program;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use lexer::Pos;
pub use parser::{parse_expr, parse_program, ParseError};
pub use printer::{print_expr, print_program};
pub use program::{MinkowskiOp, ParamDecl, Projection, SceneProgram, Stmt};

/// Names with a fixed meaning in every expression.
pub const BUILTIN_CONSTANTS: [&str; 2] = ["pi", "tau"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Tan, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, x: f64) -> Result<f64, EvalError> {
        Ok(match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Sqrt => {
                if x < 0.0 {
                    return Err(EvalError::Domain(format!("sqrt of negative value {x}")));
                }
                x.sqrt()
            }
            Func::Abs => x.abs(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound parameter `{0}`")]
    UnboundParam(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Name lookup used during evaluation.
pub trait Bindings {
    fn lookup(&self, name: &str) -> Option<f64>;
}

impl Bindings for HashMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for BTreeMap<String, f64> {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.get(name).copied()
    }
}

impl Bindings for [(&str, f64)] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

impl<const N: usize> Bindings for [(&str, f64); N] {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.as_slice().lookup(name)
    }
}

fn builtin(name: &str) -> Option<f64> {
    match name {
        "pi" => Some(std::f64::consts::PI),
        "tau" => Some(std::f64::consts::TAU),
        _ => None,
    }
}

pub fn is_builtin(name: &str) -> bool {
    builtin(name).is_some()
}

/// Identifier rule for parameter and set names: `[a-zA-Z][a-zA-Z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[inline]
fn checked_div(a: f64, b: f64) -> Result<f64, EvalError> {
    if b == 0.0 {
        Err(EvalError::Domain(format!("division of {a} by zero")))
    } else {
        Ok(a / b)
    }
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn param(name: impl Into<String>) -> Expr {
        Expr::Param(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, n: u32) -> Expr {
        Expr::Pow(Box::new(a), n)
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    pub fn eval<B: Bindings + ?Sized>(&self, env: &B) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Const(v) => *v,
            Expr::Param(name) => match builtin(name) {
                Some(v) => v,
                None => env
                    .lookup(name)
                    .ok_or_else(|| EvalError::UnboundParam(name.clone()))?,
            },
            Expr::Neg(a) => -a.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Div(a, b) => checked_div(a.eval(env)?, b.eval(env)?)?,
            Expr::Pow(a, n) => a.eval(env)?.powi(*n as i32),
            Expr::Call(f, a) => f.apply(a.eval(env)?)?,
        })
    }

    /// Every free name, excluding the builtin constants.
    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_names(&mut |n| {
            if !is_builtin(n) {
                out.insert(n.to_string());
            }
        });
        out
    }

    fn visit_names(&self, f: &mut impl FnMut(&str)) {
        match self {
            Expr::Const(_) => {}
            Expr::Param(n) => f(n),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.visit_names(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit_names(f);
                b.visit_names(f);
            }
        }
    }

    /// Replaces parameter references according to `mapping`; unmapped names
    /// are kept.
    pub fn rename(&self, mapping: &dyn Fn(&str) -> Option<String>) -> Expr {
        self.map_params(&|name| mapping(name).map(Expr::Param))
    }

    /// Substitutes whole expressions for parameter references.
    pub fn map_params(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        let bx = |e: &Expr| Box::new(e.map_params(f));
        match self {
            Expr::Const(v) => Expr::Const(*v),
            Expr::Param(n) => f(n).unwrap_or_else(|| Expr::Param(n.clone())),
            Expr::Neg(a) => Expr::Neg(bx(a)),
            Expr::Add(a, b) => Expr::Add(bx(a), bx(b)),
            Expr::Sub(a, b) => Expr::Sub(bx(a), bx(b)),
            Expr::Mul(a, b) => Expr::Mul(bx(a), bx(b)),
            Expr::Div(a, b) => Expr::Div(bx(a), bx(b)),
            Expr::Pow(a, n) => Expr::Pow(bx(a), *n),
            Expr::Call(g, a) => Expr::Call(*g, bx(a)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Param(_) => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    /// Resolves names to slots for repeated evaluation. Names missing from
    /// `slots` that are not builtins produce [`EvalError::UnboundParam`].
    pub fn compile(&self, slots: &[&str]) -> Result<CompiledExpr, EvalError> {
        let bx = |e: &Expr| e.compile(slots).map(Box::new);
        Ok(match self {
            Expr::Const(v) => CompiledExpr::Const(*v),
            Expr::Param(n) => match builtin(n) {
                Some(v) => CompiledExpr::Const(v),
                None => CompiledExpr::Slot(
                    slots
                        .iter()
                        .position(|s| s == n)
                        .ok_or_else(|| EvalError::UnboundParam(n.clone()))?,
                ),
            },
            Expr::Neg(a) => CompiledExpr::Neg(bx(a)?),
            Expr::Add(a, b) => CompiledExpr::Add(bx(a)?, bx(b)?),
            Expr::Sub(a, b) => CompiledExpr::Sub(bx(a)?, bx(b)?),
            Expr::Mul(a, b) => CompiledExpr::Mul(bx(a)?, bx(b)?),
            Expr::Div(a, b) => CompiledExpr::Div(bx(a)?, bx(b)?),
            Expr::Pow(a, n) => CompiledExpr::Pow(bx(a)?, *n),
            Expr::Call(f, a) => CompiledExpr::Call(*f, bx(a)?),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_expr(self))
    }
}

/// An [`Expr`] with names resolved to positions in a value slice.
///
/// Evaluation performs exactly the floating-point operations of
/// [`Expr::eval`], so both paths return identical bits.
#[derive(Debug, Clone, PartialEq)]
pub enum CompiledExpr {
    Const(f64),
    Slot(usize),
    Neg(Box<CompiledExpr>),
    Add(Box<CompiledExpr>, Box<CompiledExpr>),
    Sub(Box<CompiledExpr>, Box<CompiledExpr>),
    Mul(Box<CompiledExpr>, Box<CompiledExpr>),
    Div(Box<CompiledExpr>, Box<CompiledExpr>),
    Pow(Box<CompiledExpr>, u32),
    Call(Func, Box<CompiledExpr>),
}

impl CompiledExpr {
    pub fn eval(&self, values: &[f64]) -> Result<f64, EvalError> {
        Ok(match self {
            CompiledExpr::Const(v) => *v,
            CompiledExpr::Slot(i) => values[*i],
            CompiledExpr::Neg(a) => -a.eval(values)?,
            CompiledExpr::Add(a, b) => a.eval(values)? + b.eval(values)?,
            CompiledExpr::Sub(a, b) => a.eval(values)? - b.eval(values)?,
            CompiledExpr::Mul(a, b) => a.eval(values)? * b.eval(values)?,
            CompiledExpr::Div(a, b) => checked_div(a.eval(values)?, b.eval(values)?)?,
            CompiledExpr::Pow(a, n) => a.eval(values)?.powi(*n as i32),
            CompiledExpr::Call(f, a) => f.apply(a.eval(values)?)?,
        })
    }
}

/// Evaluates `e` under `env`.
pub fn eval_expr<B: Bindings + ?Sized>(e: &Expr, env: &B) -> Result<f64, EvalError> {
    e.eval(env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cos_at_zero() {
        let e = parse_expr("cos(u)").unwrap();
        assert_eq!(e.eval(&[("u", 0.0)]).unwrap(), 1.0);
    }

    #[test]
    fn helix_first_coordinate() {
        let e = parse_expr("t*v/(2*pi)").unwrap();
        assert_eq!(e.eval(&[("t", 2.0), ("v", 2.0 * PI)]).unwrap(), 2.0);
    }

    #[test]
    fn domain_errors() {
        let e = parse_expr("sqrt(-1)").unwrap();
        assert!(matches!(
            e.eval(&[] as &[(&str, f64)]),
            Err(EvalError::Domain(_))
        ));
        let e = parse_expr("1/(u-u)").unwrap();
        assert!(matches!(e.eval(&[("u", 3.0)]), Err(EvalError::Domain(_))));
    }

    #[test]
    fn unbound_param() {
        let e = parse_expr("u + w").unwrap();
        assert_eq!(
            e.eval(&[("u", 1.0)]),
            Err(EvalError::UnboundParam("w".into()))
        );
    }

    #[test]
    fn builtins() {
        let e = parse_expr("tau - 2*pi").unwrap();
        assert_eq!(e.eval(&[] as &[(&str, f64)]).unwrap(), 0.0);
        assert!(e.free_names().is_empty());
    }

    #[test]
    fn compiled_matches_interpreted_bits() {
        let e = parse_expr("sin(u)^3 * -v / sqrt(abs(u) + 1) - tan(v/7) + pi").unwrap();
        let c = e.compile(&["u", "v"]).unwrap();
        for i in 0..50 {
            let (u, v) = (i as f64 * 0.37 - 4.0, (i as f64).cos() * 3.0);
            let a = e.eval(&[("u", u), ("v", v)]).unwrap();
            let b = c.eval(&[u, v]).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("v1"));
        assert!(is_identifier("a_b"));
        assert!(!is_identifier("1v"));
        assert!(!is_identifier("_x"));
        assert!(!is_identifier(""));
    }

    #[test]
    fn rename_and_map() {
        let e = parse_expr("u*cos(v)").unwrap();
        let r = e.rename(&|n| (n == "u").then(|| "s".to_string()));
        assert_eq!(r, parse_expr("s*cos(v)").unwrap());
        assert_eq!(r.free_names().into_iter().collect::<Vec<_>>(), ["s", "v"]);
    }
}
