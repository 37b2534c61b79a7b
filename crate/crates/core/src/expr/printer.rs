use std::fmt::Write;

use super::program::{ParamDecl, Projection, SceneProgram, Stmt};
use super::Expr;

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_POW: u8 = 3;
const PREC_UNARY: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
        Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
        Expr::Pow(..) => PREC_POW,
        Expr::Neg(_) => PREC_UNARY,
        Expr::Const(v) if v.is_sign_negative() => PREC_UNARY,
        _ => PREC_ATOM,
    }
}

/// Shortest representation that parses back to the same bits.
fn number(v: f64) -> String {
    format!("{v:?}")
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    let parens = precedence(e) < min_prec;
    if parens {
        out.push('(');
    }
    match e {
        Expr::Const(v) => out.push_str(&number(*v)),
        Expr::Param(n) => out.push_str(n),
        Expr::Neg(a) => {
            out.push('-');
            // `-2` would re-parse as a literal and `--x` reads ambiguously.
            let wrap = matches!(**a, Expr::Const(_) | Expr::Neg(_));
            write_expr(out, a, if wrap { PREC_ATOM + 1 } else { PREC_UNARY });
        }
        Expr::Add(a, b) => binary(out, a, " + ", b, PREC_ADD),
        Expr::Sub(a, b) => binary(out, a, " - ", b, PREC_ADD),
        Expr::Mul(a, b) => binary(out, a, " * ", b, PREC_MUL),
        Expr::Div(a, b) => binary(out, a, " / ", b, PREC_MUL),
        Expr::Pow(a, n) => {
            write_expr(out, a, PREC_UNARY);
            let _ = write!(out, "^{n}");
        }
        Expr::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(out, a, 0);
            out.push(')');
        }
    }
    if parens {
        out.push(')');
    }
}

fn binary(out: &mut String, a: &Expr, op: &str, b: &Expr, prec: u8) {
    write_expr(out, a, prec);
    out.push_str(op);
    write_expr(out, b, prec + 1);
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

fn params(decls: &[ParamDecl]) -> String {
    decls
        .iter()
        .map(|p| format!("{} in {}..{}", p.name, print_expr(&p.lo), print_expr(&p.hi)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonical source text, one statement per line.
pub fn print_program(p: &SceneProgram) -> String {
    let mut out = String::new();
    for stmt in &p.stmts {
        match stmt {
            Stmt::Const { name, value, range } => {
                let _ = write!(out, "const {name} = {}", print_expr(value));
                if let Some((lo, hi)) = range {
                    let _ = write!(out, " in {}..{}", print_expr(lo), print_expr(hi));
                }
            }
            Stmt::Set {
                name,
                params: ps,
                coords,
            } => {
                let tuple = coords.iter().map(print_expr).collect::<Vec<_>>().join(", ");
                if ps.is_empty() {
                    let _ = write!(out, "set {name} = ({tuple})");
                } else {
                    let _ = write!(out, "set {name}({}) = ({tuple})", params(ps));
                }
            }
            Stmt::Derived { name, op, lhs, rhs } => {
                let _ = write!(out, "set {name} = {lhs} {} {rhs}", op.token());
            }
            Stmt::Project(Projection::Dop) => out.push_str("project dop"),
            Stmt::Project(Projection::Perspective { d }) => {
                let _ = write!(out, "project perspective d = {}", print_expr(d));
            }
            Stmt::Range { set, params: ps } => {
                let _ = write!(out, "range {set}({})", params(ps));
            }
        }
        out.push('\n');
    }
    out
}
