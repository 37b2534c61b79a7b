//! Recursive descent parser for the scene language.
//!
//! Name resolution happens during parsing: every identifier must refer to a
//! builtin constant, a previously declared `const`, or a parameter of the set
//! being defined. The first problem found is returned as a positioned
//! [`ParseError`].

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::lexer::{tokenize, Pos, Tok, Token};
use super::program::{MinkowskiOp, ParamDecl, Projection, SceneProgram, Stmt};
use super::{is_builtin, Expr, Func};

const MAX_PARAMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{pos}: syntax error: found {found}, expected {}", .expected.join(" or "))]
    Syntax {
        pos: Pos,
        found: String,
        expected: Vec<String>,
    },
    #[error("{pos}: duplicate name `{name}`")]
    DuplicateName { pos: Pos, name: String },
    #[error("{pos}: unknown name `{name}`")]
    UnknownName { pos: Pos, name: String },
    #[error("{pos}: expected {expected} {what}, found {found}")]
    Arity {
        pos: Pos,
        what: &'static str,
        expected: &'static str,
        found: usize,
    },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::DuplicateName { pos, .. }
            | ParseError::UnknownName { pos, .. }
            | ParseError::Arity { pos, .. } => *pos,
        }
    }
}

type PResult<T> = Result<T, ParseError>;

/// Which identifiers an expression may reference.
#[derive(Clone, Copy)]
enum Scope<'a> {
    /// Anything goes (standalone expressions).
    Open,
    /// Declared constants only.
    Constants,
    /// Declared constants plus these parameters.
    Params(&'a [String]),
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    constants: HashSet<String>,
    /// Set name to its parameter names.
    sets: HashMap<String, Vec<String>>,
}

pub fn parse_program(text: &str) -> Result<SceneProgram, ParseError> {
    let mut p = Parser::new(text);
    let mut stmts = Vec::new();
    while p.peek() != &Tok::Eof {
        stmts.push(p.statement()?);
    }
    Ok(SceneProgram { stmts })
}

/// Parses a single expression with unrestricted identifiers.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text);
    let e = p.expr(Scope::Open)?;
    p.expect(&Tok::Eof, "end of input")?;
    Ok(e)
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            tokens: tokenize(text),
            at: 0,
            constants: HashSet::new(),
            sets: HashMap::new(),
        }
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> PResult<Token> {
        if self.peek() == tok {
            Ok(self.bump())
        } else {
            self.error(&[what])
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let pos = self.bump().pos;
                Ok((name, pos))
            }
            _ => self.error(&[what]),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(w) if w == word => {
                self.bump();
                Ok(())
            }
            _ => self.error(&[&format!("`{word}`")]),
        }
    }

    fn is_defined(&self, name: &str) -> bool {
        self.constants.contains(name)
            || self.sets.contains_key(name)
            || is_builtin(name)
            || Func::from_name(name).is_some()
    }

    fn fresh_name(&self, name: &str, pos: Pos) -> PResult<()> {
        if self.is_defined(name) {
            Err(ParseError::DuplicateName {
                pos,
                name: name.to_string(),
            })
        } else {
            Ok(())
        }
    }

    fn statement(&mut self) -> PResult<Stmt> {
        match self.peek().clone() {
            Tok::Const => self.const_def(),
            Tok::Set => self.set_def(),
            Tok::Project => self.directive(),
            Tok::Ident(w) if w == "range" => self.range_override(),
            _ => self.error(&["`set`", "`const`", "`project`", "`range`"]),
        }
    }

    fn const_def(&mut self) -> PResult<Stmt> {
        self.bump();
        let (name, pos) = self.ident("constant name")?;
        self.fresh_name(&name, pos)?;
        self.expect(&Tok::Eq, "`=`")?;
        let value = self.expr(Scope::Constants)?;
        let range = if self.peek() == &Tok::In {
            self.bump();
            let lo = self.expr(Scope::Constants)?;
            self.expect(&Tok::DotDot, "`..`")?;
            let hi = self.expr(Scope::Constants)?;
            Some((lo, hi))
        } else {
            None
        };
        self.constants.insert(name.clone());
        Ok(Stmt::Const { name, value, range })
    }

    fn set_def(&mut self) -> PResult<Stmt> {
        self.bump();
        let (name, pos) = self.ident("set name")?;
        self.fresh_name(&name, pos)?;
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let params = self.params(&[])?;
                self.expect(&Tok::RParen, "`)`")?;
                self.expect(&Tok::Eq, "`=`")?;
                let names: Vec<String> = params.iter().map(|p| p.name.clone()).collect();
                let coords = self.coord_tuple(Scope::Params(&names))?;
                self.sets.insert(name.clone(), names);
                Ok(Stmt::Set {
                    name,
                    params,
                    coords,
                })
            }
            Tok::Eq => {
                self.bump();
                match self.peek() {
                    Tok::LParen => {
                        let coords = self.coord_tuple(Scope::Constants)?;
                        self.sets.insert(name.clone(), Vec::new());
                        Ok(Stmt::Set {
                            name,
                            params: Vec::new(),
                            coords,
                        })
                    }
                    Tok::Ident(_) => {
                        let lhs = self.set_ref()?;
                        let op = match self.peek() {
                            Tok::Mink(c) => {
                                MinkowskiOp::from_char(*c).expect("lexer emits known ops")
                            }
                            _ => {
                                return self.error(&["`(+)`", "`(-)`", "`(*)`", "`(\\)`", "`(/)`"])
                            }
                        };
                        self.bump();
                        let rhs = self.set_ref()?;
                        let mut params = self.sets[&lhs].clone();
                        params.extend(self.sets[&rhs].iter().cloned());
                        self.sets.insert(name.clone(), params);
                        Ok(Stmt::Derived { name, op, lhs, rhs })
                    }
                    _ => self.error(&["`(`", "set name"]),
                }
            }
            _ => self.error(&["`(`", "`=`"]),
        }
    }

    fn set_ref(&mut self) -> PResult<String> {
        let (name, pos) = self.ident("set name")?;
        if self.sets.contains_key(&name) {
            Ok(name)
        } else {
            Err(ParseError::UnknownName { pos, name })
        }
    }

    /// `param { "," param }`; `allowed` restricts names to an existing set's
    /// parameters (range overrides) when non-empty.
    fn params(&mut self, allowed: &[String]) -> PResult<Vec<ParamDecl>> {
        let start = self.pos();
        let mut out: Vec<ParamDecl> = Vec::new();
        loop {
            let (name, pos) = self.ident("parameter name")?;
            if allowed.is_empty() {
                self.fresh_name(&name, pos)?;
            } else if !allowed.contains(&name) {
                return Err(ParseError::UnknownName { pos, name });
            }
            if out.iter().any(|p| p.name == name) {
                return Err(ParseError::DuplicateName { pos, name });
            }
            self.expect(&Tok::In, "`in`")?;
            let lo = self.expr(Scope::Constants)?;
            self.expect(&Tok::DotDot, "`..`")?;
            let hi = self.expr(Scope::Constants)?;
            out.push(ParamDecl { name, lo, hi });
            if self.peek() == &Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        if out.len() > MAX_PARAMS {
            return Err(ParseError::Arity {
                pos: start,
                what: "parameters",
                expected: "1 to 3",
                found: out.len(),
            });
        }
        Ok(out)
    }

    fn coord_tuple(&mut self, scope: Scope) -> PResult<[Expr; 4]> {
        let pos = self.expect(&Tok::LParen, "`(`")?.pos;
        let mut items = vec![self.expr(scope)?];
        while self.peek() == &Tok::Comma {
            self.bump();
            items.push(self.expr(scope)?);
        }
        self.expect(&Tok::RParen, "`)`")?;
        let found = items.len();
        items.try_into().map_err(|_| ParseError::Arity {
            pos,
            what: "coordinates",
            expected: "4",
            found,
        })
    }

    fn directive(&mut self) -> PResult<Stmt> {
        self.bump();
        match self.peek() {
            Tok::Ident(w) if w == "dop" => {
                self.bump();
                Ok(Stmt::Project(Projection::Dop))
            }
            Tok::Ident(w) if w == "perspective" => {
                self.bump();
                self.keyword("d")?;
                self.expect(&Tok::Eq, "`=`")?;
                let d = self.expr(Scope::Constants)?;
                Ok(Stmt::Project(Projection::Perspective { d }))
            }
            _ => self.error(&["`dop`", "`perspective`"]),
        }
    }

    fn range_override(&mut self) -> PResult<Stmt> {
        self.bump();
        let set = self.set_ref()?;
        let allowed = self.sets[&set].clone();
        self.expect(&Tok::LParen, "`(`")?;
        if allowed.is_empty() {
            return Err(ParseError::Arity {
                pos: self.pos(),
                what: "parameters",
                expected: "a set with",
                found: 0,
            });
        }
        let params = self.params(&allowed)?;
        self.expect(&Tok::RParen, "`)`")?;
        Ok(Stmt::Range { set, params })
    }

    // expr := term { ("+" | "-") term }
    fn expr(&mut self, scope: Scope) -> PResult<Expr> {
        let mut lhs = self.term(scope)?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term(scope)?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term(scope)?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := power { ("*" | "/") power }
    fn term(&mut self, scope: Scope) -> PResult<Expr> {
        let mut lhs = self.power(scope)?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.power(scope)?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.power(scope)?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    // power := unary [ "^" INTEGER ]
    fn power(&mut self, scope: Scope) -> PResult<Expr> {
        let base = self.unary(scope)?;
        if self.peek() != &Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek() {
            Tok::Number(text, _) if text.bytes().all(|b| b.is_ascii_digit()) => {
                match text.parse::<u32>() {
                    Ok(n) => {
                        self.bump();
                        Ok(Expr::pow(base, n))
                    }
                    Err(_) => self.error(&["non-negative integer exponent"]),
                }
            }
            _ => self.error(&["non-negative integer exponent"]),
        }
    }

    // unary := "-" NUMBER | "-" unary | primary
    fn unary(&mut self, scope: Scope) -> PResult<Expr> {
        if self.peek() != &Tok::Minus {
            return self.primary(scope);
        }
        self.bump();
        if let Tok::Number(_, v) = self.peek() {
            let v = *v;
            self.bump();
            return Ok(Expr::Const(-v));
        }
        Ok(Expr::neg(self.unary(scope)?))
    }

    fn primary(&mut self, scope: Scope) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Number(_, v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::Ident(name) => {
                let pos = self.bump().pos;
                if let Some(f) = Func::from_name(&name) {
                    self.expect(&Tok::LParen, "`(`")?;
                    let arg = self.expr(scope)?;
                    self.expect(&Tok::RParen, "`)`")?;
                    return Ok(Expr::call(f, arg));
                }
                let known = is_builtin(&name)
                    || match scope {
                        Scope::Open => true,
                        Scope::Constants => self.constants.contains(&name),
                        Scope::Params(ps) => ps.contains(&name) || self.constants.contains(&name),
                    };
                if known {
                    Ok(Expr::Param(name))
                } else {
                    Err(ParseError::UnknownName { pos, name })
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr(scope)?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.error(&["number", "identifier", "`(`", "`-`"]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_definition() {
        let p = parse_program("set c1(u in 0..2*pi) = (cos(u), sin(u), 0, 0)").unwrap();
        match &p.stmts[0] {
            Stmt::Set {
                name,
                params,
                coords,
            } => {
                assert_eq!(name, "c1");
                assert_eq!(params.len(), 1);
                assert_eq!(params[0].name, "u");
                let env: [(&str, f64); 0] = [];
                assert_eq!(params[0].lo.eval(&env).unwrap(), 0.0);
                assert_eq!(params[0].hi.eval(&env).unwrap(), 2.0 * std::f64::consts::PI);
                assert_eq!(coords[0], Expr::call(Func::Cos, Expr::param("u")));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn derived_definition() {
        let src =
            "set c1(u in 0..1) = (u, 0, 0, 0)\nset c2(v in 0..1) = (0, v, 0, 0)\nset d = c1 (*) c2";
        let p = parse_program(src).unwrap();
        assert_eq!(
            p.stmts[2],
            Stmt::Derived {
                name: "d".into(),
                op: MinkowskiOp::Product,
                lhs: "c1".into(),
                rhs: "c2".into()
            }
        );
    }

    #[test]
    fn coordinate_arity() {
        let err = parse_program("set x(u in 0..1) = (u, u)").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Arity {
                what: "coordinates",
                found: 2,
                ..
            }
        ));
    }

    #[test]
    fn too_many_params() {
        let err = parse_program("set x(a in 0..1, b in 0..1, c in 0..1, d in 0..1) = (a, b, c, d)")
            .unwrap_err();
        assert!(matches!(
            err,
            ParseError::Arity {
                what: "parameters",
                found: 4,
                ..
            }
        ));
    }

    #[test]
    fn syntax_error_positions() {
        let err = parse_program("const t = 2\nset c(u in 0..1) = (u, , 0, 0)").unwrap_err();
        match err {
            ParseError::Syntax {
                pos,
                found,
                expected,
            } => {
                assert_eq!(pos, Pos { line: 2, col: 24 });
                assert_eq!(found, "`,`");
                assert!(expected.contains(&"identifier".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn names() {
        assert!(matches!(
            parse_program("const a = 1\nconst a = 2"),
            Err(ParseError::DuplicateName { .. })
        ));
        assert!(matches!(
            parse_program("set c(u in 0..1) = (v, 0, 0, 0)"),
            Err(ParseError::UnknownName { name, .. }) if name == "v"
        ));
        assert!(matches!(
            parse_program("set d = a (+) b"),
            Err(ParseError::UnknownName { name, .. }) if name == "a"
        ));
        assert!(matches!(
            parse_program("set pi(u in 0..1) = (u, 0, 0, 0)"),
            Err(ParseError::DuplicateName { .. })
        ));
        assert!(matches!(
            parse_program("const t = 1\nset c(t in 0..1) = (t, 0, 0, 0)"),
            Err(ParseError::DuplicateName { .. })
        ));
        assert!(matches!(
            parse_program("set c(u in 0..1, u in 0..1) = (u, 0, 0, 0)"),
            Err(ParseError::DuplicateName { .. })
        ));
    }

    #[test]
    fn constants_with_ranges_and_directives() {
        let p = parse_program("const t = 2 in 0.5..4*pi\nproject perspective d = 2*t\nproject dop")
            .unwrap();
        assert_eq!(p.stmts.len(), 3);
        assert!(matches!(&p.stmts[0], Stmt::Const { range: Some(_), .. }));
        assert!(matches!(
            &p.stmts[1],
            Stmt::Project(Projection::Perspective { .. })
        ));
    }

    #[test]
    fn point_sets_and_ranges() {
        let src = "set q = (0.5, 0.5, 0.5, 0.5)\nset c(u in 0..1) = (u, 0, 0, 0)\nset r = q (*) c\nrange r(u in -1..1)";
        let p = parse_program(src).unwrap();
        assert!(matches!(&p.stmts[0], Stmt::Set { params, .. } if params.is_empty()));
        assert!(
            matches!(&p.stmts[3], Stmt::Range { set, params } if set == "r" && params.len() == 1)
        );
        assert!(matches!(
            parse_program("set c(u in 0..1) = (u, 0, 0, 0)\nrange c(v in 0..1)"),
            Err(ParseError::UnknownName { name, .. }) if name == "v"
        ));
    }

    #[test]
    fn precedence() {
        use Expr as E;
        let e = parse_expr("-x^2 + a*b/c - 1").unwrap();
        let expected = E::sub(
            E::add(
                E::pow(E::neg(E::param("x")), 2),
                E::div(E::mul(E::param("a"), E::param("b")), E::param("c")),
            ),
            E::Const(1.0),
        );
        assert_eq!(e, expected);
        assert_eq!(parse_expr("-2").unwrap(), E::Const(-2.0));
        assert_eq!(parse_expr("-(2)").unwrap(), E::neg(E::Const(2.0)));
    }

    #[test]
    fn exponent_must_be_integer_literal() {
        assert!(parse_expr("x^2.5").is_err());
        assert!(parse_expr("x^y").is_err());
        assert!(parse_expr("x^-1").is_err());
        assert!(parse_expr("x^2^3").is_err());
        assert!(parse_expr("sin").is_err());
    }
}
