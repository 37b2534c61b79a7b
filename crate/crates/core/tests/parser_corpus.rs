use m4d_core::expr::{Func, ParamDecl, Projection, Stmt};
use m4d_core::gallery::ENTRIES;
use m4d_core::scene::compile_source;
use m4d_core::{parse_program, print_program, Expr, MinkowskiOp, ParseError, SceneProgram};
use proptest::prelude::*;

fn fixpoint(src: &str) -> Result<(), String> {
    let p1 = parse_program(src).map_err(|e| format!("original: {e}"))?;
    let printed = print_program(&p1);
    let p2 = parse_program(&printed).map_err(|e| format!("{e} in\n{printed}"))?;
    if p1 != p2 || print_program(&p2) != printed {
        return Err(format!("AST changed after printing:\n{printed}"));
    }
    Ok(())
}

#[test]
fn gallery_sources_are_fixpoints() {
    for e in ENTRIES {
        fixpoint(e.source).unwrap_or_else(|m| panic!("{}: {m}", e.id));
    }
}

// Random programs are generated as ASTs, printed, and must survive a round trip.

const NAMES: [&str; 5] = ["u", "v", "k0", "k1", "pi"];

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        prop::sample::select(vec![0.0, 0.5, 1.0, 2.0, 1e-7, 1e21, 0.1 + 0.2]).prop_map(Expr::Const),
        (0.0..100.0f64).prop_map(Expr::Const),
        prop::sample::select(NAMES.to_vec()).prop_map(Expr::param),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            (inner.clone(), 0u32..6).prop_map(|(a, n)| Expr::pow(a, n)),
            (prop::sample::select(Func::ALL.to_vec()), inner).prop_map(|(f, a)| Expr::call(f, a)),
        ]
    })
}

/// Replaces names not visible in the statement by constants.
fn restrict(e: &Expr, visible: &[String]) -> Expr {
    e.map_params(&|n| (n != "pi" && !visible.iter().any(|v| v == n)).then_some(Expr::Const(1.25)))
}

fn decl(name: &str, lo: f64, len: f64) -> ParamDecl {
    ParamDecl {
        name: name.into(),
        lo: Expr::Const(lo),
        hi: Expr::add(Expr::Const(lo), Expr::Const(len)),
    }
}

#[derive(Debug, Clone)]
struct Spec {
    consts: Vec<(Expr, bool)>,
    sets: Vec<(usize, [Expr; 4])>,
    derived: Vec<(MinkowskiOp, usize, usize)>,
    ranged: bool,
    project: Option<Option<Expr>>,
}

fn spec() -> impl Strategy<Value = Spec> {
    (
        prop::collection::vec((expr(), any::<bool>()), 0..3),
        prop::collection::vec((0usize..3, prop::array::uniform4(expr())), 1..4),
        prop::collection::vec(
            (
                prop::sample::select(MinkowskiOp::ALL.to_vec()),
                0usize..8,
                0usize..8,
            ),
            0..3,
        ),
        any::<bool>(),
        prop::option::of(prop::option::of(expr())),
    )
        .prop_map(|(consts, sets, derived, ranged, project)| Spec {
            consts,
            sets,
            derived,
            ranged,
            project,
        })
}

fn build(spec: &Spec) -> SceneProgram {
    let mut stmts = Vec::new();
    let const_names: Vec<String> = (0..spec.consts.len()).map(|i| format!("k{i}")).collect();
    for (i, (value, ranged)) in spec.consts.iter().enumerate() {
        stmts.push(Stmt::Const {
            name: const_names[i].clone(),
            value: restrict(value, &[]),
            range: ranged.then(|| {
                (
                    Expr::Const(-1.0),
                    Expr::mul(Expr::Const(4.0), Expr::param("pi")),
                )
            }),
        });
    }
    let mut names = Vec::new();
    for (i, (dim, coords)) in spec.sets.iter().enumerate() {
        let params: Vec<ParamDecl> = ["u", "v"][..(*dim).min(2)]
            .iter()
            .map(|p| decl(p, -1.0, 2.5))
            .collect();
        let mut visible = const_names.clone();
        visible.extend(params.iter().map(|p| p.name.clone()));
        let name = format!("s{i}");
        names.push(name.clone());
        stmts.push(Stmt::Set {
            name,
            params,
            coords: coords.clone().map(|c| restrict(&c, &visible)),
        });
    }
    if spec.ranged && spec.sets[0].0 > 0 {
        stmts.push(Stmt::Range {
            set: "s0".into(),
            params: vec![decl("u", 0.0, 0.5)],
        });
    }
    for (i, (op, a, b)) in spec.derived.iter().enumerate() {
        let lhs = names[a % names.len()].clone();
        let rhs = names[b % names.len()].clone();
        let name = format!("d{i}");
        names.push(name.clone());
        stmts.push(Stmt::Derived {
            name,
            op: *op,
            lhs,
            rhs,
        });
    }
    match &spec.project {
        Some(None) => stmts.push(Stmt::Project(Projection::Dop)),
        Some(Some(d)) => stmts.push(Stmt::Project(Projection::Perspective {
            d: restrict(d, &const_names),
        })),
        None => {}
    }
    SceneProgram { stmts }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_programs_are_fixpoints(s in spec()) {
        let program = build(&s);
        let printed = print_program(&program);
        let reparsed = parse_program(&printed).map_err(|e| TestCaseError::fail(format!("{e} in\n{printed}")))?;
        prop_assert_eq!(&reparsed, &program, "{}", printed);
        prop_assert!(fixpoint(&printed).is_ok());
    }
}

/// Byte spans of the tokens of a scene source.
fn token_spans(src: &str) -> Vec<(usize, usize)> {
    let b = src.as_bytes();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        } else if c == b'#' {
            while i < b.len() && b[i] != b'\n' {
                i += 1;
            }
            continue;
        } else if c == b'(' && i + 2 < b.len() && b"+-*\\/".contains(&b[i + 1]) && b[i + 2] == b')'
        {
            i += 3;
        } else if c == b'.' && b.get(i + 1) == Some(&b'.') {
            i += 2;
        } else if c.is_ascii_digit() {
            while i < b.len()
                && (b[i].is_ascii_digit() || (b[i] == b'.' && b.get(i + 1) != Some(&b'.')))
            {
                i += 1;
            }
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
        } else {
            i += 1;
        }
        spans.push((start, i));
    }
    spans
}

#[test]
fn deletion_mutants_are_valid_or_positioned() {
    let (mut rejected, mut accepted) = (0, 0);
    for e in ENTRIES {
        let lines: Vec<&str> = e.source.lines().collect();
        for (s, t) in token_spans(e.source) {
            let mutant = format!("{}{}", &e.source[..s], &e.source[t..]);
            match parse_program(&mutant) {
                Ok(_) => {
                    accepted += 1;
                    // Whatever parses must also compile or fail cleanly.
                    let _ = compile_source(&mutant);
                }
                Err(err) => {
                    rejected += 1;
                    let pos = err.pos();
                    assert!(pos.line >= 1 && pos.col >= 1, "{}: {err}", e.id);
                    let mutant_lines = mutant.lines().count().max(lines.len());
                    assert!(pos.line <= mutant_lines + 1, "{}: {err}", e.id);
                    assert!(err
                        .to_string()
                        .starts_with(&format!("{}:{}: ", pos.line, pos.col)));
                }
            }
        }
    }
    assert!(
        rejected > 10 * accepted,
        "{rejected} rejected, {accepted} accepted"
    );
}

#[test]
fn syntax_errors_report_the_offending_token() {
    let err = parse_program("set c(u in 0..1) = (u, 0, 0\nset d = c (*) c").unwrap_err();
    assert!(matches!(err, ParseError::Syntax { .. }));
    assert_eq!((err.pos().line, err.pos().col), (2, 1), "{err}");
}
