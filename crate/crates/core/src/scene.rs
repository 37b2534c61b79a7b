//! Compiled scenes and the versioned scene JSON exchanged with the viewer.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::expr::{
    parse_program, EvalError, Expr, Func, MinkowskiOp, ParamDecl, ParseError, Projection,
    SceneProgram, Stmt,
};
use crate::minkowski::{apply, MinkowskiError};
use crate::paramset::{Constant, ParamInterval, ParamSet, ParamSetError};
use crate::projection::{dop, perspective, PerspectiveConfig, ProjectionMode, Rotor4};
use crate::quat::Quaternion;
use crate::tessellate::{sample, SampleGrid, TessellateError};

pub const SCENE_VERSION: u64 = 1;
pub const DEFAULT_FOCAL_DISTANCE: f64 = 3.0;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("in `{context}`: {source}")]
    Eval {
        context: String,
        #[source]
        source: EvalError,
    },
    #[error("set `{name}`: {source}")]
    Set {
        name: String,
        #[source]
        source: ParamSetError,
    },
    #[error("set `{name}`: {source}")]
    Minkowski {
        name: String,
        #[source]
        source: MinkowskiError,
    },
    #[error("unknown set `{0}`")]
    UnknownSet(String),
    #[error("constant `{name}` = {value} lies outside its range [{lo}, {hi}]")]
    ConstantRange {
        name: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid focal distance {0}")]
    FocalDistance(f64),
    #[error("unsupported scene version {0}")]
    Version(u64),
    #[error("scene JSON: {0}")]
    Schema(String),
    #[error(transparent)]
    Sample(#[from] TessellateError),
}

/// How a derived set was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedInfo {
    pub name: String,
    pub op: MinkowskiOp,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub sets: Vec<ParamSet>,
    pub derived: Vec<DerivedInfo>,
    /// The projection chosen by the scene, DOP unless stated otherwise.
    pub projection: ProjectionMode,
    pub focal_distance: f64,
    /// Verification check ids attached to the scene.
    pub checks: Vec<String>,
}

/// Default lattice resolutions by dimension: curves 256, surfaces 64 per
/// parameter, solids 32 per parameter.
pub fn default_resolutions(dimension: usize) -> Vec<usize> {
    let r = match dimension {
        1 => 256,
        2 => 64,
        _ => 32,
    };
    vec![r; dimension]
}

impl Scene {
    pub fn set(&self, name: &str) -> Result<&ParamSet, SceneError> {
        self.sets
            .iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| SceneError::UnknownSet(name.to_string()))
    }

    pub fn derived_info(&self, name: &str) -> Option<&DerivedInfo> {
        self.derived.iter().find(|d| d.name == name)
    }

    /// Sets that are not operands of any derived set, in definition order.
    pub fn top_level(&self) -> Vec<&ParamSet> {
        let used: BTreeSet<&str> = self
            .derived
            .iter()
            .flat_map(|d| [d.lhs.as_str(), d.rhs.as_str()])
            .collect();
        self.sets
            .iter()
            .filter(|s| !used.contains(s.name()))
            .collect()
    }

    pub fn sample_default(&self, name: &str) -> Result<SampleGrid, SceneError> {
        let s = self.set(name)?;
        Ok(sample(s, &default_resolutions(s.dimension()))?)
    }
}

pub fn compile_source(src: &str) -> Result<Scene, SceneError> {
    compile(&parse_program(src)?)
}

struct ConstEnv(BTreeMap<String, Constant>);

impl crate::expr::Bindings for ConstEnv {
    fn lookup(&self, name: &str) -> Option<f64> {
        self.0.get(name).map(|c| c.value)
    }
}

impl ConstEnv {
    fn eval(&self, e: &Expr, context: impl Fn() -> String) -> Result<f64, SceneError> {
        e.eval(self).map_err(|source| SceneError::Eval {
            context: context(),
            source,
        })
    }

    fn intervals(&self, set: &str, decls: &[ParamDecl]) -> Result<Vec<ParamInterval>, SceneError> {
        decls
            .iter()
            .map(|d| {
                let ctx = || format!("range of {}.{}", set, d.name);
                Ok(ParamInterval::new(
                    &d.name,
                    self.eval(&d.lo, ctx)?,
                    self.eval(&d.hi, ctx)?,
                ))
            })
            .collect()
    }
}

/// Renames the parameters of `rhs` that clash with `lhs` to `name_2`,
/// `name_3`, ... so that e.g. `A (+) A` is the pairwise sum.
fn disjoint_rhs(lhs: &ParamSet, rhs: &ParamSet) -> Result<ParamSet, ParamSetError> {
    let mut taken: BTreeSet<String> = lhs
        .param_names()
        .into_iter()
        .chain(rhs.param_names())
        .chain(lhs.constants().iter().map(|c| c.name.as_str()))
        .chain(rhs.constants().iter().map(|c| c.name.as_str()))
        .map(String::from)
        .collect();
    let mut mapping: Vec<(String, String)> = Vec::new();
    for p in rhs.param_names() {
        if lhs.param(p).is_some() {
            let fresh = (2..)
                .map(|k| format!("{p}_{k}"))
                .find(|n| !taken.contains(n))
                .expect("unbounded");
            taken.insert(fresh.clone());
            mapping.push((p.to_string(), fresh));
        }
    }
    if mapping.is_empty() {
        return Ok(rhs.clone());
    }
    let pairs: Vec<(&str, &str)> = mapping
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    rhs.rename_params(&pairs)
}

pub fn derive(
    op: MinkowskiOp,
    name: &str,
    lhs: &ParamSet,
    rhs: &ParamSet,
) -> Result<ParamSet, SceneError> {
    let rhs = disjoint_rhs(lhs, rhs).map_err(|source| SceneError::Set {
        name: name.to_string(),
        source,
    })?;
    apply(op, lhs, &rhs)
        .map(|s| s.with_name(name))
        .map_err(|source| SceneError::Minkowski {
            name: name.to_string(),
            source,
        })
}

pub fn compile(program: &SceneProgram) -> Result<Scene, SceneError> {
    let mut env = ConstEnv(BTreeMap::new());
    let mut sets: Vec<ParamSet> = Vec::new();
    let mut derived = Vec::new();
    let mut projection = ProjectionMode::Dop;
    let mut focal_distance = DEFAULT_FOCAL_DISTANCE;
    let find = |sets: &[ParamSet], n: &str| {
        sets.iter()
            .position(|s| s.name() == n)
            .ok_or_else(|| SceneError::UnknownSet(n.to_string()))
    };
    for stmt in &program.stmts {
        match stmt {
            Stmt::Const { name, value, range } => {
                let v = env.eval(value, || format!("const {name}"))?;
                let (min, max) = match range {
                    Some((lo, hi)) => (
                        env.eval(lo, || format!("range of const {name}"))?,
                        env.eval(hi, || format!("range of const {name}"))?,
                    ),
                    None => (v, v),
                };
                if !(min <= v && v <= max) {
                    return Err(SceneError::ConstantRange {
                        name: name.clone(),
                        value: v,
                        lo: min,
                        hi: max,
                    });
                }
                env.0.insert(
                    name.clone(),
                    Constant {
                        name: name.clone(),
                        value: v,
                        min,
                        max,
                    },
                );
            }
            Stmt::Set {
                name,
                params,
                coords,
            } => {
                let intervals = env.intervals(name, params)?;
                let used: BTreeSet<String> = coords.iter().flat_map(Expr::free_names).collect();
                let constants = env
                    .0
                    .values()
                    .filter(|c| used.contains(&c.name))
                    .cloned()
                    .collect();
                let set = ParamSet::new(name.clone(), intervals, coords.clone(), constants)
                    .map_err(|source| SceneError::Set {
                        name: name.clone(),
                        source,
                    })?;
                sets.push(set);
            }
            Stmt::Derived { name, op, lhs, rhs } => {
                let l = &sets[find(&sets, lhs)?];
                let r = &sets[find(&sets, rhs)?];
                let set = derive(*op, name, l, r)?;
                sets.push(set);
                derived.push(DerivedInfo {
                    name: name.clone(),
                    op: *op,
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                });
            }
            Stmt::Project(Projection::Dop) => projection = ProjectionMode::Dop,
            Stmt::Project(Projection::Perspective { d }) => {
                focal_distance = env.eval(d, || "project perspective".to_string())?;
                let cfg = PerspectiveConfig::new(focal_distance)
                    .map_err(|_| SceneError::FocalDistance(focal_distance))?;
                projection = ProjectionMode::Perspective(cfg);
            }
            Stmt::Range { set, params } => {
                let i = find(&sets, set)?;
                for iv in env.intervals(set, params)? {
                    let updated = sets[i]
                        .clone()
                        .with_interval(&iv.name, iv.lo, iv.hi)
                        .map_err(|source| SceneError::Set {
                            name: set.clone(),
                            source,
                        })?;
                    sets[i] = updated;
                }
            }
        }
    }
    Ok(Scene {
        sets,
        derived,
        projection,
        focal_distance,
        checks: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// JSON

/// `{"op": ..., "args": [...]}` form of an expression.
pub fn expr_to_json(e: &Expr) -> Value {
    let node = |op: &str, args: Vec<Value>| json!({ "op": op, "args": args });
    match e {
        Expr::Const(v) => node("const", vec![json!(v)]),
        Expr::Param(n) => node("param", vec![json!(n)]),
        Expr::Neg(a) => node("neg", vec![expr_to_json(a)]),
        Expr::Add(a, b) => node("add", vec![expr_to_json(a), expr_to_json(b)]),
        Expr::Sub(a, b) => node("sub", vec![expr_to_json(a), expr_to_json(b)]),
        Expr::Mul(a, b) => node("mul", vec![expr_to_json(a), expr_to_json(b)]),
        Expr::Div(a, b) => node("div", vec![expr_to_json(a), expr_to_json(b)]),
        Expr::Pow(a, n) => node("pow", vec![expr_to_json(a), json!(n)]),
        Expr::Call(f, a) => node(f.name(), vec![expr_to_json(a)]),
    }
}

pub fn expr_from_json(v: &Value) -> Result<Expr, SceneError> {
    let bad = |msg: &str| SceneError::Schema(format!("{msg}: {v}"));
    let op = v
        .get("op")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("missing op"))?;
    let args = v
        .get("args")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing args"))?;
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(bad("wrong number of args"))
        }
    };
    let sub = |i: usize| expr_from_json(&args[i]);
    Ok(match op {
        "const" => {
            arity(1)?;
            let x = args[0]
                .as_f64()
                .ok_or_else(|| bad("const needs a number"))?;
            Expr::Const(x)
        }
        "param" => {
            arity(1)?;
            let n = args[0].as_str().ok_or_else(|| bad("param needs a name"))?;
            Expr::param(n)
        }
        "neg" => {
            arity(1)?;
            Expr::neg(sub(0)?)
        }
        "add" | "sub" | "mul" | "div" => {
            arity(2)?;
            let (a, b) = (sub(0)?, sub(1)?);
            match op {
                "add" => Expr::add(a, b),
                "sub" => Expr::sub(a, b),
                "mul" => Expr::mul(a, b),
                _ => Expr::div(a, b),
            }
        }
        "pow" => {
            arity(2)?;
            let n = args[1]
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| bad("pow needs a non-negative integer exponent"))?;
            Expr::pow(sub(0)?, n)
        }
        f => match Func::from_name(f) {
            Some(func) => {
                arity(1)?;
                Expr::call(func, sub(0)?)
            }
            None => return Err(bad("unknown op")),
        },
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SetJson {
    name: String,
    params: Vec<ParamInterval>,
    constants: Vec<Constant>,
    coords: Vec<Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct GridJson {
    set_name: String,
    resolutions: Vec<usize>,
    points: Vec<f64>,
    layout: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PerspectiveJson {
    d: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProjectionsJson {
    perspective: PerspectiveJson,
    dop: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SceneJson {
    m4d_scene: u64,
    version: u64,
    sets: Vec<SetJson>,
    derived: Vec<DerivedJson>,
    grids: Vec<GridJson>,
    projections: ProjectionsJson,
    checks: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DerivedJson {
    name: String,
    op: String,
    lhs: String,
    rhs: String,
}

fn set_json(s: &ParamSet) -> SetJson {
    SetJson {
        name: s.name().to_string(),
        params: s.params().to_vec(),
        constants: s.constants().to_vec(),
        coords: s.coords().iter().map(expr_to_json).collect(),
    }
}

/// Serializes the scene with every set baked at its default resolution.
pub fn to_json(scene: &Scene) -> Result<String, SceneError> {
    let mut grids = Vec::new();
    for s in &scene.sets {
        let res = default_resolutions(s.dimension());
        let g = sample(s, &res)?;
        grids.push(GridJson {
            set_name: s.name().to_string(),
            resolutions: g.resolutions().to_vec(),
            points: g.points().iter().flat_map(|p| p.to_array()).collect(),
            layout: "row-major".into(),
        });
    }
    let doc = SceneJson {
        m4d_scene: SCENE_VERSION,
        version: SCENE_VERSION,
        sets: scene.sets.iter().map(set_json).collect(),
        derived: scene
            .derived
            .iter()
            .map(|d| DerivedJson {
                name: d.name.clone(),
                op: d.op.name().to_string(),
                lhs: d.lhs.clone(),
                rhs: d.rhs.clone(),
            })
            .collect(),
        grids,
        projections: ProjectionsJson {
            perspective: PerspectiveJson {
                d: scene.focal_distance,
            },
            dop: BTreeMap::new(),
            default: Some(
                match scene.projection {
                    ProjectionMode::Perspective(_) => "perspective",
                    _ => "dop",
                }
                .to_string(),
            ),
        },
        checks: scene.checks.clone(),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| SceneError::Schema(e.to_string()))
}

/// Rebuilds a scene from its JSON. Derived sets are recomputed from their
/// operands and must agree with the stored expressions.
pub fn from_json(text: &str) -> Result<Scene, SceneError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| SceneError::Schema(e.to_string()))?;
    for key in ["m4dScene", "version"] {
        match raw.get(key).and_then(Value::as_u64) {
            Some(SCENE_VERSION) => {}
            Some(v) => return Err(SceneError::Version(v)),
            None => return Err(SceneError::Schema(format!("missing `{key}`"))),
        }
    }
    let doc: SceneJson =
        serde_json::from_value(raw).map_err(|e| SceneError::Schema(e.to_string()))?;
    let mut sets: Vec<ParamSet> = Vec::new();
    let mut derived = Vec::new();
    for sj in &doc.sets {
        let coords: Vec<Expr> = sj
            .coords
            .iter()
            .map(expr_from_json)
            .collect::<Result<_, _>>()?;
        let coords: [Expr; 4] = coords
            .try_into()
            .map_err(|_| SceneError::Schema(format!("set `{}` needs four coordinates", sj.name)))?;
        let set_err = |source| SceneError::Set {
            name: sj.name.clone(),
            source,
        };
        let set = match doc.derived.iter().find(|d| d.name == sj.name) {
            Some(dj) => {
                let op = MinkowskiOp::from_name(&dj.op)
                    .ok_or_else(|| SceneError::Schema(format!("unknown op `{}`", dj.op)))?;
                let get = |n: &str| {
                    sets.iter()
                        .find(|s| s.name() == n)
                        .ok_or_else(|| SceneError::UnknownSet(n.to_string()))
                };
                let mut s = derive(op, &sj.name, get(&dj.lhs)?, get(&dj.rhs)?)?;
                for p in &sj.params {
                    s = s.with_interval(&p.name, p.lo, p.hi).map_err(set_err)?;
                }
                for c in &sj.constants {
                    s = s.with_constant(&c.name, c.value).map_err(set_err)?;
                }
                if s.coords() != &coords || s.params() != sj.params.as_slice() {
                    return Err(SceneError::Schema(format!(
                        "derived set `{}` does not match its operands",
                        sj.name
                    )));
                }
                derived.push(DerivedInfo {
                    name: dj.name.clone(),
                    op,
                    lhs: dj.lhs.clone(),
                    rhs: dj.rhs.clone(),
                });
                s
            }
            None => ParamSet::new(
                sj.name.clone(),
                sj.params.clone(),
                coords,
                sj.constants.clone(),
            )
            .map_err(set_err)?,
        };
        sets.push(set);
    }
    if let Some(d) = doc
        .derived
        .iter()
        .find(|d| !sets.iter().any(|s| s.name() == d.name))
    {
        return Err(SceneError::UnknownSet(d.name.clone()));
    }
    let d = doc.projections.perspective.d;
    let cfg = PerspectiveConfig::new(d).map_err(|_| SceneError::FocalDistance(d))?;
    let projection = match doc.projections.default.as_deref() {
        Some("perspective") => ProjectionMode::Perspective(cfg),
        _ => ProjectionMode::Dop,
    };
    Ok(Scene {
        sets,
        derived,
        projection,
        focal_distance: d,
        checks: doc.checks,
    })
}

/// Reference values for an independent evaluator: set evaluations at a few
/// parameter and constant choices, plus projections and rotations.
pub fn fixtures_json(scene: &Scene) -> Result<String, SceneError> {
    let mut evaluations = Vec::new();
    for s in &scene.sets {
        let res = vec![5; s.dimension()];
        let mut variants = vec![s.clone()];
        for c in s.constants().iter().filter(|c| c.min < c.max) {
            for v in [c.min, c.max] {
                variants.push(s.clone().with_constant(&c.name, v).map_err(|source| {
                    SceneError::Set {
                        name: s.name().to_string(),
                        source,
                    }
                })?);
            }
        }
        for variant in &variants {
            let g = match sample(variant, &res) {
                Ok(g) => g,
                // Lattices hitting a singular divisor are skipped.
                Err(TessellateError::Eval { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            for (f, p) in g.points().iter().enumerate() {
                let params: BTreeMap<String, f64> = g.assignment(f).into_iter().collect();
                let constants: BTreeMap<&str, f64> = variant
                    .constants()
                    .iter()
                    .map(|c| (c.name.as_str(), c.value))
                    .collect();
                evaluations.push(json!({
                    "set": s.name(),
                    "params": params,
                    "constants": constants,
                    "expected": p.to_array(),
                }));
            }
        }
    }
    let samples = [
        [1.0, 2.0, 4.0, 8.0],
        [0.3, 0.4, -0.24, 0.5],
        [-1.5, 0.25, 2.0, -3.0],
    ];
    let mut projections = Vec::new();
    for c in samples {
        let p = Quaternion::from_array(c).expect("finite");
        let img = dop(p);
        for d in [1.0, 2.0, scene.focal_distance] {
            let cfg = PerspectiveConfig::new(d).map_err(|_| SceneError::FocalDistance(d))?;
            if let Ok(q) = perspective(p, &cfg) {
                projections.push(
                    json!({ "kind": "perspective", "d": d, "point": c, "expected": q.to_array() }),
                );
            }
        }
        projections.push(json!({ "kind": "dop-z", "point": c, "expected": img.z.to_array() }));
        projections.push(json!({ "kind": "dop-w", "point": c, "expected": img.w.to_array() }));
    }
    let rotor = Rotor4::left_only(Quaternion::from_array([0.5; 4]).expect("finite")).expect("unit");
    let rotations: Vec<Value> = samples
        .iter()
        .map(|&c| {
            let p = Quaternion::from_array(c).expect("finite");
            json!({
                "left": rotor.left().to_array(),
                "right": rotor.right().to_array(),
                "point": c,
                "expected": rotor.apply(p).to_array(),
            })
        })
        .collect();
    let doc = json!({
        "m4dFixtures": 1,
        "tolerance": 1e-9,
        "evaluations": evaluations,
        "projections": projections,
        "rotations": rotations,
    });
    serde_json::to_string_pretty(&doc).map_err(|e| SceneError::Schema(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = "
const t = 2 in 0.5..4*pi
const k = 3
set a(u in 0..2*pi) = (cos(u), sin(u), 0, 0)
set b(u in -1..1) = (t*u, 0, k, 0)
set c = a (+) b
set d = a (*) a
range b(u in -2..2)
project perspective d = 4
";

    #[test]
    fn compiles() {
        let s = compile_source(SRC).unwrap();
        assert_eq!(s.sets.len(), 4);
        let b = s.set("b").unwrap();
        assert_eq!(b.params()[0].lo, -2.0);
        assert_eq!(b.constants().len(), 2);
        assert_eq!(b.constant("t").unwrap().max, 4.0 * std::f64::consts::PI);
        assert_eq!(b.constant("k").unwrap().min, 3.0);
        let c = s.set("c").unwrap();
        assert_eq!(c.param_names(), ["u", "u_2"]);
        // `c` was built before the range statement.
        assert_eq!(c.params()[1].lo, -1.0);
        assert_eq!(s.set("d").unwrap().param_names(), ["u", "u_2"]);
        assert_eq!(s.focal_distance, 4.0);
        let top: Vec<_> = s.top_level().iter().map(|s| s.name().to_string()).collect();
        assert_eq!(top, ["c", "d"]);
    }

    #[test]
    fn json_round_trip() {
        let mut s = compile_source(SRC).unwrap();
        s.checks = vec!["x".into()];
        let text = to_json(&s).unwrap();
        let back = from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(to_json(&back).unwrap(), text);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["m4dScene"], 1);
        assert_eq!(v["grids"][0]["points"].as_array().unwrap().len(), 256 * 4);
        assert_eq!(v["grids"][0]["layout"], "row-major");
    }

    #[test]
    fn version_and_schema_errors() {
        let s = compile_source(SRC).unwrap();
        let text = to_json(&s)
            .unwrap()
            .replacen("\"version\": 1", "\"version\": 2", 1);
        assert!(matches!(from_json(&text), Err(SceneError::Version(2))));
        let text = to_json(&s).unwrap();
        assert!(matches!(
            from_json(&text[..text.len() / 2]),
            Err(SceneError::Schema(_))
        ));
    }

    #[test]
    fn expr_json() {
        let e = crate::expr::parse_expr("-sqrt(2)/2*cos(u)^2 + pi - -1.5").unwrap();
        assert_eq!(expr_from_json(&expr_to_json(&e)).unwrap(), e);
        assert!(expr_from_json(&json!({"op": "frob", "args": []})).is_err());
        assert!(expr_from_json(&json!({"op": "add", "args": [1]})).is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            compile_source("const t = 5 in 0..1"),
            Err(SceneError::ConstantRange { .. })
        ));
        assert!(matches!(
            compile_source("set a(u in 1..0) = (u, 0, 0, 0)"),
            Err(SceneError::Set { .. })
        ));
        assert!(matches!(
            compile_source("set a(u in 0..1/0) = (u, 0, 0, 0)"),
            Err(SceneError::Eval { .. })
        ));
    }

    #[test]
    fn fixtures() {
        let s = compile_source(SRC).unwrap();
        let v: Value = serde_json::from_str(&fixtures_json(&s).unwrap()).unwrap();
        assert!(v["evaluations"].as_array().unwrap().len() > 20);
    }
}
