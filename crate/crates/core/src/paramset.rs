//! Parametric point sets of dimension 0 to 3 in R⁴.
//!
//! A [`ParamSet`] carries up to three named parameters with finite sampling
//! intervals, four coordinate expressions, and named constants (such as the
//! helix pitch `t`). Intervals bound sampling only; evaluation accepts any
//! parameter value.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{is_builtin, is_identifier, Bindings, CompiledExpr, EvalError, Expr, Func};
use crate::quat::{zero_tolerance, Quaternion};

pub const MAX_DIMENSION: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamInterval {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl ParamInterval {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            lo,
            hi,
        }
    }
}

/// A named scalar with the range it may be adjusted over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constant {
    pub name: String,
    pub value: f64,
    pub min: f64,
    pub max: f64,
}

impl Constant {
    /// A constant pinned to a single value.
    pub fn fixed(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            min: value,
            max: value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamSetError {
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("name `{0}` is used twice")]
    DuplicateName(String),
    #[error("interval of `{name}` is invalid: [{lo}, {hi}]")]
    InvalidInterval { name: String, lo: f64, hi: f64 },
    #[error("constant `{name}` = {value} is outside [{min}, {max}]")]
    InvalidConstant {
        name: String,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("a point set has at most {MAX_DIMENSION} parameters, got {0}")]
    TooManyParams(usize),
    #[error("coordinate expressions reference unbound name `{0}`")]
    UnboundName(String),
    #[error("renaming would collide on `{0}`")]
    NameCollision(String),
    #[error("set has no parameter `{0}`")]
    UnknownParam(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("divisor vanishes at {}", fmt_assignment(.assignment))]
    ZeroNormAtSample { assignment: Vec<(String, f64)> },
    #[error("non-finite coordinate at {}", fmt_assignment(.assignment))]
    NonFinitePoint { assignment: Vec<(String, f64)> },
}

pub(crate) fn fmt_assignment(a: &[(String, f64)]) -> String {
    if a.is_empty() {
        return "the only point".into();
    }
    a.iter()
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamSet {
    name: String,
    params: Vec<ParamInterval>,
    coords: [Expr; 4],
    constants: Vec<Constant>,
    /// Squared-norm expressions of every quaternion this set divides by.
    divisors: Vec<Expr>,
}

impl ParamSet {
    pub fn new(
        name: impl Into<String>,
        params: Vec<ParamInterval>,
        coords: [Expr; 4],
        constants: Vec<Constant>,
    ) -> Result<Self, ParamSetError> {
        let set = Self {
            name: name.into(),
            params,
            coords,
            constants,
            divisors: Vec::new(),
        };
        set.validate()?;
        Ok(set)
    }

    /// A 0-dimensional set holding one point.
    pub fn point(name: impl Into<String>, q: Quaternion) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
            coords: q.to_array().map(Expr::Const),
            constants: Vec::new(),
            divisors: Vec::new(),
        }
    }

    pub(crate) fn from_parts_unchecked(
        name: String,
        params: Vec<ParamInterval>,
        coords: [Expr; 4],
        constants: Vec<Constant>,
        divisors: Vec<Expr>,
    ) -> Self {
        Self {
            name,
            params,
            coords,
            constants,
            divisors,
        }
    }

    fn validate(&self) -> Result<(), ParamSetError> {
        if self.params.len() > MAX_DIMENSION {
            return Err(ParamSetError::TooManyParams(self.params.len()));
        }
        let mut seen: Vec<&str> = Vec::new();
        let names = self
            .params
            .iter()
            .map(|p| p.name.as_str())
            .chain(self.constants.iter().map(|c| c.name.as_str()));
        for n in names {
            if !is_identifier(n) || is_builtin(n) || Func::from_name(n).is_some() {
                return Err(ParamSetError::InvalidName(n.to_string()));
            }
            if seen.contains(&n) {
                return Err(ParamSetError::DuplicateName(n.to_string()));
            }
            seen.push(n);
        }
        for p in &self.params {
            if !(p.lo.is_finite() && p.hi.is_finite() && p.lo <= p.hi) {
                return Err(ParamSetError::InvalidInterval {
                    name: p.name.clone(),
                    lo: p.lo,
                    hi: p.hi,
                });
            }
        }
        for c in &self.constants {
            if !(c.value.is_finite() && c.min <= c.value && c.value <= c.max) {
                return Err(ParamSetError::InvalidConstant {
                    name: c.name.clone(),
                    value: c.value,
                    min: c.min,
                    max: c.max,
                });
            }
        }
        for e in self.coords.iter().chain(self.divisors.iter()) {
            if let Some(n) = e
                .free_names()
                .into_iter()
                .find(|n| !seen.contains(&n.as_str()))
            {
                return Err(ParamSetError::UnboundName(n));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn params(&self) -> &[ParamInterval] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<&ParamInterval> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn coords(&self) -> &[Expr; 4] {
        &self.coords
    }

    pub fn constants(&self) -> &[Constant] {
        &self.constants
    }

    pub fn constant(&self, name: &str) -> Option<&Constant> {
        self.constants.iter().find(|c| c.name == name)
    }

    pub fn divisors(&self) -> &[Expr] {
        &self.divisors
    }

    pub fn dimension(&self) -> usize {
        self.params.len()
    }

    /// Replaces a sampling interval.
    pub fn with_interval(mut self, name: &str, lo: f64, hi: f64) -> Result<Self, ParamSetError> {
        let p = self
            .params
            .iter_mut()
            .find(|p| p.name == name)
            .ok_or_else(|| ParamSetError::UnknownParam(name.to_string()))?;
        p.lo = lo;
        p.hi = hi;
        self.validate()?;
        Ok(self)
    }

    /// Sets a constant's value; it must stay within the declared range.
    pub fn with_constant(mut self, name: &str, value: f64) -> Result<Self, ParamSetError> {
        let c = self
            .constants
            .iter_mut()
            .find(|c| c.name == name)
            .ok_or_else(|| ParamSetError::UnknownParam(name.to_string()))?;
        c.value = value;
        self.validate()?;
        Ok(self)
    }

    /// Evaluates the set at one parameter assignment.
    pub fn eval_point<B: Bindings + ?Sized>(
        &self,
        assignment: &B,
    ) -> Result<Quaternion, ParamSetError> {
        let mut values = Vec::with_capacity(self.params.len());
        for p in &self.params {
            values.push(
                assignment
                    .lookup(&p.name)
                    .ok_or_else(|| EvalError::UnboundParam(p.name.clone()))?,
            );
        }
        let env = Env {
            set: self,
            values: &values,
        };
        for d in &self.divisors {
            if d.eval(&env)?.sqrt() <= zero_tolerance() {
                return Err(ParamSetError::ZeroNormAtSample {
                    assignment: self.describe(&values),
                });
            }
        }
        let mut c = [0.0; 4];
        for (k, e) in self.coords.iter().enumerate() {
            c[k] = e.eval(&env)?;
        }
        Quaternion::from_array(c).map_err(|_| ParamSetError::NonFinitePoint {
            assignment: self.describe(&values),
        })
    }

    fn describe(&self, values: &[f64]) -> Vec<(String, f64)> {
        self.params
            .iter()
            .zip(values)
            .map(|(p, v)| (p.name.clone(), *v))
            .collect()
    }

    /// Compiles the coordinate expressions for repeated evaluation with
    /// parameter values given positionally.
    pub fn evaluator(&self) -> Result<SetEvaluator, ParamSetError> {
        let slots: Vec<&str> = self
            .params
            .iter()
            .map(|p| p.name.as_str())
            .chain(self.constants.iter().map(|c| c.name.as_str()))
            .collect();
        let compile = |e: &Expr| e.compile(&slots);
        Ok(SetEvaluator {
            param_names: self.params.iter().map(|p| p.name.clone()).collect(),
            constants: self.constants.iter().map(|c| c.value).collect(),
            coords: [
                compile(&self.coords[0])?,
                compile(&self.coords[1])?,
                compile(&self.coords[2])?,
                compile(&self.coords[3])?,
            ],
            divisors: self
                .divisors
                .iter()
                .map(compile)
                .collect::<Result<_, _>>()?,
        })
    }

    /// Renames parameters. The mapping must be injective and may not collide
    /// with constants or with parameters left unchanged.
    pub fn rename_params(&self, mapping: &[(&str, &str)]) -> Result<ParamSet, ParamSetError> {
        let mut targets: Vec<&str> = Vec::new();
        for (from, to) in mapping {
            if self.param(from).is_none() {
                return Err(ParamSetError::UnknownParam(from.to_string()));
            }
            if targets.contains(to) {
                return Err(ParamSetError::NameCollision(to.to_string()));
            }
            targets.push(to);
        }
        let lookup: HashMap<&str, &str> = mapping.iter().copied().collect();
        for p in &self.params {
            if !lookup.contains_key(p.name.as_str()) && targets.contains(&p.name.as_str()) {
                return Err(ParamSetError::NameCollision(p.name.clone()));
            }
        }
        if let Some(c) = self
            .constants
            .iter()
            .find(|c| targets.contains(&c.name.as_str()))
        {
            return Err(ParamSetError::NameCollision(c.name.clone()));
        }
        let rename = |n: &str| lookup.get(n).map(|s| s.to_string());
        let params = self
            .params
            .iter()
            .map(|p| ParamInterval {
                name: rename(&p.name).unwrap_or_else(|| p.name.clone()),
                ..p.clone()
            })
            .collect();
        let set = Self {
            name: self.name.clone(),
            params,
            coords: self.coords.clone().map(|e| e.rename(&rename)),
            constants: self.constants.clone(),
            divisors: self.divisors.iter().map(|e| e.rename(&rename)).collect(),
        };
        set.validate()?;
        Ok(set)
    }

    /// Fixes one parameter at `value`, lowering the dimension by one.
    pub fn freeze(&self, param: &str, value: f64) -> Result<ParamSet, ParamSetError> {
        if self.param(param).is_none() {
            return Err(ParamSetError::UnknownParam(param.to_string()));
        }
        let subst = |n: &str| (n == param).then_some(Expr::Const(value));
        Ok(Self {
            name: self.name.clone(),
            params: self
                .params
                .iter()
                .filter(|p| p.name != param)
                .cloned()
                .collect(),
            coords: self.coords.clone().map(|e| e.map_params(&subst)),
            constants: self.constants.clone(),
            divisors: self.divisors.iter().map(|e| e.map_params(&subst)).collect(),
        })
    }
}

struct Env<'a> {
    set: &'a ParamSet,
    values: &'a [f64],
}

impl Bindings for Env<'_> {
    fn lookup(&self, name: &str) -> Option<f64> {
        if let Some(i) = self.set.params.iter().position(|p| p.name == name) {
            return Some(self.values[i]);
        }
        self.set.constant(name).map(|c| c.value)
    }
}

/// Compiled form of a [`ParamSet`]; results are bit-identical to
/// [`ParamSet::eval_point`].
#[derive(Debug, Clone)]
pub struct SetEvaluator {
    param_names: Vec<String>,
    constants: Vec<f64>,
    coords: [CompiledExpr; 4],
    divisors: Vec<CompiledExpr>,
}

impl SetEvaluator {
    /// `params` lists parameter values in declaration order.
    pub fn eval(&self, params: &[f64]) -> Result<Quaternion, ParamSetError> {
        assert_eq!(
            params.len(),
            self.param_names.len(),
            "wrong number of parameter values"
        );
        let mut slots = [0.0f64; 16];
        let n = params.len() + self.constants.len();
        let mut heap;
        let values: &mut [f64] = if n <= slots.len() {
            &mut slots[..n]
        } else {
            heap = vec![0.0; n];
            &mut heap
        };
        values[..params.len()].copy_from_slice(params);
        values[params.len()..].copy_from_slice(&self.constants);
        let describe = || {
            self.param_names
                .iter()
                .cloned()
                .zip(params.iter().copied())
                .collect::<Vec<_>>()
        };
        for d in &self.divisors {
            if d.eval(values)?.sqrt() <= zero_tolerance() {
                return Err(ParamSetError::ZeroNormAtSample {
                    assignment: describe(),
                });
            }
        }
        let mut c = [0.0; 4];
        for (k, e) in self.coords.iter().enumerate() {
            c[k] = e.eval(values)?;
        }
        Quaternion::from_array(c).map_err(|_| ParamSetError::NonFinitePoint {
            assignment: describe(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use std::f64::consts::PI;

    fn set(name: &str, params: &[(&str, f64, f64)], coords: [&str; 4]) -> ParamSet {
        ParamSet::new(
            name,
            params
                .iter()
                .map(|(n, lo, hi)| ParamInterval::new(*n, *lo, *hi))
                .collect(),
            coords.map(|c| parse_expr(c).unwrap()),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn hopf_origin() {
        let hopf = set(
            "hopf",
            &[("u", 0.0, 2.0 * PI), ("v1", 0.0, PI), ("v2", 0.0, 2.0 * PI)],
            [
                "cos(u)*cos(v1)",
                "sin(u)*cos(v1)",
                "sin(v1)*cos(u+v2)",
                "sin(v1)*sin(u+v2)",
            ],
        );
        let p = hopf
            .eval_point(&[("u", 0.0), ("v1", 0.0), ("v2", 0.0)])
            .unwrap();
        assert_eq!(p, Quaternion::ONE);
    }

    #[test]
    fn cone_line() {
        let c1 = set("c1", &[("u", -1.0, 1.0)], ["1", "0", "0", "u"]);
        let p = c1.eval_point(&[("u", 0.7)]).unwrap();
        assert_eq!(p.to_array(), [1.0, 0.0, 0.0, 0.7]);
    }

    #[test]
    fn point_set() {
        let q = Quaternion::new(0.5, -1.0, 2.0, 3.0).unwrap();
        let p = ParamSet::point("q", q);
        assert_eq!(p.dimension(), 0);
        assert_eq!(p.eval_point(&[] as &[(&str, f64)]).unwrap(), q);
        assert_eq!(p.evaluator().unwrap().eval(&[]).unwrap(), q);
    }

    #[test]
    fn evaluation_outside_interval_and_unbound() {
        let c = set("c", &[("u", 0.0, 1.0)], ["u", "0", "0", "0"]);
        assert_eq!(c.eval_point(&[("u", 5.0)]).unwrap().a0(), 5.0);
        assert!(matches!(
            c.eval_point(&[("v", 5.0)]),
            Err(ParamSetError::Eval(EvalError::UnboundParam(n))) if n == "u"
        ));
    }

    #[test]
    fn rename_preserves_points() {
        let c = set("c", &[("u", 0.0, 2.0 * PI)], ["cos(u)", "sin(u)", "0", "0"]);
        let r = c.rename_params(&[("u", "s")]).unwrap();
        assert_eq!(r.param_names(), ["s"]);
        assert_eq!(
            r.eval_point(&[("s", PI / 2.0)]).unwrap(),
            c.eval_point(&[("u", PI / 2.0)]).unwrap()
        );
        let back = r.rename_params(&[("s", "u")]).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rename_collisions() {
        let c = ParamSet::new(
            "c",
            vec![
                ParamInterval::new("u", 0.0, 1.0),
                ParamInterval::new("v", 0.0, 1.0),
            ],
            ["u", "v", "t", "0"].map(|s| parse_expr(s).unwrap()),
            vec![Constant::fixed("t", 2.0)],
        )
        .unwrap();
        assert_eq!(
            c.rename_params(&[("u", "v")]),
            Err(ParamSetError::NameCollision("v".into()))
        );
        assert_eq!(
            c.rename_params(&[("u", "t")]),
            Err(ParamSetError::NameCollision("t".into()))
        );
        assert_eq!(
            c.rename_params(&[("u", "a"), ("v", "a")]),
            Err(ParamSetError::NameCollision("a".into()))
        );
        assert!(c.rename_params(&[("u", "v"), ("v", "u")]).is_ok());
        assert_eq!(
            c.rename_params(&[("w", "a")]),
            Err(ParamSetError::UnknownParam("w".into()))
        );
    }

    #[test]
    fn validation() {
        let coords = ["u", "0", "0", "0"].map(|s| parse_expr(s).unwrap());
        assert!(matches!(
            ParamSet::new(
                "c",
                vec![ParamInterval::new("u", 1.0, 0.0)],
                coords.clone(),
                vec![]
            ),
            Err(ParamSetError::InvalidInterval { .. })
        ));
        assert!(matches!(
            ParamSet::new("c", vec![], coords.clone(), vec![]),
            Err(ParamSetError::UnboundName(n)) if n == "u"
        ));
        assert!(matches!(
            ParamSet::new(
                "c",
                vec![ParamInterval::new("u", 0.0, 1.0)],
                coords,
                vec![Constant {
                    name: "t".into(),
                    value: 5.0,
                    min: 0.0,
                    max: 1.0
                }]
            ),
            Err(ParamSetError::InvalidConstant { .. })
        ));
    }

    #[test]
    fn constants_participate() {
        let helix = ParamSet::new(
            "d2",
            vec![ParamInterval::new("v", -2.0 * PI, 2.0 * PI)],
            ["t*v/(2*pi)", "cos(v)", "0", "sin(v)"].map(|s| parse_expr(s).unwrap()),
            vec![Constant {
                name: "t".into(),
                value: 2.0,
                min: 0.5,
                max: 4.0 * PI,
            }],
        )
        .unwrap();
        assert_eq!(helix.eval_point(&[("v", 2.0 * PI)]).unwrap().a0(), 2.0);
        let wide = helix.with_constant("t", 2.0 * PI).unwrap();
        assert!((wide.eval_point(&[("v", 2.0 * PI)]).unwrap().a0() - 2.0 * PI).abs() < 1e-15);
        assert!(wide.with_constant("t", 100.0).is_err());
    }

    #[test]
    fn freeze_drops_parameter() {
        let c = set(
            "c",
            &[("u", 0.0, 1.0), ("v", 0.0, 1.0)],
            ["u*v", "u", "v", "0"],
        );
        let f = c.freeze("u", 0.25).unwrap();
        assert_eq!(f.dimension(), 1);
        assert_eq!(
            f.eval_point(&[("v", 0.5)]).unwrap(),
            c.eval_point(&[("u", 0.25), ("v", 0.5)]).unwrap()
        );
        assert!(c.freeze("w", 0.0).is_err());
    }

    #[test]
    fn evaluator_matches_eval_point_bits() {
        let c = set(
            "c",
            &[("u", -1.0, 1.0), ("v", 0.0, 2.0 * PI)],
            ["u*cos(v)", "cos(v)", "u*sin(v)", "sin(v)^2 - u/3"],
        );
        let ev = c.evaluator().unwrap();
        for i in 0..40 {
            let (u, v) = (i as f64 / 17.0 - 1.0, i as f64 * 0.3);
            let a = c.eval_point(&[("u", u), ("v", v)]).unwrap();
            let b = ev.eval(&[u, v]).unwrap();
            assert_eq!(
                a.to_array().map(f64::to_bits),
                b.to_array().map(f64::to_bits)
            );
        }
    }
}
