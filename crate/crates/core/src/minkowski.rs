//! Minkowski sum, difference, product and divisions of parametric sets.
//!
//! Results are new [`ParamSet`]s whose coordinates are the expanded
//! expressions of the operation applied to the operands' coordinates. The
//! operands must use disjoint parameter names; the result takes the first
//! operand's parameters followed by the second's, so its dimension is the
//! sum of theirs.

use thiserror::Error;

use crate::expr::{Expr, MinkowskiOp};
use crate::paramset::{Constant, ParamSet, ParamSetError, MAX_DIMENSION};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinkowskiError {
    #[error("operands share parameter `{0}`; eliminating shared parameters is a factorization problem and is not supported")]
    SharedParameter(String),
    #[error("result would have dimension {0}, more than {MAX_DIMENSION}")]
    DimensionOverflow(usize),
    #[error("constant `{0}` is declared differently by the operands")]
    ConstantConflict(String),
    #[error("parameter `{0}` of one operand is a constant of the other")]
    NameCollision(String),
    #[error(transparent)]
    Set(#[from] ParamSetError),
}

fn merge_header(a: &ParamSet, b: &ParamSet) -> Result<Vec<Constant>, MinkowskiError> {
    for p in a.params() {
        if b.param(&p.name).is_some() {
            return Err(MinkowskiError::SharedParameter(p.name.clone()));
        }
        if b.constant(&p.name).is_some() {
            return Err(MinkowskiError::NameCollision(p.name.clone()));
        }
    }
    if let Some(p) = b.params().iter().find(|p| a.constant(&p.name).is_some()) {
        return Err(MinkowskiError::NameCollision(p.name.clone()));
    }
    let dim = a.dimension() + b.dimension();
    if dim > MAX_DIMENSION {
        return Err(MinkowskiError::DimensionOverflow(dim));
    }
    let mut constants = a.constants().to_vec();
    for c in b.constants() {
        match a.constant(&c.name) {
            Some(existing) if existing != c => {
                return Err(MinkowskiError::ConstantConflict(c.name.clone()))
            }
            Some(_) => {}
            None => constants.push(c.clone()),
        }
    }
    Ok(constants)
}

fn combine(
    op: MinkowskiOp,
    a: &ParamSet,
    b: &ParamSet,
    coords: [Expr; 4],
    extra_divisor: Option<Expr>,
) -> Result<ParamSet, MinkowskiError> {
    let constants = merge_header(a, b)?;
    let mut divisors = a.divisors().to_vec();
    divisors.extend(b.divisors().iter().cloned());
    divisors.extend(extra_divisor);
    let params = a.params().iter().chain(b.params()).cloned().collect();
    let name = format!("{} {} {}", a.name(), op.token(), b.name());
    Ok(ParamSet::from_parts_unchecked(
        name, params, coords, constants, divisors,
    ))
}

/// Hamilton product of coordinate expressions, term order as in
/// [`crate::Quaternion::mul`].
pub fn product_exprs(a: &[Expr; 4], b: &[Expr; 4]) -> [Expr; 4] {
    let m = |i: usize, j: usize| Expr::mul(a[i].clone(), b[j].clone());
    [
        Expr::sub(Expr::sub(Expr::sub(m(0, 0), m(1, 1)), m(2, 2)), m(3, 3)),
        Expr::sub(Expr::add(Expr::add(m(0, 1), m(1, 0)), m(2, 3)), m(3, 2)),
        Expr::add(Expr::add(Expr::sub(m(0, 2), m(1, 3)), m(2, 0)), m(3, 1)),
        Expr::add(Expr::sub(Expr::add(m(0, 3), m(1, 2)), m(2, 1)), m(3, 0)),
    ]
}

/// `a0² + a1² + a2² + a3²` as products, matching
/// [`crate::Quaternion::norm_squared`].
pub fn norm_squared_expr(a: &[Expr; 4]) -> Expr {
    let sq = |i: usize| Expr::mul(a[i].clone(), a[i].clone());
    Expr::add(Expr::add(Expr::add(sq(0), sq(1)), sq(2)), sq(3))
}

/// `A* / |A|²` componentwise, matching [`crate::Quaternion::inverse`].
pub fn inverse_exprs(a: &[Expr; 4]) -> [Expr; 4] {
    let n2 = norm_squared_expr(a);
    [
        Expr::div(a[0].clone(), n2.clone()),
        Expr::div(Expr::neg(a[1].clone()), n2.clone()),
        Expr::div(Expr::neg(a[2].clone()), n2.clone()),
        Expr::div(Expr::neg(a[3].clone()), n2),
    ]
}

/// `A ⊕ B`.
pub fn msum(a: &ParamSet, b: &ParamSet) -> Result<ParamSet, MinkowskiError> {
    let (x, y) = (a.coords(), b.coords());
    let coords = std::array::from_fn(|k| Expr::add(x[k].clone(), y[k].clone()));
    combine(MinkowskiOp::Sum, a, b, coords, None)
}

/// `A ⊖ B`, the set of all differences `a − b`.
pub fn mdiff(a: &ParamSet, b: &ParamSet) -> Result<ParamSet, MinkowskiError> {
    let (x, y) = (a.coords(), b.coords());
    let coords = std::array::from_fn(|k| Expr::sub(x[k].clone(), y[k].clone()));
    combine(MinkowskiOp::Difference, a, b, coords, None)
}

/// `A ⊗ B`: every point is the left product of a point of `B` by a point of `A`.
pub fn mprod(a: &ParamSet, b: &ParamSet) -> Result<ParamSet, MinkowskiError> {
    let coords = product_exprs(a.coords(), b.coords());
    combine(MinkowskiOp::Product, a, b, coords, None)
}

/// `A⁻¹ ⊗ B`. Points where `A` vanishes are reported when sampled.
pub fn mdiv_left(a: &ParamSet, b: &ParamSet) -> Result<ParamSet, MinkowskiError> {
    let coords = product_exprs(&inverse_exprs(a.coords()), b.coords());
    let guard = norm_squared_expr(a.coords());
    combine(MinkowskiOp::LeftDivision, a, b, coords, Some(guard))
}

/// `B ⊗ A⁻¹`. Points where `A` vanishes are reported when sampled.
pub fn mdiv_right(b: &ParamSet, a: &ParamSet) -> Result<ParamSet, MinkowskiError> {
    let coords = product_exprs(b.coords(), &inverse_exprs(a.coords()));
    let guard = norm_squared_expr(a.coords());
    combine(MinkowskiOp::RightDivision, b, a, coords, Some(guard))
}

/// Dispatches on the operator; `lhs` and `rhs` are in source order.
pub fn apply(op: MinkowskiOp, lhs: &ParamSet, rhs: &ParamSet) -> Result<ParamSet, MinkowskiError> {
    match op {
        MinkowskiOp::Sum => msum(lhs, rhs),
        MinkowskiOp::Difference => mdiff(lhs, rhs),
        MinkowskiOp::Product => mprod(lhs, rhs),
        MinkowskiOp::LeftDivision => mdiv_left(lhs, rhs),
        MinkowskiOp::RightDivision => mdiv_right(lhs, rhs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::paramset::ParamInterval;
    use crate::quat::Quaternion;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

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

    fn d1() -> ParamSet {
        set(
            "d1",
            &[("u", 0.0, 2.0 * PI)],
            ["cos(u)", "sin(u)", "0", "0"],
        )
    }

    fn d2() -> ParamSet {
        set(
            "d2",
            &[("v", 0.0, 2.0 * PI)],
            ["0", "cos(v)", "0", "sin(v)"],
        )
    }

    #[test]
    fn clifford_sum_parametrization() {
        let c1 = set(
            "c1",
            &[("u", 0.0, 2.0 * PI)],
            ["-sqrt(2)/2*cos(u)", "0", "-sqrt(2)/2*sin(u)", "0"],
        );
        let c2 = set(
            "c2",
            &[("v", 0.0, 2.0 * PI)],
            ["0", "sqrt(2)/2*cos(v)", "0", "-sqrt(2)/2*sin(v)"],
        );
        let c = msum(&c1, &c2).unwrap();
        assert_eq!(c.param_names(), ["u", "v"]);
        for (u, v) in [(0.0, 0.0), (0.3, 1.9), (4.0, 5.5)] {
            let p = c.eval_point(&[("u", u), ("v", v)]).unwrap();
            let h = FRAC_1_SQRT_2;
            let expected = [
                -h * f64::cos(u),
                h * f64::cos(v),
                -h * f64::sin(u),
                -h * f64::sin(v),
            ];
            for (a, b) in p.to_array().into_iter().zip(expected) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn clifford_product_at_origin() {
        let d = mprod(&d1(), &d2()).unwrap();
        let p = d.eval_point(&[("u", 0.0), ("v", 0.0)]).unwrap();
        assert_eq!(p.to_array(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn cone_product() {
        let c1 = set("c1", &[("u", -1.0, 1.0)], ["1", "0", "0", "u"]);
        let c2 = set(
            "c2",
            &[("v1", -1.0, 1.0), ("v2", -1.0, 1.0)],
            ["0", "v1", "0", "v2"],
        );
        let c = mprod(&c1, &c2).unwrap();
        assert_eq!(c.dimension(), 3);
        for (u, v1, v2) in [(-0.6, 0.4, 0.5), (0.9, -0.2, 0.7)] {
            let p = c.eval_point(&[("u", u), ("v1", v1), ("v2", v2)]).unwrap();
            assert_eq!(p.to_array(), [-u * v2, v1, u * v1, v2]);
        }
    }

    #[test]
    fn identities() {
        let zero = ParamSet::point("o", Quaternion::ZERO);
        let one = ParamSet::point("e", Quaternion::ONE);
        let a = d1();
        for u in [0.0, 1.0, 2.5] {
            let pa = a.eval_point(&[("u", u)]).unwrap();
            assert_eq!(
                msum(&a, &zero).unwrap().eval_point(&[("u", u)]).unwrap(),
                pa
            );
            assert_eq!(
                mdiff(&a, &zero).unwrap().eval_point(&[("u", u)]).unwrap(),
                pa
            );
            assert_eq!(
                mprod(&one, &a).unwrap().eval_point(&[("u", u)]).unwrap(),
                pa
            );
            assert_eq!(
                mdiv_left(&one, &a)
                    .unwrap()
                    .eval_point(&[("u", u)])
                    .unwrap(),
                pa
            );
        }
    }

    #[test]
    fn difference_with_renamed_copy_vanishes() {
        let a = d1();
        let b = a.rename_params(&[("u", "s")]).unwrap();
        let d = mdiff(&a, &b).unwrap();
        for u in [0.0, 0.7, 3.0] {
            assert_eq!(
                d.eval_point(&[("u", u), ("s", u)]).unwrap(),
                Quaternion::ZERO
            );
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            mprod(&d1(), &d1()),
            Err(MinkowskiError::SharedParameter("u".into()))
        );
        let s2 = set(
            "s",
            &[("a", 0.0, 1.0), ("b", 0.0, 1.0)],
            ["a", "b", "0", "0"],
        );
        let t2 = set(
            "t",
            &[("c", 0.0, 1.0), ("d", 0.0, 1.0)],
            ["c", "d", "0", "0"],
        );
        assert_eq!(msum(&s2, &t2), Err(MinkowskiError::DimensionOverflow(4)));
    }

    #[test]
    fn zero_divisor_reported_at_sample() {
        let a = set("a", &[("s", -1.0, 1.0)], ["s", "0", "0", "0"]);
        let q = mdiv_left(&a, &d2()).unwrap();
        assert!(q.eval_point(&[("s", 0.5), ("v", 1.0)]).is_ok());
        match q.eval_point(&[("s", 0.0), ("v", 1.0)]) {
            Err(ParamSetError::ZeroNormAtSample { assignment }) => {
                assert_eq!(
                    assignment,
                    vec![("s".to_string(), 0.0), ("v".to_string(), 1.0)]
                );
            }
            other => panic!("{other:?}"),
        }
        let r = mdiv_right(&d2(), &a).unwrap();
        assert_eq!(r.param_names(), ["v", "s"]);
        assert!(matches!(
            r.evaluator().unwrap().eval(&[1.0, 0.0]),
            Err(ParamSetError::ZeroNormAtSample { .. })
        ));
    }

    #[test]
    fn product_is_not_commutative() {
        let ab = mprod(&d1(), &d2()).unwrap();
        let ba = mprod(&d2(), &d1()).unwrap();
        let env = [("u", 0.4), ("v", 1.1)];
        assert_ne!(ab.eval_point(&env).unwrap(), ba.eval_point(&env).unwrap());
    }
}
