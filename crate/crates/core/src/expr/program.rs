use super::Expr;

/// Set-level operators of the scene language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinkowskiOp {
    /// `(+)`
    Sum,
    /// `(-)`
    Difference,
    /// `(*)`, lhs is the left factor.
    Product,
    /// `(\)`, `lhs⁻¹ ⊗ rhs`.
    LeftDivision,
    /// `(/)`, `lhs ⊗ rhs⁻¹`.
    RightDivision,
}

impl MinkowskiOp {
    pub const ALL: [MinkowskiOp; 5] = [
        MinkowskiOp::Sum,
        MinkowskiOp::Difference,
        MinkowskiOp::Product,
        MinkowskiOp::LeftDivision,
        MinkowskiOp::RightDivision,
    ];

    pub fn token(self) -> &'static str {
        match self {
            MinkowskiOp::Sum => "(+)",
            MinkowskiOp::Difference => "(-)",
            MinkowskiOp::Product => "(*)",
            MinkowskiOp::LeftDivision => "(\\)",
            MinkowskiOp::RightDivision => "(/)",
        }
    }

    pub(crate) fn from_char(c: char) -> Option<MinkowskiOp> {
        Some(match c {
            '+' => MinkowskiOp::Sum,
            '-' => MinkowskiOp::Difference,
            '*' => MinkowskiOp::Product,
            '\\' => MinkowskiOp::LeftDivision,
            '/' => MinkowskiOp::RightDivision,
            _ => return None,
        })
    }

    /// Stable name used in scene files.
    pub fn name(self) -> &'static str {
        match self {
            MinkowskiOp::Sum => "sum",
            MinkowskiOp::Difference => "difference",
            MinkowskiOp::Product => "product",
            MinkowskiOp::LeftDivision => "left-division",
            MinkowskiOp::RightDivision => "right-division",
        }
    }

    pub fn from_name(name: &str) -> Option<MinkowskiOp> {
        MinkowskiOp::ALL.into_iter().find(|op| op.name() == name)
    }
}

/// `name in lo..hi`, bounds kept as written.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamDecl {
    pub name: String,
    pub lo: Expr,
    pub hi: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Projection {
    Dop,
    Perspective { d: Expr },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    /// `const name = value [in lo..hi]`; the optional range bounds the
    /// interactive adjustment of the constant.
    Const {
        name: String,
        value: Expr,
        range: Option<(Expr, Expr)>,
    },
    /// `set name(params) = (x, y, z, w)`, or `set name = (x, y, z, w)` for a
    /// single point.
    Set {
        name: String,
        params: Vec<ParamDecl>,
        coords: [Expr; 4],
    },
    /// `set name = lhs op rhs`
    Derived {
        name: String,
        op: MinkowskiOp,
        lhs: String,
        rhs: String,
    },
    /// `project dop` or `project perspective d = expr`
    Project(Projection),
    /// `range name(param in lo..hi, ...)` replaces sampling intervals of an
    /// existing set.
    Range { set: String, params: Vec<ParamDecl> },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SceneProgram {
    pub stmts: Vec<Stmt>,
}

impl SceneProgram {
    /// Names of all sets in definition order.
    pub fn set_names(&self) -> impl Iterator<Item = &str> {
        self.stmts.iter().filter_map(|s| match s {
            Stmt::Set { name, .. } | Stmt::Derived { name, .. } => Some(name.as_str()),
            _ => None,
        })
    }
}
