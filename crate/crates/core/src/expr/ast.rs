use std::fmt;

/// Unary functions available in the field definition DSL.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
    Tanh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "tanh" => Func::Tanh,
            _ => return None,
        })
    }
}

/// AST of a scalar field on the tangent bundle.
///
/// Coordinate symbols are `x0..x{n-1}`, velocity symbols `v0..v{n-1}`.
/// Exponents of `^` are constant reals, fixed at parse time.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Base coordinate `x{i}`.
    Coord(usize),
    /// Fiber (velocity) coordinate `v{i}`.
    Vel(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Base raised to a constant exponent.
    Pow(Box<Expr>, f64),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Canonical fully parenthesized rendering. Parsing the result yields
    /// a structurally identical AST.
    pub fn pretty(&self) -> String {
        self.to_string()
    }

    /// True if any `v*` symbol occurs in the expression.
    pub fn mentions_velocity(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Coord(_) => false,
            Expr::Vel(_) => true,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.mentions_velocity(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.mentions_velocity() || b.mentions_velocity()
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Coord(i) => write!(f, "x{i}"),
            Expr::Vel(i) => write!(f, "v{i}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, c) => write!(f, "({a} ^ {c})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
