use std::fmt;

use crate::labeling::MapFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    /// `e^(−t)`
    ExpNeg,
    /// `sqrt(max(t, 0))`
    Sqrt,
    Abs,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::ExpNeg => "expneg",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Abs => "abs",
        }
    }

    fn apply(self, t: f64) -> f64 {
        match self {
            UnaryOp::Neg => -t,
            UnaryOp::Sin => t.sin(),
            UnaryOp::Cos => t.cos(),
            UnaryOp::ExpNeg => (-t).exp(),
            UnaryOp::Sqrt => t.max(0.0).sqrt(),
            UnaryOp::Abs => t.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Min,
    Max,
}

impl BinaryOp {
    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinaryOp::Add => a + b,
            BinaryOp::Sub => a - b,
            BinaryOp::Mul => a * b,
            BinaryOp::Min => a.min(b),
            BinaryOp::Max => a.max(b),
        }
    }
}

/// Expression tree over the variables `x1..xn`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// 1-based variable index.
    Var(usize),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => x[i - 1],
            Expr::Unary(op, e) => op.apply(e.eval(x)),
            Expr::Binary(op, a, b) => op.apply(a.eval(x), b.eval(x)),
            Expr::Pow(e, k) => e.eval(x).powi(*k as i32),
        }
    }

    /// Largest variable index referenced, 0 if none.
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => *i,
            Expr::Unary(_, e) | Expr::Pow(e, _) => e.max_var(),
            Expr::Binary(_, a, b) => a.max_var().max(b.max_var()),
        }
    }

    fn is_atom(&self) -> bool {
        match self {
            Expr::Const(c) => *c >= 0.0,
            Expr::Var(_) => true,
            Expr::Unary(op, _) => *op != UnaryOp::Neg,
            Expr::Binary(op, _, _) => matches!(op, BinaryOp::Min | BinaryOp::Max),
            Expr::Pow(..) => false,
        }
    }
}

struct Operand<'a>(&'a Expr);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atom() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "-{}", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Unary(UnaryOp::Neg, e) => write!(f, "-{}", Operand(e)),
            Expr::Unary(op, e) => write!(f, "{}({e})", op.name()),
            Expr::Binary(BinaryOp::Min, a, b) => write!(f, "min2({a}, {b})"),
            Expr::Binary(BinaryOp::Max, a, b) => write!(f, "max2({a}, {b})"),
            Expr::Binary(op, a, b) => {
                let sym = match op {
                    BinaryOp::Add => "+",
                    BinaryOp::Sub => "-",
                    _ => "*",
                };
                write!(f, "{} {sym} {}", Operand(a), Operand(b))
            }
            Expr::Pow(e, k) => write!(f, "{}^{k}", Operand(e)),
        }
    }
}

/// A map `[0,1]^n → [0,1]^n` given componentwise by expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    n: usize,
    components: Vec<Expr>,
}

impl MapSpec {
    pub(crate) fn new(n: usize, components: Vec<Expr>) -> Self {
        debug_assert_eq!(n, components.len());
        Self { n, components }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    /// Componentwise evaluation, clamped into `[0,1]`.
    pub fn eval(&self, p: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|e| e.eval(p).clamp(0.0, 1.0))
            .collect()
    }

    pub fn into_map_fn(self, name: impl Into<String>) -> MapFn {
        let n = self.n;
        MapFn::new(name, n, move |p| self.eval(p))
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
