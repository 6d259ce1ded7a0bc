//! Operator/operand classification for Halstead measures.
//!
//! Only arithmetic, bitwise, boolean, comparison, unary and augmented
//! assignment operators are counted, together with their direct operands.
//! Distinct operators are distinct operator node types. An operand is
//! identified by the innermost enclosing function plus its value: a name,
//! an attribute name, or a constant compared with Python's equality (so
//! `1`, `1.0` and `True` coincide, as do the name `x` and the string `'x'`).
//! Any other operand expression is distinct from every other one.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};

use super::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OperatorOperandCounts {
    /// Distinct operators.
    pub eta1: usize,
    /// Distinct operands.
    pub eta2: usize,
    /// Total operators.
    pub n1: usize,
    /// Total operands.
    pub n2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Text(String),
    Bytes(Vec<u8>),
    Int(BigInt),
    /// Bit pattern of a finite non-integral or infinite float.
    Float(u64),
    /// Bit pattern of the (nonzero) imaginary part.
    Imaginary(u64),
    None,
    Ellipsis,
    Node(usize),
}

fn float_key(v: f64) -> Key {
    if v.is_finite() && v.fract() == 0.0 {
        Key::Int(BigInt::from_f64(v).expect("finite float"))
    } else {
        Key::Float(v.to_bits())
    }
}

fn operand_key(expr: &Expr) -> Key {
    match &expr.kind {
        ExprKind::Name(id) => Key::Text(id.clone()),
        ExprKind::Attribute { attr, .. } => Key::Text(attr.clone()),
        ExprKind::Constant(c) => match c {
            Constant::None => Key::None,
            Constant::Ellipsis => Key::Ellipsis,
            Constant::Bool(b) => Key::Int(BigInt::from(u8::from(*b))),
            Constant::Int(i) => Key::Int(i.clone()),
            Constant::Float(f) => float_key(*f),
            Constant::Imaginary(im) if *im == 0.0 => Key::Int(BigInt::from(0)),
            Constant::Imaginary(im) => Key::Imaginary(im.to_bits()),
            Constant::Str(s) => Key::Text(s.clone()),
            Constant::Bytes(b) => Key::Bytes(b.clone()),
        },
        _ => Key::Node(expr as *const Expr as usize),
    }
}

#[derive(Default)]
struct Counter<'a> {
    operators: HashSet<&'static str>,
    operands: HashSet<(Option<&'a str>, Key)>,
    n1: usize,
    n2: usize,
}

impl<'a> Counter<'a> {
    fn record(&mut self, ctx: Option<&'a str>, ops: &[&'static str], operands: &[&Expr]) {
        self.n1 += ops.len();
        self.n2 += operands.len();
        self.operators.extend(ops.iter().copied());
        for e in operands {
            self.operands.insert((ctx, operand_key(e)));
        }
    }

    fn stmt(&mut self, stmt: &'a Stmt, ctx: Option<&'a str>) {
        match &stmt.kind {
            StmtKind::FunctionDef(def) => {
                for child in &def.body {
                    self.stmt(child, Some(&def.name));
                }
                return;
            }
            StmtKind::AugAssign { target, op, value } => {
                self.record(ctx, &[op.name()], &[target, value]);
            }
            _ => {}
        }
        for_each_stmt_child(stmt, &mut |child| match child {
            Child::Stmt(s) => self.stmt(s, ctx),
            Child::Expr(e) => self.expr(e, ctx),
        });
    }

    fn expr(&mut self, expr: &'a Expr, ctx: Option<&'a str>) {
        match &expr.kind {
            ExprKind::BinOp { left, op, right } => self.record(ctx, &[op.name()], &[left, right]),
            ExprKind::UnaryOp { op, operand } => self.record(ctx, &[op.name()], &[operand]),
            ExprKind::BoolOp { op, values } => {
                let operands: Vec<&Expr> = values.iter().collect();
                self.record(ctx, &[op.name()], &operands);
            }
            ExprKind::Compare {
                left,
                ops,
                comparators,
            } => {
                let names: Vec<&'static str> = ops.iter().map(|o| o.name()).collect();
                let mut operands: Vec<&Expr> = comparators.iter().collect();
                operands.push(left);
                self.record(ctx, &names, &operands);
            }
            _ => {}
        }
        for_each_child_expr(expr, &mut |e| self.expr(e, ctx));
    }
}

pub fn classify(module: &Module) -> OperatorOperandCounts {
    let mut c = Counter::default();
    for stmt in &module.body {
        c.stmt(stmt, None);
    }
    OperatorOperandCounts {
        eta1: c.operators.len(),
        eta2: c.operands.len(),
        n1: c.n1,
        n2: c.n2,
    }
}
