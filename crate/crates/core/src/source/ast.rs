//! Syntax tree for the analysed Python subset.
//!
//! The node shapes follow CPython's `ast` module closely, because both metric
//! visitors depend on that shape: chained comparisons are one node, adjacent
//! string literals are folded into one constant, `elif` is a nested `If`, and
//! negative literals stay as unary minus applied to a constant.

use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq)]
pub struct Module {
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub line: u32,
    pub end_line: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    FunctionDef(Box<FunctionDef>),
    ClassDef(Box<ClassDef>),
    Return(Option<Expr>),
    Delete(Vec<Expr>),
    Assign {
        targets: Vec<Expr>,
        value: Expr,
    },
    AugAssign {
        target: Expr,
        op: BinOpKind,
        value: Expr,
    },
    AnnAssign {
        target: Expr,
        annotation: Expr,
        value: Option<Expr>,
    },
    For {
        is_async: bool,
        target: Expr,
        iter: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
    },
    While {
        test: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
    },
    If {
        test: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
    },
    With {
        is_async: bool,
        items: Vec<WithItem>,
        body: Vec<Stmt>,
    },
    Match {
        subject: Expr,
        cases: Vec<MatchCase>,
    },
    Raise {
        exc: Option<Expr>,
        cause: Option<Expr>,
    },
    Try {
        body: Vec<Stmt>,
        handlers: Vec<ExceptHandler>,
        orelse: Vec<Stmt>,
        finalbody: Vec<Stmt>,
    },
    Assert {
        test: Expr,
        msg: Option<Expr>,
    },
    Import(Vec<Alias>),
    ImportFrom {
        module: Option<String>,
        names: Vec<Alias>,
        level: u32,
    },
    Global(Vec<String>),
    Nonlocal(Vec<String>),
    Expr(Expr),
    Pass,
    Break,
    Continue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDef {
    pub name: String,
    pub is_async: bool,
    pub args: Arguments,
    pub body: Vec<Stmt>,
    pub decorators: Vec<Expr>,
    pub returns: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDef {
    pub name: String,
    pub bases: Vec<Expr>,
    pub keywords: Vec<Keyword>,
    pub body: Vec<Stmt>,
    pub decorators: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Arguments {
    pub posonlyargs: Vec<Arg>,
    pub args: Vec<Arg>,
    pub vararg: Option<Arg>,
    pub kwonlyargs: Vec<Arg>,
    /// One entry per keyword-only argument; `None` when it has no default.
    pub kw_defaults: Vec<Option<Expr>>,
    pub kwarg: Option<Arg>,
    /// Defaults for the trailing positional arguments.
    pub defaults: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arg {
    pub name: String,
    pub annotation: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Keyword {
    /// `None` for `**mapping` arguments.
    pub arg: Option<String>,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alias {
    pub name: String,
    pub asname: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WithItem {
    pub context_expr: Expr,
    pub optional_vars: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExceptHandler {
    pub type_: Option<Expr>,
    pub name: Option<String>,
    pub body: Vec<Stmt>,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchCase {
    pub pattern: Pattern,
    pub guard: Option<Expr>,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    MatchValue(Expr),
    MatchSingleton(Constant),
    MatchSequence(Vec<Pattern>),
    MatchMapping {
        keys: Vec<Expr>,
        patterns: Vec<Pattern>,
        rest: Option<String>,
    },
    MatchClass {
        cls: Expr,
        patterns: Vec<Pattern>,
        kwd_attrs: Vec<String>,
        kwd_patterns: Vec<Pattern>,
    },
    MatchStar(Option<String>),
    MatchAs {
        pattern: Option<Box<Pattern>>,
        name: Option<String>,
    },
    MatchOr(Vec<Pattern>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comprehension {
    pub target: Expr,
    pub iter: Expr,
    pub ifs: Vec<Expr>,
    pub is_async: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    BoolOp {
        op: BoolOpKind,
        values: Vec<Expr>,
    },
    NamedExpr {
        target: Box<Expr>,
        value: Box<Expr>,
    },
    BinOp {
        left: Box<Expr>,
        op: BinOpKind,
        right: Box<Expr>,
    },
    UnaryOp {
        op: UnaryOpKind,
        operand: Box<Expr>,
    },
    Lambda {
        args: Box<Arguments>,
        body: Box<Expr>,
    },
    IfExp {
        test: Box<Expr>,
        body: Box<Expr>,
        orelse: Box<Expr>,
    },
    Dict {
        /// `None` marks a `**mapping` entry.
        keys: Vec<Option<Expr>>,
        values: Vec<Expr>,
    },
    Set(Vec<Expr>),
    ListComp {
        elt: Box<Expr>,
        generators: Vec<Comprehension>,
    },
    SetComp {
        elt: Box<Expr>,
        generators: Vec<Comprehension>,
    },
    DictComp {
        key: Box<Expr>,
        value: Box<Expr>,
        generators: Vec<Comprehension>,
    },
    GeneratorExp {
        elt: Box<Expr>,
        generators: Vec<Comprehension>,
    },
    Await(Box<Expr>),
    Yield(Option<Box<Expr>>),
    YieldFrom(Box<Expr>),
    Compare {
        left: Box<Expr>,
        ops: Vec<CmpOpKind>,
        comparators: Vec<Expr>,
    },
    Call {
        func: Box<Expr>,
        args: Vec<Expr>,
        keywords: Vec<Keyword>,
    },
    FormattedValue {
        value: Box<Expr>,
        conversion: Option<char>,
        format_spec: Option<Box<Expr>>,
    },
    JoinedStr(Vec<Expr>),
    Constant(Constant),
    Attribute {
        value: Box<Expr>,
        attr: String,
    },
    Subscript {
        value: Box<Expr>,
        slice: Box<Expr>,
    },
    Starred(Box<Expr>),
    Name(String),
    List(Vec<Expr>),
    Tuple(Vec<Expr>),
    Slice {
        lower: Option<Box<Expr>>,
        upper: Option<Box<Expr>>,
        step: Option<Box<Expr>>,
    },
}

/// Literal values, decoded the way the interpreter would see them.
#[derive(Debug, Clone, PartialEq)]
pub enum Constant {
    None,
    Bool(bool),
    Int(BigInt),
    Float(f64),
    /// Imaginary literal such as `2j`; the real part is always zero.
    Imaginary(f64),
    Str(String),
    Bytes(Vec<u8>),
    Ellipsis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolOpKind {
    And,
    Or,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOpKind {
    Add,
    Sub,
    Mult,
    MatMult,
    Div,
    Mod,
    Pow,
    LShift,
    RShift,
    BitOr,
    BitXor,
    BitAnd,
    FloorDiv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOpKind {
    Invert,
    Not,
    UAdd,
    USub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOpKind {
    Eq,
    NotEq,
    Lt,
    LtE,
    Gt,
    GtE,
    Is,
    IsNot,
    In,
    NotIn,
}

impl BoolOpKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::And => "And",
            Self::Or => "Or",
        }
    }
}

impl BinOpKind {
    /// Node class name as CPython spells it.
    pub fn name(self) -> &'static str {
        match self {
            Self::Add => "Add",
            Self::Sub => "Sub",
            Self::Mult => "Mult",
            Self::MatMult => "MatMult",
            Self::Div => "Div",
            Self::Mod => "Mod",
            Self::Pow => "Pow",
            Self::LShift => "LShift",
            Self::RShift => "RShift",
            Self::BitOr => "BitOr",
            Self::BitXor => "BitXor",
            Self::BitAnd => "BitAnd",
            Self::FloorDiv => "FloorDiv",
        }
    }

    pub(crate) fn from_symbol(sym: &str) -> Option<Self> {
        Some(match sym {
            "+" => Self::Add,
            "-" => Self::Sub,
            "*" => Self::Mult,
            "@" => Self::MatMult,
            "/" => Self::Div,
            "%" => Self::Mod,
            "**" => Self::Pow,
            "<<" => Self::LShift,
            ">>" => Self::RShift,
            "|" => Self::BitOr,
            "^" => Self::BitXor,
            "&" => Self::BitAnd,
            "//" => Self::FloorDiv,
            _ => return None,
        })
    }
}

impl UnaryOpKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Invert => "Invert",
            Self::Not => "Not",
            Self::UAdd => "UAdd",
            Self::USub => "USub",
        }
    }
}

impl CmpOpKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Eq => "Eq",
            Self::NotEq => "NotEq",
            Self::Lt => "Lt",
            Self::LtE => "LtE",
            Self::Gt => "Gt",
            Self::GtE => "GtE",
            Self::Is => "Is",
            Self::IsNot => "IsNot",
            Self::In => "In",
            Self::NotIn => "NotIn",
        }
    }
}

impl Expr {
    pub(crate) fn new(kind: ExprKind, line: u32) -> Self {
        Self { kind, line }
    }
}

/// Calls `f` on every direct child expression of `expr`, in field order.
pub fn for_each_child_expr<'a>(expr: &'a Expr, f: &mut dyn FnMut(&'a Expr)) {
    use ExprKind::*;
    match &expr.kind {
        BoolOp { values, .. } => values.iter().for_each(&mut *f),
        NamedExpr { target, value } => {
            f(target);
            f(value);
        }
        BinOp { left, right, .. } => {
            f(left);
            f(right);
        }
        UnaryOp { operand, .. } => f(operand),
        Lambda { args, body } => {
            for_each_arguments_expr(args, f);
            f(body);
        }
        IfExp { test, body, orelse } => {
            f(test);
            f(body);
            f(orelse);
        }
        Dict { keys, values } => {
            keys.iter().flatten().for_each(&mut *f);
            values.iter().for_each(&mut *f);
        }
        Set(elts) | List(elts) | Tuple(elts) | JoinedStr(elts) => elts.iter().for_each(&mut *f),
        ListComp { elt, generators } | SetComp { elt, generators } | GeneratorExp { elt, generators } => {
            f(elt);
            generators.iter().for_each(|g| for_each_comprehension_expr(g, f));
        }
        DictComp { key, value, generators } => {
            f(key);
            f(value);
            generators.iter().for_each(|g| for_each_comprehension_expr(g, f));
        }
        Await(e) | YieldFrom(e) | Starred(e) => f(e),
        Yield(e) => {
            if let Some(e) = e {
                f(e)
            }
        }
        Compare { left, comparators, .. } => {
            f(left);
            comparators.iter().for_each(&mut *f);
        }
        Call { func, args, keywords } => {
            f(func);
            args.iter().for_each(&mut *f);
            keywords.iter().for_each(|k| f(&k.value));
        }
        FormattedValue { value, format_spec, .. } => {
            f(value);
            if let Some(spec) = format_spec {
                f(spec);
            }
        }
        Constant(_) | Name(_) => {}
        Attribute { value, .. } => f(value),
        Subscript { value, slice } => {
            f(value);
            f(slice);
        }
        Slice { lower, upper, step } => {
            for e in [lower, upper, step].into_iter().flatten() {
                f(e);
            }
        }
    }
}

fn for_each_comprehension_expr<'a>(c: &'a Comprehension, f: &mut dyn FnMut(&'a Expr)) {
    f(&c.target);
    f(&c.iter);
    c.ifs.iter().for_each(&mut *f);
}

/// Annotations and defaults of an argument list.
pub fn for_each_arguments_expr<'a>(args: &'a Arguments, f: &mut dyn FnMut(&'a Expr)) {
    let annotated = args
        .posonlyargs
        .iter()
        .chain(&args.args)
        .chain(&args.vararg)
        .chain(&args.kwonlyargs)
        .chain(&args.kwarg);
    for arg in annotated {
        if let Some(a) = &arg.annotation {
            f(a);
        }
    }
    args.kw_defaults.iter().flatten().for_each(&mut *f);
    args.defaults.iter().for_each(&mut *f);
}

/// Expressions held directly by a pattern (value patterns, mapping keys, class names).
pub fn for_each_pattern_expr<'a>(pattern: &'a Pattern, f: &mut dyn FnMut(&'a Expr)) {
    match pattern {
        Pattern::MatchValue(e) => f(e),
        Pattern::MatchSingleton(_) | Pattern::MatchStar(_) => {}
        Pattern::MatchSequence(ps) | Pattern::MatchOr(ps) => {
            ps.iter().for_each(|p| for_each_pattern_expr(p, f))
        }
        Pattern::MatchMapping { keys, patterns, .. } => {
            keys.iter().for_each(&mut *f);
            patterns.iter().for_each(|p| for_each_pattern_expr(p, f));
        }
        Pattern::MatchClass {
            cls,
            patterns,
            kwd_patterns,
            ..
        } => {
            f(cls);
            patterns
                .iter()
                .chain(kwd_patterns)
                .for_each(|p| for_each_pattern_expr(p, f));
        }
        Pattern::MatchAs { pattern, .. } => {
            if let Some(p) = pattern {
                for_each_pattern_expr(p, f)
            }
        }
    }
}

/// A direct child of a statement.
#[derive(Debug, Clone, Copy)]
pub enum Child<'a> {
    Stmt(&'a Stmt),
    Expr(&'a Expr),
}

/// Calls `f` on every direct child of `stmt`, including decorators, bases,
/// annotations and the expressions inside match patterns.
pub fn for_each_stmt_child<'a>(stmt: &'a Stmt, f: &mut dyn FnMut(Child<'a>)) {
    use StmtKind::*;
    let exprs = |es: &'a [self::Expr], f: &mut dyn FnMut(Child<'a>)| {
        es.iter().for_each(|e| f(Child::Expr(e)))
    };
    let stmts = |ss: &'a [self::Stmt], f: &mut dyn FnMut(Child<'a>)| ss.iter().for_each(|s| f(Child::Stmt(s)));
    match &stmt.kind {
        FunctionDef(def) => {
            for_each_arguments_expr(&def.args, &mut |e| f(Child::Expr(e)));
            stmts(&def.body, f);
            exprs(&def.decorators, f);
            if let Some(r) = &def.returns {
                f(Child::Expr(r));
            }
        }
        ClassDef(def) => {
            exprs(&def.bases, f);
            def.keywords.iter().for_each(|k| f(Child::Expr(&k.value)));
            stmts(&def.body, f);
            exprs(&def.decorators, f);
        }
        Return(value) => {
            if let Some(v) = value {
                f(Child::Expr(v));
            }
        }
        Delete(targets) => exprs(targets, f),
        Assign { targets, value } => {
            exprs(targets, f);
            f(Child::Expr(value));
        }
        AugAssign { target, value, .. } => {
            f(Child::Expr(target));
            f(Child::Expr(value));
        }
        AnnAssign {
            target,
            annotation,
            value,
        } => {
            f(Child::Expr(target));
            f(Child::Expr(annotation));
            if let Some(v) = value {
                f(Child::Expr(v));
            }
        }
        For {
            target,
            iter,
            body,
            orelse,
            ..
        } => {
            f(Child::Expr(target));
            f(Child::Expr(iter));
            stmts(body, f);
            stmts(orelse, f);
        }
        While { test, body, orelse } | If { test, body, orelse } => {
            f(Child::Expr(test));
            stmts(body, f);
            stmts(orelse, f);
        }
        With { items, body, .. } => {
            for item in items {
                f(Child::Expr(&item.context_expr));
                if let Some(v) = &item.optional_vars {
                    f(Child::Expr(v));
                }
            }
            stmts(body, f);
        }
        Match { subject, cases } => {
            f(Child::Expr(subject));
            for case in cases {
                for_each_pattern_expr(&case.pattern, &mut |e| f(Child::Expr(e)));
                if let Some(g) = &case.guard {
                    f(Child::Expr(g));
                }
                stmts(&case.body, f);
            }
        }
        Raise { exc, cause } => {
            for e in [exc, cause].into_iter().flatten() {
                f(Child::Expr(e));
            }
        }
        Try {
            body,
            handlers,
            orelse,
            finalbody,
        } => {
            stmts(body, f);
            for h in handlers {
                if let Some(t) = &h.type_ {
                    f(Child::Expr(t));
                }
                stmts(&h.body, f);
            }
            stmts(orelse, f);
            stmts(finalbody, f);
        }
        Assert { test, msg } => {
            f(Child::Expr(test));
            if let Some(m) = msg {
                f(Child::Expr(m));
            }
        }
        Expr(e) => f(Child::Expr(e)),
        Import(_) | ImportFrom { .. } | Global(_) | Nonlocal(_) | Pass | Break | Continue => {}
    }
}
