//! Recursive-descent parser for Python 3 source.
//!
//! Covers the statement and expression grammar of Python 3.10 including
//! decorators, comprehensions, f-strings, `async` forms and structural
//! pattern matching. Python 2 constructs (print statements, backticks,
//! `except E, e`) are rejected with a [`ParseError`].

use std::fmt;

use super::ast::*;
use super::lexer::{tokenize_source, LexError, RawKind, RawToken};
use super::literal::{self, FPiece};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

impl From<LexError> for ParseError {
    fn from(e: LexError) -> Self {
        ParseError {
            line: e.line,
            message: e.message,
        }
    }
}

type PResult<T> = Result<T, ParseError>;

const KEYWORDS: [&str; 35] = [
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue",
    "def", "del", "elif", "else", "except", "finally", "for", "from", "global", "if", "import",
    "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try", "while",
    "with", "yield",
];

const AUGMENTED: [&str; 13] = [
    "+=", "-=", "*=", "@=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", "**=", "//=",
];

pub fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

#[derive(Debug, Clone)]
struct Tok {
    kind: RawKind,
    text: String,
    line: u32,
    end_line: u32,
}

/// Parses a whole module.
pub fn parse_module(src: &str) -> PResult<Module> {
    let raw = tokenize_source(src)?;
    let mut parser = Parser::new(src, &raw, 0);
    parser.module()
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    last_line: u32,
}

impl Parser {
    fn new(src: &str, raw: &[RawToken], line_offset: u32) -> Self {
        let toks = raw
            .iter()
            .filter(|t| !matches!(t.kind, RawKind::Comment | RawKind::Nl))
            .map(|t| Tok {
                kind: t.kind,
                text: t.text(src).to_string(),
                line: t.line + line_offset,
                end_line: t.end_line + line_offset,
            })
            .collect();
        Parser {
            toks,
            pos: 0,
            last_line: 1 + line_offset,
        }
    }

    // ---- token helpers -------------------------------------------------

    fn peek(&self) -> &Tok {
        self.peek_n(0)
    }

    fn peek_n(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i]
    }

    fn line(&self) -> u32 {
        self.peek().line
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos.min(self.toks.len() - 1)].clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        if !matches!(
            t.kind,
            RawKind::Newline | RawKind::Indent | RawKind::Dedent | RawKind::EndMarker
        ) {
            self.last_line = t.end_line;
        }
        t
    }

    fn at_op(&self, op: &str) -> bool {
        let t = self.peek();
        t.kind == RawKind::Op && t.text == op
    }

    fn at_op_n(&self, n: usize, op: &str) -> bool {
        let t = self.peek_n(n);
        t.kind == RawKind::Op && t.text == op
    }

    fn at_kw(&self, kw: &str) -> bool {
        let t = self.peek();
        t.kind == RawKind::Name && t.text == kw
    }

    fn at_kw_n(&self, n: usize, kw: &str) -> bool {
        let t = self.peek_n(n);
        t.kind == RawKind::Name && t.text == kw
    }

    fn at_kind(&self, kind: RawKind) -> bool {
        self.peek().kind == kind
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.at_op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            line: self.line(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        let t = self.peek();
        let found = match t.kind {
            RawKind::Newline => "newline".to_string(),
            RawKind::Indent => "indent".to_string(),
            RawKind::Dedent => "dedent".to_string(),
            RawKind::EndMarker => "end of input".to_string(),
            _ => format!("{:?}", t.text),
        };
        self.error(format!("expected {wanted}, found {found}"))
    }

    fn expect_op(&mut self, op: &str) -> PResult<()> {
        if self.eat_op(op) {
            Ok(())
        } else {
            self.unexpected(&format!("'{op}'"))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.unexpected(&format!("'{kw}'"))
        }
    }

    fn at_identifier(&self) -> bool {
        let t = self.peek();
        t.kind == RawKind::Name && !is_keyword(&t.text)
    }

    fn identifier(&mut self) -> PResult<String> {
        if self.at_identifier() {
            Ok(self.bump().text)
        } else {
            self.unexpected("identifier")
        }
    }

    fn expect_newline(&mut self) -> PResult<()> {
        match self.peek().kind {
            RawKind::Newline => {
                self.bump();
                Ok(())
            }
            RawKind::EndMarker => Ok(()),
            _ => self.unexpected("newline"),
        }
    }

    // ---- statements ----------------------------------------------------

    fn module(&mut self) -> PResult<Module> {
        let mut body = Vec::new();
        loop {
            match self.peek().kind {
                RawKind::EndMarker => break,
                RawKind::Newline => {
                    self.bump();
                }
                RawKind::Indent => return self.error("unexpected indent"),
                _ => self.statement(&mut body)?,
            }
        }
        Ok(Module { body })
    }

    fn statement(&mut self, out: &mut Vec<Stmt>) -> PResult<()> {
        let mut line = self.line();
        let kind = if self.at_op("@") {
            let (kind, def_line) = self.decorated()?;
            line = def_line;
            kind
        } else if self.at_kw("def") {
            self.funcdef(Vec::new(), false)?
        } else if self.at_kw("class") {
            self.classdef(Vec::new())?
        } else if self.at_kw("if") {
            self.bump();
            self.if_rest()?
        } else if self.at_kw("while") {
            self.while_stmt()?
        } else if self.at_kw("for") {
            self.for_stmt(false)?
        } else if self.at_kw("try") {
            self.try_stmt()?
        } else if self.at_kw("with") {
            self.with_stmt(false)?
        } else if self.at_kw("async") {
            self.bump();
            if self.at_kw("def") {
                self.funcdef(Vec::new(), true)?
            } else if self.at_kw("for") {
                self.for_stmt(true)?
            } else if self.at_kw("with") {
                self.with_stmt(true)?
            } else {
                return self.unexpected("'def', 'for' or 'with' after 'async'");
            }
        } else if self.at_kw("match") {
            match self.match_stmt()? {
                Some(kind) => kind,
                None => return self.simple_stmts(out),
            }
        } else {
            return self.simple_stmts(out);
        };
        out.push(Stmt {
            kind,
            line,
            end_line: self.last_line,
        });
        Ok(())
    }

    fn simple_stmts(&mut self, out: &mut Vec<Stmt>) -> PResult<()> {
        loop {
            let line = self.line();
            let kind = self.simple_stmt()?;
            out.push(Stmt {
                kind,
                line,
                end_line: self.last_line,
            });
            if self.eat_op(";") {
                if matches!(self.peek().kind, RawKind::Newline | RawKind::EndMarker) {
                    break;
                }
                continue;
            }
            break;
        }
        self.expect_newline()
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect_op(":")?;
        let mut body = Vec::new();
        if self.at_kind(RawKind::Newline) {
            self.bump();
            if !self.at_kind(RawKind::Indent) {
                return self.unexpected("an indented block");
            }
            self.bump();
            while !matches!(self.peek().kind, RawKind::Dedent | RawKind::EndMarker) {
                if self.at_kind(RawKind::Newline) {
                    self.bump();
                    continue;
                }
                self.statement(&mut body)?;
            }
            if self.at_kind(RawKind::Dedent) {
                self.bump();
            }
        } else {
            self.simple_stmts(&mut body)?;
        }
        Ok(body)
    }

    fn simple_stmt(&mut self) -> PResult<StmtKind> {
        let t = self.peek().clone();
        if t.kind == RawKind::Name {
            match t.text.as_str() {
                "pass" => {
                    self.bump();
                    return Ok(StmtKind::Pass);
                }
                "break" => {
                    self.bump();
                    return Ok(StmtKind::Break);
                }
                "continue" => {
                    self.bump();
                    return Ok(StmtKind::Continue);
                }
                "return" => {
                    self.bump();
                    let value = if self.at_stmt_end() {
                        None
                    } else {
                        Some(self.star_expressions()?)
                    };
                    return Ok(StmtKind::Return(value));
                }
                "raise" => {
                    self.bump();
                    let mut exc = None;
                    let mut cause = None;
                    if !self.at_stmt_end() {
                        exc = Some(self.expression()?);
                        if self.eat_kw("from") {
                            cause = Some(self.expression()?);
                        }
                    }
                    return Ok(StmtKind::Raise { exc, cause });
                }
                "global" | "nonlocal" => {
                    self.bump();
                    let mut names = vec![self.identifier()?];
                    while self.eat_op(",") {
                        names.push(self.identifier()?);
                    }
                    return Ok(if t.text == "global" {
                        StmtKind::Global(names)
                    } else {
                        StmtKind::Nonlocal(names)
                    });
                }
                "del" => {
                    self.bump();
                    let mut targets = vec![self.target_item()?];
                    while self.eat_op(",") {
                        if self.at_stmt_end() {
                            break;
                        }
                        targets.push(self.target_item()?);
                    }
                    return Ok(StmtKind::Delete(targets));
                }
                "assert" => {
                    self.bump();
                    let test = self.expression()?;
                    let msg = if self.eat_op(",") {
                        Some(self.expression()?)
                    } else {
                        None
                    };
                    return Ok(StmtKind::Assert { test, msg });
                }
                "import" => return self.import_name(),
                "from" => return self.import_from(),
                _ => {}
            }
        }
        self.expr_stmt()
    }

    fn at_stmt_end(&self) -> bool {
        matches!(self.peek().kind, RawKind::Newline | RawKind::EndMarker) || self.at_op(";")
    }

    fn expr_stmt(&mut self) -> PResult<StmtKind> {
        let first = if self.at_kw("yield") {
            self.yield_expr()?
        } else {
            self.star_expressions()?
        };
        if self.at_op(":") {
            self.bump();
            let annotation = self.expression()?;
            let value = if self.eat_op("=") {
                Some(self.assignment_value()?)
            } else {
                None
            };
            return Ok(StmtKind::AnnAssign {
                target: first,
                annotation,
                value,
            });
        }
        let t = self.peek();
        if t.kind == RawKind::Op && AUGMENTED.contains(&t.text.as_str()) {
            let sym = self.bump().text;
            let op = BinOpKind::from_symbol(&sym[..sym.len() - 1]).expect("augmented operator");
            let value = self.assignment_value()?;
            return Ok(StmtKind::AugAssign {
                target: first,
                op,
                value,
            });
        }
        if self.at_op("=") {
            let mut targets = vec![first];
            let mut value;
            loop {
                self.expect_op("=")?;
                value = self.assignment_value()?;
                if self.at_op("=") {
                    targets.push(value);
                } else {
                    break;
                }
            }
            return Ok(StmtKind::Assign { targets, value });
        }
        Ok(StmtKind::Expr(first))
    }

    fn assignment_value(&mut self) -> PResult<Expr> {
        if self.at_kw("yield") {
            self.yield_expr()
        } else {
            self.star_expressions()
        }
    }

    fn dotted_name(&mut self) -> PResult<String> {
        let mut name = self.identifier()?;
        while self.at_op(".") {
            self.bump();
            name.push('.');
            name.push_str(&self.identifier()?);
        }
        Ok(name)
    }

    fn import_name(&mut self) -> PResult<StmtKind> {
        self.expect_kw("import")?;
        let mut names = Vec::new();
        loop {
            let name = self.dotted_name()?;
            let asname = if self.eat_kw("as") {
                Some(self.identifier()?)
            } else {
                None
            };
            names.push(Alias { name, asname });
            if !self.eat_op(",") {
                break;
            }
        }
        Ok(StmtKind::Import(names))
    }

    fn import_from(&mut self) -> PResult<StmtKind> {
        self.expect_kw("from")?;
        let mut level = 0;
        loop {
            if self.eat_op(".") {
                level += 1;
            } else if self.eat_op("...") {
                level += 3;
            } else {
                break;
            }
        }
        let module = if self.at_kw("import") {
            if level == 0 {
                return self.unexpected("module name");
            }
            None
        } else {
            Some(self.dotted_name()?)
        };
        self.expect_kw("import")?;
        let mut names = Vec::new();
        if self.eat_op("*") {
            names.push(Alias {
                name: "*".into(),
                asname: None,
            });
            return Ok(StmtKind::ImportFrom {
                module,
                names,
                level,
            });
        }
        let paren = self.eat_op("(");
        loop {
            let name = self.identifier()?;
            let asname = if self.eat_kw("as") {
                Some(self.identifier()?)
            } else {
                None
            };
            names.push(Alias { name, asname });
            if !self.eat_op(",") {
                break;
            }
            if paren && self.at_op(")") {
                break;
            }
        }
        if paren {
            self.expect_op(")")?;
        }
        Ok(StmtKind::ImportFrom {
            module,
            names,
            level,
        })
    }

    /// Returns the definition and the line of its `def`/`class` keyword.
    fn decorated(&mut self) -> PResult<(StmtKind, u32)> {
        let mut decorators = Vec::new();
        while self.eat_op("@") {
            decorators.push(self.named_expression()?);
            self.expect_newline()?;
        }
        let line = self.line();
        let kind = if self.at_kw("def") {
            self.funcdef(decorators, false)?
        } else if self.at_kw("async") && self.at_kw_n(1, "def") {
            self.bump();
            self.funcdef(decorators, true)?
        } else if self.at_kw("class") {
            self.classdef(decorators)?
        } else {
            return self.unexpected("'def' or 'class' after decorator");
        };
        Ok((kind, line))
    }

    fn funcdef(&mut self, decorators: Vec<Expr>, is_async: bool) -> PResult<StmtKind> {
        self.expect_kw("def")?;
        let name = self.identifier()?;
        self.expect_op("(")?;
        let args = self.parameters(")", true)?;
        self.expect_op(")")?;
        let returns = if self.eat_op("->") {
            Some(self.expression()?)
        } else {
            None
        };
        let body = self.block()?;
        Ok(StmtKind::FunctionDef(Box::new(FunctionDef {
            name,
            is_async,
            args,
            body,
            decorators,
            returns,
        })))
    }

    /// Parameter list up to (not including) `close`.
    fn parameters(&mut self, close: &str, annotations: bool) -> PResult<Arguments> {
        let mut args = Arguments::default();
        let mut star_seen = false;
        while !self.at_op(close) {
            if self.eat_op("/") {
                if star_seen || !args.posonlyargs.is_empty() {
                    return self.error("invalid '/' in parameter list");
                }
                args.posonlyargs = std::mem::take(&mut args.args);
            } else if self.eat_op("**") {
                args.kwarg = Some(self.param(annotations)?);
            } else if self.eat_op("*") {
                if star_seen {
                    return self.error("duplicate '*' in parameter list");
                }
                star_seen = true;
                if !(self.at_op(",") || self.at_op(close)) {
                    args.vararg = Some(self.param(annotations)?);
                }
            } else {
                let param = self.param(annotations)?;
                let default = if self.eat_op("=") {
                    Some(self.expression()?)
                } else {
                    None
                };
                if star_seen {
                    args.kwonlyargs.push(param);
                    args.kw_defaults.push(default);
                } else {
                    if default.is_none() && !args.defaults.is_empty() {
                        return self.error("non-default argument follows default argument");
                    }
                    args.args.push(param);
                    if let Some(d) = default {
                        args.defaults.push(d);
                    }
                }
            }
            if !self.eat_op(",") {
                break;
            }
        }
        Ok(args)
    }

    fn param(&mut self, annotations: bool) -> PResult<Arg> {
        let name = self.identifier()?;
        let annotation = if annotations && self.eat_op(":") {
            Some(self.expression()?)
        } else {
            None
        };
        Ok(Arg { name, annotation })
    }

    fn classdef(&mut self, decorators: Vec<Expr>) -> PResult<StmtKind> {
        self.expect_kw("class")?;
        let name = self.identifier()?;
        let (bases, keywords) = if self.eat_op("(") {
            let (args, keywords) = self.call_arguments()?;
            (args, keywords)
        } else {
            (Vec::new(), Vec::new())
        };
        let body = self.block()?;
        Ok(StmtKind::ClassDef(Box::new(ClassDef {
            name,
            bases,
            keywords,
            body,
            decorators,
        })))
    }

    /// Parses after an `if` or `elif` keyword.
    fn if_rest(&mut self) -> PResult<StmtKind> {
        let test = self.named_expression()?;
        let body = self.block()?;
        let orelse = if self.at_kw("elif") {
            let line = self.line();
            self.bump();
            let kind = self.if_rest()?;
            vec![Stmt {
                kind,
                line,
                end_line: self.last_line,
            }]
        } else if self.eat_kw("else") {
            self.block()?
        } else {
            Vec::new()
        };
        Ok(StmtKind::If { test, body, orelse })
    }

    fn while_stmt(&mut self) -> PResult<StmtKind> {
        self.expect_kw("while")?;
        let test = self.named_expression()?;
        let body = self.block()?;
        let orelse = if self.eat_kw("else") {
            self.block()?
        } else {
            Vec::new()
        };
        Ok(StmtKind::While { test, body, orelse })
    }

    fn for_stmt(&mut self, is_async: bool) -> PResult<StmtKind> {
        self.expect_kw("for")?;
        let target = self.star_targets()?;
        self.expect_kw("in")?;
        let iter = self.star_expressions()?;
        let body = self.block()?;
        let orelse = if self.eat_kw("else") {
            self.block()?
        } else {
            Vec::new()
        };
        Ok(StmtKind::For {
            is_async,
            target,
            iter,
            body,
            orelse,
        })
    }

    fn try_stmt(&mut self) -> PResult<StmtKind> {
        self.expect_kw("try")?;
        let body = self.block()?;
        let mut handlers = Vec::new();
        while self.at_kw("except") {
            let line = self.line();
            self.bump();
            let mut type_ = None;
            let mut name = None;
            if !self.at_op(":") {
                type_ = Some(self.expression()?);
                if self.eat_kw("as") {
                    name = Some(self.identifier()?);
                } else if self.at_op(",") {
                    return self.error("multiple exception types must be parenthesized");
                }
            }
            let body = self.block()?;
            handlers.push(ExceptHandler {
                type_,
                name,
                body,
                line,
            });
        }
        let orelse = if !handlers.is_empty() && self.eat_kw("else") {
            self.block()?
        } else {
            Vec::new()
        };
        let finalbody = if self.eat_kw("finally") {
            self.block()?
        } else {
            Vec::new()
        };
        if handlers.is_empty() && finalbody.is_empty() {
            return self.unexpected("'except' or 'finally'");
        }
        Ok(StmtKind::Try {
            body,
            handlers,
            orelse,
            finalbody,
        })
    }

    fn with_stmt(&mut self, is_async: bool) -> PResult<StmtKind> {
        self.expect_kw("with")?;
        if self.at_op("(") {
            let save = self.pos;
            let save_line = self.last_line;
            if let Ok(items) = self.parenthesized_with_items() {
                if self.at_op(":") {
                    let body = self.block()?;
                    return Ok(StmtKind::With {
                        is_async,
                        items,
                        body,
                    });
                }
            }
            self.pos = save;
            self.last_line = save_line;
        }
        let mut items = vec![self.with_item()?];
        while self.eat_op(",") {
            items.push(self.with_item()?);
        }
        let body = self.block()?;
        Ok(StmtKind::With {
            is_async,
            items,
            body,
        })
    }

    fn parenthesized_with_items(&mut self) -> PResult<Vec<WithItem>> {
        self.expect_op("(")?;
        let mut items = vec![self.with_item()?];
        while self.eat_op(",") {
            if self.at_op(")") {
                break;
            }
            items.push(self.with_item()?);
        }
        self.expect_op(")")?;
        Ok(items)
    }

    fn with_item(&mut self) -> PResult<WithItem> {
        let context_expr = self.expression()?;
        let optional_vars = if self.eat_kw("as") {
            Some(self.star_target()?)
        } else {
            None
        };
        Ok(WithItem {
            context_expr,
            optional_vars,
        })
    }

    // ---- match statement -------------------------------------------------

    /// Returns `None` (with the position restored) when `match` is used as
    /// an ordinary name.
    fn match_stmt(&mut self) -> PResult<Option<StmtKind>> {
        let save = self.pos;
        let save_line = self.last_line;
        self.bump();
        let subject = (|| -> PResult<Expr> {
            let first = self.star_named_expression()?;
            if self.at_op(",") {
                let line = first.line;
                let mut elts = vec![first];
                while self.eat_op(",") {
                    if self.at_op(":") {
                        break;
                    }
                    elts.push(self.star_named_expression()?);
                }
                Ok(Expr::new(ExprKind::Tuple(elts), line))
            } else {
                Ok(first)
            }
        })();
        let opens_block = self.at_op(":") && self.peek_n(1).kind == RawKind::Newline;
        let subject = match subject {
            Ok(s) if opens_block => s,
            _ => {
                self.pos = save;
                self.last_line = save_line;
                return Ok(None);
            }
        };
        self.bump();
        self.bump();
        if !self.at_kind(RawKind::Indent) {
            return self.unexpected("an indented block");
        }
        self.bump();
        let mut cases = Vec::new();
        while self.at_kw("case") {
            self.bump();
            let pattern = self.case_patterns()?;
            let guard = if self.eat_kw("if") {
                Some(self.named_expression()?)
            } else {
                None
            };
            let body = self.block()?;
            cases.push(MatchCase {
                pattern,
                guard,
                body,
            });
            while self.at_kind(RawKind::Newline) {
                self.bump();
            }
        }
        if cases.is_empty() {
            return self.unexpected("'case'");
        }
        if self.at_kind(RawKind::Dedent) {
            self.bump();
        } else if !self.at_kind(RawKind::EndMarker) {
            return self.unexpected("'case' or dedent");
        }
        Ok(Some(StmtKind::Match { subject, cases }))
    }

    fn case_patterns(&mut self) -> PResult<Pattern> {
        let first = self.maybe_star_pattern()?;
        if !self.at_op(",") {
            if matches!(first, Pattern::MatchStar(_)) {
                return Ok(Pattern::MatchSequence(vec![first]));
            }
            return Ok(first);
        }
        let mut patterns = vec![first];
        while self.eat_op(",") {
            if self.at_op(":") || self.at_kw("if") {
                break;
            }
            patterns.push(self.maybe_star_pattern()?);
        }
        Ok(Pattern::MatchSequence(patterns))
    }

    fn maybe_star_pattern(&mut self) -> PResult<Pattern> {
        if self.eat_op("*") {
            let name = self.identifier()?;
            return Ok(Pattern::MatchStar((name != "_").then_some(name)));
        }
        self.pattern()
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        let mut alternatives = vec![self.closed_pattern()?];
        while self.eat_op("|") {
            alternatives.push(self.closed_pattern()?);
        }
        let pattern = if alternatives.len() == 1 {
            alternatives.pop().unwrap()
        } else {
            Pattern::MatchOr(alternatives)
        };
        if self.eat_kw("as") {
            let name = self.identifier()?;
            return Ok(Pattern::MatchAs {
                pattern: Some(Box::new(pattern)),
                name: Some(name),
            });
        }
        Ok(pattern)
    }

    fn literal_pattern_expr(&mut self) -> PResult<Expr> {
        let line = self.line();
        if self.at_kind(RawKind::String) {
            return self.strings();
        }
        let negative = self.eat_op("-");
        if !self.at_kind(RawKind::Number) {
            return self.unexpected("number");
        }
        let mut value = self.atom()?;
        if negative {
            value = Expr::new(
                ExprKind::UnaryOp {
                    op: UnaryOpKind::USub,
                    operand: Box::new(value),
                },
                line,
            );
        }
        if self.at_op("+") || self.at_op("-") {
            let op = if self.bump().text == "+" {
                BinOpKind::Add
            } else {
                BinOpKind::Sub
            };
            if !self.at_kind(RawKind::Number) {
                return self.unexpected("imaginary number");
            }
            let imag = self.atom()?;
            value = Expr::new(
                ExprKind::BinOp {
                    left: Box::new(value),
                    op,
                    right: Box::new(imag),
                },
                line,
            );
        }
        Ok(value)
    }

    fn value_pattern_expr(&mut self) -> PResult<Expr> {
        let line = self.line();
        let mut expr = Expr::new(ExprKind::Name(self.identifier()?), line);
        while self.eat_op(".") {
            let attr = self.identifier()?;
            expr = Expr::new(
                ExprKind::Attribute {
                    value: Box::new(expr),
                    attr,
                },
                line,
            );
        }
        Ok(expr)
    }

    fn closed_pattern(&mut self) -> PResult<Pattern> {
        let t = self.peek().clone();
        match t.kind {
            RawKind::Number | RawKind::String => {
                return Ok(Pattern::MatchValue(self.literal_pattern_expr()?));
            }
            RawKind::Op if t.text == "-" => {
                return Ok(Pattern::MatchValue(self.literal_pattern_expr()?));
            }
            RawKind::Name => match t.text.as_str() {
                "None" => {
                    self.bump();
                    return Ok(Pattern::MatchSingleton(Constant::None));
                }
                "True" | "False" => {
                    self.bump();
                    return Ok(Pattern::MatchSingleton(Constant::Bool(t.text == "True")));
                }
                _ => {
                    let dotted = self.at_op_n(1, ".");
                    let call = self.at_op_n(1, "(");
                    if !dotted && !call {
                        let name = self.identifier()?;
                        return Ok(Pattern::MatchAs {
                            pattern: None,
                            name: (name != "_").then_some(name),
                        });
                    }
                    let cls = self.value_pattern_expr()?;
                    if self.eat_op("(") {
                        return self.class_pattern(cls);
                    }
                    return Ok(Pattern::MatchValue(cls));
                }
            },
            RawKind::Op if t.text == "(" => {
                self.bump();
                if self.eat_op(")") {
                    return Ok(Pattern::MatchSequence(Vec::new()));
                }
                let first = self.maybe_star_pattern()?;
                if self.eat_op(")") {
                    if matches!(first, Pattern::MatchStar(_)) {
                        return Ok(Pattern::MatchSequence(vec![first]));
                    }
                    return Ok(first);
                }
                let mut items = vec![first];
                while self.eat_op(",") {
                    if self.at_op(")") {
                        break;
                    }
                    items.push(self.maybe_star_pattern()?);
                }
                self.expect_op(")")?;
                return Ok(Pattern::MatchSequence(items));
            }
            RawKind::Op if t.text == "[" => {
                self.bump();
                let mut items = Vec::new();
                while !self.at_op("]") {
                    items.push(self.maybe_star_pattern()?);
                    if !self.eat_op(",") {
                        break;
                    }
                }
                self.expect_op("]")?;
                return Ok(Pattern::MatchSequence(items));
            }
            RawKind::Op if t.text == "{" => {
                self.bump();
                let mut keys = Vec::new();
                let mut patterns = Vec::new();
                let mut rest = None;
                while !self.at_op("}") {
                    if self.eat_op("**") {
                        rest = Some(self.identifier()?);
                    } else {
                        let key = if self.at_kind(RawKind::Name)
                            && matches!(self.peek().text.as_str(), "None" | "True" | "False")
                        {
                            self.atom()?
                        } else if self.at_kind(RawKind::Name) {
                            self.value_pattern_expr()?
                        } else {
                            self.literal_pattern_expr()?
                        };
                        self.expect_op(":")?;
                        keys.push(key);
                        patterns.push(self.pattern()?);
                    }
                    if !self.eat_op(",") {
                        break;
                    }
                }
                self.expect_op("}")?;
                return Ok(Pattern::MatchMapping {
                    keys,
                    patterns,
                    rest,
                });
            }
            _ => {}
        }
        self.unexpected("pattern")
    }

    fn class_pattern(&mut self, cls: Expr) -> PResult<Pattern> {
        let mut patterns = Vec::new();
        let mut kwd_attrs = Vec::new();
        let mut kwd_patterns = Vec::new();
        while !self.at_op(")") {
            if self.at_identifier() && self.at_op_n(1, "=") {
                kwd_attrs.push(self.identifier()?);
                self.bump();
                kwd_patterns.push(self.pattern()?);
            } else {
                if !kwd_attrs.is_empty() {
                    return self.error("positional patterns follow keyword patterns");
                }
                patterns.push(self.pattern()?);
            }
            if !self.eat_op(",") {
                break;
            }
        }
        self.expect_op(")")?;
        Ok(Pattern::MatchClass {
            cls,
            patterns,
            kwd_attrs,
            kwd_patterns,
        })
    }

    // ---- targets ---------------------------------------------------------

    fn star_target(&mut self) -> PResult<Expr> {
        let line = self.line();
        if self.eat_op("*") {
            let inner = self.star_target()?;
            return Ok(Expr::new(ExprKind::Starred(Box::new(inner)), line));
        }
        self.bitwise_or()
    }

    fn star_targets(&mut self) -> PResult<Expr> {
        let line = self.line();
        let first = self.star_target()?;
        if !self.at_op(",") {
            return Ok(first);
        }
        let mut elts = vec![first];
        while self.eat_op(",") {
            if self.at_kw("in") || self.at_op("=") || self.at_op(")") {
                break;
            }
            elts.push(self.star_target()?);
        }
        Ok(Expr::new(ExprKind::Tuple(elts), line))
    }

    fn target_item(&mut self) -> PResult<Expr> {
        self.bitwise_or()
    }

    // ---- expressions -----------------------------------------------------

    fn star_expressions(&mut self) -> PResult<Expr> {
        let line = self.line();
        let first = self.star_expression()?;
        if !self.at_op(",") {
            return Ok(first);
        }
        let mut elts = vec![first];
        while self.eat_op(",") {
            if !self.starts_expression() {
                break;
            }
            elts.push(self.star_expression()?);
        }
        Ok(Expr::new(ExprKind::Tuple(elts), line))
    }

    fn starts_expression(&self) -> bool {
        let t = self.peek();
        match t.kind {
            RawKind::Name => {
                !is_keyword(&t.text)
                    || matches!(
                        t.text.as_str(),
                        "None" | "True" | "False" | "not" | "lambda" | "await" | "yield"
                    )
            }
            RawKind::Number | RawKind::String => true,
            RawKind::Op => matches!(
                t.text.as_str(),
                "(" | "[" | "{" | "-" | "+" | "~" | "*" | "..."
            ),
            _ => false,
        }
    }

    fn star_expression(&mut self) -> PResult<Expr> {
        let line = self.line();
        if self.eat_op("*") {
            let value = self.bitwise_or()?;
            return Ok(Expr::new(ExprKind::Starred(Box::new(value)), line));
        }
        self.expression()
    }

    fn star_named_expression(&mut self) -> PResult<Expr> {
        let line = self.line();
        if self.eat_op("*") {
            let value = self.bitwise_or()?;
            return Ok(Expr::new(ExprKind::Starred(Box::new(value)), line));
        }
        self.named_expression()
    }

    fn named_expression(&mut self) -> PResult<Expr> {
        if self.at_identifier() && self.at_op_n(1, ":=") {
            let line = self.line();
            let name = self.identifier()?;
            self.bump();
            let value = self.expression()?;
            return Ok(Expr::new(
                ExprKind::NamedExpr {
                    target: Box::new(Expr::new(ExprKind::Name(name), line)),
                    value: Box::new(value),
                },
                line,
            ));
        }
        self.expression()
    }

    fn expression(&mut self) -> PResult<Expr> {
        if self.at_kw("lambda") {
            return self.lambda(true);
        }
        let line = self.line();
        let body = self.disjunction()?;
        if self.at_kw("if") {
            self.bump();
            let test = self.disjunction()?;
            self.expect_kw("else")?;
            let orelse = self.expression()?;
            return Ok(Expr::new(
                ExprKind::IfExp {
                    test: Box::new(test),
                    body: Box::new(body),
                    orelse: Box::new(orelse),
                },
                line,
            ));
        }
        Ok(body)
    }

    fn expression_nocond(&mut self) -> PResult<Expr> {
        if self.at_kw("lambda") {
            return self.lambda(false);
        }
        self.disjunction()
    }

    fn lambda(&mut self, allow_cond: bool) -> PResult<Expr> {
        let line = self.line();
        self.expect_kw("lambda")?;
        let args = self.parameters(":", false)?;
        self.expect_op(":")?;
        let body = if allow_cond {
            self.expression()?
        } else {
            self.expression_nocond()?
        };
        Ok(Expr::new(
            ExprKind::Lambda {
                args: Box::new(args),
                body: Box::new(body),
            },
            line,
        ))
    }

    fn bool_chain(&mut self, kw: &str, op: BoolOpKind, next: fn(&mut Self) -> PResult<Expr>) -> PResult<Expr> {
        let line = self.line();
        let first = next(self)?;
        if !self.at_kw(kw) {
            return Ok(first);
        }
        let mut values = vec![first];
        while self.eat_kw(kw) {
            values.push(next(self)?);
        }
        Ok(Expr::new(ExprKind::BoolOp { op, values }, line))
    }

    fn disjunction(&mut self) -> PResult<Expr> {
        self.bool_chain("or", BoolOpKind::Or, Self::conjunction)
    }

    fn conjunction(&mut self) -> PResult<Expr> {
        self.bool_chain("and", BoolOpKind::And, Self::inversion)
    }

    fn inversion(&mut self) -> PResult<Expr> {
        if self.at_kw("not") {
            let line = self.line();
            self.bump();
            let operand = self.inversion()?;
            return Ok(Expr::new(
                ExprKind::UnaryOp {
                    op: UnaryOpKind::Not,
                    operand: Box::new(operand),
                },
                line,
            ));
        }
        self.comparison()
    }

    fn compare_op(&mut self) -> Option<CmpOpKind> {
        let t = self.peek();
        let op = match (t.kind, t.text.as_str()) {
            (RawKind::Op, "==") => CmpOpKind::Eq,
            (RawKind::Op, "!=") => CmpOpKind::NotEq,
            (RawKind::Op, "<") => CmpOpKind::Lt,
            (RawKind::Op, "<=") => CmpOpKind::LtE,
            (RawKind::Op, ">") => CmpOpKind::Gt,
            (RawKind::Op, ">=") => CmpOpKind::GtE,
            (RawKind::Name, "in") => CmpOpKind::In,
            (RawKind::Name, "not") if self.at_kw_n(1, "in") => {
                self.bump();
                CmpOpKind::NotIn
            }
            (RawKind::Name, "is") => {
                if self.at_kw_n(1, "not") {
                    self.bump();
                    CmpOpKind::IsNot
                } else {
                    CmpOpKind::Is
                }
            }
            _ => return None,
        };
        self.bump();
        Some(op)
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let line = self.line();
        let left = self.bitwise_or()?;
        let mut ops = Vec::new();
        let mut comparators = Vec::new();
        while let Some(op) = self.compare_op() {
            ops.push(op);
            comparators.push(self.bitwise_or()?);
        }
        if ops.is_empty() {
            return Ok(left);
        }
        Ok(Expr::new(
            ExprKind::Compare {
                left: Box::new(left),
                ops,
                comparators,
            },
            line,
        ))
    }

    fn binary_level(&mut self, symbols: &[&str], next: fn(&mut Self) -> PResult<Expr>) -> PResult<Expr> {
        let line = self.line();
        let mut left = next(self)?;
        loop {
            let t = self.peek();
            if t.kind != RawKind::Op || !symbols.contains(&t.text.as_str()) {
                return Ok(left);
            }
            let op = BinOpKind::from_symbol(&self.bump().text).expect("binary operator");
            let right = next(self)?;
            left = Expr::new(
                ExprKind::BinOp {
                    left: Box::new(left),
                    op,
                    right: Box::new(right),
                },
                line,
            );
        }
    }

    fn bitwise_or(&mut self) -> PResult<Expr> {
        self.binary_level(&["|"], Self::bitwise_xor)
    }

    fn bitwise_xor(&mut self) -> PResult<Expr> {
        self.binary_level(&["^"], Self::bitwise_and)
    }

    fn bitwise_and(&mut self) -> PResult<Expr> {
        self.binary_level(&["&"], Self::shift_expr)
    }

    fn shift_expr(&mut self) -> PResult<Expr> {
        self.binary_level(&["<<", ">>"], Self::sum)
    }

    fn sum(&mut self) -> PResult<Expr> {
        self.binary_level(&["+", "-"], Self::term)
    }

    fn term(&mut self) -> PResult<Expr> {
        self.binary_level(&["*", "/", "//", "%", "@"], Self::factor)
    }

    fn factor(&mut self) -> PResult<Expr> {
        let t = self.peek();
        let op = match (t.kind, t.text.as_str()) {
            (RawKind::Op, "+") => Some(UnaryOpKind::UAdd),
            (RawKind::Op, "-") => Some(UnaryOpKind::USub),
            (RawKind::Op, "~") => Some(UnaryOpKind::Invert),
            _ => None,
        };
        if let Some(op) = op {
            let line = self.line();
            self.bump();
            let operand = self.factor()?;
            return Ok(Expr::new(
                ExprKind::UnaryOp {
                    op,
                    operand: Box::new(operand),
                },
                line,
            ));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let line = self.line();
        let base = self.await_primary()?;
        if self.eat_op("**") {
            let exponent = self.factor()?;
            return Ok(Expr::new(
                ExprKind::BinOp {
                    left: Box::new(base),
                    op: BinOpKind::Pow,
                    right: Box::new(exponent),
                },
                line,
            ));
        }
        Ok(base)
    }

    fn await_primary(&mut self) -> PResult<Expr> {
        if self.at_kw("await") {
            let line = self.line();
            self.bump();
            let value = self.primary()?;
            return Ok(Expr::new(ExprKind::Await(Box::new(value)), line));
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let mut expr = self.atom()?;
        loop {
            let line = expr.line;
            if self.eat_op(".") {
                let attr = self.identifier()?;
                expr = Expr::new(
                    ExprKind::Attribute {
                        value: Box::new(expr),
                        attr,
                    },
                    line,
                );
            } else if self.eat_op("(") {
                let (args, keywords) = self.call_arguments()?;
                expr = Expr::new(
                    ExprKind::Call {
                        func: Box::new(expr),
                        args,
                        keywords,
                    },
                    line,
                );
            } else if self.eat_op("[") {
                let slice = self.slices()?;
                self.expect_op("]")?;
                expr = Expr::new(
                    ExprKind::Subscript {
                        value: Box::new(expr),
                        slice: Box::new(slice),
                    },
                    line,
                );
            } else {
                return Ok(expr);
            }
        }
    }

    /// Arguments after an opening parenthesis, consuming the closing one.
    fn call_arguments(&mut self) -> PResult<(Vec<Expr>, Vec<Keyword>)> {
        let mut args = Vec::new();
        let mut keywords = Vec::new();
        while !self.at_op(")") {
            let line = self.line();
            if self.eat_op("**") {
                let value = self.expression()?;
                keywords.push(Keyword { arg: None, value });
            } else if self.eat_op("*") {
                let value = self.expression()?;
                args.push(Expr::new(ExprKind::Starred(Box::new(value)), line));
            } else if self.at_identifier() && self.at_op_n(1, "=") {
                let arg = self.identifier()?;
                self.bump();
                let value = self.expression()?;
                keywords.push(Keyword {
                    arg: Some(arg),
                    value,
                });
            } else {
                let value = self.named_expression()?;
                if self.at_kw("for") || (self.at_kw("async") && self.at_kw_n(1, "for")) {
                    let generators = self.comprehension_clauses()?;
                    args.push(Expr::new(
                        ExprKind::GeneratorExp {
                            elt: Box::new(value),
                            generators,
                        },
                        line,
                    ));
                } else {
                    args.push(value);
                }
            }
            if !self.eat_op(",") {
                break;
            }
        }
        self.expect_op(")")?;
        Ok((args, keywords))
    }

    fn slices(&mut self) -> PResult<Expr> {
        let line = self.line();
        let first = self.slice()?;
        if !self.at_op(",") {
            return Ok(first);
        }
        let mut elts = vec![first];
        while self.eat_op(",") {
            if self.at_op("]") {
                break;
            }
            elts.push(self.slice()?);
        }
        Ok(Expr::new(ExprKind::Tuple(elts), line))
    }

    fn slice(&mut self) -> PResult<Expr> {
        let line = self.line();
        let lower = if self.at_op(":") {
            None
        } else if self.at_op("*") {
            return self.star_expression();
        } else {
            let e = self.named_expression()?;
            if !self.at_op(":") {
                return Ok(e);
            }
            Some(Box::new(e))
        };
        self.expect_op(":")?;
        let bound = |p: &mut Self| -> PResult<Option<Box<Expr>>> {
            if p.at_op(":") || p.at_op(",") || p.at_op("]") {
                Ok(None)
            } else {
                Ok(Some(Box::new(p.expression()?)))
            }
        };
        let upper = bound(self)?;
        let step = if self.eat_op(":") { bound(self)? } else { None };
        Ok(Expr::new(ExprKind::Slice { lower, upper, step }, line))
    }

    fn comprehension_clauses(&mut self) -> PResult<Vec<Comprehension>> {
        let mut generators = Vec::new();
        loop {
            let is_async = if self.at_kw("async") && self.at_kw_n(1, "for") {
                self.bump();
                true
            } else {
                false
            };
            if !self.eat_kw("for") {
                break;
            }
            let target = self.star_targets()?;
            self.expect_kw("in")?;
            let iter = self.disjunction()?;
            let mut ifs = Vec::new();
            while self.eat_kw("if") {
                ifs.push(self.disjunction()?);
            }
            generators.push(Comprehension {
                target,
                iter,
                ifs,
                is_async,
            });
        }
        if generators.is_empty() {
            return self.unexpected("'for'");
        }
        Ok(generators)
    }

    fn at_comprehension(&self) -> bool {
        self.at_kw("for") || (self.at_kw("async") && self.at_kw_n(1, "for"))
    }

    fn yield_expr(&mut self) -> PResult<Expr> {
        let line = self.line();
        self.expect_kw("yield")?;
        if self.eat_kw("from") {
            let value = self.expression()?;
            return Ok(Expr::new(ExprKind::YieldFrom(Box::new(value)), line));
        }
        let value = if self.starts_expression() {
            Some(Box::new(self.star_expressions()?))
        } else {
            None
        };
        Ok(Expr::new(ExprKind::Yield(value), line))
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        let line = t.line;
        match t.kind {
            RawKind::Name => {
                let constant = match t.text.as_str() {
                    "None" => Some(Constant::None),
                    "True" => Some(Constant::Bool(true)),
                    "False" => Some(Constant::Bool(false)),
                    _ => None,
                };
                if let Some(c) = constant {
                    self.bump();
                    return Ok(Expr::new(ExprKind::Constant(c), line));
                }
                if is_keyword(&t.text) {
                    return self.unexpected("expression");
                }
                self.bump();
                Ok(Expr::new(ExprKind::Name(t.text), line))
            }
            RawKind::Number => {
                self.bump();
                let value = literal::parse_number(&t.text).map_err(|message| ParseError { line, message })?;
                Ok(Expr::new(ExprKind::Constant(value), line))
            }
            RawKind::String => self.strings(),
            RawKind::Op => match t.text.as_str() {
                "(" => self.paren_atom(),
                "[" => self.list_atom(),
                "{" => self.brace_atom(),
                "..." => {
                    self.bump();
                    Ok(Expr::new(ExprKind::Constant(Constant::Ellipsis), line))
                }
                _ => self.unexpected("expression"),
            },
            _ => self.unexpected("expression"),
        }
    }

    fn paren_atom(&mut self) -> PResult<Expr> {
        let line = self.line();
        self.expect_op("(")?;
        if self.eat_op(")") {
            return Ok(Expr::new(ExprKind::Tuple(Vec::new()), line));
        }
        if self.at_kw("yield") {
            let e = self.yield_expr()?;
            self.expect_op(")")?;
            return Ok(e);
        }
        let first = self.star_named_expression()?;
        if self.at_comprehension() {
            let generators = self.comprehension_clauses()?;
            self.expect_op(")")?;
            return Ok(Expr::new(
                ExprKind::GeneratorExp {
                    elt: Box::new(first),
                    generators,
                },
                line,
            ));
        }
        if self.eat_op(")") {
            if matches!(first.kind, ExprKind::Starred(_)) {
                return self.error("cannot use starred expression here");
            }
            return Ok(first);
        }
        let mut elts = vec![first];
        while self.eat_op(",") {
            if self.at_op(")") {
                break;
            }
            elts.push(self.star_named_expression()?);
        }
        self.expect_op(")")?;
        Ok(Expr::new(ExprKind::Tuple(elts), line))
    }

    fn list_atom(&mut self) -> PResult<Expr> {
        let line = self.line();
        self.expect_op("[")?;
        if self.eat_op("]") {
            return Ok(Expr::new(ExprKind::List(Vec::new()), line));
        }
        let first = self.star_named_expression()?;
        if self.at_comprehension() {
            let generators = self.comprehension_clauses()?;
            self.expect_op("]")?;
            return Ok(Expr::new(
                ExprKind::ListComp {
                    elt: Box::new(first),
                    generators,
                },
                line,
            ));
        }
        let mut elts = vec![first];
        while self.eat_op(",") {
            if self.at_op("]") {
                break;
            }
            elts.push(self.star_named_expression()?);
        }
        self.expect_op("]")?;
        Ok(Expr::new(ExprKind::List(elts), line))
    }

    fn brace_atom(&mut self) -> PResult<Expr> {
        let line = self.line();
        self.expect_op("{")?;
        if self.eat_op("}") {
            return Ok(Expr::new(
                ExprKind::Dict {
                    keys: Vec::new(),
                    values: Vec::new(),
                },
                line,
            ));
        }
        // dict display
        if self.at_op("**") {
            return self.dict_rest(line, Vec::new(), Vec::new());
        }
        let first = self.star_named_expression()?;
        if self.eat_op(":") {
            let value = self.expression()?;
            if self.at_comprehension() {
                let generators = self.comprehension_clauses()?;
                self.expect_op("}")?;
                return Ok(Expr::new(
                    ExprKind::DictComp {
                        key: Box::new(first),
                        value: Box::new(value),
                        generators,
                    },
                    line,
                ));
            }
            if !self.eat_op(",") {
                self.expect_op("}")?;
                return Ok(Expr::new(
                    ExprKind::Dict {
                        keys: vec![Some(first)],
                        values: vec![value],
                    },
                    line,
                ));
            }
            return self.dict_rest(line, vec![Some(first)], vec![value]);
        }
        // set display
        if self.at_comprehension() {
            let generators = self.comprehension_clauses()?;
            self.expect_op("}")?;
            return Ok(Expr::new(
                ExprKind::SetComp {
                    elt: Box::new(first),
                    generators,
                },
                line,
            ));
        }
        let mut elts = vec![first];
        while self.eat_op(",") {
            if self.at_op("}") {
                break;
            }
            elts.push(self.star_named_expression()?);
        }
        self.expect_op("}")?;
        Ok(Expr::new(ExprKind::Set(elts), line))
    }

    fn dict_rest(&mut self, line: u32, mut keys: Vec<Option<Expr>>, mut values: Vec<Expr>) -> PResult<Expr> {
        while !self.at_op("}") {
            if self.eat_op("**") {
                keys.push(None);
                values.push(self.bitwise_or()?);
            } else {
                keys.push(Some(self.expression()?));
                self.expect_op(":")?;
                values.push(self.expression()?);
            }
            if !self.eat_op(",") {
                break;
            }
        }
        self.expect_op("}")?;
        Ok(Expr::new(ExprKind::Dict { keys, values }, line))
    }

    /// One or more adjacent string literals, folded as the compiler does.
    fn strings(&mut self) -> PResult<Expr> {
        let line = self.line();
        let mut parts: Vec<Tok> = Vec::new();
        while self.at_kind(RawKind::String) {
            parts.push(self.bump());
        }
        let split: Vec<_> = parts.iter().map(|t| literal::split_string_token(&t.text)).collect();
        let bytes = split[0].bytes;
        if split.iter().any(|p| p.bytes != bytes) {
            return self.error("cannot mix bytes and nonbytes literals");
        }
        if bytes {
            let mut out = Vec::new();
            for p in &split {
                if !p.body.is_ascii() {
                    return Err(ParseError {
                        line,
                        message: "bytes can only contain ASCII literal characters".into(),
                    });
                }
                if p.raw {
                    out.extend_from_slice(p.body.as_bytes());
                } else {
                    out.extend(literal::unescape_bytes(p.body));
                }
            }
            return Ok(Expr::new(ExprKind::Constant(Constant::Bytes(out)), line));
        }
        if !split.iter().any(|p| p.formatted) {
            let mut out = String::new();
            for p in &split {
                if p.raw {
                    out.push_str(p.body);
                } else {
                    out.push_str(&literal::unescape_str(p.body));
                }
            }
            return Ok(Expr::new(ExprKind::Constant(Constant::Str(out)), line));
        }
        let mut values: Vec<Expr> = Vec::new();
        let mut pending = String::new();
        for (tok, p) in parts.iter().zip(&split) {
            if !p.formatted {
                if p.raw {
                    pending.push_str(p.body);
                } else {
                    pending.push_str(&literal::unescape_str(p.body));
                }
                continue;
            }
            let pieces = literal::split_fstring(p.body, p.raw).map_err(|message| ParseError {
                line: tok.line,
                message,
            })?;
            self.fstring_values(&pieces, tok.line, &mut values, &mut pending)?;
        }
        if !pending.is_empty() {
            values.push(Expr::new(ExprKind::Constant(Constant::Str(pending)), line));
        }
        Ok(Expr::new(ExprKind::JoinedStr(values), line))
    }

    fn fstring_values(
        &mut self,
        pieces: &[FPiece],
        line: u32,
        values: &mut Vec<Expr>,
        pending: &mut String,
    ) -> PResult<()> {
        for piece in pieces {
            match piece {
                FPiece::Literal(text) => pending.push_str(text),
                FPiece::Field {
                    expr,
                    debug_text,
                    conversion,
                    spec,
                    ..
                } => {
                    if let Some(d) = debug_text {
                        pending.push_str(d);
                    }
                    if !pending.is_empty() {
                        values.push(Expr::new(
                            ExprKind::Constant(Constant::Str(std::mem::take(pending))),
                            line,
                        ));
                    }
                    let value = parse_fstring_expr(expr, line)?;
                    let format_spec = match spec {
                        Some(spec_pieces) => {
                            let mut spec_values = Vec::new();
                            let mut spec_pending = String::new();
                            self.fstring_values(spec_pieces, line, &mut spec_values, &mut spec_pending)?;
                            if !spec_pending.is_empty() {
                                spec_values.push(Expr::new(
                                    ExprKind::Constant(Constant::Str(spec_pending)),
                                    line,
                                ));
                            }
                            Some(Box::new(Expr::new(ExprKind::JoinedStr(spec_values), line)))
                        }
                        None => None,
                    };
                    values.push(Expr::new(
                        ExprKind::FormattedValue {
                            value: Box::new(value),
                            conversion: *conversion,
                            format_spec,
                        },
                        line,
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Parses the expression of an f-string replacement field.
fn parse_fstring_expr(text: &str, line: u32) -> PResult<Expr> {
    if text.contains('#') {
        return Err(ParseError {
            line,
            message: "f-string expression part cannot include '#'".into(),
        });
    }
    let wrapped = format!("({text})");
    let raw = tokenize_source(&wrapped).map_err(|e| ParseError {
        line: line + e.line - 1,
        message: e.message,
    })?;
    let mut parser = Parser::new(&wrapped, &raw, line - 1);
    let expr = if parser.at_op("(") && parser.at_kw_n(1, "yield") {
        parser.bump();
        let e = parser.yield_expr()?;
        parser.expect_op(")")?;
        e
    } else {
        parser.bump();
        let e = parser.star_expressions()?;
        parser.expect_op(")")?;
        e
    };
    parser.expect_newline()?;
    if !parser.at_kind(RawKind::EndMarker) {
        return parser.unexpected("end of f-string expression");
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> Module {
        parse_module(src).unwrap_or_else(|e| panic!("{src:?}: {e}"))
    }

    fn expr(src: &str) -> ExprKind {
        match parse(src).body.remove(0).kind {
            StmtKind::Expr(e) => e.kind,
            other => panic!("not an expression statement: {other:?}"),
        }
    }

    #[test]
    fn chained_comparison_is_one_node() {
        match expr("a < b <= c\n") {
            ExprKind::Compare { ops, comparators, .. } => {
                assert_eq!(ops, vec![CmpOpKind::Lt, CmpOpKind::LtE]);
                assert_eq!(comparators.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boolean_chains_flatten_per_level() {
        match expr("a and b and c or d\n") {
            ExprKind::BoolOp { op, values } => {
                assert_eq!(op, BoolOpKind::Or);
                assert!(matches!(&values[0].kind, ExprKind::BoolOp { values, .. } if values.len() == 3));
            }
            other => panic!("{other:?}"),
        }
        // parentheses stop flattening
        match expr("(a and b) and c\n") {
            ExprKind::BoolOp { values, .. } => assert_eq!(values.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn power_binds_tighter_than_unary_minus() {
        match expr("-x ** 2\n") {
            ExprKind::UnaryOp { op, operand } => {
                assert_eq!(op, UnaryOpKind::USub);
                assert!(matches!(operand.kind, ExprKind::BinOp { op: BinOpKind::Pow, .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn adjacent_strings_fold() {
        assert_eq!(
            expr("'a' \"b\" '\\x41'\n"),
            ExprKind::Constant(Constant::Str("abA".into()))
        );
        assert!(matches!(expr("'a' f'{x}'\n"), ExprKind::JoinedStr(_)));
        assert!(parse_module("b'a' 'b'\n").is_err());
    }

    #[test]
    fn fstring_fields_become_expressions() {
        match expr("f'{a + b!r:>{width}}'\n") {
            ExprKind::JoinedStr(values) => match &values[0].kind {
                ExprKind::FormattedValue { value, conversion, format_spec } => {
                    assert!(matches!(value.kind, ExprKind::BinOp { .. }));
                    assert_eq!(*conversion, Some('r'));
                    assert!(format_spec.is_some());
                }
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn elif_nests() {
        let m = parse("if a:\n    x\nelif b:\n    y\nelse:\n    z\n");
        match &m.body[0].kind {
            StmtKind::If { orelse, .. } => {
                assert!(matches!(orelse[0].kind, StmtKind::If { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn statement_lines() {
        let m = parse("def f(a,\n      b):\n    return a\n\nx = 1\n");
        assert_eq!((m.body[0].line, m.body[0].end_line), (1, 3));
        assert_eq!((m.body[1].line, m.body[1].end_line), (5, 5));
    }

    #[test]
    fn assorted_statements_parse() {
        let src = r#"
import os.path as p, sys
from ..pkg import (a as b, c,)
from . import *
@decorator(arg)
class A(B, metaclass=M):
    x: int = 1
    async def m(self, /, a, *args, k=1, **kw) -> None:
        async with a as (b, c), d:
            pass
        async for i in g():
            await i
    def g(self):
        yield from range(3)
        y = yield
        return [i for i in range(3) if i if not i]
with (open(a) as f, open(b) as g):
    pass
try:
    pass
except (A, B) as e:
    raise X from e
except:
    pass
else:
    pass
finally:
    del a[0], b.c
global q; nonlocal r
x = lambda a, *b, c=1, **d: (a, *b)
y = {**a, 'k': v, **b}
z = {1, *s}
w = a[1:2, ::3, ...]
v = (x := 5)
assert x, "msg"
while x: x -= 1
else: pass
for a, *b in c: continue
"#;
        let m = parse(src);
        assert!(m.body.len() > 10);
    }

    #[test]
    fn match_statement() {
        let src = "match cmd:\n    case [x, *rest] if x > 0:\n        pass\n    case {'k': v, **kw}:\n        pass\n    case Point(x=0, y=-1) | Point(1, 2):\n        pass\n    case -1 + 2j:\n        pass\n    case _:\n        pass\n";
        let m = parse(src);
        match &m.body[0].kind {
            StmtKind::Match { cases, .. } => {
                assert_eq!(cases.len(), 5);
                assert!(matches!(cases[4].pattern, Pattern::MatchAs { pattern: None, name: None }));
            }
            other => panic!("{other:?}"),
        }
        // `match` as an ordinary name
        let m = parse("match = 1\nmatch(x)\n");
        assert_eq!(m.body.len(), 2);
    }

    #[test]
    fn python2_print_is_rejected() {
        let err = parse_module("print 'hello'\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(parse_module("try:\n    pass\nexcept E, e:\n    pass\n").is_err());
    }

    #[test]
    fn bad_indentation_is_rejected() {
        assert!(parse_module("  x = 1\n").is_err());
        assert!(parse_module("if x:\npass\n").is_err());
    }
}
