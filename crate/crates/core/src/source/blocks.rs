//! Cyclomatic complexity per block.
//!
//! Decision points: `if`/`elif`, ternaries, `for`/`while` (plus one for an
//! `else` clause), each `except` handler and a `try`'s `else`, each extra
//! operand of `and`/`or`, each comprehension `for` and its `if` filters,
//! `assert`, and every `case` of a `match` except a trailing catch-all.
//! `with`, lambdas and decorators add nothing.
//!
//! A function's complexity covers its own body only: nested functions are
//! closures with their own score. A class scores one plus its body plus all
//! its methods; the reported class score is that total averaged over the
//! methods.

use serde::{Deserialize, Serialize};

use super::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Module,
    Function,
    Method,
    Class,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub kind: BlockKind,
    pub start_line: u32,
    pub end_line: u32,
    pub decision_points: u32,
    /// Top-level functions, classes and their methods are reported; closures,
    /// inner classes and anything defined under them are not.
    pub reported: bool,
    /// Nesting depth; the module is 0.
    pub depth: u32,
}

impl Block {
    pub fn complexity(&self) -> u32 {
        self.decision_points + 1
    }
}

/// All blocks of a unit, module block first, the rest in source order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTree {
    pub blocks: Vec<Block>,
}

impl BlockTree {
    pub fn module(&self) -> &Block {
        &self.blocks[0]
    }

    /// Complexity of the whole unit: module-level decisions plus the
    /// decisions inside every reported function and class.
    pub fn total_complexity(&self) -> u32 {
        self.module().complexity()
    }

    pub fn reported(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| b.reported)
    }
}

struct Func {
    block: Block,
    complexity: u32,
    nested: Vec<Block>,
}

struct Class {
    block: Block,
    methods: Vec<Func>,
    nested: Vec<Block>,
    real_complexity: u32,
}

impl Class {
    fn complexity(&self) -> u32 {
        let n = self.methods.len() as u32;
        self.real_complexity
            .checked_div(n)
            .map_or(self.real_complexity, |per_method| per_method + u32::from(n > 1))
    }
}

struct Visitor<'a> {
    complexity: u32,
    functions: Vec<Func>,
    classes: Vec<Class>,
    class_name: Option<&'a str>,
    depth: u32,
}

impl<'a> Visitor<'a> {
    fn new(class_name: Option<&'a str>, depth: u32) -> Self {
        Visitor {
            complexity: 0,
            functions: Vec::new(),
            classes: Vec::new(),
            class_name,
            depth,
        }
    }

    fn functions_complexity(&self) -> u32 {
        self.functions.iter().map(|f| f.complexity - 1).sum()
    }

    fn stmt(&mut self, stmt: &'a Stmt) {
        match &stmt.kind {
            StmtKind::FunctionDef(def) => return self.function(stmt, def),
            StmtKind::ClassDef(def) => return self.class(stmt, def),
            StmtKind::Assert { .. } => {
                self.complexity += 1;
                return;
            }
            StmtKind::Try { handlers, orelse, .. } => {
                self.complexity += handlers.len() as u32 + u32::from(!orelse.is_empty());
            }
            StmtKind::If { .. } => self.complexity += 1,
            StmtKind::For { orelse, .. } | StmtKind::While { orelse, .. } => {
                self.complexity += 1 + u32::from(!orelse.is_empty());
            }
            StmtKind::Match { cases, .. } => {
                let catch_all = cases
                    .iter()
                    .any(|c| matches!(c.pattern, Pattern::MatchAs { pattern: None, .. }));
                self.complexity += (cases.len() as u32).saturating_sub(u32::from(catch_all));
            }
            _ => {}
        }
        for_each_stmt_child(stmt, &mut |child| match child {
            Child::Stmt(s) => self.stmt(s),
            Child::Expr(e) => self.expr(e),
        });
    }

    fn expr(&mut self, expr: &'a Expr) {
        match &expr.kind {
            ExprKind::BoolOp { values, .. } => self.complexity += values.len() as u32 - 1,
            ExprKind::IfExp { .. } => self.complexity += 1,
            ExprKind::ListComp { generators, .. }
            | ExprKind::SetComp { generators, .. }
            | ExprKind::GeneratorExp { generators, .. }
            | ExprKind::DictComp { generators, .. } => {
                self.complexity += generators.iter().map(|g| 1 + g.ifs.len() as u32).sum::<u32>();
            }
            _ => {}
        }
        for_each_child_expr(expr, &mut |e| self.expr(e));
    }

    fn function(&mut self, stmt: &'a Stmt, def: &'a FunctionDef) {
        let mut complexity = 1;
        let mut nested = Vec::new();
        for child in &def.body {
            let mut v = Visitor::new(None, self.depth + 1);
            v.stmt(child);
            complexity += v.complexity;
            v.flatten_into(&mut nested);
        }
        let kind = if self.class_name.is_some() {
            BlockKind::Method
        } else {
            BlockKind::Function
        };
        self.functions.push(Func {
            block: Block {
                name: def.name.clone(),
                kind,
                start_line: stmt.line,
                end_line: stmt.end_line,
                decision_points: complexity - 1,
                reported: false,
                depth: self.depth + 1,
            },
            complexity,
            nested,
        });
    }

    fn class(&mut self, stmt: &'a Stmt, def: &'a ClassDef) {
        let mut real = 1;
        let mut methods = Vec::new();
        let mut nested = Vec::new();
        for child in &def.body {
            let mut v = Visitor::new(Some(&def.name), self.depth + 1);
            v.stmt(child);
            real += v.complexity + v.functions.iter().map(|f| f.complexity).sum::<u32>();
            methods.append(&mut v.functions);
            for class in v.classes.drain(..) {
                class.flatten_into(&mut nested);
            }
        }
        let mut class = Class {
            block: Block {
                name: def.name.clone(),
                kind: BlockKind::Class,
                start_line: stmt.line,
                end_line: stmt.end_line,
                decision_points: 0,
                reported: false,
                depth: self.depth + 1,
            },
            methods,
            nested,
            real_complexity: real,
        };
        class.block.decision_points = class.complexity() - 1;
        self.classes.push(class);
    }

    /// Moves every block this visitor found into `out`, unreported.
    fn flatten_into(self, out: &mut Vec<Block>) {
        for f in self.functions {
            f.flatten_into(out);
        }
        for c in self.classes {
            c.flatten_into(out);
        }
    }
}

impl Func {
    fn flatten_into(self, out: &mut Vec<Block>) {
        out.push(self.block);
        out.extend(self.nested);
    }
}

impl Class {
    fn flatten_into(self, out: &mut Vec<Block>) {
        out.push(self.block);
        for m in self.methods {
            m.flatten_into(out);
        }
        out.extend(self.nested);
    }
}

pub fn block_tree(module: &Module, last_line: u32) -> BlockTree {
    let mut v = Visitor::new(None, 0);
    v.complexity = 1;
    for stmt in &module.body {
        v.stmt(stmt);
    }
    let total = v.complexity
        + v.functions_complexity()
        + v.classes.iter().map(|c| c.real_complexity - 1).sum::<u32>();
    let mut blocks = vec![Block {
        name: "<module>".to_string(),
        kind: BlockKind::Module,
        start_line: 1,
        end_line: last_line.max(1),
        decision_points: total - 1,
        reported: true,
        depth: 0,
    }];
    for mut f in v.functions {
        f.block.reported = true;
        f.flatten_into(&mut blocks);
    }
    for mut c in v.classes {
        c.block.reported = true;
        for m in &mut c.methods {
            m.block.reported = true;
        }
        c.flatten_into(&mut blocks);
    }
    blocks[1..].sort_by_key(|b| (b.start_line, b.depth));
    BlockTree { blocks }
}
