//! Statement AST, parser and printer for the C-like surface language.
//!
//! ```text
//! program   := stmt*
//! stmt      := ";" | decl | assign | if | while | block
//! block     := "{" stmt* "}"
//! decl      := type IDENT ("=" arith)? ";"
//! type      := "int" | "bool"
//! assign    := IDENT ("=" arith | "*=" arith | "+=" arith | "-=" arith | "++" | "--") ";"
//! if        := "if" "(" pred ")" stmt ("else" stmt)?
//! while     := "while" "(" pred ")" stmt
//! ```
//!
//! Sequences nest to the right, `int a = e;` is a declaration followed by an
//! assignment, and the compound assignments are sugar for plain ones.

mod lexer;
mod parser;

use std::collections::HashSet;
use std::fmt;

use crate::predicates::{ArithExpr, PredExpr};
use crate::Error;

use parser::Parser;

/// Byte range plus 1-based line/column of its start.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    /// Smallest span covering `self` and `other`; position taken from the earlier one.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        let (first, _) = if self.start <= other.start { (self, other) } else { (other, self) };
        SourceSpan {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
            line: first.line,
            column: first.column,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarType {
    Int,
    Bool,
}

impl VarType {
    pub fn keyword(self) -> &'static str {
        match self {
            VarType::Int => "int",
            VarType::Bool => "bool",
        }
    }
}

/// A statement with its source location. Equality ignores spans.
#[derive(Debug, Clone)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: SourceSpan,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Stmt {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Nop,
    Decl { var: String, ty: VarType },
    Assign { var: String, expr: ArithExpr },
    Seq(Box<Stmt>, Box<Stmt>),
    IfThenElse { cond: PredExpr, then: Box<Stmt>, els: Box<Stmt> },
    IfThen { cond: PredExpr, then: Box<Stmt> },
    While { cond: PredExpr, body: Box<Stmt> },
}

impl Stmt {
    pub fn new(kind: StmtKind, span: SourceSpan) -> Self {
        Stmt { kind, span }
    }

    fn bare(kind: StmtKind) -> Self {
        Stmt::new(kind, SourceSpan::default())
    }

    pub fn nop() -> Self {
        Stmt::bare(StmtKind::Nop)
    }

    pub fn decl(var: &str, ty: VarType) -> Self {
        Stmt::bare(StmtKind::Decl { var: var.into(), ty })
    }

    pub fn assign(var: &str, expr: ArithExpr) -> Self {
        Stmt::bare(StmtKind::Assign { var: var.into(), expr })
    }

    pub fn seq(first: Stmt, second: Stmt) -> Self {
        Stmt::bare(StmtKind::Seq(Box::new(first), Box::new(second)))
    }

    pub fn if_then_else(cond: PredExpr, then: Stmt, els: Stmt) -> Self {
        Stmt::bare(StmtKind::IfThenElse {
            cond,
            then: Box::new(then),
            els: Box::new(els),
        })
    }

    pub fn if_then(cond: PredExpr, then: Stmt) -> Self {
        Stmt::bare(StmtKind::IfThen {
            cond,
            then: Box::new(then),
        })
    }

    pub fn while_loop(cond: PredExpr, body: Stmt) -> Self {
        Stmt::bare(StmtKind::While {
            cond,
            body: Box::new(body),
        })
    }

    /// Declarations in program order, first occurrence per variable.
    pub fn declarations(&self) -> Vec<(&str, VarType)> {
        let mut out: Vec<(&str, VarType)> = Vec::new();
        self.walk(&mut |s| {
            if let StmtKind::Decl { var, ty } = &s.kind {
                if !out.iter().any(|(v, _)| v == var) {
                    out.push((var, *ty));
                }
            }
        });
        out
    }

    /// Every variable mentioned, in first-occurrence order.
    pub fn variables(&self) -> Vec<&str> {
        fn add<'a>(v: &'a str, out: &mut Vec<&'a str>) {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        let mut out: Vec<&str> = Vec::new();
        let mut stack = vec![self];
        while let Some(s) = stack.pop() {
            match &s.kind {
                StmtKind::Nop => {}
                StmtKind::Decl { var, .. } => add(var, &mut out),
                StmtKind::Assign { var, expr } => {
                    add(var, &mut out);
                    expr.variables().into_iter().for_each(|v| add(v, &mut out));
                }
                StmtKind::Seq(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                StmtKind::IfThenElse { cond, then, els } => {
                    cond.variables().into_iter().for_each(|v| add(v, &mut out));
                    stack.push(els);
                    stack.push(then);
                }
                StmtKind::IfThen { cond, then } => {
                    cond.variables().into_iter().for_each(|v| add(v, &mut out));
                    stack.push(then);
                }
                StmtKind::While { cond, body } => {
                    cond.variables().into_iter().for_each(|v| add(v, &mut out));
                    stack.push(body);
                }
            }
        }
        out
    }

    pub fn contains_loop(&self) -> bool {
        let mut found = false;
        self.walk(&mut |s| found |= matches!(s.kind, StmtKind::While { .. }));
        found
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Stmt)) {
        f(self);
        match &self.kind {
            StmtKind::Nop | StmtKind::Decl { .. } | StmtKind::Assign { .. } => {}
            StmtKind::Seq(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            StmtKind::IfThenElse { then, els, .. } => {
                then.walk(f);
                els.walk(f);
            }
            StmtKind::IfThen { then, .. } => then.walk(f),
            StmtKind::While { body, .. } => body.walk(f),
        }
    }
}

/// Parses a whole program; every variable must be declared before use.
pub fn parse_program(text: &str) -> Result<Stmt, Error> {
    parse_program_with_prelude(text, std::iter::empty::<&str>())
}

/// Like [`parse_program`], treating `prelude` variables as already declared.
pub fn parse_program_with_prelude<'a>(
    text: &str,
    prelude: impl IntoIterator<Item = &'a str>,
) -> Result<Stmt, Error> {
    let declared: HashSet<String> = prelude.into_iter().map(str::to_string).collect();
    let mut parser = Parser::new(text, Some(declared))?;
    let program = parser.program()?;
    parser.expect_eof()?;
    Ok(program)
}

/// Parses a standalone predicate. Variables are not checked here.
pub fn parse_pred(text: &str) -> Result<PredExpr, Error> {
    let mut parser = Parser::new(text, None)?;
    let p = parser.pred()?;
    parser.expect_eof()?;
    Ok(p)
}

pub fn parse_arith(text: &str) -> Result<ArithExpr, Error> {
    let mut parser = Parser::new(text, None)?;
    let e = parser.arith()?;
    parser.expect_eof()?;
    Ok(e)
}

/// Renders `stmt` so that [`parse_program`] gives back the same tree.
pub fn pretty_print(stmt: &Stmt) -> String {
    let mut lines = Vec::new();
    print_items(stmt, 0, &mut lines);
    lines.join("\n")
}

fn indent(level: usize) -> String {
    "    ".repeat(level)
}

/// Prints `stmt` as a list of statements; only a left-nested `Seq` needs braces.
fn print_items(stmt: &Stmt, level: usize, out: &mut Vec<String>) {
    match &stmt.kind {
        StmtKind::Seq(first, second) => {
            if matches!(first.kind, StmtKind::Seq(..)) {
                out.push(format!("{}{{", indent(level)));
                print_items(first, level + 1, out);
                out.push(format!("{}}}", indent(level)));
            } else {
                print_items(first, level, out);
            }
            print_items(second, level, out);
        }
        _ => print_single(stmt, level, out),
    }
}

fn print_block(body: &Stmt, level: usize, out: &mut Vec<String>, head: String) {
    out.push(format!("{head}{{"));
    print_items(body, level + 1, out);
    out.push(format!("{}}}", indent(level)));
}

fn print_single(stmt: &Stmt, level: usize, out: &mut Vec<String>) {
    let pad = indent(level);
    match &stmt.kind {
        StmtKind::Nop => out.push(format!("{pad};")),
        StmtKind::Decl { var, ty } => out.push(format!("{pad}{} {var};", ty.keyword())),
        StmtKind::Assign { var, expr } => out.push(format!("{pad}{var} = {expr};")),
        StmtKind::Seq(..) => print_items(stmt, level, out),
        StmtKind::IfThenElse { cond, then, els } => {
            print_block(then, level, out, format!("{pad}if ({cond}) "));
            let close = out.pop().expect("closing brace");
            print_block(els, level, out, format!("{close} else "));
        }
        StmtKind::IfThen { cond, then } => print_block(then, level, out, format!("{pad}if ({cond}) ")),
        StmtKind::While { cond, body } => print_block(body, level, out, format!("{pad}while ({cond}) ")),
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_print(self))
    }
}
