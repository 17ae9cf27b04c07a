//! Recursive-descent parser for statements, predicates and arithmetic.

use std::collections::HashSet;

use crate::predicates::{ArithExpr, CmpOp, PredExpr};
use crate::Error;

use super::lexer::{tokenize, Tok, Token};
use super::{SourceSpan, Stmt, StmtKind, VarType};

pub(crate) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// `None` disables the declared-before-use check (bare expressions).
    declared: Option<HashSet<String>>,
}

type PResult<T> = Result<T, Error>;

impl Parser {
    pub(crate) fn new(text: &str, declared: Option<HashSet<String>>) -> PResult<Self> {
        Ok(Parser {
            tokens: tokenize(text)?,
            pos: 0,
            declared,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(Error::Syntax {
            span: self.span(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<SourceSpan> {
        if self.peek() == &tok {
            let span = self.span();
            self.bump();
            Ok(span)
        } else {
            self.error(&tok.describe())
        }
    }

    fn ident(&mut self) -> PResult<(String, SourceSpan)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.span();
                self.bump();
                Ok((name, span))
            }
            _ => self.error("identifier"),
        }
    }

    fn use_var(&self, name: &str, span: SourceSpan) -> PResult<()> {
        match &self.declared {
            Some(set) if !set.contains(name) => Err(Error::UndeclaredVariable {
                name: name.to_string(),
                span,
            }),
            _ => Ok(()),
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        self.peek() == &Tok::Eof
    }

    pub(crate) fn expect_eof(&self) -> PResult<()> {
        if self.at_eof() {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    // ---- statements ----

    pub(crate) fn program(&mut self) -> PResult<Stmt> {
        let start = self.span();
        let mut items = Vec::new();
        while !self.at_eof() {
            items.extend(self.stmt()?);
        }
        Ok(sequence(items, start.to(self.span())))
    }

    /// One source statement; `int a = e;` yields two items.
    fn stmt(&mut self) -> PResult<Vec<Stmt>> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Semi => {
                self.bump();
                Ok(vec![Stmt::new(StmtKind::Nop, start)])
            }
            Tok::LBrace => {
                self.bump();
                let mut items = Vec::new();
                while self.peek() != &Tok::RBrace {
                    if self.at_eof() {
                        return self.error("`}`");
                    }
                    items.extend(self.stmt()?);
                }
                let end = self.expect(Tok::RBrace)?;
                Ok(vec![sequence(items, start.to(end))])
            }
            Tok::KwInt | Tok::KwBool => {
                let ty = if self.bump().tok == Tok::KwInt { VarType::Int } else { VarType::Bool };
                let (var, var_span) = self.ident()?;
                if let Some(set) = &mut self.declared {
                    set.insert(var.clone());
                }
                let decl_end = var_span;
                if self.eat(&Tok::Assign) {
                    let init_start = self.prev_span();
                    let expr = self.arith()?;
                    let end = self.expect(Tok::Semi)?;
                    Ok(vec![
                        Stmt::new(StmtKind::Decl { var: var.clone(), ty }, start.to(decl_end)),
                        Stmt::new(StmtKind::Assign { var, expr }, var_span.to(init_start).to(end)),
                    ])
                } else {
                    let end = self.expect(Tok::Semi)?;
                    Ok(vec![Stmt::new(StmtKind::Decl { var, ty }, start.to(end))])
                }
            }
            Tok::KwIf => {
                self.bump();
                self.expect(Tok::LParen)?;
                let cond = self.pred()?;
                self.expect(Tok::RParen)?;
                let then = self.single_stmt()?;
                if self.eat(&Tok::KwElse) {
                    let els = self.single_stmt()?;
                    let span = start.to(els.span);
                    Ok(vec![Stmt::new(
                        StmtKind::IfThenElse {
                            cond,
                            then: Box::new(then),
                            els: Box::new(els),
                        },
                        span,
                    )])
                } else {
                    let span = start.to(then.span);
                    Ok(vec![Stmt::new(
                        StmtKind::IfThen {
                            cond,
                            then: Box::new(then),
                        },
                        span,
                    )])
                }
            }
            Tok::KwWhile => {
                self.bump();
                self.expect(Tok::LParen)?;
                let cond = self.pred()?;
                self.expect(Tok::RParen)?;
                let body = self.single_stmt()?;
                let span = start.to(body.span);
                Ok(vec![Stmt::new(
                    StmtKind::While {
                        cond,
                        body: Box::new(body),
                    },
                    span,
                )])
            }
            Tok::Ident(var) => {
                self.bump();
                self.use_var(&var, start)?;
                let target = ArithExpr::Var(var.clone());
                let op = self.peek().clone();
                if !matches!(
                    op,
                    Tok::Assign | Tok::StarAssign | Tok::PlusAssign | Tok::MinusAssign | Tok::PlusPlus | Tok::MinusMinus
                ) {
                    return self.error("`=`, `*=`, `+=`, `-=`, `++` or `--`");
                }
                self.bump();
                let expr = match op {
                    Tok::Assign => self.arith()?,
                    Tok::StarAssign => target.mul(self.arith()?),
                    Tok::PlusAssign => target.add(self.arith()?),
                    Tok::MinusAssign => target.sub(self.arith()?),
                    Tok::PlusPlus => target.add(ArithExpr::Const(1)),
                    Tok::MinusMinus => target.sub(ArithExpr::Const(1)),
                    _ => unreachable!("operator checked above"),
                };
                let end = self.expect(Tok::Semi)?;
                Ok(vec![Stmt::new(StmtKind::Assign { var, expr }, start.to(end))])
            }
            _ => self.error("statement"),
        }
    }

    fn single_stmt(&mut self) -> PResult<Stmt> {
        let start = self.span();
        let items = self.stmt()?;
        let end = self.prev_span();
        Ok(sequence(items, start.to(end)))
    }

    // ---- predicates ----

    pub(crate) fn pred(&mut self) -> PResult<PredExpr> {
        let lhs = self.implies()?;
        self.iff_tail(lhs)
    }

    fn iff_tail(&mut self, mut lhs: PredExpr) -> PResult<PredExpr> {
        while self.eat(&Tok::DoubleArrow) {
            let rhs = self.implies()?;
            lhs = lhs.iff(rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> PResult<PredExpr> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implies()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> PResult<PredExpr> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::OrOr) {
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<PredExpr> {
        let mut lhs = self.unary_pred()?;
        while self.eat(&Tok::AndAnd) {
            lhs = lhs.and(self.unary_pred()?);
        }
        Ok(lhs)
    }

    fn unary_pred(&mut self) -> PResult<PredExpr> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(PredExpr::not(self.unary_pred()?))
            }
            Tok::KwTrue => {
                self.bump();
                Ok(PredExpr::True)
            }
            Tok::KwFalse => {
                self.bump();
                Ok(PredExpr::False)
            }
            Tok::KwInDomain => {
                self.bump();
                self.expect(Tok::LParen)?;
                let (var, span) = self.ident()?;
                self.use_var(&var, span)?;
                self.expect(Tok::RParen)?;
                Ok(PredExpr::InDomain(var))
            }
            _ => self.comparison_or_group(),
        }
    }

    /// `arith cmp arith`, or a parenthesized predicate. A leading `(` is
    /// ambiguous, so the comparison is tried first and the group second.
    fn comparison_or_group(&mut self) -> PResult<PredExpr> {
        let save = self.pos;
        let first = self.comparison();
        match first {
            Ok(p) => Ok(p),
            Err(err) => {
                if self.tokens[save].tok != Tok::LParen {
                    return Err(err);
                }
                let reached = self.pos;
                self.pos = save;
                self.bump();
                match self.pred().and_then(|p| self.expect(Tok::RParen).map(|_| p)) {
                    Ok(p) => Ok(p),
                    Err(err2) => {
                        // Report whichever attempt got further.
                        if self.pos >= reached {
                            Err(err2)
                        } else {
                            Err(err)
                        }
                    }
                }
            }
        }
    }

    fn comparison(&mut self) -> PResult<PredExpr> {
        let lhs = self.arith()?;
        let op = match self.peek() {
            Tok::EqEq => CmpOp::Eq,
            Tok::NotEq => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return self.error("comparison operator"),
        };
        self.bump();
        let rhs = self.arith()?;
        Ok(PredExpr::Cmp(op, lhs, rhs))
    }

    // ---- arithmetic ----

    pub(crate) fn arith(&mut self) -> PResult<ArithExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = lhs.add(self.term()?);
            } else if self.eat(&Tok::Minus) {
                lhs = lhs.sub(self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<ArithExpr> {
        let mut lhs = self.factor()?;
        while self.eat(&Tok::Star) {
            lhs = lhs.mul(self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> PResult<ArithExpr> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                i64::try_from(n).map(ArithExpr::Const).map_err(|_| Error::Syntax {
                    span,
                    message: format!("integer literal {n} does not fit in 64 bits"),
                })
            }
            Tok::Ident(name) => {
                self.bump();
                self.use_var(&name, span)?;
                Ok(ArithExpr::Var(name))
            }
            Tok::Minus => {
                self.bump();
                // `-5` is a literal; `-x`, `-(e)` are negations.
                if let Tok::Int(n) = *self.peek() {
                    self.bump();
                    return if n <= i64::MAX as u64 + 1 {
                        Ok(ArithExpr::Const((n as i128).wrapping_neg() as i64))
                    } else {
                        Err(Error::Syntax {
                            span: span.to(self.prev_span()),
                            message: format!("integer literal -{n} does not fit in 64 bits"),
                        })
                    };
                }
                Ok(ArithExpr::Neg(Box::new(self.factor()?)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.arith()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => self.error("arithmetic expression"),
        }
    }
}

/// Right-nests `items`: `[s1, s2, s3]` becomes `Seq(s1, Seq(s2, s3))`.
fn sequence(mut items: Vec<Stmt>, span: SourceSpan) -> Stmt {
    match items.len() {
        0 => Stmt::new(StmtKind::Nop, span),
        1 => items.pop().expect("one item"),
        _ => {
            let mut iter = items.into_iter().rev();
            let mut acc = iter.next().expect("non-empty");
            for s in iter {
                let span = s.span.to(acc.span);
                acc = Stmt::new(StmtKind::Seq(Box::new(s), Box::new(acc)), span);
            }
            acc
        }
    }
}
