use crate::Error;

use super::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// Unsigned literal; negation is applied by the parser.
    Int(u64),
    KwInt,
    KwBool,
    KwIf,
    KwElse,
    KwWhile,
    KwTrue,
    KwFalse,
    KwInDomain,
    Semi,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Assign,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Bang,
    AndAnd,
    OrOr,
    Arrow,
    DoubleArrow,
    Plus,
    Minus,
    Star,
    StarAssign,
    PlusAssign,
    MinusAssign,
    PlusPlus,
    MinusMinus,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::KwInt => "int",
            Tok::KwBool => "bool",
            Tok::KwIf => "if",
            Tok::KwElse => "else",
            Tok::KwWhile => "while",
            Tok::KwTrue => "true",
            Tok::KwFalse => "false",
            Tok::KwInDomain => "in_domain",
            Tok::Semi => ";",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Assign => "=",
            Tok::EqEq => "==",
            Tok::NotEq => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Bang => "!",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
            Tok::Arrow => "->",
            Tok::DoubleArrow => "<->",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::StarAssign => "*=",
            Tok::PlusAssign => "+=",
            Tok::MinusAssign => "-=",
            Tok::PlusPlus => "++",
            Tok::MinusMinus => "--",
            Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

// Longest operators first.
const OPERATORS: &[(&str, Tok)] = &[
    ("<->", Tok::DoubleArrow),
    ("==", Tok::EqEq),
    ("!=", Tok::NotEq),
    ("<=", Tok::Le),
    (">=", Tok::Ge),
    ("&&", Tok::AndAnd),
    ("||", Tok::OrOr),
    ("->", Tok::Arrow),
    ("*=", Tok::StarAssign),
    ("+=", Tok::PlusAssign),
    ("-=", Tok::MinusAssign),
    ("++", Tok::PlusPlus),
    ("--", Tok::MinusMinus),
    (";", Tok::Semi),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("=", Tok::Assign),
    ("<", Tok::Lt),
    (">", Tok::Gt),
    ("!", Tok::Bang),
    ("+", Tok::Plus),
    ("-", Tok::Minus),
    ("*", Tok::Star),
];

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, Error> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let (mut pos, mut line, mut col) = (0usize, 1usize, 1usize);
    let span = |start: usize, end: usize, line: usize, column: usize| SourceSpan {
        start,
        end,
        line,
        column,
    };

    while pos < bytes.len() {
        let c = bytes[pos];
        if c == b'\n' {
            pos += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            pos += 1;
            col += 1;
            continue;
        }
        if text[pos..].starts_with("//") {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        if c.is_ascii_alphabetic() || c == b'_' {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            let word = &text[start..pos];
            let tok = match word {
                "int" => Tok::KwInt,
                "bool" => Tok::KwBool,
                "if" => Tok::KwIf,
                "else" => Tok::KwElse,
                "while" => Tok::KwWhile,
                "true" => Tok::KwTrue,
                "false" => Tok::KwFalse,
                "in_domain" => Tok::KwInDomain,
                _ => Tok::Ident(word.to_string()),
            };
            out.push(Token {
                tok,
                span: span(start, pos, line, col),
            });
            col += pos - start;
            continue;
        }
        if c.is_ascii_digit() {
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let s = span(start, pos, line, col);
            let value = text[start..pos].parse::<u64>().map_err(|_| Error::Syntax {
                span: s,
                message: format!("integer literal `{}` is too large", &text[start..pos]),
            })?;
            out.push(Token {
                tok: Tok::Int(value),
                span: s,
            });
            col += pos - start;
            continue;
        }
        let Some((op, tok)) = OPERATORS.iter().find(|(op, _)| text[pos..].starts_with(op)) else {
            let ch = text[pos..].chars().next().expect("non-empty remainder");
            return Err(Error::Syntax {
                span: span(start, start + ch.len_utf8(), line, col),
                message: format!("unexpected character `{ch}`"),
            });
        };
        pos += op.len();
        out.push(Token {
            tok: tok.clone(),
            span: span(start, pos, line, col),
        });
        col += op.len();
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(pos, pos, line, col),
    });
    Ok(out)
}
