//! Text formats for grammars and programs.
//!
//! Grammar files hold one production per line:
//!
//! ```text
//! # comment
//! exp  : exp "+" term
//! exp  : term
//! opt  :            # epsilon
//! ```
//!
//! Program files hold definitions such as
//!
//! ```text
//! fun f(x, y) = if x then y else f(y, x)
//! ```
//!
//! where `+` is left-associative and binds tighter than `if`.

use std::fmt;

use crate::analyses::{Definition, Elem, Expr, Grammar, Production, Program, ProgramError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Program(#[from] ProgramError),
}

pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut productions = Vec::new();
    let mut uses = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut lx = Lexer::new(line, line_no);
        let Some(first) = lx.next_token()? else {
            continue;
        };
        let Tok::Ident(lhs) = first.tok else {
            return err(line_no, first.col, "expected a nonterminal name");
        };
        match lx.next_token()? {
            Some(Spanned {
                tok: Tok::Colon, ..
            }) => {}
            Some(t) => return err(line_no, t.col, format!("expected `:`, found {}", t.tok)),
            None => return err(line_no, line.len() + 1, "expected `:`"),
        }
        let mut rhs = Vec::new();
        loop {
            match lx.next_token()? {
                None => break,
                Some(Spanned { tok: Tok::Semi, .. }) => {
                    if let Some(t) = lx.next_token()? {
                        return err(line_no, t.col, "unexpected input after `;`");
                    }
                    break;
                }
                Some(Spanned { tok: Tok::Bar, .. }) => {
                    productions.push(Production {
                        lhs: lhs.clone(),
                        rhs: std::mem::take(&mut rhs),
                    });
                }
                Some(Spanned {
                    tok: Tok::Ident(n),
                    col,
                }) => {
                    uses.push((n.clone(), line_no, col));
                    rhs.push(Elem::Nt(n));
                }
                Some(Spanned {
                    tok: Tok::Str(t), ..
                }) => rhs.push(Elem::Tm(t)),
                Some(t) => return err(line_no, t.col, format!("unexpected {}", t.tok)),
            }
        }
        productions.push(Production { lhs, rhs });
    }
    if productions.is_empty() {
        return err(1, 1, "no productions");
    }
    let g = Grammar { productions };
    let defined = g.nonterminals();
    if let Some((n, line, col)) = uses.into_iter().find(|(n, _, _)| !defined.contains(n)) {
        return err(line, col, format!("nonterminal `{n}` has no production"));
    }
    Ok(g)
}

pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    let mut toks = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut lx = Lexer::new(line, i + 1);
        while let Some(t) = lx.next_token()? {
            toks.push((t, i + 1));
        }
    }
    let end_line = text.lines().count().max(1);
    let mut p = Parser {
        toks,
        pos: 0,
        end: (end_line, text.lines().last().map_or(0, str::len) + 1),
    };
    let mut defs = Vec::new();
    while !p.at_end() {
        defs.push(p.definition()?);
    }
    if defs.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            msg: "no definitions".into(),
        }
        .into());
    }
    Ok(Program::new(defs)?)
}

/// Parses `name:b1,b2,...` with every bit 0 or 1.
pub fn parse_strict_query(text: &str) -> Result<(String, Vec<u64>), String> {
    let bad = || format!("malformed query `{text}`, expected name:b1,b2,... with bits 0 or 1");
    let (name, bits) = text.split_once(':').ok_or_else(bad)?;
    let name = name.trim();
    if name.is_empty() {
        return Err(bad());
    }
    let bits = bits.trim();
    if bits.is_empty() {
        return Ok((name.to_string(), Vec::new()));
    }
    let args = bits
        .split(',')
        .map(|b| match b.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            _ => Err(bad()),
        })
        .collect::<Result<_, _>>()?;
    Ok((name.to_string(), args))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Str(String),
    Colon,
    Semi,
    Bar,
    Comma,
    LParen,
    RParen,
    Plus,
    Eq,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Eq => f.write_str("`=`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Lexer {
            chars: text.char_indices().peekable(),
            line,
        }
    }

    fn next_token(&mut self) -> Result<Option<Spanned>, ParseError> {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
        let Some((at, c)) = self.chars.next() else {
            return Ok(None);
        };
        let col = at + 1;
        let tok = match c {
            '#' => {
                self.chars.by_ref().for_each(drop);
                return Ok(None);
            }
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            '|' => Tok::Bar,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '=' => Tok::Eq,
            '"' => Tok::Str(self.string(col)?),
            c if c.is_ascii_digit() => {
                let mut digits = c.to_string();
                while let Some((_, d)) = self.chars.next_if(|(_, d)| d.is_ascii_digit()) {
                    digits.push(d);
                }
                match digits.parse() {
                    Ok(n) => Tok::Int(n),
                    Err(_) => return err(self.line, col, "integer literal too large"),
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = c.to_string();
                while let Some((_, d)) = self
                    .chars
                    .next_if(|(_, d)| d.is_alphanumeric() || *d == '_' || *d == '\'')
                {
                    name.push(d);
                }
                Tok::Ident(name)
            }
            other => return err(self.line, col, format!("unexpected character `{other}`")),
        };
        Ok(Some(Spanned { tok, col }))
    }

    fn string(&mut self, col: usize) -> Result<String, ParseError> {
        let mut out = String::new();
        loop {
            match self.chars.next() {
                None => return err(self.line, col, "unterminated string"),
                Some((_, '"')) => return Ok(out),
                Some((at, '\\')) => match self.chars.next() {
                    Some((_, c @ ('"' | '\\'))) => out.push(c),
                    _ => return err(self.line, at + 1, "bad escape in string"),
                },
                Some((_, c)) => out.push(c),
            }
        }
    }
}

struct Parser {
    toks: Vec<(Spanned, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |(t, line)| (*line, t.col))
    }

    fn fail<T>(&self, msg: &str) -> Result<T, ParseError> {
        let (line, col) = self.here();
        match self.peek() {
            Some(t) => err(line, col, format!("{msg}, found {t}")),
            None => err(line, col, format!("{msg}, found end of input")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek().cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("expected {tok}"))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(&format!("expected `{kw}`")),
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail("expected a name"),
        }
    }

    fn definition(&mut self) -> Result<Definition, ParseError> {
        self.keyword("fun")?;
        let name = self.name()?;
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if self.peek() != Some(&Tok::RParen) {
            params.push(self.name()?);
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                params.push(self.name()?);
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Eq)?;
        let body = self.expr()?;
        Ok(Definition { name, params, body })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "if") {
            self.pos += 1;
            let c = self.expr()?;
            self.keyword("then")?;
            let t = self.expr()?;
            self.keyword("else")?;
            let f = self.expr()?;
            return Ok(Expr::Cond(Box::new(c), Box::new(t), Box::new(f)));
        }
        let mut e = self.atom()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            let rhs = self.atom()?;
            e = Expr::Add(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(Expr::Const(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(s)) if s == "if" => self.expr(),
            Some(Tok::Ident(_)) => {
                let name = self.name()?;
                if self.peek() != Some(&Tok::LParen) {
                    return Ok(Expr::Param(name));
                }
                self.bump();
                let mut args = Vec::new();
                if self.peek() != Some(&Tok::RParen) {
                    args.push(self.expr()?);
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                }
                self.expect(Tok::RParen)?;
                Ok(Expr::Call(name, args))
            }
            _ => self.fail("expected an expression"),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "fun" | "if" | "then" | "else")
}
