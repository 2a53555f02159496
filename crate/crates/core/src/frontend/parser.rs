//! Operator precedence parser over the fixed table in [`super::ops`].

use crate::error::{Error, Result};

use super::lexer::{tokenize, Tok, Token};
use super::ops::{infix_op, prefix_op, Assoc};
use super::term::Term;

#[derive(Clone, Debug, PartialEq)]
pub struct SourceClause {
    pub head: Term,
    pub body: Option<Term>,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SourceProgram {
    pub clauses: Vec<SourceClause>,
    pub directives: Vec<(Term, usize)>,
}

pub fn parse(text: &str) -> Result<SourceProgram> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, anon: 0 };
    let mut prog = SourceProgram::default();
    while p.pos < p.tokens.len() {
        let line = p.tokens[p.pos].line;
        let t = p.parse(1200)?.0;
        p.expect(&Tok::End, "expected '.' at end of clause")?;
        match t {
            Term::Compound(ref n, ref a) if n == ":-" && a.len() == 1 => prog.directives.push((a[0].clone(), line)),
            Term::Compound(ref n, ref a) if n == "?-" && a.len() == 1 => prog.directives.push((a[0].clone(), line)),
            Term::Compound(n, mut a) if n == ":-" && a.len() == 2 => {
                let body = a.pop();
                let head = a.pop().unwrap();
                check_head(&head, line)?;
                prog.clauses.push(SourceClause { head, body, line });
            }
            Term::Compound(n, _) if n == "-->" => {
                return Err(Error::Syntax { line, col: 1, msg: "grammar rules are not supported".into() })
            }
            head => {
                check_head(&head, line)?;
                prog.clauses.push(SourceClause { head, body: None, line });
            }
        }
    }
    Ok(prog)
}

/// Parses a single term, with or without a final '.'.
pub fn parse_term(text: &str) -> Result<Term> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, anon: 0 };
    let t = p.parse(1200)?.0;
    if p.peek() == Some(&Tok::End) {
        p.pos += 1;
    }
    if p.pos < p.tokens.len() {
        return Err(p.err_here("unexpected text after term"));
    }
    Ok(t)
}

fn check_head(head: &Term, line: usize) -> Result<()> {
    match head {
        Term::Atom(_) | Term::Compound(..) => Ok(()),
        _ => Err(Error::Syntax { line, col: 1, msg: format!("clause head {head} is not callable") }),
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    anon: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_token(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn err_here(&self, msg: &str) -> Error {
        match self.tokens.get(self.pos).or(self.tokens.last()) {
            Some(t) => Error::Syntax { line: t.line, col: t.col, msg: msg.into() },
            None => Error::Syntax { line: 1, col: 1, msg: msg.into() },
        }
    }

    fn expect(&mut self, t: &Tok, msg: &str) -> Result<()> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_here(msg))
        }
    }

    /// True if the next token can begin a term.
    fn starts_term(&self) -> bool {
        match self.peek() {
            None => false,
            Some(Tok::Name(n)) => infix_op(n).is_none() || prefix_op(n).is_some() || self.next_is_open(),
            Some(Tok::Close | Tok::CloseList | Tok::CloseCurly | Tok::Comma | Tok::Bar | Tok::End) => false,
            _ => true,
        }
    }

    fn next_is_open(&self) -> bool {
        matches!(self.tokens.get(self.pos + 1), Some(Token { tok: Tok::Open, layout_before: false, .. }))
    }

    fn parse(&mut self, max: u32) -> Result<(Term, u32)> {
        let (mut left, mut left_prec) = self.primary(max)?;
        loop {
            let name = match self.peek() {
                Some(Tok::Name(n)) => n.clone(),
                Some(Tok::Comma) => ",".to_string(),
                Some(Tok::Bar) => "|".to_string(),
                _ => break,
            };
            let Some((p, assoc)) = infix_op(&name) else { break };
            let (lmax, rmax) = match assoc {
                Assoc::Xfx => (p - 1, p - 1),
                Assoc::Xfy => (p - 1, p),
                Assoc::Yfx => (p, p - 1),
                _ => unreachable!(),
            };
            if p > max || left_prec > lmax {
                break;
            }
            self.pos += 1;
            let (right, _) = self.parse(rmax)?;
            let name = if name == "|" { ";".to_string() } else { name };
            left = Term::Compound(name, vec![left, right]);
            left_prec = p;
        }
        Ok((left, left_prec))
    }

    fn primary(&mut self, max: u32) -> Result<(Term, u32)> {
        let Some(tok) = self.peek_token().cloned() else {
            return Err(self.err_here("unexpected end of input"));
        };
        self.pos += 1;
        match tok.tok {
            Tok::Int(i) => Ok((Term::Int(i), 0)),
            Tok::Float(x) => Ok((Term::Float(x), 0)),
            Tok::Str(s) => Ok((Term::Str(s), 0)),
            Tok::Var(v) => {
                if v == "_" {
                    self.anon += 1;
                    Ok((Term::Var(format!("_G{}", self.anon)), 0))
                } else {
                    Ok((Term::Var(v), 0))
                }
            }
            Tok::Open => {
                let (t, _) = self.parse(1200)?;
                self.expect(&Tok::Close, "expected ')'")?;
                Ok((t, 0))
            }
            Tok::OpenList => {
                if self.peek() == Some(&Tok::CloseList) {
                    self.pos += 1;
                    return self.after_name("[]".into(), max, false);
                }
                let mut items = vec![self.parse(999)?.0];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    items.push(self.parse(999)?.0);
                }
                let tail = if self.peek() == Some(&Tok::Bar) {
                    self.pos += 1;
                    self.parse(999)?.0
                } else {
                    Term::atom("[]")
                };
                self.expect(&Tok::CloseList, "expected ']' or ','")?;
                Ok((Term::list(items, tail), 0))
            }
            Tok::OpenCurly => {
                if self.peek() == Some(&Tok::CloseCurly) {
                    self.pos += 1;
                    return self.after_name("{}".into(), max, false);
                }
                let (t, _) = self.parse(1200)?;
                self.expect(&Tok::CloseCurly, "expected '}'")?;
                Ok((Term::Compound("{}".into(), vec![t]), 0))
            }
            Tok::Name(n) => self.after_name(n, max, true),
            Tok::Quoted(n) => self.after_name(n, max, false),
            Tok::Close | Tok::CloseList | Tok::CloseCurly | Tok::Comma | Tok::Bar | Tok::End => {
                self.pos -= 1;
                Err(self.err_here("unexpected token"))
            }
        }
    }

    fn after_name(&mut self, name: String, max: u32, operator: bool) -> Result<(Term, u32)> {
        if self.peek() == Some(&Tok::Open) && !self.peek_token().unwrap().layout_before {
            self.pos += 1;
            let mut args = vec![self.parse(999)?.0];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.parse(999)?.0);
            }
            self.expect(&Tok::Close, "expected ')' or ','")?;
            return Ok((Term::Compound(name, args), 0));
        }
        if operator && name == "-" {
            if let Some(Token { tok, layout_before: false, .. }) = self.peek_token() {
                match *tok {
                    Tok::Int(i) => {
                        self.pos += 1;
                        return Ok((Term::Int(-i), 0));
                    }
                    Tok::Float(x) => {
                        self.pos += 1;
                        return Ok((Term::Float(-x), 0));
                    }
                    _ => {}
                }
            }
        }
        if operator {
            if let Some((p, assoc)) = prefix_op(&name) {
                if self.starts_term() {
                    let p = p.min(max.max(999));
                    let amax = if assoc == Assoc::Fy { p } else { p - 1 };
                    let (arg, _) = self.parse(amax)?;
                    return Ok((Term::Compound(name, vec![arg]), p));
                }
            }
        }
        Ok((Term::Atom(name), 0))
    }
}
