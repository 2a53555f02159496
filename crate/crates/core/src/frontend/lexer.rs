use crate::error::{Error, Result};

use super::term::is_symbol_char;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Name(String),
    /// A quoted atom; never read as an operator.
    Quoted(String),
    Var(String),
    Int(i64),
    Float(f64),
    Str(String),
    Open,
    Close,
    OpenList,
    CloseList,
    OpenCurly,
    CloseCurly,
    Comma,
    Bar,
    End,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Whitespace or a comment came right before this token.
    pub layout_before: bool,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    Lexer { chars: text.chars().collect(), pos: 0, line: 1, col: 1 }.run()
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    /// Skips layout and comments; true if anything was skipped.
    fn skip_layout(&mut self) -> Result<bool> {
        let start = self.pos;
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let (line, col) = (self.line, self.col);
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            Some('*') if self.peek() == Some('/') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                            None => return Err(Error::Syntax { line, col, msg: "unterminated block comment".into() }),
                        }
                    }
                }
                _ => return Ok(self.pos > start),
            }
        }
    }

    fn run(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        loop {
            let layout_before = self.skip_layout()? || out.is_empty();
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = self.token(c)?;
            out.push(Token { tok, line, col, layout_before });
        }
        Ok(out)
    }

    fn token(&mut self, c: char) -> Result<Tok> {
        if c.is_ascii_digit() {
            return self.number();
        }
        if c == '_' || c.is_ascii_uppercase() {
            return Ok(Tok::Var(self.word()));
        }
        if c.is_alphabetic() {
            return Ok(Tok::Name(self.word()));
        }
        match c {
            '(' => Ok(self.single(Tok::Open)),
            ')' => Ok(self.single(Tok::Close)),
            '[' => Ok(self.single(Tok::OpenList)),
            ']' => Ok(self.single(Tok::CloseList)),
            '{' => Ok(self.single(Tok::OpenCurly)),
            '}' => Ok(self.single(Tok::CloseCurly)),
            ',' => Ok(self.single(Tok::Comma)),
            '|' if self.peek_at(1) == Some('|') => {
                self.bump();
                self.bump();
                Ok(Tok::Name("||".into()))
            }
            '|' => Ok(self.single(Tok::Bar)),
            '!' => Ok(self.single(Tok::Name("!".into()))),
            ';' => Ok(self.single(Tok::Name(";".into()))),
            '\'' => Ok(Tok::Quoted(self.quoted('\'')?)),
            '"' => Ok(Tok::Str(self.quoted('"')?)),
            '.' if matches!(self.peek_at(1), None | Some('%')) || self.peek_at(1).is_some_and(char::is_whitespace) => {
                self.bump();
                Ok(Tok::End)
            }
            c if is_symbol_char(c) => {
                let mut s = String::new();
                while let Some(c) = self.peek().filter(|&c| is_symbol_char(c)) {
                    s.push(c);
                    self.bump();
                }
                Ok(Tok::Name(s))
            }
            other => Err(self.err(format!("unexpected character {other:?}"))),
        }
    }

    fn single(&mut self, t: Tok) -> Tok {
        self.bump();
        t
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek().filter(|&c| c.is_alphanumeric() || c == '_') {
            s.push(c);
            self.bump();
        }
        s
    }

    fn number(&mut self) -> Result<Tok> {
        if self.peek() == Some('0') && self.peek_at(1) == Some('\'') {
            self.bump();
            self.bump();
            let c = match self.bump() {
                Some('\\') => self.escape()?,
                Some('\'') if self.peek() == Some('\'') => {
                    self.bump();
                    '\''
                }
                Some(c) => c,
                None => return Err(self.err("unterminated character code")),
            };
            return Ok(Tok::Int(c as i64));
        }
        if self.peek() == Some('0') && matches!(self.peek_at(1), Some('x' | 'o' | 'b')) {
            let radix = match self.peek_at(1) {
                Some('x') => 16,
                Some('o') => 8,
                _ => 2,
            };
            if self.peek_at(2).is_some_and(|c| c.is_digit(radix)) {
                self.bump();
                self.bump();
                let mut s = String::new();
                while let Some(c) = self.peek().filter(|c| c.is_digit(radix)) {
                    s.push(c);
                    self.bump();
                }
                return i64::from_str_radix(&s, radix).map(Tok::Int).map_err(|e| self.err(e.to_string()));
            }
        }
        let mut s = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        let mut float = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            float = true;
            s.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let signed = matches!(self.peek_at(1), Some('+' | '-'));
            let digit_at = if signed { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                float = true;
                for _ in 0..digit_at {
                    s.push(self.bump().unwrap());
                }
                while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                    s.push(c);
                    self.bump();
                }
            }
        }
        if float {
            s.parse().map(Tok::Float).map_err(|_| self.err("bad float"))
        } else {
            s.parse().map(Tok::Int).map_err(|_| self.err("integer out of range"))
        }
    }

    fn escape(&mut self) -> Result<char> {
        Ok(match self.bump() {
            Some('n') => '\n',
            Some('t') => '\t',
            Some('r') => '\r',
            Some('a') => '\x07',
            Some('b') => '\x08',
            Some('f') => '\x0c',
            Some('v') => '\x0b',
            Some('0') => '\0',
            Some('e') => '\x1b',
            Some('s') => ' ',
            Some(c @ ('\\' | '\'' | '"' | '`')) => c,
            Some(c) => return Err(self.err(format!("unknown escape \\{c}"))),
            None => return Err(self.err("unterminated escape")),
        })
    }

    fn quoted(&mut self, q: char) -> Result<String> {
        let (line, col) = (self.line, self.col);
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(Error::Syntax { line, col, msg: "unterminated quoted text".into() }),
                Some(c) if c == q => {
                    if self.peek() == Some(q) {
                        self.bump();
                        s.push(q);
                    } else {
                        return Ok(s);
                    }
                }
                Some('\\') => {
                    if self.peek() == Some('\n') {
                        self.bump();
                        continue;
                    }
                    s.push(self.escape()?);
                }
                Some(c) => s.push(c),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn end_needs_layout() {
        assert_eq!(toks("a."), vec![Tok::Name("a".into()), Tok::End]);
        assert_eq!(toks("X =.. Y."), vec![Tok::Var("X".into()), Tok::Name("=..".into()), Tok::Var("Y".into()), Tok::End]);
        assert_eq!(toks("1.5e3"), vec![Tok::Float(1500.0)]);
        assert_eq!(toks("0'a 0x1F"), vec![Tok::Int(97), Tok::Int(31)]);
    }

    #[test]
    fn quoted_and_comments() {
        assert_eq!(toks("'it''s' % c\n /* x */ \"s\""), vec![Tok::Quoted("it's".into()), Tok::Str("s".into())]);
        assert!(tokenize("'open").is_err());
    }

    #[test]
    fn positions_are_tracked() {
        let t = tokenize("a :-\n  b").unwrap();
        assert_eq!((t[2].line, t[2].col), (2, 3));
    }
}
