//! Tokenizer for the specification surface syntax.

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Tok {
    // keywords
    Read,
    Write,
    If,
    Then,
    Else,
    Loop,
    Exit,
    Skip,
    Ints,
    Nats,
    Range,
    All,
    Curr,
    Len,
    Sum,
    Prod,
    Not,
    // literals and names
    Ident(String),
    Int(i64),
    /// A quoted output pattern, kept raw; splices are parsed later.
    Pattern(Vec<RawSegment>),
    // punctuation
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Colon,
    Comma,
    Pipe,
    Plus,
    Minus,
    Star,
    EqEq,
    SlashEq,
    Lt,
    Leq,
    Gt,
    Geq,
    AndAnd,
    OrOr,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier {name:?}"),
            Tok::Int(n) => format!("integer {n}"),
            Tok::Pattern(_) => "output pattern".to_string(),
            Tok::Read => "'read'".into(),
            Tok::Write => "'write'".into(),
            Tok::If => "'if'".into(),
            Tok::Then => "'then'".into(),
            Tok::Else => "'else'".into(),
            Tok::Loop => "'loop'".into(),
            Tok::Exit => "'exit'".into(),
            Tok::Skip => "'skip'".into(),
            Tok::Ints => "'ints'".into(),
            Tok::Nats => "'nats'".into(),
            Tok::Range => "'range'".into(),
            Tok::All => "'all'".into(),
            Tok::Curr => "'curr'".into(),
            Tok::Len => "'len'".into(),
            Tok::Sum => "'sum'".into(),
            Tok::Prod => "'prod'".into(),
            Tok::Not => "'not'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Colon => "':'".into(),
            Tok::Comma => "','".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::EqEq => "'=='".into(),
            Tok::SlashEq => "'/='".into(),
            Tok::Lt => "'<'".into(),
            Tok::Leq => "'<='".into(),
            Tok::Gt => "'>'".into(),
            Tok::Geq => "'>='".into(),
            Tok::AndAnd => "'&&'".into(),
            Tok::OrOr => "'||'".into(),
        }
    }
}

/// Segment of a quoted pattern as lexed: literal text, or the raw source of
/// a `{...}` splice together with the position of its first character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum RawSegment {
    Text(String),
    Splice { src: String, line: u32, col: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) struct Spanned {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

pub(super) struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    pub(super) fn new(src: &'a str) -> Lexer<'a> {
        Lexer::with_offset(src, 1, 1)
    }

    /// Lexer starting at a given source position, used to tokenize splice
    /// bodies with correct error locations.
    pub(super) fn with_offset(src: &'a str, line: u32, col: u32) -> Lexer<'a> {
        Lexer {
            chars: src.chars().peekable(),
            line,
            col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col,
            message: message.into(),
            expected: vec![],
        }
    }

    pub(super) fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(&c) = self.chars.peek() else {
                return Ok(out);
            };
            let tok = match c {
                '{' => {
                    self.bump();
                    Tok::LBrace
                }
                '}' => {
                    self.bump();
                    Tok::RBrace
                }
                '[' => {
                    self.bump();
                    Tok::LBracket
                }
                ']' => {
                    self.bump();
                    Tok::RBracket
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                ':' => {
                    self.bump();
                    Tok::Colon
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '+' => {
                    self.bump();
                    Tok::Plus
                }
                '-' => {
                    self.bump();
                    Tok::Minus
                }
                '*' => {
                    self.bump();
                    Tok::Star
                }
                '=' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::EqEq
                    } else {
                        return Err(self.error("'=' is not an operator; did you mean '=='?"));
                    }
                }
                '/' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::SlashEq
                    } else {
                        return Err(self.error("'/' is not an operator; did you mean '/='?"));
                    }
                }
                '<' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::Leq
                    } else {
                        Tok::Lt
                    }
                }
                '>' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::Geq
                    } else {
                        Tok::Gt
                    }
                }
                '&' => {
                    self.bump();
                    if self.chars.peek() == Some(&'&') {
                        self.bump();
                        Tok::AndAnd
                    } else {
                        return Err(self.error("single '&'; did you mean '&&'?"));
                    }
                }
                '|' => {
                    self.bump();
                    if self.chars.peek() == Some(&'|') {
                        self.bump();
                        Tok::OrOr
                    } else {
                        Tok::Pipe
                    }
                }
                '"' => {
                    self.bump();
                    self.lex_pattern()?
                }
                c if c.is_ascii_digit() => self.lex_int()?,
                c if c.is_ascii_alphabetic() => self.lex_word(),
                other => {
                    return Err(self.error(format!("unexpected character {other:?}")));
                }
            };
            out.push(Spanned { tok, line, col });
        }
    }

    fn lex_int(&mut self) -> Result<Tok, ParseError> {
        let mut digits = String::new();
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        digits
            .parse::<i64>()
            .map(Tok::Int)
            .map_err(|_| self.error(format!("integer literal {digits} out of range")))
    }

    fn lex_word(&mut self) -> Tok {
        let mut word = String::new();
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_alphanumeric() || *c == '_') {
            word.push(self.bump().unwrap());
        }
        match word.as_str() {
            "read" => Tok::Read,
            "write" => Tok::Write,
            "if" => Tok::If,
            "then" => Tok::Then,
            "else" => Tok::Else,
            "loop" => Tok::Loop,
            "exit" => Tok::Exit,
            "skip" => Tok::Skip,
            "ints" => Tok::Ints,
            "nats" => Tok::Nats,
            "range" => Tok::Range,
            "all" => Tok::All,
            "curr" => Tok::Curr,
            "len" => Tok::Len,
            "sum" => Tok::Sum,
            "prod" => Tok::Prod,
            "not" => Tok::Not,
            _ => Tok::Ident(word),
        }
    }

    /// Lexes the body of a quoted pattern. Inside the quotes, `{`...`}`
    /// delimits a splice (no nesting, no escapes); newlines and stray `}`
    /// are errors.
    fn lex_pattern(&mut self) -> Result<Tok, ParseError> {
        let mut segments = Vec::new();
        let mut text = String::new();
        loop {
            match self.chars.peek() {
                None => return Err(self.error("unterminated output pattern")),
                Some('\n') => return Err(self.error("newline inside output pattern")),
                Some('"') => {
                    self.bump();
                    break;
                }
                Some('}') => return Err(self.error("'}' outside a splice in output pattern")),
                Some('{') => {
                    self.bump();
                    if !text.is_empty() {
                        segments.push(RawSegment::Text(std::mem::take(&mut text)));
                    }
                    let (line, col) = (self.line, self.col);
                    let mut src = String::new();
                    loop {
                        match self.chars.peek() {
                            None => return Err(self.error("unterminated splice")),
                            Some('\n') => return Err(self.error("newline inside output pattern")),
                            Some('{') => return Err(self.error("nested '{' inside splice")),
                            Some('}') => {
                                self.bump();
                                break;
                            }
                            Some(_) => src.push(self.bump().unwrap()),
                        }
                    }
                    segments.push(RawSegment::Splice { src, line, col });
                }
                Some(_) => text.push(self.bump().unwrap()),
            }
        }
        if !text.is_empty() {
            segments.push(RawSegment::Text(text));
        }
        Ok(Tok::Pattern(segments))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        Lexer::new(src)
            .tokenize()
            .unwrap()
            .into_iter()
            .map(|s| s.tok)
            .collect()
    }

    #[test]
    fn keywords_and_idents() {
        assert_eq!(
            toks("read n : nats"),
            vec![Tok::Read, Tok::Ident("n".into()), Tok::Colon, Tok::Nats]
        );
    }

    #[test]
    fn operators() {
        assert_eq!(
            toks("== /= <= < || | &&"),
            vec![
                Tok::EqEq,
                Tok::SlashEq,
                Tok::Leq,
                Tok::Lt,
                Tok::OrOr,
                Tok::Pipe,
                Tok::AndAnd
            ]
        );
    }

    #[test]
    fn pattern_with_splice() {
        let ts = toks("\"sum={sum(all(x))}!\"");
        assert_eq!(ts.len(), 1);
        match &ts[0] {
            Tok::Pattern(segs) => {
                assert_eq!(segs.len(), 3);
                assert_eq!(segs[0], RawSegment::Text("sum=".into()));
                assert!(matches!(&segs[1], RawSegment::Splice { src, .. } if src == "sum(all(x))"));
                assert_eq!(segs[2], RawSegment::Text("!".into()));
            }
            other => panic!("unexpected token {other:?}"),
        }
    }

    #[test]
    fn positions_are_tracked() {
        let spanned = Lexer::new("read n\nloop {").tokenize().unwrap();
        assert_eq!((spanned[2].line, spanned[2].col), (2, 1));
        assert_eq!((spanned[3].line, spanned[3].col), (2, 6));
    }

    #[test]
    fn lex_errors() {
        assert!(Lexer::new("read ; x").tokenize().is_err());
        assert!(Lexer::new("\"unterminated").tokenize().is_err());
        assert!(Lexer::new("\"stray } brace\"").tokenize().is_err());
    }
}
