//! Python tokenizer.
//!
//! Produces the same token classes as CPython's `tokenize` module (NAME,
//! NUMBER, STRING, OP, NEWLINE, NL, COMMENT, INDENT, DEDENT, ENDMARKER).
//! The raw line counter drives it over stripped line buffers with
//! indentation tracking off; the parser drives it over whole sources.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawKind {
    Name,
    Number,
    String,
    Op,
    Newline,
    Nl,
    Comment,
    Indent,
    Dedent,
    EndMarker,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub kind: RawKind,
    /// Byte range into the tokenized text.
    pub start: usize,
    pub end: usize,
    /// 1-based line of the first character.
    pub line: u32,
    /// 1-based column (in characters) of the first character.
    pub col: u32,
    pub end_line: u32,
}

impl RawToken {
    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        &src[self.start..self.end]
    }
}

/// How tokenization ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completion {
    Complete,
    EofInString,
    EofInStatement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scan {
    pub tokens: Vec<RawToken>,
    pub completion: Completion,
}

impl Scan {
    pub fn has_error(&self) -> bool {
        self.tokens.iter().any(|t| t.kind == RawKind::Error)
    }
}

/// Tokenization failure with its source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for LexError {}

const OPERATORS_3: [&str; 5] = ["**=", "//=", ">>=", "<<=", "..."];
const OPERATORS_2: [&str; 19] = [
    "**", "//", ">>", "<<", "<=", ">=", "==", "!=", "->", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=", "@=", ":=",
];
const OPERATORS_1: &str = "+-*/%@&|^~<>()[]{},:;.=";

pub(crate) fn is_string_prefix(s: &str) -> bool {
    matches!(
        s.to_ascii_lowercase().as_str(),
        "r" | "u" | "f" | "b" | "br" | "rb" | "fr" | "rf"
    )
}

fn is_name_start(c: char) -> bool {
    c == '_' || c.is_alphabetic()
}

fn is_name_continue(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    line_start: usize,
    depth: usize,
    indents: Vec<u32>,
    track_indent: bool,
    tokens: Vec<RawToken>,
    /// Whether the current logical line has produced a non-layout token.
    line_has_content: bool,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(offset)
    }

    fn col_of(&self, pos: usize) -> u32 {
        self.src[self.line_start..pos].chars().count() as u32 + 1
    }

    fn push(&mut self, kind: RawKind, start: usize, start_line: u32, start_col: u32) {
        self.tokens.push(RawToken {
            kind,
            start,
            end: self.pos,
            line: start_line,
            col: start_col,
            end_line: self.line,
        });
    }

    fn newline_len(&self) -> usize {
        let rest = &self.src.as_bytes()[self.pos..];
        match rest {
            [b'\r', b'\n', ..] => 2,
            [b'\n', ..] | [b'\r', ..] => 1,
            _ => 0,
        }
    }

    fn advance_newline(&mut self) {
        let n = self.newline_len();
        self.pos += n;
        self.line += 1;
        self.line_start = self.pos;
    }

    fn run(mut self) -> Result<Scan, LexError> {
        let mut at_line_start = true;
        loop {
            if at_line_start && self.depth == 0 {
                at_line_start = false;
                if let Some(done) = self.line_start_indent()? {
                    if done {
                        break;
                    }
                    at_line_start = true;
                    continue;
                }
            }
            let Some(c) = self.peek() else { break };
            let start = self.pos;
            let (sl, sc) = (self.line, self.col_of(start));
            match c {
                ' ' | '\t' | '\x0c' => self.pos += 1,
                '\n' | '\r' => {
                    let kind = if self.depth > 0 || !self.line_has_content {
                        RawKind::Nl
                    } else {
                        RawKind::Newline
                    };
                    let n = self.newline_len();
                    self.pos += n;
                    self.push(kind, start, sl, sc);
                    self.line += 1;
                    self.line_start = self.pos;
                    if let Some(t) = self.tokens.last_mut() {
                        t.end_line = sl;
                    }
                    if self.depth == 0 {
                        self.line_has_content = false;
                        at_line_start = true;
                    }
                }
                '#' => {
                    while let Some(c) = self.peek() {
                        if c == '\n' || c == '\r' {
                            break;
                        }
                        self.pos += c.len_utf8();
                    }
                    self.push(RawKind::Comment, start, sl, sc);
                }
                '\\' => {
                    self.pos += 1;
                    if self.newline_len() > 0 {
                        self.advance_newline();
                    } else if self.pos >= self.src.len() {
                        self.push(RawKind::Error, start, sl, sc);
                        return Ok(self.finish(Completion::EofInStatement));
                    } else {
                        self.push(RawKind::Error, start, sl, sc);
                    }
                }
                '\'' | '"' => {
                    if let Some(done) = self.string(start, sl, sc) {
                        return Ok(self.finish(done));
                    }
                }
                c if c.is_ascii_digit() || (c == '.' && matches!(self.peek_at(1), Some(d) if d.is_ascii_digit())) => {
                    self.number();
                    self.line_has_content = true;
                    self.push(RawKind::Number, start, sl, sc);
                }
                c if is_name_start(c) => {
                    while let Some(c) = self.peek() {
                        if !is_name_continue(c) {
                            break;
                        }
                        self.pos += c.len_utf8();
                    }
                    if is_string_prefix(&self.src[start..self.pos]) && matches!(self.peek(), Some('\'' | '"')) {
                        if let Some(done) = self.string(start, sl, sc) {
                            return Ok(self.finish(done));
                        }
                    } else {
                        self.line_has_content = true;
                        self.push(RawKind::Name, start, sl, sc);
                    }
                }
                _ => {
                    let rest = &self.src[self.pos..];
                    let len = OPERATORS_3
                        .iter()
                        .chain(OPERATORS_2.iter())
                        .find(|op| rest.starts_with(**op))
                        .map(|op| op.len())
                        .or_else(|| OPERATORS_1.contains(c).then_some(1));
                    self.line_has_content = true;
                    match len {
                        Some(len) => {
                            self.pos += len;
                            match c {
                                '(' | '[' | '{' => self.depth += 1,
                                ')' | ']' | '}' => self.depth = self.depth.saturating_sub(1),
                                _ => {}
                            }
                            self.push(RawKind::Op, start, sl, sc);
                        }
                        None => {
                            self.pos += c.len_utf8();
                            self.push(RawKind::Error, start, sl, sc);
                        }
                    }
                }
            }
        }
        if self.depth > 0 {
            return Ok(self.finish(Completion::EofInStatement));
        }
        Ok(self.finish(Completion::Complete))
    }

    /// Handles indentation at the start of a physical line. Returns
    /// `Some(true)` at end of input, `Some(false)` when the whole line was
    /// consumed as blank or comment-only, `None` to lex the line normally.
    fn line_start_indent(&mut self) -> Result<Option<bool>, LexError> {
        let mut col = 0u32;
        while let Some(c) = self.peek() {
            match c {
                ' ' => col += 1,
                '\t' => col = (col / 8 + 1) * 8,
                '\x0c' => col = 0,
                _ => break,
            }
            self.pos += 1;
        }
        match self.peek() {
            None => return Ok(Some(true)),
            Some('#') | Some('\n') | Some('\r') => {
                // blank or comment-only line: NL, no indentation change
                if self.peek() == Some('#') {
                    let start = self.pos;
                    let sc = self.col_of(start);
                    while let Some(c) = self.peek() {
                        if c == '\n' || c == '\r' {
                            break;
                        }
                        self.pos += c.len_utf8();
                    }
                    self.push(RawKind::Comment, start, self.line, sc);
                }
                let start = self.pos;
                let (sl, sc) = (self.line, self.col_of(start));
                if self.newline_len() > 0 {
                    self.pos += self.newline_len();
                    self.push(RawKind::Nl, start, sl, sc);
                    if let Some(t) = self.tokens.last_mut() {
                        t.end_line = sl;
                    }
                    self.line += 1;
                    self.line_start = self.pos;
                    return Ok(Some(false));
                }
                self.push(RawKind::Nl, start, sl, sc);
                return Ok(Some(true));
            }
            _ => {}
        }
        if !self.track_indent {
            return Ok(None);
        }
        let current = *self.indents.last().unwrap_or(&0);
        let (sl, start) = (self.line, self.pos);
        if col > current {
            self.indents.push(col);
            self.tokens.push(RawToken {
                kind: RawKind::Indent,
                start: self.line_start,
                end: start,
                line: sl,
                col: 1,
                end_line: sl,
            });
        } else {
            while col < *self.indents.last().unwrap_or(&0) {
                self.indents.pop();
                self.tokens.push(RawToken {
                    kind: RawKind::Dedent,
                    start,
                    end: start,
                    line: sl,
                    col: self.col_of(start),
                    end_line: sl,
                });
            }
            if col != *self.indents.last().unwrap_or(&0) {
                return Err(LexError {
                    line: sl,
                    column: self.col_of(start),
                    message: "unindent does not match any outer indentation level".into(),
                });
            }
        }
        Ok(None)
    }

    /// Lexes a string literal whose prefix (if any) starts at `start` and
    /// whose opening quote is at the current position. Returns the
    /// completion state when the input ends inside the literal.
    fn string(&mut self, start: usize, sl: u32, sc: u32) -> Option<Completion> {
        let quote = self.peek().expect("quote");
        let triple = self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote);
        let quote_pos = self.pos;
        self.pos += if triple { 3 } else { 1 };
        loop {
            let Some(c) = self.peek() else {
                if triple {
                    return Some(Completion::EofInString);
                }
                // unterminated single-quoted literal: the quote is an error token
                return self.unterminated(quote_pos, sl);
            };
            match c {
                '\\' => {
                    self.pos += 1;
                    if self.newline_len() > 0 {
                        self.advance_newline();
                        if !triple && self.pos >= self.src.len() {
                            return Some(Completion::EofInString);
                        }
                    } else if let Some(n) = self.peek() {
                        self.pos += n.len_utf8();
                    }
                }
                '\n' | '\r' => {
                    if !triple {
                        return self.unterminated(quote_pos, sl);
                    }
                    self.advance_newline();
                }
                c if c == quote => {
                    if !triple {
                        self.pos += 1;
                        break;
                    }
                    if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                        self.pos += 3;
                        break;
                    }
                    self.pos += 1;
                }
                c => self.pos += c.len_utf8(),
            }
        }
        self.line_has_content = true;
        self.push(RawKind::String, start, sl, sc);
        None
    }

    fn unterminated(&mut self, quote_pos: usize, sl: u32) -> Option<Completion> {
        self.line = sl;
        self.pos = quote_pos + 1;
        let sc = self.col_of(quote_pos);
        self.tokens.push(RawToken {
            kind: RawKind::Error,
            start: quote_pos,
            end: self.pos,
            line: sl,
            col: sc,
            end_line: sl,
        });
        None
    }

    fn digits(&mut self, radix: u32) {
        while let Some(c) = self.peek() {
            if c.is_digit(radix) || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) {
        let first = self.peek();
        if first == Some('0') && matches!(self.peek_at(1), Some('x' | 'X' | 'o' | 'O' | 'b' | 'B')) {
            let radix = match self.peek_at(1) {
                Some('x' | 'X') => 16,
                Some('o' | 'O') => 8,
                _ => 2,
            };
            self.pos += 2;
            self.digits(radix);
            return;
        }
        self.digits(10);
        if self.peek() == Some('.') {
            self.pos += 1;
            self.digits(10);
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                self.digits(10);
            } else {
                self.pos = save;
            }
        }
        if matches!(self.peek(), Some('j' | 'J')) {
            self.pos += 1;
        }
    }

    fn finish(mut self, completion: Completion) -> Scan {
        if completion == Completion::Complete {
            if self.line_has_content {
                let p = self.pos;
                let (l, c) = (self.line, self.col_of(p));
                self.push(RawKind::Newline, p, l, c);
            }
            let p = self.pos;
            let (l, c) = (self.line, self.col_of(p));
            while self.indents.last().is_some_and(|&i| i > 0) {
                self.indents.pop();
                self.push(RawKind::Dedent, p, l, c);
            }
            self.push(RawKind::EndMarker, p, l, c);
        }
        Scan {
            tokens: self.tokens,
            completion,
        }
    }
}

fn scan(src: &str, track_indent: bool) -> Result<Scan, LexError> {
    Lexer {
        src,
        pos: 0,
        line: 1,
        line_start: 0,
        depth: 0,
        indents: vec![0],
        track_indent,
        tokens: Vec::new(),
        line_has_content: false,
    }
    .run()
}

/// Tokenizes a buffer the way the raw line counter needs it: no
/// indentation tracking, problems reported as error tokens or an
/// incomplete [`Completion`] instead of failing.
pub fn scan_buffer(src: &str) -> Scan {
    scan(src, false).expect("indentation is not tracked")
}

/// Tokenizes a complete source text, failing on any lexical problem.
pub fn tokenize_source(src: &str) -> Result<Vec<RawToken>, LexError> {
    let scan = scan(src, true)?;
    if let Some(bad) = scan.tokens.iter().find(|t| t.kind == RawKind::Error) {
        let text = bad.text(src);
        let message = if text.starts_with(['\'', '"']) {
            "unterminated string literal".to_string()
        } else {
            format!("invalid character {text:?}")
        };
        return Err(LexError {
            line: bad.line,
            column: bad.col,
            message,
        });
    }
    let end = scan.tokens.last();
    let (line, column) = end.map_or((1, 1), |t| (t.end_line, t.col));
    match scan.completion {
        Completion::Complete => Ok(scan.tokens),
        Completion::EofInString => Err(LexError {
            line,
            column,
            message: "unterminated triple-quoted string literal".into(),
        }),
        Completion::EofInStatement => Err(LexError {
            line,
            column,
            message: "unexpected end of input inside a bracket or continuation".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(RawKind, String)> {
        tokenize_source(src)
            .unwrap()
            .iter()
            .map(|t| (t.kind, t.text(src).to_string()))
            .collect()
    }

    #[test]
    fn indentation_produces_indent_and_dedent() {
        let toks = kinds("if x:\n    y\nz\n");
        let ks: Vec<RawKind> = toks.iter().map(|t| t.0).collect();
        use RawKind::*;
        assert_eq!(
            ks,
            vec![Name, Name, Op, Newline, Indent, Name, Newline, Dedent, Name, Newline, EndMarker]
        );
    }

    #[test]
    fn brackets_join_lines() {
        let toks = kinds("f(a,\n  b)\n");
        assert!(toks.iter().filter(|t| t.0 == RawKind::Newline).count() == 1);
        assert!(toks.iter().any(|t| t.0 == RawKind::Nl));
    }

    #[test]
    fn string_prefixes_and_triple_quotes() {
        let toks = kinds("x = rb'a\\'b' + f\"\"\"q\n\"\"\"\n");
        let strings: Vec<&str> = toks
            .iter()
            .filter(|t| t.0 == RawKind::String)
            .map(|t| t.1.as_str())
            .collect();
        assert_eq!(strings, vec!["rb'a\\'b'", "f\"\"\"q\n\"\"\""]);
    }

    #[test]
    fn numbers() {
        let toks = kinds("0x1F + 1_000.5e-3j + .5\n");
        let nums: Vec<&str> = toks
            .iter()
            .filter(|t| t.0 == RawKind::Number)
            .map(|t| t.1.as_str())
            .collect();
        assert_eq!(nums, vec!["0x1F", "1_000.5e-3j", ".5"]);
    }

    #[test]
    fn unterminated_string_is_lex_error() {
        let err = tokenize_source("x = 'abc\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
        assert!(tokenize_source("x = \"\"\"abc\n").is_err());
    }

    #[test]
    fn illegal_character() {
        let err = tokenize_source("a = 1\nb $ c\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains('$'));
    }

    #[test]
    fn buffer_scan_reports_incomplete_input() {
        assert_eq!(scan_buffer("f(").completion, Completion::EofInStatement);
        assert_eq!(scan_buffer("\"\"\"abc").completion, Completion::EofInString);
        assert!(scan_buffer("x = 1 + \\").has_error() || scan_buffer("x = 1 + \\").completion != Completion::Complete);
        assert!(scan_buffer("'abc").has_error());
        assert_eq!(scan_buffer("'abc\\\ndef'").completion, Completion::Complete);
    }

    #[test]
    fn dedent_mismatch() {
        assert!(tokenize_source("if x:\n    a\n  b\n").is_err());
    }
}
