//! Python source analysis: tokens, blocks with decision points, raw line
//! counts and Halstead operator/operand counts.

pub mod ast;
mod blocks;
mod halstead;
mod lexer;
mod literal;
mod parser;
mod raw;

use serde::{Deserialize, Serialize};

pub use blocks::{Block, BlockKind, BlockTree};
pub use halstead::OperatorOperandCounts;
pub use lexer::LexError;
pub use parser::ParseError;
pub use raw::RawCounts;

/// A piece of Python source and where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceUnit {
    text: String,
    origin: String,
}

impl SourceUnit {
    /// Wraps `text`, converting CRLF line endings to LF.
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        let text = text.into();
        let text = if text.contains("\r\n") {
            text.replace("\r\n", "\n")
        } else {
            text
        };
        SourceUnit {
            text,
            origin: origin.into(),
        }
    }

    pub fn inline(text: impl Into<String>) -> Self {
        Self::new(text, "inline")
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    OperatorCandidate,
    OperandCandidate,
    Keyword,
    Comment,
    String,
    Newline,
    Indent,
    Dedent,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub line: u32,
}

const OPERATOR_SYMBOLS: [&str; 37] = [
    "+", "-", "*", "/", "//", "%", "**", "@", "<<", ">>", "&", "|", "^", "~", "<", ">", "<=", ">=",
    "==", "!=", "+=", "-=", "*=", "/=", "//=", "%=", "**=", "@=", "<<=", ">>=", "&=", "|=", "^=",
    ":=", "=", "->", ".",
];

fn classify(kind: lexer::RawKind, text: &str) -> Option<TokenKind> {
    use lexer::RawKind as R;
    Some(match kind {
        R::Name if parser::is_keyword(text) => TokenKind::Keyword,
        R::Name | R::Number => TokenKind::OperandCandidate,
        R::String => TokenKind::String,
        R::Comment => TokenKind::Comment,
        R::Newline | R::Nl => TokenKind::Newline,
        R::Indent => TokenKind::Indent,
        R::Dedent => TokenKind::Dedent,
        R::Op if OPERATOR_SYMBOLS.contains(&text) => TokenKind::OperatorCandidate,
        R::Op => TokenKind::Other,
        R::EndMarker => return None,
        R::Error => TokenKind::Other,
    })
}

/// Splits a unit into classified tokens. The end marker is dropped.
pub fn tokenize(unit: &SourceUnit) -> Result<Vec<Token>, LexError> {
    let raw = lexer::tokenize_source(unit.text())?;
    Ok(raw
        .iter()
        .filter_map(|t| {
            let text = t.text(unit.text());
            classify(t.kind, text).map(|kind| Token {
                kind,
                lexeme: text.to_string(),
                line: t.line,
            })
        })
        .collect())
}

/// Everything the metric engine needs from one parse of a unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub raw: RawCounts,
    pub halstead: OperatorOperandCounts,
    pub blocks: BlockTree,
}

fn last_line(text: &str) -> u32 {
    raw::split_lines(text).len() as u32
}

/// Parses once and derives blocks, raw counts and Halstead counts.
pub fn analyze(unit: &SourceUnit) -> Result<Analysis, ParseError> {
    let module = parser::parse_module(unit.text())?;
    Ok(Analysis {
        raw: raw::count(unit.text()),
        halstead: halstead::classify(&module),
        blocks: blocks::block_tree(&module, last_line(unit.text())),
    })
}

pub fn parse_blocks(unit: &SourceUnit) -> Result<BlockTree, ParseError> {
    let module = parser::parse_module(unit.text())?;
    Ok(blocks::block_tree(&module, last_line(unit.text())))
}

/// Line counts; works on text that does not parse.
pub fn count_raw(unit: &SourceUnit) -> RawCounts {
    raw::count(unit.text())
}

pub fn classify_halstead(unit: &SourceUnit) -> Result<OperatorOperandCounts, ParseError> {
    Ok(halstead::classify(&parser::parse_module(unit.text())?))
}

/// Parses a unit into its syntax tree.
pub fn parse(unit: &SourceUnit) -> Result<ast::Module, ParseError> {
    parser::parse_module(unit.text())
}
