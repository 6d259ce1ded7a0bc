//! Decoding of numeric and string literals into [`Constant`] values.

use num_bigint::BigInt;
use num_traits::Num;

use super::ast::Constant;

pub(crate) fn parse_number(text: &str) -> Result<Constant, String> {
    let clean: String = text.chars().filter(|&c| c != '_').collect();
    let lower = clean.to_ascii_lowercase();
    let bad = || format!("invalid number literal {text:?}");
    if let Some(imag) = lower.strip_suffix('j') {
        return imag.parse::<f64>().map(Constant::Imaginary).map_err(|_| bad());
    }
    for (prefix, radix) in [("0x", 16), ("0o", 8), ("0b", 2)] {
        if let Some(digits) = lower.strip_prefix(prefix) {
            return BigInt::from_str_radix(digits, radix)
                .map(Constant::Int)
                .map_err(|_| bad());
        }
    }
    if lower.contains(['.', 'e']) {
        return lower.parse::<f64>().map(Constant::Float).map_err(|_| bad());
    }
    if lower.len() > 1 && lower.starts_with('0') && lower.chars().any(|c| c != '0') {
        return Err(format!("leading zeros in decimal integer literal {text:?}"));
    }
    BigInt::from_str_radix(&lower, 10)
        .map(Constant::Int)
        .map_err(|_| bad())
}

/// A string literal token split into its prefix flags and the text between
/// the quotes.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StringParts<'a> {
    pub raw: bool,
    pub bytes: bool,
    pub formatted: bool,
    pub body: &'a str,
}

pub(crate) fn split_string_token(token: &str) -> StringParts<'_> {
    let quote_at = token.find(['\'', '"']).expect("string token has a quote");
    let prefix = token[..quote_at].to_ascii_lowercase();
    let rest = &token[quote_at..];
    let q = &rest[..1];
    let triple = rest.len() >= 6 && rest[1..].starts_with(q) && rest[2..].starts_with(q);
    let width = if triple { 3 } else { 1 };
    StringParts {
        raw: prefix.contains('r'),
        bytes: prefix.contains('b'),
        formatted: prefix.contains('f'),
        body: &rest[width..rest.len() - width],
    }
}

/// Interprets backslash escapes of a non-raw `str` literal body.
pub(crate) fn unescape_str(body: &str) -> String {
    let mut out = String::with_capacity(body.len());
    let mut chars = body.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        let Some(e) = chars.next() else {
            out.push('\\');
            break;
        };
        match e {
            '\n' => {}
            '\r' => {
                if chars.peek() == Some(&'\n') {
                    chars.next();
                }
            }
            '\\' | '\'' | '"' => out.push(e),
            'a' => out.push('\x07'),
            'b' => out.push('\x08'),
            'f' => out.push('\x0c'),
            'n' => out.push('\n'),
            'r' => out.push('\r'),
            't' => out.push('\t'),
            'v' => out.push('\x0b'),
            '0'..='7' => {
                let mut value = e.to_digit(8).unwrap();
                for _ in 0..2 {
                    match chars.peek().and_then(|c| c.to_digit(8)) {
                        Some(d) => {
                            value = value * 8 + d;
                            chars.next();
                        }
                        None => break,
                    }
                }
                out.push(char::from_u32(value).unwrap_or('\u{fffd}'));
            }
            'x' | 'u' | 'U' => {
                let width = match e {
                    'x' => 2,
                    'u' => 4,
                    _ => 8,
                };
                let digits: String = chars.by_ref().take(width).collect();
                match u32::from_str_radix(&digits, 16).ok().and_then(char::from_u32) {
                    Some(ch) if digits.len() == width => out.push(ch),
                    _ => {
                        out.push('\\');
                        out.push(e);
                        out.push_str(&digits);
                    }
                }
            }
            // Named escapes are kept verbatim; no character-name table is bundled.
            other => {
                out.push('\\');
                out.push(other);
            }
        }
    }
    out
}

/// Interprets backslash escapes of a non-raw `bytes` literal body.
pub(crate) fn unescape_bytes(body: &str) -> Vec<u8> {
    let mut out = Vec::with_capacity(body.len());
    let mut chars = body.chars().peekable();
    let push_char = |out: &mut Vec<u8>, c: char| {
        let mut buf = [0u8; 4];
        out.extend_from_slice(c.encode_utf8(&mut buf).as_bytes());
    };
    while let Some(c) = chars.next() {
        if c != '\\' {
            push_char(&mut out, c);
            continue;
        }
        let Some(e) = chars.next() else {
            out.push(b'\\');
            break;
        };
        match e {
            '\n' => {}
            '\\' | '\'' | '"' => out.push(e as u8),
            'a' => out.push(7),
            'b' => out.push(8),
            'f' => out.push(12),
            'n' => out.push(b'\n'),
            'r' => out.push(b'\r'),
            't' => out.push(b'\t'),
            'v' => out.push(11),
            '0'..='7' => {
                let mut value = e.to_digit(8).unwrap();
                for _ in 0..2 {
                    match chars.peek().and_then(|c| c.to_digit(8)) {
                        Some(d) => {
                            value = value * 8 + d;
                            chars.next();
                        }
                        None => break,
                    }
                }
                out.push((value & 0xff) as u8);
            }
            'x' => {
                let digits: String = chars.by_ref().take(2).collect();
                match u8::from_str_radix(&digits, 16) {
                    Ok(b) if digits.len() == 2 => out.push(b),
                    _ => {
                        out.extend_from_slice(b"\\x");
                        out.extend_from_slice(digits.as_bytes());
                    }
                }
            }
            other => {
                out.push(b'\\');
                push_char(&mut out, other);
            }
        }
    }
    out
}

/// One piece of an f-string body.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum FPiece {
    Literal(String),
    Field {
        /// Expression source, without the trailing `=` of a debug field.
        expr: String,
        /// Byte offset of the expression within the f-string body.
        offset: usize,
        /// Text emitted before the value for `{expr=}` fields.
        debug_text: Option<String>,
        conversion: Option<char>,
        spec: Option<Vec<FPiece>>,
    },
}

/// Splits an f-string body into literal text and replacement fields.
pub(crate) fn split_fstring(body: &str, raw: bool) -> Result<Vec<FPiece>, String> {
    let mut pos = 0;
    let pieces = fstring_pieces(body, &mut pos, raw, false)?;
    Ok(pieces)
}

fn fstring_pieces(body: &str, pos: &mut usize, raw: bool, in_spec: bool) -> Result<Vec<FPiece>, String> {
    let bytes = body.as_bytes();
    let mut pieces = Vec::new();
    let mut literal = String::new();
    let flush = |literal: &mut String, pieces: &mut Vec<FPiece>| {
        if !literal.is_empty() {
            let text = if raw {
                std::mem::take(literal)
            } else {
                unescape_str(&std::mem::take(literal))
            };
            pieces.push(FPiece::Literal(text));
        }
    };
    while *pos < bytes.len() {
        let c = bytes[*pos];
        match c {
            b'{' if bytes.get(*pos + 1) == Some(&b'{') && !in_spec => {
                literal.push('{');
                *pos += 2;
            }
            b'}' if in_spec => break,
            b'}' => {
                if bytes.get(*pos + 1) == Some(&b'}') {
                    literal.push('}');
                    *pos += 2;
                } else {
                    return Err("f-string: single '}' is not allowed".into());
                }
            }
            b'{' => {
                flush(&mut literal, &mut pieces);
                *pos += 1;
                pieces.push(fstring_field(body, pos, raw)?);
            }
            b'\\' if !raw && *pos + 1 < bytes.len() => {
                // keep escapes intact for the literal decoder
                let ch_len = body[*pos + 1..].chars().next().map_or(1, char::len_utf8);
                literal.push_str(&body[*pos..*pos + 1 + ch_len]);
                *pos += 1 + ch_len;
            }
            _ => {
                let ch = body[*pos..].chars().next().unwrap();
                literal.push(ch);
                *pos += ch.len_utf8();
            }
        }
    }
    flush(&mut literal, &mut pieces);
    Ok(pieces)
}

fn fstring_field(body: &str, pos: &mut usize, raw: bool) -> Result<FPiece, String> {
    let bytes = body.as_bytes();
    let start = *pos;
    let mut depth = 0usize;
    let mut quote: Option<u8> = None;
    let mut debug = false;
    let expr_end;
    loop {
        let Some(&c) = bytes.get(*pos) else {
            return Err("f-string: expecting '}'".into());
        };
        if let Some(q) = quote {
            if c == q {
                quote = None;
            }
            *pos += 1;
            continue;
        }
        match c {
            b'\'' | b'"' => quote = Some(c),
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' => depth = depth.saturating_sub(1),
            b'}' if depth > 0 => depth -= 1,
            b'}' | b':' if depth == 0 => {
                expr_end = *pos;
                break;
            }
            b'!' if depth == 0 && bytes.get(*pos + 1) != Some(&b'=') => {
                expr_end = *pos;
                break;
            }
            b'=' if depth == 0 => {
                let prev = if *pos > start { bytes[*pos - 1] } else { b' ' };
                let next = bytes.get(*pos + 1).copied();
                if next == Some(b'=') {
                    *pos += 2;
                    continue;
                }
                if !matches!(prev, b'=' | b'!' | b'<' | b'>') {
                    // `{expr=}` debug field
                    debug = true;
                    expr_end = *pos;
                    *pos += 1;
                    while bytes.get(*pos).is_some_and(|b| b.is_ascii_whitespace()) {
                        *pos += 1;
                    }
                    break;
                }
            }
            _ => {}
        }
        *pos += 1;
    }
    let expr = body[start..expr_end].to_string();
    if expr.trim().is_empty() {
        return Err("f-string: empty expression not allowed".into());
    }
    let debug_text = debug.then(|| body[start..*pos].to_string());
    let mut conversion = None;
    if bytes.get(*pos) == Some(&b'!') {
        let c = bytes.get(*pos + 1).copied().ok_or("f-string: missing conversion")?;
        if !matches!(c, b'r' | b's' | b'a') {
            return Err("f-string: invalid conversion character".into());
        }
        conversion = Some(c as char);
        *pos += 2;
    }
    let mut spec = None;
    if bytes.get(*pos) == Some(&b':') {
        *pos += 1;
        spec = Some(fstring_pieces(body, pos, raw, true)?);
    }
    if bytes.get(*pos) != Some(&b'}') {
        return Err("f-string: expecting '}'".into());
    }
    *pos += 1;
    if debug && conversion.is_none() && spec.is_none() {
        conversion = Some('r');
    }
    Ok(FPiece::Field {
        expr,
        offset: start,
        debug_text,
        conversion,
        spec,
    })
}
