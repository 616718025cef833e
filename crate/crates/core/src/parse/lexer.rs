use super::ParseError;
use crate::logic::is_valid_constant;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Quoted(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    ColonColon,
    ColonDash,
    NotProvable,
    Newline,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Quoted(s) => format!("'{s}'"),
            Tok::Number(s) => format!("number {s}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::ColonColon => "`::`".into(),
            Tok::ColonDash => "`:-`".into(),
            Tok::NotProvable => "`\\+`".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits source text into tokens. Newlines inside parentheses are dropped
/// so a parenthesised sentence may span several lines.
pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let (tline, tcol) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: tline,
                col: tcol,
            })
        };
        let next = chars.get(i + 1).copied();
        let mut advance = 1;
        match c {
            '\n' => {
                if depth == 0 {
                    push(&mut out, Tok::Newline);
                }
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' | '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
                continue;
            }
            '(' => {
                depth += 1;
                push(&mut out, Tok::LParen);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                push(&mut out, Tok::RParen);
            }
            ',' => push(&mut out, Tok::Comma),
            '.' => push(&mut out, Tok::Dot),
            '~' | '!' => push(&mut out, Tok::Tilde),
            '&' => push(&mut out, Tok::Amp),
            '|' => push(&mut out, Tok::Bar),
            '\\' if next == Some('+') => {
                push(&mut out, Tok::NotProvable);
                advance = 2;
            }
            ':' if next == Some(':') => {
                push(&mut out, Tok::ColonColon);
                advance = 2;
            }
            ':' if next == Some('-') => {
                push(&mut out, Tok::ColonDash);
                advance = 2;
            }
            '-' if next == Some('>') => {
                push(&mut out, Tok::Arrow);
                advance = 2;
            }
            '<' if next == Some('-') && chars.get(i + 2) == Some(&'>') => {
                push(&mut out, Tok::DoubleArrow);
                advance = 3;
            }
            '\'' | '"' => {
                let close = chars[i + 1..]
                    .iter()
                    .position(|&k| k == c || k == '\n')
                    .map(|p| p + i + 1);
                match close {
                    Some(end) if chars[end] == c => {
                        let text: String = chars[i + 1..end].iter().collect();
                        if !is_valid_constant(&text) {
                            return Err(ParseError::new(
                                tline,
                                tcol,
                                "empty or invalid quoted constant",
                            ));
                        }
                        push(&mut out, Tok::Quoted(text));
                        advance = end + 1 - i;
                    }
                    _ => return Err(ParseError::new(tline, tcol, "unterminated quoted constant")),
                }
            }
            c if c.is_ascii_digit()
                || ((c == '-' || c == '+') && next.is_some_and(|n| n.is_ascii_digit())) =>
            {
                let len = number_len(&chars[i..]);
                push(&mut out, Tok::Number(chars[i..i + len].iter().collect()));
                advance = len;
            }
            c if c.is_ascii_alphabetic() => {
                let len = chars[i..]
                    .iter()
                    .take_while(|k| k.is_ascii_alphanumeric() || **k == '_')
                    .count();
                push(&mut out, Tok::Ident(chars[i..i + len].iter().collect()));
                advance = len;
            }
            other => {
                return Err(ParseError::new(
                    tline,
                    tcol,
                    format!("unexpected character {other:?}"),
                ))
            }
        }
        i += advance;
        col += advance;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Length of `[+-]?\d+(\.\d+)?([eE][+-]?\d+)?(/\d+)?` at the start of `s`.
fn number_len(s: &[char]) -> usize {
    let digits = |from: usize| s[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    let mut i = usize::from(s[0] == '-' || s[0] == '+');
    i += digits(i);
    if s.get(i) == Some(&'.') && s.get(i + 1).is_some_and(char::is_ascii_digit) {
        i += 1 + digits(i + 1);
    }
    if matches!(s.get(i), Some('e' | 'E')) {
        let sign = usize::from(matches!(s.get(i + 1), Some('+' | '-')));
        let n = digits(i + 1 + sign);
        if n > 0 {
            i += 1 + sign + n;
        }
    }
    if s.get(i) == Some(&'/') {
        let n = digits(i + 1);
        if n > 0 {
            i += 1 + n;
        }
    }
    i
}
