use std::fmt;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Atom(String),
    Var(String),
    Int(i64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Arrow,
    Semi,
    Amp,
    Bang,
    Question,
    Plus,
    Minus,
    Tilde,
    At,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Atom(a) => write!(f, "atom `{a}`"),
            Tok::Var(v) => write!(f, "variable `{v}`"),
            Tok::Int(i) => write!(f, "integer `{i}`"),
            Tok::Eof => f.write_str("end of input"),
            other => write!(f, "`{}`", other.symbol()),
        }
    }
}

impl Tok {
    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::Arrow => "<-",
            Tok::Semi => ";",
            Tok::Amp => "&",
            Tok::Bang => "!",
            Tok::Question => "?",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Tilde => "~",
            Tok::At => "@",
            Tok::EqEq => "==",
            Tok::NotEq => "\\==",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Atom(_) => "atom",
            Tok::Var(_) => "variable",
            Tok::Int(_) => "integer",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Character offset of the first character.
    pub offset: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    macro_rules! advance {
        () => {{
            if bytes[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            advance!();
            continue;
        }
        if c == '/' && bytes.get(i + 1) == Some(&'/') {
            while i < bytes.len() && bytes[i] != '\n' {
                advance!();
            }
            continue;
        }
        if c == '/' && bytes.get(i + 1) == Some(&'*') {
            let (sl, sc) = (line, col);
            advance!();
            advance!();
            loop {
                if i >= bytes.len() {
                    return Err(ParseError::new(sl, sc, "unterminated block comment"));
                }
                if bytes[i] == '*' && bytes.get(i + 1) == Some(&'/') {
                    advance!();
                    advance!();
                    break;
                }
                advance!();
            }
            continue;
        }

        let (sl, sc, start) = (line, col, i);
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                s.push(bytes[i]);
                advance!();
            }
            if c.is_ascii_lowercase() {
                Tok::Atom(s)
            } else {
                Tok::Var(s)
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                s.push(bytes[i]);
                advance!();
            }
            match s.parse::<i64>() {
                Ok(v) => Tok::Int(v),
                Err(_) => return Err(ParseError::new(sl, sc, "integer literal out of range")),
            }
        } else {
            let next = bytes.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                ('<', Some('-')) => (Tok::Arrow, 2),
                ('<', Some('=')) => (Tok::Le, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('=', Some('=')) => (Tok::EqEq, 2),
                ('\\', Some('=')) if bytes.get(i + 2) == Some(&'=') => (Tok::NotEq, 3),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                (':', _) => (Tok::Colon, 1),
                (';', _) => (Tok::Semi, 1),
                ('&', _) => (Tok::Amp, 1),
                ('!', _) => (Tok::Bang, 1),
                ('?', _) => (Tok::Question, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('~', _) => (Tok::Tilde, 1),
                ('@', _) => (Tok::At, 1),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                _ => return Err(ParseError::new(sl, sc, format!("unexpected character {c:?}"))),
            };
            for _ in 0..len {
                advance!();
            }
            tok
        };
        out.push(Spanned { tok, line: sl, col: sc, offset: start });
    }
    out.push(Spanned { tok: Tok::Eof, line, col, offset: i });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|s| s.tok).collect()
    }

    #[test]
    fn operators_and_comments() {
        assert_eq!(
            kinds("+!g : X <= 3 // trailing\n <- .a; /* block */ b."),
            vec![
                Tok::Plus,
                Tok::Bang,
                Tok::Atom("g".into()),
                Tok::Colon,
                Tok::Var("X".into()),
                Tok::Le,
                Tok::Int(3),
                Tok::Arrow,
                Tok::Dot,
                Tok::Atom("a".into()),
                Tok::Semi,
                Tok::Atom("b".into()),
                Tok::Dot,
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn strict_inequality_token() {
        assert_eq!(kinds("X \\== Y"), vec![Tok::Var("X".into()), Tok::NotEq, Tok::Var("Y".into()), Tok::Eof]);
    }

    #[test]
    fn positions_track_lines() {
        let toks = tokenize("a.\n  b.").unwrap();
        assert_eq!((toks[2].line, toks[2].col), (2, 3));
    }

    #[test]
    fn bad_character_is_positioned() {
        let err = tokenize("a.\n $").unwrap_err();
        assert_eq!((err.line, err.col), (2, 2));
    }
}
