use std::fmt;

/// 1-based source position, columns counted in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    /// Literal text and its value.
    Number(String, f64),
    Set,
    Const,
    In,
    Project,
    LParen,
    RParen,
    Comma,
    Eq,
    DotDot,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    /// `(+)`, `(-)`, `(*)`, `(\)` or `(/)`.
    Mink(char),
    /// A character that starts no token.
    Invalid(char),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s, _) => format!("number `{s}`"),
            Tok::Set => "`set`".into(),
            Tok::Const => "`const`".into(),
            Tok::In => "`in`".into(),
            Tok::Project => "`project`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Mink(c) => format!("`({c})`"),
            Tok::Invalid(c) => format!("character `{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Splits source text into tokens. `#` starts a comment running to the end of
/// the line. Lexing never fails: unknown characters become [`Tok::Invalid`]
/// and are reported by the parser.
pub(crate) fn tokenize(src: &str) -> Vec<Token> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let start = i;
        let tok = if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match word.as_str() {
                "set" => Tok::Set,
                "const" => Tok::Const,
                "in" => Tok::In,
                "project" => Tok::Project,
                _ => Tok::Ident(word),
            }
        } else if c.is_ascii_digit() {
            i = scan_number(&chars, i);
            let text: String = chars[start..i].iter().collect();
            match text.parse::<f64>() {
                Ok(v) if v.is_finite() => Tok::Number(text, v),
                _ => Tok::Invalid(c),
            }
        } else if c == '('
            && i + 2 < chars.len()
            && chars[i + 2] == ')'
            && matches!(chars[i + 1], '+' | '-' | '*' | '\\' | '/')
        {
            i += 3;
            Tok::Mink(chars[start + 1])
        } else if c == '.' && chars.get(i + 1) == Some(&'.') {
            i += 2;
            Tok::DotDot
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '=' => Tok::Eq,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                other => Tok::Invalid(other),
            }
        };
        col += i - start;
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    out
}

/// `digits [ "." digits ] [ ("e"|"E") ["+"|"-"] digits ]`; a `.` directly
/// followed by another `.` ends the number so that `0..1` lexes as a range.
fn scan_number(chars: &[char], mut i: usize) -> usize {
    let digits = |mut i: usize| {
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    i = digits(i);
    if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit()) {
        i = digits(i + 1);
    }
    if matches!(chars.get(i), Some('e' | 'E')) {
        let mut j = i + 1;
        if matches!(chars.get(j), Some('+' | '-')) {
            j += 1;
        }
        if chars.get(j).is_some_and(|c| c.is_ascii_digit()) {
            i = digits(j);
        }
    }
    i
}
