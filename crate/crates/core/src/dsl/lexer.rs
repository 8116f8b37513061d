use super::{ParseError, ParseErrorKind, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Colon,
    Eq,
    Arrow,
    DoubleArrow,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`=>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn ident_continue(c: char) -> bool {
    ident_start(c) || c == '\''
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        let tok = if ident_start(c) {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|&&c| ident_continue(c)) {
                s.push(c);
                bump(&mut chars);
            }
            Tok::Ident(s)
        } else {
            bump(&mut chars);
            match c {
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ';' => Tok::Semi,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                '-' if chars.peek() == Some(&'>') => {
                    bump(&mut chars);
                    Tok::Arrow
                }
                '=' if chars.peek() == Some(&'>') => {
                    bump(&mut chars);
                    Tok::DoubleArrow
                }
                '=' => Tok::Eq,
                other => {
                    return Err(ParseError {
                        kind: ParseErrorKind::Syntax,
                        span,
                        expected: vec!["identifier".into(), "punctuation".into()],
                        message: format!("unexpected character `{}`", other.escape_debug()),
                    })
                }
            }
        };
        out.push(Token { tok, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_comments() {
        let toks = tokenize("# note\r\nmor f': a->b;\n  x=>y").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds[0], Tok::Ident("mor".into()));
        assert_eq!(kinds[1], Tok::Ident("f'".into()));
        assert_eq!(kinds[4], Tok::Arrow);
        assert_eq!(toks[0].span, Span { line: 2, col: 1 });
        assert_eq!(toks[7].span, Span { line: 3, col: 3 });
        assert_eq!(kinds[8], Tok::DoubleArrow);
        assert_eq!(kinds.last(), Some(&Tok::Eof));
    }

    #[test]
    fn stray_character() {
        let e = tokenize("obj a;\n  $").unwrap_err();
        assert_eq!(e.span, Span { line: 2, col: 3 });
    }
}
