//! Tokenizer for the concrete syntax.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Zero,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Plus,
    Amp,
    Backslash,
    Eq,
    Le,
    Ne,
    Nle,
    Arrow,
    Iff,
    KwChoice,
    KwIn,
    KwNot,
    KwAnd,
    KwOr,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(name) => return write!(f, "identifier '{name}'"),
            TokenKind::Zero => "'0'",
            TokenKind::LBrace => "'{'",
            TokenKind::RBrace => "'}'",
            TokenKind::LParen => "'('",
            TokenKind::RParen => "')'",
            TokenKind::Plus => "'+'",
            TokenKind::Amp => "'&'",
            TokenKind::Backslash => "'\\'",
            TokenKind::Eq => "'='",
            TokenKind::Le => "'<='",
            TokenKind::Ne => "'!='",
            TokenKind::Nle => "'!<='",
            TokenKind::Arrow => "'->'",
            TokenKind::Iff => "'<->'",
            TokenKind::KwChoice => "'c'",
            TokenKind::KwIn => "'in'",
            TokenKind::KwNot => "'not'",
            TokenKind::KwAnd => "'and'",
            TokenKind::KwOr => "'or'",
        };
        f.write_str(s)
    }
}

/// A token together with its 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: u32,
    pub col: u32,
}

/// A tokenization failure with its 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct LexError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: u32, col: u32, msg: impl Into<String>) -> LexError {
        LexError { line, col, msg: msg.into() }
    }
}

/// Tokenizes a source string. `#` starts a comment running to end of line.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut lx = Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        // Skip whitespace and comments.
        loop {
            match lx.peek() {
                Some(c) if (c as char).is_ascii_whitespace() => {
                    lx.bump();
                }
                Some(b'#') => {
                    while let Some(c) = lx.peek() {
                        if c == b'\n' {
                            break;
                        }
                        lx.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (lx.line, lx.col);
        let c = match lx.bump() {
            None => break,
            Some(c) => c,
        };
        let kind = match c {
            b'0' => TokenKind::Zero,
            b'{' => TokenKind::LBrace,
            b'}' => TokenKind::RBrace,
            b'(' => TokenKind::LParen,
            b')' => TokenKind::RParen,
            b'+' => TokenKind::Plus,
            b'&' => TokenKind::Amp,
            b'\\' => TokenKind::Backslash,
            b'=' => TokenKind::Eq,
            b'-' => {
                if lx.peek() == Some(b'>') {
                    lx.bump();
                    TokenKind::Arrow
                } else {
                    return Err(lx.error(line, col, "expected '->'"));
                }
            }
            b'<' => {
                if lx.peek() == Some(b'=') {
                    lx.bump();
                    TokenKind::Le
                } else if lx.peek() == Some(b'-') {
                    lx.bump();
                    if lx.bump() == Some(b'>') {
                        TokenKind::Iff
                    } else {
                        return Err(lx.error(line, col, "expected '<->'"));
                    }
                } else {
                    return Err(lx.error(line, col, "expected '<=' or '<->'"));
                }
            }
            b'!' => {
                if lx.peek() == Some(b'=') {
                    lx.bump();
                    TokenKind::Ne
                } else if lx.peek() == Some(b'<') {
                    lx.bump();
                    if lx.bump() == Some(b'=') {
                        TokenKind::Nle
                    } else {
                        return Err(lx.error(line, col, "expected '!<='"));
                    }
                } else {
                    return Err(lx.error(line, col, "expected '!=' or '!<='"));
                }
            }
            b'_' => {
                return Err(lx.error(
                    line,
                    col,
                    "identifiers starting with '_' are reserved",
                ));
            }
            c if (c as char).is_ascii_alphabetic() => {
                let start = lx.pos - 1;
                while let Some(c) = lx.peek() {
                    if (c as char).is_ascii_alphanumeric() || c == b'_' {
                        lx.bump();
                    } else {
                        break;
                    }
                }
                let word = std::str::from_utf8(&lx.src[start..lx.pos]).expect("ascii");
                match word {
                    "c" => TokenKind::KwChoice,
                    "in" => TokenKind::KwIn,
                    "not" => TokenKind::KwNot,
                    "and" => TokenKind::KwAnd,
                    "or" => TokenKind::KwOr,
                    _ => TokenKind::Ident(word.to_string()),
                }
            }
            other => {
                return Err(lx.error(
                    line,
                    col,
                    format!("unexpected character '{}'", other as char),
                ));
            }
        };
        out.push(Token { kind, line, col });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_operators_and_keywords() {
        let toks = tokenize("c(X + {y}) <-> not x in X # trailing").unwrap();
        let kinds: Vec<&TokenKind> = toks.iter().map(|t| &t.kind).collect();
        use TokenKind::*;
        assert_eq!(
            kinds,
            vec![
                &KwChoice,
                &LParen,
                &Ident("X".into()),
                &Plus,
                &LBrace,
                &Ident("y".into()),
                &RBrace,
                &RParen,
                &Iff,
                &KwNot,
                &Ident("x".into()),
                &KwIn,
                &Ident("X".into()),
            ]
        );
    }

    #[test]
    fn positions_are_one_based() {
        let toks = tokenize("X\n  = Y").unwrap();
        assert_eq!((toks[0].line, toks[0].col), (1, 1));
        assert_eq!((toks[1].line, toks[1].col), (2, 3));
        assert_eq!((toks[2].line, toks[2].col), (2, 5));
    }

    #[test]
    fn rejects_reserved_underscore() {
        let err = tokenize("_C1 = 0").unwrap_err();
        assert_eq!((err.line, err.col), (1, 1));
        assert!(err.msg.contains("reserved"));
    }

    #[test]
    fn rejects_stray_digits() {
        assert!(tokenize("X = 1").is_err());
        // A digit may continue an identifier.
        let toks = tokenize("X1 = 0").unwrap();
        assert_eq!(toks[0].kind, TokenKind::Ident("X1".into()));
    }
}
