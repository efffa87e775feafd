use super::{DslError, ErrorKind};

#[derive(Clone, Debug, PartialEq)]
pub(super) enum Tok {
    Ident(String),
    Number(f64),
    /// A literal written with a leading minus sign.
    Negative(f64),
    Plus,
    Arrow,
    BiArrow,
    At,
    Comma,
    Equals,
}

#[derive(Clone, Debug, PartialEq)]
pub(super) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    pub text: String,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Length in bytes of a decimal literal starting at `s`, if any.
fn number_len(s: &str) -> usize {
    let b = s.as_bytes();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        *i - start
    };
    let int = digits(&mut i);
    let mut frac = 0;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        frac = digits(&mut i);
    }
    if int + frac == 0 {
        return 0;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        let mut k = j;
        if digits(&mut k) > 0 {
            i = k;
        }
    }
    i
}

/// Splits one line (without its newline) into tokens, dropping any `#`
/// comment.
pub(super) fn lex_line(src: &str, line: usize) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    // Columns count characters, not bytes, and start at 1.
    let col_of = |byte: usize| src[..byte].chars().count() + 1;
    while let Some(&(at, c)) = chars.peek() {
        let column = col_of(at);
        let push = |out: &mut Vec<Token>, tok: Tok, text: &str| {
            out.push(Token {
                tok,
                line,
                column,
                text: text.to_string(),
            })
        };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let rest = &src[at..];
        let mut advance = |n_bytes: usize| {
            while let Some(&(i, _)) = chars.peek() {
                if i >= at + n_bytes {
                    break;
                }
                chars.next();
            }
        };
        if ident_start(c) {
            let len = rest.find(|ch: char| !ident_char(ch)).unwrap_or(rest.len());
            let word = &rest[..len];
            if let Some(bad) = rest[len..].chars().next().filter(|ch| !ch.is_ascii() && !ch.is_whitespace()) {
                return Err(DslError::new(line, col_of(at + len), ErrorKind::Lexical(bad.to_string())));
            }
            push(&mut out, Tok::Ident(word.to_string()), word);
            advance(len);
            continue;
        }
        if rest.starts_with("<->") {
            push(&mut out, Tok::BiArrow, "<->");
            advance(3);
            continue;
        }
        if rest.starts_with("->") {
            push(&mut out, Tok::Arrow, "->");
            advance(2);
            continue;
        }
        if c == '-' {
            let len = number_len(&rest[1..]);
            if len > 0 {
                let text = &rest[..1 + len];
                let v: f64 = text[1..].parse().expect("validated literal");
                push(&mut out, Tok::Negative(v), text);
                advance(1 + len);
                continue;
            }
        }
        let len = number_len(rest);
        if len > 0 {
            let text = &rest[..len];
            if rest[len..].starts_with(|ch: char| ident_char(ch) || ch == '.') {
                let end = rest.find(|ch: char| ch.is_whitespace()).unwrap_or(rest.len());
                return Err(DslError::new(line, column, ErrorKind::Lexical(rest[..end].to_string())));
            }
            push(&mut out, Tok::Number(text.parse().expect("validated literal")), text);
            advance(len);
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '@' => Some(Tok::At),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        match single {
            Some(tok) => {
                push(&mut out, tok, &c.to_string());
                chars.next();
            }
            None => return Err(DslError::new(line, column, ErrorKind::Lexical(c.to_string()))),
        }
    }
    Ok(out)
}
