use std::collections::{HashMap, HashSet};

use crate::crn::{NetworkBuilder, NetworkSpec, SpeciesId};

use super::lexer::{lex_line, Tok, Token};
use super::{DslError, ErrorKind, KEYWORDS};

struct Parser {
    builder: NetworkBuilder,
    aliases: HashMap<String, f64>,
    declared: HashSet<String>,
}

/// Cursor over the tokens of one line.
struct Line<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    /// Column just past the last character, for errors at end of line.
    end_column: usize,
}

impl<'a> Line<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.column),
            None => (self.line, self.end_column),
        }
    }

    fn err(&self, kind: ErrorKind) -> DslError {
        let (l, c) = self.here();
        DslError::new(l, c, kind)
    }

    fn syntax(&self, expected: &'static str) -> DslError {
        let found = match self.peek() {
            Some(t) => format!("`{}`", t.text),
            None => "end of line".to_string(),
        };
        self.err(ErrorKind::Syntax { expected, found })
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<&'a Token, DslError> {
        match self.peek() {
            Some(t) if t.tok == want => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.syntax(expected)),
        }
    }

    fn ident(&mut self, expected: &'static str) -> Result<&'a Token, DslError> {
        match self.peek() {
            Some(t @ Token { tok: Tok::Ident(_), .. }) => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.syntax(expected)),
        }
    }

    fn finish(&self) -> Result<(), DslError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.syntax("end of line")),
        }
    }
}

fn name_of(t: &Token) -> &str {
    match &t.tok {
        Tok::Ident(s) => s,
        _ => unreachable!("caller checked for an identifier"),
    }
}

impl Parser {
    fn species_name<'a>(&self, t: &'a Token) -> Result<&'a str, DslError> {
        let name = name_of(t);
        if KEYWORDS.contains(&name) {
            return Err(DslError::new(t.line, t.column, ErrorKind::ReservedName(name.to_string())));
        }
        Ok(name)
    }

    fn statement(&mut self, l: &mut Line) -> Result<(), DslError> {
        match l.peek().map(|t| &t.tok) {
            Some(Tok::Ident(w)) if w == "let" => {
                l.next();
                self.alias(l)
            }
            Some(Tok::Ident(w)) if w == "species" => {
                l.next();
                self.declaration(l)
            }
            _ => self.reaction(l),
        }
    }

    fn alias(&mut self, l: &mut Line) -> Result<(), DslError> {
        let name_tok = l.ident("alias name")?;
        let name = name_of(name_tok);
        if KEYWORDS.contains(&name) {
            return Err(DslError::new(name_tok.line, name_tok.column, ErrorKind::ReservedName(name.into())));
        }
        l.expect(Tok::Equals, "`=`")?;
        let value = self.literal_rate(l)?;
        if self.aliases.insert(name.to_string(), value).is_some() {
            return Err(DslError::new(name_tok.line, name_tok.column, ErrorKind::DuplicateAlias(name.into())));
        }
        l.finish()
    }

    fn declaration(&mut self, l: &mut Line) -> Result<(), DslError> {
        let name_tok = l.ident("species name")?;
        let name = self.species_name(name_tok)?;
        l.expect(Tok::Equals, "`=`")?;
        let count_tok = l.next().ok_or_else(|| l.syntax("initial count"))?;
        let count = match count_tok.tok {
            Tok::Number(_) => count_tok
                .text
                .parse::<u64>()
                .map_err(|_| DslError::new(count_tok.line, count_tok.column, ErrorKind::InvalidCount(count_tok.text.clone())))?,
            Tok::Negative(_) => {
                return Err(DslError::new(count_tok.line, count_tok.column, ErrorKind::InvalidCount(count_tok.text.clone())))
            }
            _ => {
                l.pos -= 1;
                return Err(l.syntax("initial count"));
            }
        };
        let clamped = match l.peek() {
            Some(Token { tok: Tok::Ident(w), .. }) if w == "clamped" => {
                l.next();
                true
            }
            _ => false,
        };
        l.finish()?;
        if !self.declared.insert(name.to_string()) {
            return Err(DslError::new(name_tok.line, name_tok.column, ErrorKind::DuplicateSpecies(name.into())));
        }
        let at = |e| DslError::new(name_tok.line, name_tok.column, ErrorKind::Network(e));
        let id = self.builder.species_or_insert(name).map_err(at)?;
        self.builder.set_initial(id, count);
        if clamped {
            self.builder.clamp(id);
        }
        Ok(())
    }

    /// `A + B` or an empty side. Stops at the first token that is not part
    /// of the side.
    fn side(&mut self, l: &mut Line) -> Result<Vec<SpeciesId>, DslError> {
        let mut out = Vec::new();
        if !matches!(l.peek().map(|t| &t.tok), Some(Tok::Ident(_))) {
            return Ok(out);
        }
        loop {
            let t = l.ident("species name")?;
            let name = self.species_name(t)?;
            let id = self
                .builder
                .species_or_insert(name)
                .map_err(|e| DslError::new(t.line, t.column, ErrorKind::Network(e)))?;
            out.push(id);
            match l.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => {
                    l.next();
                }
                _ => return Ok(out),
            }
        }
    }

    fn literal_rate(&self, l: &mut Line) -> Result<f64, DslError> {
        let t = l.next().ok_or_else(|| l.syntax("rate"))?;
        match t.tok {
            Tok::Number(v) if v.is_finite() => Ok(v),
            Tok::Number(v) => Err(DslError::new(t.line, t.column, ErrorKind::NonFiniteRate(v))),
            Tok::Negative(v) => Err(DslError::new(t.line, t.column, ErrorKind::NegativeRate(v))),
            _ => {
                l.pos -= 1;
                Err(l.syntax("numeric rate"))
            }
        }
    }

    fn rate(&self, l: &mut Line) -> Result<f64, DslError> {
        if let Some(t @ Token { tok: Tok::Ident(name), .. }) = l.peek() {
            l.next();
            return self
                .aliases
                .get(name)
                .copied()
                .ok_or_else(|| DslError::new(t.line, t.column, ErrorKind::UndeclaredRate(name.clone())));
        }
        self.literal_rate(l)
    }

    fn reaction(&mut self, l: &mut Line) -> Result<(), DslError> {
        let lhs_at = l.here();
        let lhs = self.side(l)?;
        let reversible = match l.peek().map(|t| &t.tok) {
            Some(Tok::Arrow) => false,
            Some(Tok::BiArrow) => true,
            _ => return Err(l.syntax("`->` or `<->`")),
        };
        l.next();
        let rhs_at = l.here();
        let rhs = self.side(l)?;
        l.expect(Tok::At, "`@`")?;
        let forward = self.rate(l)?;
        let reverse = if reversible {
            l.expect(Tok::Comma, "`,` and a reverse rate")?;
            Some(self.rate(l)?)
        } else {
            None
        };
        l.finish()?;

        let check = |side: &[SpeciesId], (line, col): (usize, usize), reactant: bool| {
            if side.len() <= 2 {
                return Ok(());
            }
            let kind = if reactant {
                ErrorKind::TooManyReactants(side.len())
            } else {
                ErrorKind::TooManyProducts(side.len())
            };
            Err(DslError::new(line, col, kind))
        };
        check(&lhs, lhs_at, true)?;
        check(&rhs, rhs_at, false)?;
        if reversible {
            // The reverse reaction consumes the right-hand side.
            check(&rhs, rhs_at, true)?;
            check(&lhs, lhs_at, false)?;
        }
        let at = |e| DslError::new(lhs_at.0, lhs_at.1, ErrorKind::Network(e));
        self.builder.add_reaction(&lhs, &rhs, forward).map_err(at)?;
        if let Some(k) = reverse {
            self.builder.add_reaction(&rhs, &lhs, k).map_err(at)?;
        }
        Ok(())
    }
}

/// Parses a `.crn` document into a network.
pub fn parse_network(text: &str) -> Result<NetworkSpec, DslError> {
    let mut p = Parser {
        builder: NetworkSpec::builder(),
        aliases: HashMap::new(),
        declared: HashSet::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let toks = lex_line(raw, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let content = raw.split('#').next().unwrap_or("").trim_end();
        let mut l = Line {
            toks: &toks,
            pos: 0,
            line: line_no,
            end_column: content.chars().count() + 1,
        };
        p.statement(&mut l)?;
    }
    Ok(p.builder.build())
}
