use std::fmt;

use crate::{Error, Result};

/// A string diagram term. `Vert(upper, lower)` stacks `upper` on top of
/// `lower`; `Horiz(left, right)` places them side by side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Diagram {
    Sigma,
    Delta,
    Epsilon,
    Id(usize),
    Gen(String),
    Vert(Box<Diagram>, Box<Diagram>),
    Horiz(Box<Diagram>, Box<Diagram>),
}

impl Diagram {
    pub fn vert(upper: Diagram, lower: Diagram) -> Diagram {
        Diagram::Vert(Box::new(upper), Box::new(lower))
    }

    pub fn horiz(left: Diagram, right: Diagram) -> Diagram {
        Diagram::Horiz(Box::new(left), Box::new(right))
    }

    /// Stacks the parts top to bottom; `id[width]` when empty.
    pub fn vert_all(parts: impl IntoIterator<Item = Diagram>, width: usize) -> Diagram {
        parts.into_iter().reduce(Diagram::vert).unwrap_or(Diagram::Id(width))
    }

    /// Places the parts left to right; `id[0]` when empty.
    pub fn horiz_all(parts: impl IntoIterator<Item = Diagram>) -> Diagram {
        parts.into_iter().reduce(Diagram::horiz).unwrap_or(Diagram::Id(0))
    }

    /// Number of nodes in the term.
    pub fn size(&self) -> usize {
        match self {
            Diagram::Vert(a, b) | Diagram::Horiz(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Diagram::Vert(..) => 0,
            Diagram::Horiz(..) => 1,
            _ => 2,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Diagram::Sigma => write!(f, "sigma"),
            Diagram::Delta => write!(f, "delta"),
            Diagram::Epsilon => write!(f, "eps"),
            Diagram::Id(k) => write!(f, "id[{k}]"),
            Diagram::Gen(name) => write!(f, "gen({name})"),
            Diagram::Vert(a, b) => {
                a.write_at(f, 0)?;
                write!(f, " ; ")?;
                b.write_at(f, 1)
            }
            Diagram::Horiz(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " * ")?;
                b.write_at(f, 2)
            }
        }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Star,
    Word(String),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '#' => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | '[' | ']' | ';' | '*' => {
                chars.next();
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ';' => Tok::Semi,
                    _ => Tok::Star,
                };
                out.push((i, t));
            }
            _ => {
                let mut w = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || "()[];*#".contains(c) {
                        break;
                    }
                    w.push(c);
                    chars.next();
                }
                out.push((i, Tok::Word(w)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let at = if self.pos >= self.toks.len() {
            "end of input".to_string()
        } else {
            format!("{:?}", self.toks[self.pos].1)
        };
        Err(Error::Syntax { pos: self.offset(), msg: format!("{} (found {at})", msg.into()) })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn term(&mut self) -> Result<Diagram> {
        let mut d = self.hterm()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            let rhs = self.hterm()?;
            d = Diagram::vert(d, rhs);
        }
        Ok(d)
    }

    fn hterm(&mut self) -> Result<Diagram> {
        let mut d = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.atom()?;
            d = Diagram::horiz(d, rhs);
        }
        Ok(d)
    }

    fn atom(&mut self) -> Result<Diagram> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let d = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(d)
            }
            Some(Tok::Word(w)) => {
                self.pos += 1;
                match w.as_str() {
                    "sigma" => Ok(Diagram::Sigma),
                    "delta" => Ok(Diagram::Delta),
                    "eps" => Ok(Diagram::Epsilon),
                    "id" => {
                        self.expect(Tok::LBracket, "'['")?;
                        let k = match self.peek() {
                            Some(Tok::Word(n)) => match n.parse::<usize>() {
                                Ok(k) => k,
                                Err(_) => return self.fail("expected a width"),
                            },
                            _ => return self.fail("expected a width"),
                        };
                        self.pos += 1;
                        self.expect(Tok::RBracket, "']'")?;
                        Ok(Diagram::Id(k))
                    }
                    "gen" => {
                        self.expect(Tok::LParen, "'('")?;
                        let name = match self.peek() {
                            Some(Tok::Word(n)) => n.clone(),
                            _ => return self.fail("expected a morphism name"),
                        };
                        self.pos += 1;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(Diagram::Gen(name))
                    }
                    _ => {
                        self.pos -= 1;
                        self.fail("expected sigma, delta, eps, id[k], gen(name) or '('")
                    }
                }
            }
            _ => self.fail("expected a diagram"),
        }
    }
}

/// Parses the term grammar. `;` (vertical) binds looser than `*`
/// (horizontal); both associate to the left. `#` starts a comment.
pub fn parse(text: &str) -> Result<Diagram> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let d = p.term()?;
    if p.pos < p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_atoms() {
        assert_eq!(parse("sigma").unwrap(), Diagram::Sigma);
        assert_eq!(parse(" id[3] ").unwrap(), Diagram::Id(3));
        assert_eq!(parse("gen(f)").unwrap(), Diagram::Gen("f".into()));
    }

    #[test]
    fn precedence_and_associativity() {
        let d = parse("sigma * id[1] ; delta * id[1] * eps").unwrap();
        let expected = Diagram::vert(
            Diagram::horiz(Diagram::Sigma, Diagram::Id(1)),
            Diagram::horiz(Diagram::horiz(Diagram::Delta, Diagram::Id(1)), Diagram::Epsilon),
        );
        assert_eq!(d, expected);
        assert_eq!(parse("(sigma * id[1]) ; (delta * id[1] * eps)").unwrap(), expected);
        let chain = parse("sigma ; sigma ; sigma").unwrap();
        assert_eq!(chain, Diagram::vert(Diagram::vert(Diagram::Sigma, Diagram::Sigma), Diagram::Sigma));
    }

    #[test]
    fn trailing_semicolon_fails_at_end() {
        let text = "delta ;";
        match parse(text) {
            Err(Error::Syntax { pos, msg }) => {
                assert_eq!(pos, text.len());
                assert!(msg.contains("end of input"), "{msg}");
            }
            other => panic!("expected a syntax error, got {other:?}"),
        }
        assert!(parse("id[x]").is_err());
        assert!(parse("(sigma").is_err());
        assert!(parse("sigma sigma").is_err());
    }

    #[test]
    fn printer_round_trips() {
        for text in [
            "sigma * (delta ; sigma)",
            "(sigma ; sigma) * id[2]",
            "sigma ; (delta ; eps * id[1])",
            "gen(f) * gen(g) ; sigma",
            "id[0]",
        ] {
            let d = parse(text).unwrap();
            assert_eq!(parse(&d.to_string()).unwrap(), d, "{text}");
        }
    }
}
