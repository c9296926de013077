use std::collections::{BTreeSet, HashMap};

use super::{Formula, Quantifier, Var};
use crate::error::{Error, Result};
use crate::structures::{Element, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Amp,
    Bar,
    Tilde,
    Eq,
    Neq,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Token { tok, line: tl, col: tc });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '{' => push(Tok::LBrace, 1, &mut i, &mut col),
            '}' => push(Tok::RBrace, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '&' => push(Tok::Amp, 1, &mut i, &mut col),
            '|' => push(Tok::Bar, 1, &mut i, &mut col),
            '~' => push(Tok::Tilde, 1, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '!' if chars.get(i + 1) == Some(&'=') => push(Tok::Neq, 2, &mut i, &mut col),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse()
                    .map_err(|_| Error::parse(tl, tc, format!("number `{s}` too large")))?;
                col += i - start;
                out.push(Token { tok: Tok::Num(n), line: tl, col: tc });
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: tl,
                    col: tc,
                });
            }
            other => return Err(Error::parse(tl, tc, format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["forall", "exists", "in", "true", "false"];

struct Parser<'s> {
    tokens: Vec<Token>,
    pos: usize,
    scope: Vec<Var>,
    signature: Option<&'s Signature>,
    arities: HashMap<String, usize>,
}

impl<'s> Parser<'s> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(t.line, t.col, msg))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            self.err(&t, format!("expected {what}, found {}", describe(&t.tok)))
        }
    }

    fn variable(&mut self) -> Result<(Var, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok((s.clone(), t.clone())),
            other => self.err(&t, format!("expected a variable, found {}", describe(other))),
        }
    }

    fn bound_variable(&mut self) -> Result<Var> {
        let (v, t) = self.variable()?;
        if !self.scope.contains(&v) {
            return self.err(&t, format!("unbound variable `{v}`"));
        }
        Ok(v)
    }

    fn formula(&mut self) -> Result<Formula> {
        match &self.peek().tok {
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quant(),
            _ => self.disj(),
        }
    }

    fn quant(&mut self) -> Result<Formula> {
        let kw = self.next();
        let kind = match &kw.tok {
            Tok::Ident(k) if k == "forall" => Quantifier::Forall,
            _ => Quantifier::Exists,
        };
        let (var, vt) = self.variable()?;
        if self.scope.contains(&var) {
            return self.err(&vt, format!("variable `{var}` shadows an enclosing binding"));
        }
        let mut restriction = None;
        if matches!(&self.peek().tok, Tok::Ident(k) if k == "in") {
            self.next();
            self.expect(Tok::LBrace, "`{`")?;
            let mut set: BTreeSet<Element> = BTreeSet::new();
            loop {
                let t = self.next();
                match t.tok {
                    Tok::Num(n) => {
                        set.insert(n);
                    }
                    ref other => return self.err(&t, format!("expected an element, found {}", describe(other))),
                }
                let t = self.next();
                match t.tok {
                    Tok::Comma => continue,
                    Tok::RBrace => break,
                    ref other => return self.err(&t, format!("expected `,` or `}}`, found {}", describe(other))),
                }
            }
            restriction = Some(set);
        }
        self.expect(Tok::Dot, "`.`")?;
        self.scope.push(var.clone());
        let body = self.formula()?;
        self.scope.pop();
        Ok(Formula::Quant {
            kind,
            var,
            restriction,
            body: Box::new(body),
        })
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut items = vec![self.conj()?];
        while self.peek().tok == Tok::Bar {
            self.next();
            items.push(self.conj()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        })
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut items = vec![self.unit()?];
        while self.peek().tok == Tok::Amp {
            self.next();
            items.push(self.unit()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        })
    }

    fn unit(&mut self) -> Result<Formula> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Tilde => {
                self.next();
                Ok(Formula::Not(Box::new(self.unit()?)))
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(k) if k == "true" || k == "false" => {
                self.next();
                Ok(Formula::Const(k == "true"))
            }
            Tok::Ident(k) if k == "forall" || k == "exists" => {
                self.err(&t, "a quantified formula here must be parenthesised")
            }
            Tok::Ident(name) => {
                if self.tokens[self.pos + 1].tok == Tok::LParen {
                    self.next();
                    self.next();
                    let mut args = vec![self.bound_variable()?];
                    while self.peek().tok == Tok::Comma {
                        self.next();
                        args.push(self.bound_variable()?);
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    self.check_arity(name, args.len(), &t)?;
                    Ok(Formula::Atom {
                        symbol: name.clone(),
                        args,
                    })
                } else {
                    let a = self.bound_variable()?;
                    let op = self.next();
                    let negated = match op.tok {
                        Tok::Eq => false,
                        Tok::Neq => true,
                        ref other => {
                            return self.err(&op, format!("expected `=`, `!=` or `(`, found {}", describe(other)))
                        }
                    };
                    let b = self.bound_variable()?;
                    let eq = Formula::Eq(a, b);
                    Ok(if negated { Formula::Not(Box::new(eq)) } else { eq })
                }
            }
            other => self.err(&t, format!("expected a formula, found {}", describe(other))),
        }
    }

    fn check_arity(&mut self, name: &str, found: usize, t: &Token) -> Result<()> {
        let expected = match self.signature {
            Some(sig) => match sig.arity_of(name) {
                Some(a) => a,
                None => return self.err(t, format!("unknown relation symbol `{name}`")),
            },
            None => *self.arities.entry(name.to_string()).or_insert(found),
        };
        if expected != found {
            return self.err(
                t,
                format!("`{name}` has arity {expected}, used with {found} arguments"),
            );
        }
        Ok(())
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Neq => "`!=`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses a sentence. With a signature, symbols and arities are checked
/// against it; without one, each symbol must be used with a single arity.
pub fn parse_formula(text: &str, signature: Option<&Signature>) -> Result<Formula> {
    parse_formula_with_free(text, &[], signature)
}

/// Parses a formula whose free variables are among `free`.
pub fn parse_formula_with_free(
    text: &str,
    free: &[&str],
    signature: Option<&Signature>,
) -> Result<Formula> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
        scope: free.iter().map(|s| s.to_string()).collect(),
        signature,
        arities: HashMap::new(),
    };
    let f = p.formula()?;
    let t = p.peek().clone();
    if t.tok != Tok::End {
        return p.err(&t, format!("unexpected {} after formula", describe(&t.tok)));
    }
    Ok(f)
}
