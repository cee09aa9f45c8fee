//! Recursive-descent parser for the `.fol` sentence syntax.
//!
//! ```text
//! formula := quant | disj            (-> and <-> bind weakest, to the right)
//! quant   := ("forall"|"exists") VAR+ "." formula
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "~" unary | "(" formula ")" | atom
//! atom    := LPRED ("(" term ("," term)* ")")? | term "=" term | $true | $false
//! term    := VAR | LSYM ("(" term ("," term)* ")")?
//! ```
//!
//! `%` starts a comment running to the end of the line.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::syntax::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("arity mismatch for `{symbol}`: used with {seen} arguments, expected {expected}")]
    ArityMismatch { symbol: String, seen: usize, expected: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Sym(String),
    Forall,
    Exists,
    LParen,
    RParen,
    Comma,
    Dot,
    And,
    Or,
    Not,
    Eq,
    Implies,
    Iff,
    True,
    False,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, what: &str| ParseError::Syntax { line, col, expected: what.to_string() };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' | ')' | ',' | '.' | '&' | '|' | '~' | '=' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '&' => Tok::And,
                    '|' => Tok::Or,
                    '~' => Tok::Not,
                    _ => Tok::Eq,
                };
                out.push(Spanned { tok, line: l0, col: c0 });
                advance(1, &mut i, &mut col);
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Spanned { tok: Tok::Implies, line: l0, col: c0 });
                advance(2, &mut i, &mut col);
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                out.push(Spanned { tok: Tok::Iff, line: l0, col: c0 });
                advance(3, &mut i, &mut col);
            }
            '$' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => return Err(err(l0, c0, "`$true` or `$false`")),
                };
                out.push(Spanned { tok, line: l0, col: c0 });
                let n = j - i;
                advance(n, &mut i, &mut col);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ if c.is_ascii_uppercase() || c == '_' => Tok::Var(word),
                    _ => Tok::Sym(word),
                };
                out.push(Spanned { tok, line: l0, col: c0 });
                let n = j - i;
                advance(n, &mut i, &mut col);
            }
            _ => return Err(err(l0, c0, "a token")),
        }
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError::Syntax { line: s.line, col: s.col, expected: expected.to_string() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = match self.peek() {
            Tok::Forall | Tok::Exists => return self.quant(),
            _ => self.disj()?,
        };
        match self.peek() {
            Tok::Implies => {
                self.bump();
                let rhs = self.formula()?;
                Ok(Formula::Or(vec![Formula::negate(lhs), rhs]))
            }
            Tok::Iff => {
                self.bump();
                let rhs = self.formula()?;
                Ok(Formula::And(vec![
                    Formula::Or(vec![Formula::negate(lhs.clone()), rhs.clone()]),
                    Formula::Or(vec![lhs, Formula::negate(rhs)]),
                ]))
            }
            _ => Ok(lhs),
        }
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        let universal = self.bump() == Tok::Forall;
        let mut vars = Vec::new();
        while let Tok::Var(v) = self.peek() {
            vars.push(v.clone());
            self.bump();
        }
        if vars.is_empty() {
            return self.fail("a variable");
        }
        self.expect(Tok::Dot, "`.`")?;
        let body = Box::new(self.formula()?);
        Ok(if universal { Formula::Forall(vars, body) } else { Formula::Exists(vars, body) })
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.conj()?];
        while *self.peek() == Tok::Or {
            self.bump();
            items.push(self.conj()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Formula::Or(items) })
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Formula::And(items) })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::negate(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Var(_) => {
                let lhs = self.term()?;
                self.expect(Tok::Eq, "`=`")?;
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::Sym(_) => {
                let (name, args) = self.symbol_application()?;
                if *self.peek() == Tok::Eq {
                    self.bump();
                    let lhs = Term::app(&name, args);
                    Ok(Formula::Eq(lhs, self.term()?))
                } else {
                    Ok(Formula::Atom(name, args))
                }
            }
            _ => self.fail("a formula"),
        }
    }

    fn symbol_application(&mut self) -> Result<(String, Vec<Term>), ParseError> {
        let name = match self.bump() {
            Tok::Sym(s) => s,
            _ => unreachable!(),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "`)` or `,`")?;
        }
        Ok((name, args))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Var(v) => {
                let t = Term::Var(v.clone());
                self.bump();
                Ok(t)
            }
            Tok::Sym(_) => {
                let (name, args) = self.symbol_application()?;
                Ok(Term::app(&name, args))
            }
            _ => self.fail("a term"),
        }
    }
}

/// Parse one sentence and check that every symbol is used with one arity.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    check_arities(&f)?;
    Ok(f)
}

fn check_arities(f: &Formula) -> Result<(), ParseError> {
    let mut preds: BTreeMap<String, usize> = BTreeMap::new();
    let mut funcs: BTreeMap<String, usize> = BTreeMap::new();
    let note = |table: &mut BTreeMap<String, usize>, s: &str, k: usize| match table.get(s) {
        Some(&e) if e != k => {
            Err(ParseError::ArityMismatch { symbol: s.to_string(), seen: k, expected: e })
        }
        Some(_) => Ok(()),
        None => {
            table.insert(s.to_string(), k);
            Ok(())
        }
    };
    let mut result = Ok(());
    f.walk(&mut |g| {
        if result.is_err() {
            return;
        }
        let mut symbols = Vec::new();
        match g {
            Formula::Atom(p, args) => {
                result = note(&mut preds, p, args.len());
                args.iter().for_each(|t| t.collect_functions(&mut symbols));
            }
            Formula::Eq(a, b) => {
                a.collect_functions(&mut symbols);
                b.collect_functions(&mut symbols);
            }
            _ => {}
        }
        for (s, k) in symbols {
            if result.is_ok() {
                result = note(&mut funcs, &s, k);
            }
        }
    });
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantified_atom() {
        let f = parse("forall X. p(X)").unwrap();
        assert_eq!(f, Formula::Forall(vec!["X".into()], Box::new(Formula::atom("p", vec![Term::var("X")]))));
    }

    #[test]
    fn arity_mismatch_reports_new_then_old() {
        assert_eq!(
            parse("p(X) & p(X,Y)"),
            Err(ParseError::ArityMismatch { symbol: "p".into(), seen: 2, expected: 1 })
        );
    }

    #[test]
    fn syntax_error_position() {
        match parse("forall X.\n  p(X) &") {
            Err(ParseError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 9)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn implication_is_right_associative_and_weakest() {
        let f = parse("p -> q -> r").unwrap();
        let g = parse("~p | (~q | r)").unwrap();
        assert_eq!(f, g);
        let h = parse("p & q -> r").unwrap();
        assert_eq!(h, parse("~(p & q) | r").unwrap());
    }

    #[test]
    fn equality_and_comments() {
        let f = parse("% leading comment\nforall X. c = X % trailing\n").unwrap();
        assert_eq!(f, Formula::Forall(vec!["X".into()], Box::new(Formula::Eq(Term::constant("c"), Term::var("X")))));
        // The grammar reads a lowercase application left of `=` as a term.
        let g = parse("forall X. p(X)=p(X)").unwrap();
        let t = Term::app("p", vec![Term::var("X")]);
        assert_eq!(g, Formula::Forall(vec!["X".into()], Box::new(Formula::Eq(t.clone(), t))));
    }

    #[test]
    fn quantifier_needs_parentheses_inside_conjunction() {
        assert!(parse("p & forall X. q(X)").is_err());
        assert!(parse("p & (forall X. q(X))").is_ok());
    }

    #[test]
    fn serialization_examples() {
        let f = parse("forall X. p(X)").unwrap();
        assert_eq!(f.to_string(), "forall X. p(X)");
        let g = Formula::Or(vec![Formula::atom("a", vec![]), Formula::atom("b", vec![]), Formula::atom("c", vec![])]);
        assert_eq!(g.to_string(), "(a | b | c)");
        assert_eq!(parse(&g.to_string()).unwrap(), g);
    }
}
