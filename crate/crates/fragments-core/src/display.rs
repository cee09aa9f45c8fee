//! Concrete syntax output. `parse(&f.to_string())` rebuilds `f` for every
//! formula the parser can produce.

use core::fmt;

use crate::syntax::{Formula, Literal, Term};

impl fmt::Display for Term {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => out.write_str(v),
            Term::Const(c) => out.write_str(c),
            Term::App(g, args) => {
                write!(out, "{g}(")?;
                write_list(out, args, ",")?;
                out.write_str(")")
            }
        }
    }
}

fn write_list<T: fmt::Display>(out: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            out.write_str(sep)?;
        }
        write!(out, "{t}")?;
    }
    Ok(())
}

fn strip_frozen(f: &Formula) -> &Formula {
    match f {
        Formula::Frozen(_, g) => strip_frozen(g),
        g => g,
    }
}

/// Operands of `&`, `|` and `~` that the grammar only accepts in parentheses.
fn needs_parens(f: &Formula) -> bool {
    matches!(strip_frozen(f), Formula::Forall(..) | Formula::Exists(..) | Formula::Eq(..))
}

fn write_operand(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    if needs_parens(f) {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, args) => {
                out.write_str(p)?;
                if !args.is_empty() {
                    out.write_str("(")?;
                    write_list(out, args, ",")?;
                    out.write_str(")")?;
                }
                Ok(())
            }
            Formula::Eq(a, b) => write!(out, "{a} = {b}"),
            Formula::Not(g) => {
                out.write_str("~")?;
                write_operand(out, g)
            }
            Formula::And(cs) | Formula::Or(cs) => {
                let sep = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                out.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.write_str(sep)?;
                    }
                    match strip_frozen(c) {
                        Formula::Forall(..) | Formula::Exists(..) => write!(out, "({c})")?,
                        _ => write!(out, "{c}")?,
                    }
                }
                out.write_str(")")
            }
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                let kw = if matches!(self, Formula::Forall(..)) { "forall" } else { "exists" };
                write!(out, "{kw} ")?;
                write_list(out, vs, " ")?;
                write!(out, ". {g}")
            }
            Formula::Frozen(_, g) => write!(out, "{g}"),
            Formula::True => out.write_str("$true"),
            Formula::False => out.write_str("$false"),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.to_formula())
    }
}
