//! Printing programs back in the input syntax.

use std::fmt;

use crate::model::{BuiltinAtom, BuiltinKind, Literal, Program, Rule, SymbolTable, Term};
use crate::parser::Query;

pub struct TermDisplay<'a>(pub &'a SymbolTable, pub Term);

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.1 {
            Term::Var(v) if self.0.is_anonymous(v) => f.write_str("_"),
            Term::Var(v) => f.write_str(self.0.name(v)),
            Term::Const(c) => write!(f, "{}", self.0.value(c)),
        }
    }
}

pub struct LiteralDisplay<'a>(pub &'a SymbolTable, pub &'a Literal);

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let LiteralDisplay(symbols, lit) = *self;
        if lit.strong_neg {
            f.write_str("-")?;
        }
        f.write_str(symbols.pred_name(lit.atom.pred))?;
        if !lit.atom.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in lit.atom.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", TermDisplay(symbols, *t))?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub struct BuiltinDisplay<'a>(pub &'a SymbolTable, pub &'a BuiltinAtom);

impl fmt::Display for BuiltinDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let BuiltinDisplay(s, b) = *self;
        let t = |i: usize| TermDisplay(s, b.args[i]);
        match b.kind {
            BuiltinKind::Int => write!(f, "#int({})", t(0)),
            BuiltinKind::Succ => write!(f, "#succ({},{})", t(0), t(1)),
            BuiltinKind::Cmp(op) => write!(f, "{} {} {}", t(0), op.symbol(), t(1)),
            BuiltinKind::Plus => write!(f, "{} = {} + {}", t(2), t(0), t(1)),
            BuiltinKind::Times => write!(f, "{} = {} * {}", t(2), t(0), t(1)),
        }
    }
}

pub struct RuleDisplay<'a>(pub &'a SymbolTable, pub &'a Rule);

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let RuleDisplay(s, r) = *self;
        for (i, h) in r.head.iter().enumerate() {
            if i > 0 {
                f.write_str(" v ")?;
            }
            write!(f, "{}", LiteralDisplay(s, h))?;
        }
        if r.body_len() > 0 {
            if r.head.is_empty() {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            let mut first = true;
            let mut sep = |f: &mut fmt::Formatter<'_>| {
                if first {
                    first = false;
                    Ok(())
                } else {
                    f.write_str(", ")
                }
            };
            for l in &r.pos_body {
                sep(f)?;
                write!(f, "{}", LiteralDisplay(s, l))?;
            }
            for l in &r.neg_body {
                sep(f)?;
                write!(f, "not {}", LiteralDisplay(s, l))?;
            }
            for b in &r.builtins {
                sep(f)?;
                write!(f, "{}", BuiltinDisplay(s, b))?;
            }
        } else if r.head.is_empty() {
            f.write_str(":-")?;
        }
        f.write_str(".")
    }
}

/// One rule per line.
pub struct ProgramDisplay<'a> {
    program: &'a Program,
}

impl<'a> ProgramDisplay<'a> {
    pub fn new(program: &'a Program) -> Self {
        Self { program }
    }
}

impl fmt::Display for ProgramDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.program.rules {
            writeln!(f, "{}", RuleDisplay(&self.program.symbols, r))?;
        }
        Ok(())
    }
}

pub struct QueryDisplay<'a>(pub &'a SymbolTable, pub &'a Query);

impl fmt::Display for QueryDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.1.conjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if c.default_neg {
                f.write_str("not ")?;
            }
            write!(f, "{}", LiteralDisplay(self.0, &c.literal))?;
        }
        f.write_str("?")
    }
}
