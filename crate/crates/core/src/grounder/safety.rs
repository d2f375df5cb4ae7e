use thiserror::Error;

use crate::model::{BuiltinKind, Rule, Sym, SymbolTable, Term};
use crate::parser::SourceSpan;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: unsafe variable `{variable}`")]
pub struct SafetyError {
    pub span: SourceSpan,
    pub variable: String,
}

fn bound(t: &Term, safe: &[Sym]) -> bool {
    match t {
        Term::Const(_) => true,
        Term::Var(v) => safe.contains(v),
    }
}

/// Variables bound by the positive body or derivable from it through
/// `#int`, `#succ` (second argument) and arithmetic (result argument).
pub(crate) fn safe_variables(rule: &Rule) -> Vec<Sym> {
    let mut safe: Vec<Sym> = Vec::new();
    for l in &rule.pos_body {
        for v in l.atom.vars() {
            if !safe.contains(&v) {
                safe.push(v);
            }
        }
    }
    loop {
        let mut changed = false;
        for b in &rule.builtins {
            let target = match b.kind {
                BuiltinKind::Int => Some(&b.args[0]),
                BuiltinKind::Succ if bound(&b.args[0], &safe) => Some(&b.args[1]),
                BuiltinKind::Plus | BuiltinKind::Times
                    if bound(&b.args[0], &safe) && bound(&b.args[1], &safe) =>
                {
                    Some(&b.args[2])
                }
                _ => None,
            };
            if let Some(Term::Var(v)) = target {
                if !safe.contains(v) {
                    safe.push(*v);
                    changed = true;
                }
            }
        }
        if !changed {
            return safe;
        }
    }
}

pub fn check_safety(rule: &Rule, symbols: &SymbolTable) -> Result<(), SafetyError> {
    let safe = safe_variables(rule);
    match rule.variables().into_iter().find(|v| !safe.contains(v)) {
        None => Ok(()),
        Some(v) => Err(SafetyError {
            span: rule.span.clone(),
            variable: if symbols.is_anonymous(v) {
                "_".to_string()
            } else {
                symbols.name(v).to_string()
            },
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn check(src: &str) -> Result<(), SafetyError> {
        let p = parse_program(src).unwrap();
        check_safety(&p.rules[0], &p.symbols)
    }

    #[test]
    fn positive_occurrence_is_safe() {
        assert!(check("p(X) :- q(X).").is_ok());
    }

    #[test]
    fn negation_only_is_unsafe() {
        let e = check("p(X) :- not q(X).").unwrap_err();
        assert_eq!(e.variable, "X");
    }

    #[test]
    fn arithmetic_output_is_safe() {
        assert!(check("p(Z) :- q(X), Z = X + X.").is_ok());
        assert!(check("p(Z) :- q(X), Z = X * Y.").is_err());
        assert!(check("p(Y) :- q(X), #succ(X,Y).").is_ok());
        assert!(check("p(X) :- q(Y), #succ(X,Y).").is_err());
        assert!(check("p(X) :- #int(X).").is_ok());
        assert!(check("p(Y) :- #int(X), Y = X + 1.").is_ok());
    }

    #[test]
    fn comparisons_do_not_bind() {
        assert!(check("p(X) :- q(Y), X = Y.").is_err());
        assert!(check("p(X) :- q(X), X < 3.").is_ok());
        assert!(check(":- q(X), X < Y.").is_err());
    }

    #[test]
    fn facts_with_variables_are_unsafe() {
        assert!(check("p(X).").is_err());
        assert!(check("p(a).").is_ok());
    }
}
