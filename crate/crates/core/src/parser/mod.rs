//! Concrete syntax.
//!
//! ```text
//! input      ::= { statement }
//! statement  ::= rule | constraint | query | candidate
//! rule       ::= head [ ":-" body ] "."
//! constraint ::= ":-" body "."
//! query      ::= qlit { "," qlit } "?"
//! candidate  ::= "{" [ classical { "," classical } ] "}"
//! head       ::= classical { ( "v" | "|" ) classical }
//! body       ::= belem { "," belem }
//! belem      ::= classical | "not" classical | builtin
//! qlit       ::= classical | "not" classical
//! classical  ::= [ "-" ] IDENT [ "(" term { "," term } ")" ]
//! builtin    ::= "#int" "(" term ")" | "#succ" "(" term "," term ")"
//!              | term CMP term | term "=" term ( "+" | "*" ) term
//! CMP        ::= "<" | "<=" | ">" | ">=" | "=" | "!=" | "<>"
//! term       ::= VARIABLE | "_" | IDENT | INTEGER | STRING
//! ```
//!
//! `%` starts a comment running to the end of the line.

mod lexer;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{
    Atom, BuiltinAtom, BuiltinKind, CmpOp, Literal, Program, Rule, SymbolTable, Term, Value,
};
use lexer::{Tok, Token};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub line: u32,
    pub column: u32,
}

impl SourceSpan {
    pub fn unknown() -> Self {
        Self {
            file: Arc::from("<input>"),
            line: 1,
            column: 1,
        }
    }
}

impl Default for SourceSpan {
    fn default() -> Self {
        Self::unknown()
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: predicate `{predicate}` used with arity {found}, but earlier with arity {expected}")]
pub struct ArityError {
    pub span: SourceSpan,
    pub predicate: String,
    pub expected: usize,
    pub found: usize,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LoadError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("arity error at {0}")]
    Arity(#[from] ArityError),
}

impl LoadError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            LoadError::Parse(e) => &e.span,
            LoadError::Arity(e) => &e.span,
        }
    }
}

/// One conjunct of a query; `default_neg` marks the `not l` form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QueryLiteral {
    pub literal: Literal,
    pub default_neg: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub conjuncts: Vec<QueryLiteral>,
    pub span: SourceSpan,
}

impl Query {
    /// Query variables in order of first occurrence.
    pub fn variables(&self) -> Vec<crate::model::Sym> {
        let mut out = Vec::new();
        for c in &self.conjuncts {
            for v in c.literal.atom.vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.conjuncts.iter().all(|c| c.literal.is_ground())
    }
}

/// Everything read from the input stream: rules, at most one query and at
/// most one candidate set (`{...}`, used by the checking mode).
#[derive(Clone, Debug, Default)]
pub struct Input {
    pub program: Program,
    pub query: Option<Query>,
    pub candidate: Option<(Vec<Literal>, SourceSpan)>,
}

impl Input {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `src` and appends its statements. Files are read in order into
    /// one shared program, which is equivalent to concatenating them.
    pub fn add_source(&mut self, file: &str, src: &str) -> Result<(), LoadError> {
        let file: Arc<str> = Arc::from(file);
        let tokens = lexer::tokenize(&file, src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            input: self,
        };
        while !p.at(&Tok::Eof) {
            p.statement()?;
        }
        Ok(())
    }
}

/// Parses a program consisting of rules only.
pub fn parse_program(source: &str) -> Result<Program, LoadError> {
    let mut input = Input::new();
    input.add_source("<input>", source)?;
    if let Some(q) = input.query {
        return Err(ParseError {
            span: q.span,
            message: "unexpected query in program".into(),
        }
        .into());
    }
    if let Some((_, span)) = input.candidate {
        return Err(ParseError {
            span,
            message: "unexpected candidate set in program".into(),
        }
        .into());
    }
    Ok(input.program)
}

/// Parses a single query (`l1, ..., lk?`) against the names of `program`.
pub fn parse_query(source: &str, program: &mut Program) -> Result<Query, LoadError> {
    let mut input = Input {
        program: std::mem::take(program),
        query: None,
        candidate: None,
    };
    let n_rules = input.program.rules.len();
    let res = input.add_source("<query>", source);
    *program = input.program;
    res?;
    if program.rules.len() != n_rules || input.candidate.is_some() {
        program.rules.truncate(n_rules);
        return Err(ParseError {
            span: SourceSpan {
                file: Arc::from("<query>"),
                line: 1,
                column: 1,
            },
            message: "expected a query terminated by `?`".into(),
        }
        .into());
    }
    input.query.ok_or_else(|| {
        ParseError {
            span: SourceSpan {
                file: Arc::from("<query>"),
                line: 1,
                column: 1,
            },
            message: "empty query".into(),
        }
        .into()
    })
}

enum BodyElem {
    Pos(Literal),
    Neg(Literal),
    Builtin(BuiltinAtom),
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    input: &'a mut Input,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, LoadError> {
        Err(ParseError {
            span: self.span(),
            message: message.into(),
        }
        .into())
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, LoadError> {
        self.error(format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, t: Tok) -> Result<(), LoadError> {
        if self.at(&t) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&t.describe())
        }
    }

    fn symbols(&mut self) -> &mut SymbolTable {
        self.input.program.symbols_mut()
    }

    fn is_or(&self) -> bool {
        matches!(self.peek(), Tok::Bar) || matches!(self.peek(), Tok::Ident(s) if s == "v")
    }

    fn statement(&mut self) -> Result<(), LoadError> {
        let span = self.span();
        match self.peek() {
            Tok::If => {
                self.bump();
                // `:- .` is the always-violated constraint
                let body = if self.at(&Tok::Dot) { Vec::new() } else { self.body()? };
                self.expect(Tok::Dot)?;
                self.push_rule(Vec::new(), body, span);
                Ok(())
            }
            Tok::LBrace => self.candidate(span),
            Tok::Question => self.error("empty query"),
            _ => {
                let first_span = self.span();
                let first = self.body_elem()?;
                if self.is_or() || self.at(&Tok::If) || self.at(&Tok::Dot) {
                    let mut head = vec![self.head_literal(first, first_span)?];
                    while self.is_or() {
                        self.bump();
                        let s = self.span();
                        let e = self.body_elem()?;
                        head.push(self.head_literal(e, s)?);
                    }
                    let body = if self.at(&Tok::If) {
                        self.bump();
                        self.body()?
                    } else {
                        Vec::new()
                    };
                    self.expect(Tok::Dot)?;
                    self.push_rule(head, body, span);
                    Ok(())
                } else if self.at(&Tok::Comma) || self.at(&Tok::Question) {
                    self.query(first, first_span, span)
                } else {
                    self.unexpected("`v`, `:-`, `.`, `,` or `?`")
                }
            }
        }
    }

    fn head_literal(&self, e: BodyElem, span: SourceSpan) -> Result<Literal, LoadError> {
        match e {
            BodyElem::Pos(l) => Ok(l),
            BodyElem::Neg(_) => Err(ParseError {
                span,
                message: "`not` is not allowed in rule heads".into(),
            }
            .into()),
            BodyElem::Builtin(_) => Err(ParseError {
                span,
                message: "built-ins are not allowed in rule heads".into(),
            }
            .into()),
        }
    }

    fn push_rule(&mut self, head: Vec<Literal>, body: Vec<BodyElem>, span: SourceSpan) {
        let mut rule = Rule {
            head,
            pos_body: Vec::new(),
            neg_body: Vec::new(),
            builtins: Vec::new(),
            span,
        };
        for e in body {
            match e {
                BodyElem::Pos(l) => rule.pos_body.push(l),
                BodyElem::Neg(l) => rule.neg_body.push(l),
                BodyElem::Builtin(b) => rule.builtins.push(b),
            }
        }
        self.input.program.rules.push(rule);
    }

    fn query(
        &mut self,
        first: BodyElem,
        first_span: SourceSpan,
        span: SourceSpan,
    ) -> Result<(), LoadError> {
        let mut elems = vec![(first, first_span)];
        while self.at(&Tok::Comma) {
            self.bump();
            let s = self.span();
            elems.push((self.body_elem()?, s));
        }
        if !self.at(&Tok::Question) {
            return self.unexpected("`,` or `?`");
        }
        self.bump();
        let mut conjuncts = Vec::new();
        for (e, s) in elems {
            match e {
                BodyElem::Pos(literal) => conjuncts.push(QueryLiteral {
                    literal,
                    default_neg: false,
                }),
                BodyElem::Neg(literal) => conjuncts.push(QueryLiteral {
                    literal,
                    default_neg: true,
                }),
                BodyElem::Builtin(_) => {
                    return Err(ParseError {
                        span: s,
                        message: "built-ins are not allowed in queries".into(),
                    }
                    .into())
                }
            }
        }
        if self.input.query.is_some() {
            return Err(ParseError {
                span,
                message: "at most one query is allowed".into(),
            }
            .into());
        }
        self.input.query = Some(Query { conjuncts, span });
        Ok(())
    }

    fn candidate(&mut self, span: SourceSpan) -> Result<(), LoadError> {
        self.expect(Tok::LBrace)?;
        let mut lits = Vec::new();
        if !self.at(&Tok::RBrace) {
            loop {
                let s = self.span();
                if !matches!(self.peek(), Tok::Ident(_) | Tok::Minus) {
                    return self.unexpected("a ground literal");
                }
                let l = self.classical()?;
                if !l.is_ground() {
                    return Err(ParseError {
                        span: s,
                        message: "candidate literals must be ground".into(),
                    }
                    .into());
                }
                lits.push(l);
                if self.at(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        if self.input.candidate.is_some() {
            return Err(ParseError {
                span,
                message: "at most one candidate set is allowed".into(),
            }
            .into());
        }
        self.input.candidate = Some((lits, span));
        Ok(())
    }

    fn body(&mut self) -> Result<Vec<BodyElem>, LoadError> {
        let mut out = vec![self.body_elem()?];
        while self.at(&Tok::Comma) {
            self.bump();
            out.push(self.body_elem()?);
        }
        Ok(out)
    }

    fn body_elem(&mut self) -> Result<BodyElem, LoadError> {
        match self.peek().clone() {
            Tok::Ident(w) if w == "not" => {
                self.bump();
                if !matches!(self.peek(), Tok::Ident(_) | Tok::Minus) {
                    return self.unexpected("a literal after `not`");
                }
                Ok(BodyElem::Neg(self.classical()?))
            }
            Tok::Builtin(name) => {
                self.bump();
                let kind = if name == "#int" {
                    BuiltinKind::Int
                } else {
                    BuiltinKind::Succ
                };
                self.expect(Tok::LParen)?;
                let mut args = vec![self.term()?];
                while self.at(&Tok::Comma) {
                    self.bump();
                    args.push(self.term()?);
                }
                if args.len() != kind.arity() {
                    return self.error(format!(
                        "`{name}` takes {} argument(s), found {}",
                        kind.arity(),
                        args.len()
                    ));
                }
                self.expect(Tok::RParen)?;
                Ok(BodyElem::Builtin(BuiltinAtom { kind, args }))
            }
            Tok::Minus => Ok(BodyElem::Pos(self.classical()?)),
            Tok::Ident(_) => {
                // a bare constant followed by a comparison operator
                let checkpoint = self.pos;
                let name = match self.bump().tok {
                    Tok::Ident(n) => n,
                    _ => unreachable!(),
                };
                if self.cmp_op().is_some() {
                    let sym = self.symbols().intern(&name);
                    return self.comparison(Term::Const(Value::Sym(sym)));
                }
                self.pos = checkpoint;
                Ok(BodyElem::Pos(self.classical()?))
            }
            Tok::Var(_) | Tok::Int(_) | Tok::Str(_) => {
                let lhs = self.term()?;
                self.comparison(lhs)
            }
            _ => self.unexpected("a literal or built-in"),
        }
    }

    fn cmp_op(&self) -> Option<CmpOp> {
        Some(match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            _ => return None,
        })
    }

    fn comparison(&mut self, lhs: Term) -> Result<BodyElem, LoadError> {
        let Some(op) = self.cmp_op() else {
            return self.unexpected("a comparison operator");
        };
        self.bump();
        let rhs = self.term()?;
        if op == CmpOp::Eq && matches!(self.peek(), Tok::Plus | Tok::Star) {
            let kind = if self.at(&Tok::Plus) {
                BuiltinKind::Plus
            } else {
                BuiltinKind::Times
            };
            self.bump();
            let rhs2 = self.term()?;
            return Ok(BodyElem::Builtin(BuiltinAtom {
                kind,
                args: vec![rhs, rhs2, lhs],
            }));
        }
        Ok(BodyElem::Builtin(BuiltinAtom {
            kind: BuiltinKind::Cmp(op),
            args: vec![lhs, rhs],
        }))
    }

    fn term(&mut self) -> Result<Term, LoadError> {
        let t = match self.peek().clone() {
            Tok::Var(v) if v == "_" => Term::Var(self.symbols().fresh_anonymous()),
            Tok::Var(v) => Term::Var(self.symbols().intern(&v)),
            Tok::Ident(c) => Term::Const(Value::Sym(self.symbols().intern(&c))),
            Tok::Str(c) => Term::Const(Value::Sym(self.symbols().intern(&c))),
            Tok::Int(i) => Term::Const(Value::Int(i)),
            _ => return self.unexpected("a term"),
        };
        self.bump();
        Ok(t)
    }

    fn classical(&mut self) -> Result<Literal, LoadError> {
        let strong_neg = if self.at(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let span = self.span();
        let name = match self.peek() {
            Tok::Ident(n) if n != "not" => n.clone(),
            _ => return self.unexpected("a predicate name"),
        };
        self.bump();
        let mut args = Vec::new();
        if self.at(&Tok::LParen) {
            self.bump();
            args.push(self.term()?);
            while self.at(&Tok::Comma) {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen)?;
        }
        let pred = match self.symbols().predicate(&name, args.len()) {
            Ok(p) => p,
            Err(expected) => {
                return Err(ArityError {
                    span,
                    predicate: name,
                    expected,
                    found: args.len(),
                }
                .into())
            }
        };
        Ok(Literal::new(Atom { pred, args }, strong_neg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::print::ProgramDisplay;

    fn roundtrip(src: &str) -> String {
        let p = parse_program(src).unwrap();
        ProgramDisplay::new(&p).to_string()
    }

    #[test]
    fn disjunctive_guess_rule() {
        let p = parse_program("inPath(X,Y) v outPath(X,Y) :- arc(X,Y).").unwrap();
        assert_eq!(p.rules.len(), 1);
        let r = &p.rules[0];
        assert_eq!(r.head.len(), 2);
        assert_eq!(r.pos_body.len(), 1);
        assert_eq!(p.symbols.pred_name(r.pos_body[0].atom.pred), "arc");
        assert!(r.neg_body.is_empty());
    }

    #[test]
    fn constraint_with_default_negation() {
        let p = parse_program(":- node(X), not reached(X).").unwrap();
        let r = &p.rules[0];
        assert!(r.is_constraint());
        assert_eq!(r.pos_body.len(), 1);
        assert_eq!(r.neg_body.len(), 1);
        assert_eq!(p.symbols.pred_name(r.neg_body[0].atom.pred), "reached");
    }

    #[test]
    fn fact() {
        let p = parse_program("a.").unwrap();
        assert!(p.rules[0].is_fact());
        assert_eq!(p.symbols.pred(p.rules[0].head[0].atom.pred).arity, 0);
    }

    #[test]
    fn bar_and_v_are_both_disjunction() {
        assert_eq!(roundtrip("a | b."), "a v b.\n");
        assert_eq!(roundtrip("a v b v c :- d."), "a v b v c :- d.\n");
        // `v` as an ordinary atom in other positions
        assert_eq!(roundtrip("v :- v."), "v :- v.\n");
    }

    #[test]
    fn builtins_and_sugar() {
        let src = "p(Z) :- q(X), Z = X + 1, X < 3, #int(X), #succ(X,Y), r(Y), W = X * Y, s(W), a <> X.";
        let p = parse_program(src).unwrap();
        let kinds: Vec<_> = p.rules[0].builtins.iter().map(|b| b.kind).collect();
        assert_eq!(
            kinds,
            vec![
                BuiltinKind::Plus,
                BuiltinKind::Cmp(CmpOp::Lt),
                BuiltinKind::Int,
                BuiltinKind::Succ,
                BuiltinKind::Times,
                BuiltinKind::Cmp(CmpOp::Ne)
            ]
        );
        // plus(X,1,Z)
        let plus = &p.rules[0].builtins[0];
        assert_eq!(plus.args[1], Term::Const(Value::Int(1)));
        assert_eq!(
            roundtrip(src),
            "p(Z) :- q(X), r(Y), s(W), Z = X + 1, X < 3, #int(X), #succ(X,Y), W = X * Y, a != X.\n"
        );
    }

    #[test]
    fn anonymous_variables_are_distinct() {
        let p = parse_program(":- start(Y), inPath(_,Y), q(_).").unwrap();
        let r = &p.rules[0];
        let a = r.pos_body[1].atom.args[0];
        let b = r.pos_body[2].atom.args[0];
        assert_ne!(a, b);
        assert_eq!(roundtrip(":- start(Y), inPath(_,Y)."), ":- start(Y), inPath(_,Y).\n");
    }

    #[test]
    fn strong_negation() {
        assert_eq!(roundtrip("-p(1) v p(1) :- not -q."), "-p(1) v p(1) :- not -q.\n");
    }

    #[test]
    fn queries() {
        let mut input = Input::new();
        input.add_source("q", "strat(c)?").unwrap();
        let q = input.query.unwrap();
        assert_eq!(q.conjuncts.len(), 1);
        assert!(q.is_ground());

        let mut prog = Program::default();
        let q = parse_query("p(X), q(X)?", &mut prog).unwrap();
        assert_eq!(q.conjuncts.len(), 2);
        assert_eq!(q.variables().len(), 1);

        assert!(parse_query("?", &mut prog).is_err());
        assert!(parse_query("p(X)", &mut prog).is_err());
        assert!(parse_query("p(X), not q(X)?", &mut prog).unwrap().conjuncts[1].default_neg);
    }

    #[test]
    fn errors_carry_spans() {
        let e = parse_program("a :- b\nc.").unwrap_err();
        let span = e.span();
        assert_eq!((span.line, span.column), (2, 1));
        let e = parse_program("p(a).\np(a,b).").unwrap_err();
        assert!(matches!(e, LoadError::Arity(ArityError { expected: 1, found: 2, .. })));
        assert_eq!((e.span().line, e.span().column), (2, 1));
        assert!(parse_program("a :- not.").is_err());
        assert!(parse_program("not a.").is_err());
        assert!(parse_program("a, b.").is_err());
        assert!(parse_program("a?").is_err());
    }

    #[test]
    fn candidate_set() {
        let mut input = Input::new();
        input.add_source("c", "a v b. {a, -c(1)}").unwrap();
        let (lits, _) = input.candidate.unwrap();
        assert_eq!(lits.len(), 2);
        assert!(lits[1].strong_neg);
        let mut input = Input::new();
        assert!(input.add_source("c", "{p(X)}").is_err());
    }

    #[test]
    fn sources_share_one_program() {
        let mut input = Input::new();
        input.add_source("facts", "arc(a,b).").unwrap();
        input.add_source("prog", "r(X) :- arc(X,_).").unwrap();
        assert_eq!(input.program.rules.len(), 2);
        assert_eq!(&*input.program.rules[1].span.file, "prog");
        assert!(input.add_source("bad", "arc(a).").is_err());
    }
}
