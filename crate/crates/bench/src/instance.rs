use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::rng::InstanceRng;
use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    ThreeCol,
    Hpath,
    Stratcomp,
    Prime,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::ThreeCol, Kind::Hpath, Kind::Stratcomp, Kind::Prime];

    pub fn name(self) -> &'static str {
        match self {
            Kind::ThreeCol => "3col",
            Kind::Hpath => "hpath",
            Kind::Stratcomp => "stratcomp",
            Kind::Prime => "prime",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| BenchError::Params(format!("unknown benchmark `{s}` (expected 3col, hpath, stratcomp or prime)")))
    }
}

/// Problem sizes. `controlled` is the number of companies that carry a
/// `controlled_by` fact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    ThreeCol { nodes: usize, edges: usize },
    Hpath { nodes: usize, arcs: usize },
    Stratcomp { companies: usize, products: usize, controlled: usize },
    Prime { variables: usize, clauses: usize },
}

impl Problem {
    /// The sizes used in the original benchmark runs.
    pub fn reference(kind: Kind) -> Problem {
        match kind {
            Kind::ThreeCol => Problem::ThreeCol { nodes: 150, edges: 350 },
            Kind::Hpath => Problem::Hpath { nodes: 25, arcs: 120 },
            Kind::Stratcomp => Problem::Stratcomp {
                companies: 71,
                products: 213,
                controlled: 18,
            },
            Kind::Prime => Problem::Prime {
                variables: 127,
                clauses: 546,
            },
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Problem::ThreeCol { .. } => Kind::ThreeCol,
            Problem::Hpath { .. } => Kind::Hpath,
            Problem::Stratcomp { .. } => Kind::Stratcomp,
            Problem::Prime { .. } => Kind::Prime,
        }
    }

    /// `(name, value)` pairs in canonical order.
    pub fn params(&self) -> Vec<(&'static str, usize)> {
        match *self {
            Problem::ThreeCol { nodes, edges } => vec![("nodes", nodes), ("edges", edges)],
            Problem::Hpath { nodes, arcs } => vec![("nodes", nodes), ("arcs", arcs)],
            Problem::Stratcomp {
                companies,
                products,
                controlled,
            } => vec![("companies", companies), ("products", products), ("controlled", controlled)],
            Problem::Prime { variables, clauses } => vec![("variables", variables), ("clauses", clauses)],
        }
    }

    /// Reads `key=value,...`, starting from the reference sizes.
    pub fn parse(kind: Kind, text: &str) -> Result<Problem, BenchError> {
        let mut p = Problem::reference(kind);
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| BenchError::Params(format!("expected key=value, found `{item}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| BenchError::Params(format!("`{key}` needs a non-negative integer, found `{value}`")))?;
            let slot = match (&mut p, key.trim()) {
                (Problem::ThreeCol { nodes, .. }, "nodes") | (Problem::Hpath { nodes, .. }, "nodes") => nodes,
                (Problem::ThreeCol { edges, .. }, "edges") => edges,
                (Problem::Hpath { arcs, .. }, "arcs") => arcs,
                (Problem::Stratcomp { companies, .. }, "companies") => companies,
                (Problem::Stratcomp { products, .. }, "products") => products,
                (Problem::Stratcomp { controlled, .. }, "controlled") => controlled,
                (Problem::Prime { variables, .. }, "variables") => variables,
                (Problem::Prime { clauses, .. }, "clauses") => clauses,
                (_, k) => return Err(BenchError::Params(format!("`{k}` is not a parameter of {kind}"))),
            };
            *slot = value;
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    pub problem: Problem,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(problem: Problem, seed: u64) -> Self {
        InstanceSpec { problem, seed }
    }

    pub fn kind(&self) -> Kind {
        self.problem.kind()
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind())?;
        for (k, v) in self.problem.params() {
            write!(f, " {k}={v}")?;
        }
        write!(f, " seed={}", self.seed)
    }
}

/// A generated instance. Nodes, companies and variables are numbered from 0
/// and printed from 1 (`n1`, `c1`, `v1`, products `p1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    /// Undirected edges `(u, v)` with `u < v`.
    ThreeCol { nodes: usize, edges: Vec<(usize, usize)> },
    /// Directed arcs; node 0 is the start.
    Hpath { nodes: usize, arcs: Vec<(usize, usize)> },
    Stratcomp {
        companies: usize,
        /// The two producers of each product.
        products: Vec<(usize, usize)>,
        /// `(w, [x, y, z])`: `w` is controlled by `x`, `y` and `z` together.
        /// Fewer than three controllers repeat the last one.
        control: Vec<(usize, [usize; 3])>,
        /// The company whose strategic sets a benchmark run asks for.
        chosen: usize,
    },
    /// Clauses over three distinct variables; `true` marks a positive literal.
    Prime { variables: usize, clauses: Vec<[(usize, bool); 3]> },
}

pub fn node(i: usize) -> String {
    format!("n{}", i + 1)
}

pub fn company(i: usize) -> String {
    format!("c{}", i + 1)
}

pub fn variable(i: usize) -> String {
    format!("v{}", i + 1)
}

fn infeasible(what: String) -> BenchError {
    BenchError::Infeasible(what)
}

/// Generates the instance described by `spec`. Equal specs give equal
/// instances.
pub fn generate(spec: &InstanceSpec) -> Result<Instance, BenchError> {
    let mut rng = InstanceRng::new(spec.seed);
    match spec.problem {
        Problem::ThreeCol { nodes, edges } => {
            let pairs: Vec<(usize, usize)> = (0..nodes).flat_map(|u| (u + 1..nodes).map(move |v| (u, v))).collect();
            if edges > pairs.len() {
                return Err(infeasible(format!("{edges} edges do not fit on {nodes} nodes")));
            }
            Ok(Instance::ThreeCol {
                nodes,
                edges: rng.sample(pairs, edges),
            })
        }
        Problem::Hpath { nodes, arcs } => {
            if nodes == 0 {
                return Err(infeasible("a path needs a start node".into()));
            }
            let pairs: Vec<(usize, usize)> = (0..nodes)
                .flat_map(|u| (0..nodes).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect();
            if arcs > pairs.len() {
                return Err(infeasible(format!("{arcs} arcs do not fit on {nodes} nodes")));
            }
            Ok(Instance::Hpath {
                nodes,
                arcs: rng.sample(pairs, arcs),
            })
        }
        Problem::Stratcomp {
            companies,
            products,
            controlled,
        } => {
            if companies < 2 {
                return Err(infeasible("products need two distinct producers".into()));
            }
            if controlled > companies {
                return Err(infeasible(format!(
                    "{controlled} controlled companies out of {companies}"
                )));
            }
            let products = (0..products)
                .map(|_| {
                    let pair = rng.sample((0..companies).collect(), 2);
                    (pair[0], pair[1])
                })
                .collect();
            let mut control: Vec<(usize, [usize; 3])> = rng
                .sample((0..companies).collect(), controlled)
                .into_iter()
                .map(|w| {
                    let k = 1 + rng.below(3.min(companies - 1));
                    let others: Vec<usize> = (0..companies).filter(|&c| c != w).collect();
                    let mut by = rng.sample(others, k);
                    by.sort_unstable();
                    let last = by[k - 1];
                    by.resize(3, last);
                    (w, [by[0], by[1], by[2]])
                })
                .collect();
            control.sort_unstable();
            let chosen = rng.below(companies);
            Ok(Instance::Stratcomp {
                companies,
                products,
                control,
                chosen,
            })
        }
        Problem::Prime { variables, clauses } => {
            if variables < 3 && clauses > 0 {
                return Err(infeasible("clauses need three distinct variables".into()));
            }
            let clauses = (0..clauses)
                .map(|_| {
                    let vs = rng.sample((0..variables).collect(), 3);
                    let mut c = [(vs[0], rng.coin()), (vs[1], rng.coin()), (vs[2], rng.coin())];
                    // positive literals first, each group by variable
                    c.sort_unstable_by_key(|&(v, pos)| (!pos, v));
                    c
                })
                .collect();
            Ok(Instance::Prime { variables, clauses })
        }
    }
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::ThreeCol { .. } => Kind::ThreeCol,
            Instance::Hpath { .. } => Kind::Hpath,
            Instance::Stratcomp { .. } => Kind::Stratcomp,
            Instance::Prime { .. } => Kind::Prime,
        }
    }

    /// The instance as facts, one per line.
    pub fn facts(&self) -> String {
        let mut out = String::new();
        match self {
            Instance::ThreeCol { nodes, edges } => {
                for i in 0..*nodes {
                    writeln!(out, "node({}).", node(i)).unwrap();
                }
                for &(u, v) in edges {
                    writeln!(out, "edge({},{}).", node(u), node(v)).unwrap();
                }
            }
            Instance::Hpath { nodes, arcs } => {
                for i in 0..*nodes {
                    writeln!(out, "node({}).", node(i)).unwrap();
                }
                for &(u, v) in arcs {
                    writeln!(out, "arc({},{}).", node(u), node(v)).unwrap();
                }
                writeln!(out, "start({}).", node(0)).unwrap();
            }
            Instance::Stratcomp {
                companies,
                products,
                control,
                ..
            } => {
                for i in 0..*companies {
                    writeln!(out, "company({}).", company(i)).unwrap();
                }
                for (p, &(y, z)) in products.iter().enumerate() {
                    writeln!(out, "produced_by(p{},{},{}).", p + 1, company(y), company(z)).unwrap();
                }
                for &(w, [x, y, z]) in control {
                    let c = company;
                    writeln!(out, "controlled_by({},{},{},{}).", c(w), c(x), c(y), c(z)).unwrap();
                }
            }
            Instance::Prime { clauses, .. } => {
                for c in clauses {
                    let k = c.iter().filter(|l| l.1).count();
                    let [a, b, d] = c.map(|l| variable(l.0));
                    writeln!(out, "c{k}({a},{b},{d}).").unwrap();
                }
            }
        }
        out
    }

    /// Extra rules a benchmark run adds to the encoding: STRATCOMP asks for
    /// the strategic sets containing the chosen company.
    pub fn query_rules(&self) -> String {
        match self {
            Instance::Stratcomp { chosen, .. } => format!(":- not strat({}).\n", company(*chosen)),
            _ => String::new(),
        }
    }
}
