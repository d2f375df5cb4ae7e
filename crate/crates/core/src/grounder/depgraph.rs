use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::model::{PredId, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Positive,
    Negative,
    /// Between two predicates sharing a disjunctive head.
    Disjunctive,
}

/// `to` (a head predicate) depends on `from`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: PredId,
    pub to: PredId,
    pub kind: EdgeKind,
}

/// Predicate dependency graph.
///
/// Components are the strongly connected components of the positive and
/// disjunctive edges. They are listed in a topological order (dependencies
/// first) which, in addition, respects negative edges wherever those do not
/// close a cycle.
#[derive(Clone, Debug)]
pub struct DependencyGraph {
    pub nodes: Vec<PredId>,
    pub edges: Vec<Edge>,
    pub components: Vec<Vec<PredId>>,
    component_of: Vec<Option<usize>>,
}

impl DependencyGraph {
    pub fn component_of(&self, p: PredId) -> usize {
        self.component_of[p.index()].expect("predicate not in graph")
    }

    /// A component is recursive when some positive or disjunctive edge stays inside it.
    pub fn is_recursive(&self, component: usize) -> bool {
        self.edges.iter().any(|e| {
            e.kind != EdgeKind::Negative
                && self.component_of(e.from) == component
                && self.component_of(e.to) == component
        })
    }

    pub fn edges_from(&self, p: PredId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == p)
    }
}

fn sccs(nodes: &[PredId], edges: &[Edge], keep: impl Fn(&Edge) -> bool) -> Vec<Vec<PredId>> {
    let mut g: DiGraph<PredId, ()> = DiGraph::new();
    let mut idx = rustc_hash::FxHashMap::default();
    for &n in nodes {
        idx.insert(n, g.add_node(n));
    }
    for e in edges.iter().filter(|e| keep(e)) {
        if let (Some(&a), Some(&b)) = (idx.get(&e.from), idx.get(&e.to)) {
            g.add_edge(a, b, ());
        }
    }
    let mut comps: Vec<Vec<PredId>> = tarjan_scc(&g)
        .into_iter()
        .map(|c: Vec<NodeIndex>| {
            let mut c: Vec<PredId> = c.into_iter().map(|i| g[i]).collect();
            c.sort();
            c
        })
        .collect();
    // tarjan yields reverse topological order
    comps.reverse();
    comps
}

pub fn build_dependency_graph(program: &Program) -> DependencyGraph {
    let nodes = program.predicates();
    let mut edges = Vec::new();
    for r in &program.rules {
        for h in &r.head {
            let to = h.atom.pred;
            for b in &r.pos_body {
                edges.push(Edge { from: b.atom.pred, to, kind: EdgeKind::Positive });
            }
            for b in &r.neg_body {
                edges.push(Edge { from: b.atom.pred, to, kind: EdgeKind::Negative });
            }
            for other in &r.head {
                if !std::ptr::eq(other, h) {
                    edges.push(Edge { from: other.atom.pred, to, kind: EdgeKind::Disjunctive });
                }
            }
        }
    }
    edges.sort();
    edges.dedup();

    let mut components = Vec::new();
    for full in sccs(&nodes, &edges, |_| true) {
        let inner: Vec<Edge> = edges
            .iter()
            .filter(|e| full.binary_search(&e.from).is_ok() && full.binary_search(&e.to).is_ok())
            .copied()
            .collect();
        components.extend(sccs(&full, &inner, |e| e.kind != EdgeKind::Negative));
    }
    let mut component_of = vec![None; program.symbols.num_predicates()];
    for (i, c) in components.iter().enumerate() {
        for p in c {
            component_of[p.index()] = Some(i);
        }
    }
    DependencyGraph { nodes, edges, components, component_of }
}
