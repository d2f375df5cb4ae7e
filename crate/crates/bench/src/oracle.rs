//! Exhaustive solvers for small instances, independent of the answer-set
//! machinery. Each solution is rendered as the sorted list of literals the
//! matching answer set contains on its solution predicate.

use std::collections::BTreeSet;

use crate::instance::{company, node, variable, Instance};
use crate::BenchError;

pub const MAX_NODES: usize = 10;
pub const MAX_COMPANIES: usize = 10;
pub const MAX_VARIABLES: usize = 12;

pub type Solutions = BTreeSet<Vec<String>>;

const COLORS: [&str; 3] = ["r", "g", "b"];

/// Every simple path from node 0 that visits all `nodes`, as node sequences.
pub fn hamiltonian_paths(nodes: usize, arcs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); nodes];
    for &(u, v) in arcs {
        succ[u].push(v);
    }
    fn extend(path: &mut Vec<usize>, on: &mut [bool], succ: &[Vec<usize>], out: &mut Vec<Vec<usize>>) {
        if path.len() == on.len() {
            out.push(path.clone());
            return;
        }
        let last = *path.last().unwrap();
        for &v in &succ[last] {
            if !on[v] {
                on[v] = true;
                path.push(v);
                extend(path, on, succ, out);
                path.pop();
                on[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    if nodes > 0 {
        let mut on = vec![false; nodes];
        on[0] = true;
        extend(&mut vec![0], &mut on, &succ, &mut out);
    }
    out
}

/// Every proper 3-coloring, one color index per node.
pub fn colorings(nodes: usize, edges: &[(usize, usize)]) -> Vec<Vec<u8>> {
    let total = 3usize.pow(nodes as u32);
    (0..total)
        .map(|mut n| {
            (0..nodes)
                .map(|_| {
                    let c = (n % 3) as u8;
                    n /= 3;
                    c
                })
                .collect::<Vec<u8>>()
        })
        .filter(|col| edges.iter().all(|&(u, v)| col[u] != col[v]))
        .collect()
}

/// Every subset-minimal set of companies that keeps a producer of each
/// product and contains each company whose controllers it contains, as a
/// bitmask over companies.
pub fn strategic_sets(companies: usize, products: &[(usize, usize)], control: &[(usize, [usize; 3])]) -> Vec<u32> {
    let bit = |c: usize| 1u32 << c;
    let ok = |s: u32| {
        products.iter().all(|&(y, z)| s & (bit(y) | bit(z)) != 0)
            && control
                .iter()
                .all(|&(w, by)| by.iter().any(|&c| s & bit(c) == 0) || s & bit(w) != 0)
    };
    let good: Vec<u32> = (0..1u32 << companies).filter(|&s| ok(s)).collect();
    good.iter()
        .copied()
        .filter(|&s| !good.iter().any(|&t| t != s && t & s == t))
        .collect()
}

/// Every prime implicant of the CNF, as `(variable, positive)` lists
/// sorted by variable.
pub fn prime_implicants(variables: usize, clauses: &[[(usize, bool); 3]]) -> Vec<Vec<(usize, bool)>> {
    // each variable is absent, positive or negative
    let total = 3usize.pow(variables as u32);
    let decode = |mut n: usize| -> Vec<u8> {
        (0..variables)
            .map(|_| {
                let d = (n % 3) as u8;
                n /= 3;
                d
            })
            .collect()
    };
    let implies = |t: &[u8]| {
        clauses
            .iter()
            .all(|c| c.iter().any(|&(v, pos)| t[v] == if pos { 1 } else { 2 }))
    };
    let mut out = Vec::new();
    for n in 0..total {
        let mut t = decode(n);
        if !implies(&t) {
            continue;
        }
        // implicants are closed upwards, so dropping single literals suffices
        let chosen: Vec<usize> = (0..variables).filter(|&v| t[v] != 0).collect();
        let prime = chosen.into_iter().all(|v| {
            let keep = t[v];
            t[v] = 0;
            let still = implies(&t);
            t[v] = keep;
            !still
        });
        if prime {
            out.push((0..variables).filter(|&v| t[v] != 0).map(|v| (v, t[v] == 1)).collect());
        }
    }
    out
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

/// All solutions of a small instance, rendered on the solution predicate.
pub fn oracle(instance: &Instance) -> Result<Solutions, BenchError> {
    let cap = |what: &str, n: usize, max: usize| {
        if n > max {
            Err(BenchError::OracleCap(format!("{n} {what} (at most {max})")))
        } else {
            Ok(())
        }
    };
    Ok(match instance {
        Instance::ThreeCol { nodes, edges } => {
            cap("nodes", *nodes, MAX_NODES)?;
            colorings(*nodes, edges)
                .into_iter()
                .map(|col| {
                    sorted(
                        col.iter()
                            .enumerate()
                            .map(|(i, &c)| format!("col({},{})", node(i), COLORS[c as usize]))
                            .collect(),
                    )
                })
                .collect()
        }
        Instance::Hpath { nodes, arcs } => {
            cap("nodes", *nodes, MAX_NODES)?;
            hamiltonian_paths(*nodes, arcs)
                .into_iter()
                .map(|p| {
                    sorted(
                        p.windows(2)
                            .map(|w| format!("inPath({},{})", node(w[0]), node(w[1])))
                            .collect(),
                    )
                })
                .collect()
        }
        Instance::Stratcomp {
            companies,
            products,
            control,
            ..
        } => {
            cap("companies", *companies, MAX_COMPANIES)?;
            strategic_sets(*companies, products, control)
                .into_iter()
                .map(|s| {
                    sorted(
                        (0..*companies)
                            .filter(|c| s & (1 << c) != 0)
                            .map(|c| format!("strat({})", company(c)))
                            .collect(),
                    )
                })
                .collect()
        }
        Instance::Prime { variables, clauses } => {
            cap("variables", *variables, MAX_VARIABLES)?;
            prime_implicants(*variables, clauses)
                .into_iter()
                .map(|t| {
                    sorted(
                        t.into_iter()
                            .map(|(v, pos)| format!("{}imp({})", if pos { "" } else { "-" }, variable(v)))
                            .collect(),
                    )
                })
                .collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_through_a_chain() {
        assert_eq!(hamiltonian_paths(3, &[(0, 1), (1, 2)]), vec![vec![0, 1, 2]]);
        assert!(hamiltonian_paths(3, &[(0, 1), (2, 1)]).is_empty());
        assert_eq!(hamiltonian_paths(1, &[]), vec![vec![0]]);
    }

    #[test]
    fn triangle_has_six_colorings() {
        assert_eq!(colorings(3, &[(0, 1), (1, 2), (0, 2)]).len(), 6);
        assert!(colorings(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).is_empty());
    }

    #[test]
    fn single_product_gives_two_strategic_sets() {
        let inst = Instance::Stratcomp {
            companies: 2,
            products: vec![(0, 1)],
            control: vec![],
            chosen: 0,
        };
        let expected: Solutions = [vec!["strat(c1)".to_string()], vec!["strat(c2)".to_string()]].into();
        assert_eq!(oracle(&inst).unwrap(), expected);
    }

    #[test]
    fn control_pulls_in_companies() {
        // c3 is controlled by c1 alone
        let sets = strategic_sets(3, &[(0, 1)], &[(2, [0, 0, 0])]);
        assert_eq!(sets, vec![0b010, 0b101]);
    }

    #[test]
    fn prime_implicants_of_small_cnf() {
        // (v1 | v2 | v3) & (-v1 | v2 | v3)
        let c = [[(0, true), (1, true), (2, true)], [(1, true), (2, true), (0, false)]];
        let mut got = prime_implicants(3, &c);
        got.sort();
        assert_eq!(got, vec![vec![(1, true)], vec![(2, true)]]);
    }

    #[test]
    fn caps_are_enforced() {
        let inst = Instance::Hpath {
            nodes: MAX_NODES + 1,
            arcs: vec![],
        };
        assert!(matches!(oracle(&inst), Err(BenchError::OracleCap(_))));
    }
}
