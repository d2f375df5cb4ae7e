use ddl_bench::{generate, one_to_one, oracle, program_text, solve_projected, Instance, InstanceSpec, Problem};
use ddl_core::EnumerationLimit;
use proptest::prelude::*;

fn agree(problem: Problem, seed: u64) -> Result<(), TestCaseError> {
    let inst = generate(&InstanceSpec::new(problem, seed)).unwrap();
    let found = solve_projected(inst.kind(), &program_text(&inst, ""), EnumerationLimit::ALL).unwrap();
    let expected = oracle(&inst).unwrap();
    prop_assert!(one_to_one(&found, &expected), "{:?}\nfound {:?}\nexpected {:?}", problem, found, expected);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_col_matches_colorings(nodes in 1usize..=7, density in 0.0f64..=1.0, seed in any::<u64>()) {
        let edges = (density * (nodes * (nodes - 1) / 2) as f64) as usize;
        agree(Problem::ThreeCol { nodes, edges }, seed)?;
    }

    #[test]
    fn hpath_matches_hamiltonian_paths(nodes in 1usize..=8, density in 0.0f64..=1.0, seed in any::<u64>()) {
        let arcs = (density * (nodes * (nodes - 1)) as f64) as usize;
        agree(Problem::Hpath { nodes, arcs }, seed)?;
    }

    #[test]
    fn stratcomp_matches_strategic_sets(
        companies in 2usize..=8,
        products in 0usize..=12,
        control in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let controlled = (control * companies as f64) as usize;
        agree(Problem::Stratcomp { companies, products, controlled }, seed)?;
    }

    #[test]
    fn prime_matches_prime_implicants(variables in 3usize..=8, clauses in 0usize..=14, seed in any::<u64>()) {
        agree(Problem::Prime { variables, clauses }, seed)?;
    }

    #[test]
    fn hpath_answer_sets_are_paths_from_start(nodes in 2usize..=7, arcs_per_node in 1usize..=4, seed in any::<u64>()) {
        let arcs = (arcs_per_node * nodes).min(nodes * (nodes - 1));
        let inst = generate(&InstanceSpec::new(Problem::Hpath { nodes, arcs }, seed)).unwrap();
        for set in solve_projected(inst.kind(), &program_text(&inst, ""), EnumerationLimit::ALL).unwrap() {
            // inPath(nI,nJ) as index pairs
            let edges: Vec<(usize, usize)> = set
                .iter()
                .map(|a| {
                    let inner = &a["inPath(".len()..a.len() - 1];
                    let (u, v) = inner.split_once(',').unwrap();
                    (u[1..].parse::<usize>().unwrap() - 1, v[1..].parse::<usize>().unwrap() - 1)
                })
                .collect();
            prop_assert_eq!(edges.len(), nodes - 1);
            let mut at = 0;
            let mut seen = vec![false; nodes];
            seen[0] = true;
            while let Some(&(_, v)) = edges.iter().find(|e| e.0 == at) {
                prop_assert!(!seen[v]);
                seen[v] = true;
                at = v;
            }
            prop_assert!(seen.iter().all(|s| *s));
        }
    }
}

#[test]
fn stratcomp_runs_ask_for_the_chosen_company() {
    let spec = InstanceSpec::new(Problem::Stratcomp { companies: 6, products: 8, controlled: 2 }, 5);
    let inst = generate(&spec).unwrap();
    let Instance::Stratcomp { chosen, .. } = inst else { unreachable!() };
    let atom = format!("strat(c{})", chosen + 1);
    let sets = solve_projected(inst.kind(), &program_text(&inst, &inst.query_rules()), EnumerationLimit::ALL).unwrap();
    assert!(sets.iter().all(|s| s.contains(&atom)));
    let report = ddl_bench::run(&spec, ddl_bench::RunOptions { oracle: true, limit: None }).unwrap();
    assert_eq!(report.oracle, Some(true));
    assert_eq!(report.answer_sets, sets.len());
}
