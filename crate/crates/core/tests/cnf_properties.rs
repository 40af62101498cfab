mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::subsequence;
use wsat_core::{
    connected_components, induced_formula, reduce, residual_graph, verify_assignment, Assignment, Clause, Formula, Lit,
    Var,
};

use common::{bit, clause_masks, satisfies};

/// Clauses of length 1..=3 over `1..=n`, each with at least one negated literal.
fn arb_clause(n: u32) -> impl Strategy<Value = Clause> {
    let max_len = 3.min(n as usize);
    (subsequence((1..=n).collect::<Vec<_>>(), 1..=max_len), prop::collection::vec(any::<bool>(), 3), 0usize..3)
        .prop_map(|(vs, signs, forced)| {
            let forced = forced % vs.len();
            let lits = vs
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let var = Var::new(v).unwrap();
                    if signs[i] || i == forced {
                        Lit::neg(var)
                    } else {
                        Lit::pos(var)
                    }
                })
                .collect();
            Clause::new(lits).unwrap()
        })
}

fn arb_formula(max_n: u32, max_m: usize) -> impl Strategy<Value = Formula> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(arb_clause(n), 0..=max_m).prop_map(move |cs| Formula::new(n, cs).unwrap())
    })
}

fn arb_formula_with_subset(max_n: u32, max_m: usize) -> impl Strategy<Value = (Formula, Vec<Var>)> {
    arb_formula(max_n, max_m).prop_flat_map(|f| {
        let all: Vec<Var> = f.vars().collect();
        let n = all.len();
        (Just(f), subsequence(all, 0..=n))
    })
}

/// Union-find partition of the occurring variables, for comparison with BFS.
fn union_find_partition(formula: &Formula) -> BTreeSet<BTreeSet<u32>> {
    let n = formula.num_vars() as usize;
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut seen = BTreeSet::new();
    for c in formula.clauses() {
        let vs: Vec<usize> = c.vars().map(|v| v.index() as usize).collect();
        for &v in &vs {
            seen.insert(v);
        }
        for w in vs.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, BTreeSet<u32>> = Default::default();
    for v in seen {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().insert(v as u32);
    }
    groups.into_values().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn reduce_never_assigns_true((f, u) in arb_formula_with_subset(10, 16)) {
        let (_, partial) = reduce(&f, &u).unwrap();
        prop_assert!(partial.iter().all(|(_, value)| !value));
        for v in &u {
            prop_assert_eq!(partial.get(*v), Some(false));
        }
    }

    #[test]
    fn reduce_preserves_models((f, u) in arb_formula_with_subset(10, 16)) {
        let (residual, partial) = reduce(&f, &u).unwrap();
        let free: Vec<Var> = f.vars().filter(|&v| !partial.is_assigned(v)).collect();
        for v in residual.clauses().iter().flat_map(Clause::vars) {
            prop_assert!(!partial.is_assigned(v));
        }
        let orig = clause_masks(&f);
        let res = clause_masks(&residual);
        for sub in 0u64..1 << free.len() {
            let assign: u64 = free.iter().enumerate().filter(|(i, _)| sub >> i & 1 == 1).map(|(_, &v)| bit(v)).sum();
            prop_assert_eq!(satisfies(&orig, assign), satisfies(&res, assign));
        }
    }

    #[test]
    fn empty_residual_weight_criterion((f, u) in arb_formula_with_subset(10, 16)) {
        let (residual, partial) = reduce(&f, &u).unwrap();
        prop_assume!(residual.is_empty());
        let fixed: u64 = u.iter().map(|&v| bit(v)).sum();
        let free = f.num_vars() as usize - partial.assigned_count();
        let masks = clause_masks(&f);
        for k in 0..=f.num_vars() as usize {
            let exists = (0u64..1 << f.num_vars())
                .any(|a| a & fixed == 0 && a.count_ones() as usize == k && satisfies(&masks, a));
            prop_assert_eq!(exists, free >= k, "k={}", k);
        }
    }

    #[test]
    fn induced_graph_is_subgraph((f, keep) in arb_formula_with_subset(10, 16)) {
        let whole = residual_graph(&f);
        let part = residual_graph(&induced_formula(&f, &keep));
        for (a, b) in part.edges() {
            prop_assert!(keep.contains(&a) && keep.contains(&b));
            prop_assert!(whole.has_edge(a, b));
        }
    }

    #[test]
    fn verify_ignores_ordering(f in arb_formula(10, 16), assign in any::<u16>(), rot in 0usize..16) {
        let n = f.num_vars();
        let trues: Vec<Var> = (1..=n).filter(|i| assign >> (i - 1) & 1 == 1).map(|i| Var::new(i).unwrap()).collect();
        let a = Assignment::from_true_set(n, &trues);
        let mut reversed: Vec<Vec<i64>> =
            f.clauses().iter().map(|c| c.lits().iter().rev().map(|l| l.to_dimacs()).collect()).collect();
        reversed.reverse();
        let len = reversed.len().max(1);
        reversed.rotate_left(rot % len);
        let g = Formula::new(n, reversed.iter().map(|c| Clause::from_dimacs(c).unwrap()).collect()).unwrap();
        prop_assert_eq!(verify_assignment(&f, &a, a.weight()), verify_assignment(&g, &a, a.weight()));
    }

    #[test]
    fn components_match_union_find(f in arb_formula(14, 14)) {
        let bfs: BTreeSet<BTreeSet<u32>> = connected_components(&residual_graph(&f))
            .into_iter()
            .map(|c| c.into_iter().map(Var::index).collect())
            .collect();
        prop_assert_eq!(bfs, union_find_partition(&f));
    }

    #[test]
    fn components_sorted_by_smallest_member(f in arb_formula(14, 14)) {
        let comps = connected_components(&residual_graph(&f));
        let firsts: Vec<Var> = comps.iter().map(|c| c[0]).collect();
        prop_assert!(firsts.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(comps.iter().all(|c| c.windows(2).all(|w| w[0] < w[1])));
    }
}

#[test]
fn residual_graph_edges_come_from_shared_clauses() {
    let f = common::formula(5, &[&[1, -2], &[-2, 3], &[-4, 5, -1]]);
    let g = residual_graph(&f);
    let mut expected = BTreeSet::new();
    for c in f.clauses() {
        let vs: Vec<Var> = c.vars().collect();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                expected.insert((vs[i], vs[j]));
            }
        }
    }
    assert_eq!(g.edges().into_iter().collect::<BTreeSet<_>>(), expected);
    assert!(!g.has_edge(Var::new(1).unwrap(), Var::new(3).unwrap()));
}
