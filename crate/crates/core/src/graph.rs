//! Residual (primal) graph of a formula and its connected components.

use std::collections::VecDeque;

use crate::cnf::{Clause, Formula, Lit, Var};

/// Undirected graph over the variables that occur in at least one clause,
/// with an edge between every two variables sharing a clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualGraph {
    present: Vec<bool>,
    adjacency: Vec<Vec<Var>>,
}

impl ResidualGraph {
    pub fn num_vars(&self) -> u32 {
        self.present.len() as u32
    }

    pub fn contains(&self, var: Var) -> bool {
        self.present.get(var.offset()).copied().unwrap_or(false)
    }

    /// Vertices in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = Var> + '_ {
        self.present.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| Var::from_index(i as u32 + 1))
    }

    pub fn vertex_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    /// Neighbours of `var`, ascending.
    pub fn neighbors(&self, var: Var) -> &[Var] {
        &self.adjacency[var.offset()]
    }

    pub fn has_edge(&self, u: Var, v: Var) -> bool {
        self.contains(u) && self.adjacency[u.offset()].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Var, Var)> {
        self.vertices().flat_map(|u| self.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v))).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

pub fn residual_graph(formula: &Formula) -> ResidualGraph {
    let n = formula.num_vars() as usize;
    let mut present = vec![false; n];
    let mut adjacency: Vec<Vec<Var>> = vec![Vec::new(); n];
    for clause in formula.clauses() {
        let lits = clause.lits();
        for (i, a) in lits.iter().enumerate() {
            present[a.var.offset()] = true;
            for b in &lits[i + 1..] {
                adjacency[a.var.offset()].push(b.var);
                adjacency[b.var.offset()].push(a.var);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    ResidualGraph { present, adjacency }
}

/// Maximal connected vertex sets, each sorted, ordered by smallest member.
pub fn connected_components(graph: &ResidualGraph) -> Vec<Vec<Var>> {
    let mut seen = vec![false; graph.present.len()];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for start in graph.vertices() {
        if seen[start.offset()] {
            continue;
        }
        seen[start.offset()] = true;
        queue.push_back(start);
        let mut component = Vec::new();
        while let Some(v) = queue.pop_front() {
            component.push(v);
            for &w in graph.neighbors(v) {
                if !seen[w.offset()] {
                    seen[w.offset()] = true;
                    queue.push_back(w);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}

/// Restriction of `formula` to the variables in `keep`.
///
/// Clauses entirely over `keep` are kept as they are; other clauses lose the
/// literals outside `keep` and survive only if at least two literals remain.
pub fn induced_formula(formula: &Formula, keep: &[Var]) -> Formula {
    let mut inside = vec![false; formula.num_vars() as usize];
    for v in keep {
        if let Some(slot) = inside.get_mut(v.offset()) {
            *slot = true;
        }
    }
    let clauses = formula
        .clauses()
        .iter()
        .filter_map(|c| {
            if c.vars().all(|v| inside[v.offset()]) {
                return Some(c.clone());
            }
            let kept: Vec<Lit> = c.lits().iter().copied().filter(|l| inside[l.var.offset()]).collect();
            (kept.len() >= 2).then(|| Clause::from_sorted(kept))
        })
        .collect();
    Formula::from_clauses_unchecked(formula.num_vars(), clauses)
}
