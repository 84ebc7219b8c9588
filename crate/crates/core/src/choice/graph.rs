use std::collections::{BTreeSet, HashMap};

use crate::syntax::Formula;

use super::ChoiceTable;

/// Kahn's algorithm on nodes `0..n`.
pub fn is_acyclic(n: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    let mut indegree = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a == b {
            return false;
        }
        out[a].push(b);
        indegree[b] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = ready.pop() {
        seen += 1;
        for &j in &out[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(j);
            }
        }
    }
    seen == n
}

/// Directed graph with an edge from the winner to the loser of every entry.
#[derive(Clone, Debug, Default)]
pub struct PreferenceGraph {
    nodes: Vec<Formula>,
    index: HashMap<Formula, usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl PreferenceGraph {
    pub fn from_table(table: &ChoiceTable) -> Self {
        let mut g = PreferenceGraph::default();
        for (pair, side) in table.entries() {
            let w = g.node(pair.member(side));
            let l = g.node(pair.member(side.other()));
            g.edges.insert((w, l));
        }
        g
    }

    pub fn node(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        self.nodes.push(f.clone());
        self.index.insert(f.clone(), self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[Formula] {
        &self.nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Formula, &Formula)> {
        self.edges.iter().map(|&(a, b)| (&self.nodes[a], &self.nodes[b]))
    }

    pub fn is_acyclic(&self) -> bool {
        is_acyclic(self.nodes.len(), &self.edges)
    }

    /// A linear order of the nodes in which every winner precedes its losers.
    pub fn linear_extension(&self) -> Option<Vec<Formula>> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        for &(_, b) in &self.edges {
            indegree[b] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut ready: BTreeSet<(String, usize)> =
            (0..n).filter(|&i| indegree[i] == 0).map(|i| (self.nodes[i].canonical_key(), i)).collect();
        while let Some(first) = ready.pop_first() {
            let i = first.1;
            order.push(self.nodes[i].clone());
            for &(a, b) in self.edges.range((i, 0)..=(i, usize::MAX)) {
                debug_assert_eq!(a, i);
                indegree[b] -= 1;
                if indegree[b] == 0 {
                    ready.insert((self.nodes[b].canonical_key(), b));
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::Mode;
    use crate::syntax::parse_lenient;

    fn p(s: &str) -> Formula {
        parse_lenient(s).unwrap().0
    }

    #[test]
    fn cycle_detection() {
        let mut t = ChoiceTable::new(Mode::Sentence);
        t.insert(&p("p0"), &p("p1"), &p("p0")).unwrap();
        t.insert(&p("p1"), &p("p2"), &p("p1")).unwrap();
        let g = PreferenceGraph::from_table(&t);
        assert!(g.is_acyclic());
        assert_eq!(g.linear_extension().unwrap(), vec![p("p0"), p("p1"), p("p2")]);
        t.insert(&p("p2"), &p("p0"), &p("p2")).unwrap();
        let g = PreferenceGraph::from_table(&t);
        assert!(!g.is_acyclic());
        assert!(g.linear_extension().is_none());
    }
}
