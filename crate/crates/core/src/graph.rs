//! Directed acyclic graphs over named variables, with d-separation queries.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    nodes: Vec<String>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Dag {
    /// Builds a DAG from a parent map. Nodes appearing only as parents are added too.
    pub fn from_parents(parent_map: &BTreeMap<String, Vec<String>>) -> Result<Self> {
        let mut nodes: Vec<String> = Vec::new();
        let intern = |name: &str, nodes: &mut Vec<String>| -> usize {
            match nodes.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    nodes.push(name.to_string());
                    nodes.len() - 1
                }
            }
        };
        let mut edges = Vec::new();
        for (child, ps) in parent_map {
            let c = intern(child, &mut nodes);
            for p in ps {
                let p = intern(p, &mut nodes);
                edges.push((p, c));
            }
        }
        Self::from_edges(nodes, &edges)
    }

    /// Builds a DAG over `nodes` from `(parent, child)` index pairs.
    pub fn from_edges(nodes: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let d = nodes.len();
        let mut parents = vec![Vec::new(); d];
        let mut children = vec![Vec::new(); d];
        for &(p, c) in edges {
            if p >= d || c >= d {
                return Err(Error::InvalidInput("edge endpoint out of range".into()));
            }
            if p == c {
                return Err(Error::CyclicGraph(nodes[p].clone()));
            }
            if !parents[c].contains(&p) {
                parents[c].push(p);
                children[p].push(c);
            }
        }
        for ps in parents.iter_mut() {
            ps.sort_unstable();
        }
        for cs in children.iter_mut() {
            cs.sort_unstable();
        }
        let dag = Self {
            nodes,
            parents,
            children,
        };
        dag.topological_order()?;
        Ok(dag)
    }

    /// Builds a DAG from `(parent, child)` name pairs, adding nodes in first-seen order.
    pub fn from_named_edges<N: AsRef<str>, E: AsRef<str>>(nodes: &[N], edges: &[(E, E)]) -> Result<Self> {
        let names: Vec<String> = nodes.iter().map(|s| s.as_ref().to_string()).collect();
        let pos = |n: &str| {
            names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| Error::UnknownVariable(n.to_string()))
        };
        let idx = edges
            .iter()
            .map(|(p, c)| Ok((pos(p.as_ref())?, pos(c.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_edges(names, &idx)
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn parents_of(&self, node: usize) -> &[usize] {
        &self.parents[node]
    }

    /// Parent names keyed by child name.
    pub fn parent_map(&self) -> BTreeMap<String, Vec<String>> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                (
                    n.clone(),
                    self.parents[i].iter().map(|&p| self.nodes[p].clone()).collect(),
                )
            })
            .collect()
    }

    /// Kahn's algorithm, breaking ties by node index.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let d = self.nodes.len();
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..d).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(d);
        while let Some(&n) = ready.iter().next() {
            ready.remove(&n);
            order.push(n);
            for &c in &self.children[n] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.insert(c);
                }
            }
        }
        if order.len() < d {
            let stuck = (0..d).find(|i| indeg[*i] > 0).unwrap_or(0);
            return Err(Error::CyclicGraph(self.nodes[stuck].clone()));
        }
        Ok(order)
    }

    /// Whether `a` and `b` are d-separated by `given`.
    ///
    /// Reachability over (node, direction) states: a trail may pass a non-collider only if
    /// it is unobserved, and a collider only if it or one of its descendants is observed.
    pub fn d_separated(&self, a: &str, b: &str, given: &[String]) -> Result<bool> {
        let a = self.index_of(a)?;
        let b = self.index_of(b)?;
        let z: Vec<usize> = given
            .iter()
            .map(|g| self.index_of(g))
            .collect::<Result<_>>()?;
        let d = self.nodes.len();
        let mut observed = vec![false; d];
        for &i in &z {
            observed[i] = true;
        }
        // Nodes that are observed or have an observed descendant.
        let mut anc = vec![false; d];
        let mut stack: Vec<usize> = z.clone();
        while let Some(n) = stack.pop() {
            if !anc[n] {
                anc[n] = true;
                stack.extend(self.parents[n].iter().copied());
            }
        }
        // true = arrived from a child (travelling up), false = from a parent (travelling down).
        let mut visited = vec![[false; 2]; d];
        let mut queue = VecDeque::from([(a, true)]);
        while let Some((n, up)) = queue.pop_front() {
            if visited[n][up as usize] {
                continue;
            }
            visited[n][up as usize] = true;
            if n == b && !observed[n] {
                return Ok(false);
            }
            if up {
                if !observed[n] {
                    queue.extend(self.parents[n].iter().map(|&p| (p, true)));
                    queue.extend(self.children[n].iter().map(|&c| (c, false)));
                }
            } else {
                if !observed[n] {
                    queue.extend(self.children[n].iter().map(|&c| (c, false)));
                }
                if anc[n] {
                    queue.extend(self.parents[n].iter().map(|&p| (p, true)));
                }
            }
        }
        Ok(true)
    }
}
