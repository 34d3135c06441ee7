//! Left-right planarity test.
//!
//! Implements the LR partition criterion of de Fraysseix and Rosenstiehl in
//! the formulation of Brandes ("The left-right planarity test", 2009): a DFS
//! orientation annotated with low points and nesting depth, followed by a
//! second pass that maintains a stack of conflict pairs of back-edge
//! intervals. The graph is planar iff no pair of intervals is forced to
//! conflict on both sides.

use std::collections::HashSet;

use super::SimpleGraph;

const UNVISITED: usize = usize::MAX;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr {
    adj: Vec<Vec<usize>>,
    height: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    /// Directed edges in DFS orientation; one per undirected edge.
    edges: Vec<(usize, usize)>,
    oriented: HashSet<(usize, usize)>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<usize>,
    /// Outgoing oriented edges per vertex, sorted by nesting depth.
    ordered: Vec<Vec<usize>>,
    refs: Vec<Option<usize>>,
    lowpt_edge: Vec<Option<usize>>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
}

pub fn lr_planar(g: &SimpleGraph) -> bool {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n > 2 && m > 3 * n - 6 {
        return false;
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|u| g.neighbors(u)).collect();
    let mut lr = Lr {
        adj,
        height: vec![UNVISITED; n],
        parent_edge: vec![None; n],
        edges: Vec::with_capacity(m),
        oriented: HashSet::with_capacity(m),
        lowpt: Vec::with_capacity(m),
        lowpt2: Vec::with_capacity(m),
        nesting: Vec::with_capacity(m),
        ordered: vec![Vec::new(); n],
        refs: Vec::new(),
        lowpt_edge: Vec::new(),
        stack_bottom: Vec::new(),
        stack: Vec::new(),
    };
    let mut roots = Vec::new();
    for v in 0..n {
        if lr.height[v] == UNVISITED {
            lr.height[v] = 0;
            roots.push(v);
            lr.orient(v);
        }
    }
    for v in 0..n {
        let mut out = std::mem::take(&mut lr.ordered[v]);
        out.sort_by_key(|&e| lr.nesting[e]);
        lr.ordered[v] = out;
    }
    lr.refs = vec![None; lr.edges.len()];
    lr.lowpt_edge = vec![None; lr.edges.len()];
    lr.stack_bottom = vec![0; lr.edges.len()];
    roots.into_iter().all(|v| lr.test(v))
}

impl Lr {
    fn new_edge(&mut self, v: usize, w: usize) -> usize {
        self.edges.push((v, w));
        self.lowpt.push(self.height[v]);
        self.lowpt2.push(self.height[v]);
        self.nesting.push(0);
        self.ordered[v].push(self.edges.len() - 1);
        self.edges.len() - 1
    }

    /// First pass: orient edges by DFS and compute low points and nesting
    /// depth.
    fn orient(&mut self, v: usize) {
        let parent = self.parent_edge[v];
        let neighbors = self.adj[v].clone();
        for w in neighbors {
            let key = (v.min(w), v.max(w));
            if !self.oriented.insert(key) {
                continue;
            }
            let e = self.new_edge(v, w);
            if self.height[w] == UNVISITED {
                // tree edge
                self.parent_edge[w] = Some(e);
                self.height[w] = self.height[v] + 1;
                self.orient(w);
            } else {
                // back edge
                self.lowpt[e] = self.height[w];
            }
            self.nesting[e] = 2 * self.lowpt[e];
            if self.lowpt2[e] < self.height[v] {
                // chordal: tie-break nesting order
                self.nesting[e] += 1;
            }
            if let Some(pe) = parent {
                if self.lowpt[e] < self.lowpt[pe] {
                    self.lowpt2[pe] = self.lowpt[pe].min(self.lowpt2[e]);
                    self.lowpt[pe] = self.lowpt[e];
                } else if self.lowpt[e] > self.lowpt[pe] {
                    self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt[e]);
                } else {
                    self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt2[e]);
                }
            }
        }
    }

    /// Second pass: check the LR partition by merging conflict pairs.
    fn test(&mut self, v: usize) -> bool {
        let parent = self.parent_edge[v];
        let out = self.ordered[v].clone();
        for (i, &e) in out.iter().enumerate() {
            self.stack_bottom[e] = self.stack.len();
            let target = self.edges[e].1;
            if Some(e) == self.parent_edge[target] {
                // tree edge
                if !self.test(target) {
                    return false;
                }
            } else {
                // back edge
                self.lowpt_edge[e] = Some(e);
                self.stack.push(ConflictPair {
                    left: Interval::default(),
                    right: Interval {
                        low: Some(e),
                        high: Some(e),
                    },
                });
            }
            if self.lowpt[e] < self.height[v] {
                // e has a return edge below v
                if let Some(pe) = parent {
                    if i == 0 {
                        self.lowpt_edge[pe] = self.lowpt_edge[e];
                    } else if !self.add_constraints(e, pe) {
                        return false;
                    }
                }
            }
        }
        if let Some(pe) = parent {
            self.remove_back_edges(pe);
        }
        true
    }

    fn conflicting(&self, interval: &Interval, b: usize) -> bool {
        match interval.high {
            Some(h) => self.lowpt[h] > self.lowpt[b],
            None => false,
        }
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair::default();
        // Merge the return edges of ei into p.right.
        loop {
            let mut q = self.stack.pop().expect("edges with return edges leave pairs");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let q_low = q.right.low.expect("non-empty interval has a low edge");
            if self.lowpt[q_low] > self.lowpt[e] {
                // interval stays on the right side
                if p.right.is_empty() {
                    p.right.high = q.right.high;
                } else {
                    let pl = p.right.low.expect("non-empty");
                    self.refs[pl] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                // align with the lowest return edge of e
                self.refs[q_low] = self.lowpt_edge[e];
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        // Merge conflicting return edges of earlier siblings into p.left.
        while let Some(top) = self.stack.last() {
            let (cl, cr) = (
                self.conflicting(&top.left, ei),
                self.conflicting(&top.right, ei),
            );
            if !cl && !cr {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p.right.low {
                self.refs[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left.high = q.left.high;
            } else {
                let ll = p.left.low.expect("non-empty");
                self.refs[ll] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (Some(l), None) => self.lowpt[l],
            (None, Some(r)) => self.lowpt[r],
            (None, None) => unreachable!("conflict pairs are never fully empty"),
        }
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.edges[e].0;
        // Drop entire conflict pairs whose lowest return point is u.
        while let Some(top) = self.stack.last() {
            if self.lowest(top) == self.height[u] {
                self.stack.pop();
            } else {
                break;
            }
        }
        // Trim the topmost remaining pair.
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.edges[h].1 == u {
                    p.left.high = self.refs[h];
                } else {
                    break;
                }
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    // interval just emptied from the top
                    self.refs[l] = p.right.low;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.edges[h].1 == u {
                    p.right.high = self.refs[h];
                } else {
                    break;
                }
            }
            if p.right.high.is_none() {
                if let Some(l) = p.right.low {
                    self.refs[l] = p.left.low;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        // Track the side of the highest surviving return edge.
        if self.lowpt[e] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let (hl, hr) = (top.left.high, top.right.high);
                self.refs[e] = match (hl, hr) {
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    (Some(l), None) => Some(l),
                    _ => hr,
                };
            }
        }
    }
}
