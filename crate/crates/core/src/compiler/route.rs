use std::collections::BTreeMap;

use super::system::SpinSystem;
use crate::error::{Error, Result};

/// Shortest-path predecessors from `root`, weighting each edge by its
/// coupling period 1/|J|. Ties go to fewer hops, then to the lower spin index.
fn shortest_paths(sys: &SpinSystem, root: usize) -> Vec<Option<usize>> {
    let n = sys.n();
    let mut cost = vec![f64::INFINITY; n];
    let mut hops = vec![usize::MAX; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    cost[root] = 0.0;
    hops[root] = 0;
    let better = |c: f64, h: usize, p: usize, oc: f64, oh: usize, op: Option<usize>| {
        let tie = (c - oc).abs() <= 1e-12 * c.abs().max(oc.abs());
        if !tie {
            return c < oc;
        }
        h < oh || (h == oh && op.is_some_and(|q| p < q))
    };
    while let Some(u) = (0..n)
        .filter(|&v| !done[v] && cost[v].is_finite())
        .min_by(|&a, &b| {
            cost[a]
                .total_cmp(&cost[b])
                .then(hops[a].cmp(&hops[b]))
                .then(a.cmp(&b))
        })
    {
        done[u] = true;
        for v in sys.neighbors(u).filter(|&v| !done[v]) {
            let c = cost[u] + 1.0 / sys.coupling(u, v).abs();
            if better(c, hops[u] + 1, u, cost[v], hops[v], pred[v]) {
                cost[v] = c;
                hops[v] = hops[u] + 1;
                pred[v] = Some(u);
            }
        }
    }
    pred
}

/// Shortest coupling path from `i` to `j`, both ends included.
pub fn relay_route(sys: &SpinSystem, i: usize, j: usize) -> Result<Vec<usize>> {
    sys.check_spin(i)?;
    sys.check_spin(j)?;
    if i == j {
        return Err(Error::DuplicateSpin { spin: i });
    }
    let pred = shortest_paths(sys, j);
    let mut path = vec![i];
    let mut v = i;
    while v != j {
        v = pred[v].ok_or(Error::Unroutable { a: i, b: j })?;
        path.push(v);
    }
    Ok(path)
}

/// A tree in the coupling graph spanning the spins of one σ_z product.
/// Nodes outside `members` are relays.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutingTree {
    pub root: usize,
    pub members: usize,
    pub children: BTreeMap<usize, Vec<usize>>,
}

impl RoutingTree {
    /// A path `spins[0] – … – spins[m-1]` rooted at its last spin.
    pub fn path(sys: &SpinSystem, spins: &[usize]) -> Result<Self> {
        let mut members = 0usize;
        for &s in spins {
            sys.check_spin(s)?;
            if members >> s & 1 == 1 {
                return Err(Error::DuplicateSpin { spin: s });
            }
            members |= 1 << s;
        }
        let root = *spins.last().ok_or(Error::NoSpins)?;
        let mut children = BTreeMap::new();
        for w in spins.windows(2) {
            if !sys.has_edge(w[0], w[1]) {
                return Err(Error::MissingCoupling { a: w[0], b: w[1] });
            }
            children.insert(w[1], vec![w[0]]);
        }
        Ok(Self {
            root,
            members,
            children,
        })
    }

    /// Union of shortest paths from the highest member spin to every other
    /// member.
    pub fn spanning(sys: &SpinSystem, members: usize) -> Result<Self> {
        if members == 0 {
            return Err(Error::NoSpins);
        }
        let top = usize::BITS - 1 - members.leading_zeros();
        let root = top as usize;
        sys.check_spin(root)?;
        let pred = shortest_paths(sys, root);
        let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut in_tree = 1usize << root;
        for s in (0..root).filter(|s| members >> s & 1 == 1) {
            let mut v = s;
            while in_tree >> v & 1 == 0 {
                let p = pred[v].ok_or(Error::Unroutable { a: root, b: s })?;
                children.entry(p).or_default().push(v);
                in_tree |= 1 << v;
                v = p;
            }
        }
        children.values_mut().for_each(|c| c.sort_unstable());
        Ok(Self {
            root,
            members,
            children,
        })
    }

    pub fn children_of(&self, v: usize) -> &[usize] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn is_member(&self, v: usize) -> bool {
        self.members >> v & 1 == 1
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.values().map(Vec::len).sum::<usize>()
    }

    pub fn relay_count(&self) -> usize {
        self.node_count() - self.members.count_ones() as usize
    }
}
