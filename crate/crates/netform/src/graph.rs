//! Undirected player network and path primitives.
//!
//! Players are dense ids `0..n`. The reliability machinery works with
//! *edge-disjoint* path pairs throughout; `min_disjoint_pair` is exact for
//! delta = 1 (shortest pair of edge-disjoint paths via a two-unit min-cost
//! flow) and heuristic for delta < 1, with a documented exact fallback so
//! that `None` always means "no two edge-disjoint paths exist".

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rat::Rat;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub usize);

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PlayerClass {
    /// Major-league player: appears with weight A in every distance sum.
    MajorA,
    /// Minor-league player: unit weight.
    MinorB,
}

/// Lengths of a pair of edge-disjoint paths, shorter leg first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathPair {
    pub primary: u32,
    pub backup: u32,
}

impl PathPair {
    pub fn new(a: u32, b: u32) -> Self {
        PathPair {
            primary: a.min(b),
            backup: a.max(b),
        }
    }

    pub fn total(&self) -> u32 {
        self.primary + self.backup
    }

    /// primary + delta * backup, the reliability distance term.
    pub fn weighted(&self, delta: &Rat) -> Rat {
        Rat::from_integer(self.primary as i64) + *delta * Rat::from_integer(self.backup as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    classes: Vec<PlayerClass>,
    adj: Vec<BTreeSet<usize>>,
    edge_count: usize,
}

impl Network {
    pub fn new(classes: Vec<PlayerClass>) -> Self {
        let n = classes.len();
        Network {
            classes,
            adj: vec![BTreeSet::new(); n],
            edge_count: 0,
        }
    }

    /// n_a majors (ids 0..n_a) followed by n_b minors.
    pub fn with_counts(n_a: usize, n_b: usize) -> Self {
        let mut classes = vec![PlayerClass::MajorA; n_a];
        classes.extend(std::iter::repeat(PlayerClass::MinorB).take(n_b));
        Network::new(classes)
    }

    pub fn from_edges(classes: Vec<PlayerClass>, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut net = Network::new(classes);
        for &(u, v) in edges {
            net.add_edge(PlayerId(u), PlayerId(v))?;
        }
        Ok(net)
    }

    pub fn n(&self) -> usize {
        self.classes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.n()).map(PlayerId)
    }

    pub fn class(&self, i: PlayerId) -> Result<PlayerClass, Error> {
        self.classes
            .get(i.0)
            .copied()
            .ok_or(Error::InvalidNode(i))
    }

    pub fn is_major(&self, i: PlayerId) -> bool {
        self.classes.get(i.0) == Some(&PlayerClass::MajorA)
    }

    pub fn majors(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.nodes().filter(move |&i| self.is_major(i))
    }

    pub fn minors(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.nodes().filter(move |&i| !self.is_major(i))
    }

    pub fn count_majors(&self) -> usize {
        self.majors().count()
    }

    pub fn count_minors(&self) -> usize {
        self.n() - self.count_majors()
    }

    pub fn add_node(&mut self, class: PlayerClass) -> PlayerId {
        self.classes.push(class);
        self.adj.push(BTreeSet::new());
        PlayerId(self.n() - 1)
    }

    fn check(&self, i: PlayerId) -> Result<(), Error> {
        if i.0 >= self.n() {
            return Err(Error::InvalidNode(i));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, i: PlayerId, j: PlayerId) -> Result<(), Error> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        if self.adj[i.0].contains(&j.0) {
            return Err(Error::EdgeExists(i, j));
        }
        self.adj[i.0].insert(j.0);
        self.adj[j.0].insert(i.0);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, i: PlayerId, j: PlayerId) -> Result<(), Error> {
        self.check(i)?;
        self.check(j)?;
        if !self.adj[i.0].remove(&j.0) {
            return Err(Error::EdgeMissing(i, j));
        }
        self.adj[j.0].remove(&i.0);
        self.edge_count -= 1;
        Ok(())
    }

    pub fn has_edge(&self, i: PlayerId, j: PlayerId) -> bool {
        self.adj.get(i.0).is_some_and(|s| s.contains(&j.0))
    }

    pub fn degree(&self, i: PlayerId) -> Result<usize, Error> {
        self.check(i)?;
        Ok(self.adj[i.0].len())
    }

    pub fn neighbors(&self, i: PlayerId) -> impl Iterator<Item = PlayerId> + '_ {
        self.adj
            .get(i.0)
            .into_iter()
            .flatten()
            .map(|&v| PlayerId(v))
    }

    pub fn neighbor_set(&self, i: PlayerId) -> &BTreeSet<usize> {
        &self.adj[i.0]
    }

    /// Sorted (i < j) edge list.
    pub fn edges(&self) -> Vec<(PlayerId, PlayerId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((PlayerId(u), PlayerId(v)));
                }
            }
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adj.iter().map(|s| s.len()).collect()
    }
}

/// BFS distance; `None` means unreachable.
pub fn shortest_distance(net: &Network, i: PlayerId, j: PlayerId) -> Result<Option<u32>, Error> {
    let dists = all_distances_from(net, i)?;
    if j.0 >= net.n() {
        return Err(Error::InvalidNode(j));
    }
    Ok(dists[j.0])
}

pub fn all_distances_from(net: &Network, i: PlayerId) -> Result<Vec<Option<u32>>, Error> {
    if i.0 >= net.n() {
        return Err(Error::InvalidNode(i));
    }
    let mut dist = vec![None; net.n()];
    dist[i.0] = Some(0);
    let mut queue = VecDeque::from([i.0]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &net.adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

pub fn connected_component(net: &Network, i: PlayerId) -> Result<BTreeSet<PlayerId>, Error> {
    let dists = all_distances_from(net, i)?;
    Ok(dists
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_some())
        .map(|(v, _)| PlayerId(v))
        .collect())
}

/// Lexicographically smallest shortest path from i to j (inclusive), or None.
pub fn lex_shortest_path(
    net: &Network,
    i: PlayerId,
    j: PlayerId,
) -> Result<Option<Vec<PlayerId>>, Error> {
    if i.0 >= net.n() {
        return Err(Error::InvalidNode(i));
    }
    let to_target = all_distances_from(net, j)?;
    let Some(total) = to_target[i.0] else {
        return Ok(None);
    };
    let mut path = vec![i];
    let mut cur = i.0;
    let mut remaining = total;
    while remaining > 0 {
        // Adjacency sets iterate in id order, so the first admissible
        // neighbor yields the lexicographically smallest path.
        let next = net.adj[cur]
            .iter()
            .find(|&&v| to_target[v] == Some(remaining - 1))
            .copied()
            .expect("BFS distance guarantees a predecessor");
        path.push(PlayerId(next));
        cur = next;
        remaining -= 1;
    }
    Ok(Some(path))
}

/// Min-cost two-unit flow between s and t over unit-cost unit-capacity arcs:
/// the exact shortest pair of edge-disjoint paths (Suurballe-style).
/// Returns the two path lengths, or None if no two edge-disjoint paths exist.
fn min_total_disjoint_pair(net: &Network, s: PlayerId, t: PlayerId) -> Option<(u32, u32)> {
    let n = net.n();
    // Arc layout: forward arcs at even indices, residual arcs at odd.
    let mut to: Vec<usize> = Vec::new();
    let mut cost: Vec<i64> = Vec::new();
    let mut cap: Vec<i64> = Vec::new();
    let mut head: Vec<Vec<usize>> = vec![Vec::new(); n];
    let add_arc = |u: usize, v: usize, head: &mut Vec<Vec<usize>>,
                       to: &mut Vec<usize>, cost: &mut Vec<i64>, cap: &mut Vec<i64>| {
        head[u].push(to.len());
        to.push(v);
        cost.push(1);
        cap.push(1);
        head[v].push(to.len());
        to.push(u);
        cost.push(-1);
        cap.push(0);
    };
    for u in 0..n {
        for &v in &net.adj[u] {
            // one directed arc per orientation (u->v added when visiting u)
            add_arc(u, v, &mut head, &mut to, &mut cost, &mut cap);
        }
    }

    // Two rounds of Bellman-Ford (queue based) + unit augmentation.
    for _ in 0..2 {
        let mut dist = vec![i64::MAX; n];
        let mut prev_arc = vec![usize::MAX; n];
        let mut in_queue = vec![false; n];
        dist[s.0] = 0;
        let mut queue = VecDeque::from([s.0]);
        in_queue[s.0] = true;
        while let Some(u) = queue.pop_front() {
            in_queue[u] = false;
            let du = dist[u];
            for &a in &head[u] {
                if cap[a] > 0 && du + cost[a] < dist[to[a]] {
                    dist[to[a]] = du + cost[a];
                    prev_arc[to[a]] = a;
                    if !in_queue[to[a]] {
                        in_queue[to[a]] = true;
                        queue.push_back(to[a]);
                    }
                }
            }
        }
        if dist[t.0] == i64::MAX {
            return None;
        }
        let mut v = t.0;
        while v != s.0 {
            let a = prev_arc[v];
            cap[a] -= 1;
            cap[a ^ 1] += 1;
            v = to[a ^ 1];
        }
    }

    // Decompose the flow. Forward arc a carries flow iff cap[a] == 0; cancel
    // opposite orientations of the same undirected edge first.
    let mut flow: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for a in (0..to.len()).step_by(2) {
        if cap[a] == 0 {
            let u = to[a ^ 1];
            let v = to[a];
            *flow.entry((u, v)).or_insert(0) += 1;
        }
    }
    let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let pairs: Vec<(usize, usize)> = flow.keys().copied().collect();
    for (u, v) in pairs {
        if u < v && flow.get(&(v, u)).copied().unwrap_or(0) > 0 {
            flow.remove(&(u, v));
            flow.remove(&(v, u));
        }
    }
    for (&(u, v), _) in &flow {
        out[u].insert(v);
    }
    let mut lens = [0u32; 2];
    for len in lens.iter_mut() {
        let mut cur = s.0;
        while cur != t.0 {
            let next = *out[cur].iter().next().expect("flow decomposes into s-t paths");
            out[cur].remove(&next);
            cur = next;
            *len += 1;
        }
    }
    Some((lens[0].min(lens[1]), lens[0].max(lens[1])))
}

/// Reusable minimum-total disjoint-pair solver for a fixed network: the arc
/// arrays are built once and reused across many (s, t) queries, which is the
/// hot path when summing pair distances from one node to every target.
pub struct PairTotalSolver {
    n: usize,
    to: Vec<usize>,
    cost: Vec<i64>,
    head: Vec<Vec<usize>>,
    cap_template: Vec<i64>,
    cap: Vec<i64>,
    dist: Vec<i64>,
    prev_arc: Vec<usize>,
    in_queue: Vec<bool>,
}

impl PairTotalSolver {
    pub fn new(net: &Network) -> Self {
        let n = net.n();
        let mut to = Vec::new();
        let mut cost = Vec::new();
        let mut cap = Vec::new();
        let mut head: Vec<Vec<usize>> = vec![Vec::new(); n];
        for u in 0..n {
            for &v in &net.adj[u] {
                head[u].push(to.len());
                to.push(v);
                cost.push(1);
                cap.push(1);
                head[v].push(to.len());
                to.push(u);
                cost.push(-1);
                cap.push(0);
            }
        }
        PairTotalSolver {
            n,
            to,
            cost,
            head,
            cap: cap.clone(),
            cap_template: cap,
            dist: vec![0; n],
            prev_arc: vec![0; n],
            in_queue: vec![false; n],
        }
    }

    /// Combined length of the two paths in the shortest edge-disjoint pair
    /// from s to t, or None when no such pair exists.
    pub fn pair_total(&mut self, s: PlayerId, t: PlayerId) -> Option<u32> {
        self.cap.copy_from_slice(&self.cap_template);
        let mut total = 0i64;
        for _ in 0..2 {
            self.dist.fill(i64::MAX);
            self.dist[s.0] = 0;
            self.in_queue.fill(false);
            self.in_queue[s.0] = true;
            let mut queue = VecDeque::from([s.0]);
            while let Some(u) = queue.pop_front() {
                self.in_queue[u] = false;
                let du = self.dist[u];
                for &a in &self.head[u] {
                    let v = self.to[a];
                    if self.cap[a] > 0 && du + self.cost[a] < self.dist[v] {
                        self.dist[v] = du + self.cost[a];
                        self.prev_arc[v] = a;
                        if !self.in_queue[v] {
                            self.in_queue[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
            }
            if self.dist[t.0] == i64::MAX {
                return None;
            }
            total += self.dist[t.0];
            let mut v = t.0;
            while v != s.0 {
                let a = self.prev_arc[v];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                v = self.to[a ^ 1];
            }
        }
        debug_assert!(self.n >= 2);
        Some(total as u32)
    }
}

/// How a disjoint pair was obtained for delta < 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSource {
    /// delta = 1 exact minimum-total pair.
    Exact,
    /// Heuristic: true shortest path + shortest edge-disjoint backup.
    Heuristic,
    /// Heuristic backup leg missing; exact minimum-total pair substituted.
    Fallback,
}

pub fn min_disjoint_pair(
    net: &Network,
    i: PlayerId,
    j: PlayerId,
    delta: &Rat,
) -> Result<Option<PathPair>, Error> {
    Ok(min_disjoint_pair_detailed(net, i, j, delta)?.map(|(p, _)| p))
}

/// As `min_disjoint_pair`, but also reports how the pair was found.
pub fn min_disjoint_pair_detailed(
    net: &Network,
    i: PlayerId,
    j: PlayerId,
    delta: &Rat,
) -> Result<Option<(PathPair, PairSource)>, Error> {
    if i == j {
        return Err(Error::BadArgument("disjoint pair endpoints must differ".into()));
    }
    if i.0 >= net.n() {
        return Err(Error::InvalidNode(i));
    }
    if j.0 >= net.n() {
        return Err(Error::InvalidNode(j));
    }
    if *delta == Rat::from_integer(1) {
        return Ok(min_total_disjoint_pair(net, i, j)
            .map(|(a, b)| (PathPair::new(a, b), PairSource::Exact)));
    }
    let Some(path) = lex_shortest_path(net, i, j)? else {
        return Ok(None);
    };
    let primary = (path.len() - 1) as u32;
    let mut pruned = net.clone();
    for w in path.windows(2) {
        pruned.remove_edge(w[0], w[1])?;
    }
    if let Some(backup) = shortest_distance(&pruned, i, j)? {
        return Ok(Some((
            PathPair {
                primary,
                backup,
            },
            PairSource::Heuristic,
        )));
    }
    // The fixed shortest path may sever the only disjoint configuration
    // (trap graphs); fall back to the exact minimum-total pair.
    Ok(min_total_disjoint_pair(net, i, j)
        .map(|(a, b)| (PathPair::new(a, b), PairSource::Fallback)))
}

const ORACLE_MAX_NODES: usize = 12;

/// Brute-force oracle: minimizes d + delta*d' over all edge-disjoint pairs of
/// simple paths. Test-only companion of `min_disjoint_pair`.
pub fn exact_min_pair_oracle(
    net: &Network,
    i: PlayerId,
    j: PlayerId,
    delta: &Rat,
) -> Result<Option<PathPair>, Error> {
    if i == j {
        return Err(Error::BadArgument("disjoint pair endpoints must differ".into()));
    }
    if i.0 >= net.n() {
        return Err(Error::InvalidNode(i));
    }
    if j.0 >= net.n() {
        return Err(Error::InvalidNode(j));
    }
    if net.n() > ORACLE_MAX_NODES {
        return Err(Error::SizeGuard {
            n: net.n(),
            max: ORACLE_MAX_NODES,
        });
    }
    let mut edge_idx: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for (a, b) in net.edges() {
        let k = edge_idx.len() as u32;
        edge_idx.insert((a.0, b.0), k);
    }
    // All simple paths i -> j as (length, edge bitmask).
    let mut paths: Vec<(u32, u128)> = Vec::new();
    let mut stack: Vec<PlayerId> = vec![i];
    let mut visited = vec![false; net.n()];
    visited[i.0] = true;
    fn dfs(
        net: &Network,
        cur: usize,
        target: usize,
        visited: &mut Vec<bool>,
        stack: &mut Vec<PlayerId>,
        edge_idx: &BTreeMap<(usize, usize), u32>,
        mask: u128,
        paths: &mut Vec<(u32, u128)>,
    ) {
        if cur == target {
            paths.push(((stack.len() - 1) as u32, mask));
            return;
        }
        let nexts: Vec<usize> = net.adj[cur].iter().copied().collect();
        for v in nexts {
            if visited[v] {
                continue;
            }
            let key = if cur < v { (cur, v) } else { (v, cur) };
            let bit = 1u128 << edge_idx[&key];
            visited[v] = true;
            stack.push(PlayerId(v));
            dfs(net, v, target, visited, stack, edge_idx, mask | bit, paths);
            stack.pop();
            visited[v] = false;
        }
    }
    dfs(net, i.0, j.0, &mut visited, &mut stack, &edge_idx, 0, &mut paths);
    let mut best: Option<(Rat, PathPair)> = None;
    for (a, (la, ma)) in paths.iter().enumerate() {
        for (lb, mb) in paths.iter().skip(a + 1) {
            if ma & mb != 0 {
                continue;
            }
            let pair = PathPair::new(*la, *lb);
            let w = pair.weighted(delta);
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, pair));
            }
        }
    }
    Ok(best.map(|(_, p)| p))
}

/// Shortest cycle containing both endpoints: total of the delta = 1 minimal
/// edge-disjoint pair.
pub fn shortest_cycle_through(
    net: &Network,
    i: PlayerId,
    j: PlayerId,
) -> Result<Option<u32>, Error> {
    if i == j {
        return Err(Error::BadArgument("cycle endpoints must differ".into()));
    }
    if i.0 >= net.n() {
        return Err(Error::InvalidNode(i));
    }
    if j.0 >= net.n() {
        return Err(Error::InvalidNode(j));
    }
    Ok(min_total_disjoint_pair(net, i, j).map(|(a, b)| a + b))
}
