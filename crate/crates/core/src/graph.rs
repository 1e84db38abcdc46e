//! The graph of root profiles of a fixed nilpotent matrix, its connectivity,
//! and explicit p-chains between profiles with equal p-th power.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{
    apply_move, enumerate_preimages, is_p_adjacent, profile_power, AdjacencyMove, Direction, Profile,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Oriented so that it maps `vertices[from]` to `vertices[to]`.
    pub mv: AdjacencyMove,
}

/// Vertices are the profiles whose p-th power is `target`; edges join
/// distinct p-adjacent vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileGraph {
    pub p: usize,
    pub target: Profile,
    pub vertices: Vec<Profile>,
    pub edges: Vec<Edge>,
}

pub fn build_graph(target: &Profile, p: usize, cap: usize) -> Result<ProfileGraph> {
    let vertices = enumerate_preimages(target, p, cap)?;
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if let Some(mv) = is_p_adjacent(&vertices[i], &vertices[j], p) {
                edges.push(Edge { from: i, to: j, mv });
            }
        }
    }
    Ok(ProfileGraph { p, target: target.clone(), vertices, edges })
}

impl ProfileGraph {
    pub fn index_of(&self, m: &Profile) -> Option<usize> {
        self.vertices.iter().position(|v| v == m)
    }

    pub fn has_edge(&self, a: &Profile, b: &Profile) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self
                .edges
                .iter()
                .any(|e| (e.from, e.to) == (i, j) || (e.from, e.to) == (j, i)),
            _ => false,
        }
    }

    /// Breadth-first reachability; empty and single-vertex graphs count as
    /// connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// GraphViz rendering; nodes are labelled by their canonical profile text.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph profiles {{");
        let _ = writeln!(out, "  label=\"p={} target={}\";", self.p, self.target);
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                self.vertices[e.from], self.vertices[e.to], e.mv
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn report(&self) -> GraphReport {
        GraphReport {
            p: self.p,
            target: self.target.to_string(),
            vertex_count: self.vertices.len(),
            edge_count: self.edges.len(),
            connected: self.is_connected(),
            vertices: self.vertices.iter().map(ToString::to_string).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeReport {
                    from: self.vertices[e.from].to_string(),
                    to: self.vertices[e.to].to_string(),
                    mv: e.mv,
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Debug)]
#[serde(rename_all = "camelCase")]
pub struct GraphReport {
    pub p: usize,
    pub target: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub connected: bool,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeReport>,
}

#[derive(Serialize, Debug)]
pub struct EdgeReport {
    pub from: String,
    pub to: String,
    #[serde(rename = "move")]
    pub mv: AdjacencyMove,
}

/// Sequence of profiles, consecutive members p-adjacent via `moves[i]`
/// (`apply_move(steps[i], moves[i]) == steps[i + 1]`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileChain {
    pub p: usize,
    pub steps: Vec<Profile>,
    pub moves: Vec<AdjacencyMove>,
}

impl ProfileChain {
    /// Re-checks every step: the move applies, is the adjacency witness, and
    /// preserves the p-th power.
    pub fn validate(&self) -> Result<()> {
        if self.moves.len() + 1 != self.steps.len() {
            return Err(Error::Internal("chain has mismatched step and move counts".into()));
        }
        for (i, mv) in self.moves.iter().enumerate() {
            let (a, b) = (&self.steps[i], &self.steps[i + 1]);
            if apply_move(a, mv, self.p)? != *b || is_p_adjacent(a, b, self.p) != Some(*mv) {
                return Err(Error::Internal(format!("chain step {i} ({a} -> {b}) is not the move {mv}")));
            }
            if profile_power(a, self.p) != profile_power(b, self.p) {
                return Err(Error::Internal(format!("chain step {i} changes the p-th power")));
            }
        }
        Ok(())
    }
}

struct ChainBuilder {
    p: usize,
    budget: usize,
}

impl ChainBuilder {
    fn tick(&mut self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::Internal("profile chain iteration guard exceeded".into()));
        }
        self.budget -= 1;
        Ok(())
    }

    /// Steps and moves from `m` to `target`, following the induction on size.
    fn chain(&mut self, m: &Profile, target: &Profile) -> Result<(Vec<Profile>, Vec<AdjacencyMove>)> {
        self.tick()?;
        if m == target {
            return Ok((vec![m.clone()], Vec::new()));
        }
        // a shared cell size is stripped, chained recursively and re-added
        if let Some(k) = m.iter().rev().map(|(k, _)| k).find(|&k| target.get(k) > 0) {
            let unit = Profile::unit(k);
            let (steps, moves) =
                self.chain(&m.checked_minus(&unit).unwrap(), &target.checked_minus(&unit).unwrap())?;
            return Ok((steps.into_iter().map(|s| s.plus(&unit)).collect(), moves));
        }
        let q = m.max_cell().max(target.max_cell());
        if target.get(q) == 0 {
            let (mut steps, moves) = self.chain(target, m)?;
            steps.reverse();
            let moves = moves.iter().rev().map(AdjacencyMove::reversed).collect();
            return Ok((steps, moves));
        }
        let p = self.p;
        let a = (q - 1) / p;
        let (lo, hi) = (p * a + 1, p * (a + 1));
        let mut steps = vec![m.clone()];
        let mut moves = Vec::new();
        let mut cur = m.clone();
        while cur.get(q) == 0 {
            self.tick()?;
            let k = (lo..=hi).rev().find(|&k| cur.get(k) > 0).ok_or_else(|| {
                Error::Internal(format!("no cell of {cur} in window [{lo},{hi}] below {q}"))
            })?;
            if k >= q {
                return Err(Error::Internal(format!("window cell {k} is not below {q}")));
            }
            let mv = if cur.get(k) > 1 {
                // m - 2e_k + e_{k+1} + e_{k-1}
                AdjacencyMove { a, k: k - 1, l: k + 1, direction: Direction::Backward }
            } else {
                let l = (lo..k).rev().find(|&l| cur.get(l) > 0).ok_or_else(|| {
                    Error::Internal(format!("no second window cell of {cur} below {k}"))
                })?;
                // m - e_k - e_l + e_{k+1} + e_{l-1}
                AdjacencyMove { a, k: l - 1, l: k + 1, direction: Direction::Backward }
            };
            mv.check_window(p).map_err(|e| Error::Internal(format!("chain window: {e}")))?;
            cur = apply_move(&cur, &mv, p)?;
            steps.push(cur.clone());
            moves.push(mv);
        }
        let (rest_steps, rest_moves) = self.chain(&cur, target)?;
        steps.extend(rest_steps.into_iter().skip(1));
        moves.extend(rest_moves);
        Ok((steps, moves))
    }
}

/// Constructs a p-chain from `m` to `target`; both must have the same p-th
/// power.
pub fn profile_chain(m: &Profile, target: &Profile, p: usize) -> Result<ProfileChain> {
    let (pm, pt) = (profile_power(m, p), profile_power(target, p));
    if pm != pt {
        return Err(Error::PowerMismatch(format!("{m} powers to {pm}, {target} powers to {pt}")));
    }
    // every case-(iii) step raises the top window cell by one, and every
    // stripping step removes at least one unit of size
    let budget = 4 * (m.size() + m.max_cell().max(target.max_cell()) + 1) * (m.cell_count() + 1);
    let mut builder = ChainBuilder { p, budget };
    let (steps, moves) = builder.chain(m, target)?;
    let chain = ProfileChain { p, steps, moves };
    chain.validate()?;
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{partitions, DEFAULT_SIZE_CAP};

    fn pr(s: &str) -> Profile {
        s.parse().unwrap()
    }

    #[test]
    fn graph_examples() {
        let g = build_graph(&pr("1:2"), 2, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(g.vertices, vec![pr("2:1"), pr("1:2")]);
        assert_eq!(g.edges.len(), 1);
        assert!(g.is_connected());

        let g = build_graph(&pr("2:1"), 2, DEFAULT_SIZE_CAP).unwrap();
        assert!(g.vertices.is_empty() && g.edges.is_empty());
        assert!(g.is_connected());

        for p in 1..=4 {
            let g = build_graph(&pr("1:1"), p, DEFAULT_SIZE_CAP).unwrap();
            assert_eq!(g.vertices, vec![pr("1:1")]);
            assert!(g.edges.is_empty());
        }

        let g = build_graph(&pr("2:2,1:2"), 2, DEFAULT_SIZE_CAP).unwrap();
        assert!(g.index_of(&pr("4:1,2:1")).is_some());
        assert!(g.has_edge(&pr("4:1,2:1"), &pr("3:2")));
        assert!(g.is_connected());
    }

    #[test]
    fn disconnected_graph_is_detected() {
        let g = ProfileGraph {
            p: 2,
            target: pr("1:2"),
            vertices: vec![pr("2:1"), pr("1:2")],
            edges: Vec::new(),
        };
        assert!(!g.is_connected());
    }

    #[test]
    fn chain_examples() {
        let m = pr("3:1,1:2");
        let c = profile_chain(&m, &m, 2).unwrap();
        assert_eq!(c.steps, vec![m]);
        assert!(c.moves.is_empty());

        let c = profile_chain(&pr("1:2"), &pr("2:1"), 2).unwrap();
        assert_eq!(c.steps, vec![pr("1:2"), pr("2:1")]);
        assert_eq!((c.moves[0].a, c.moves[0].k, c.moves[0].l), (0, 0, 2));

        let c = profile_chain(&pr("4:1,2:1"), &pr("3:2"), 2).unwrap();
        assert_eq!(c.steps, vec![pr("4:1,2:1"), pr("3:2")]);
        assert_eq!((c.moves[0].a, c.moves[0].k, c.moves[0].l), (1, 2, 4));
        assert_eq!(c.moves[0].direction, Direction::Forward);

        assert!(matches!(profile_chain(&pr("2:1"), &pr("1:2"), 3), Ok(_)));
        assert!(matches!(profile_chain(&pr("2:1"), &pr("1:2"), 1), Err(Error::PowerMismatch(_))));
    }

    #[test]
    fn chains_walk_inside_the_graph() {
        for n in 1..=9 {
            for p in 2..=4 {
                let mut targets: Vec<Profile> = partitions(n).iter().map(|m| profile_power(m, p)).collect();
                targets.sort();
                targets.dedup();
                for t in targets {
                    let g = build_graph(&t, p, DEFAULT_SIZE_CAP).unwrap();
                    for a in &g.vertices {
                        for b in &g.vertices {
                            let c = profile_chain(a, b, p).unwrap();
                            assert_eq!(c.steps.first(), Some(a));
                            assert_eq!(c.steps.last(), Some(b));
                            for w in c.steps.windows(2) {
                                assert!(g.has_edge(&w[0], &w[1]));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dot_output() {
        let empty = build_graph(&pr("2:1"), 2, DEFAULT_SIZE_CAP).unwrap().to_dot();
        assert!(empty.starts_with("graph profiles {") && empty.trim_end().ends_with('}'));
        assert!(!empty.contains("--"));
        let dot = build_graph(&pr("1:2"), 2, DEFAULT_SIZE_CAP).unwrap().to_dot();
        assert!(dot.contains("  \"2:1\";"));
        assert!(dot.contains("  \"1:2\";"));
        assert_eq!(dot.matches(" -- ").count(), 1);
        assert!(dot.contains("[label=\"(0,0,2)\"]"));
    }
}
