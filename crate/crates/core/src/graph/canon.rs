//! Canonical labeling, isomorphism and automorphisms.
//!
//! Vertices are colored by genus, leg labels, valence and loop count; colors
//! are refined by neighbour multisets until stable. Non-discrete partitions
//! are split by individualizing each vertex of the first non-trivial cell and
//! the leaf with the smallest encoding is canonical. All leaves attaining the
//! minimum differ by vertex automorphisms, which gives the automorphism group
//! as a by-product.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use super::WeightedGraph;

/// Isomorphism invariant of a [`WeightedGraph`]: equal iff the graphs are
/// isomorphic with legs fixed by label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalLabeling {
    pub form: CanonicalForm,
    /// Canonical index of each vertex.
    pub vertex_position: Vec<usize>,
    /// Canonical index of each edge.
    pub edge_position: Vec<usize>,
}

/// A vertex bijection together with a compatible edge bijection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

/// Automorphisms fixing every leg.
///
/// `order` is the flag-level order: every loop can additionally be flipped.
/// `vertex_edge_order` counts (vertex, edge) permutation pairs, and
/// `edge_action` lists the image of the group in the permutations of the edge
/// coordinates.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    /// Pairs `(vertex_perm, edge_perm)` with `perm[x]` the image of `x`.
    pub generators: Vec<(Vec<usize>, Vec<usize>)>,
    pub order: u64,
    pub vertex_edge_order: u64,
    pub vertex_automorphisms: Vec<Vec<usize>>,
    edge_action: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl AutomorphismGroup {
    /// All distinct edge permutations induced by automorphisms, identity first.
    pub fn edge_action(&self) -> &[Vec<usize>] {
        &self.edge_action
    }

    pub fn edge_action_order(&self) -> usize {
        self.edge_action.len()
    }

    /// Whether `(vertex_perm, edge_perm)` is an automorphism.
    pub fn contains(&self, vertex_perm: &[usize], edge_perm: &[usize]) -> bool {
        if !self.vertex_automorphisms.iter().any(|s| s == vertex_perm) {
            return false;
        }
        if edge_perm.len() != self.edges.len() {
            return false;
        }
        let mut seen = vec![false; edge_perm.len()];
        for (e, &t) in edge_perm.iter().enumerate() {
            if t >= seen.len() || seen[t] {
                return false;
            }
            seen[t] = true;
            let (a, b) = self.edges[e];
            let (x, y) = (vertex_perm[a], vertex_perm[b]);
            let image = if x <= y { (x, y) } else { (y, x) };
            if image != self.edges[t] {
                return false;
            }
        }
        true
    }
}

struct Search<'a> {
    graph: &'a WeightedGraph,
    mult: Vec<Vec<u32>>,
    best: Option<Vec<u32>>,
    leaves: Vec<Vec<usize>>,
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn distinct(colors: &[u32]) -> usize {
    colors.iter().collect::<HashSet<_>>().len()
}

impl<'a> Search<'a> {
    fn new(graph: &'a WeightedGraph) -> Self {
        Search {
            graph,
            mult: graph.multiplicities(),
            best: None,
            leaves: Vec::new(),
        }
    }

    fn initial_colors(&self) -> Vec<u32> {
        let g = self.graph;
        let keys: Vec<(u32, Vec<usize>, usize, u32)> = (0..g.num_vertices())
            .map(|v| {
                (
                    g.genus[v],
                    g.legs_at(v),
                    g.edge_valence_unchecked(v),
                    self.mult[v][v],
                )
            })
            .collect();
        rank(&keys)
    }

    fn refine(&self, colors: &mut Vec<u32>) {
        let nv = colors.len();
        loop {
            let before = distinct(colors);
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..nv)
                .map(|v| {
                    let mut nb: Vec<(u32, u32)> = (0..nv)
                        .filter(|&u| u != v && self.mult[v][u] > 0)
                        .map(|u| (colors[u], self.mult[v][u]))
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            *colors = rank(&sigs);
            if distinct(colors) == before {
                break;
            }
        }
    }

    fn encode(&self, pos: &[usize]) -> Vec<u32> {
        let g = self.graph;
        let nv = pos.len();
        let mut inv = vec![0; nv];
        for (v, &p) in pos.iter().enumerate() {
            inv[p] = v;
        }
        let mut code = Vec::with_capacity(3 + nv + g.legs.len() + nv * (nv + 1) / 2);
        code.push(nv as u32);
        code.push(g.edges.len() as u32);
        code.push(g.legs.len() as u32);
        code.extend(inv.iter().map(|&v| g.genus[v]));
        code.extend(g.legs.iter().map(|&r| pos[r] as u32));
        for i in 0..nv {
            for j in i..nv {
                code.push(self.mult[inv[i]][inv[j]]);
            }
        }
        code
    }

    fn descend(&mut self, mut colors: Vec<u32>) {
        self.refine(&mut colors);
        let nv = colors.len();
        let mut counts = vec![0usize; nv];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        match (0..nv).find(|&c| counts[c] > 1) {
            None => {
                let pos: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
                let code = self.encode(&pos);
                match &self.best {
                    Some(b) if code > *b => {}
                    Some(b) if code == *b => self.leaves.push(pos),
                    _ => {
                        self.best = Some(code);
                        self.leaves = vec![pos];
                    }
                }
            }
            Some(cell) => {
                let members: Vec<usize> = (0..nv).filter(|&v| colors[v] as usize == cell).collect();
                for v in members {
                    let keys: Vec<(u32, bool)> =
                        (0..nv).map(|u| (colors[u], u != v)).collect();
                    self.descend(rank(&keys));
                }
            }
        }
    }

    fn run(mut self) -> (Vec<u32>, Vec<Vec<usize>>) {
        let start = self.initial_colors();
        self.descend(start);
        (self.best.expect("search visits at least one leaf"), self.leaves)
    }
}

fn to_bytes(code: &[u32]) -> CanonicalForm {
    CanonicalForm(code.iter().flat_map(|x| x.to_be_bytes()).collect())
}

/// Sorts edges by their endpoints under `pos`, ties by original index.
fn edge_positions(g: &WeightedGraph, pos: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.sort_by_key(|&e| {
        let (a, b) = g.edges[e];
        let (x, y) = (pos[a], pos[b]);
        (x.min(y), x.max(y), e)
    });
    let mut edge_pos = vec![0; order.len()];
    for (i, &e) in order.iter().enumerate() {
        edge_pos[e] = i;
    }
    edge_pos
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

impl WeightedGraph {
    pub fn canonical_labeling(&self) -> CanonicalLabeling {
        let (best, leaves) = Search::new(self).run();
        let pos = leaves.into_iter().next().unwrap();
        CanonicalLabeling {
            form: to_bytes(&best),
            edge_position: edge_positions(self, &pos),
            vertex_position: pos,
        }
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let (best, _) = Search::new(self).run();
        to_bytes(&best)
    }

    /// The canonically relabeled graph together with the labeling used.
    pub fn canonical_graph(&self) -> (WeightedGraph, CanonicalLabeling) {
        let lab = self.canonical_labeling();
        (self.relabel(&lab.vertex_position, &lab.edge_position), lab)
    }

    pub fn is_isomorphic(&self, other: &WeightedGraph) -> Option<Isomorphism> {
        let a = self.canonical_labeling();
        let b = other.canonical_labeling();
        if a.form != b.form {
            return None;
        }
        let mut vinv = vec![0; b.vertex_position.len()];
        for (v, &p) in b.vertex_position.iter().enumerate() {
            vinv[p] = v;
        }
        let mut einv = vec![0; b.edge_position.len()];
        for (e, &p) in b.edge_position.iter().enumerate() {
            einv[p] = e;
        }
        Some(Isomorphism {
            vertex_map: a.vertex_position.iter().map(|&p| vinv[p]).collect(),
            edge_map: a.edge_position.iter().map(|&p| einv[p]).collect(),
        })
    }

    /// Edge permutation induced by a vertex automorphism, matching parallel
    /// edges in index order.
    fn lift_vertex_map(&self, sigma: &[usize]) -> Vec<usize> {
        let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (e, &key) in self.edges.iter().enumerate() {
            classes.entry(key).or_default().push(e);
        }
        let mut perm = vec![0; self.edges.len()];
        for (&(a, b), members) in &classes {
            let (x, y) = (sigma[a], sigma[b]);
            let target = &classes[&(x.min(y), x.max(y))];
            for (i, &e) in members.iter().enumerate() {
                perm[e] = target[i];
            }
        }
        perm
    }

    pub fn automorphisms(&self) -> AutomorphismGroup {
        let (_, leaves) = Search::new(self).run();
        let nv = self.num_vertices();
        let mut inv0 = vec![0; nv];
        for (v, &p) in leaves[0].iter().enumerate() {
            inv0[p] = v;
        }
        let mut vertex_automorphisms: Vec<Vec<usize>> = leaves
            .iter()
            .map(|pos| pos.iter().map(|&p| inv0[p]).collect())
            .collect();
        vertex_automorphisms.sort();

        let identity_v: Vec<usize> = (0..nv).collect();
        let identity_e: Vec<usize> = (0..self.num_edges()).collect();
        let mut generators = Vec::new();
        for sigma in &vertex_automorphisms {
            if *sigma != identity_v {
                generators.push((sigma.clone(), self.lift_vertex_map(sigma)));
            }
        }
        let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (e, &key) in self.edges.iter().enumerate() {
            classes.entry(key).or_default().push(e);
        }
        let mut parallel_factor = 1u64;
        for members in classes.values() {
            parallel_factor *= factorial(members.len());
            for w in members.windows(2) {
                let mut t = identity_e.clone();
                t.swap(w[0], w[1]);
                generators.push((identity_v.clone(), t));
            }
        }
        let loops = (0..self.num_edges()).filter(|&e| self.is_loop(e)).count() as u32;
        let vertex_edge_order = vertex_automorphisms.len() as u64 * parallel_factor;

        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut edge_action = vec![identity_e.clone()];
        seen.insert(identity_e);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (_, gen) in &generators {
                let next: Vec<usize> = edge_action[i].iter().map(|&e| gen[e]).collect();
                if seen.insert(next.clone()) {
                    edge_action.push(next);
                    queue.push_back(edge_action.len() - 1);
                }
            }
        }

        AutomorphismGroup {
            generators,
            order: vertex_edge_order << loops,
            vertex_edge_order,
            vertex_automorphisms,
            edge_action,
            edges: self.edges.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn relabeled_theta_has_same_form() {
        let a = theta();
        let b = WeightedGraph::new(vec![0, 0], vec![(1, 0), (0, 1), (1, 0)], vec![]).unwrap();
        assert_eq!(a.canonical_form(), b.canonical_form());
    }

    #[test]
    fn theta_and_dumbbell_differ() {
        assert_ne!(theta().canonical_form(), dumbbell().canonical_form());
        assert!(theta().is_isomorphic(&dumbbell()).is_none());
    }

    #[test]
    fn legs_are_fixed_colors() {
        let p = WeightedGraph::new(vec![0, 1], vec![(0, 1)], vec![0, 1]).unwrap();
        let q = WeightedGraph::new(vec![0, 1], vec![(0, 1)], vec![1, 0]).unwrap();
        assert_ne!(p.canonical_form(), q.canonical_form());
    }

    #[test]
    fn automorphism_orders() {
        let t = theta().automorphisms();
        assert_eq!(t.order, 12);
        assert_eq!(t.vertex_edge_order, 12);
        assert_eq!(t.edge_action_order(), 6);

        let d = dumbbell().automorphisms();
        assert_eq!(d.order, 8);
        assert_eq!(d.vertex_edge_order, 2);
        assert_eq!(d.edge_action_order(), 2);
        assert!(d.contains(&[1, 0], &[2, 1, 0]));
        assert!(!d.contains(&[1, 0], &[0, 1, 2]));

        let star = WeightedGraph::star(0, 4).automorphisms();
        assert_eq!(star.order, 1);
        assert!(star.generators.is_empty());
    }

    #[test]
    fn isomorphism_of_graph_with_itself() {
        let t = theta();
        let iso = t.is_isomorphic(&t).unwrap();
        assert_eq!(iso.vertex_map.len(), 2);
        let g = split_2_3();
        let iso = g.is_isomorphic(&g).unwrap();
        assert_eq!(iso.vertex_map, vec![0, 1]);
        assert_eq!(iso.edge_map, vec![0]);
    }

    #[test]
    fn leg_swap_of_star_is_not_isomorphic() {
        // two-vertex graphs whose leg sets differ by swapping legs 2 and 3
        let a = WeightedGraph::new(vec![0, 0], vec![(0, 1)], vec![0, 0, 1, 1, 1]).unwrap();
        let b = WeightedGraph::new(vec![0, 0], vec![(0, 1)], vec![0, 1, 0, 1, 1]).unwrap();
        assert!(a.is_isomorphic(&b).is_none());
    }

    #[test]
    fn isomorphism_maps_structure() {
        let a = WeightedGraph::new(vec![0, 1, 0], vec![(0, 1), (1, 2), (2, 2)], vec![0]).unwrap();
        let b = WeightedGraph::new(vec![0, 0, 1], vec![(1, 1), (2, 1), (0, 2)], vec![0]).unwrap();
        let iso = a.is_isomorphic(&b).unwrap();
        for (e, &(x, y)) in a.edges().iter().enumerate() {
            let (p, q) = b.edges()[iso.edge_map[e]];
            let (mx, my) = (iso.vertex_map[x], iso.vertex_map[y]);
            assert_eq!((mx.min(my), mx.max(my)), (p, q));
        }
    }
}
