use super::WeightedGraph;
use crate::error::{Error, Result};

/// Record of a weighted edge contraction `G -> G'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    /// `vertex_map[v]` is the image of source vertex `v`.
    pub vertex_map: Vec<usize>,
    /// `edge_map[e]` is the image of source edge `e`, `None` when contracted.
    pub edge_map: Vec<Option<usize>>,
    /// Contracted source edges, increasing.
    pub contracted: Vec<usize>,
}

impl ContractionMap {
    pub fn identity(g: &WeightedGraph) -> Self {
        ContractionMap {
            vertex_map: (0..g.num_vertices()).collect(),
            edge_map: (0..g.num_edges()).map(Some).collect(),
            contracted: Vec::new(),
        }
    }

    /// Source edge for each target edge.
    pub fn surviving_preimages(&self) -> Vec<usize> {
        let count = self.edge_map.iter().flatten().count();
        let mut pre = vec![0; count];
        for (e, t) in self.edge_map.iter().enumerate() {
            if let Some(t) = t {
                pre[*t] = e;
            }
        }
        pre
    }
}

impl WeightedGraph {
    /// Contracts the edge set `edges`.
    ///
    /// Each image vertex receives the genus of its preimage subgraph, so a
    /// contracted loop adds one to the genus of its vertex. Image vertices are
    /// numbered by the smallest source vertex they contain; surviving edges
    /// keep their relative order.
    pub fn contract(&self, edges: &[usize]) -> Result<(WeightedGraph, ContractionMap)> {
        let ne = self.num_edges();
        let mut contracted = vec![false; ne];
        for &e in edges {
            if e >= ne {
                return Err(Error::UnknownEdge(e));
            }
            contracted[e] = true;
        }

        let nv = self.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if contracted[e] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                    parent[hi] = lo;
                }
            }
        }

        let mut class_index = vec![usize::MAX; nv];
        let mut vertex_map = vec![0; nv];
        let mut count = 0;
        for v in 0..nv {
            let r = find(&mut parent, v);
            if class_index[r] == usize::MAX {
                class_index[r] = count;
                count += 1;
            }
            vertex_map[v] = class_index[r];
        }

        // h'(v') = b_1(preimage) + sum of labels
        //        = #internal edges - #vertices + 1 + sum of labels
        let mut internal = vec![0i64; count];
        let mut size = vec![0i64; count];
        let mut label_sum = vec![0i64; count];
        for v in 0..nv {
            size[vertex_map[v]] += 1;
            label_sum[vertex_map[v]] += self.genus[v] as i64;
        }
        for (e, &(a, _)) in self.edges.iter().enumerate() {
            if contracted[e] {
                internal[vertex_map[a]] += 1;
            }
        }
        let genus: Vec<u32> = (0..count)
            .map(|c| (internal[c] - size[c] + 1 + label_sum[c]) as u32)
            .collect();

        let mut new_edges = Vec::new();
        let mut edge_map = vec![None; ne];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if !contracted[e] {
                edge_map[e] = Some(new_edges.len());
                new_edges.push((vertex_map[a], vertex_map[b]));
            }
        }
        let legs = self.legs.iter().map(|&r| vertex_map[r]).collect();
        let contracted_list = (0..ne).filter(|&e| contracted[e]).collect();

        Ok((
            WeightedGraph::from_parts_unchecked(genus, new_edges, legs),
            ContractionMap {
                vertex_map,
                edge_map,
                contracted: contracted_list,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn theta_edge_contraction_gives_double_loop() {
        let (g, map) = theta().contract(&[0]).unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(g.vertex_genera(), &[0]);
        assert_eq!(g.edges(), &[(0, 0), (0, 0)]);
        assert_eq!(g.genus(), 2);
        assert_eq!(map.edge_map, vec![None, Some(0), Some(1)]);
        assert_eq!(map.contracted, vec![0]);
    }

    #[test]
    fn loop_contraction_raises_genus() {
        let (g, _) = loop_graph().contract(&[0]).unwrap();
        assert_eq!(g, WeightedGraph::star(1, 1));
    }

    #[test]
    fn empty_contraction_is_identity() {
        let t = theta();
        let (g, map) = t.contract(&[]).unwrap();
        assert_eq!(g, t);
        assert_eq!(map, ContractionMap::identity(&t));
    }

    #[test]
    fn full_contraction_of_theta() {
        let (g, _) = theta().contract(&[0, 1, 2]).unwrap();
        assert_eq!(g, WeightedGraph::star(2, 0));
    }

    #[test]
    fn unknown_edge_is_rejected() {
        assert_eq!(theta().contract(&[3]).unwrap_err(), Error::UnknownEdge(3));
    }

    #[test]
    fn legs_follow_vertex_map() {
        let (g, map) = split_2_3().contract(&[0]).unwrap();
        assert_eq!(g, WeightedGraph::star(0, 5));
        assert_eq!(map.vertex_map, vec![0, 0]);
    }
}
