//! Products of oriented line quivers ("grids") with one commutativity square
//! per elementary face.
//!
//! Coordinates are 1-based. For two factors the convention is (row, column)
//! with row 1 at the bottom. The canonical vertex order is lexicographic on
//! coordinates; arrows are ordered by source vertex, then axis, then target.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub size: usize,
    /// One entry per edge: `orientation[k]` directs the edge between
    /// positions k+1 and k+2. `Forward` points toward the larger position.
    pub orientation: Vec<Dir>,
}

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub source: VertexId,
    pub target: VertexId,
    pub axis: usize,
}

/// Two directed length-2 paths around an elementary square, sharing source
/// and target. Representations must make them commute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSquare {
    pub first: [ArrowId; 2],
    pub second: [ArrowId; 2],
}

#[derive(Debug)]
pub struct GridQuiver {
    factors: Vec<Factor>,
    vertices: Vec<Vec<usize>>,
    arrows: Vec<Arrow>,
    squares: Vec<UnitSquare>,
    arrows_out: Vec<Vec<ArrowId>>,
    arrows_in: Vec<Vec<ArrowId>>,
}

impl PartialEq for GridQuiver {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}
impl Eq for GridQuiver {}

impl GridQuiver {
    pub fn new(factors: Vec<Factor>) -> Result<Arc<GridQuiver>> {
        if factors.is_empty() {
            return Err(Error::Validation("empty factor list".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.size == 0 {
                return Err(Error::Validation(format!("factor {} has size 0", i + 1)));
            }
            if f.orientation.len() != f.size - 1 {
                return Err(Error::Validation(format!(
                    "factor {}: orientation word has length {}, expected {}",
                    i + 1,
                    f.orientation.len(),
                    f.size - 1
                )));
            }
        }
        let vertices = enumerate_coords(&factors);
        let index: HashMap<&[usize], VertexId> =
            vertices.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();

        let mut arrows = Vec::new();
        for (vid, coords) in vertices.iter().enumerate() {
            for (axis, f) in factors.iter().enumerate() {
                let pos = coords[axis];
                // arrow leaving `coords` toward pos-1, then toward pos+1
                if pos >= 2 && f.orientation[pos - 2] == Dir::Backward {
                    let mut t = coords.clone();
                    t[axis] = pos - 1;
                    arrows.push(Arrow { source: vid, target: index[t.as_slice()], axis });
                }
                if pos < f.size && f.orientation[pos - 1] == Dir::Forward {
                    let mut t = coords.clone();
                    t[axis] = pos + 1;
                    arrows.push(Arrow { source: vid, target: index[t.as_slice()], axis });
                }
            }
        }

        let arrow_index: HashMap<(VertexId, VertexId), ArrowId> = arrows
            .iter()
            .enumerate()
            .map(|(i, a)| ((a.source, a.target), i))
            .collect();
        let mut arrows_out = vec![Vec::new(); vertices.len()];
        let mut arrows_in = vec![Vec::new(); vertices.len()];
        for (i, a) in arrows.iter().enumerate() {
            arrows_out[a.source].push(i);
            arrows_in[a.target].push(i);
        }

        let mut squares = Vec::new();
        for (vid, coords) in vertices.iter().enumerate() {
            for a in 0..factors.len() {
                for b in a + 1..factors.len() {
                    if coords[a] >= factors[a].size || coords[b] >= factors[b].size {
                        continue;
                    }
                    let corner = |da: usize, db: usize| -> VertexId {
                        let mut c = coords.clone();
                        c[a] += da;
                        c[b] += db;
                        index[c.as_slice()]
                    };
                    let c00 = vid;
                    let c10 = corner(1, 0);
                    let c01 = corner(0, 1);
                    let c11 = corner(1, 1);
                    let dir_a = factors[a].orientation[coords[a] - 1];
                    let dir_b = factors[b].orientation[coords[b] - 1];
                    // source corner has both bounding arrows outgoing
                    let (s, ma, mb, t) = match (dir_a, dir_b) {
                        (Dir::Forward, Dir::Forward) => (c00, c10, c01, c11),
                        (Dir::Forward, Dir::Backward) => (c01, c11, c00, c10),
                        (Dir::Backward, Dir::Forward) => (c10, c00, c11, c01),
                        (Dir::Backward, Dir::Backward) => (c11, c01, c10, c00),
                    };
                    squares.push(UnitSquare {
                        first: [arrow_index[&(s, ma)], arrow_index[&(ma, t)]],
                        second: [arrow_index[&(s, mb)], arrow_index[&(mb, t)]],
                    });
                }
            }
        }

        let q = GridQuiver { factors, vertices, arrows, squares, arrows_out, arrows_in };
        for sq in &q.squares {
            debug_assert_eq!(q.arrows[sq.first[0]].source, q.arrows[sq.second[0]].source);
            debug_assert_eq!(q.arrows[sq.first[1]].target, q.arrows[sq.second[1]].target);
            debug_assert_eq!(q.arrows[sq.first[0]].target, q.arrows[sq.first[1]].source);
            debug_assert_eq!(q.arrows[sq.second[0]].target, q.arrows[sq.second[1]].source);
        }
        Ok(Arc::new(q))
    }

    /// Equioriented grid with the given factor sizes (all arrows forward).
    pub fn equioriented(sizes: &[usize]) -> Result<Arc<GridQuiver>> {
        GridQuiver::new(
            sizes
                .iter()
                .map(|&s| Factor {
                    size: s,
                    orientation: vec![Dir::Forward; s.saturating_sub(1)],
                })
                .collect(),
        )
    }

    /// Equioriented 2D grid with `m` rows and `n` columns.
    pub fn grid_2d(m: usize, n: usize) -> Result<Arc<GridQuiver>> {
        GridQuiver::equioriented(&[m, n])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.vertices.len()
    }

    pub fn coords(&self, v: VertexId) -> &[usize] {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, coords: &[usize]) -> Option<VertexId> {
        if coords.len() != self.factors.len() {
            return None;
        }
        let mut id = 0;
        for (axis, &c) in coords.iter().enumerate() {
            if c < 1 || c > self.factors[axis].size {
                return None;
            }
            id = id * self.factors[axis].size + (c - 1);
        }
        Some(id)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows_out(&self, v: VertexId) -> &[ArrowId] {
        &self.arrows_out[v]
    }

    pub fn arrows_in(&self, v: VertexId) -> &[ArrowId] {
        &self.arrows_in[v]
    }

    /// The arrow from u to v, if the grid has one.
    pub fn arrow_between(&self, u: VertexId, v: VertexId) -> Option<ArrowId> {
        self.arrows_out[u].iter().copied().find(|&a| self.arrows[a].target == v)
    }

    pub fn unit_squares(&self) -> &[UnitSquare] {
        &self.squares
    }

    pub fn is_equioriented(&self) -> bool {
        self.factors
            .iter()
            .all(|f| f.orientation.iter().all(|&d| d == Dir::Forward))
    }

    pub fn is_2d(&self) -> bool {
        self.factors.len() == 2
    }

    /// (rows, columns) of a two-factor grid.
    pub fn shape_2d(&self) -> Option<(usize, usize)> {
        if self.is_2d() {
            Some((self.factors[0].size, self.factors[1].size))
        } else {
            None
        }
    }

    /// Directed reachability. A path projects to a monotone walk in every
    /// factor, so reachability is the conjunction of per-factor conditions.
    pub fn reachable(&self, from: VertexId, to: VertexId) -> bool {
        let a = self.coords(from);
        let b = self.coords(to);
        for (axis, f) in self.factors.iter().enumerate() {
            let (x, y) = (a[axis], b[axis]);
            let ok = if x <= y {
                (x..y).all(|k| f.orientation[k - 1] == Dir::Forward)
            } else {
                (y..x).all(|k| f.orientation[k - 1] == Dir::Backward)
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Vertices reachable from `v`, in canonical order.
    pub fn upper_set(&self, v: VertexId) -> Vec<VertexId> {
        self.vertices().filter(|&u| self.reachable(v, u)).collect()
    }

    /// Vertices from which `v` is reachable, in canonical order.
    pub fn lower_set(&self, v: VertexId) -> Vec<VertexId> {
        self.vertices().filter(|&u| self.reachable(u, v)).collect()
    }

    pub fn vertex_name(&self, v: VertexId) -> String {
        self.coords(v)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn arrow_name(&self, a: ArrowId) -> String {
        let arrow = &self.arrows[a];
        format!("{}->{}", self.vertex_name(arrow.source), self.vertex_name(arrow.target))
    }

    pub fn parse_vertex(&self, text: &str) -> Result<VertexId> {
        let coords: Vec<usize> = text
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("bad vertex name {text:?}")))?;
        self.vertex_id(&coords)
            .ok_or_else(|| Error::Parse(format!("vertex {text:?} outside the grid")))
    }

    pub fn parse_arrow(&self, text: &str) -> Result<ArrowId> {
        let (s, t) = text
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("bad arrow name {text:?}")))?;
        let sv = self.parse_vertex(s)?;
        let tv = self.parse_vertex(t)?;
        self.arrows
            .iter()
            .position(|a| a.source == sv && a.target == tv)
            .ok_or_else(|| Error::Parse(format!("no arrow {text:?} in the grid")))
    }
}

fn enumerate_coords(factors: &[Factor]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.size);
        for prefix in &out {
            for c in 1..=f.size {
                let mut v = prefix.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn line(word: &[Dir]) -> Arc<GridQuiver> {
        GridQuiver::new(vec![Factor { size: word.len() + 1, orientation: word.to_vec() }]).unwrap()
    }

    #[test]
    fn construction_counts() {
        let a3 = GridQuiver::equioriented(&[3]).unwrap();
        assert_eq!((a3.vertex_count(), a3.arrows().len(), a3.unit_squares().len()), (3, 2, 0));
        let g23 = GridQuiver::grid_2d(2, 3).unwrap();
        assert_eq!((g23.vertex_count(), g23.arrows().len(), g23.unit_squares().len()), (6, 7, 2));
        let cube = GridQuiver::equioriented(&[2, 2, 2]).unwrap();
        assert_eq!((cube.vertex_count(), cube.arrows().len(), cube.unit_squares().len()), (8, 12, 6));
    }

    #[test]
    fn construction_errors() {
        assert!(GridQuiver::new(vec![]).is_err());
        assert!(GridQuiver::new(vec![Factor { size: 0, orientation: vec![] }]).is_err());
        assert!(GridQuiver::new(vec![Factor { size: 3, orientation: vec![Dir::Forward] }]).is_err());
    }

    #[test]
    fn canonical_orders() {
        let g = GridQuiver::grid_2d(2, 2).unwrap();
        let names: Vec<String> = g.vertices().map(|v| g.vertex_name(v)).collect();
        assert_eq!(names, ["1,1", "1,2", "2,1", "2,2"]);
        let arrows: Vec<String> = (0..g.arrows().len()).map(|a| g.arrow_name(a)).collect();
        assert_eq!(
            arrows,
            ["1,1->2,1", "1,1->1,2", "1,2->2,2", "2,1->2,2"]
        );
        for v in g.vertices() {
            assert_eq!(g.vertex_id(g.coords(v)), Some(v));
        }
    }

    #[test]
    fn name_round_trip() {
        let g = GridQuiver::grid_2d(3, 4).unwrap();
        for v in g.vertices() {
            assert_eq!(g.parse_vertex(&g.vertex_name(v)).unwrap(), v);
        }
        for a in 0..g.arrows().len() {
            assert_eq!(g.parse_arrow(&g.arrow_name(a)).unwrap(), a);
        }
        assert!(g.parse_vertex("0,1").is_err());
        assert!(g.parse_vertex("1").is_err());
        assert!(g.parse_arrow("1,1->2,2").is_err());
    }

    #[test]
    fn square_paths_share_endpoints() {
        let g = GridQuiver::new(vec![
            Factor { size: 3, orientation: vec![Dir::Backward, Dir::Forward] },
            Factor { size: 3, orientation: vec![Dir::Backward, Dir::Forward] },
        ])
        .unwrap();
        assert_eq!(g.unit_squares().len(), 4);
        for sq in g.unit_squares() {
            let f0 = g.arrow(sq.first[0]);
            let f1 = g.arrow(sq.first[1]);
            let s0 = g.arrow(sq.second[0]);
            let s1 = g.arrow(sq.second[1]);
            assert_eq!(f0.source, s0.source);
            assert_eq!(f1.target, s1.target);
            assert_eq!(f0.target, f1.source);
            assert_eq!(s0.target, s1.source);
            assert_ne!(f0.axis, s0.axis);
        }
    }

    fn bfs_reachable(g: &GridQuiver, from: VertexId) -> HashSet<VertexId> {
        let mut seen = HashSet::from([from]);
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for &a in g.arrows_out(v) {
                let t = g.arrow(a).target;
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    #[test]
    fn reachability_matches_bfs_oracle() {
        let grids = [
            GridQuiver::grid_2d(3, 3).unwrap(),
            GridQuiver::new(vec![
                Factor { size: 3, orientation: vec![Dir::Backward, Dir::Forward] },
                Factor { size: 2, orientation: vec![Dir::Forward] },
            ])
            .unwrap(),
            GridQuiver::equioriented(&[2, 2, 2]).unwrap(),
            line(&[Dir::Forward, Dir::Backward, Dir::Forward]),
        ];
        for g in &grids {
            for v in g.vertices() {
                let oracle = bfs_reachable(g, v);
                for u in g.vertices() {
                    assert_eq!(g.reachable(v, u), oracle.contains(&u));
                }
                let upper: HashSet<VertexId> = g.upper_set(v).into_iter().collect();
                assert_eq!(upper, oracle);
            }
            for v in g.vertices() {
                for u in g.vertices() {
                    assert_eq!(g.reachable(u, v), g.lower_set(v).contains(&u));
                }
            }
        }
    }

    #[test]
    fn orientation_dependent_reachability() {
        let g = line(&[Dir::Forward, Dir::Forward]);
        assert!(g.reachable(0, 2));
        let z = line(&[Dir::Forward, Dir::Backward]);
        assert!(!z.reachable(0, 2));
        assert!(z.reachable(2, 1));
        assert!(z.reachable(0, 1));
    }
}
