//! Representations of a grid quiver: one matrix per arrow, commuting around
//! every unit square.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::grid::{ArrowId, GridQuiver, VertexId};
use crate::matrix::Matrix;
use crate::morphism::Morphism;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rep {
    quiver: Arc<GridQuiver>,
    field: FieldSpec,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl Rep {
    /// Builds a representation, checking all matrix shapes. Commutativity is
    /// checked separately by [`Rep::validate`].
    pub fn new(
        quiver: Arc<GridQuiver>,
        field: FieldSpec,
        dims: Vec<usize>,
        maps: Vec<Matrix>,
    ) -> Result<Rep> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::Validation(format!(
                "got {} dimensions for {} vertices",
                dims.len(),
                quiver.vertex_count()
            )));
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::Validation(format!(
                "got {} maps for {} arrows",
                maps.len(),
                quiver.arrows().len()
            )));
        }
        let rep = Rep { quiver, field, dims, maps };
        rep.check_shapes()?;
        Ok(rep)
    }

    fn check_shapes(&self) -> Result<()> {
        for (i, m) in self.maps.iter().enumerate() {
            let a = self.quiver.arrow(i);
            if m.field() != self.field {
                return Err(Error::Validation(format!(
                    "map on {} uses a different field",
                    self.quiver.arrow_name(i)
                )));
            }
            if m.rows() != self.dims[a.target] || m.cols() != self.dims[a.source] {
                return Err(Error::Validation(format!(
                    "map on {} has shape {}x{}, expected {}x{}",
                    self.quiver.arrow_name(i),
                    m.rows(),
                    m.cols(),
                    self.dims[a.target],
                    self.dims[a.source]
                )));
            }
        }
        Ok(())
    }

    /// The zero representation.
    pub fn zero(quiver: Arc<GridQuiver>, field: FieldSpec) -> Rep {
        let dims = vec![0; quiver.vertex_count()];
        let maps = quiver
            .arrows()
            .iter()
            .map(|_| Matrix::zero(field, 0, 0))
            .collect();
        Rep { quiver, field, dims, maps }
    }

    /// Thin representation with dimension one on `support` and identity maps
    /// on all support-internal arrows. Valid whenever `support` is convex.
    pub fn thin_identity(quiver: Arc<GridQuiver>, field: FieldSpec, support: &[VertexId]) -> Rep {
        let mut dims = vec![0; quiver.vertex_count()];
        for &v in support {
            dims[v] = 1;
        }
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| {
                if dims[a.source] == 1 && dims[a.target] == 1 {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zero(field, dims[a.target], dims[a.source])
                }
            })
            .collect();
        Rep { quiver, field, dims, maps }
    }

    pub fn quiver(&self) -> &Arc<GridQuiver> {
        &self.quiver
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self, v: VertexId) -> usize {
        self.dims[v]
    }

    pub fn dim_vector(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn map(&self, a: ArrowId) -> &Matrix {
        &self.maps[a]
    }

    pub fn set_map(&mut self, a: ArrowId, m: Matrix) {
        let arrow = self.quiver.arrow(a);
        assert_eq!((m.rows(), m.cols()), (self.dims[arrow.target], self.dims[arrow.source]));
        self.maps[a] = m;
    }

    /// Vertices with nonzero dimension, in canonical order.
    pub fn support(&self) -> Vec<VertexId> {
        self.quiver.vertices().filter(|&v| self.dims[v] > 0).collect()
    }

    /// Arrows whose both endpoints carry nonzero dimension.
    pub fn support_arrows(&self) -> Vec<ArrowId> {
        (0..self.quiver.arrows().len())
            .filter(|&a| {
                let ar = self.quiver.arrow(a);
                self.dims[ar.source] > 0 && self.dims[ar.target] > 0
            })
            .collect()
    }

    /// Checks shapes and unit-square commutativity. Diagnostics name the
    /// offending arrow or square.
    pub fn validate(&self) -> Result<()> {
        self.check_shapes()?;
        for sq in self.quiver.unit_squares() {
            let p1 = self.maps[sq.first[1]].mul(&self.maps[sq.first[0]]);
            let p2 = self.maps[sq.second[1]].mul(&self.maps[sq.second[0]]);
            if p1 != p2 {
                let s = self.quiver.arrow(sq.first[0]).source;
                let t = self.quiver.arrow(sq.first[1]).target;
                return Err(Error::Validation(format!(
                    "square {} -> {} does not commute (via {} vs via {})",
                    self.quiver.vertex_name(s),
                    self.quiver.vertex_name(t),
                    self.quiver.vertex_name(self.quiver.arrow(sq.first[0]).target),
                    self.quiver.vertex_name(self.quiver.arrow(sq.second[0]).target),
                )));
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        assert_eq!(self.quiver, other.quiver, "direct sum needs a common quiver");
        assert_eq!(self.field, other.field);
        let dims: Vec<usize> = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut m = Matrix::zero(self.field, dims[a.target], dims[a.source]);
                for r in 0..self.dims[a.target] {
                    for c in 0..self.dims[a.source] {
                        m.set(r, c, self.maps[i].get(r, c).clone());
                    }
                }
                let (ro, co) = (self.dims[a.target], self.dims[a.source]);
                for r in 0..other.dims[a.target] {
                    for c in 0..other.dims[a.source] {
                        m.set(ro + r, co + c, other.maps[i].get(r, c).clone());
                    }
                }
                m
            })
            .collect();
        Rep { quiver: self.quiver.clone(), field: self.field, dims, maps }
    }

    pub fn direct_sum_many(quiver: &Arc<GridQuiver>, field: FieldSpec, parts: &[Rep]) -> Rep {
        let mut acc = Rep::zero(quiver.clone(), field);
        for p in parts {
            acc = acc.direct_sum(p);
        }
        acc
    }

    /// Conjugates by invertible per-vertex matrices: the map on an arrow
    /// v -> w becomes g_w * m * g_v^{-1}.
    pub fn base_change(&self, g: &[Matrix]) -> Result<Rep> {
        if g.len() != self.dims.len() {
            return Err(Error::Validation("one base-change matrix per vertex required".into()));
        }
        let mut inv = Vec::with_capacity(g.len());
        for (v, gv) in g.iter().enumerate() {
            if gv.rows() != self.dims[v] || gv.cols() != self.dims[v] {
                return Err(Error::Validation(format!(
                    "base change at {} must be {1}x{1}",
                    self.quiver.vertex_name(v),
                    self.dims[v]
                )));
            }
            inv.push(gv.invert().ok_or_else(|| {
                Error::Validation(format!(
                    "base change at {} is singular",
                    self.quiver.vertex_name(v)
                ))
            })?);
        }
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| g[a.target].mul(&self.maps[i]).mul(&inv[a.source]))
            .collect();
        Ok(Rep { quiver: self.quiver.clone(), field: self.field, dims: self.dims.clone(), maps })
    }

    /// Composite map along any directed path from `v` to each vertex of its
    /// upper set. Well defined because squares commute.
    pub fn transport_from(&self, v: VertexId) -> HashMap<VertexId, Matrix> {
        let mut out: HashMap<VertexId, Matrix> = HashMap::new();
        out.insert(v, Matrix::identity(self.field, self.dims[v]));
        let mut queue = std::collections::VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let tu = out[&u].clone();
            for &a in self.quiver.arrows_out(u) {
                let t = self.quiver.arrow(a).target;
                let m = self.maps[a].mul(&tu);
                match out.get(&t) {
                    None => {
                        out.insert(t, m);
                        queue.push_back(t);
                    }
                    Some(prev) => debug_assert_eq!(prev, &m, "path dependence"),
                }
            }
        }
        out
    }

    /// Composite map into `v` from each vertex of its lower set.
    pub fn transport_to(&self, v: VertexId) -> HashMap<VertexId, Matrix> {
        let mut out: HashMap<VertexId, Matrix> = HashMap::new();
        out.insert(v, Matrix::identity(self.field, self.dims[v]));
        let mut queue = std::collections::VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let tu = out[&u].clone();
            for &a in self.quiver.arrows_in(u) {
                let s = self.quiver.arrow(a).source;
                let m = tu.mul(&self.maps[a]);
                match out.get(&s) {
                    None => {
                        out.insert(s, m);
                        queue.push_back(s);
                    }
                    Some(prev) => debug_assert_eq!(prev, &m, "path dependence"),
                }
            }
        }
        out
    }
}

/// Layout of the unknowns of the morphism space Hom(x, m): one block per
/// vertex in canonical order, each block a dim_m(v) x dim_x(v) matrix stored
/// row-major.
pub struct HomSystem {
    pub offsets: Vec<usize>,
    pub total: usize,
}

impl HomSystem {
    pub fn layout(x: &Rep, m: &Rep) -> HomSystem {
        let mut offsets = Vec::with_capacity(x.dim_vector().len() + 1);
        let mut total = 0;
        for v in 0..x.dim_vector().len() {
            offsets.push(total);
            total += x.dim(v) * m.dim(v);
        }
        offsets.push(total);
        HomSystem { offsets, total }
    }
}

/// Constraint matrix whose kernel is Hom(x, m): for each arrow a: v -> w the
/// block of rows m(a) * f_v - f_w * x(a) = 0, rows ordered by canonical arrow
/// order and row-major within each arrow block.
pub fn hom_constraint_matrix(x: &Rep, m: &Rep) -> Matrix {
    assert_eq!(x.quiver(), m.quiver(), "hom needs a common quiver");
    assert_eq!(x.field(), m.field());
    let f = x.field();
    let layout = HomSystem::layout(x, m);
    let q = x.quiver();
    let mut rows: Vec<Matrix> = Vec::new();
    for (ai, arrow) in q.arrows().iter().enumerate() {
        let (v, w) = (arrow.source, arrow.target);
        let ma = m.map(ai);
        let xa = x.map(ai);
        let nrows = m.dim(w) * x.dim(v);
        if nrows == 0 {
            continue;
        }
        let mut block = Matrix::zero(f, nrows, layout.total);
        for i in 0..m.dim(w) {
            for j in 0..x.dim(v) {
                let row = i * x.dim(v) + j;
                // coefficient of f_v[k][j] is m(a)[i][k]
                for k in 0..m.dim(v) {
                    let coef = ma.get(i, k);
                    if !coef.is_zero() {
                        let col = layout.offsets[v] + k * x.dim(v) + j;
                        block.set(row, col, f.add(block.get(row, col), coef));
                    }
                }
                // coefficient of f_w[i][l] is -x(a)[l][j]
                for l in 0..x.dim(w) {
                    let coef = xa.get(l, j);
                    if !coef.is_zero() {
                        let col = layout.offsets[w] + i * x.dim(w) + l;
                        block.set(row, col, f.sub(block.get(row, col), coef));
                    }
                }
            }
        }
        rows.push(block);
    }
    if rows.is_empty() {
        return Matrix::zero(f, 0, layout.total);
    }
    Matrix::vstack(&rows.iter().collect::<Vec<_>>())
}

/// dim Hom(x, m), via rank of the constraint system.
pub fn hom_dim(x: &Rep, m: &Rep) -> usize {
    let layout = HomSystem::layout(x, m);
    let c = hom_constraint_matrix(x, m);
    layout.total - c.rank()
}

/// Basis of Hom(x, m) as morphisms, in the deterministic order produced by
/// the kernel computation.
pub fn hom_basis(x: &Rep, m: &Rep) -> Vec<Morphism> {
    let layout = HomSystem::layout(x, m);
    let c = hom_constraint_matrix(x, m);
    let k = c.kernel_basis();
    (0..k.cols())
        .map(|j| Morphism::unflatten(x, m, &layout, &k.column(j)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridQuiver;

    fn f5() -> FieldSpec {
        FieldSpec::Prime(5)
    }

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    /// I[b,d] over a line quiver rendered as vertex ids b-1 .. d-1.
    fn line_interval(g: &Arc<GridQuiver>, f: FieldSpec, b: usize, d: usize) -> Rep {
        let supp: Vec<VertexId> = (b - 1..d).collect();
        Rep::thin_identity(g.clone(), f, &supp)
    }

    #[test]
    fn validate_square_commutativity() {
        let g = GridQuiver::grid_2d(2, 2).unwrap();
        let ones = Rep::thin_identity(g.clone(), q(), &[0, 1, 2, 3]);
        assert!(ones.validate().is_ok());
        let mut bad = ones.clone();
        bad.set_map(3, Matrix::from_i64(q(), 1, 1, &[2]));
        let err = bad.validate().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("square 1,1 -> 2,2"), "{msg}");
    }

    #[test]
    fn validate_shape_errors() {
        let g = GridQuiver::equioriented(&[2]).unwrap();
        let bad = Rep::new(
            g.clone(),
            q(),
            vec![1, 2],
            vec![Matrix::zero(q(), 1, 1)],
        );
        assert!(matches!(bad, Err(Error::Validation(_))));
        let wrong_count = Rep::new(g, q(), vec![1], vec![]);
        assert!(matches!(wrong_count, Err(Error::Validation(_))));
    }

    #[test]
    fn support_and_dims() {
        let g = GridQuiver::equioriented(&[3]).unwrap();
        let v = line_interval(&g, f5(), 1, 2);
        assert_eq!(v.support(), vec![0, 1]);
        assert_eq!(v.dim_vector(), &[1, 1, 0]);
        assert_eq!(v.dim_total(), 2);
        assert_eq!(Rep::zero(g, f5()).support(), Vec::<usize>::new());
    }

    #[test]
    fn direct_sum_blocks() {
        let g = GridQuiver::equioriented(&[3]).unwrap();
        let a = line_interval(&g, q(), 1, 2);
        let b = line_interval(&g, q(), 1, 1);
        let s = a.direct_sum(&b);
        assert_eq!(s.dim_vector(), &[2, 1, 0]);
        assert_eq!(s.map(0), &Matrix::from_i64(q(), 1, 2, &[1, 0]));
        assert!(s.validate().is_ok());
        assert_eq!(s.dim_total(), a.dim_total() + b.dim_total());
    }

    #[test]
    fn hom_dims_on_a3() {
        let g = GridQuiver::equioriented(&[3]).unwrap();
        let i12 = line_interval(&g, q(), 1, 2);
        let i23 = line_interval(&g, q(), 2, 3);
        assert_eq!(hom_dim(&i12, &i23), 0);
        assert_eq!(hom_dim(&i23, &i12), 1);
        for (b, d) in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)] {
            let v = line_interval(&g, q(), b, d);
            assert_eq!(hom_dim(&v, &v), 1, "End of interval [{b},{d}]");
        }
    }

    #[test]
    fn hom_basis_consists_of_morphisms() {
        let g = GridQuiver::grid_2d(2, 2).unwrap();
        let full = Rep::thin_identity(g.clone(), f5(), &[0, 1, 2, 3]);
        let corner = Rep::thin_identity(g.clone(), f5(), &[3]);
        let basis = hom_basis(&full, &corner);
        assert_eq!(basis.len(), hom_dim(&full, &corner));
        for m in &basis {
            m.check(&full, &corner).unwrap();
        }
    }

    #[test]
    fn hom_is_additive() {
        let g = GridQuiver::grid_2d(2, 2).unwrap();
        let a = Rep::thin_identity(g.clone(), f5(), &[0, 1, 2, 3]);
        let b = Rep::thin_identity(g.clone(), f5(), &[1, 3]);
        let c = Rep::thin_identity(g.clone(), f5(), &[2]);
        let bc = b.direct_sum(&c);
        assert_eq!(hom_dim(&a, &bc), hom_dim(&a, &b) + hom_dim(&a, &c));
        assert_eq!(hom_dim(&bc, &a), hom_dim(&b, &a) + hom_dim(&c, &a));
    }

    #[test]
    fn base_change_scalar_example() {
        let g = GridQuiver::equioriented(&[2]).unwrap();
        let v = line_interval(&g, q(), 1, 2);
        let g2 = vec![Matrix::from_i64(q(), 1, 1, &[2]), Matrix::from_i64(q(), 1, 1, &[3])];
        let w = v.base_change(&g2).unwrap();
        let f = q();
        let expect = f.div(&f.from_i64(3), &f.from_i64(2));
        assert_eq!(w.map(0).get(0, 0), &expect);
        let singular = vec![Matrix::zero(q(), 1, 1), Matrix::identity(q(), 1)];
        assert!(v.base_change(&singular).is_err());
    }

    #[test]
    fn base_change_preserves_hom_dims() {
        let g = GridQuiver::grid_2d(2, 2).unwrap();
        let a = Rep::thin_identity(g.clone(), f5(), &[0, 1, 2, 3]);
        let sum = a.direct_sum(&Rep::thin_identity(g.clone(), f5(), &[1, 3]));
        let g_mats = vec![
            Matrix::from_i64(f5(), 1, 1, &[2]),
            Matrix::from_i64(f5(), 2, 2, &[1, 1, 0, 1]),
            Matrix::from_i64(f5(), 1, 1, &[3]),
            Matrix::from_i64(f5(), 2, 2, &[2, 0, 1, 1]),
        ];
        let moved = sum.base_change(&g_mats).unwrap();
        moved.validate().unwrap();
        assert_eq!(hom_dim(&moved, &moved), hom_dim(&sum, &sum));
        assert_eq!(moved.dim_vector(), sum.dim_vector());
    }

    #[test]
    fn transport_agrees_with_composition() {
        let g = GridQuiver::grid_2d(2, 2).unwrap();
        let full = Rep::thin_identity(g.clone(), q(), &[0, 1, 2, 3]);
        let t = full.transport_from(0);
        assert_eq!(t.len(), 4);
        assert!(t[&3].is_identity());
        let tt = full.transport_to(3);
        assert_eq!(tt.len(), 4);
        assert!(tt[&0].is_identity());
    }
}
