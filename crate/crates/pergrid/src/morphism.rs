//! Morphisms between representations: one matrix per vertex, commuting with
//! the arrow maps. Kernels and cokernels are computed vertexwise with the
//! induced maps solved for exactly.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rep::{HomSystem, Rep};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    /// Per vertex in canonical order: a dim_to(v) x dim_from(v) matrix.
    pub blocks: Vec<Matrix>,
}

impl Morphism {
    pub fn identity(r: &Rep) -> Morphism {
        Morphism {
            blocks: (0..r.dim_vector().len())
                .map(|v| Matrix::identity(r.field(), r.dim(v)))
                .collect(),
        }
    }

    pub fn zero(from: &Rep, to: &Rep) -> Morphism {
        Morphism {
            blocks: (0..from.dim_vector().len())
                .map(|v| Matrix::zero(from.field(), to.dim(v), from.dim(v)))
                .collect(),
        }
    }

    /// Verifies shapes and naturality: to(a) * f_v = f_w * from(a) per arrow.
    pub fn check(&self, from: &Rep, to: &Rep) -> Result<()> {
        if self.blocks.len() != from.dim_vector().len() {
            return Err(Error::Validation("one block per vertex required".into()));
        }
        for (v, b) in self.blocks.iter().enumerate() {
            if b.rows() != to.dim(v) || b.cols() != from.dim(v) {
                return Err(Error::Validation(format!(
                    "morphism block at {} has shape {}x{}, expected {}x{}",
                    from.quiver().vertex_name(v),
                    b.rows(),
                    b.cols(),
                    to.dim(v),
                    from.dim(v)
                )));
            }
        }
        for (ai, a) in from.quiver().arrows().iter().enumerate() {
            let lhs = to.map(ai).mul(&self.blocks[a.source]);
            let rhs = self.blocks[a.target].mul(from.map(ai));
            if lhs != rhs {
                return Err(Error::Validation(format!(
                    "morphism does not commute with {}",
                    from.quiver().arrow_name(ai)
                )));
            }
        }
        Ok(())
    }

    /// g after f.
    pub fn compose(&self, f: &Morphism) -> Morphism {
        Morphism {
            blocks: self
                .blocks
                .iter()
                .zip(&f.blocks)
                .map(|(g, f)| g.mul(f))
                .collect(),
        }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &crate::field::Scalar) -> Morphism {
        Morphism { blocks: self.blocks.iter().map(|b| b.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    /// Invertible at every vertex (hence an isomorphism when it commutes).
    pub fn is_invertible(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.rows() == b.cols() && b.rank() == b.rows())
    }

    /// Serializes the blocks into one column vector in the Hom-space layout:
    /// vertices in canonical order, entries row-major.
    pub fn flatten(&self, layout: &HomSystem) -> Matrix {
        let f = self.blocks[0].field();
        let mut out = Matrix::zero(f, layout.total, 1);
        for (v, b) in self.blocks.iter().enumerate() {
            let base = layout.offsets[v];
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out.set(base + r * b.cols() + c, 0, b.get(r, c).clone());
                }
            }
        }
        out
    }

    pub fn unflatten(from: &Rep, to: &Rep, layout: &HomSystem, column: &Matrix) -> Morphism {
        assert_eq!(column.rows(), layout.total);
        let f = from.field();
        let blocks = (0..from.dim_vector().len())
            .map(|v| {
                let (rows, cols) = (to.dim(v), from.dim(v));
                let base = layout.offsets[v];
                let mut b = Matrix::zero(f, rows, cols);
                for r in 0..rows {
                    for c in 0..cols {
                        b.set(r, c, column.get(base + r * cols + c, 0).clone());
                    }
                }
                b
            })
            .collect();
        Morphism { blocks }
    }
}

/// Kernel of `f: from -> to` as a subrepresentation, together with the
/// inclusion morphism.
pub fn kernel_subrep(from: &Rep, f: &Morphism) -> (Rep, Morphism) {
    let field = from.field();
    let inclusions: Vec<Matrix> = f.blocks.iter().map(|b| b.kernel_basis()).collect();
    let dims: Vec<usize> = inclusions.iter().map(|k| k.cols()).collect();
    let maps = from
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            // from(a) maps ker f_v into ker f_w; solve i_w * X = from(a) * i_v
            let rhs = from.map(ai).mul(&inclusions[a.source]);
            inclusions[a.target]
                .solve(&rhs)
                .expect("kernel is a subrepresentation")
        })
        .collect();
    let rep = Rep::new(from.quiver().clone(), field, dims, maps).expect("kernel shapes");
    (rep, Morphism { blocks: inclusions })
}

/// Cokernel of `f: from -> to` as a quotient representation, together with
/// the projection morphism.
pub fn cokernel_rep(to: &Rep, f: &Morphism) -> (Rep, Morphism) {
    let field = to.field();
    // rows of q_v span the annihilator of im f_v, so ker q_v = im f_v exactly
    let projections: Vec<Matrix> = f
        .blocks
        .iter()
        .map(|b| b.transpose().kernel_basis().transpose())
        .collect();
    let dims: Vec<usize> = projections.iter().map(|q| q.rows()).collect();
    let maps = to
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            // induced map X with X * q_v = q_w * to(a); solve transposed
            let rhs = projections[a.target].mul(to.map(ai));
            projections[a.source]
                .transpose()
                .solve(&rhs.transpose())
                .expect("cokernel maps are induced")
                .transpose()
        })
        .collect();
    let rep = Rep::new(to.quiver().clone(), field, dims, maps).expect("cokernel shapes");
    (rep, Morphism { blocks: projections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::grid::GridQuiver;
    use crate::rep::{hom_basis, hom_dim};

    fn f5() -> FieldSpec {
        FieldSpec::Prime(5)
    }

    #[test]
    fn identity_and_compose() {
        let g = GridQuiver::grid_2d(2, 2).unwrap();
        let r = Rep::thin_identity(g, f5(), &[0, 1, 2, 3]);
        let id = Morphism::identity(&r);
        id.check(&r, &r).unwrap();
        assert!(id.is_invertible());
        assert_eq!(id.compose(&id), id);
    }

    #[test]
    fn kernel_and_cokernel_dims() {
        let g = GridQuiver::equioriented(&[3]).unwrap();
        // f: I[1,3] -> I[1,1], the restriction-to-corner morphism
        let big = Rep::thin_identity(g.clone(), f5(), &[0, 1, 2]);
        let small = Rep::thin_identity(g.clone(), f5(), &[0]);
        let basis = hom_basis(&big, &small);
        assert_eq!(basis.len(), 1);
        let f = &basis[0];
        let (ker, inc) = kernel_subrep(&big, f);
        ker.validate().unwrap();
        inc.check(&ker, &big).unwrap();
        assert_eq!(ker.dim_vector(), &[0, 1, 1]);
        let (coker, proj) = cokernel_rep(&small, f);
        coker.validate().unwrap();
        proj.check(&small, &coker).unwrap();
        assert_eq!(coker.dim_total(), 0);
    }

    #[test]
    fn cokernel_of_inclusion() {
        let g = GridQuiver::equioriented(&[3]).unwrap();
        let sub = Rep::thin_identity(g.clone(), f5(), &[2]);
        let big = Rep::thin_identity(g.clone(), f5(), &[0, 1, 2]);
        let basis = hom_basis(&sub, &big);
        assert_eq!(basis.len(), 1);
        let (coker, proj) = cokernel_rep(&big, &basis[0]);
        coker.validate().unwrap();
        proj.check(&big, &coker).unwrap();
        assert_eq!(coker.dim_vector(), &[1, 1, 0]);
        // exactness at each vertex: rank f + dim coker = dim big
        for v in 0..3 {
            assert_eq!(basis[0].blocks[v].rank() + coker.dim(v), big.dim(v));
        }
    }

    #[test]
    fn flatten_round_trip() {
        let g = GridQuiver::grid_2d(2, 2).unwrap();
        let a = Rep::thin_identity(g.clone(), f5(), &[0, 1, 3]);
        let b = a.direct_sum(&a);
        let layout = HomSystem::layout(&a, &b);
        for m in hom_basis(&a, &b) {
            let back = Morphism::unflatten(&a, &b, &layout, &m.flatten(&layout));
            assert_eq!(back, m);
        }
        assert_eq!(hom_dim(&a, &b), 2);
    }
}
