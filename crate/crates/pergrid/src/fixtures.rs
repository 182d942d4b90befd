//! Small handcrafted representations used by tests, the CLI self-check, and
//! documentation examples. Both constructions are thin with a cyclic support,
//! so a single twisted scalar creates holonomy that no diagonal base change
//! can remove; they witness the gap between pre-interval and interval.

use crate::field::{FieldSpec, Scalar};
use crate::grid::{Dir, Factor, GridQuiver};
use crate::matrix::Matrix;
use crate::rep::Rep;

/// Thin representation of the equioriented 2x2x2 grid supported on the six
/// middle vertices of the cube (both extreme corners have dimension zero).
/// The support is a 6-cycle; the arrow (2,1,1) -> (2,2,1) carries `twist`,
/// every other support arrow carries 1.
///
/// twist = 1 gives an honest interval-like representation, twist = 0 kills
/// nonzero_over_support, any other twist leaves a pre-interval representation
/// that is not isomorphic to a thin-identity one.
pub fn cube_cycle(field: FieldSpec, twist: Scalar) -> Rep {
    let q = GridQuiver::equioriented(&[2, 2, 2]).unwrap();
    let support: Vec<_> = q
        .vertices()
        .filter(|&v| {
            let c = q.coords(v);
            c != [1, 1, 1] && c != [2, 2, 2]
        })
        .collect();
    let mut rep = Rep::thin_identity(q.clone(), field, &support);
    let u = q.vertex_id(&[2, 1, 1]).unwrap();
    let v = q.vertex_id(&[2, 2, 1]).unwrap();
    let a = q.arrow_between(u, v).unwrap();
    let mut m = Matrix::zero(field, 1, 1);
    m.set(0, 0, twist);
    rep.set_map(a, m);
    rep
}

/// Thin representation of the 3x3 grid with both factors oriented
/// backward-then-forward, so the middle vertex (2,2) is a source. The support
/// is the boundary 8-cycle, (2,2) has dimension zero, the arrow
/// (1,2) -> (1,3) carries `twist` and the other seven support arrows carry 1.
pub fn ring_3x3(field: FieldSpec, twist: Scalar) -> Rep {
    let factor = Factor {
        size: 3,
        orientation: vec![Dir::Backward, Dir::Forward],
    };
    let q = GridQuiver::new(vec![factor.clone(), factor]).unwrap();
    let support: Vec<_> = q.vertices().filter(|&v| q.coords(v) != [2, 2]).collect();
    let mut rep = Rep::thin_identity(q.clone(), field, &support);
    let u = q.vertex_id(&[1, 2]).unwrap();
    let v = q.vertex_id(&[1, 3]).unwrap();
    let a = q.arrow_between(u, v).unwrap();
    let mut m = Matrix::zero(field, 1, 1);
    m.set(0, 0, twist);
    rep.set_map(a, m);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid_for_any_twist() {
        for t in [0i64, 1, 2, 5] {
            let f = FieldSpec::Rational;
            cube_cycle(f, f.from_i64(t)).validate().unwrap();
            ring_3x3(f, f.from_i64(t)).validate().unwrap();
            let f = FieldSpec::Prime(2);
            cube_cycle(f, f.from_i64(t)).validate().unwrap();
        }
    }

    #[test]
    fn fixture_shapes() {
        let f = FieldSpec::Rational;
        let cube = cube_cycle(f, f.one());
        assert_eq!(cube.dim_total(), 6);
        assert_eq!(cube.support().len(), 6);
        assert_eq!(cube.support_arrows().len(), 6);
        let ring = ring_3x3(f, f.one());
        assert_eq!(ring.dim_total(), 8);
        assert_eq!(ring.support_arrows().len(), 8);
        assert!(!ring.quiver().is_equioriented());
    }
}
