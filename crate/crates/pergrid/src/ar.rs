//! Almost split sequences for grid representations. The translate of a
//! module is computed from a minimal injective copresentation: the structure
//! maps between sums of indecomposable injectives are scalar combinations of
//! restriction maps, so the copresentation is carried to a map between the
//! matching projective sums and the translate appears as its cokernel. The
//! middle term of the almost split sequence starting at an indecomposable
//! non-injective module is built as a pushout of a socle class of the
//! extension space.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bruteforce::{self, linear_power_root, min_poly};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::grid::{Factor, GridQuiver, VertexId};
use crate::intervals::{interval_rep, Staircase};
use crate::matrix::Matrix;
use crate::morphism::{cokernel_rep, kernel_subrep, Morphism};
use crate::rep::{hom_basis, hom_dim, HomSystem, Rep};

/// Indecomposable projective at `v`: one-dimensional exactly on the vertices
/// reachable from `v`, with identity structure maps.
pub fn projective(q: &Arc<GridQuiver>, field: FieldSpec, v: VertexId) -> Rep {
    Rep::thin_identity(q.clone(), field, &q.upper_set(v))
}

/// Indecomposable injective at `v`: one-dimensional exactly on the vertices
/// that reach `v`.
pub fn injective(q: &Arc<GridQuiver>, field: FieldSpec, v: VertexId) -> Rep {
    Rep::thin_identity(q.clone(), field, &q.lower_set(v))
}

/// Largest semisimple subrepresentation: at each vertex, the joint kernel of
/// the outgoing maps. Returned with zero structure maps plus the inclusion.
pub fn socle(m: &Rep) -> (Rep, Morphism) {
    let q = m.quiver().clone();
    let f = m.field();
    let mut blocks = Vec::new();
    for v in q.vertices() {
        let outs = q.arrows_out(v);
        let k = if outs.is_empty() {
            Matrix::identity(f, m.dim(v))
        } else {
            let stacked: Vec<&Matrix> = outs.iter().map(|&a| m.map(a)).collect();
            Matrix::vstack(&stacked).kernel_basis()
        };
        blocks.push(k);
    }
    let dims: Vec<usize> = blocks.iter().map(|b| b.cols()).collect();
    let maps = q
        .arrows()
        .iter()
        .map(|a| Matrix::zero(f, dims[a.target], dims[a.source]))
        .collect();
    let rep = Rep::new(q, f, dims, maps).expect("socle shapes");
    (rep, Morphism { blocks })
}

/// A direct sum of thin up-set or down-set representations, remembering the
/// defining vertex and the support of every summand.
pub(crate) struct ThinSum {
    pub(crate) rep: Rep,
    pub(crate) vertices: Vec<VertexId>,
    pub(crate) supports: Vec<Vec<bool>>,
}

pub(crate) fn thin_sum(
    q: &Arc<GridQuiver>,
    field: FieldSpec,
    vertices: &[VertexId],
    upper: bool,
) -> ThinSum {
    let parts: Vec<Rep> = vertices
        .iter()
        .map(|&v| {
            let sup = if upper { q.upper_set(v) } else { q.lower_set(v) };
            Rep::thin_identity(q.clone(), field, &sup)
        })
        .collect();
    let rep = Rep::direct_sum_many(q, field, &parts);
    let supports = parts
        .iter()
        .map(|p| q.vertices().map(|u| p.dim(u) == 1).collect())
        .collect();
    ThinSum { rep, vertices: vertices.to_vec(), supports }
}

impl ThinSum {
    /// Position of summand `idx` among the summands supported at `u`.
    fn offset(&self, idx: usize, u: VertexId) -> Option<usize> {
        if !self.supports[idx][u] {
            return None;
        }
        Some((0..idx).filter(|&i| self.supports[i][u]).count())
    }

    fn len(&self) -> usize {
        self.vertices.len()
    }
}

/// The morphism between thin sums whose block from summand i to summand j is
/// `lambda[j][i]` times the restriction map (identity wherever both summands
/// live).
pub(crate) fn assemble_scalar(from: &ThinSum, to: &ThinSum, lambda: &Matrix) -> Morphism {
    let q = from.rep.quiver().clone();
    let f = from.rep.field();
    let blocks = q
        .vertices()
        .map(|u| {
            let rows: Vec<usize> = (0..to.len()).filter(|&j| to.supports[j][u]).collect();
            let cols: Vec<usize> = (0..from.len()).filter(|&i| from.supports[i][u]).collect();
            let mut b = Matrix::zero(f, rows.len(), cols.len());
            for (r, &j) in rows.iter().enumerate() {
                for (c, &i) in cols.iter().enumerate() {
                    b.set(r, c, lambda.get(j, i).clone());
                }
            }
            b
        })
        .collect();
    Morphism { blocks }
}

enum EvalAt {
    /// Read the scalar at the defining vertex of the source summand (maps out
    /// of a projective are determined at its generator).
    FromVertex,
    /// Read at the defining vertex of the target summand (maps into an
    /// injective are determined at its cogenerator).
    ToVertex,
}

fn extract_lambda(d: &Morphism, from: &ThinSum, to: &ThinSum, at: EvalAt) -> Matrix {
    let f = from.rep.field();
    let mut lam = Matrix::zero(f, to.len(), from.len());
    for j in 0..to.len() {
        for i in 0..from.len() {
            let u = match at {
                EvalAt::FromVertex => from.vertices[i],
                EvalAt::ToVertex => to.vertices[j],
            };
            let (Some(r), Some(c)) = (to.offset(j, u), from.offset(i, u)) else {
                continue;
            };
            lam.set(j, i, d.blocks[u].get(r, c).clone());
        }
    }
    lam
}

/// Injective envelope: I(v) with multiplicity dim soc_v, together with an
/// embedding extending coefficient functionals on the socle.
fn envelope(m: &Rep) -> (ThinSum, Morphism) {
    let q = m.quiver().clone();
    let f = m.field();
    let (soc, incl) = socle(m);
    let mut verts = Vec::new();
    let mut copy_idx = Vec::new();
    for v in q.vertices() {
        for k in 0..soc.dim(v) {
            verts.push(v);
            copy_idx.push(k);
        }
    }
    let i0 = thin_sum(&q, f, &verts, false);
    // left inverses of the socle inclusions: Phi_v * K_v = id
    let mut funcs: HashMap<VertexId, Matrix> = HashMap::new();
    for v in q.vertices() {
        let s = soc.dim(v);
        if s == 0 {
            continue;
        }
        let x = incl.blocks[v]
            .transpose()
            .solve(&Matrix::identity(f, s))
            .expect("socle basis has a left inverse");
        funcs.insert(v, x.transpose());
    }
    let mut transports: HashMap<VertexId, HashMap<VertexId, Matrix>> = HashMap::new();
    for &v in &verts {
        transports.entry(v).or_insert_with(|| m.transport_to(v));
    }
    let blocks: Vec<Matrix> = q
        .vertices()
        .map(|u| {
            let mut rows = Vec::new();
            for (i, &v) in verts.iter().enumerate() {
                if !i0.supports[i][u] {
                    continue;
                }
                let k = copy_idx[i];
                let phi = funcs[&v].submatrix(k..k + 1, 0..m.dim(v));
                rows.push(phi.mul(&transports[&v][&u]));
            }
            if rows.is_empty() {
                Matrix::zero(f, 0, m.dim(u))
            } else {
                Matrix::vstack(&rows.iter().collect::<Vec<_>>())
            }
        })
        .collect();
    let emb = Morphism { blocks };
    debug_assert!(emb.check(m, &i0.rep).is_ok());
    let (ker, _) = kernel_subrep(m, &emb);
    assert_eq!(ker.dim_total(), 0, "envelope embedding must be injective");
    (i0, emb)
}

/// Public face of the envelope: the injective hull and the embedding.
pub fn injective_envelope(m: &Rep) -> Result<(Rep, Morphism)> {
    m.validate()?;
    let (i0, emb) = envelope(m);
    Ok((i0.rep, emb))
}

/// A morphism out of a sum of projectives, determined by the image of each
/// summand's generator. `gens[i]` is a column in the target space at the
/// summand's defining vertex.
fn from_projective_sum(p: &ThinSum, target: &Rep, gens: &[Matrix]) -> Morphism {
    let q = target.quiver().clone();
    let f = target.field();
    let mut transports: HashMap<VertexId, HashMap<VertexId, Matrix>> = HashMap::new();
    for &v in &p.vertices {
        transports.entry(v).or_insert_with(|| target.transport_from(v));
    }
    let blocks: Vec<Matrix> = q
        .vertices()
        .map(|u| {
            let cols: Vec<Matrix> = p
                .vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| p.supports[*i][u])
                .map(|(i, &v)| transports[&v][&u].mul(&gens[i]))
                .collect();
            if cols.is_empty() {
                Matrix::zero(f, target.dim(u), 0)
            } else {
                Matrix::hstack(&cols.iter().collect::<Vec<_>>())
            }
        })
        .collect();
    Morphism { blocks }
}

/// Projective cover: P(u) with multiplicity dim top_u, mapping generators to
/// a basis complementing the radical (the sum of incoming images).
fn projective_cover(n: &Rep) -> (ThinSum, Morphism) {
    let q = n.quiver().clone();
    let f = n.field();
    let mut verts = Vec::new();
    let mut gens = Vec::new();
    for u in q.vertices() {
        if n.dim(u) == 0 {
            continue;
        }
        let ins: Vec<&Matrix> = q.arrows_in(u).iter().map(|&a| n.map(a)).collect();
        let rad = if ins.is_empty() {
            Matrix::zero(f, n.dim(u), 0)
        } else {
            Matrix::hstack(&ins)
        };
        for k in rad.complement_standard_columns() {
            let mut e = Matrix::zero(f, n.dim(u), 1);
            e.set(k, 0, f.one());
            verts.push(u);
            gens.push(e);
        }
    }
    let p0 = thin_sum(&q, f, &verts, true);
    let pi = from_projective_sum(&p0, n, &gens);
    for u in q.vertices() {
        assert_eq!(pi.blocks[u].rank(), n.dim(u), "projective cover must be onto");
    }
    debug_assert!(pi.check(&p0.rep, n).is_ok());
    (p0, pi)
}

/// The translate in the direction of sources: zero exactly on injectives,
/// additive, computed as the cokernel of the copresentation map carried from
/// injective to projective sums.
pub fn tau_inverse(l: &Rep) -> Result<Rep> {
    l.validate()?;
    Ok(tau_inverse_unchecked(l))
}

fn tau_inverse_unchecked(l: &Rep) -> Rep {
    let q = l.quiver().clone();
    let f = l.field();
    if l.dim_total() == 0 {
        return Rep::zero(q, f);
    }
    let (i0, eta) = envelope(l);
    let (c, proj) = cokernel_rep(&i0.rep, &eta);
    if c.dim_total() == 0 {
        return Rep::zero(q, f);
    }
    let (i1, eta1) = envelope(&c);
    let d = eta1.compose(&proj);
    let lambda = extract_lambda(&d, &i0, &i1, EvalAt::ToVertex);
    assert_eq!(
        assemble_scalar(&i0, &i1, &lambda),
        d,
        "copresentation map must be a scalar combination of restriction maps"
    );
    let p_from = thin_sum(&q, f, &i0.vertices, true);
    let p_to = thin_sum(&q, f, &i1.vertices, true);
    let nd = assemble_scalar(&p_from, &p_to, &lambda);
    debug_assert!(nd.check(&p_from.rep, &p_to.rep).is_ok());
    cokernel_rep(&p_to.rep, &nd).0
}

/// The translate in the direction of sinks: zero exactly on projectives.
/// Computed dually, from a minimal projective presentation carried to
/// injective sums, as a kernel.
pub fn tau(n: &Rep) -> Result<Rep> {
    n.validate()?;
    let q = n.quiver().clone();
    let f = n.field();
    if n.dim_total() == 0 {
        return Ok(Rep::zero(q, f));
    }
    let (p0, pi) = projective_cover(n);
    let (omega, iota) = kernel_subrep(&p0.rep, &pi);
    if omega.dim_total() == 0 {
        return Ok(Rep::zero(q, f));
    }
    let (p1, pi1) = projective_cover(&omega);
    let d = iota.compose(&pi1);
    let lambda = extract_lambda(&d, &p1, &p0, EvalAt::FromVertex);
    assert_eq!(
        assemble_scalar(&p1, &p0, &lambda),
        d,
        "presentation map must be a scalar combination of the canonical maps"
    );
    let i_from = thin_sum(&q, f, &p1.vertices, false);
    let i_to = thin_sum(&q, f, &p0.vertices, false);
    let nd = assemble_scalar(&i_from, &i_to, &lambda);
    debug_assert!(nd.check(&i_from.rep, &i_to.rep).is_ok());
    Ok(kernel_subrep(&i_from.rep, &nd).0)
}

/// The source map of an indecomposable module `l`: the minimal left almost
/// split morphism `l -> middle`, together with the translate. Every morphism
/// out of `l` that is not a split embedding factors through `map`.
#[derive(Debug, Clone)]
pub struct SourceMapData {
    pub source: Rep,
    pub middle: Rep,
    /// Zero representation when `source` is injective.
    pub tau_inv: Rep,
    pub map: Morphism,
}

fn certify_indecomposable(l: &Rep) -> Result<()> {
    if hom_dim(l, l) == 1 {
        return Ok(());
    }
    match l.field() {
        FieldSpec::Prime(_) => {
            let dec = bruteforce::decompose(l, 0x5eed)?;
            if dec.summand_count() != 1 {
                return Err(Error::Validation(format!(
                    "source maps are defined for indecomposable modules; this one has {} summands",
                    dec.summand_count()
                )));
            }
            Ok(())
        }
        FieldSpec::Rational => Err(Error::Unsupported(
            "cannot certify indecomposability over the rationals when the endomorphism ring \
             is larger than the scalars"
                .into(),
        )),
    }
}

pub fn source_map_target(l: &Rep) -> Result<SourceMapData> {
    l.validate()?;
    if l.dim_total() == 0 {
        return Err(Error::Validation("the zero module has no source map".into()));
    }
    certify_indecomposable(l)?;
    let q = l.quiver().clone();
    let f = l.field();
    let n = tau_inverse_unchecked(l);
    if n.dim_total() == 0 {
        // injective: quotient by the socle is minimal left almost split
        let (_, incl) = socle(l);
        let (e, quot) = cokernel_rep(l, &incl);
        return Ok(SourceMapData {
            source: l.clone(),
            middle: e,
            tau_inv: Rep::zero(q, f),
            map: quot,
        });
    }
    // extension classes of n by l, as morphisms from the syzygy of n
    let (p0, pi) = projective_cover(&n);
    let (omega, iota) = kernel_subrep(&p0.rep, &pi);
    let ext_basis = hom_basis(&omega, l);
    if ext_basis.is_empty() {
        return Err(Error::Inconsistency(
            "a non-injective indecomposable must admit extensions by its translate".into(),
        ));
    }
    let layout = HomSystem::layout(&omega, l);
    let restricted: Vec<Morphism> =
        hom_basis(&p0.rep, l).iter().map(|psi| psi.compose(&iota)).collect();
    let rmat = if restricted.is_empty() {
        Matrix::zero(f, layout.total, 0)
    } else {
        let flats: Vec<Matrix> = restricted.iter().map(|r| r.flatten(&layout)).collect();
        Matrix::hstack(&flats.iter().collect::<Vec<_>>())
    };
    let rrank = rmat.rank();
    let ext_dim = ext_basis.len() - rrank;
    if ext_dim == 0 {
        return Err(Error::Inconsistency(
            "every extension class vanished; the module cannot be non-injective".into(),
        ));
    }
    let phi = if ext_dim == 1 {
        // any class outside the image represents the almost split sequence
        ext_basis
            .iter()
            .find(|cand| {
                let aug = Matrix::hstack(&[&rmat, &cand.flatten(&layout)]);
                aug.rank() > rrank
            })
            .expect("some basis class survives the quotient")
            .clone()
    } else {
        socle_class(l, &n, &p0, &pi, &iota, &ext_basis, &rmat, &layout)?
    };
    // pushout of phi along the syzygy inclusion
    let sum = l.direct_sum(&p0.rep);
    let neg = f.neg(&f.one());
    let glue = Morphism {
        blocks: q
            .vertices()
            .map(|w| Matrix::vstack(&[&phi.blocks[w], &iota.blocks[w].scale(&neg)]))
            .collect(),
    };
    let (e, quot) = cokernel_rep(&sum, &glue);
    let incl_l = Morphism {
        blocks: q
            .vertices()
            .map(|w| {
                let id = Matrix::identity(f, l.dim(w));
                let z = Matrix::zero(f, p0.rep.dim(w), l.dim(w));
                Matrix::vstack(&[&id, &z])
            })
            .collect(),
    };
    let map = quot.compose(&incl_l);
    assert_eq!(
        e.dim_total(),
        l.dim_total() + n.dim_total(),
        "middle term dimension must split as end plus translate"
    );
    let (ker, _) = kernel_subrep(l, &map);
    if ker.dim_total() != 0 {
        return Err(Error::Inconsistency("source map failed to embed its module".into()));
    }
    debug_assert!(map.check(l, &e).is_ok());
    if hom_dim(&n, &e) >= hom_dim(&n, l) + hom_dim(&n, &n) {
        return Err(Error::Inconsistency(
            "chosen extension class produced a split sequence".into(),
        ));
    }
    Ok(SourceMapData { source: l.clone(), middle: e, tau_inv: n, map })
}

/// A nonzero extension class killed by the radical of End(tau_inv). Lifts
/// each endomorphism through the projective cover, restricts it to the
/// syzygy, and intersects the kernels of the induced quotient actions after
/// removing their scalar parts.
#[allow(clippy::too_many_arguments)]
fn socle_class(
    l: &Rep,
    n: &Rep,
    p0: &ThinSum,
    pi: &Morphism,
    iota: &Morphism,
    ext_basis: &[Morphism],
    rmat: &Matrix,
    layout: &HomSystem,
) -> Result<Morphism> {
    let f = l.field();
    let flats: Vec<Matrix> = ext_basis.iter().map(|b| b.flatten(layout)).collect();
    let b = Matrix::hstack(&flats.iter().collect::<Vec<_>>());
    // coordinates of the restricted classes inside the extension basis
    let rcoords = b.solve(rmat).expect("restricted classes lie in the hom space");
    // quotient coordinates via the annihilator of the restricted span
    let ann = rcoords.transpose().kernel_basis();
    if ann.cols() == 0 {
        return Err(Error::Inconsistency("extension space collapsed".into()));
    }
    let mut killers = Vec::new();
    for u in hom_basis(n, n) {
        let uhat = lift_endo(&u, p0, pi);
        let ucheck = restrict_to_kernel(&uhat, iota);
        // action on classes: compose with the restricted endomorphism
        let mut acted = Vec::new();
        for e in ext_basis {
            acted.push(e.compose(&ucheck).flatten(layout));
        }
        let a = b
            .solve(&Matrix::hstack(&acted.iter().collect::<Vec<_>>()))
            .expect("action stays inside the hom space");
        // induced matrix on the quotient: abar * ann^T = ann^T * a
        let y = ann
            .solve(&a.transpose().mul(&ann))
            .expect("action preserves the restricted span");
        let abar = y.transpose();
        let mu = min_poly(&abar);
        let Some(lam) = linear_power_root(&mu) else {
            return Err(Error::Unsupported(
                "an endomorphism acts on the extension space with an irreducible factor of \
                 degree above one; socle extraction needs a larger field"
                    .into(),
            ));
        };
        let mut shift = abar.clone();
        for i in 0..shift.rows() {
            let v = f.sub(shift.get(i, i), &lam);
            shift.set(i, i, v);
        }
        killers.push(shift);
    }
    let soc = if killers.is_empty() {
        Matrix::identity(f, ann.cols())
    } else {
        Matrix::vstack(&killers.iter().collect::<Vec<_>>()).kernel_basis()
    };
    if soc.cols() == 0 {
        return Err(Error::Inconsistency("extension socle vanished".into()));
    }
    // lift the first socle vector back to a morphism out of the syzygy
    let x = ann
        .transpose()
        .solve(&soc.column(0))
        .expect("quotient coordinates lift");
    let mut phi = Morphism {
        blocks: ext_basis[0]
            .blocks
            .iter()
            .map(|bl| Matrix::zero(f, bl.rows(), bl.cols()))
            .collect(),
    };
    for (j, e) in ext_basis.iter().enumerate() {
        let c = x.get(j, 0);
        if !c.is_zero() {
            phi = phi.add(&e.scale(c));
        }
    }
    Ok(phi)
}

/// Lift of an endomorphism of the covered module through its projective
/// cover: sends each generator to a preimage of its image.
fn lift_endo(u: &Morphism, p0: &ThinSum, pi: &Morphism) -> Morphism {
    let mut gens = Vec::new();
    for (i, &v) in p0.vertices.iter().enumerate() {
        let off = p0.offset(i, v).expect("summand lives at its defining vertex");
        let target = u.blocks[v].mul(&pi.blocks[v].column(off));
        let y = pi.blocks[v].solve(&target).expect("projective cover is onto");
        gens.push(y);
    }
    from_projective_sum(p0, &p0.rep, &gens)
}

/// Restriction of an endomorphism of the covering projective to the kernel
/// of the cover, in kernel coordinates.
fn restrict_to_kernel(uhat: &Morphism, iota: &Morphism) -> Morphism {
    let blocks = iota
        .blocks
        .iter()
        .zip(&uhat.blocks)
        .map(|(inc, big)| inc.solve(&big.mul(inc)).expect("kernel is invariant"))
        .collect();
    Morphism { blocks }
}

/// Number of summands isomorphic to `data.source` in any decomposition of
/// `m`, by the hom-dimension identity of the source map.
pub fn multiplicity_from(data: &SourceMapData, m: &Rep) -> Result<usize> {
    m.validate()?;
    if data.source.quiver() != m.quiver() || data.source.field() != m.field() {
        return Err(Error::Validation(
            "multiplicity needs matching grid and field".into(),
        ));
    }
    let a = hom_dim(&data.source, m) as i64;
    let b = hom_dim(&data.middle, m) as i64;
    let c = if data.tau_inv.dim_total() > 0 { hom_dim(&data.tau_inv, m) as i64 } else { 0 };
    let s = a - b + c;
    if s < 0 {
        return Err(Error::Inconsistency(format!(
            "multiplicity came out negative ({s}); hom dimensions {a}, {b}, {c}"
        )));
    }
    Ok(s as usize)
}

/// Multiplicity of the indecomposable `l` among the summands of `m`.
pub fn multiplicity(l: &Rep, m: &Rep) -> Result<usize> {
    let data = source_map_target(l)?;
    multiplicity_from(&data, m)
}

/// Memo for source maps of interval modules, keyed by grid shape, field and
/// staircase.
#[derive(Default)]
pub struct SourceCache {
    map: HashMap<(Vec<Factor>, FieldSpec, Staircase), SourceMapData>,
}

impl SourceCache {
    pub fn new() -> SourceCache {
        SourceCache { map: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn source_data(
        &mut self,
        q: &Arc<GridQuiver>,
        field: FieldSpec,
        st: &Staircase,
    ) -> Result<&SourceMapData> {
        let key = (q.factors().to_vec(), field, st.clone());
        if !self.map.contains_key(&key) {
            let rep = interval_rep(q, st, field)?;
            let data = source_map_target(&rep)?;
            self.map.insert(key.clone(), data);
        }
        Ok(&self.map[&key])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruteforce::is_isomorphic;
    use crate::intervals::enumerate_intervals;

    fn f5() -> FieldSpec {
        FieldSpec::Prime(5)
    }

    fn interval(q: &Arc<GridQuiver>, s: usize, slices: &[(usize, usize)], f: FieldSpec) -> Rep {
        let st = Staircase::new(s, slices.to_vec()).unwrap();
        interval_rep(q, &st, f).unwrap()
    }

    #[test]
    fn projective_and_injective_supports() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let bottom = q.vertex_id(&[1, 1]).unwrap();
        let top = q.vertex_id(&[2, 2]).unwrap();
        assert_eq!(projective(&q, f5(), bottom).dim_total(), 4);
        assert_eq!(projective(&q, f5(), top).dim_total(), 1);
        assert_eq!(injective(&q, f5(), top).dim_total(), 4);
        assert_eq!(injective(&q, f5(), bottom).dim_total(), 1);
        let a3 = GridQuiver::grid_2d(1, 3).unwrap();
        let mid = a3.vertex_id(&[1, 2]).unwrap();
        assert_eq!(injective(&a3, f5(), mid).support(), vec![0, 1]);
        assert_eq!(projective(&a3, f5(), mid).support(), vec![1, 2]);
    }

    #[test]
    fn socle_examples() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let full = interval(&q, 1, &[(1, 2), (1, 2)], f5());
        let (soc, incl) = socle(&full);
        assert_eq!(soc.dim_vector(), &[0, 0, 0, 1]);
        assert!(incl.check(&soc, &full).is_ok());
        // two horizontal strips: both right ends are socle
        let rows = full.clone();
        let mut rows_dominoes = rows;
        for (ai, a) in q.arrows().iter().enumerate() {
            if a.axis == 0 {
                rows_dominoes.set_map(ai, Matrix::zero(f5(), 1, 1));
            }
        }
        let (soc2, _) = socle(&rows_dominoes);
        assert_eq!(soc2.dim_vector(), &[0, 1, 0, 1]);
        // simple at the sink is its own socle
        let s = interval(&q, 2, &[(2, 2)], f5());
        let (soc3, _) = socle(&s);
        assert_eq!(soc3.dim_vector(), s.dim_vector());
    }

    #[test]
    fn envelope_of_injective_is_iso() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        for v in q.vertices() {
            let i = injective(&q, f5(), v);
            let (hull, emb) = injective_envelope(&i).unwrap();
            assert_eq!(hull.dim_vector(), i.dim_vector());
            assert!(emb.is_invertible());
        }
    }

    #[test]
    fn envelope_embeds_with_zero_kernel() {
        let q = GridQuiver::grid_2d(2, 3).unwrap();
        let f = f5();
        for st in enumerate_intervals(2, 3) {
            let rep = interval_rep(&q, &st, f).unwrap();
            let (hull, emb) = injective_envelope(&rep).unwrap();
            assert!(emb.check(&rep, &hull).is_ok());
            let (ker, _) = kernel_subrep(&rep, &emb);
            assert_eq!(ker.dim_total(), 0);
        }
    }

    #[test]
    fn tau_inverse_shifts_line_intervals() {
        // on a line, the translate slides an interval one step toward the start
        let q = GridQuiver::grid_2d(1, 6).unwrap();
        for b in 2..=6usize {
            for d in b..=6 {
                let l = interval(&q, 1, &[(b, d)], f5());
                let t = tau_inverse(&l).unwrap();
                let expected = interval(&q, 1, &[(b - 1, d - 1)], f5());
                assert_eq!(t.dim_vector(), expected.dim_vector(), "[{b},{d}]");
                assert!(is_isomorphic(&t, &expected).unwrap(), "[{b},{d}]");
            }
        }
    }

    #[test]
    fn tau_inverse_kills_injectives_only() {
        for (m, n) in [(1, 1), (2, 2), (2, 3), (3, 3)] {
            let q = GridQuiver::grid_2d(m, n).unwrap();
            for st in enumerate_intervals(m, n) {
                let l = interval_rep(&q, &st, f5()).unwrap();
                let t = tau_inverse(&l).unwrap();
                // injective intervals are exactly the lower sets: every slice
                // reaches column 1 and row widths shrink going up from a full
                // bottom... equivalently the support equals the lower set of
                // its maximal corners; test via the envelope instead
                let (hull, emb) = injective_envelope(&l).unwrap();
                let is_inj = hull.dim_vector() == l.dim_vector() && emb.is_invertible();
                assert_eq!(t.dim_total() == 0, is_inj, "{st} on {m}x{n}");
            }
        }
    }

    #[test]
    fn tau_round_trip_on_non_injectives() {
        let q = GridQuiver::grid_2d(2, 3).unwrap();
        for st in enumerate_intervals(2, 3) {
            let l = interval_rep(&q, &st, f5()).unwrap();
            let t = tau_inverse(&l).unwrap();
            if t.dim_total() == 0 {
                continue;
            }
            let back = tau(&t).unwrap();
            assert!(is_isomorphic(&back, &l).unwrap(), "{st}");
        }
    }

    #[test]
    fn tau_kills_projectives() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        for v in q.vertices() {
            let p = projective(&q, f5(), v);
            assert_eq!(tau(&p).unwrap().dim_total(), 0);
        }
    }

    #[test]
    fn source_map_on_line_intervals() {
        let a3 = GridQuiver::grid_2d(1, 3).unwrap();
        // injective [1,2]: middle term is the socle quotient [1,1]
        let l12 = interval(&a3, 1, &[(1, 2)], f5());
        let d = source_map_target(&l12).unwrap();
        assert_eq!(d.tau_inv.dim_total(), 0);
        assert_eq!(d.middle.dim_vector(), &[1, 0, 0]);
        // [2,2]: almost split sequence [2,2] -> [1,2] -> [1,1]
        let l22 = interval(&a3, 1, &[(2, 2)], f5());
        let d = source_map_target(&l22).unwrap();
        assert_eq!(d.middle.dim_vector(), &[1, 1, 0]);
        assert!(is_isomorphic(&d.tau_inv, &interval(&a3, 1, &[(1, 1)], f5())).unwrap());
        // [2,3]: middle has dimension vector (1,2,1)
        let l23 = interval(&a3, 1, &[(2, 3)], f5());
        let d = source_map_target(&l23).unwrap();
        assert_eq!(d.middle.dim_vector(), &[1, 2, 1]);
        assert!(is_isomorphic(&d.tau_inv, &interval(&a3, 1, &[(1, 2)], f5())).unwrap());
    }

    #[test]
    fn source_map_dimension_accounting() {
        let q = GridQuiver::grid_2d(2, 3).unwrap();
        for st in enumerate_intervals(2, 3) {
            let l = interval_rep(&q, &st, f5()).unwrap();
            let d = source_map_target(&l).unwrap();
            if d.tau_inv.dim_total() > 0 {
                assert_eq!(
                    d.middle.dim_total(),
                    l.dim_total() + d.tau_inv.dim_total(),
                    "{st}"
                );
                // non-split: the identity of the translate does not lift
                assert!(
                    hom_dim(&d.tau_inv, &d.middle)
                        < hom_dim(&d.tau_inv, &l) + hom_dim(&d.tau_inv, &d.tau_inv),
                    "{st}"
                );
            } else {
                // injective: the middle term is the socle quotient
                let (soc, _) = socle(&l);
                assert_eq!(d.middle.dim_total(), l.dim_total() - soc.dim_total(), "{st}");
            }
        }
    }

    #[test]
    fn source_map_rejects_decomposables_and_zero() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let i = interval(&q, 1, &[(1, 2)], f5());
        let sum = i.direct_sum(&i);
        assert!(matches!(source_map_target(&sum), Err(Error::Validation(_))));
        let zero = Rep::zero(q, f5());
        assert!(matches!(source_map_target(&zero), Err(Error::Validation(_))));
    }

    #[test]
    fn multiplicity_counts_summands() {
        let q = GridQuiver::grid_2d(2, 3).unwrap();
        let i = interval(&q, 1, &[(1, 2)], f5());
        let j = interval(&q, 2, &[(2, 3)], f5());
        let m = i.direct_sum(&j);
        assert_eq!(multiplicity(&i, &m).unwrap(), 1);
        assert_eq!(multiplicity(&j, &m).unwrap(), 1);
        let triple = i.direct_sum(&i).direct_sum(&i);
        assert_eq!(multiplicity(&i, &triple).unwrap(), 3);
        assert_eq!(multiplicity(&j, &triple).unwrap(), 0);
    }

    #[test]
    fn multiplicity_is_additive() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let f = f5();
        let ints: Vec<Rep> =
            enumerate_intervals(2, 2).map(|st| interval_rep(&q, &st, f).unwrap()).collect();
        let m = ints[0].direct_sum(&ints[3]).direct_sum(&ints[7]);
        let mm = m.direct_sum(&m);
        for l in &ints {
            let data = source_map_target(l).unwrap();
            let one = multiplicity_from(&data, &m).unwrap();
            let two = multiplicity_from(&data, &mm).unwrap();
            assert_eq!(two, 2 * one);
        }
    }

    #[test]
    fn multiplicity_agrees_with_decompose() {
        let q = GridQuiver::grid_2d(2, 3).unwrap();
        let f = f5();
        let all: Vec<Staircase> = enumerate_intervals(2, 3).collect();
        let m = interval_rep(&q, &all[0], f)
            .unwrap()
            .direct_sum(&interval_rep(&q, &all[5], f).unwrap())
            .direct_sum(&interval_rep(&q, &all[5], f).unwrap())
            .direct_sum(&interval_rep(&q, &all[11], f).unwrap());
        let dec = bruteforce::decompose(&m, 23).unwrap();
        for st in &all {
            let l = interval_rep(&q, st, f).unwrap();
            let want: usize = dec
                .summands
                .iter()
                .filter(|(r, _)| is_isomorphic(r, &l).unwrap())
                .map(|(_, k)| *k)
                .sum();
            assert_eq!(multiplicity(&l, &m).unwrap(), want, "{st}");
        }
    }

    #[test]
    fn rational_field_paths() {
        let fq = FieldSpec::Rational;
        let a3 = GridQuiver::grid_2d(1, 3).unwrap();
        let l = interval(&a3, 1, &[(2, 2)], fq);
        let d = source_map_target(&l).unwrap();
        assert_eq!(d.middle.dim_vector(), &[1, 1, 0]);
        assert_eq!(d.tau_inv.dim_vector(), &[1, 0, 0]);
        let sum = l.direct_sum(&l);
        assert!(matches!(source_map_target(&sum), Err(Error::Unsupported(_))));
    }

    #[test]
    fn cache_reuses_source_data() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let mut cache = SourceCache::new();
        let st = Staircase::new(1, vec![(1, 2)]).unwrap();
        let m = interval_rep(&q, &st, f5()).unwrap();
        let first = cache.source_data(&q, f5(), &st).unwrap().middle.dim_vector().to_vec();
        assert_eq!(cache.len(), 1);
        let count = {
            let again = cache.source_data(&q, f5(), &st).unwrap();
            assert_eq!(again.middle.dim_vector(), first.as_slice());
            multiplicity_from(again, &m).unwrap()
        };
        assert_eq!(cache.len(), 1);
        assert_eq!(count, 1);
    }
}
