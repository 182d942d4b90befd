//! Seeded test-data generators. Fully deterministic per seed.

use std::sync::Arc;

use crate::ar::{assemble_scalar, thin_sum};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::grid::{GridQuiver, VertexId};
use crate::intervals::{enumerate_intervals, interval_rep, Staircase};
use crate::matrix::Matrix;
use crate::morphism::cokernel_rep;
use crate::rep::Rep;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn random_scalar(field: FieldSpec, rng: &mut ChaCha20Rng) -> Scalar {
    match field {
        FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
        FieldSpec::Rational => field.from_i64(rng.gen_range(-4..=4)),
    }
}

fn random_nonzero_scalar(field: FieldSpec, rng: &mut ChaCha20Rng) -> Scalar {
    loop {
        let s = random_scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Random invertible matrix, by rejection.
pub fn random_invertible(field: FieldSpec, n: usize, rng: &mut ChaCha20Rng) -> Matrix {
    loop {
        let entries = (0..n * n).map(|_| random_scalar(field, rng)).collect();
        let m = Matrix::new(field, n, n, entries);
        if m.rank() == n {
            return m;
        }
    }
}

fn require_2d_equioriented(q: &Arc<GridQuiver>) -> Result<(usize, usize)> {
    match q.shape_2d() {
        Some(shape) if q.is_equioriented() => Ok(shape),
        _ => Err(Error::Unsupported(
            "random interval generators need a two-factor equioriented grid".into(),
        )),
    }
}

/// `k` staircases drawn uniformly from the full enumeration, summed as
/// interval representations and hidden behind a random base change. The
/// returned multiset (sorted) is the ground-truth decomposition.
pub fn random_interval_sum(
    q: &Arc<GridQuiver>,
    k: usize,
    field: FieldSpec,
    seed: u64,
) -> Result<(Rep, Vec<Staircase>)> {
    let (m, n) = require_2d_equioriented(q)?;
    let all: Vec<Staircase> = enumerate_intervals(m, n).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut picked: Vec<Staircase> =
        (0..k).map(|_| all[rng.gen_range(0..all.len())].clone()).collect();
    let parts: Vec<Rep> = picked
        .iter()
        .map(|st| interval_rep(q, st, field).expect("enumerated staircases fit the grid"))
        .collect();
    let sum = Rep::direct_sum_many(q, field, &parts);
    let g: Vec<Matrix> = q
        .vertices()
        .map(|v| random_invertible(field, sum.dim(v), &mut rng))
        .collect();
    let rep = sum.base_change(&g).expect("random base change is invertible");
    picked.sort();
    Ok((rep, picked))
}

/// A thin module assembled from staircases with pairwise disjoint supports
/// (found by rejection) and scaled by a random diagonal base change. The
/// returned multiset is the exact component list.
pub fn random_thin_disjoint(
    q: &Arc<GridQuiver>,
    max_parts: usize,
    field: FieldSpec,
    seed: u64,
) -> Result<(Rep, Vec<Staircase>)> {
    let (m, n) = require_2d_equioriented(q)?;
    let all: Vec<Staircase> = enumerate_intervals(m, n).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let target = rng.gen_range(1..=max_parts.max(1));
    let mut chosen: Vec<Staircase> = Vec::new();
    let mut occupied = vec![false; q.vertex_count()];
    for _ in 0..32 * target {
        if chosen.len() == target {
            break;
        }
        let cand = all[rng.gen_range(0..all.len())].clone();
        let ids = cand.support_ids(q).expect("enumerated staircases fit the grid");
        if ids.iter().any(|&v| occupied[v]) {
            continue;
        }
        for &v in &ids {
            occupied[v] = true;
        }
        chosen.push(cand);
    }
    let parts: Vec<Rep> = chosen
        .iter()
        .map(|st| interval_rep(q, st, field).expect("enumerated staircases fit the grid"))
        .collect();
    let sum = Rep::direct_sum_many(q, field, &parts);
    let g: Vec<Matrix> = q
        .vertices()
        .map(|v| {
            let mut d = Matrix::identity(field, sum.dim(v));
            for i in 0..sum.dim(v) {
                d.set(i, i, random_nonzero_scalar(field, &mut rng));
            }
            d
        })
        .collect();
    let rep = sum.base_change(&g).expect("diagonal base change is invertible");
    chosen.sort();
    Ok((rep, chosen))
}

/// Cokernel of an explicit scalar-matrix morphism between sums of
/// projectives: `lambda[i][j]` scales the canonical map from the j-th source
/// summand P(sources[j]) to the i-th target summand P(targets[i]).
pub(crate) fn projective_sum_cokernel(
    q: &Arc<GridQuiver>,
    field: FieldSpec,
    sources: &[VertexId],
    targets: &[VertexId],
    lambda: &Matrix,
) -> Rep {
    let pa = thin_sum(q, field, sources, true);
    let pb = thin_sum(q, field, targets, true);
    let f = assemble_scalar(&pa, &pb, lambda);
    cokernel_rep(&pb.rep, &f).0
}

/// Valid but usually non-thin module: the vertexwise cokernel of a random
/// map between random sums of projectives. Per-vertex dimensions stay at or
/// below `size_bound`.
pub fn random_cokernel(
    q: &Arc<GridQuiver>,
    field: FieldSpec,
    seed: u64,
    size_bound: usize,
) -> Rep {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let nv = q.vertex_count();
    let bound = size_bound.max(1);
    let nb = rng.gen_range(1..=bound);
    let na = rng.gen_range(0..=bound);
    let targets: Vec<VertexId> = (0..nb).map(|_| rng.gen_range(0..nv)).collect();
    let sources: Vec<VertexId> = (0..na).map(|_| rng.gen_range(0..nv)).collect();
    let mut lambda = Matrix::zero(field, nb, na);
    for (i, &b) in targets.iter().enumerate() {
        for (j, &a) in sources.iter().enumerate() {
            // maps P(a) -> P(b) exist only when b is below a
            if q.reachable(b, a) {
                lambda.set(i, j, random_scalar(field, &mut rng));
            }
        }
    }
    projective_sum_cokernel(q, field, &sources, &targets, &lambda)
}
