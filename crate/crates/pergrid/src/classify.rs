//! Classification against the hierarchy thin / pre-interval / interval,
//! constructive rebasing of pre-interval representations onto thin-identity
//! form, separating lines through zero arrows, and splitting thin
//! representations over equioriented 2D grids into interval summands.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::grid::{ArrowId, GridQuiver, VertexId};
use crate::intervals::{staircase_from_support, Staircase};
use crate::rep::Rep;
use std::collections::VecDeque;
use std::fmt;

/// Structural flags of a representation. The derived labels implement
/// is_interval => is_pre_interval => is_thin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassificationReport {
    /// Every vertex carries dimension at most one.
    pub thin: bool,
    /// The support is connected as an undirected full subquiver.
    /// An empty support counts as disconnected.
    pub support_connected: bool,
    /// No vertex outside the support lies on a directed path between two
    /// support vertices.
    pub support_convex: bool,
    /// Every arrow with both endpoints in the support carries a nonzero map.
    pub nonzero_over_support: bool,
    /// Every arrow with both endpoints in the support carries an identity map.
    pub identity_over_support: bool,
}

impl ClassificationReport {
    pub fn is_thin(&self) -> bool {
        self.thin
    }

    pub fn is_pre_interval(&self) -> bool {
        self.thin && self.support_connected && self.support_convex && self.nonzero_over_support
    }

    pub fn is_interval(&self) -> bool {
        self.thin && self.support_connected && self.support_convex && self.identity_over_support
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "thin: {}", self.thin)?;
        writeln!(f, "support_connected: {}", self.support_connected)?;
        writeln!(f, "support_convex: {}", self.support_convex)?;
        writeln!(f, "nonzero_over_support: {}", self.nonzero_over_support)?;
        writeln!(f, "identity_over_support: {}", self.identity_over_support)?;
        writeln!(f, "is_thin: {}", self.is_thin())?;
        writeln!(f, "is_pre_interval: {}", self.is_pre_interval())?;
        write!(f, "is_interval: {}", self.is_interval())
    }
}

pub fn classify(m: &Rep) -> Result<ClassificationReport> {
    m.validate()?;
    let thin = m.dim_vector().iter().all(|&d| d <= 1);
    let support_connected = support_components(m, false).len() == 1;
    let support_convex = convexity_gap(m).is_none();
    let mut nonzero_over_support = true;
    let mut identity_over_support = true;
    for a in m.support_arrows() {
        if m.map(a).is_zero() {
            nonzero_over_support = false;
        }
        if !m.map(a).is_identity() {
            identity_over_support = false;
        }
    }
    Ok(ClassificationReport {
        thin,
        support_connected,
        support_convex,
        nonzero_over_support,
        identity_over_support,
    })
}

/// Connected components of the support, using support-internal arrows as
/// undirected edges; with `nonzero_only` the zero-carrying arrows are
/// removed first. Components come out ordered by least vertex, each sorted.
fn support_components(m: &Rep, nonzero_only: bool) -> Vec<Vec<VertexId>> {
    let q = m.quiver();
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); q.vertex_count()];
    for a in m.support_arrows() {
        if nonzero_only && m.map(a).is_zero() {
            continue;
        }
        let ar = q.arrow(a);
        adj[ar.source].push(ar.target);
        adj[ar.target].push(ar.source);
    }
    let mut seen = vec![false; q.vertex_count()];
    let mut comps = Vec::new();
    for v in m.support() {
        if seen[v] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// A witness (x, z, y) that the support is not convex: x, y in the support,
/// z outside it, with directed paths x -> z -> y. In a grid every pair of
/// composable directed paths concatenates to a path, so this criterion covers
/// mixed orientations as well.
fn convexity_gap(m: &Rep) -> Option<(VertexId, VertexId, VertexId)> {
    let q = m.quiver();
    let support = m.support();
    for z in q.vertices() {
        if m.dim(z) > 0 {
            continue;
        }
        let below = support.iter().copied().find(|&x| q.reachable(x, z));
        let above = support.iter().copied().find(|&y| q.reachable(z, y));
        if let (Some(x), Some(y)) = (below, above) {
            return Some((x, z, y));
        }
    }
    None
}

fn scalar_of(m: &Rep, a: ArrowId) -> Scalar {
    m.map(a).get(0, 0).clone()
}

/// Rewrites a pre-interval representation in the basis in which every support
/// arrow carries the identity. Returns the thin-identity representation and
/// the per-vertex basis scalars c_v (zero off the support, c_root = 1 at the
/// least support vertex): the diagonal base change g_v = c_v^{-1} carries the
/// input to the output. Fails with the first pre-interval condition the input
/// violates, or with a cycle whose scalars no diagonal base change can fix.
pub fn rebase(m: &Rep) -> Result<(Rep, Vec<Scalar>)> {
    m.validate()?;
    let q = m.quiver().clone();
    let field = m.field();
    if let Some(v) = q.vertices().find(|&v| m.dim(v) > 1) {
        return Err(Error::NotAnInterval(format!(
            "not thin: dimension {} at vertex {}",
            m.dim(v),
            q.vertex_name(v)
        )));
    }
    let support = m.support();
    if support.is_empty() {
        return Err(Error::NotAnInterval("empty support".into()));
    }
    if let Some((x, z, y)) = convexity_gap(m) {
        return Err(Error::NotAnInterval(format!(
            "support is not convex: {} lies between {} and {} but has dimension 0",
            q.vertex_name(z),
            q.vertex_name(x),
            q.vertex_name(y)
        )));
    }
    for a in m.support_arrows() {
        if m.map(a).is_zero() {
            return Err(Error::NotAnInterval(format!(
                "arrow {} vanishes over the support",
                q.arrow_name(a)
            )));
        }
    }

    // Undirected breadth-first traversal from the least support vertex,
    // propagating the basis scalar along each tree arrow.
    let root = support[0];
    let mut scal: Vec<Option<Scalar>> = vec![None; q.vertex_count()];
    scal[root] = Some(field.one());
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let c_u = scal[u].clone().unwrap();
        for &a in q.arrows_out(u) {
            let w = q.arrow(a).target;
            if m.dim(w) == 1 && scal[w].is_none() {
                scal[w] = Some(field.mul(&scalar_of(m, a), &c_u));
                queue.push_back(w);
            }
        }
        for &a in q.arrows_in(u) {
            let w = q.arrow(a).source;
            if m.dim(w) == 1 && scal[w].is_none() {
                scal[w] = Some(field.div(&c_u, &scalar_of(m, a)));
                queue.push_back(w);
            }
        }
    }
    if let Some(&w) = support.iter().find(|&&w| scal[w].is_none()) {
        return Err(Error::NotAnInterval(format!(
            "support is not connected: {} is unreachable from {}",
            q.vertex_name(w),
            q.vertex_name(root)
        )));
    }
    // Every support arrow, tree or not, must agree with the scalars.
    for a in m.support_arrows() {
        let ar = q.arrow(a);
        let expect = field.mul(&scalar_of(m, a), scal[ar.source].as_ref().unwrap());
        let got = scal[ar.target].as_ref().unwrap();
        if &expect != got {
            return Err(Error::NotAnInterval(format!(
                "inconsistent scalars around a cycle: arrow {} forces {} at {} but traversal assigned {}",
                q.arrow_name(a),
                expect,
                q.vertex_name(ar.target),
                got
            )));
        }
    }
    let out = Rep::thin_identity(q.clone(), field, &support);
    debug_assert!(out.validate().is_ok());
    let scalars: Vec<Scalar> = scal
        .into_iter()
        .map(|o| o.unwrap_or_else(|| field.zero()))
        .collect();
    Ok((out, scalars))
}

/// A boundary-to-boundary line crossing only zero arrows, splitting the grid
/// into the side of the starting arrow's source and the side of its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingLine {
    /// Crossed arrows in order along the line; all carry zero maps.
    pub crossed: Vec<ArrowId>,
    /// Vertices on the same side as the starting arrow's source.
    pub source_side: Vec<VertexId>,
    /// Vertices on the same side as the starting arrow's target.
    pub target_side: Vec<VertexId>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Heading {
    Right,
    Down,
    Left,
    Up,
}

/// Extends a separating line through a zero arrow of a thin representation
/// over an equioriented 2D grid until both ends leave the grid.
///
/// In each unit square the two composites agree, so a zero arrow on one of
/// the parallel paths forces a zero arrow on the other; the line exits the
/// square there, straight ahead when possible, else turning. One end travels
/// right/down, the other left/up, so the line is a simple monotone staircase.
pub fn find_separating_line(m: &Rep, alpha: ArrowId) -> Result<SeparatingLine> {
    m.validate()?;
    let q = m.quiver().clone();
    let (rows, cols) = q
        .shape_2d()
        .filter(|_| q.is_equioriented())
        .ok_or_else(|| {
            Error::Unsupported("separating lines need an equioriented two-factor grid".into())
        })?;
    if let Some(v) = q.vertices().find(|&v| m.dim(v) > 1) {
        return Err(Error::Validation(format!(
            "not thin: dimension {} at vertex {}",
            m.dim(v),
            q.vertex_name(v)
        )));
    }
    if alpha >= q.arrows().len() {
        return Err(Error::Validation(format!("no arrow {alpha}")));
    }
    if !m.map(alpha).is_zero() {
        return Err(Error::Validation(format!(
            "arrow {} does not carry a zero map",
            q.arrow_name(alpha)
        )));
    }
    {
        let ar = q.arrow(alpha);
        if m.dim(ar.source) == 0 || m.dim(ar.target) == 0 {
            return Err(Error::Validation(format!(
                "arrow {} needs nonzero dimensions at both endpoints",
                q.arrow_name(alpha)
            )));
        }
    }

    let row_arrow = |i: usize, j: usize| {
        let u = q.vertex_id(&[i, j]).unwrap();
        let v = q.vertex_id(&[i + 1, j]).unwrap();
        q.arrow_between(u, v).unwrap()
    };
    let col_arrow = |i: usize, j: usize| {
        let u = q.vertex_id(&[i, j]).unwrap();
        let v = q.vertex_id(&[i, j + 1]).unwrap();
        q.arrow_between(u, v).unwrap()
    };
    let zero = |a: ArrowId| m.map(a).is_zero();

    // One propagation step: returns the next crossed arrow, or None when the
    // line leaves the grid. The straight exit is preferred when it is zero.
    let step = |a: ArrowId, h: Heading| -> Result<Option<(ArrowId, Heading)>> {
        let c = q.coords(q.arrow(a).source);
        let (i, j) = (c[0], c[1]);
        let (straight, turn) = match h {
            Heading::Right => {
                if j + 1 > cols {
                    return Ok(None);
                }
                ((row_arrow(i, j + 1), Heading::Right), (col_arrow(i, j), Heading::Down))
            }
            Heading::Down => {
                if i == 1 {
                    return Ok(None);
                }
                ((col_arrow(i - 1, j), Heading::Down), (row_arrow(i - 1, j + 1), Heading::Right))
            }
            Heading::Left => {
                if j == 1 {
                    return Ok(None);
                }
                ((row_arrow(i, j - 1), Heading::Left), (col_arrow(i + 1, j - 1), Heading::Up))
            }
            Heading::Up => {
                if i + 1 > rows {
                    return Ok(None);
                }
                ((col_arrow(i + 1, j), Heading::Up), (row_arrow(i, j), Heading::Left))
            }
        };
        if zero(straight.0) {
            Ok(Some(straight))
        } else if zero(turn.0) {
            Ok(Some(turn))
        } else {
            Err(Error::Inconsistency(format!(
                "no zero exit next to arrow {}; the input cannot be a valid thin representation",
                q.arrow_name(a)
            )))
        }
    };

    let trace = |h0: Heading| -> Result<Vec<ArrowId>> {
        let mut out = Vec::new();
        let mut state = (alpha, h0);
        while let Some(next) = step(state.0, state.1)? {
            out.push(next.0);
            state = next;
        }
        Ok(out)
    };
    let axis = q.arrow(alpha).axis;
    let (fwd, bwd) = if axis == 0 {
        (trace(Heading::Right)?, trace(Heading::Left)?)
    } else {
        (trace(Heading::Down)?, trace(Heading::Up)?)
    };
    let mut crossed: Vec<ArrowId> = bwd.into_iter().rev().collect();
    crossed.push(alpha);
    crossed.extend(fwd);
    debug_assert!(crossed.iter().all(|&a| zero(a)));

    let (source_side, target_side) = split_sides(&q, &crossed, alpha)?;
    Ok(SeparatingLine { crossed, source_side, target_side })
}

/// Deletes the crossed arrows and returns the two undirected components,
/// source side first. Errors if the crossed set fails to split the grid into
/// exactly two sides with every crossed arrow pointing source-to-target.
fn split_sides(
    q: &GridQuiver,
    crossed: &[ArrowId],
    alpha: ArrowId,
) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
    let crossed_mask = {
        let mut mask = vec![false; q.arrows().len()];
        for &a in crossed {
            mask[a] = true;
        }
        mask
    };
    let component = |start: VertexId| -> Vec<VertexId> {
        let mut seen = vec![false; q.vertex_count()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut comp = vec![start];
        while let Some(u) = queue.pop_front() {
            let neighbours = q
                .arrows_out(u)
                .iter()
                .map(|&a| (a, q.arrow(a).target))
                .chain(q.arrows_in(u).iter().map(|&a| (a, q.arrow(a).source)));
            for (a, w) in neighbours {
                if !crossed_mask[a] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        comp
    };
    let source_side = component(q.arrow(alpha).source);
    let target_side = component(q.arrow(alpha).target);
    let split_ok = source_side.len() + target_side.len() == q.vertex_count()
        && source_side.iter().all(|v| !target_side.contains(v))
        && crossed.iter().all(|&a| {
            let ar = q.arrow(a);
            source_side.contains(&ar.source) && target_side.contains(&ar.target)
        });
    if !split_ok {
        return Err(Error::Inconsistency(
            "crossed arrows do not separate the grid into two coherent sides".into(),
        ));
    }
    Ok((source_side, target_side))
}

/// Splits a thin representation over an equioriented 2D grid into interval
/// summands: the components of the support under nonzero arrows are restricted
/// out, each is rebased onto thin-identity form, and its staircase recorded.
/// Returns the multiset of staircases in sorted order.
pub fn thin_decompose(m: &Rep) -> Result<Vec<Staircase>> {
    m.validate()?;
    let q = m.quiver().clone();
    let (rows, cols) = q
        .shape_2d()
        .filter(|_| q.is_equioriented())
        .ok_or_else(|| {
            Error::Unsupported("thin splitting needs an equioriented two-factor grid".into())
        })?;
    if let Some(v) = q.vertices().find(|&v| m.dim(v) > 1) {
        return Err(Error::Validation(format!(
            "not thin: dimension {} at vertex {}",
            m.dim(v),
            q.vertex_name(v)
        )));
    }
    let mut out = Vec::new();
    for comp in support_components(m, true) {
        let mut part = Rep::thin_identity(q.clone(), m.field(), &comp);
        let in_comp = |v: VertexId| comp.binary_search(&v).is_ok();
        for a in 0..q.arrows().len() {
            let ar = q.arrow(a);
            if in_comp(ar.source) && in_comp(ar.target) {
                part.set_map(a, m.map(a).clone());
            }
        }
        let at = q.vertex_name(comp[0]);
        rebase(&part).map_err(|e| {
            Error::Inconsistency(format!(
                "support component at {at} does not rebase to an interval: {e}"
            ))
        })?;
        let coords: Vec<(usize, usize)> = comp
            .iter()
            .map(|&v| (q.coords(v)[0], q.coords(v)[1]))
            .collect();
        let st = staircase_from_support(rows, cols, &coords).map_err(|e| {
            Error::Inconsistency(format!(
                "support component at {at} is not a staircase: {e}"
            ))
        })?;
        out.push(st);
    }
    debug_assert_eq!(
        out.iter().map(|st| st.support_coords().len()).sum::<usize>(),
        m.dim_total()
    );
    out.sort();
    Ok(out)
}
