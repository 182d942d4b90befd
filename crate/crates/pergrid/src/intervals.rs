//! Staircase combinatorics for 2D equioriented grids.
//!
//! A staircase from row s to row t is one column slice [b_i, d_i] per row,
//! subject to b_{i+1} <= b_i <= d_{i+1} <= d_i: going up one row, the slice
//! shifts left while still overlapping the slice below. These are exactly the
//! supports of the intervals of the grid, and the rectangular-size classes
//! are counted by Narayana numbers.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::grid::{GridQuiver, VertexId};
use crate::rep::Rep;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Staircase {
    s: usize,
    /// (b_i, d_i) for i = s..=t.
    slices: Vec<(usize, usize)>,
}

impl Staircase {
    pub fn new(s: usize, slices: Vec<(usize, usize)>) -> Result<Staircase> {
        if s == 0 {
            return Err(Error::NotAnInterval("rows are 1-based".into()));
        }
        if slices.is_empty() {
            return Err(Error::NotAnInterval("no slices".into()));
        }
        for (i, &(b, d)) in slices.iter().enumerate() {
            if b == 0 || b > d {
                return Err(Error::NotAnInterval(format!(
                    "slice [{b},{d}] at row {} is malformed",
                    s + i
                )));
            }
        }
        for (i, w) in slices.windows(2).enumerate() {
            let ((b0, d0), (b1, d1)) = (w[0], w[1]);
            if !(b1 <= b0 && b0 <= d1 && d1 <= d0) {
                return Err(Error::NotAnInterval(format!(
                    "rows {} and {} violate b_up <= b <= d_up <= d: [{b0},{d0}] then [{b1},{d1}]",
                    s + i,
                    s + i + 1
                )));
            }
        }
        Ok(Staircase { s, slices })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.s + self.slices.len() - 1
    }

    pub fn slices(&self) -> &[(usize, usize)] {
        &self.slices
    }

    pub fn slice_at_row(&self, row: usize) -> Option<(usize, usize)> {
        if row < self.s || row > self.t() {
            None
        } else {
            Some(self.slices[row - self.s])
        }
    }

    /// (height, width) of the bounding box: height t-s+1, width spanning from
    /// the topmost slice's left end b_t to the bottom slice's right end d_s.
    pub fn size(&self) -> (usize, usize) {
        let height = self.slices.len();
        let d_s = self.slices[0].1;
        let b_t = self.slices[self.slices.len() - 1].0;
        (height, d_s - b_t + 1)
    }

    pub fn fits(&self, m: usize, n: usize) -> bool {
        self.t() <= m && self.slices.iter().all(|&(_, d)| d <= n)
    }

    /// Support as (row, column) pairs, row-major in canonical vertex order.
    pub fn support_coords(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &(b, d)) in self.slices.iter().enumerate() {
            for c in b..=d {
                out.push((self.s + i, c));
            }
        }
        out
    }

    pub fn support_ids(&self, q: &GridQuiver) -> Result<Vec<VertexId>> {
        self.support_coords()
            .into_iter()
            .map(|(r, c)| {
                q.vertex_id(&[r, c]).ok_or_else(|| {
                    Error::Validation(format!("staircase vertex {r},{c} outside the grid"))
                })
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<Staircase> {
        let bad = || Error::Parse(format!("malformed staircase {text:?}"));
        let (range, rest) = text.split_once(':').ok_or_else(bad)?;
        let (s, t) = range.trim().split_once("..").ok_or_else(bad)?;
        let s: usize = s.trim().parse().map_err(|_| bad())?;
        let t: usize = t.trim().parse().map_err(|_| bad())?;
        let mut slices = Vec::new();
        for part in rest.split(';') {
            let part = part.trim();
            let inner = part
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(']'))
                .ok_or_else(bad)?;
            let (b, d) = inner.split_once(',').ok_or_else(bad)?;
            slices.push((
                b.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            ));
        }
        if t < s || slices.len() != t - s + 1 {
            return Err(Error::Parse(format!(
                "staircase {text:?} declares rows {s}..{t} but lists {} slices",
                slices.len()
            )));
        }
        Staircase::new(s, slices)
    }
}

impl fmt::Display for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}: ", self.s, self.t())?;
        let parts: Vec<String> = self
            .slices
            .iter()
            .map(|&(b, d)| format!("[{b},{d}]"))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Enumeration order: by (s, t), then lexicographic on the slice sequence.
impl Ord for Staircase {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.s, self.t())
            .cmp(&(other.s, other.t()))
            .then_with(|| self.slices.cmp(&other.slices))
    }
}

impl PartialOrd for Staircase {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Recovers the staircase from a support set, or reports which condition
/// (row gap, row contiguity, slice chain) fails.
pub fn staircase_from_support(m: usize, n: usize, support: &[(usize, usize)]) -> Result<Staircase> {
    if support.is_empty() {
        return Err(Error::NotAnInterval("empty support".into()));
    }
    for &(r, c) in support {
        if r < 1 || r > m || c < 1 || c > n {
            return Err(Error::NotAnInterval(format!(
                "vertex {r},{c} outside the {m}x{n} grid"
            )));
        }
    }
    let set: BTreeSet<(usize, usize)> = support.iter().copied().collect();
    let s = set.iter().map(|&(r, _)| r).min().unwrap();
    let t = set.iter().map(|&(r, _)| r).max().unwrap();
    let mut slices = Vec::with_capacity(t - s + 1);
    for row in s..=t {
        let cols: Vec<usize> = set
            .iter()
            .filter(|&&(r, _)| r == row)
            .map(|&(_, c)| c)
            .collect();
        if cols.is_empty() {
            return Err(Error::NotAnInterval(format!(
                "row {row} is empty although rows {s} and {t} are not"
            )));
        }
        let b = cols[0];
        let d = *cols.last().unwrap();
        if cols.len() != d - b + 1 {
            return Err(Error::NotAnInterval(format!(
                "row {row} is not contiguous between columns {b} and {d}"
            )));
        }
        slices.push((b, d));
    }
    Staircase::new(s, slices)
}

/// Narayana number N(a, b) = C(a, b) * C(a, b-1) / a.
pub fn narayana(a: u64, b: u64) -> u64 {
    assert!(a >= 1 && b >= 1 && b <= a, "narayana needs 1 <= b <= a");
    let prod = binomial(a, b) * binomial(a, b - 1);
    u64::try_from(prod / a as u128).expect("narayana overflow")
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of staircases of height h whose bounding box is exactly h x w.
pub fn count_rectangular(h: u64, w: u64) -> u64 {
    narayana(h + w - 1, h)
}

/// Number of staircases of bounding-box size exactly (h, w) in an m x n grid.
pub fn count_by_size(m: u64, n: u64, h: u64, w: u64) -> u64 {
    if h < 1 || w < 1 || h > m || w > n {
        return 0;
    }
    (m - h + 1) * (n - w + 1) * count_rectangular(h, w)
}

/// Total number of intervals of the m x n grid.
pub fn count_intervals(m: u64, n: u64) -> u64 {
    let mut total = 0;
    for h in 1..=m {
        for w in 1..=n {
            total += count_by_size(m, n, h, w);
        }
    }
    total
}

/// All staircases of the m x n grid, by (s, t) and then lexicographically on
/// slice sequences.
pub fn enumerate_intervals(m: usize, n: usize) -> impl Iterator<Item = Staircase> {
    let mut pairs = Vec::new();
    for s in 1..=m {
        for t in s..=m {
            pairs.push((s, t));
        }
    }
    pairs.into_iter().flat_map(move |(s, t)| {
        let mut block = Vec::new();
        let mut prefix = Vec::with_capacity(t - s + 1);
        extend_block(n, t - s + 1, &mut prefix, &mut block);
        block.into_iter().map(move |slices| Staircase { s, slices })
    })
}

fn extend_block(
    n: usize,
    height: usize,
    prefix: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    if prefix.len() == height {
        out.push(prefix.clone());
        return;
    }
    let choices: Vec<(usize, usize)> = match prefix.last() {
        None => {
            let mut v = Vec::new();
            for b in 1..=n {
                for d in b..=n {
                    v.push((b, d));
                }
            }
            v
        }
        Some(&(pb, pd)) => {
            let mut v = Vec::new();
            for b in 1..=pb {
                for d in pb..=pd {
                    v.push((b, d));
                }
            }
            v
        }
    };
    for (b, d) in choices {
        prefix.push((b, d));
        extend_block(n, height, prefix, out);
        prefix.pop();
    }
}

/// Staircases of the m x n grid with bounding box exactly (h, w).
pub fn enumerate_by_size(
    m: usize,
    n: usize,
    h: usize,
    w: usize,
) -> impl Iterator<Item = Staircase> {
    enumerate_intervals(m, n).filter(move |st| st.size() == (h, w))
}

/// The interval representation with the given staircase support: thin,
/// identity maps over the support.
pub fn interval_rep(q: &Arc<GridQuiver>, st: &Staircase, field: FieldSpec) -> Result<Rep> {
    let (m, n) = q
        .shape_2d()
        .ok_or_else(|| Error::Unsupported("interval_rep needs a two-factor grid".into()))?;
    if !q.is_equioriented() {
        return Err(Error::Unsupported("interval_rep needs an equioriented grid".into()));
    }
    if !st.fits(m, n) {
        return Err(Error::Validation(format!(
            "staircase {st} does not fit in the {m}x{n} grid"
        )));
    }
    let ids = st.support_ids(q)?;
    Ok(Rep::thin_identity(q.clone(), field, &ids))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: usize, slices: &[(usize, usize)]) -> Staircase {
        Staircase::new(s, slices.to_vec()).unwrap()
    }

    #[test]
    fn narayana_frozen_values() {
        assert_eq!(narayana(1, 1), 1);
        assert_eq!(narayana(3, 2), 3);
        assert_eq!(narayana(5, 3), 20);
    }

    #[test]
    fn narayana_rows_sum_to_catalan() {
        // independent oracle: Catalan numbers by the additive recurrence
        let mut catalan = vec![1u64; 9];
        for i in 1..9 {
            catalan[i] = (0..i).map(|j| catalan[j] * catalan[i - 1 - j]).sum();
        }
        for a in 1..=8u64 {
            let row: u64 = (1..=a).map(|b| narayana(a, b)).sum();
            assert_eq!(row, catalan[a as usize], "row {a}");
        }
    }

    #[test]
    fn counting_frozen_values() {
        assert_eq!(enumerate_intervals(2, 1).count(), 3);
        assert_eq!(enumerate_intervals(2, 2).count(), 11);
        assert_eq!(count_intervals(2, 2), 11);
        assert_eq!(count_intervals(3, 3), 83);
        assert_eq!(count_intervals(2, 4), 55);
        assert_eq!(count_by_size(3, 3, 2, 2), 12);
        assert_eq!(count_rectangular(2, 2), 3);
    }

    #[test]
    fn two_row_grid_closed_form() {
        // #intervals(2, n) = n(n+1)(n^2+5n+30)/24
        for n in 1..=10u64 {
            let quartic = n * (n + 1) * (n * n + 5 * n + 30) / 24;
            assert_eq!(count_intervals(2, n), quartic, "n = {n}");
        }
        assert_eq!(enumerate_intervals(2, 8).count() as u64, count_intervals(2, 8));
    }

    #[test]
    fn enumeration_matches_counts() {
        for m in 1..=4usize {
            for n in 1..=4usize {
                let listed = enumerate_intervals(m, n).count() as u64;
                assert_eq!(listed, count_intervals(m as u64, n as u64), "{m}x{n}");
                for h in 1..=m {
                    for w in 1..=n {
                        let by_size = enumerate_by_size(m, n, h, w).count() as u64;
                        assert_eq!(
                            by_size,
                            count_by_size(m as u64, n as u64, h as u64, w as u64),
                            "{m}x{n} size {h}x{w}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_order_frozen() {
        let all: Vec<Staircase> = enumerate_intervals(2, 2).collect();
        let expect = vec![
            st(1, &[(1, 1)]),
            st(1, &[(1, 2)]),
            st(1, &[(2, 2)]),
            st(1, &[(1, 1), (1, 1)]),
            st(1, &[(1, 2), (1, 1)]),
            st(1, &[(1, 2), (1, 2)]),
            st(1, &[(2, 2), (1, 2)]),
            st(1, &[(2, 2), (2, 2)]),
            st(2, &[(1, 1)]),
            st(2, &[(1, 2)]),
            st(2, &[(2, 2)]),
        ];
        assert_eq!(all, expect);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all, "enumeration emits its own sort order");
    }

    #[test]
    fn staircase_chain_enforced() {
        assert!(Staircase::new(1, vec![(2, 2), (1, 2)]).is_ok());
        // moving right while going up violates the chain
        assert!(Staircase::new(1, vec![(1, 1), (2, 2)]).is_err());
        assert!(Staircase::new(1, vec![(1, 2), (1, 3)]).is_err());
        assert!(Staircase::new(1, vec![]).is_err());
        assert!(Staircase::new(0, vec![(1, 1)]).is_err());
    }

    #[test]
    fn support_round_trip_worked_example() {
        // four-row staircase in a 4x6 grid
        let stair = st(1, &[(5, 6), (3, 5), (3, 4), (2, 4)]);
        let coords = stair.support_coords();
        let expect: Vec<(usize, usize)> = vec![
            (1, 5),
            (1, 6),
            (2, 3),
            (2, 4),
            (2, 5),
            (3, 3),
            (3, 4),
            (4, 2),
            (4, 3),
            (4, 4),
        ];
        assert_eq!(coords, expect);
        assert_eq!(staircase_from_support(4, 6, &coords).unwrap(), stair);
        assert_eq!(stair.size(), (4, 5));

        let two_rows = st(2, &[(3, 5), (2, 4)]);
        let coords2 = two_rows.support_coords();
        assert_eq!(
            coords2,
            vec![(2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (3, 4)]
        );
        assert_eq!(staircase_from_support(4, 6, &coords2).unwrap(), two_rows);
    }

    #[test]
    fn support_round_trip_exhaustive() {
        for stair in enumerate_intervals(4, 4) {
            let coords = stair.support_coords();
            assert_eq!(staircase_from_support(4, 4, &coords).unwrap(), stair);
        }
    }

    #[test]
    fn from_support_failure_reasons() {
        let err = staircase_from_support(3, 3, &[]).unwrap_err();
        assert!(err.to_string().contains("empty"));
        let err = staircase_from_support(3, 3, &[(1, 1), (2, 2)]).unwrap_err();
        assert!(err.to_string().contains("violate"), "{err}");
        let err = staircase_from_support(3, 3, &[(1, 1), (3, 1)]).unwrap_err();
        assert!(err.to_string().contains("row 2 is empty"), "{err}");
        let err = staircase_from_support(3, 3, &[(1, 1), (1, 3)]).unwrap_err();
        assert!(err.to_string().contains("not contiguous"), "{err}");
        let err = staircase_from_support(2, 2, &[(1, 3)]).unwrap_err();
        assert!(err.to_string().contains("outside"), "{err}");
    }

    #[test]
    fn text_round_trip() {
        for stair in enumerate_intervals(3, 3) {
            let text = stair.to_string();
            assert_eq!(Staircase::parse(&text).unwrap(), stair);
        }
        let parsed = Staircase::parse("1..2: [2,2];[1,2]").unwrap();
        assert_eq!(parsed, st(1, &[(2, 2), (1, 2)]));
        assert!(Staircase::parse("1..2: [1,1]").is_err());
        assert!(Staircase::parse("nope").is_err());
        assert!(Staircase::parse("1..2: [1,1];[2,2]").is_err());
    }

    #[test]
    fn interval_rep_is_valid_interval() {
        let q = crate::grid::GridQuiver::grid_2d(3, 3).unwrap();
        for stair in enumerate_intervals(3, 3) {
            let rep = interval_rep(&q, &stair, FieldSpec::Prime(5)).unwrap();
            rep.validate().unwrap();
            assert_eq!(rep.dim_total(), stair.support_coords().len());
            assert_eq!(crate::rep::hom_dim(&rep, &rep), 1, "End(interval) = k for {stair}");
        }
    }

    #[test]
    fn interval_rep_rejects_bad_inputs() {
        let q3 = crate::grid::GridQuiver::equioriented(&[2, 2, 2]).unwrap();
        let stair = st(1, &[(1, 1)]);
        assert!(interval_rep(&q3, &stair, FieldSpec::Rational).is_err());
        let q = crate::grid::GridQuiver::grid_2d(2, 2).unwrap();
        let too_wide = st(1, &[(1, 3)]);
        assert!(interval_rep(&q, &too_wide, FieldSpec::Rational).is_err());
    }
}
