//! Ground-truth decomposition over prime fields. A representation is split
//! along the generalized kernels of endomorphisms whose minimal polynomial
//! has at least two distinct irreducible factors; when a trial budget of
//! random endomorphisms produces no split and every basis endomorphism is
//! scalar plus nilpotent, the endomorphism algebra is local and the module is
//! certified indecomposable. Failure to certify is reported, never guessed.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::morphism::{kernel_subrep, Morphism};
use crate::rep::{hom_basis, hom_dim, Rep};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

// ---------------------------------------------------------------------------
// dense univariate polynomials

/// Coefficients low to high, trailing zeros trimmed; empty = zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Poly {
    pub(crate) field: FieldSpec,
    pub(crate) c: Vec<Scalar>,
}

impl Poly {
    pub(crate) fn new(field: FieldSpec, mut c: Vec<Scalar>) -> Poly {
        while c.last().is_some_and(|s| s.is_zero()) {
            c.pop();
        }
        Poly { field, c }
    }

    fn zero(field: FieldSpec) -> Poly {
        Poly { field, c: Vec::new() }
    }

    fn one(field: FieldSpec) -> Poly {
        Poly { field, c: vec![field.one()] }
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree of a nonzero polynomial.
    pub(crate) fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.c.len() - 1
    }

    fn lead(&self) -> &Scalar {
        self.c.last().unwrap()
    }

    fn add(&self, o: &Poly) -> Poly {
        let f = self.field;
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        let z = f.zero();
        for i in 0..n {
            c.push(f.add(self.c.get(i).unwrap_or(&z), o.c.get(i).unwrap_or(&z)));
        }
        Poly::new(f, c)
    }

    fn sub(&self, o: &Poly) -> Poly {
        let f = self.field;
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        let z = f.zero();
        for i in 0..n {
            c.push(f.sub(self.c.get(i).unwrap_or(&z), o.c.get(i).unwrap_or(&z)));
        }
        Poly::new(f, c)
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        let mut c = vec![f.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }

    fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.field, self.c.iter().map(|a| self.field.mul(a, s)).collect())
    }

    fn monic(&self) -> Poly {
        assert!(!self.is_zero());
        self.scale(&self.field.inv(self.lead()))
    }

    fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let f = self.field;
        if self.is_zero() || self.c.len() < d.c.len() {
            return (Poly::zero(f), self.clone());
        }
        let inv_lead = f.inv(d.lead());
        let mut rem = self.c.clone();
        let dn = d.c.len();
        let mut quo = vec![f.zero(); rem.len() - dn + 1];
        for k in (0..quo.len()).rev() {
            let coef = f.mul(&rem[k + dn - 1], &inv_lead);
            if coef.is_zero() {
                continue;
            }
            for (i, dc) in d.c.iter().enumerate() {
                let t = f.mul(&coef, dc);
                rem[k + i] = f.sub(&rem[k + i], &t);
            }
            quo[k] = coef;
        }
        (Poly::new(f, quo), Poly::new(f, rem))
    }

    fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divmod(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    fn rem(&self, m: &Poly) -> Poly {
        self.divmod(m).1
    }

    /// Monic greatest common divisor.
    fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn derivative(&self) -> Poly {
        let f = self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.mul(&f.from_i64(i as i64), a))
            .collect();
        Poly::new(f, c)
    }

    fn mulmod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }

    /// self^e mod m by square and multiply.
    fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            base = base.mulmod(&base, m);
            e >>= 1;
        }
        acc
    }

    /// Plain power, for small exponents.
    fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// For f with zero derivative over F_p, the g with g(x)^p = f(x):
    /// coefficients at the multiples of p (p-th roots are the identity on
    /// a prime field).
    fn pth_root(&self, p: u64) -> Poly {
        let c = self
            .c
            .iter()
            .step_by(p as usize)
            .cloned()
            .collect();
        Poly::new(self.field, c)
    }

    pub(crate) fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let coef = if a.is_one() && i > 0 { String::new() } else { format!("{a}") };
            let pow = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let sep = if !coef.is_empty() && !pow.is_empty() { "*" } else { "" };
            parts.push(format!("{coef}{sep}{pow}"));
        }
        parts.join(" + ")
    }
}

/// Minimal polynomial of a square matrix over its field: the first power of
/// the matrix that is linearly dependent on the earlier powers.
pub(crate) fn min_poly(op: &Matrix) -> Poly {
    assert_eq!(op.rows(), op.cols(), "minimal polynomial of a square matrix");
    let f = op.field();
    let n = op.rows();
    if n == 0 {
        return Poly::one(f);
    }
    let nn = n * n;
    let mut power_rows: Vec<Matrix> = Vec::new();
    let mut cur = Matrix::identity(f, n);
    for k in 0..=n {
        let flat = Matrix::new(f, nn, 1, cur.entries().to_vec());
        if k > 0 {
            let basis = Matrix::hstack(&power_rows.iter().collect::<Vec<_>>());
            if let Some(c) = basis.solve(&flat) {
                let mut coeffs = vec![f.zero(); k + 1];
                for (i, item) in coeffs.iter_mut().enumerate().take(k) {
                    *item = f.neg(c.get(i, 0));
                }
                coeffs[k] = f.one();
                return Poly::new(f, coeffs);
            }
        }
        power_rows.push(flat);
        cur = cur.mul(op);
    }
    unreachable!("minimal polynomial has degree at most the matrix size");
}

/// If mu is a power of a single linear factor (x - r)^deg, returns r.
/// Over F_p a p-th power hides the root from the subleading coefficient, so
/// the polynomial is rewritten in x^p and the extraction recurses; p-th roots
/// are the identity on a prime field.
pub(crate) fn linear_power_root(mu: &Poly) -> Option<Scalar> {
    if mu.is_zero() || mu.degree() == 0 {
        return None;
    }
    let f = mu.field;
    let mu = mu.monic();
    let k = mu.degree();
    let candidate = match f {
        FieldSpec::Prime(p) if k as u64 % p == 0 => {
            if mu.c.iter().enumerate().any(|(i, a)| i as u64 % p != 0 && !a.is_zero()) {
                return None;
            }
            linear_power_root(&mu.pth_root(p))?
        }
        _ => {
            let kk = f.from_i64(k as i64);
            f.neg(&f.div(&mu.c[k - 1], &kk))
        }
    };
    let linear = Poly::new(f, vec![f.neg(&candidate), f.one()]);
    if linear.pow(k) == mu {
        Some(candidate)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// factorization over prime fields

fn fp_value(s: &Scalar) -> u64 {
    match s {
        Scalar::Fp(x) => *x,
        Scalar::Rat(_) => unreachable!("prime-field scalar expected"),
    }
}

fn poly_sort_key(p: &Poly) -> (usize, Vec<u64>) {
    (p.degree(), p.c.iter().map(fp_value).collect())
}

/// Full factorization of a nonconstant monic polynomial over F_p into
/// irreducible factors with multiplicities, deterministically ordered.
fn factor_poly(f: &Poly, rng: &mut ChaCha20Rng) -> Vec<(Poly, usize)> {
    let p = match f.field {
        FieldSpec::Prime(p) => p,
        FieldSpec::Rational => unreachable!("factorization is prime-field only"),
    };
    let mut out = Vec::new();
    for (g, mult) in squarefree_parts(&f.monic(), p) {
        for (h, d) in distinct_degree_parts(&g, p) {
            let mut irreducibles = Vec::new();
            equal_degree_split(&h, d, p, rng, &mut irreducibles);
            for irr in irreducibles {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by_key(|(q, _)| poly_sort_key(q));
    out
}

/// Squarefree decomposition: pairwise-coprime squarefree monic g_i with
/// multiplicities, f = prod g_i^{m_i}.
fn squarefree_parts(f: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let fd = f.derivative();
    if fd.is_zero() {
        // f = g(x^p) = g(x)^p over a prime field
        for (h, m) in squarefree_parts(&f.pth_root(p), p) {
            out.push((h, m * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&fd);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        for (h, m) in squarefree_parts(&c.pth_root(p), p) {
            out.push((h, m * p as usize));
        }
    }
    out
}

/// Distinct-degree split of a squarefree monic polynomial: parts whose
/// irreducible factors all share the indicated degree.
fn distinct_degree_parts(g: &Poly, p: u64) -> Vec<(Poly, usize)> {
    let f = g.field;
    let x = Poly::new(f, vec![f.zero(), f.one()]);
    let mut out = Vec::new();
    let mut rem = g.monic();
    let mut h = x.rem(&rem);
    let mut d = 0;
    while !rem.is_one() && rem.degree() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(p, &rem);
        let fac = rem.gcd(&h.sub(&x));
        if !fac.is_one() {
            out.push((fac.clone(), d));
            rem = rem.div_exact(&fac);
            h = h.rem(&rem);
        }
    }
    if !rem.is_one() {
        let d = rem.degree();
        out.push((rem, d));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting of a squarefree monic polynomial
/// whose irreducible factors all have degree d.
fn equal_degree_split(h: &Poly, d: usize, p: u64, rng: &mut ChaCha20Rng, out: &mut Vec<Poly>) {
    if h.degree() == d {
        out.push(h.monic());
        return;
    }
    let f = h.field;
    for _round in 0..512 {
        let a = Poly::new(
            f,
            (0..h.degree()).map(|_| f.from_i64(rng.gen_range(0..p) as i64)).collect(),
        );
        if a.is_zero() {
            continue;
        }
        let shared = h.gcd(&a);
        let split = if !shared.is_one() && shared.degree() < h.degree() {
            Some(shared)
        } else if p == 2 {
            // trace map over F_{2^d}
            let mut t = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = cur.mulmod(&cur, h);
                t = t.add(&cur);
            }
            let g = h.gcd(&t);
            (!g.is_one() && g.degree() < h.degree()).then_some(g)
        } else {
            // a^((p^d - 1)/2) via the norm: a^(1 + p + ... + p^(d-1)) then ^((p-1)/2)
            let mut norm = a.rem(h);
            let mut cur = a.rem(h);
            for _ in 1..d {
                cur = cur.powmod(p, h);
                norm = norm.mulmod(&cur, h);
            }
            let t = norm.powmod((p - 1) / 2, h);
            let g = h.gcd(&t.sub(&Poly::one(f)));
            (!g.is_one() && g.degree() < h.degree()).then_some(g)
        };
        if let Some(g) = split {
            let rest = h.div_exact(&g);
            equal_degree_split(&g, d, p, rng, out);
            equal_degree_split(&rest, d, p, rng, out);
            return;
        }
    }
    unreachable!("equal-degree splitting failed to find a factor in 512 rounds");
}

// ---------------------------------------------------------------------------
// decomposition

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Pairwise non-isomorphic indecomposable summands with multiplicities.
    pub summands: Vec<(Rep, usize)>,
}

impl Decomposition {
    /// Sum of multiplicity times dimension vector over all summands.
    pub fn dim_vector(&self, vertex_count: usize) -> Vec<usize> {
        let mut out = vec![0; vertex_count];
        for (rep, mult) in &self.summands {
            for (v, d) in rep.dim_vector().iter().enumerate() {
                out[v] += d * mult;
            }
        }
        out
    }

    pub fn summand_count(&self) -> usize {
        self.summands.iter().map(|(_, m)| m).sum()
    }
}

/// Basis of the endomorphism algebra of m.
pub fn endomorphism_basis(m: &Rep) -> Vec<Morphism> {
    hom_basis(m, m)
}

/// Block-diagonal action of an endomorphism on the total space of m.
pub(crate) fn total_operator(field: FieldSpec, u: &Morphism) -> Matrix {
    let n: usize = u.blocks.iter().map(|b| b.rows()).sum();
    let mut out = Matrix::zero(field, n, n);
    let mut off = 0;
    for b in &u.blocks {
        debug_assert_eq!(b.rows(), b.cols());
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                out.set(off + r, off + c, b.get(r, c).clone());
            }
        }
        off += b.rows();
    }
    out
}

/// Evaluates a polynomial on an endomorphism, vertexwise by Horner.
fn poly_of_endo(m: &Rep, u: &Morphism, q: &Poly) -> Morphism {
    let f = m.field();
    let blocks = u
        .blocks
        .iter()
        .enumerate()
        .map(|(v, b)| {
            let n = m.dim(v);
            let mut acc = Matrix::zero(f, n, n);
            for coef in q.c.iter().rev() {
                acc = acc.mul(b);
                let mut diag = Matrix::identity(f, n);
                diag = diag.scale(coef);
                acc = acc.add(&diag);
            }
            acc
        })
        .collect();
    Morphism { blocks }
}

/// Krull-Schmidt decomposition of a representation over a prime field.
/// Deterministic for a fixed seed; the multiset of summands is independent of
/// the seed up to isomorphism.
pub fn decompose(m: &Rep, seed: u64) -> Result<Decomposition> {
    m.validate()?;
    if m.field() == FieldSpec::Rational {
        return Err(Error::Unsupported(
            "brute-force decomposition factors minimal polynomials and needs a prime field"
                .into(),
        ));
    }
    let mut leaves = Vec::new();
    split_indecomposable(m, seed, &mut leaves)?;
    let mut summands: Vec<(Rep, usize)> = Vec::new();
    'leaf: for leaf in leaves {
        for (rep, mult) in summands.iter_mut() {
            if is_isomorphic(rep, &leaf)? {
                *mult += 1;
                continue 'leaf;
            }
        }
        summands.push((leaf, 1));
    }
    summands.sort_by(|(a, _), (b, _)| {
        (a.dim_total(), a.dim_vector()).cmp(&(b.dim_total(), b.dim_vector()))
    });
    let dec = Decomposition { summands };
    if dec.dim_vector(m.dim_vector().len()).as_slice() != m.dim_vector() {
        return Err(Error::Inconsistency(
            "decomposition does not add up to the input dimension vector".into(),
        ));
    }
    Ok(dec)
}

fn split_indecomposable(m: &Rep, seed: u64, out: &mut Vec<Rep>) -> Result<()> {
    if m.dim_total() == 0 {
        return Ok(());
    }
    let h = hom_dim(m, m);
    if h == 1 {
        out.push(m.clone());
        return Ok(());
    }
    let basis = endomorphism_basis(m);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let budget = 32 * h;
    for trial in 0..budget {
        let u = if trial < basis.len() {
            basis[trial].clone()
        } else {
            let mut acc = Morphism::zero(m, m);
            for b in &basis {
                let c = random_scalar(m.field(), &mut rng);
                acc = acc.add(&b.scale(&c));
            }
            acc
        };
        let mu = min_poly(&total_operator(m.field(), &u));
        let factors = factor_poly(&mu, &mut rng);
        if factors.len() < 2 {
            continue;
        }
        // u's generalized kernels are subrepresentations splitting m
        let mut parts = Vec::new();
        for (q, e) in &factors {
            let killer = poly_of_endo(m, &u, &q.pow(*e));
            let (sub, _incl) = kernel_subrep(m, &killer);
            parts.push(sub);
        }
        let total: usize = parts.iter().map(|s| s.dim_total()).sum();
        if total != m.dim_total() || parts.iter().any(|s| s.dim_total() == 0) {
            return Err(Error::Inconsistency(
                "primary components of an endomorphism do not span the module".into(),
            ));
        }
        for part in parts {
            split_indecomposable(&part, rng.gen(), out)?;
        }
        return Ok(());
    }
    // no split found: certify that End(m) is local, i.e. every basis
    // endomorphism is scalar plus nilpotent
    for b in &basis {
        let mu = min_poly(&total_operator(m.field(), b));
        if linear_power_root(&mu).is_none() {
            return Err(Error::BudgetExhausted(format!(
                "cannot certify indecomposability: an endomorphism has minimal polynomial {} \
                 (not a power of a linear factor) yet {} splitting trials found no factor",
                mu.render("x"),
                budget
            )));
        }
    }
    out.push(m.clone());
    Ok(())
}

fn random_scalar(field: FieldSpec, rng: &mut ChaCha20Rng) -> Scalar {
    match field {
        FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
        FieldSpec::Rational => field.from_i64(rng.gen_range(-8..=8)),
    }
}

/// Isomorphism test. Exact over prime fields: a random (or, for small search
/// spaces, exhaustive) sweep of the Hom space for a vertexwise-invertible
/// morphism. Over the rationals only the deterministic fast paths answer;
/// anything else is unsupported.
pub fn is_isomorphic(a: &Rep, b: &Rep) -> Result<bool> {
    if a.quiver() != b.quiver() {
        return Err(Error::Validation("isomorphism needs a common grid".into()));
    }
    if a.field() != b.field() {
        return Err(Error::Validation("isomorphism needs a common field".into()));
    }
    if a.dim_vector() != b.dim_vector() {
        return Ok(false);
    }
    if a.dim_total() == 0 {
        return Ok(true);
    }
    if (0..a.quiver().arrows().len()).all(|i| a.map(i) == b.map(i)) {
        return Ok(true);
    }
    let basis = hom_basis(a, b);
    if basis.is_empty() {
        return Ok(false);
    }
    if basis.len() == 1 {
        // every homomorphism is a scalar multiple of the basis element
        return Ok(basis[0].is_invertible());
    }
    let p = match a.field() {
        FieldSpec::Prime(p) => p,
        FieldSpec::Rational => {
            return Err(Error::Unsupported(
                "isomorphism search over the rationals is only available when the Hom space \
                 is at most one-dimensional"
                    .into(),
            ))
        }
    };
    let k = basis.len() as u32;
    let space: Option<u64> = p.checked_pow(k).filter(|&n| n <= 4096);
    if let Some(n) = space {
        // exhaustive: all coefficient vectors in base p
        for idx in 1..n {
            let mut rest = idx;
            let mut acc = Morphism::zero(a, b);
            for bs in &basis {
                let c = a.field().from_i64((rest % p) as i64);
                rest /= p;
                if !c.is_zero() {
                    acc = acc.add(&bs.scale(&c));
                }
            }
            if acc.is_invertible() {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(0x15_0_1503);
    for _ in 0..256 {
        let mut acc = Morphism::zero(a, b);
        for bs in &basis {
            let c = random_scalar(a.field(), &mut rng);
            acc = acc.add(&bs.scale(&c));
        }
        if acc.is_invertible() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Multiplicity of the indecomposable l among the summands of m, counted on
/// an explicit decomposition.
pub fn multiplicity_bruteforce(l: &Rep, m: &Rep) -> Result<usize> {
    let dec = decompose(m, 0xB1704)?;
    let mut count = 0;
    for (rep, mult) in &dec.summands {
        if is_isomorphic(rep, l)? {
            count += mult;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::thin_decompose;
    use crate::fixtures::{cube_cycle, ring_3x3};
    use crate::grid::GridQuiver;
    use crate::intervals::{enumerate_intervals, interval_rep, Staircase};

    fn poly(field: FieldSpec, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&x| field.from_i64(x)).collect())
    }

    #[test]
    fn poly_divmod_and_gcd() {
        let f = FieldSpec::Prime(7);
        let a = poly(f, &[2, 0, 1]); // x^2 + 2
        let b = poly(f, &[3, 1]); // x + 3
        let (q, r) = a.divmod(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        // gcd((x-1)(x-2), (x-1)(x-3)) = x - 1
        let g1 = poly(f, &[1, 1]).mul(&poly(f, &[2, 1]));
        let g2 = poly(f, &[1, 1]).mul(&poly(f, &[3, 1]));
        assert_eq!(g1.gcd(&g2), poly(f, &[1, 1]));
    }

    #[test]
    fn min_poly_frozen_values() {
        let f = FieldSpec::Rational;
        let id3 = Matrix::identity(f, 3);
        assert_eq!(min_poly(&id3), poly(f, &[-1, 1]));
        let diag = Matrix::from_i64(f, 2, 2, &[1, 0, 0, 2]);
        assert_eq!(min_poly(&diag), poly(f, &[2, -3, 1])); // (x-1)(x-2)
        let nil = Matrix::from_i64(f, 2, 2, &[0, 1, 0, 0]);
        assert_eq!(min_poly(&nil), poly(f, &[0, 0, 1])); // x^2
        let fp = FieldSpec::Prime(5);
        let comp = Matrix::from_i64(fp, 2, 2, &[0, 4, 1, 0]); // companion of x^2 + 1
        assert_eq!(min_poly(&comp), poly(fp, &[1, 0, 1]));
    }

    #[test]
    fn factor_poly_frozen_values() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let f5 = FieldSpec::Prime(5);
        // x^2 + 1 = (x + 2)(x + 3) over F_5
        let factors = factor_poly(&poly(f5, &[1, 0, 1]), &mut rng);
        assert_eq!(
            factors,
            vec![(poly(f5, &[2, 1]), 1), (poly(f5, &[3, 1]), 1)]
        );
        // x^2 + x + 1 irreducible over F_2
        let f2 = FieldSpec::Prime(2);
        let factors = factor_poly(&poly(f2, &[1, 1, 1]), &mut rng);
        assert_eq!(factors, vec![(poly(f2, &[1, 1, 1]), 1)]);
        // (x + 1)^2 = x^2 + 1 over F_2: zero derivative path
        let factors = factor_poly(&poly(f2, &[1, 0, 1]), &mut rng);
        assert_eq!(factors, vec![(poly(f2, &[1, 1]), 2)]);
        // (x - 1)^2 (x - 2) over F_7
        let f7 = FieldSpec::Prime(7);
        let prod = poly(f7, &[-1, 1]).pow(2).mul(&poly(f7, &[-2, 1]));
        let factors = factor_poly(&prod, &mut rng);
        assert_eq!(
            factors,
            vec![(poly(f7, &[5, 1]), 1), (poly(f7, &[6, 1]), 2)]
        );
    }

    #[test]
    fn factor_poly_random_products_rebuild(){
        let f = FieldSpec::Prime(5);
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        for trial in 0..40u64 {
            let mut build = Poly::one(f);
            let mut rng2 = ChaCha20Rng::seed_from_u64(trial);
            for _ in 0..4 {
                let c0 = f.from_i64(rng2.gen_range(0..5) as i64);
                let deg2 = rng2.gen_range(0..3) == 0;
                let fac = if deg2 {
                    Poly::new(f, vec![c0, f.from_i64(rng2.gen_range(0..5) as i64), f.one()])
                } else {
                    Poly::new(f, vec![c0, f.one()])
                };
                build = build.mul(&fac);
            }
            let factors = factor_poly(&build, &mut rng);
            let mut rebuilt = Poly::one(f);
            for (q, e) in &factors {
                assert!(q.degree() >= 1);
                rebuilt = rebuilt.mul(&q.pow(*e));
            }
            assert_eq!(rebuilt, build.monic(), "trial {trial}");
        }
    }

    #[test]
    fn linear_power_root_extraction() {
        let f = FieldSpec::Rational;
        assert_eq!(linear_power_root(&poly(f, &[-3, 1])), Some(f.from_i64(3)));
        assert_eq!(
            linear_power_root(&poly(f, &[-2, 1]).pow(3)),
            Some(f.from_i64(2))
        );
        assert_eq!(linear_power_root(&poly(f, &[2, -3, 1])), None);
        let f2 = FieldSpec::Prime(2);
        // (x - 1)^2 over F_2: the subleading coefficient vanishes
        assert_eq!(
            linear_power_root(&poly(f2, &[1, 1]).pow(2)),
            Some(f2.one())
        );
        assert_eq!(
            linear_power_root(&poly(f2, &[1, 1]).pow(4)),
            Some(f2.one())
        );
        assert_eq!(linear_power_root(&poly(f2, &[1, 1, 1])), None);
        let f5 = FieldSpec::Prime(5);
        assert_eq!(
            linear_power_root(&poly(f5, &[-2, 1]).pow(10)),
            Some(f5.from_i64(2))
        );
    }

    #[test]
    fn endomorphism_basis_sizes() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let f = FieldSpec::Prime(5);
        let st = Staircase::new(1, vec![(1, 2)]).unwrap();
        let i = interval_rep(&q, &st, f).unwrap();
        assert_eq!(endomorphism_basis(&i).len(), 1);
        let ii = i.direct_sum(&i);
        assert_eq!(endomorphism_basis(&ii).len(), 4);
        let fq = FieldSpec::Rational;
        assert_eq!(endomorphism_basis(&cube_cycle(fq, fq.from_i64(2))).len(), 1);
        assert_eq!(endomorphism_basis(&cube_cycle(fq, fq.zero())).len(), 1);
    }

    #[test]
    fn decompose_interval_is_identity() {
        let q = GridQuiver::grid_2d(2, 3).unwrap();
        let f = FieldSpec::Prime(5);
        for st in enumerate_intervals(2, 3) {
            let rep = interval_rep(&q, &st, f).unwrap();
            let dec = decompose(&rep, 11).unwrap();
            assert_eq!(dec.summands.len(), 1);
            assert_eq!(dec.summands[0].1, 1);
        }
    }

    #[test]
    fn decompose_recovers_interval_sums() {
        let q = GridQuiver::grid_2d(2, 3).unwrap();
        let f = FieldSpec::Prime(5);
        let a = interval_rep(&q, &Staircase::new(1, vec![(1, 2)]).unwrap(), f).unwrap();
        let b = interval_rep(&q, &Staircase::new(1, vec![(2, 3), (1, 2)]).unwrap(), f).unwrap();
        let m = a.direct_sum(&b).direct_sum(&a);
        let dec = decompose(&m, 5).unwrap();
        assert_eq!(dec.summand_count(), 3);
        assert_eq!(dec.summands.len(), 2);
        let mut mults: Vec<usize> = dec.summands.iter().map(|(_, m)| *m).collect();
        mults.sort_unstable();
        assert_eq!(mults, vec![1, 2]);
        assert_eq!(dec.dim_vector(6), m.dim_vector().to_vec());
        let two = dec.summands.iter().find(|(_, m)| *m == 2).unwrap();
        assert!(is_isomorphic(&two.0, &a).unwrap());
    }

    #[test]
    fn decompose_cube_cycle_indecomposable() {
        let f = FieldSpec::Prime(2);
        for t in [0i64, 1] {
            let m = cube_cycle(f, f.from_i64(t));
            let dec = decompose(&m, 3).unwrap();
            assert_eq!(dec.summands.len(), 1, "twist {t}");
            assert_eq!(dec.summands[0].1, 1);
        }
    }

    #[test]
    fn decompose_seed_invariance() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let f = FieldSpec::Prime(5);
        let a = interval_rep(&q, &Staircase::new(1, vec![(1, 1)]).unwrap(), f).unwrap();
        let b = interval_rep(&q, &Staircase::new(1, vec![(1, 2), (1, 1)]).unwrap(), f).unwrap();
        let m = a.direct_sum(&b).direct_sum(&b);
        let decs: Vec<Decomposition> =
            [1u64, 2, 3].iter().map(|&s| decompose(&m, s).unwrap()).collect();
        for d in &decs {
            assert_eq!(d.summand_count(), 3);
            assert_eq!(d.summands.len(), 2);
        }
        for pair in decs.windows(2) {
            for ((ra, ma), (rb, mb)) in pair[0].summands.iter().zip(&pair[1].summands) {
                assert_eq!(ma, mb);
                assert!(is_isomorphic(ra, rb).unwrap());
            }
        }
    }

    #[test]
    fn decompose_thin_matches_thin_decompose() {
        let q = GridQuiver::grid_2d(2, 3).unwrap();
        let f = FieldSpec::Prime(5);
        let a = interval_rep(&q, &Staircase::new(1, vec![(1, 2)]).unwrap(), f).unwrap();
        let b = interval_rep(&q, &Staircase::new(1, vec![(3, 3), (1, 3)]).unwrap(), f).unwrap();
        let m = a.direct_sum(&b);
        let staircases = thin_decompose(&m).unwrap();
        let dec = decompose(&m, 17).unwrap();
        let mut supports: Vec<Vec<usize>> = Vec::new();
        for (rep, mult) in &dec.summands {
            for _ in 0..*mult {
                supports.push(rep.support());
            }
        }
        supports.sort();
        let mut expected: Vec<Vec<usize>> = staircases
            .iter()
            .map(|st| st.support_ids(&q).unwrap())
            .collect();
        expected.sort();
        assert_eq!(supports, expected);
    }

    #[test]
    fn decompose_rejects_rationals() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let m = Rep::zero(q, FieldSpec::Rational);
        assert!(matches!(decompose(&m, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn iso_basic_cases() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let f = FieldSpec::Prime(5);
        let st = Staircase::new(1, vec![(1, 2), (1, 1)]).unwrap();
        let a = interval_rep(&q, &st, f).unwrap();
        assert!(is_isomorphic(&a, &a).unwrap());
        let other = interval_rep(&q, &Staircase::new(1, vec![(1, 1), (1, 1)]).unwrap(), f).unwrap();
        assert!(!is_isomorphic(&a, &other).unwrap());

        // base change of an interval is isomorphic to it
        let mut g = Vec::new();
        for v in q.vertices() {
            if a.dim(v) == 1 {
                let mut mat = Matrix::zero(f, 1, 1);
                mat.set(0, 0, f.from_i64(3));
                g.push(mat);
            } else {
                g.push(Matrix::zero(f, 0, 0));
            }
        }
        let moved = a.base_change(&g).unwrap();
        assert!(is_isomorphic(&a, &moved).unwrap());
    }

    #[test]
    fn iso_distinguishes_cube_twists() {
        let f = FieldSpec::Prime(2);
        let m0 = cube_cycle(f, f.zero());
        let m1 = cube_cycle(f, f.one());
        assert!(!is_isomorphic(&m0, &m1).unwrap());
        assert!(is_isomorphic(&m0, &m0).unwrap());
    }

    #[test]
    fn iso_rational_paths() {
        let fq = FieldSpec::Rational;
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let st = Staircase::new(1, vec![(1, 2)]).unwrap();
        let a = interval_rep(&q, &st, fq).unwrap();
        assert!(is_isomorphic(&a, &a).unwrap());
        // 1-dimensional Hom space settles rational isomorphism
        let r0 = ring_3x3(fq, fq.from_i64(2));
        let r1 = ring_3x3(fq, fq.one());
        assert!(!is_isomorphic(&r0, &r1).unwrap());
        // but a 4-dimensional one is unsupported (unless the data coincide)
        let sum = a.direct_sum(&a);
        assert!(is_isomorphic(&sum, &sum).unwrap());
        let mut g = Vec::new();
        let mut first = true;
        for v in q.vertices() {
            let n = sum.dim(v);
            let mut mat = Matrix::identity(fq, n);
            if n == 2 && first {
                // shear one vertex only, so the arrow maps genuinely change
                mat.set(0, 1, fq.one());
                first = false;
            }
            g.push(mat);
        }
        let moved = sum.base_change(&g).unwrap();
        assert!(matches!(
            is_isomorphic(&sum, &moved),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn multiplicity_bruteforce_counts() {
        let q = GridQuiver::grid_2d(2, 2).unwrap();
        let f = FieldSpec::Prime(5);
        let i = interval_rep(&q, &Staircase::new(1, vec![(1, 2)]).unwrap(), f).unwrap();
        let j = interval_rep(&q, &Staircase::new(2, vec![(1, 2)]).unwrap(), f).unwrap();
        assert_eq!(multiplicity_bruteforce(&i, &i.direct_sum(&j)).unwrap(), 1);
        assert_eq!(multiplicity_bruteforce(&j, &i.direct_sum(&j)).unwrap(), 1);
        let triple = i.direct_sum(&i).direct_sum(&i);
        assert_eq!(multiplicity_bruteforce(&i, &triple).unwrap(), 3);
        assert_eq!(multiplicity_bruteforce(&j, &triple).unwrap(), 0);
        let zero = Rep::zero(q.clone(), f);
        assert_eq!(multiplicity_bruteforce(&i, &zero).unwrap(), 0);
    }
}
