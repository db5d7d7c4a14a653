//! The standard symplectic space `(F_p^{2n}, ω)`, its Lagrangians, oriented
//! Lagrangians, the symplectic group and its action, and the Cayley transform.
//!
//! Coordinates are `(e_1, …, e_n, f_1, …, f_n)` with Gram matrix
//! `J = [[0, I], [-I, 0]]`, so `ω(e_i, f_j) = δ_ij`.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::check_prime;
use crate::error::{Error, Result};
use crate::fp::{FpMatrix, FpScalar, FpVector};

/// Number of generator steps in a seeded random walk on `Sp(V)`.
pub const RANDOM_WALK_STEPS: usize = 64;

/// Human-readable description of the sampler, echoed into reports.
pub const SAMPLER_DESCRIPTION: &str =
    "ChaCha8Rng::seed_from_u64(seed); each element is the product of 64 uniformly drawn generators";

/// Largest group enumerated by [`sp_elements`] in `EnumerateSmall` mode.
pub const ENUMERATION_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymplecticSpace {
    pub p: u32,
    pub n: usize,
}

impl SymplecticSpace {
    pub fn new(p: u32, n: usize) -> Result<Self> {
        check_prime(p)?;
        if n == 0 {
            return Err(Error::Unsupported("n must be positive".into()));
        }
        Ok(SymplecticSpace { p, n })
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// The Gram matrix `[[0, I], [-I, 0]]`.
    pub fn gram(&self) -> FpMatrix {
        let n = self.n;
        let mut j = FpMatrix::zeros(self.p, 2 * n, 2 * n);
        for i in 0..n {
            j.set(i, n + i, 1);
            j.set(n + i, i, self.p - 1);
        }
        j
    }

    /// `ω(u, v) = uᵀ J v` as an integer in `0..p`.
    pub fn omega(&self, u: &[u32], v: &[u32]) -> u32 {
        let n = self.n;
        let p = self.p as u64;
        let mut s = 0u64;
        for i in 0..n {
            s += u[i] as u64 * v[n + i] as u64;
            s += (p - u[n + i] as u64 % p) * v[i] as u64;
        }
        (s % p) as u32
    }

    /// Number of Lagrangians, `∏_{i=1..n} (p^i + 1)`.
    pub fn lagrangian_count(&self) -> u64 {
        (1..=self.n as u32)
            .map(|i| (self.p as u64).pow(i) + 1)
            .product()
    }

    /// `|Sp(2n, F_p)| = p^{n²} ∏_{i=1..n} (p^{2i} - 1)`.
    pub fn group_order(&self) -> u64 {
        let p = self.p as u64;
        p.pow((self.n * self.n) as u32)
            * (1..=self.n as u32).map(|i| p.pow(2 * i) - 1).product::<u64>()
    }

    fn check_vec(&self, v: &[u32]) -> Result<()> {
        if v.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.dim()),
                got: v.len().to_string(),
            })
        }
    }
}

/// `ω(u, v)` with length checking.
pub fn omega(space: &SymplecticSpace, u: &[u32], v: &[u32]) -> Result<FpScalar> {
    space.check_vec(u)?;
    space.check_vec(v)?;
    Ok(FpScalar {
        p: space.p,
        value: space.omega(u, v),
    })
}

/// A Lagrangian subspace stored by its RREF basis (`n × 2n`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lagrangian {
    pub space: SymplecticSpace,
    pub basis: FpMatrix,
}

impl Lagrangian {
    /// Canonicalizes the span of `rows`; fails unless it is Lagrangian.
    pub fn from_span(space: SymplecticSpace, rows: &[Vec<i64>]) -> Result<Self> {
        let m = FpMatrix::from_rows(space.p, rows)?;
        if m.cols != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} columns", space.dim()),
                got: m.cols.to_string(),
            });
        }
        Self::from_matrix(space, &m)
    }

    pub(crate) fn from_matrix(space: SymplecticSpace, m: &FpMatrix) -> Result<Self> {
        let basis = m.row_space_basis();
        if basis.rows != space.n {
            return Err(Error::Unsupported(format!(
                "span has dimension {}, expected {}",
                basis.rows, space.n
            )));
        }
        let l = Lagrangian { space, basis };
        if !l.is_isotropic() {
            return Err(Error::Unsupported("span is not isotropic".into()));
        }
        Ok(l)
    }

    pub fn is_isotropic(&self) -> bool {
        (0..self.basis.rows).all(|i| {
            (0..self.basis.rows).all(|j| self.space.omega(self.basis.row(i), self.basis.row(j)) == 0)
        })
    }

    pub fn rows(&self) -> Vec<FpVector> {
        self.basis.to_rows()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.rref().pivots
    }

    /// Coordinates not occupied by a pivot: these parametrize a complement.
    pub fn free_coords(&self) -> Vec<usize> {
        let piv = self.pivots();
        (0..self.space.dim()).filter(|c| !piv.contains(c)).collect()
    }

    /// `L + M = V`.
    pub fn is_transverse(&self, other: &Lagrangian) -> bool {
        let mut stacked = self.basis.clone();
        stacked.rows += other.basis.rows;
        stacked.entries.extend_from_slice(&other.basis.entries);
        stacked.rank() == self.space.dim()
    }

    /// Linear combination `Σ coeffs[i] · basis_i`.
    pub fn combine(&self, coeffs: &[u32]) -> FpVector {
        let p = self.space.p as u64;
        let mut out = vec![0u64; self.space.dim()];
        for (i, &c) in coeffs.iter().enumerate() {
            for (o, &b) in out.iter_mut().zip(self.basis.row(i)) {
                *o += c as u64 * b as u64;
            }
        }
        out.into_iter().map(|x| (x % p) as u32).collect()
    }

    /// All `p^n` vectors of the subspace.
    pub fn elements(&self) -> Vec<FpVector> {
        all_vectors(self.space.p, self.space.n)
            .iter()
            .map(|c| self.combine(c))
            .collect()
    }
}

/// All vectors of `F_p^len` in lexicographic order.
pub fn all_vectors(p: u32, len: usize) -> Vec<FpVector> {
    let total = (p as usize).pow(len as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0u32; len];
            for slot in v.iter_mut().rev() {
                *slot = (idx % p as usize) as u32;
                idx /= p as usize;
            }
            v
        })
        .collect()
}

/// `(L, o_L)` with `o_L = orient · (b_1 ∧ … ∧ b_n)` for the RREF rows `b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedLagrangian {
    pub lagrangian: Lagrangian,
    pub orient: u32,
}

impl OrientedLagrangian {
    pub fn new(lagrangian: Lagrangian, orient: i64) -> Result<Self> {
        let orient = orient.rem_euclid(lagrangian.space.p as i64) as u32;
        if orient == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(OrientedLagrangian { lagrangian, orient })
    }

    pub fn space(&self) -> SymplecticSpace {
        self.lagrangian.space
    }

    /// Same subspace, orientation multiplied by `c`.
    pub fn rescaled(&self, c: u32) -> Self {
        let p = self.space().p as u64;
        OrientedLagrangian {
            lagrangian: self.lagrangian.clone(),
            orient: (self.orient as u64 * c as u64 % p) as u32,
        }
    }
}

fn guard(space: &SymplecticSpace) -> Result<()> {
    if space.p > 11 || space.n > 2 {
        return Err(Error::SizeGuard(format!(
            "exhaustive Lagrangian enumeration needs p <= 11 and n <= 2 (got p = {}, n = {})",
            space.p, space.n
        )));
    }
    Ok(())
}

/// Every Lagrangian of `space`, sorted by RREF basis.
pub fn enumerate_lagrangians(space: &SymplecticSpace) -> Result<Vec<Lagrangian>> {
    guard(space)?;
    let (p, n, dim) = (space.p, space.n, space.dim());
    let mut out = Vec::new();
    for pivots in combinations(dim, n) {
        // free slots: (row, col) with col > pivot[row] and col not a pivot
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|r| {
                let pv = &pivots;
                (pv[r] + 1..dim)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        for fill in all_vectors(p, slots.len()) {
            let mut basis = FpMatrix::zeros(p, n, dim);
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(r, pc, 1);
            }
            for (&(r, c), &v) in slots.iter().zip(&fill) {
                basis.set(r, c, v);
            }
            let l = Lagrangian {
                space: *space,
                basis,
            };
            if l.is_isotropic() {
                out.push(l);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every oriented Lagrangian: each Lagrangian with each orientation `1..p`.
pub fn enumerate_oriented(space: &SymplecticSpace) -> Result<Vec<OrientedLagrangian>> {
    Ok(enumerate_lagrangians(space)?
        .into_iter()
        .flat_map(|l| {
            (1..space.p).map(move |c| OrientedLagrangian {
                lagrangian: l.clone(),
                orient: c,
            })
        })
        .collect())
}

/// `ω_∧(o_L, o_M) = c_L · c_M · det[ω(b_i, b'_j)]`.
pub fn wedge_pairing(l: &OrientedLagrangian, m: &OrientedLagrangian) -> Result<FpScalar> {
    let space = l.space();
    if space != m.space() {
        return Err(Error::Unsupported("oriented Lagrangians live in different spaces".into()));
    }
    let n = space.n;
    let mut gram = FpMatrix::zeros(space.p, n, n);
    for i in 0..n {
        for j in 0..n {
            gram.set(
                i,
                j,
                space.omega(l.lagrangian.basis.row(i), m.lagrangian.basis.row(j)),
            );
        }
    }
    let det = gram.det()?;
    Ok(det
        * FpScalar { p: space.p, value: l.orient }
        * FpScalar { p: space.p, value: m.orient })
}

/// The pairing `⋀^top L ⊗ ⋀^top M → k` induced by the top form
/// `ω^n/n!` on `⋀^{2n} V`: `c_L · c_M · Pf[ω(u_i, u_j)]` for
/// `u = (b_1, …, b_n, b'_1, …, b'_n)`. It equals
/// `(−1)^{n(n−1)/2} ·` [`wedge_pairing`].
pub fn top_form_pairing(l: &OrientedLagrangian, m: &OrientedLagrangian) -> Result<FpScalar> {
    let space = l.space();
    if space != m.space() {
        return Err(Error::Unsupported("oriented Lagrangians live in different spaces".into()));
    }
    let vs: Vec<&[u32]> = (0..space.n)
        .map(|i| l.lagrangian.basis.row(i))
        .chain((0..space.n).map(|i| m.lagrangian.basis.row(i)))
        .collect();
    let dim = vs.len();
    let mut gram = FpMatrix::zeros(space.p, dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            gram.set(i, j, space.omega(vs[i], vs[j]));
        }
    }
    Ok(gram
        .pfaffian()?
        * FpScalar { p: space.p, value: l.orient }
        * FpScalar { p: space.p, value: m.orient })
}

/// An element of `Sp(V)`; acts on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpElement {
    pub space: SymplecticSpace,
    pub matrix: FpMatrix,
}

impl SpElement {
    /// Validates `gᵀ J g = J`, reporting the first violated entry.
    pub fn check(space: SymplecticSpace, matrix: FpMatrix) -> Result<Self> {
        let dim = space.dim();
        if matrix.rows != dim || matrix.cols != dim || matrix.p != space.p {
            return Err(Error::DimensionMismatch {
                expected: format!("{dim}x{dim} over F_{}", space.p),
                got: format!("{}x{} over F_{}", matrix.rows, matrix.cols, matrix.p),
            });
        }
        let j = space.gram();
        let lhs = matrix.transpose().mul(&j)?.mul(&matrix)?;
        for r in 0..dim {
            for c in 0..dim {
                if lhs.get(r, c) != j.get(r, c) {
                    return Err(Error::NotSymplectic {
                        row: r,
                        col: c,
                        got: lhs.get(r, c),
                        expected: j.get(r, c),
                    });
                }
            }
        }
        Ok(SpElement { space, matrix })
    }

    pub fn from_rows(space: SymplecticSpace, rows: &[Vec<i64>]) -> Result<Self> {
        Self::check(space, FpMatrix::from_rows(space.p, rows)?)
    }

    pub fn identity(space: SymplecticSpace) -> Self {
        SpElement {
            space,
            matrix: FpMatrix::identity(space.p, space.dim()),
        }
    }

    pub fn compose(&self, other: &SpElement) -> SpElement {
        SpElement {
            space: self.space,
            matrix: self.matrix.mul(&other.matrix).expect("same space"),
        }
    }

    pub fn inverse(&self) -> SpElement {
        SpElement {
            space: self.space,
            matrix: self.matrix.inverse().expect("symplectic matrices are invertible"),
        }
    }

    pub fn apply(&self, v: &[u32]) -> FpVector {
        self.matrix.apply(v)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == FpMatrix::identity(self.space.p, self.space.dim())
    }

    /// `det(g - I)`.
    pub fn det_minus_identity(&self) -> FpScalar {
        let id = FpMatrix::identity(self.space.p, self.space.dim());
        self.matrix.sub(&id).expect("square").det().expect("square")
    }
}

/// The symplectic transvection `x ↦ x + ω(x, v)·v`.
pub fn transvection(space: &SymplecticSpace, v: &[u32]) -> SpElement {
    let dim = space.dim();
    let p = space.p as u64;
    let mut m = FpMatrix::zeros(space.p, dim, dim);
    for k in 0..dim {
        let mut e = vec![0u32; dim];
        e[k] = 1;
        let w = space.omega(&e, v) as u64;
        for r in 0..dim {
            let val = (e[r] as u64 + w * v[r] as u64) % p;
            m.set(r, k, val as u32);
        }
    }
    SpElement { space: *space, matrix: m }
}

/// Transvections along `e_i`, `f_i` and `e_i + e_j` (`i < j`); these generate `Sp(V)`.
pub fn generators(space: &SymplecticSpace) -> Vec<SpElement> {
    let (n, dim) = (space.n, space.dim());
    let unit = |i: usize| {
        let mut v = vec![0u32; dim];
        v[i] = 1;
        v
    };
    let mut dirs: Vec<FpVector> = Vec::new();
    for i in 0..n {
        dirs.push(unit(i));
        dirs.push(unit(n + i));
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = unit(i);
            v[j] = 1;
            dirs.push(v);
        }
    }
    dirs.iter().map(|v| transvection(space, v)).collect()
}

/// Deterministic pseudo-random elements: products of [`RANDOM_WALK_STEPS`]
/// uniformly chosen generators, driven by a seeded ChaCha8 stream.
pub fn random_elements(space: &SymplecticSpace, seed: u64, count: usize) -> Vec<SpElement> {
    let gens = generators(space);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut g = SpElement::identity(*space);
            for _ in 0..RANDOM_WALK_STEPS {
                g = g.compose(&gens[rng.gen_range(0..gens.len())]);
            }
            g
        })
        .collect()
}

/// The whole group, sorted by matrix entries.
pub fn enumerate_group(space: &SymplecticSpace) -> Result<Vec<SpElement>> {
    let order = space.group_order();
    if order > ENUMERATION_LIMIT {
        return Err(Error::SizeGuard(format!(
            "|Sp({}, F_{})| = {order} exceeds {ENUMERATION_LIMIT}",
            space.dim(),
            space.p
        )));
    }
    let mut out: Vec<SpElement> = if space.n == 1 {
        let p = space.p as i64;
        let mut v = Vec::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if (a * d - b * c).rem_euclid(p) == 1 {
                            v.push(SpElement {
                                space: *space,
                                matrix: FpMatrix::from_rows(space.p, &[vec![a, b], vec![c, d]])?,
                            });
                        }
                    }
                }
            }
        }
        v
    } else {
        let gens = generators(space);
        let start = SpElement::identity(*space);
        let mut seen: HashSet<FpMatrix> = HashSet::from([start.matrix.clone()]);
        let mut queue = VecDeque::from([start]);
        let mut all = Vec::new();
        while let Some(g) = queue.pop_front() {
            for s in &gens {
                let h = g.compose(s);
                if seen.insert(h.matrix.clone()) {
                    queue.push_back(h);
                }
            }
            all.push(g);
        }
        all
    };
    out.sort();
    Ok(out)
}

/// How [`sp_elements`] should produce group elements.
#[derive(Debug, Clone)]
pub enum SpMode {
    Check(FpMatrix),
    Generators,
    Random { seed: u64, count: usize },
    EnumerateSmall,
}

pub fn sp_elements(space: &SymplecticSpace, mode: SpMode) -> Result<Vec<SpElement>> {
    match mode {
        SpMode::Check(m) => Ok(vec![SpElement::check(*space, m)?]),
        SpMode::Generators => Ok(generators(space)),
        SpMode::Random { seed, count } => Ok(random_elements(space, seed, count)),
        SpMode::EnumerateSmall => enumerate_group(space),
    }
}

/// `g · L°`: the image subspace in RREF, orientation multiplied by the
/// determinant of `g|_L` in the two canonical bases.
pub fn act_on_olag(g: &SpElement, l: &OrientedLagrangian) -> OrientedLagrangian {
    let space = l.space();
    let n = space.n;
    let images: Vec<FpVector> = l.lagrangian.rows().iter().map(|b| g.apply(b)).collect();
    let img = FpMatrix {
        p: space.p,
        rows: n,
        cols: space.dim(),
        entries: images.concat(),
    };
    let basis = img.row_space_basis();
    let pivots = basis.rref().pivots;
    // images_i = Σ_j D_ij · basis_j, and basis_j has a 1 at pivot j, zeros at the other pivots
    let mut d = FpMatrix::zeros(space.p, n, n);
    for i in 0..n {
        for (j, &pc) in pivots.iter().enumerate() {
            d.set(i, j, images[i][pc]);
        }
    }
    let det = d.det().expect("square").value;
    OrientedLagrangian {
        lagrangian: Lagrangian { space, basis },
        orient: (l.orient as u64 * det as u64 % space.p as u64) as u32,
    }
}

/// `κ(g) = (g + I)(g - I)^{-1}`.
pub fn cayley(g: &SpElement) -> Result<FpMatrix> {
    let id = FpMatrix::identity(g.space.p, g.space.dim());
    let minus = g.matrix.sub(&id)?;
    let inv = minus.inverse().map_err(|_| Error::NonGeneric)?;
    g.matrix.add(&id)?.mul(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: u32, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(p, n).unwrap()
    }

    fn olag(space: SymplecticSpace, rows: &[Vec<i64>], c: i64) -> OrientedLagrangian {
        OrientedLagrangian::new(Lagrangian::from_span(space, rows).unwrap(), c).unwrap()
    }

    #[test]
    fn omega_examples() {
        let s = sp(3, 1);
        assert_eq!(omega(&s, &[1, 0], &[1, 0]).unwrap().value, 0);
        assert_eq!(omega(&s, &[1, 0], &[0, 1]).unwrap().value, 1);
        assert_eq!(omega(&s, &[0, 2], &[1, 0]).unwrap().value, 1);
        assert!(omega(&s, &[0, 2, 1], &[1, 0]).is_err());
    }

    #[test]
    fn lagrangian_enumeration() {
        let s = sp(3, 1);
        let lines: Vec<Vec<Vec<u32>>> = enumerate_lagrangians(&s)
            .unwrap()
            .iter()
            .map(Lagrangian::rows)
            .collect();
        assert_eq!(
            lines,
            vec![vec![vec![0, 1]], vec![vec![1, 0]], vec![vec![1, 1]], vec![vec![1, 2]]]
        );
        assert_eq!(enumerate_lagrangians(&sp(5, 1)).unwrap().len(), 6);
        assert_eq!(enumerate_lagrangians(&sp(3, 2)).unwrap().len(), 40);
        assert_eq!(enumerate_oriented(&sp(3, 1)).unwrap().len(), 8);
        assert_eq!(enumerate_oriented(&sp(5, 1)).unwrap().len(), 24);
        assert_eq!(enumerate_oriented(&sp(3, 2)).unwrap().len(), 80);
        assert!(matches!(
            enumerate_lagrangians(&sp(13, 1)),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn lagrangian_counts_match_product_formula() {
        for (p, n) in [(3, 1), (5, 1), (7, 1), (11, 1), (3, 2), (5, 2)] {
            let s = sp(p, n);
            let all = enumerate_lagrangians(&s).unwrap();
            assert_eq!(all.len() as u64, s.lagrangian_count());
            for l in &all {
                assert_eq!(l.basis.rank(), n);
                assert!(l.is_isotropic());
            }
        }
    }

    #[test]
    fn wedge_pairing_examples() {
        let s = sp(3, 1);
        let l = olag(s, &[vec![1, 0]], 1);
        let m = olag(s, &[vec![0, 1]], 1);
        assert_eq!(wedge_pairing(&l, &m).unwrap().value, 1);
        assert_eq!(wedge_pairing(&l, &l).unwrap().value, 0);
        assert_eq!(wedge_pairing(&l, &m.rescaled(2)).unwrap().value, 2);
    }

    #[test]
    fn wedge_vanishes_exactly_off_transversality() {
        for (p, n) in [(3, 1), (3, 2), (5, 1)] {
            let all = enumerate_oriented(&sp(p, n)).unwrap();
            for l in &all {
                for m in &all {
                    let w = wedge_pairing(l, m).unwrap();
                    assert_eq!(w.is_zero(), !l.lagrangian.is_transverse(&m.lagrangian));
                    let scaled = wedge_pairing(&l.rescaled(2), m).unwrap();
                    assert_eq!(scaled, w * FpScalar { p, value: 2 });
                }
            }
        }
    }

    #[test]
    fn top_form_pairing_differs_by_binomial_sign() {
        for (p, n) in [(3, 1), (3, 2), (5, 1)] {
            let all = enumerate_oriented(&sp(p, n)).unwrap();
            let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { p - 1 };
            for l in &all {
                for m in &all {
                    let top = top_form_pairing(l, m).unwrap();
                    let det = wedge_pairing(l, m).unwrap();
                    assert_eq!(top, det * FpScalar { p, value: sign });
                }
            }
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(enumerate_group(&sp(3, 1)).unwrap().len(), 24);
        assert_eq!(enumerate_group(&sp(5, 1)).unwrap().len(), 120);
        assert_eq!(sp(3, 2).group_order(), 51840);
        assert!(matches!(enumerate_group(&sp(5, 2)), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn generators_are_symplectic() {
        for (p, n) in [(3, 1), (5, 1), (3, 2), (5, 2)] {
            let s = sp(p, n);
            for g in generators(&s) {
                SpElement::check(s, g.matrix.clone()).unwrap();
            }
        }
    }

    #[test]
    fn check_rejects_with_entry() {
        let s = sp(3, 1);
        assert!(SpElement::check(s, FpMatrix::identity(3, 2)).is_ok());
        let bad = FpMatrix::from_rows(3, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            SpElement::check(s, bad),
            Err(Error::NotSymplectic {
                row: 0,
                col: 1,
                got: 2,
                expected: 1
            })
        );
    }

    #[test]
    fn random_walk_is_deterministic() {
        let s = sp(3, 2);
        let a = random_elements(&s, 7, 5);
        assert_eq!(a, random_elements(&s, 7, 5));
        assert_ne!(a, random_elements(&s, 8, 5));
        for g in &a {
            SpElement::check(s, g.matrix.clone()).unwrap();
        }
    }

    #[test]
    fn action_examples() {
        let s = sp(3, 1);
        let l = olag(s, &[vec![1, 0]], 1);
        assert_eq!(act_on_olag(&SpElement::identity(s), &l), l);
        let g = SpElement::from_rows(s, &[vec![0, 2], vec![1, 0]]).unwrap();
        assert_eq!(act_on_olag(&g, &l), olag(s, &[vec![0, 1]], 1));
    }

    #[test]
    fn action_is_a_group_action() {
        let s = sp(3, 1);
        let group = enumerate_group(&s).unwrap();
        let olags = enumerate_oriented(&s).unwrap();
        for g in &group {
            for h in &group {
                let gh = g.compose(h);
                for l in &olags {
                    assert_eq!(act_on_olag(&gh, l), act_on_olag(g, &act_on_olag(h, l)));
                }
            }
        }
        let s = sp(3, 2);
        let gs = random_elements(&s, 1, 6);
        let olags = enumerate_oriented(&s).unwrap();
        for w in gs.windows(2) {
            let gh = w[0].compose(&w[1]);
            for l in olags.iter().step_by(7) {
                assert_eq!(act_on_olag(&gh, l), act_on_olag(&w[0], &act_on_olag(&w[1], l)));
            }
        }
    }

    #[test]
    fn cayley_examples() {
        let s = sp(3, 1);
        let minus = SpElement::from_rows(s, &[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(cayley(&minus).unwrap(), FpMatrix::zeros(3, 2, 2));
        let g = SpElement::from_rows(s, &[vec![0, 2], vec![1, 0]]).unwrap();
        assert_eq!(
            cayley(&g).unwrap(),
            FpMatrix::from_rows(3, &[vec![0, 1], vec![2, 0]]).unwrap()
        );
        assert_eq!(cayley(&SpElement::identity(s)), Err(Error::NonGeneric));
    }

    fn cayley_form_is_symmetric(g: &SpElement) -> bool {
        let s = g.space;
        let k = cayley(g).unwrap();
        let vs = all_vectors(s.p, s.dim());
        vs.iter().all(|u| {
            vs.iter()
                .all(|v| s.omega(&k.apply(u), v) == s.omega(&k.apply(v), u))
        })
    }

    #[test]
    fn cayley_forms_are_symmetric() {
        let s = sp(3, 1);
        for g in enumerate_group(&s).unwrap() {
            if !g.det_minus_identity().is_zero() {
                assert!(cayley_form_is_symmetric(&g));
            }
        }
        let s = sp(3, 2);
        for g in random_elements(&s, 3, 20) {
            if !g.det_minus_identity().is_zero() {
                assert!(cayley_form_is_symmetric(&g));
            }
        }
    }
}
