//! The Heisenberg group `H = V × F_p` with
//! `(v, z)·(v', z') = (v + v', z + z' + ½ω(v, v'))`, equivariant functions
//! on it, descent convolution, and the oriented-Lagrangian models.
//!
//! Every `h = (v, z)` has a dense index `index(v)·p + z`, where `index(v)`
//! reads `v` as a base-`p` numeral with the first coordinate most significant.
//! Function tables are stored in that order.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{half, psi, CycNum};
use crate::error::{Error, Result};
use crate::fp::FpVector;
use crate::operator::{rank_of_rows, CycMatrix, WeilOperator};
use crate::symplectic::{all_vectors, Lagrangian, OrientedLagrangian, SymplecticSpace};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HElement {
    pub v: FpVector,
    pub z: u32,
}

impl HElement {
    pub fn new(v: FpVector, z: u32) -> Self {
        HElement { v, z }
    }

    pub fn identity(space: &SymplecticSpace) -> Self {
        HElement {
            v: vec![0; space.dim()],
            z: 0,
        }
    }

    pub fn central(space: &SymplecticSpace, z: u32) -> Self {
        HElement {
            v: vec![0; space.dim()],
            z: z % space.p,
        }
    }
}

/// `a · b`.
pub fn h_mul(space: &SymplecticSpace, a: &HElement, b: &HElement) -> Result<HElement> {
    for x in [a, b] {
        if x.v.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", space.dim()),
                got: x.v.len().to_string(),
            });
        }
    }
    Ok(mul(space, a, b))
}

pub(crate) fn mul(space: &SymplecticSpace, a: &HElement, b: &HElement) -> HElement {
    let p = space.p;
    let v = a.v.iter().zip(&b.v).map(|(x, y)| (x + y) % p).collect();
    let tw = half(p) as u64 * space.omega(&a.v, &b.v) as u64;
    let z = ((a.z as u64 + b.z as u64 + tw) % p as u64) as u32;
    HElement { v, z }
}

/// `(v, z)^{-1} = (-v, -z)`.
pub fn h_inv(space: &SymplecticSpace, a: &HElement) -> HElement {
    let p = space.p;
    HElement {
        v: a.v.iter().map(|x| (p - x) % p).collect(),
        z: (p - a.z) % p,
    }
}

pub fn vector_index(p: u32, v: &[u32]) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

pub fn element_index(space: &SymplecticSpace, h: &HElement) -> usize {
    vector_index(space.p, &h.v) * space.p as usize + h.z as usize
}

/// All `p^{2n+1}` elements in index order.
pub fn all_elements(space: &SymplecticSpace) -> Vec<HElement> {
    all_vectors(space.p, space.dim())
        .into_iter()
        .flat_map(|v| (0..space.p).map(move |z| HElement { v: v.clone(), z }))
        .collect()
}

pub fn group_size(space: &SymplecticSpace) -> usize {
    (space.p as usize).pow(space.dim() as u32 + 1)
}

/// The central character a function transforms by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CentralCharacter {
    /// `f((0,z)·h) = ψ(z) f(h)`
    Psi,
    /// `f((0,z)·h) = ψ(-z) f(h)`
    PsiInverse,
}

impl CentralCharacter {
    fn exponent(self, z: u32) -> i64 {
        match self {
            CentralCharacter::Psi => z as i64,
            CentralCharacter::PsiInverse => -(z as i64),
        }
    }
}

/// A function on `H` with prescribed central character, left-invariant
/// under `left` and right-invariant under `right` when those are present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantFunction {
    pub space: SymplecticSpace,
    pub left: Option<Lagrangian>,
    pub right: Option<Lagrangian>,
    pub character: CentralCharacter,
    /// Dense table in element-index order.
    pub values: Vec<CycNum>,
}

/// First point at which two tables differ, with both values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub point: HElement,
    pub left: CycNum,
    pub right: CycNum,
}

impl EquivariantFunction {
    /// Tabulates `f` and checks every equivariance condition.
    pub fn from_fn<F>(
        space: SymplecticSpace,
        left: Option<Lagrangian>,
        right: Option<Lagrangian>,
        character: CentralCharacter,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&HElement) -> CycNum,
    {
        let values = all_elements(&space).iter().map(f).collect();
        let out = EquivariantFunction {
            space,
            left,
            right,
            character,
            values,
        };
        out.verify()?;
        Ok(out)
    }

    pub(crate) fn from_values_unchecked(
        space: SymplecticSpace,
        left: Option<Lagrangian>,
        right: Option<Lagrangian>,
        character: CentralCharacter,
        values: Vec<CycNum>,
    ) -> Self {
        EquivariantFunction {
            space,
            left,
            right,
            character,
            values,
        }
    }

    pub fn p(&self) -> u32 {
        self.space.p
    }

    pub fn at(&self, h: &HElement) -> &CycNum {
        &self.values[element_index(&self.space, h)]
    }

    /// Checks the central character and the Lagrangian invariances on
    /// generators of the respective subgroups.
    pub fn verify(&self) -> Result<()> {
        let s = &self.space;
        let zeta = self.character.exponent(1);
        let elems = all_elements(s);
        let bad = |what: &str, h: &HElement| {
            Err(Error::IncompatibleEquivariance(format!(
                "{what} fails at v = {:?}, z = {}",
                h.v, h.z
            )))
        };
        for h in &elems {
            let shifted = mul(s, &HElement::central(s, 1), h);
            if *self.at(&shifted) != self.at(h).mul_zeta(zeta) {
                return bad("central equivariance", h);
            }
            if let Some(m) = &self.left {
                for b in m.rows() {
                    if self.at(&mul(s, &HElement::new(b, 0), h)) != self.at(h) {
                        return bad("left invariance", h);
                    }
                }
            }
            if let Some(l) = &self.right {
                for b in l.rows() {
                    if self.at(&mul(s, h, &HElement::new(b, 0))) != self.at(h) {
                        return bad("right invariance", h);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn first_difference(&self, other: &EquivariantFunction) -> Option<Witness> {
        let elems = all_elements(&self.space);
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| a != b)
            .map(|i| Witness {
                point: elems[i].clone(),
                left: self.values[i].clone(),
                right: other.values[i].clone(),
            })
    }

    pub fn scale(&self, c: &CycNum) -> EquivariantFunction {
        EquivariantFunction {
            values: self.values.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    /// Number of points where the function is nonzero.
    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|x| !x.is_zero()).count()
    }
}

/// Representatives `(w, 0)` of the cosets `h·(Z·M)` (equivalently `(Z·M)·h`):
/// `w` runs over vectors supported on the free coordinates of `M`, or over
/// all of `V` when there is no Lagrangian.
fn coset_reps(space: &SymplecticSpace, m: Option<&Lagrangian>) -> Vec<FpVector> {
    match m {
        None => all_vectors(space.p, space.dim()),
        Some(m) => {
            let free = m.free_coords();
            all_vectors(space.p, free.len())
                .into_iter()
                .map(|c| {
                    let mut w = vec![0u32; space.dim()];
                    for (&i, &x) in free.iter().zip(&c) {
                        w[i] = x;
                    }
                    w
                })
                .collect()
        }
    }
}

/// Descent convolution `K₂ ∗ K₁ = m_!(K₂ ⊠_{Z·M} K₁)`, evaluated as a sum
/// over a transversal of `H/(Z·M)`:
/// `(K₂ ∗ K₁)(h) = Σ_w K₂((w,0)) · K₁((w,0)^{-1} h)`.
pub fn convolve(k2: &EquivariantFunction, k1: &EquivariantFunction) -> Result<EquivariantFunction> {
    check_composable(k2, k1)?;
    let s = k2.space;
    let reps = coset_reps(&s, k2.right.as_ref());
    let elems = all_elements(&s);
    let left_factors: Vec<(HElement, &CycNum)> = reps
        .into_iter()
        .map(|w| {
            let h1 = HElement::new(w, 0);
            let val = k2.at(&h1);
            (h_inv(&s, &h1), val)
        })
        .filter(|(_, val)| !val.is_zero())
        .collect();
    let values = elems
        .iter()
        .map(|h| {
            left_factors
                .iter()
                .fold(CycNum::zero(s.p), |acc, (inv1, val)| {
                    let b = k1.at(&mul(&s, inv1, h));
                    if b.is_zero() {
                        acc
                    } else {
                        &acc + &(*val * b)
                    }
                })
        })
        .collect();
    let out = EquivariantFunction::from_values_unchecked(
        s,
        k2.left.clone(),
        k1.right.clone(),
        k2.character,
        values,
    );
    debug_assert!(out.verify().is_ok());
    Ok(out)
}

/// The same convolution as [`convolve`], computed as
/// `|Z·M|^{-1} Σ_{h₁ ∈ H} K₂(h₁) K₁(h₁^{-1} h)`.
pub fn convolve_full_sum(
    k2: &EquivariantFunction,
    k1: &EquivariantFunction,
) -> Result<EquivariantFunction> {
    check_composable(k2, k1)?;
    let s = k2.space;
    let elems = all_elements(&s);
    let sub_order = match &k2.right {
        Some(_) => (s.p as i64).pow(s.n as u32 + 1),
        None => s.p as i64,
    };
    let norm = crate::cyclotomic::Rat::new(1.into(), sub_order.into());
    let values = elems
        .iter()
        .map(|h| {
            elems
                .iter()
                .fold(CycNum::zero(s.p), |acc, h1| {
                    let a = k2.at(h1);
                    if a.is_zero() {
                        return acc;
                    }
                    let b = k1.at(&mul(&s, &h_inv(&s, h1), h));
                    &acc + &(a * b)
                })
                .scale_rat(&norm)
        })
        .collect();
    Ok(EquivariantFunction::from_values_unchecked(
        s,
        k2.left.clone(),
        k1.right.clone(),
        k2.character,
        values,
    ))
}

fn check_composable(k2: &EquivariantFunction, k1: &EquivariantFunction) -> Result<()> {
    if k2.space != k1.space {
        return Err(Error::IncompatibleEquivariance("different spaces".into()));
    }
    if k2.character != k1.character {
        return Err(Error::IncompatibleEquivariance("different central characters".into()));
    }
    if k2.right != k1.left {
        return Err(Error::IncompatibleEquivariance(
            "right Lagrangian of the first factor differs from left Lagrangian of the second"
                .into(),
        ));
    }
    Ok(())
}

/// Coset representatives for `(Z·L)\H`: `(w, 0)` with `w` supported on the
/// free coordinates of `L`'s RREF basis, in lexicographic order of those
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transversal {
    pub lagrangian: Lagrangian,
    pub reps: Vec<HElement>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

/// `h = (0, z)·(l, 0)·reps[rep]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub z: u32,
    pub l: FpVector,
    pub rep: usize,
}

impl Transversal {
    pub fn new(l: &Lagrangian) -> Self {
        let space = l.space;
        let free = l.free_coords();
        let pivots = l.pivots();
        let reps = coset_reps(&space, Some(l))
            .into_iter()
            .map(|w| HElement::new(w, 0))
            .collect();
        Transversal {
            lagrangian: l.clone(),
            reps,
            pivots,
            free,
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Splits `h` as `(0, z')·(l, 0)·(w, 0)`; then `z' = z - ½ω(l, w)`.
    pub fn decompose(&self, h: &HElement) -> Decomposition {
        let space = self.lagrangian.space;
        let p = space.p;
        let coeffs: Vec<u32> = self.pivots.iter().map(|&c| h.v[c]).collect();
        let l = self.lagrangian.combine(&coeffs);
        let w: Vec<u32> = h.v.iter().zip(&l).map(|(a, b)| (a + p - b) % p).collect();
        let rep = self
            .free
            .iter()
            .fold(0usize, |acc, &c| acc * p as usize + w[c] as usize);
        let tw = half(p) as u64 * space.omega(&l, &w) as u64 % p as u64;
        let z = ((h.z as u64 + p as u64 - tw) % p as u64) as u32;
        Decomposition { z, l, rep }
    }
}

/// The transversal basis of `H_{L°} = C(L\H, ψ)`.
pub fn model_basis(l: &OrientedLagrangian) -> Transversal {
    Transversal::new(&l.lagrangian)
}

/// Matrix of `π_{L°}(h)`, right translation, in the delta basis of the
/// transversal: entry `(s, t)` is `ψ(z')` when `rep_s · h = (0,z')(l,0) rep_t`.
pub fn pi_matrix(l: &OrientedLagrangian, h: &HElement) -> WeilOperator {
    let tr = model_basis(l);
    WeilOperator {
        source: Some(l.clone()),
        target: Some(l.clone()),
        matrix: pi_on_transversal(&tr, h),
    }
}

pub(crate) fn pi_on_transversal(tr: &Transversal, h: &HElement) -> CycMatrix {
    let space = tr.lagrangian.space;
    let n = tr.len();
    let mut m = CycMatrix::zeros(space.p, n, n);
    for (s, rep) in tr.reps.iter().enumerate() {
        let d = tr.decompose(&mul(&space, rep, h));
        m.set(s, d.rep, psi(space.p, d.z as i64));
    }
    m
}

/// Maximum transversal size for [`commutant_dimension`].
pub const COMMUTANT_LIMIT: usize = 32;

/// `dim {X : X π(h) = π(h) X for all h}`, from the exact rank of the linear
/// constraints imposed by the generators `(e_i, 0)`, `(f_i, 0)` of `H`.
pub fn commutant_dimension(l: &OrientedLagrangian) -> Result<usize> {
    let tr = model_basis(l);
    let n = tr.len();
    if n > COMMUTANT_LIMIT {
        return Err(Error::SizeGuard(format!(
            "commutant needs a model of dimension <= {COMMUTANT_LIMIT}, got {n}"
        )));
    }
    let space = l.space();
    let p = space.p;
    let unknowns = n * n;
    let mut rows = Vec::new();
    for k in 0..space.dim() {
        let mut v = vec![0u32; space.dim()];
        v[k] = 1;
        let pi = pi_on_transversal(&tr, &HElement::new(v, 0));
        // (Xπ - πX)[s][t] = Σ_k X[s][k] π[k][t] - Σ_k π[s][k] X[k][t]
        for s in 0..n {
            for t in 0..n {
                let mut row = vec![CycNum::zero(p); unknowns];
                for j in 0..n {
                    let a = pi.get(j, t);
                    if !a.is_zero() {
                        row[s * n + j] = &row[s * n + j] + a;
                    }
                    let b = pi.get(s, j);
                    if !b.is_zero() {
                        row[j * n + t] = &row[j * n + t] - b;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    Ok(unknowns - rank_of_rows(unknowns, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::enumerate_oriented;

    fn sp(p: u32, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(p, n).unwrap()
    }

    fn olag(space: SymplecticSpace, rows: &[Vec<i64>]) -> OrientedLagrangian {
        OrientedLagrangian::new(Lagrangian::from_span(space, rows).unwrap(), 1).unwrap()
    }

    #[test]
    fn group_law_examples() {
        let s = sp(3, 1);
        let a = HElement::new(vec![1, 0], 0);
        let b = HElement::new(vec![0, 1], 0);
        assert_eq!(h_mul(&s, &a, &b).unwrap(), HElement::new(vec![1, 1], 2));
        for h in all_elements(&s) {
            assert_eq!(mul(&s, &h, &h_inv(&s, &h)), HElement::identity(&s));
            let c = HElement::central(&s, 1);
            assert_eq!(mul(&s, &c, &h), mul(&s, &h, &c));
        }
        assert!(h_mul(&s, &a, &HElement::new(vec![0, 1, 1], 0)).is_err());
    }

    #[test]
    fn group_axioms_exhaustive_p3() {
        let s = sp(3, 1);
        let all = all_elements(&s);
        for a in &all {
            for b in &all {
                let ab = mul(&s, a, b);
                for c in &all {
                    assert_eq!(mul(&s, &ab, c), mul(&s, a, &mul(&s, b, c)));
                }
            }
        }
    }

    #[test]
    fn transversal_examples() {
        let s = sp(3, 1);
        let tr = model_basis(&olag(s, &[vec![1, 0]]));
        let reps: Vec<HElement> = tr.reps.clone();
        assert_eq!(
            reps,
            vec![
                HElement::new(vec![0, 0], 0),
                HElement::new(vec![0, 1], 0),
                HElement::new(vec![0, 2], 0)
            ]
        );
        let s2 = sp(3, 2);
        let l2 = crate::symplectic::enumerate_oriented(&s2).unwrap().remove(0);
        assert_eq!(model_basis(&l2).len(), 9);
    }

    #[test]
    fn decomposition_is_unique_and_exhaustive() {
        let s = sp(3, 1);
        for l in enumerate_oriented(&s).unwrap().iter().step_by(2) {
            let tr = model_basis(l);
            let mut seen = std::collections::HashSet::new();
            for h in all_elements(&s) {
                let d = tr.decompose(&h);
                let rebuilt = mul(
                    &s,
                    &mul(&s, &HElement::central(&s, d.z), &HElement::new(d.l.clone(), 0)),
                    &tr.reps[d.rep],
                );
                assert_eq!(rebuilt, h);
                assert!(seen.insert((d.z, d.l, d.rep)));
            }
            assert_eq!(seen.len(), 27);
        }
    }

    #[test]
    fn pi_matrix_examples() {
        let s = sp(3, 1);
        let l = olag(s, &[vec![1, 0]]);
        let shift = pi_matrix(&l, &HElement::new(vec![0, 1], 0)).matrix;
        for sidx in 0..3 {
            for t in 0..3 {
                let expected = if t == (sidx + 1) % 3 { CycNum::one(3) } else { CycNum::zero(3) };
                assert_eq!(*shift.get(sidx, t), expected);
            }
        }
        let diag = pi_matrix(&l, &HElement::new(vec![1, 0], 0)).matrix;
        let mut expected = CycMatrix::zeros(3, 3, 3);
        expected.set(0, 0, psi(3, 0));
        expected.set(1, 1, psi(3, 2));
        expected.set(2, 2, psi(3, 1));
        assert_eq!(diag, expected);
        let central = pi_matrix(&l, &HElement::central(&s, 1)).matrix;
        assert_eq!(central, CycMatrix::scalar(3, 3, &psi(3, 1)));
    }

    #[test]
    fn pi_is_a_homomorphism_p3() {
        let s = sp(3, 1);
        let all = all_elements(&s);
        for l in enumerate_oriented(&s).unwrap().iter().step_by(2) {
            let mats: Vec<CycMatrix> = all.iter().map(|h| pi_matrix(l, h).matrix).collect();
            for (i, a) in all.iter().enumerate() {
                for (j, b) in all.iter().enumerate() {
                    let ab = element_index(&s, &mul(&s, a, b));
                    assert_eq!(mats[i].mul(&mats[j]), mats[ab]);
                }
            }
        }
    }

    #[test]
    fn commutant_is_one_dimensional() {
        for (p, n) in [(3, 1), (5, 1)] {
            for l in enumerate_oriented(&sp(p, n)).unwrap().iter().step_by(p as usize - 1) {
                assert_eq!(commutant_dimension(l).unwrap(), 1);
            }
        }
    }

    fn random_table(s: &SymplecticSpace, seed: u64) -> Vec<CycNum> {
        // values on (v, 0), extended by the central character ψ
        let mut x = seed;
        all_vectors(s.p, s.dim())
            .into_iter()
            .flat_map(|_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let base = psi(s.p, (x >> 33) as i64).scale_int(((x >> 40) % 5) as i64 - 2);
                (0..s.p).map(move |z| base.mul_zeta(z as i64)).collect::<Vec<_>>()
            })
            .collect()
    }

    #[test]
    fn transversal_and_full_sum_agree() {
        let s = sp(3, 1);
        for seed in 0..4 {
            let raw = EquivariantFunction::from_values_unchecked(
                s,
                None,
                None,
                CentralCharacter::Psi,
                random_table(&s, seed),
            );
            let raw2 = EquivariantFunction::from_values_unchecked(
                s,
                None,
                None,
                CentralCharacter::Psi,
                random_table(&s, seed + 100),
            );
            raw.verify().unwrap();
            let a = convolve(&raw, &raw2).unwrap();
            let b = convolve_full_sum(&raw, &raw2).unwrap();
            assert_eq!(a, b);
            a.verify().unwrap();
        }
    }

    #[test]
    fn incompatible_convolution_is_rejected() {
        let s = sp(3, 1);
        let l = Lagrangian::from_span(s, &[vec![1, 0]]).unwrap();
        let f = EquivariantFunction::from_values_unchecked(
            s,
            None,
            Some(l),
            CentralCharacter::Psi,
            vec![CycNum::zero(3); 27],
        );
        let g = EquivariantFunction::from_values_unchecked(
            s,
            None,
            None,
            CentralCharacter::Psi,
            vec![CycNum::zero(3); 27],
        );
        assert!(matches!(
            convolve(&f, &g),
            Err(Error::IncompatibleEquivariance(_))
        ));
    }
}
