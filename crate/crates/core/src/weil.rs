//! The canonical model of the Weil representation, built from the kernel
//! system, and the invariant kernel `K(g, v)`.
//!
//! Vectors of `H(V)` are horizontal sections `(f_M)` of the model bundle:
//! `f_M = T_{M°,L°} f_L` for every pair. A section is determined by its value
//! at the base point `L₀°`, so operators are written on the base transversal.
//! With `g` acting on `H` by `(v, z) ↦ (g·v, z)`,
//!
//! `(ρ(g) f)_{L₀°}(h) = f_{g⁻¹L₀°}(g⁻¹ h)`, which in the delta basis is
//! `ρ(g)[s][t] = K_{g⁻¹L₀°, L₀°}(g⁻¹·rep_s · rep_t⁻¹)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cyclotomic::{conjugate, half, psi, quarter, sigma, CycNum, Rat};
use crate::error::{Error, Result};
use crate::fp::{FpMatrix, FpVector};
use crate::heisenberg::{
    all_elements, convolve, h_inv, mul, pi_on_transversal, vector_index, CentralCharacter,
    EquivariantFunction, HElement, Transversal,
};
use crate::kernels::{operator_of_kernel, KernelSystem};
use crate::operator::{rank_of_rows, CycMatrix, WeilOperator};
use crate::report::CheckResult;
use crate::symplectic::{
    act_on_olag, all_vectors, cayley, enumerate_lagrangians, enumerate_oriented,
    OrientedLagrangian, SpElement, SymplecticSpace,
};

/// `L₀°`: the lexicographically least Lagrangian with orientation 1.
pub fn base_point(space: &SymplecticSpace) -> Result<OrientedLagrangian> {
    let first = enumerate_lagrangians(space)?.remove(0);
    OrientedLagrangian::new(first, 1)
}

/// `(v, z) ↦ (g·v, z)`.
pub fn act_on_h(g: &SpElement, h: &HElement) -> HElement {
    HElement::new(g.apply(&h.v), h.z)
}

/// `ρ(g)` on the transversal of `base`, by translate-then-intertwine.
pub fn rho(system: &KernelSystem, g: &SpElement, base: &OrientedLagrangian) -> Result<WeilOperator> {
    let space = system.space();
    let tr = Transversal::new(&base.lagrangian);
    let g_inv = g.inverse();
    let entry = system.get(&act_on_olag(&g_inv, base), base)?;
    let mut m = CycMatrix::zeros(space.p, tr.len(), tr.len());
    for (s, rs) in tr.reps.iter().enumerate() {
        let moved = act_on_h(&g_inv, rs);
        for (t, rt) in tr.reps.iter().enumerate() {
            let h = mul(&space, &moved, &h_inv(&space, rt));
            m.set(s, t, entry.kernel.at(&h).clone());
        }
    }
    Ok(WeilOperator {
        source: Some(base.clone()),
        target: Some(base.clone()),
        matrix: m,
    })
}

/// `ρ(g)` by intertwine-then-translate:
/// `ρ'(g)[s][t] = K_{L₀°, g·L₀°}(rep_s · (g·rep_t)⁻¹)`.
pub fn rho_intertwine_first(
    system: &KernelSystem,
    g: &SpElement,
    base: &OrientedLagrangian,
) -> Result<WeilOperator> {
    let space = system.space();
    let tr = Transversal::new(&base.lagrangian);
    let entry = system.get(base, &act_on_olag(g, base))?;
    let mut m = CycMatrix::zeros(space.p, tr.len(), tr.len());
    for (t, rt) in tr.reps.iter().enumerate() {
        let moved_inv = h_inv(&space, &act_on_h(g, rt));
        for (s, rs) in tr.reps.iter().enumerate() {
            let h = mul(&space, rs, &moved_inv);
            m.set(s, t, entry.kernel.at(&h).clone());
        }
    }
    Ok(WeilOperator {
        source: Some(base.clone()),
        target: Some(base.clone()),
        matrix: m,
    })
}

type RhoSlot = Arc<OnceLock<Result<Arc<WeilOperator>>>>;

/// The canonical model at one space: kernels, base point and a per-`g` memo
/// of `ρ(g)`.
pub struct WeilModel {
    system: KernelSystem,
    base: OrientedLagrangian,
    transversal: Transversal,
    memo: Mutex<HashMap<FpMatrix, RhoSlot>>,
}

impl WeilModel {
    pub fn new(space: SymplecticSpace) -> Result<Self> {
        Self::with_system(KernelSystem::new(space)?)
    }

    pub fn with_system(system: KernelSystem) -> Result<Self> {
        let base = base_point(&system.space())?;
        let transversal = Transversal::new(&base.lagrangian);
        Ok(WeilModel {
            system,
            base,
            transversal,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn space(&self) -> SymplecticSpace {
        self.system.space()
    }

    pub fn kernels(&self) -> &KernelSystem {
        &self.system
    }

    pub fn base(&self) -> &OrientedLagrangian {
        &self.base
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    /// `p^n`.
    pub fn dim(&self) -> usize {
        self.transversal.len()
    }

    /// Memoized [`rho`].
    pub fn rho(&self, g: &SpElement) -> Result<Arc<WeilOperator>> {
        let slot = {
            let mut memo = self.memo.lock().expect("memo lock poisoned");
            memo.entry(g.matrix.clone())
                .or_insert_with(|| Arc::new(OnceLock::new()))
                .clone()
        };
        slot.get_or_init(|| rho(&self.system, g, &self.base).map(Arc::new))
            .clone()
    }

    pub fn materialized(&self) -> usize {
        self.memo.lock().expect("memo lock poisoned").len()
    }

    /// `π_{L₀°}((v, 0))`.
    pub fn pi(&self, h: &HElement) -> CycMatrix {
        pi_on_transversal(&self.transversal, h)
    }

    pub fn trace_character(&self, g: &SpElement) -> Result<CycNum> {
        Ok(self.rho(g)?.matrix.trace())
    }

    /// `K(g, v) = p^{-n} · Tr(ρ(g) ∘ π((v,0)⁻¹))` for every `v`.
    pub fn invariant_kernel_trace(&self, g: &SpElement) -> Result<InvariantKernel> {
        let space = self.space();
        let r = self.rho(g)?;
        let norm = Rat::new(1.into(), (self.dim() as i64).into());
        let values = all_vectors(space.p, space.dim())
            .into_iter()
            .map(|v| {
                let inv = h_inv(&space, &HElement::new(v, 0));
                r.matrix.mul(&self.pi(&inv)).trace().scale_rat(&norm)
            })
            .collect();
        Ok(InvariantKernel {
            g: g.clone(),
            values,
        })
    }

    /// `Σ_v K(g, v) · π((v, 0))`.
    pub fn reconstruct(&self, k: &InvariantKernel) -> CycMatrix {
        let space = self.space();
        let mut acc = CycMatrix::zeros(space.p, self.dim(), self.dim());
        for (v, val) in all_vectors(space.p, space.dim()).into_iter().zip(&k.values) {
            if val.is_zero() {
                continue;
            }
            acc = acc.add(&self.pi(&HElement::new(v, 0)).scale(val));
        }
        acc
    }

    /// `ρ(g)ρ(h) = ρ(gh)` on each pair; the checks run in parallel.
    pub fn homomorphism_check(&self, pairs: &[(SpElement, SpElement)]) -> Result<Vec<CheckResult>> {
        pairs
            .par_iter()
            .enumerate()
            .map(|(i, (g, h))| {
                let lhs = self.rho(g)?.matrix.mul(&self.rho(h)?.matrix);
                let rhs = self.rho(&g.compose(h))?;
                let id = format!("pair-{i}");
                Ok(match lhs.first_difference(&rhs.matrix) {
                    None => CheckResult::pass(id),
                    Some((r, c)) => CheckResult::fail(
                        id,
                        json!({
                            "g": g.matrix,
                            "h": h.matrix,
                            "entry": [r, c],
                            "product": lhs.get(r, c),
                            "rho_gh": rhs.matrix.get(r, c),
                        }),
                    ),
                })
            })
            .collect()
    }

    /// Compares `ρ(w)`, `w = [[0, −B⁻¹], [B, 0]]`, with `[ψ(B(x, y))]`.
    pub fn dft_check(&self, b: &FpMatrix) -> Result<DftReport> {
        let space = self.space();
        let w = dft_element(&space, b)?;
        let m = self.rho(&w)?.matrix.clone();
        let free = self.transversal_labels();
        let gamma = m.get(0, 0).clone();
        let mut signs = Vec::new();
        for sign in [1i64, -1] {
            let ok = (0..m.rows).all(|s| {
                (0..m.cols).all(|t| {
                    let bxy = bilinear(b, &free[s], &free[t]) as i64;
                    *m.get(s, t) == &gamma * &psi(space.p, sign * bxy)
                })
            });
            if ok {
                signs.push(sign as i8);
            }
        }
        let norm = &gamma * &conjugate(&gamma);
        let target = CycNum::from_rat(space.p, &Rat::new(1.into(), (self.dim() as i64).into()));
        Ok(DftReport {
            b: b.clone(),
            gamma,
            gamma_norm: norm.clone(),
            matches_psi_b: signs.contains(&1),
            matches_psi_minus_b: signs.contains(&-1),
            modulus_ok: norm == target,
        })
    }

    /// The labels `x ∈ F_p^n` of the base transversal: the free coordinates
    /// of each representative.
    pub fn transversal_labels(&self) -> Vec<FpVector> {
        let free = self.base.lagrangian.free_coords();
        self.transversal
            .reps
            .iter()
            .map(|r| free.iter().map(|&c| r.v[c]).collect())
            .collect()
    }

    /// Sections `(f_M)` over all of `OLag` determined by `value` at the base.
    pub fn section(&self, value: &[CycNum]) -> Result<CanonicalVector> {
        if value.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim().to_string(),
                got: value.len().to_string(),
            });
        }
        Ok(CanonicalVector {
            base: self.base.clone(),
            value: value.to_vec(),
        })
    }
}

/// `w = [[0, −B⁻¹], [B, 0]]` for a symmetric nondegenerate `B`.
pub fn dft_element(space: &SymplecticSpace, b: &FpMatrix) -> Result<SpElement> {
    let n = space.n;
    if b.rows != n || b.cols != n || b.p != space.p || b.transpose() != *b {
        return Err(Error::BadBilinearForm);
    }
    let b_inv = b.inverse().map_err(|_| Error::BadBilinearForm)?;
    let mut m = FpMatrix::zeros(space.p, 2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            m.set(r, n + c, (space.p - b_inv.get(r, c)) % space.p);
            m.set(n + r, c, b.get(r, c));
        }
    }
    SpElement::check(*space, m)
}

fn bilinear(b: &FpMatrix, x: &[u32], y: &[u32]) -> u32 {
    let p = b.p as u64;
    let mut acc = 0u64;
    for (r, &xr) in x.iter().enumerate() {
        for (c, &yc) in y.iter().enumerate() {
            acc = (acc + xr as u64 * b.get(r, c) as u64 % p * yc as u64) % p;
        }
    }
    acc as u32
}

/// Outcome of [`WeilModel::dft_check`]. The DFT claim holds when
/// `matches_psi_b` and `modulus_ok` are both set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DftReport {
    pub b: FpMatrix,
    pub gamma: CycNum,
    pub gamma_norm: CycNum,
    pub matches_psi_b: bool,
    pub matches_psi_minus_b: bool,
    pub modulus_ok: bool,
}

impl DftReport {
    pub fn passed(&self) -> bool {
        self.matches_psi_b && self.modulus_ok
    }
}

/// A vector of `H(V)`, stored through its value at the base model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalVector {
    pub base: OrientedLagrangian,
    pub value: Vec<CycNum>,
}

impl CanonicalVector {
    /// `f_M = T_{M°, L₀°} f_{L₀°}`.
    pub fn component(&self, system: &KernelSystem, m: &OrientedLagrangian) -> Result<Vec<CycNum>> {
        let t = operator_of_kernel(&*system.get(m, &self.base)?).matrix;
        Ok(apply(&t, &self.value))
    }

    /// `T_{M°,L°} f_L = f_M` for every ordered pair; returns the failures.
    pub fn horizontality_failures(
        &self,
        system: &KernelSystem,
    ) -> Result<Vec<(OrientedLagrangian, OrientedLagrangian)>> {
        let olags = enumerate_oriented(&system.space())?;
        let comps = olags
            .iter()
            .map(|m| self.component(system, m))
            .collect::<Result<Vec<_>>>()?;
        let mut bad = Vec::new();
        for (i, m) in olags.iter().enumerate() {
            for (j, l) in olags.iter().enumerate() {
                let t = operator_of_kernel(&*system.get(m, l)?).matrix;
                if apply(&t, &comps[j]) != comps[i] {
                    bad.push((m.clone(), l.clone()));
                }
            }
        }
        Ok(bad)
    }
}

fn apply(m: &CycMatrix, x: &[CycNum]) -> Vec<CycNum> {
    (0..m.rows)
        .map(|r| {
            m.row(r)
                .iter()
                .zip(x)
                .fold(CycNum::zero(m.p), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        &acc + &(a * b)
                    }
                })
        })
        .collect()
}

/// Rank and solution dimension of the horizontality system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizontalitySystem {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub dimension: usize,
}

/// Solves `f_M − T_{M°,L°} f_L = 0` over all ordered pairs, with one block of
/// `p^n` unknowns per oriented Lagrangian, by exact elimination.
///
/// Column blocks are ordered with the base point last and the rows through
/// the base point come first, so every later row reduces onto the base block
/// without fill-in.
pub fn horizontality_system(system: &KernelSystem) -> Result<HorizontalitySystem> {
    let space = system.space();
    let base = base_point(&space)?;
    let mut olags: Vec<OrientedLagrangian> = enumerate_oriented(&space)?
        .into_iter()
        .filter(|l| *l != base)
        .collect();
    olags.push(base.clone());
    let b = (space.p as usize).pow(space.n as u32);
    let cols = olags.len() * b;
    let base_idx = olags.len() - 1;

    let mut order: Vec<(usize, usize)> = (0..base_idx).map(|i| (i, base_idx)).collect();
    for i in 0..olags.len() {
        for j in 0..olags.len() {
            if j != base_idx || i == base_idx {
                order.push((i, j));
            }
        }
    }
    let rows = order.iter().flat_map(|&(i, j)| {
        let t = operator_of_kernel(&system.get(&olags[i], &olags[j]).expect("kernel")).matrix;
        (0..b).map(move |r| {
            let mut row = vec![CycNum::zero(space.p); cols];
            for c in 0..b {
                let idx = j * b + c;
                row[idx] = &row[idx] - t.get(r, c);
            }
            let idx = i * b + r;
            row[idx] = &row[idx] + &CycNum::one(space.p);
            row
        })
    });
    // materialize every kernel first so failures surface as errors
    for &(i, j) in &order {
        system.get(&olags[i], &olags[j])?;
    }
    let rank = rank_of_rows(cols, rows);
    Ok(HorizontalitySystem {
        unknowns: cols,
        equations: order.len() * b,
        rank,
        dimension: cols - rank,
    })
}

/// `K(g, ·)` as a function on `V`, indexed like [`all_vectors`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantKernel {
    pub g: SpElement,
    pub values: Vec<CycNum>,
}

impl InvariantKernel {
    pub fn at(&self, v: &[u32]) -> &CycNum {
        &self.values[vector_index(self.g.space.p, v)]
    }

    /// The `ψ⁻¹`-equivariant function `(v, z) ↦ ψ(−z) K(g, v)` on `H`.
    pub fn lift(&self) -> Result<EquivariantFunction> {
        lift_to_heisenberg(&self.g.space, &self.values)
    }
}

/// `K(g, v) = p^{-n} σ((−1)^n det(g−I)) ψ(¼ ω(κ(g)v, v))`.
pub fn invariant_kernel_closed(g: &SpElement, v: &[u32]) -> Result<CycNum> {
    let space = g.space;
    let det = g.det_minus_identity();
    if det.is_zero() {
        return Err(Error::NonGeneric);
    }
    let k = cayley(g)?;
    let sign = if space.n.is_multiple_of(2) { 1 } else { -1 };
    let s = sigma(space.p, sign * det.value as i64)?;
    let q = quarter(space.p) as u64 * space.omega(&k.apply(v), v) as u64 % space.p as u64;
    let dim = (space.p as i64).pow(space.n as u32);
    Ok(psi(space.p, q as i64).scale_rat(&Rat::new((s as i64).into(), dim.into())))
}

/// `σ((−1)^n det(g − I))` on the generic locus.
pub fn trace_prediction(g: &SpElement) -> Result<i8> {
    let det = g.det_minus_identity();
    if det.is_zero() {
        return Err(Error::NonGeneric);
    }
    let sign = if g.space.n.is_multiple_of(2) { 1 } else { -1 };
    sigma(g.space.p, sign * det.value as i64)
}

/// `(F₁ ∗ F₂)(v) = Σ_{v₁+v₂=v} F₁(v₁) F₂(v₂) ψ(½ ω(v₁, v₂))`.
pub fn twisted_convolve(space: &SymplecticSpace, f1: &[CycNum], f2: &[CycNum]) -> Vec<CycNum> {
    let p = space.p;
    let vs = all_vectors(p, space.dim());
    let h = half(p) as u64;
    vs.iter()
        .map(|v| {
            vs.iter().fold(CycNum::zero(p), |acc, v1| {
                let a = &f1[vector_index(p, v1)];
                if a.is_zero() {
                    return acc;
                }
                let v2: FpVector = v.iter().zip(v1).map(|(x, y)| (x + p - y) % p).collect();
                let b = &f2[vector_index(p, &v2)];
                if b.is_zero() {
                    return acc;
                }
                let z = h * space.omega(v1, &v2) as u64 % p as u64;
                &acc + &(a * b).mul_zeta(z as i64)
            })
        })
        .collect()
}

/// `(v, z) ↦ ψ(−z) F(v)`.
pub fn lift_to_heisenberg(space: &SymplecticSpace, f: &[CycNum]) -> Result<EquivariantFunction> {
    let p = space.p;
    EquivariantFunction::from_fn(*space, None, None, CentralCharacter::PsiInverse, |h| {
        f[vector_index(p, &h.v)].mul_zeta(-(h.z as i64))
    })
}

/// Twisted convolution computed through the Heisenberg descent convolution
/// of the lifted functions, restricted to `z = 0`.
pub fn twisted_convolve_via_heisenberg(
    space: &SymplecticSpace,
    f1: &[CycNum],
    f2: &[CycNum],
) -> Result<Vec<CycNum>> {
    let c = convolve(&lift_to_heisenberg(space, f1)?, &lift_to_heisenberg(space, f2)?)?;
    Ok(all_vectors(space.p, space.dim())
        .into_iter()
        .map(|v| c.at(&HElement::new(v, 0)).clone())
        .collect())
}

/// Every element of `H`, for callers that tabulate functions.
pub fn heisenberg_elements(space: &SymplecticSpace) -> Vec<HElement> {
    all_elements(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::enumerate_group;

    fn space(p: u32, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(p, n).unwrap()
    }

    fn g(p: u32, rows: &[Vec<i64>]) -> SpElement {
        SpElement::from_rows(space(p, rows.len() / 2), rows).unwrap()
    }

    #[test]
    fn identity_and_dimension() {
        let model = WeilModel::new(space(3, 1)).unwrap();
        let r = model.rho(&SpElement::identity(model.space())).unwrap();
        assert_eq!(r.matrix, CycMatrix::identity(3, 3));
        assert_eq!(model.dim(), 3);
    }

    #[test]
    fn homomorphism_on_sp2_f3() {
        let model = WeilModel::new(space(3, 1)).unwrap();
        let group = enumerate_group(&model.space()).unwrap();
        let pairs: Vec<_> = group
            .iter()
            .flat_map(|a| group.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        let res = model.homomorphism_check(&pairs).unwrap();
        assert_eq!(res.len(), 576);
        assert!(res.iter().all(|c| c.passed), "{:?}", res.iter().find(|c| !c.passed));
        assert_eq!(model.materialized(), 24);
    }

    #[test]
    fn factorizations_agree() {
        let model = WeilModel::new(space(3, 1)).unwrap();
        for x in enumerate_group(&model.space()).unwrap() {
            let a = rho_intertwine_first(model.kernels(), &x, model.base()).unwrap();
            assert_eq!(a.matrix, model.rho(&x).unwrap().matrix);
        }
    }

    #[test]
    fn trace_examples() {
        let model = WeilModel::new(space(3, 1)).unwrap();
        let w = g(3, &[vec![0, 2], vec![1, 0]]);
        assert_eq!(model.trace_character(&w).unwrap(), CycNum::one(3));
        assert_eq!(trace_prediction(&w).unwrap(), 1);
        let minus = g(3, &[vec![2, 0], vec![0, 2]]);
        assert_eq!(model.trace_character(&minus).unwrap(), CycNum::from_int(3, -1));
        assert_eq!(trace_prediction(&minus).unwrap(), -1);
        let id = SpElement::identity(model.space());
        assert_eq!(model.trace_character(&id).unwrap(), CycNum::from_int(3, 3));
    }

    #[test]
    fn closed_kernel_examples() {
        let w = g(3, &[vec![0, 2], vec![1, 0]]);
        let third = Rat::new(1.into(), 3.into());
        assert_eq!(
            invariant_kernel_closed(&w, &[1, 0]).unwrap(),
            psi(3, 1).scale_rat(&third)
        );
        assert_eq!(
            invariant_kernel_closed(&w, &[0, 0]).unwrap(),
            CycNum::from_rat(3, &third)
        );
        let unipotent = g(3, &[vec![1, 1], vec![0, 1]]);
        assert!(matches!(
            invariant_kernel_closed(&unipotent, &[0, 0]),
            Err(Error::NonGeneric)
        ));
    }

    #[test]
    fn identity_kernel_is_delta() {
        let model = WeilModel::new(space(3, 1)).unwrap();
        let k = model
            .invariant_kernel_trace(&SpElement::identity(model.space()))
            .unwrap();
        assert_eq!(k.values[0], CycNum::one(3));
        assert!(k.values[1..].iter().all(CycNum::is_zero));
    }

    #[test]
    fn twisted_convolution_paths_agree() {
        let s = space(3, 1);
        let f1: Vec<CycNum> = (0..9).map(|i| CycNum::from_int_coeffs(3, &[i, 1 - i])).collect();
        let f2: Vec<CycNum> = (0..9).map(|i| psi(3, i * i).scale_int(i - 4)).collect();
        assert_eq!(
            twisted_convolve(&s, &f1, &f2),
            twisted_convolve_via_heisenberg(&s, &f1, &f2).unwrap()
        );
        let mut delta = vec![CycNum::zero(3); 9];
        delta[0] = CycNum::one(3);
        assert_eq!(twisted_convolve(&s, &f1, &delta), f1);
    }

    #[test]
    fn dft_element_is_symplectic() {
        let s = space(5, 1);
        let b = FpMatrix::from_rows(5, &[vec![2]]).unwrap();
        let w = dft_element(&s, &b).unwrap();
        assert_eq!(w.matrix.to_rows(), vec![vec![0, 2], vec![2, 0]]);
        let asym = FpMatrix::from_rows(3, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(dft_element(&space(3, 2), &asym).is_err());
    }

    #[test]
    fn horizontal_sections_at_3_1() {
        let model = WeilModel::new(space(3, 1)).unwrap();
        let sys = horizontality_system(model.kernels()).unwrap();
        assert_eq!((sys.unknowns, sys.dimension), (24, 3));
        let v = model
            .section(&[CycNum::one(3), psi(3, 1), CycNum::from_int(3, -2)])
            .unwrap();
        assert!(v.horizontality_failures(model.kernels()).unwrap().is_empty());
    }
}
