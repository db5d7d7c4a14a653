//! The canonical system of intertwining kernels `K_{M°,L°}`.
//!
//! On transverse pairs the kernel is `A_{M°,L°} · K̃`, where `K̃` is the
//! pullback of `ψ` along the inverse of `Z → M\H/L`. Writing
//! `h = (m,0)·(0,z')·(l,0)` with `m ∈ M`, `l ∈ L` gives
//! `h = (m + l, z' + ½ω(m,l))`, so `K̃(v, z) = ψ(z − ½ω(m,l))` for the unique
//! splitting `v = m + l`. The constant is
//! `A = (G(ψ)/p)^n · σ((−1)^{n(n−1)/2} · ω_∧(o_L, o_M))`, where `ω_∧` is the
//! pairing induced by the top form `ω^n/n!` (see [`top_form_pairing`]).
//!
//! Non-transverse pairs are reached by factoring through the
//! lexicographically least Lagrangian `N` transverse to both, with
//! orientation 1: `K_{M°,L°} = K_{M°,N°} ∗ K_{N°,L°}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{gauss_sum, half, psi, sigma, CycNum, Rat};
use crate::error::{Error, Result};
use crate::heisenberg::{
    all_elements, convolve, element_index, h_inv, model_basis, mul, vector_index,
    CentralCharacter, EquivariantFunction, HElement, Witness,
};
use crate::operator::{CycMatrix, WeilOperator};
use crate::symplectic::{
    act_on_olag, enumerate_lagrangians, top_form_pairing, Lagrangian,
    OrientedLagrangian, SpElement, SymplecticSpace,
};

/// `K_{M°,L°}`: an intertwiner from the `L°` model to the `M°` model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub target: OrientedLagrangian,
    pub source: OrientedLagrangian,
    pub kernel: EquivariantFunction,
}

/// `A_{M°,L°}`.
pub fn normalization_a(m: &OrientedLagrangian, l: &OrientedLagrangian) -> Result<CycNum> {
    let space = l.space();
    let w = top_form_pairing(l, m)?;
    if w.is_zero() {
        return Err(Error::NotTransverse);
    }
    let n = space.n as u32;
    let sign: i64 = if (n * n.saturating_sub(1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let s = sigma(space.p, sign * w.value as i64)?;
    let g_over_p = gauss_sum(space.p).scale_rat(&Rat::new(1.into(), (space.p as i64).into()));
    Ok(g_over_p.pow(n).scale_int(s as i64))
}

/// The closed formula on a transverse pair.
pub fn kernel_transverse(m: &OrientedLagrangian, l: &OrientedLagrangian) -> Result<KernelEntry> {
    let a = normalization_a(m, l)?;
    let tilde = tilde_kernel(&m.lagrangian, &l.lagrangian)?;
    Ok(KernelEntry {
        target: m.clone(),
        source: l.clone(),
        kernel: tilde.scale(&a),
    })
}

/// `K̃_{M,L} = τ*ψ`, before normalization.
pub fn tilde_kernel(m: &Lagrangian, l: &Lagrangian) -> Result<EquivariantFunction> {
    if !m.is_transverse(l) {
        return Err(Error::NotTransverse);
    }
    let space = m.space;
    let p = space.p;
    // v ↦ ½ω(m, l) for the splitting v = m + l
    let mut twist = vec![0u32; (p as usize).pow(space.dim() as u32)];
    let ms = m.elements();
    let ls = l.elements();
    for mv in &ms {
        for lv in &ls {
            let v: Vec<u32> = mv.iter().zip(lv).map(|(a, b)| (a + b) % p).collect();
            let tw = half(p) as u64 * space.omega(mv, lv) as u64 % p as u64;
            twist[vector_index(p, &v)] = tw as u32;
        }
    }
    EquivariantFunction::from_fn(
        space,
        Some(m.clone()),
        Some(l.clone()),
        CentralCharacter::Psi,
        |h| psi(p, h.z as i64 - twist[vector_index(p, &h.v)] as i64),
    )
}

/// The unit for convolution on `C(L\H/L, ψ)`: `ψ(z)` on `Z·L`, zero elsewhere.
pub fn identity_kernel(l: &OrientedLagrangian) -> KernelEntry {
    let lag = &l.lagrangian;
    let space = lag.space;
    let members: std::collections::HashSet<Vec<u32>> = lag.elements().into_iter().collect();
    let kernel = EquivariantFunction::from_fn(
        space,
        Some(lag.clone()),
        Some(lag.clone()),
        CentralCharacter::Psi,
        |h| {
            if members.contains(&h.v) {
                psi(space.p, h.z as i64)
            } else {
                CycNum::zero(space.p)
            }
        },
    )
    .expect("the identity kernel is bi-equivariant");
    KernelEntry {
        target: l.clone(),
        source: l.clone(),
        kernel,
    }
}

/// `K_{M°,N°} ∗ K_{N°,L°}` for a chosen auxiliary `N°` transverse to both.
pub fn kernel_via(
    m: &OrientedLagrangian,
    n: &OrientedLagrangian,
    l: &OrientedLagrangian,
) -> Result<KernelEntry> {
    let left = kernel_transverse(m, n)?;
    let right = kernel_transverse(n, l)?;
    Ok(KernelEntry {
        target: m.clone(),
        source: l.clone(),
        kernel: convolve(&left.kernel, &right.kernel)?,
    })
}

/// Lexicographically least Lagrangian transverse to both arguments.
pub fn common_transverse(
    all: &[Lagrangian],
    m: &Lagrangian,
    l: &Lagrangian,
) -> Result<Lagrangian> {
    all.iter()
        .find(|n| n.is_transverse(m) && n.is_transverse(l))
        .cloned()
        .ok_or(Error::NoCommonTransverse)
}

/// `K_{M°,L°}` for any pair.
pub fn kernel_any(m: &OrientedLagrangian, l: &OrientedLagrangian) -> Result<KernelEntry> {
    if m.lagrangian.is_transverse(&l.lagrangian) {
        return kernel_transverse(m, l);
    }
    let all = enumerate_lagrangians(&m.space())?;
    kernel_any_with(&all, m, l)
}

fn kernel_any_with(
    all: &[Lagrangian],
    m: &OrientedLagrangian,
    l: &OrientedLagrangian,
) -> Result<KernelEntry> {
    if m.lagrangian.is_transverse(&l.lagrangian) {
        return kernel_transverse(m, l);
    }
    let n = common_transverse(all, &m.lagrangian, &l.lagrangian)?;
    kernel_via(m, &OrientedLagrangian { lagrangian: n, orient: 1 }, l)
}

/// `I[K]`: the matrix from the `L°` transversal basis to the `M°` one,
/// `T[s][t] = K(rep^M_s · (rep^L_t)^{-1})`.
pub fn operator_of_kernel(entry: &KernelEntry) -> WeilOperator {
    let space = entry.source.space();
    let out_basis = model_basis(&entry.target);
    let in_basis = model_basis(&entry.source);
    let mut m = CycMatrix::zeros(space.p, out_basis.len(), in_basis.len());
    for (s, rs) in out_basis.reps.iter().enumerate() {
        for (t, rt) in in_basis.reps.iter().enumerate() {
            let h = mul(&space, rs, &h_inv(&space, rt));
            m.set(s, t, entry.kernel.at(&h).clone());
        }
    }
    WeilOperator {
        source: Some(entry.source.clone()),
        target: Some(entry.target.clone()),
        matrix: m,
    }
}

/// The averaging morphism `F[f](h) = Σ_{m ∈ M} f((m,0)·h)` as a matrix.
pub fn averaging_f(m: &OrientedLagrangian, l: &OrientedLagrangian) -> Result<WeilOperator> {
    if !m.lagrangian.is_transverse(&l.lagrangian) {
        return Err(Error::NotTransverse);
    }
    let space = l.space();
    let out_basis = model_basis(m);
    let in_basis = model_basis(l);
    let mut mat = CycMatrix::zeros(space.p, out_basis.len(), in_basis.len());
    let members = m.lagrangian.elements();
    for (s, rs) in out_basis.reps.iter().enumerate() {
        for mv in &members {
            let h = mul(&space, &HElement::new(mv.clone(), 0), rs);
            let d = in_basis.decompose(&h);
            let cur = mat.get(s, d.rep).clone();
            mat.set(s, d.rep, &cur + &psi(space.p, d.z as i64));
        }
    }
    Ok(WeilOperator {
        source: Some(l.clone()),
        target: Some(m.clone()),
        matrix: mat,
    })
}

/// Result of an exact identity test, with the first failing point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    pub fn compare(lhs: &EquivariantFunction, rhs: &EquivariantFunction) -> Self {
        let witness = lhs.first_difference(rhs);
        CheckOutcome {
            passed: witness.is_none(),
            witness,
        }
    }
}

type MemoSlot = Arc<OnceLock<Result<Arc<KernelEntry>>>>;

/// Lazily materialized kernels for one symplectic space. Each pair is
/// computed at most once, even under concurrent access.
pub struct KernelSystem {
    space: SymplecticSpace,
    lagrangians: Vec<Lagrangian>,
    memo: Mutex<HashMap<(OrientedLagrangian, OrientedLagrangian), MemoSlot>>,
}

impl KernelSystem {
    pub fn new(space: SymplecticSpace) -> Result<Self> {
        Ok(KernelSystem {
            space,
            lagrangians: enumerate_lagrangians(&space)?,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    pub fn lagrangians(&self) -> &[Lagrangian] {
        &self.lagrangians
    }

    /// `K_{M°,L°}`.
    pub fn get(&self, m: &OrientedLagrangian, l: &OrientedLagrangian) -> Result<Arc<KernelEntry>> {
        let slot = {
            let mut memo = self.memo.lock().expect("memo lock poisoned");
            memo.entry((m.clone(), l.clone()))
                .or_insert_with(|| Arc::new(OnceLock::new()))
                .clone()
        };
        slot.get_or_init(|| kernel_any_with(&self.lagrangians, m, l).map(Arc::new))
            .clone()
    }

    pub fn materialized(&self) -> usize {
        self.memo.lock().expect("memo lock poisoned").len()
    }

    /// `K_{N°,M°} ∗ K_{M°,L°} = K_{N°,L°}`.
    pub fn multiplicativity_check(
        &self,
        n: &OrientedLagrangian,
        m: &OrientedLagrangian,
        l: &OrientedLagrangian,
    ) -> Result<CheckOutcome> {
        let lhs = convolve(&self.get(n, m)?.kernel, &self.get(m, l)?.kernel)?;
        Ok(CheckOutcome::compare(&lhs, &self.get(n, l)?.kernel))
    }

    /// `(K₄₃ ∗ K₃₂) ∗ K₂₁ = K₄₃ ∗ (K₃₂ ∗ K₂₁)`, both sides evaluated
    /// independently.
    pub fn associativity_c1_check(
        &self,
        l4: &OrientedLagrangian,
        l3: &OrientedLagrangian,
        l2: &OrientedLagrangian,
        l1: &OrientedLagrangian,
    ) -> Result<CheckOutcome> {
        let k43 = self.get(l4, l3)?;
        let k32 = self.get(l3, l2)?;
        let k21 = self.get(l2, l1)?;
        let left = convolve(&convolve(&k43.kernel, &k32.kernel)?, &k21.kernel)?;
        let right = convolve(&k43.kernel, &convolve(&k32.kernel, &k21.kernel)?)?;
        Ok(CheckOutcome::compare(&left, &right))
    }

    /// `K_{g·M°, g·L°}(g·v, z) = K_{M°,L°}(v, z)` for every `(v, z)`.
    pub fn sp_invariance_check(
        &self,
        g: &SpElement,
        m: &OrientedLagrangian,
        l: &OrientedLagrangian,
    ) -> Result<CheckOutcome> {
        let original = self.get(m, l)?;
        let moved = self.get(&act_on_olag(g, m), &act_on_olag(g, l))?;
        let pulled = pull_back(&moved.kernel, g, &original.kernel);
        Ok(CheckOutcome::compare(&pulled, &original.kernel))
    }

    /// The scalar by which `T_{(L, c·o), (L, o)}` acts.
    pub fn orientation_scalar(&self, l: &OrientedLagrangian, c: u32) -> Result<Option<CycNum>> {
        let entry = self.get(&l.rescaled(c), l)?;
        Ok(operator_of_kernel(&entry).matrix.as_scalar())
    }
}

/// `h ↦ K(g·v, z)`, labelled like `like`.
fn pull_back(
    moved: &EquivariantFunction,
    g: &SpElement,
    like: &EquivariantFunction,
) -> EquivariantFunction {
    let space = moved.space;
    let values = all_elements(&space)
        .iter()
        .map(|h| {
            let gh = HElement::new(g.apply(&h.v), h.z);
            moved.values[element_index(&space, &gh)].clone()
        })
        .collect();
    EquivariantFunction {
        values,
        ..like.clone()
    }
}
