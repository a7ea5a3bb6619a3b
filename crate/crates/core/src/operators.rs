//! The windowed Fourier-multiplier operators and their restrictions.
//!
//! For a window `psi` and a multiplier `phi` on the same group, the operator
//! family comes in two flavors:
//!
//! - `T`:  `f -> P_psi Phi P_{phi^c} Phi C f`, i.e.
//!   `(T f)(x) = psi(x) * sum_eta phi(eta) f^(eta) e(x.eta)`,
//! - `S`:  the symmetrized variant `P_psi Phi P_{phi^c} Phi P_{conj(psi^c)} C`,
//!   Hermitian whenever `phi` is real.
//!
//! Each operator admits three equivalent composition chains (moving the
//! reflection through the product); all three are built and cross-checked in
//! tests, and the first is the canonical evaluation path.
//!
//! Restricting `T` with window `S(x)` to functions supported on `S` gives the
//! `|S| x |S|` matrix with entries `phi^(s_j - s_i)` — the compression of the
//! full chain to the rows and columns of `S`.

use num_complex::Complex64;

use crate::dissociation::SetMask;
use crate::error::{Error, Result};
use crate::fourier::{conjugate, dft, pointwise, reflect, same_group, FuncC};
use crate::group::Element;
use crate::linalg::{rank_of_rows, EighResult, MatC, DEFAULT_RANK_TOL};

/// Dense materialization cap for full operator matrices.
pub const DEFAULT_MATRIX_CAP: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    T,
    S,
}

/// The three equivalent composition chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chain {
    /// `P_psi Phi P_{phi^c} Phi C` (resp. with `P_{conj(psi^c)}` before `C`).
    ReflectFirst,
    /// `C P_{psi^c} Phi P_phi Phi` (resp. with trailing `P_{conj psi}`).
    ReflectLast,
    /// `P_psi Phi C P_phi Phi` (resp. with trailing `P_{conj psi}`).
    ReflectMiddle,
}

/// A `T` or `S` operator given by its window and multiplier functions.
#[derive(Debug, Clone)]
pub struct OperatorSpec {
    kind: OpKind,
    phi: FuncC,
    psi: FuncC,
}

impl OperatorSpec {
    pub fn t(phi: FuncC, psi: FuncC) -> Result<Self> {
        same_group(&phi, &psi)?;
        Ok(Self {
            kind: OpKind::T,
            phi,
            psi,
        })
    }

    pub fn s(phi: FuncC, psi: FuncC) -> Result<Self> {
        same_group(&phi, &psi)?;
        Ok(Self {
            kind: OpKind::S,
            phi,
            psi,
        })
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn phi(&self) -> &FuncC {
        &self.phi
    }

    pub fn psi(&self) -> &FuncC {
        &self.psi
    }

    /// Apply through the canonical chain.
    pub fn apply(&self, f: &FuncC) -> Result<FuncC> {
        self.apply_via(Chain::ReflectFirst, f)
    }

    /// Apply through a chosen composition chain.
    pub fn apply_via(&self, chain: Chain, f: &FuncC) -> Result<FuncC> {
        same_group(&self.phi, f)?;
        match (self.kind, chain) {
            (OpKind::T, Chain::ReflectFirst) => {
                let g = dft(&reflect(f));
                let g = pointwise(&reflect(&self.phi), &g)?;
                pointwise(&self.psi, &dft(&g))
            }
            (OpKind::T, Chain::ReflectLast) => {
                let g = pointwise(&self.phi, &dft(f))?;
                let g = pointwise(&reflect(&self.psi), &dft(&g))?;
                Ok(reflect(&g))
            }
            (OpKind::T, Chain::ReflectMiddle) => {
                let g = pointwise(&self.phi, &dft(f))?;
                pointwise(&self.psi, &dft(&reflect(&g)))
            }
            (OpKind::S, Chain::ReflectFirst) => {
                let g = pointwise(&conjugate(&reflect(&self.psi)), &reflect(f))?;
                let g = pointwise(&reflect(&self.phi), &dft(&g))?;
                pointwise(&self.psi, &dft(&g))
            }
            (OpKind::S, Chain::ReflectLast) => {
                let g = pointwise(&conjugate(&self.psi), f)?;
                let g = pointwise(&self.phi, &dft(&g))?;
                let g = pointwise(&reflect(&self.psi), &dft(&g))?;
                Ok(reflect(&g))
            }
            (OpKind::S, Chain::ReflectMiddle) => {
                let g = pointwise(&conjugate(&self.psi), f)?;
                let g = pointwise(&self.phi, &dft(&g))?;
                pointwise(&self.psi, &dft(&reflect(&g)))
            }
        }
    }

    /// Apply the adjoint operator. For `T` this is the chain
    /// `C Phi P_{conj phi} Phi P_{conj psi}`; for `S` it equals the `S`
    /// operator with conjugated multiplier.
    pub fn apply_adjoint(&self, f: &FuncC) -> Result<FuncC> {
        match self.kind {
            OpKind::T => {
                let g = pointwise(&conjugate(&self.psi), f)?;
                let g = pointwise(&conjugate(&self.phi), &dft(&g))?;
                Ok(reflect(&dft(&g)))
            }
            OpKind::S => {
                let conj_op = OperatorSpec::s(conjugate(&self.phi), self.psi.clone())?;
                conj_op.apply(f)
            }
        }
    }

    /// Dense `N x N` matrix whose column `a` is the operator applied to
    /// `delta_a`. Subject to the materialization cap.
    pub fn full_matrix(&self) -> Result<MatC> {
        self.full_matrix_with_cap(DEFAULT_MATRIX_CAP)
    }

    pub fn full_matrix_with_cap(&self, cap: usize) -> Result<MatC> {
        self.matrix_via(Chain::ReflectFirst, cap)
    }

    pub fn matrix_via(&self, chain: Chain, cap: usize) -> Result<MatC> {
        let group = self.phi.group().clone();
        matrix_of(&group, cap, |f| self.apply_via(chain, f))
    }
}

/// Materialize any linear operator on functions as a dense matrix by
/// applying it to the delta basis.
pub fn matrix_of(
    group: &crate::group::GroupSpec,
    cap: usize,
    mut apply: impl FnMut(&FuncC) -> Result<FuncC>,
) -> Result<MatC> {
    let n = group.order();
    if n > cap {
        return Err(Error::MatrixCap { n, cap });
    }
    let mut m = MatC::zeros(n);
    for a in group.elements() {
        let col = apply(&group.delta(a))?;
        m.set_column(a.0, col.values());
    }
    Ok(m)
}

/// The multiplier map `(M_phi f)(x) = phi(x) f^(x)`.
pub fn multiplier(phi: &FuncC, f: &FuncC) -> Result<FuncC> {
    pointwise(phi, &dft(f))
}

/// The restriction of `T` with window `S(x)` and multiplier `phi` to the
/// functions supported on `S`: the `|S| x |S|` matrix with entries
/// `phi^(s_j - s_i)`, elements of `S` in ascending canonical order.
#[derive(Debug, Clone)]
pub struct RestrictedOperator {
    support: SetMask,
    elements: Vec<Element>,
    phi: FuncC,
    matrix: MatC,
}

impl RestrictedOperator {
    pub fn new(support: &SetMask, phi: &FuncC) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySet);
        }
        if support.group() != phi.group() {
            return Err(Error::GroupMismatch(
                support.group().to_string(),
                phi.group().to_string(),
            ));
        }
        let group = support.group().clone();
        let elements = support.elements();
        let phi_hat = dft(phi);
        let matrix = MatC::from_fn(elements.len(), |i, j| {
            phi_hat.at(group.sub(elements[j], elements[i]))
        });
        Ok(Self {
            support: support.clone(),
            elements,
            phi: phi.clone(),
            matrix,
        })
    }

    pub fn support(&self) -> &SetMask {
        &self.support
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn phi(&self) -> &FuncC {
        &self.phi
    }

    pub fn matrix(&self) -> &MatC {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.is_hermitian(tol)
    }

    pub fn eigh(&self) -> Result<EighResult> {
        crate::linalg::eigh(&self.matrix)
    }

    /// Embed a coefficient vector over the support back into a function on
    /// the whole group.
    pub fn embed(&self, coeffs: &[Complex64]) -> Result<FuncC> {
        if coeffs.len() != self.elements.len() {
            return Err(Error::DimensionMismatch(
                coeffs.len(),
                self.elements.len(),
            ));
        }
        let mut f = FuncC::zeros(self.support.group().clone(), crate::fourier::Side::Time);
        for (e, &c) in self.elements.iter().zip(coeffs) {
            f.set(*e, c);
        }
        Ok(f)
    }

    /// Restrict a function to coefficients over the support.
    pub fn compress(&self, f: &FuncC) -> Result<Vec<Complex64>> {
        if f.group() != self.support.group() {
            return Err(Error::GroupMismatch(
                f.group().to_string(),
                self.support.group().to_string(),
            ));
        }
        Ok(self.elements.iter().map(|&e| f.at(e)).collect())
    }
}

/// Subspace families attached to a support set `S` and a window `psi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceKind {
    /// `L(S)`: functions supported on `S`.
    Supported,
    /// `L(S-bar)`: functions supported off `S`.
    SupportedComplement,
    /// `L*(S)`: functions `psi(x) a(x)` with `supp a^ <= S`.
    Modulated,
    /// `L*(S-bar)`.
    ModulatedComplement,
}

#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub kind: SubspaceKind,
    pub mask: SetMask,
    pub basis: Vec<FuncC>,
}

impl SubspaceBasis {
    /// Delta-function basis of `L(S)`.
    pub fn supported(mask: &SetMask) -> Self {
        let group = mask.group().clone();
        let basis = mask.elements().iter().map(|&e| group.delta(e)).collect();
        Self {
            kind: SubspaceKind::Supported,
            mask: mask.clone(),
            basis,
        }
    }

    pub fn supported_complement(mask: &SetMask) -> Self {
        let mut out = Self::supported(&mask.complement());
        out.kind = SubspaceKind::SupportedComplement;
        out
    }

    /// Generator family of `L*(S)`: the multiplier map applied to the delta
    /// basis of `L(S)`, i.e. `g_s(x) = psi(x) e(-s.x)`.
    pub fn modulated(psi: &FuncC, mask: &SetMask) -> Result<Self> {
        if psi.group() != mask.group() {
            return Err(Error::GroupMismatch(
                psi.group().to_string(),
                mask.group().to_string(),
            ));
        }
        let group = mask.group().clone();
        let basis = mask
            .elements()
            .iter()
            .map(|&s| {
                let character = group.character(group.neg(s));
                pointwise(psi, &character)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind: SubspaceKind::Modulated,
            mask: mask.clone(),
            basis,
        })
    }

    pub fn modulated_complement(psi: &FuncC, mask: &SetMask) -> Result<Self> {
        let mut out = Self::modulated(psi, &mask.complement())?;
        out.kind = SubspaceKind::ModulatedComplement;
        Ok(out)
    }

    /// Rank of the generator family at the default support tolerance.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Complex64>> = self
            .basis
            .iter()
            .map(|f| f.values().to_vec())
            .collect();
        rank_of_rows(&rows, DEFAULT_RANK_TOL)
    }
}

/// Generator family of `L*(S)` with its computed rank. Over `Z_p` the rank
/// is `min{|S|, |supp psi|}`.
pub fn dual_restricted_basis(psi: &FuncC, mask: &SetMask) -> Result<(SubspaceBasis, usize)> {
    if mask.is_empty() {
        return Err(Error::EmptySet);
    }
    let basis = SubspaceBasis::modulated(psi, mask)?;
    let rank = basis.rank();
    Ok((basis, rank))
}
