//! Tensor-product Hilbert-space algebra: layouts, states, operators, and the
//! elementary constructions (basis kets, ladder operators, level projectors,
//! operator embedding, partial trace) everything else is built from.
//!
//! The composite space is ordered (qubit 1, qubit 2, cavity) with row-major
//! basis indexing, so the basis ket |l1, l2, n⟩ sits at index
//! `l1·d2·dc + l2·dc + n`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QitError, Result};

/// Complex scalar used throughout.
pub type C64 = Complex64;

pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Number of levels in each qubit ladder.
pub const QUBIT_LEVELS: usize = 4;

/// Hermiticity / unit-norm tolerance for O(1) objects (states, density
/// matrices, dimensionless operators).
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-9;

/// Eigenvalue floor for positive semidefiniteness checks.
pub const PSD_TOL: f64 = -1e-9;

/// Ordered subsystem dimensions of the composite Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceLayout {
    dims: Vec<usize>,
}

impl SpaceLayout {
    /// General layout from ordered subsystem dimensions (each ≥ 2).
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(QitError::InvalidParameter(
                "layout needs at least one subsystem".into(),
            ));
        }
        if let Some((k, &d)) = dims.iter().enumerate().find(|(_, &d)| d < 2) {
            return Err(QitError::InvalidParameter(format!(
                "subsystem {k} has dimension {d}; every dimension must be at least 2"
            )));
        }
        Ok(Self { dims })
    }

    /// The canonical layout for the transfer protocol: two four-level qubits
    /// and a cavity truncated at `n_max` photons (subsystems 0, 1, 2).
    pub fn two_qubit_cavity(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(QitError::InvalidParameter(
                "cavity truncation n_max must be at least 1".into(),
            ));
        }
        Self::new(vec![QUBIT_LEVELS, QUBIT_LEVELS, n_max + 1])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dim_of(&self, subsystem: usize) -> Result<usize> {
        self.dims
            .get(subsystem)
            .copied()
            .ok_or(QitError::SubsystemOutOfRange {
                index: subsystem,
                count: self.dims.len(),
            })
    }

    /// True when the layout is (4-level qubit, 4-level qubit, cavity).
    pub fn is_two_qubit_cavity(&self) -> bool {
        self.dims.len() == 3 && self.dims[0] == QUBIT_LEVELS && self.dims[1] == QUBIT_LEVELS
    }

    /// Cavity dimension of the canonical layout.
    pub fn cavity_dim(&self) -> usize {
        *self.dims.last().expect("layout is never empty")
    }

    /// Row-major basis index of a label tuple.
    pub fn index_of(&self, labels: &[usize]) -> Result<usize> {
        if labels.len() != self.dims.len() {
            return Err(QitError::InvalidParameter(format!(
                "expected {} labels, got {}",
                self.dims.len(),
                labels.len()
            )));
        }
        let mut idx = 0;
        for (k, (&l, &d)) in labels.iter().zip(&self.dims).enumerate() {
            if l >= d {
                return Err(QitError::LabelOutOfRange {
                    subsystem: k,
                    label: l,
                    dim: d,
                });
            }
            idx = idx * d + l;
        }
        Ok(idx)
    }

    /// Label tuple of a row-major basis index.
    pub fn labels_of(&self, mut index: usize) -> Vec<usize> {
        debug_assert!(index < self.total_dim());
        let mut labels = vec![0; self.dims.len()];
        for (k, &d) in self.dims.iter().enumerate().rev() {
            labels[k] = index % d;
            index /= d;
        }
        labels
    }
}

/// Pure state over a [`SpaceLayout`].
#[derive(Debug, Clone)]
pub struct StateVector {
    layout: SpaceLayout,
    amps: DVector<C64>,
}

impl StateVector {
    /// Basis ket with a single unit amplitude at the given label tuple.
    pub fn basis_state(layout: &SpaceLayout, labels: &[usize]) -> Result<Self> {
        let idx = layout.index_of(labels)?;
        let mut amps = DVector::zeros(layout.total_dim());
        amps[idx] = ONE;
        Ok(Self {
            layout: layout.clone(),
            amps,
        })
    }

    /// Wraps an amplitude vector that is already normalized (within 1e-10).
    pub fn from_amplitudes(layout: &SpaceLayout, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            return Err(QitError::InvalidParameter(format!(
                "expected {} amplitudes, got {}",
                layout.total_dim(),
                amps.len()
            )));
        }
        let v = DVector::from_vec(amps);
        let norm = v.norm();
        if (norm - 1.0).abs() > HERMITICITY_TOL {
            return Err(QitError::NotNormalized { norm });
        }
        Ok(Self {
            layout: layout.clone(),
            amps: v,
        })
    }

    /// Normalizes an arbitrary nonzero amplitude vector.
    pub fn normalized(layout: &SpaceLayout, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            return Err(QitError::InvalidParameter(format!(
                "expected {} amplitudes, got {}",
                layout.total_dim(),
                amps.len()
            )));
        }
        let mut v = DVector::from_vec(amps);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(QitError::NotNormalized { norm });
        }
        v /= C64::new(norm, 0.0);
        Ok(Self {
            layout: layout.clone(),
            amps: v,
        })
    }

    /// Tensor product of per-subsystem amplitude vectors, normalized.
    pub fn product(layout: &SpaceLayout, factors: &[Vec<C64>]) -> Result<Self> {
        if factors.len() != layout.num_subsystems() {
            return Err(QitError::InvalidParameter(format!(
                "expected {} factors, got {}",
                layout.num_subsystems(),
                factors.len()
            )));
        }
        for (k, f) in factors.iter().enumerate() {
            if f.len() != layout.dims()[k] {
                return Err(QitError::DimensionMismatch {
                    subsystem: k,
                    got: f.len(),
                    expected: layout.dims()[k],
                });
            }
        }
        let mut acc = vec![ONE];
        for f in factors {
            let mut next = Vec::with_capacity(acc.len() * f.len());
            for &a in &acc {
                for &b in f {
                    next.push(a * b);
                }
            }
            acc = next;
        }
        Self::normalized(layout, acc)
    }

    /// Internal constructor without a norm check (propagation output may
    /// carry reported drift).
    pub(crate) fn from_raw(layout: SpaceLayout, amps: DVector<C64>) -> Self {
        Self { layout, amps }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitude(&self, labels: &[usize]) -> Result<C64> {
        Ok(self.amps[self.layout.index_of(labels)?])
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// ⟨self|other⟩ with conjugation on `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.layout != other.layout {
            return Err(QitError::LayoutMismatch(format!(
                "{:?} vs {:?}",
                self.layout.dims(),
                other.layout.dims()
            )));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Projector ψψ⁺ as a density matrix.
    pub fn outer(&self) -> DensityMatrix {
        let m = &self.amps * self.amps.adjoint();
        DensityMatrix {
            layout: self.layout.clone(),
            matrix: m,
        }
    }

    /// Per-basis-state populations |ψ_k|².
    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Marginal populations of one subsystem.
    pub fn subsystem_populations(&self, subsystem: usize) -> Result<Vec<f64>> {
        let d = self.layout.dim_of(subsystem)?;
        let mut pops = vec![0.0; d];
        for (k, a) in self.amps.iter().enumerate() {
            let labels = self.layout.labels_of(k);
            pops[labels[subsystem]] += a.norm_sqr();
        }
        Ok(pops)
    }

    /// Multiplies by a global phase e^{iθ}.
    pub fn with_global_phase(&self, theta: f64) -> StateVector {
        let phase = C64::new(0.0, theta).exp();
        Self {
            layout: self.layout.clone(),
            amps: &self.amps * phase,
        }
    }
}

/// Free-function form of [`StateVector::basis_state`].
pub fn basis_state(layout: &SpaceLayout, labels: &[usize]) -> Result<StateVector> {
    StateVector::basis_state(layout, labels)
}

/// ⟨a|b⟩ with conjugation on `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<C64> {
    a.inner(b)
}

/// Annihilation operator on a cavity truncated at `n_max` photons:
/// a|n⟩ = √n |n−1⟩, returned as an (n_max+1)×(n_max+1) matrix.
pub fn annihilation(n_max: usize) -> Result<DMatrix<C64>> {
    if n_max < 1 {
        return Err(QitError::InvalidParameter(
            "annihilation needs n_max >= 1; a single Fock level has no dynamics".into(),
        ));
    }
    let d = n_max + 1;
    let mut m = DMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(m)
}

/// Creation operator a⁺ on a truncated cavity.
pub fn creation(n_max: usize) -> Result<DMatrix<C64>> {
    Ok(annihilation(n_max)?.adjoint())
}

/// Qubit transition operator |i⟩⟨j| on the four-level ladder.
pub fn sigma(i: usize, j: usize) -> Result<DMatrix<C64>> {
    for (name, l) in [("i", i), ("j", j)] {
        if l >= QUBIT_LEVELS {
            return Err(QitError::InvalidParameter(format!(
                "sigma level {name}={l} outside the four-level ladder"
            )));
        }
    }
    let mut m = DMatrix::zeros(QUBIT_LEVELS, QUBIT_LEVELS);
    m[(i, j)] = ONE;
    Ok(m)
}

/// Dense operator tagged with its layout.
#[derive(Debug, Clone)]
pub struct Operator {
    layout: SpaceLayout,
    matrix: DMatrix<C64>,
    hermitian: bool,
}

impl Operator {
    pub fn new(layout: &SpaceLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(QitError::InvalidParameter(format!(
                "operator is {}x{}, layout dimension is {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self {
            layout: layout.clone(),
            matrix,
            hermitian: false,
        })
    }

    /// Constructs with an asserted Hermiticity check (relative to the largest
    /// entry, so it applies equally to O(1) and rad/s-scaled matrices).
    pub fn hermitian(layout: &SpaceLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let mut op = Self::new(layout, matrix)?;
        let dev = op.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(QitError::NotHermitian { deviation: dev });
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn identity(layout: &SpaceLayout) -> Self {
        Self {
            layout: layout.clone(),
            matrix: DMatrix::identity(layout.total_dim(), layout.total_dim()),
            hermitian: true,
        }
    }

    pub fn zero(layout: &SpaceLayout) -> Self {
        Self {
            layout: layout.clone(),
            matrix: DMatrix::zeros(layout.total_dim(), layout.total_dim()),
            hermitian: true,
        }
    }

    /// Lifts a d×d matrix acting on one subsystem into the composite space:
    /// I ⊗ … ⊗ local ⊗ … ⊗ I in layout order.
    pub fn embed(local: &DMatrix<C64>, subsystem: usize, layout: &SpaceLayout) -> Result<Self> {
        let d = layout.dim_of(subsystem)?;
        if local.nrows() != d || local.ncols() != d {
            return Err(QitError::DimensionMismatch {
                subsystem,
                got: local.nrows(),
                expected: d,
            });
        }
        let pre: usize = layout.dims()[..subsystem].iter().product();
        let post: usize = layout.dims()[subsystem + 1..].iter().product();
        let total = layout.total_dim();
        let mut m = DMatrix::zeros(total, total);
        for p in 0..pre {
            for a in 0..d {
                for b in 0..d {
                    let v = local[(a, b)];
                    if v == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let row_base = (p * d + a) * post;
                    let col_base = (p * d + b) * post;
                    for q in 0..post {
                        m[(row_base + q, col_base + q)] = v;
                    }
                }
            }
        }
        Self::new(layout, m)
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn adjoint(&self) -> Operator {
        Self {
            layout: self.layout.clone(),
            matrix: self.matrix.adjoint(),
            hermitian: self.hermitian,
        }
    }

    /// max |M − M⁺| / max(1, max |M|).
    pub fn hermiticity_deviation(&self) -> f64 {
        let scale = self.max_abs().max(1.0);
        let mut dev: f64 = 0.0;
        for i in 0..self.matrix.nrows() {
            for j in i..self.matrix.ncols() {
                dev = dev.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        dev / scale
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Induced one-norm (max column absolute sum); used for step-size bounds.
    pub fn one_norm(&self) -> f64 {
        let mut best: f64 = 0.0;
        for j in 0..self.matrix.ncols() {
            best = best.max(self.matrix.column(j).iter().map(|c| c.norm()).sum());
        }
        best
    }

    /// Applies to a state; the result carries whatever norm the operator
    /// produces.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if self.layout != psi.layout {
            return Err(QitError::LayoutMismatch(format!(
                "operator on {:?}, state on {:?}",
                self.layout.dims(),
                psi.layout.dims()
            )));
        }
        Ok(StateVector::from_raw(
            self.layout.clone(),
            &self.matrix * &psi.amps,
        ))
    }

    /// Panics on layout mismatch; combining operators from different layouts
    /// is a logic error.
    pub fn add(&self, other: &Operator) -> Operator {
        assert_eq!(self.layout, other.layout, "operator layouts differ");
        Self {
            layout: self.layout.clone(),
            matrix: &self.matrix + &other.matrix,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        assert_eq!(self.layout, other.layout, "operator layouts differ");
        Self {
            layout: self.layout.clone(),
            matrix: &self.matrix - &other.matrix,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn mul(&self, other: &Operator) -> Operator {
        assert_eq!(self.layout, other.layout, "operator layouts differ");
        Self {
            layout: self.layout.clone(),
            matrix: &self.matrix * &other.matrix,
            hermitian: false,
        }
    }

    pub fn scaled(&self, factor: C64) -> Operator {
        Self {
            layout: self.layout.clone(),
            matrix: &self.matrix * factor,
            hermitian: self.hermitian && factor.im == 0.0,
        }
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        self.mul(other).sub(&other.mul(self))
    }
}

/// Mixed state over a [`SpaceLayout`].
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    layout: SpaceLayout,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validated constructor: Hermitian within 1e-10, unit trace within 1e-9,
    /// eigenvalues above −1e-9.
    pub fn new(layout: &SpaceLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(QitError::InvalidParameter(format!(
                "density matrix is {}x{}, layout dimension is {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let rho = Self {
            layout: layout.clone(),
            matrix,
        };
        rho.validate(HERMITICITY_TOL, TRACE_TOL, PSD_TOL)?;
        Ok(rho)
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        psi.outer()
    }

    pub(crate) fn from_raw(layout: SpaceLayout, matrix: DMatrix<C64>) -> Self {
        Self { layout, matrix }
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diagonal().sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.matrix.nrows() {
            for j in i..self.matrix.ncols() {
                dev = dev.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        eig.eigenvalues.iter().fold(f64::INFINITY, |m, &e| m.min(e))
    }

    pub fn validate(&self, herm_tol: f64, trace_tol: f64, eig_floor: f64) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > herm_tol {
            return Err(QitError::InvariantViolated(format!(
                "density matrix Hermiticity deviation {dev:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
            return Err(QitError::InvariantViolated(format!(
                "density matrix trace {tr}"
            )));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < eig_floor {
            return Err(QitError::InvariantViolated(format!(
                "density matrix eigenvalue {min_eig:.3e} below {eig_floor:.1e}"
            )));
        }
        Ok(())
    }

    /// Reduced density matrix over the kept subsystems (ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(QitError::InvalidParameter(
                "partial trace needs a nonempty keep set".into(),
            ));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &k in &keep {
            if k >= self.layout.num_subsystems() {
                return Err(QitError::SubsystemOutOfRange {
                    index: k,
                    count: self.layout.num_subsystems(),
                });
            }
        }
        let kept_dims: Vec<usize> = keep.iter().map(|&k| self.layout.dims()[k]).collect();
        let reduced_layout = SpaceLayout::new(kept_dims)?;
        let traced: Vec<usize> = (0..self.layout.num_subsystems())
            .filter(|s| !keep.contains(s))
            .collect();

        let total = self.layout.total_dim();
        let rd = reduced_layout.total_dim();
        let mut out = DMatrix::<C64>::zeros(rd, rd);
        for row in 0..total {
            let rl = self.layout.labels_of(row);
            for col in 0..total {
                let cl = self.layout.labels_of(col);
                if traced.iter().any(|&s| rl[s] != cl[s]) {
                    continue;
                }
                let rk: Vec<usize> = keep.iter().map(|&s| rl[s]).collect();
                let ck: Vec<usize> = keep.iter().map(|&s| cl[s]).collect();
                let ri = reduced_layout.index_of(&rk)?;
                let ci = reduced_layout.index_of(&ck)?;
                out[(ri, ci)] += self.matrix[(row, col)];
            }
        }
        Ok(DensityMatrix {
            layout: reduced_layout,
            matrix: out,
        })
    }

    /// Diagonal populations.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|c| c.re).collect()
    }

    /// Marginal populations of one subsystem.
    pub fn subsystem_populations(&self, subsystem: usize) -> Result<Vec<f64>> {
        let d = self.layout.dim_of(subsystem)?;
        let mut pops = vec![0.0; d];
        for (k, c) in self.matrix.diagonal().iter().enumerate() {
            let labels = self.layout.labels_of(k);
            pops[labels[subsystem]] += c.re;
        }
        Ok(pops)
    }

    /// ⟨target|ρ|target⟩.
    pub fn expectation_in(&self, target: &StateVector) -> Result<f64> {
        if self.layout != *target.layout() {
            return Err(QitError::LayoutMismatch(format!(
                "density matrix on {:?}, target on {:?}",
                self.layout.dims(),
                target.layout().dims()
            )));
        }
        let v = &self.matrix * target.amplitudes();
        Ok(target.amplitudes().dotc(&v).re)
    }
}

/// Free-function form of [`DensityMatrix::partial_trace`].
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn layout443() -> SpaceLayout {
        SpaceLayout::two_qubit_cavity(2).unwrap()
    }

    #[test]
    fn basis_index_arithmetic() {
        let l = layout443();
        assert_eq!(l.total_dim(), 48);
        assert_eq!(l.index_of(&[0, 0, 0]).unwrap(), 0);
        assert_eq!(l.index_of(&[1, 0, 0]).unwrap(), 12);
        assert_eq!(l.index_of(&[3, 2, 2]).unwrap(), 44);
        assert_eq!(l.labels_of(44), vec![3, 2, 2]);
    }

    #[test]
    fn basis_state_places_single_amplitude() {
        let l = layout443();
        let psi = basis_state(&l, &[3, 2, 2]).unwrap();
        assert_eq!(psi.amplitudes()[44], ONE);
        assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-15);
        assert_eq!(psi.populations().iter().filter(|&&p| p > 0.0).count(), 1);
    }

    #[test]
    fn out_of_range_label_names_subsystem() {
        let l = layout443();
        let err = basis_state(&l, &[0, 0, 3]).unwrap_err();
        match err {
            QitError::LabelOutOfRange {
                subsystem, label, ..
            } => {
                assert_eq!(subsystem, 2);
                assert_eq!(label, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn annihilation_ladder_elements() {
        let a = annihilation(2).unwrap();
        assert_eq!(a[(0, 1)], ONE);
        assert_abs_diff_eq!(a[(1, 2)].re, 2.0_f64.sqrt(), epsilon = 1e-15);
        // number operator spectrum {0, 1, 2}
        let n = a.adjoint() * &a;
        let mut eigs: Vec<f64> = n.symmetric_eigen().eigenvalues.iter().copied().collect();
        eigs.sort_by(f64::total_cmp);
        for (k, e) in eigs.iter().enumerate() {
            assert_abs_diff_eq!(*e, k as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn annihilation_rejects_trivial_cavity() {
        assert!(annihilation(0).is_err());
    }

    #[test]
    fn sigma_outer_product_algebra() {
        let s23 = sigma(2, 3).unwrap();
        let s02 = sigma(0, 2).unwrap();
        // σ₂₃ maps |3⟩ to |2⟩
        let mut ket3 = DVector::<C64>::zeros(4);
        ket3[3] = ONE;
        let out = &s23 * ket3;
        assert_eq!(out[2], ONE);
        // adjoint swaps indices
        assert_eq!(s23.adjoint(), sigma(3, 2).unwrap());
        // composition chains transitions
        assert_eq!(&s02 * &s23, sigma(0, 3).unwrap());
        assert!(sigma(4, 0).is_err());
    }

    #[test]
    fn embed_identity_and_transition() {
        let l = layout443();
        let id = DMatrix::<C64>::identity(4, 4);
        let e = Operator::embed(&id, 1, &l).unwrap();
        assert_eq!(e.matrix(), Operator::identity(&l).matrix());

        let s23 = sigma(2, 3).unwrap();
        let op = Operator::embed(&s23, 0, &l).unwrap();
        let psi = basis_state(&l, &[3, 0, 0]).unwrap();
        let out = op.apply(&psi).unwrap();
        let expect = basis_state(&l, &[2, 0, 0]).unwrap();
        assert_abs_diff_eq!((out.amplitudes() - expect.amplitudes()).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn embed_rejects_wrong_dimension() {
        let l = layout443();
        let bad = DMatrix::<C64>::identity(3, 3);
        assert!(matches!(
            Operator::embed(&bad, 0, &l),
            Err(QitError::DimensionMismatch { subsystem: 0, .. })
        ));
        let id4 = DMatrix::<C64>::identity(4, 4);
        assert!(matches!(
            Operator::embed(&id4, 3, &l),
            Err(QitError::SubsystemOutOfRange { .. })
        ));
    }

    #[test]
    fn inner_product_basics() {
        let l = layout443();
        let a = basis_state(&l, &[0, 0, 0]).unwrap();
        let b = basis_state(&l, &[1, 0, 0]).unwrap();
        assert_eq!(inner_product(&a, &b).unwrap(), C64::new(0.0, 0.0));
        assert_eq!(inner_product(&a, &a).unwrap(), ONE);

        let other = SpaceLayout::two_qubit_cavity(1).unwrap();
        let c = basis_state(&other, &[0, 0, 0]).unwrap();
        assert!(matches!(
            inner_product(&a, &c),
            Err(QitError::LayoutMismatch(_))
        ));
    }

    #[test]
    fn outer_product_is_valid_density_matrix() {
        let l = layout443();
        let mut amps = vec![C64::new(0.0, 0.0); 48];
        amps[0] = C64::new(0.6, 0.0);
        amps[12] = C64::new(0.0, 0.8);
        let psi = StateVector::from_amplitudes(&l, amps).unwrap();
        let rho = psi.outer();
        rho.validate(HERMITICITY_TOL, TRACE_TOL, PSD_TOL).unwrap();
    }

    #[test]
    fn partial_trace_of_product_state() {
        let l = layout443();
        // qubit1 in (|0⟩+|1⟩)/√2, rest in ground/vacuum
        let inv = 1.0 / 2.0_f64.sqrt();
        let q1 = vec![
            C64::new(inv, 0.0),
            C64::new(inv, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        let q2 = vec![
            ONE,
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        let cav = vec![ONE, C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let psi = StateVector::product(&l, &[q1, q2, cav]).unwrap();
        let rho = psi.outer();
        let red = rho.partial_trace(&[0]).unwrap();
        assert_eq!(red.layout().dims(), &[4]);
        assert_abs_diff_eq!(red.matrix()[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(red.matrix()[(0, 1)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!((red.trace() - ONE).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace_and_rejects_empty_keep() {
        let l = layout443();
        let psi = basis_state(&l, &[2, 1, 1]).unwrap();
        let rho = psi.outer();
        let red = rho.partial_trace(&[1, 2]).unwrap();
        assert_abs_diff_eq!((red.trace() - ONE).norm(), 0.0, epsilon = 1e-12);
        assert!(rho.partial_trace(&[]).is_err());
    }

    #[test]
    fn partial_trace_of_entangled_state_is_mixed() {
        let l = layout443();
        // (|0⟩₁|0⟩_c + |1⟩₁|1⟩_c)/√2 with qubit 2 in |0⟩
        let inv = 1.0 / 2.0_f64.sqrt();
        let mut amps = vec![C64::new(0.0, 0.0); 48];
        amps[l.index_of(&[0, 0, 0]).unwrap()] = C64::new(inv, 0.0);
        amps[l.index_of(&[1, 0, 1]).unwrap()] = C64::new(inv, 0.0);
        let psi = StateVector::from_amplitudes(&l, amps).unwrap();
        let red = psi.outer().partial_trace(&[0]).unwrap();
        // maximally mixed on the two involved levels
        assert_abs_diff_eq!(red.matrix()[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(red.matrix()[(1, 1)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(red.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn density_matrix_validation_rejects_bad_trace() {
        let l = SpaceLayout::new(vec![2, 2]).unwrap();
        let m = DMatrix::<C64>::identity(4, 4); // trace 4
        assert!(DensityMatrix::new(&l, m).is_err());
    }
}
