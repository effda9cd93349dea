//! Commuting matrix pairs `(m₁, m₂)` and triples `(m₁, m₂; v)`: the module
//! they define, cyclic vectors, orbit and stabilizer dimensions.

mod ideal;
mod sample;
mod spectrum;

pub use ideal::{partitions, IdealData, MonomialIdeal};
pub use sample::{random_cyclic_triple, random_commuting_pair, random_invertible, PairKind};
pub use spectrum::{joint_spectrum, SpectrumMultiset};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{closed_span, commutator_op, hstack, numerical_rank_scaled, right_mul_op, vectorize, vstack, ClosedSpan};
use crate::scalar::{frobenius, random_vector, real, to_f64, CMatrix, CVector, Complex, Real};
use crate::tolerance::Tolerances;

/// A pair of square matrices of equal size.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPair<T: Real> {
    pub m1: CMatrix<T>,
    pub m2: CMatrix<T>,
}

/// A pair together with a vector of ℂ^r.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple<T: Real> {
    pub pair: MatrixPair<T>,
    pub v: CVector<T>,
}

/// Support data of the module `𝓕` defined by a commuting pair.
#[derive(Debug, Clone)]
pub struct ModuleSupport<T: Real> {
    /// Distinct support points with their lengths.
    pub support: Vec<([Complex<T>; 2], usize)>,
    /// Dimension of the algebra `⟨1, m₁, m₂⟩`.
    pub algebra_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlgebraDimension {
    pub dim: usize,
    /// Degree `r` contributed nothing beyond degree `r − 1`.
    pub stabilized: bool,
}

impl<T: Real> MatrixPair<T> {
    pub fn new(m1: CMatrix<T>, m2: CMatrix<T>) -> Result<Self> {
        if !m1.is_square() || m1.shape() != m2.shape() {
            return Err(Error::Dimension(format!("pair shapes {:?} and {:?}", m1.shape(), m2.shape())));
        }
        Ok(MatrixPair { m1, m2 })
    }

    pub fn zeros(r: usize) -> Self {
        MatrixPair { m1: CMatrix::zeros(r, r), m2: CMatrix::zeros(r, r) }
    }

    pub fn diagonal(d1: &[Complex<T>], d2: &[Complex<T>]) -> Self {
        MatrixPair {
            m1: CMatrix::from_diagonal(&CVector::from_column_slice(d1)),
            m2: CMatrix::from_diagonal(&CVector::from_column_slice(d2)),
        }
    }

    pub fn r(&self) -> usize {
        self.m1.nrows()
    }

    /// `‖m₁m₂ − m₂m₁‖_F`.
    pub fn commutator_residual(&self) -> T {
        frobenius(&(&self.m1 * &self.m2 - &self.m2 * &self.m1))
    }

    /// Norm scale `max(1, ‖m₁‖_F, ‖m₂‖_F)` used for relative thresholds.
    pub fn scale(&self) -> T {
        frobenius(&self.m1).max(frobenius(&self.m2)).max(T::one())
    }

    pub fn commutes(&self, tol: T) -> bool {
        self.commutator_residual() <= tol * self.scale() * self.scale()
    }

    pub fn ensure_commuting(&self, tol: T) -> Result<()> {
        if self.commutes(tol) {
            Ok(())
        } else {
            Err(Error::NotCommuting { residual: to_f64(self.commutator_residual()) })
        }
    }

    /// `(g m₁ g⁻¹, g m₂ g⁻¹)`.
    pub fn conjugate(&self, g: &CMatrix<T>) -> Result<Self> {
        let gi = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Dimension("conjugating matrix is singular".into()))?;
        Ok(self.conjugate_with(g, &gi))
    }

    pub fn conjugate_with(&self, g: &CMatrix<T>, g_inv: &CMatrix<T>) -> Self {
        MatrixPair { m1: g * &self.m1 * g_inv, m2: g * &self.m2 * g_inv }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.r(), other.r());
        let mut m1 = CMatrix::zeros(a + b, a + b);
        let mut m2 = CMatrix::zeros(a + b, a + b);
        m1.view_mut((0, 0), (a, a)).copy_from(&self.m1);
        m1.view_mut((a, a), (b, b)).copy_from(&other.m1);
        m2.view_mut((0, 0), (a, a)).copy_from(&self.m2);
        m2.view_mut((a, a), (b, b)).copy_from(&other.m2);
        MatrixPair { m1, m2 }
    }

    /// Adds `λ₁I, λ₂I`, moving the support by `(λ₁, λ₂)`.
    pub fn shifted(&self, point: [Complex<T>; 2]) -> Self {
        let id = CMatrix::<T>::identity(self.r(), self.r());
        MatrixPair { m1: &self.m1 + &id * point[0], m2: &self.m2 + &id * point[1] }
    }

    /// The unital algebra `⟨1, m₁, m₂⟩` as a span of flattened matrices,
    /// explored up to monomial degree `max_degree`.
    pub fn algebra_span(&self, rank_tol: T, max_degree: usize) -> ClosedSpan<T> {
        let r = self.r();
        let (m1, m2) = (&self.m1, &self.m2);
        let ops = [
            Box::new(move |x: &CVector<T>| vectorize(&(m1 * CMatrix::from_column_slice(r, r, x.as_slice()))))
                as Box<dyn Fn(&CVector<T>) -> CVector<T> + '_>,
            Box::new(move |x: &CVector<T>| vectorize(&(m2 * CMatrix::from_column_slice(r, r, x.as_slice())))),
        ];
        let seed = vectorize(&CMatrix::<T>::identity(r, r));
        closed_span(&ops, &[seed], rank_tol, self.scale(), max_degree)
    }

    /// `dim span{m₁^a m₂^b : a + b ≤ r − 1}`, with a check that degree `r`
    /// adds nothing.
    pub fn algebra_dimension_checked(&self, tols: &Tolerances<T>) -> AlgebraDimension {
        let r = self.r();
        let span = self.algebra_span(tols.rank_tol, r);
        let below: usize = span.added_per_degree.iter().take(r).sum();
        AlgebraDimension { dim: below, stabilized: span.dim() == below }
    }

    pub fn algebra_dimension(&self, tols: &Tolerances<T>) -> usize {
        self.algebra_dimension_checked(tols).dim
    }

    /// Whether `ℂ^r` is a cyclic `ℂ[m₁, m₂]`-module.
    ///
    /// Requires `dim ⟨1, m₁, m₂⟩ = r` and, at every support point `λ`, a
    /// one-dimensional top `V_λ / 𝔪_λ V_λ`, i.e. `rank [m₁ − λ₁ | m₂ − λ₂] = r − 1`.
    pub fn has_cyclic_vector(&self, tols: &Tolerances<T>) -> Result<bool> {
        let r = self.r();
        if r == 0 {
            return Ok(true);
        }
        if self.algebra_dimension(tols) != r {
            return Ok(false);
        }
        let spectrum = joint_spectrum(self, tols)?;
        let id = CMatrix::<T>::identity(r, r);
        for (point, _) in spectrum.clustered(tols.cluster_tol) {
            let stacked = hstack(&[&self.m1 - &id * point[0], &self.m2 - &id * point[1]]);
            if numerical_rank_scaled(&stacked, tols.rank_tol, self.scale()) != r - 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Krylov test on random vectors: whether any of `samples` draws is cyclic.
    pub fn cyclic_by_sampling<R: Rng + ?Sized>(&self, samples: usize, tols: &Tolerances<T>, rng: &mut R) -> bool {
        (0..samples).any(|_| {
            let t = Triple { pair: self.clone(), v: random_vector(rng, self.r()) };
            t.is_cyclic(tols)
        })
    }

    /// Support of `𝓕` with lengths, plus the algebra dimension.
    pub fn module_support(&self, tols: &Tolerances<T>) -> Result<ModuleSupport<T>> {
        self.ensure_commuting(tols.tol)?;
        let spectrum = joint_spectrum(self, tols)?;
        Ok(ModuleSupport { support: spectrum.clustered(tols.cluster_tol), algebra_dim: self.algebra_dimension(tols) })
    }

    /// Joint spectrum as a multiset of points of ℂ².
    pub fn joint_spectrum(&self, tols: &Tolerances<T>) -> Result<SpectrumMultiset<T>> {
        joint_spectrum(self, tols)
    }

    /// Diagonal representative of the unique closed orbit in the orbit closure.
    pub fn semisimplify(&self, tols: &Tolerances<T>) -> Result<Self> {
        let spec = joint_spectrum(self, tols)?;
        let d1: Vec<_> = spec.points.iter().map(|p| p[0]).collect();
        let d2: Vec<_> = spec.points.iter().map(|p| p[1]).collect();
        Ok(MatrixPair::diagonal(&d1, &d2))
    }

    /// Whether the `GL_r`-orbit is closed, i.e. both matrices are
    /// diagonalizable (commuting diagonalizable matrices are simultaneously
    /// diagonalizable). Tested through square-free minimal polynomials.
    pub fn is_closed_orbit(&self, tols: &Tolerances<T>) -> Result<bool> {
        let spec = joint_spectrum(self, tols)?;
        let squarefree = |m: &CMatrix<T>, coord: usize| {
            let values = spectrum::distinct_values(spec.points.iter().map(|p| p[coord]), tols.cluster_tol);
            let r = m.nrows();
            let id = CMatrix::<T>::identity(r, r);
            let mut product = id.clone();
            let mut norms = T::one();
            let floor = real::<T>(1e-3) * self.scale();
            for mu in values {
                let factor = m - &id * mu;
                norms *= frobenius(&factor).max(floor);
                product *= factor;
            }
            frobenius(&product) <= real::<T>(1e-6) * norms
        };
        Ok(squarefree(&self.m1, 0) && squarefree(&self.m2, 1))
    }

    /// Dimension of the centralizer `{g : [g, m₁] = [g, m₂] = 0}`.
    pub fn stabilizer_dimension(&self, tols: &Tolerances<T>) -> usize {
        let r = self.r();
        let system = vstack(&[commutator_op(&self.m1), commutator_op(&self.m2)]);
        r * r - numerical_rank_scaled(&system, tols.rank_tol, self.scale())
    }

    /// `r² − dim Stab`.
    pub fn orbit_dimension(&self, tols: &Tolerances<T>) -> usize {
        self.r() * self.r() - self.stabilizer_dimension(tols)
    }

    /// Kernel dimension of `(a, b) ↦ [a, m₂] + [m₁, b]`, the Zariski tangent
    /// space of the commuting variety at this pair.
    pub fn commuting_tangent_dimension(&self, tols: &Tolerances<T>) -> usize {
        let r = self.r();
        let op_a = -commutator_op(&self.m2);
        let op_b = commutator_op(&self.m1);
        let system = hstack(&[op_a, op_b]);
        2 * r * r - numerical_rank_scaled(&system, tols.rank_tol, self.scale())
    }
}

impl<T: Real> Triple<T> {
    pub fn new(pair: MatrixPair<T>, v: CVector<T>) -> Result<Self> {
        if v.len() != pair.r() {
            return Err(Error::Dimension(format!("vector of length {} for rank {}", v.len(), pair.r())));
        }
        Ok(Triple { pair, v })
    }

    pub fn r(&self) -> usize {
        self.pair.r()
    }

    /// Invariant subspace `ℂ[m₁, m₂]·v`, explored up to degree `r − 1`.
    pub fn krylov_span(&self, rank_tol: T) -> ClosedSpan<T> {
        let (m1, m2) = (&self.pair.m1, &self.pair.m2);
        let ops = [
            Box::new(move |x: &CVector<T>| m1 * x) as Box<dyn Fn(&CVector<T>) -> CVector<T> + '_>,
            Box::new(move |x: &CVector<T>| m2 * x),
        ];
        closed_span(&ops, std::slice::from_ref(&self.v), rank_tol, self.pair.scale(), self.r().saturating_sub(1))
    }

    /// `ℂ[m₁, m₂]·v = ℂ^r`.
    pub fn is_cyclic(&self, tols: &Tolerances<T>) -> bool {
        self.krylov_span(tols.rank_tol).dim() == self.r()
    }

    /// `(g m₁ g⁻¹, g m₂ g⁻¹; g v)`.
    pub fn act(&self, g: &CMatrix<T>) -> Result<Self> {
        Ok(Triple { pair: self.pair.conjugate(g)?, v: g * &self.v })
    }

    /// Dimension of `{g : [g, m₁] = [g, m₂] = 0, g v = 0}`.
    pub fn stabilizer_dimension(&self, tols: &Tolerances<T>) -> usize {
        let r = self.r();
        let vmat = CMatrix::from_column_slice(r, 1, self.v.as_slice());
        let system = vstack(&[commutator_op(&self.pair.m1), commutator_op(&self.pair.m2), right_mul_op(&vmat, r)]);
        r * r - numerical_rank_scaled(&system, tols.rank_tol, self.pair.scale())
    }

    pub fn orbit_dimension(&self, tols: &Tolerances<T>) -> usize {
        self.r() * self.r() - self.stabilizer_dimension(tols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cone, cplx, czero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> Complex<f64> {
        cplx(x, 0.0)
    }

    fn diag(a: &[f64], b: &[f64]) -> MatrixPair<f64> {
        let a: Vec<_> = a.iter().map(|&x| c(x)).collect();
        let b: Vec<_> = b.iter().map(|&x| c(x)).collect();
        MatrixPair::diagonal(&a, &b)
    }

    fn jordan2() -> CMatrix<f64> {
        let mut j = CMatrix::zeros(2, 2);
        j[(0, 1)] = cone();
        j
    }

    fn tols() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn residual_examples() {
        assert_eq!(diag(&[1.0, 2.0], &[3.0, 4.0]).commutator_residual(), 0.0);
        let mut e12 = CMatrix::<f64>::zeros(2, 2);
        e12[(0, 1)] = cone();
        let pair = MatrixPair::new(e12.clone(), e12.transpose()).unwrap();
        assert!((pair.commutator_residual() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn module_support_examples() {
        let t = tols();
        let s = diag(&[1.0, 2.0], &[3.0, 4.0]).module_support(&t).unwrap();
        assert_eq!(s.algebra_dim, 2);
        assert_eq!(s.support.len(), 2);
        let nil = MatrixPair::new(jordan2(), CMatrix::zeros(2, 2)).unwrap().module_support(&t).unwrap();
        assert_eq!(nil.support.len(), 1);
        assert_eq!(nil.support[0].1, 2);
        assert_eq!(nil.algebra_dim, 2);
        let zero = MatrixPair::<f64>::zeros(2).module_support(&t).unwrap();
        assert_eq!(zero.algebra_dim, 1);
        assert_eq!(zero.support[0].1, 2);
        let bad = MatrixPair::new(jordan2(), jordan2().transpose()).unwrap();
        assert!(matches!(bad.module_support(&t), Err(Error::NotCommuting { .. })));
    }

    #[test]
    fn cyclic_examples() {
        let t = tols();
        let e1 = CVector::from_vec(vec![cone(), czero()]);
        let j = Triple::new(MatrixPair::new(jordan2().transpose(), CMatrix::zeros(2, 2)).unwrap(), e1.clone()).unwrap();
        assert!(j.is_cyclic(&t));
        let z = Triple::new(MatrixPair::zeros(2), CVector::from_vec(vec![c(0.3), c(-1.2)])).unwrap();
        assert!(!z.is_cyclic(&t));
        let d = diag(&[1.0, 2.0], &[3.0, 4.0]);
        assert!(Triple::new(d.clone(), CVector::from_vec(vec![c(1.0), c(1.0)])).unwrap().is_cyclic(&t));
        assert!(!Triple::new(d, e1).unwrap().is_cyclic(&t));
    }

    #[test]
    fn algebra_dimension_examples() {
        let t = tols();
        let scalar = MatrixPair::new(CMatrix::identity(2, 2) * c(3.0), CMatrix::identity(2, 2) * c(-1.0)).unwrap();
        assert_eq!(scalar.algebra_dimension(&t), 1);
        let j = MatrixPair::new(jordan2(), CMatrix::zeros(2, 2)).unwrap();
        let ad = j.algebra_dimension_checked(&t);
        assert_eq!(ad, AlgebraDimension { dim: 2, stabilized: true });
        assert!(j.has_cyclic_vector(&t).unwrap());
        assert!(!MatrixPair::<f64>::zeros(3).has_cyclic_vector(&t).unwrap());
        assert!(!diag(&[1.0, 1.0], &[2.0, 2.0]).has_cyclic_vector(&t).unwrap());
    }

    #[test]
    fn dimension_examples() {
        let t = tols();
        let d = diag(&[1.0, 2.0, 3.0, 4.0], &[0.5, -1.0, 2.0, 7.0]);
        assert_eq!(d.commuting_tangent_dimension(&t), 20);
        assert_eq!(d.stabilizer_dimension(&t), 4);
        let one = diag(&[2.0], &[5.0]);
        assert_eq!(one.commuting_tangent_dimension(&t), 2);
        assert_eq!(MatrixPair::<f64>::zeros(3).commuting_tangent_dimension(&t), 18);
        assert_eq!(MatrixPair::<f64>::zeros(3).orbit_dimension(&t), 0);
        let tri = Triple::new(d, CVector::from_element(4, cone())).unwrap();
        assert_eq!(tri.stabilizer_dimension(&t), 0);
        assert_eq!(tri.orbit_dimension(&t), 16);
    }

    #[test]
    fn cyclic_pair_r3_orbit_dimension() {
        let t = tols();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tri = random_cyclic_triple::<f64, _>(3, &mut rng);
        assert_eq!(tri.pair.orbit_dimension(&t), 6);
    }

    #[test]
    fn closed_orbit_examples() {
        let t = tols();
        assert!(diag(&[1.0, 2.0], &[3.0, 3.0]).is_closed_orbit(&t).unwrap());
        assert!(!MatrixPair::new(jordan2(), CMatrix::zeros(2, 2)).unwrap().is_closed_orbit(&t).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_invertible::<f64, _>(3, &mut rng);
        let p = diag(&[1.0, 1.0, -2.0], &[0.0, 3.0, 0.0]).conjugate(&g).unwrap();
        assert!(p.is_closed_orbit(&t).unwrap());
    }

    #[test]
    fn semisimplify_examples() {
        let t = tols();
        let j = MatrixPair::new(jordan2(), CMatrix::zeros(2, 2)).unwrap();
        let s = j.semisimplify(&t).unwrap();
        assert!(frobenius(&s.m1) < 1e-12 && frobenius(&s.m2) < 1e-12);
        let d = diag(&[2.0, 1.0], &[4.0, 3.0]);
        let s = d.semisimplify(&t).unwrap();
        assert!((s.m1[(0, 0)] - c(1.0)).norm() < 1e-12 && (s.m2[(0, 0)] - c(3.0)).norm() < 1e-12);
        // upper-triangular commuting pair: diagonal parts survive
        let mut u1 = CMatrix::<f64>::zeros(2, 2);
        u1[(0, 0)] = c(1.0);
        u1[(1, 1)] = c(2.0);
        u1[(0, 1)] = c(5.0);
        let u2 = &u1 * &u1;
        let s = MatrixPair::new(u1, u2).unwrap().semisimplify(&t).unwrap();
        assert!((s.m1[(1, 1)] - c(2.0)).norm() < 1e-10 && (s.m2[(1, 1)] - c(4.0)).norm() < 1e-10);
    }
}
