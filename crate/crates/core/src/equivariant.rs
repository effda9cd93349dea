//! Γ-equivariant triples: the action `γ⊙(m₁, m₂)`, the linear space of
//! equivariant pairs for a fixed anti-representation, stacky stability and
//! orbifold length.

use num_rational::Ratio;
use serde::Serialize;

use crate::commuting::{MatrixPair, Triple};
use crate::error::{Error, Result};
use crate::group::{CharacterTable, FiniteSubgroup, GroupElement, Representation};
use crate::linalg::{null_space_scaled, sqrt_hpd, unvectorize, vstack};
use crate::scalar::{cone, czero, frobenius, modulus, real, to_f64, CMatrix, CVector, Complex, Real};
use crate::tolerance::Tolerances;

/// `γ⊙(m₁, m₂) = (a m₁ + c m₂, b m₁ + d m₂)` for `γ = ((a, c), (b, d))`.
pub fn gamma_act_on_pair<T: Real>(gamma: &GroupElement<T>, pair: &MatrixPair<T>) -> MatrixPair<T> {
    let (a, b, c, d) = gamma.abcd();
    MatrixPair { m1: &pair.m1 * a + &pair.m2 * c, m2: &pair.m1 * b + &pair.m2 * d }
}

/// A triple `(m₁, m₂; v)` with an anti-representation `ρ` on `ℂ^r`.
#[derive(Debug, Clone)]
pub struct EquivariantTriple<T: Real> {
    pub pair: MatrixPair<T>,
    pub v: CVector<T>,
    pub rho: Representation<T>,
}

/// Outcome of the stacky stability test.
#[derive(Debug, Clone)]
pub struct StackyStability<T: Real> {
    /// `ρ` has the character of the regular representation.
    pub regular_type: bool,
    /// Cyclic Γ-fixed vector, when one exists.
    pub witness: Option<CVector<T>>,
}

impl<T: Real> StackyStability<T> {
    pub fn is_stable(&self) -> bool {
        self.regular_type && self.witness.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    FreeOrbit,
    FixedOrigin,
    Other,
}

/// One orbifold point of the support.
#[derive(Debug, Clone, Serialize)]
pub struct SupportOrbit {
    /// The points of the Γ-orbit in ℂ², as `[[re, im], [re, im]]`.
    pub points: Vec<[[f64; 2]; 2]>,
    /// Length of the module at each point of the orbit.
    pub length: usize,
    pub stabilizer_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbifoldPointReport {
    pub case_tag: CaseTag,
    pub support_orbits: Vec<SupportOrbit>,
    pub orbil: Ratio<i64>,
    /// Non-integer orbifold length: part of the module cannot leave the
    /// points with nontrivial structure group.
    pub trapped: bool,
}

impl<T: Real> EquivariantTriple<T> {
    pub fn new(pair: MatrixPair<T>, v: CVector<T>, rho: Representation<T>) -> Result<Self> {
        if rho.dim != pair.r() || v.len() != pair.r() {
            return Err(Error::Dimension(format!(
                "pair of rank {}, vector of length {}, representation of dimension {}",
                pair.r(),
                v.len(),
                rho.dim
            )));
        }
        Ok(EquivariantTriple { pair, v, rho })
    }

    pub fn r(&self) -> usize {
        self.pair.r()
    }

    pub fn triple(&self) -> Triple<T> {
        Triple { pair: self.pair.clone(), v: self.v.clone() }
    }

    /// Largest defect `‖γ⊙(m₁, m₂) − ρ(γ)(m₁, m₂)ρ(γ)⁻¹‖_F` over generators.
    pub fn equivariance_residual(&self, group: &FiniteSubgroup<T>) -> T {
        self.residual_over(group, &group.generators)
    }

    /// Same defect over every element of the group.
    pub fn equivariance_residual_all(&self, group: &FiniteSubgroup<T>) -> T {
        let all: Vec<usize> = (0..group.order()).collect();
        self.residual_over(group, &all)
    }

    fn residual_over(&self, group: &FiniteSubgroup<T>, elements: &[usize]) -> T {
        elements
            .iter()
            .map(|&g| {
                let acted = gamma_act_on_pair(&group.elements[g], &self.pair);
                let rho = &self.rho.matrices[g];
                // ρ(γ) m − (γ⊙m) ρ(γ) avoids inverting ρ(γ)
                let e1 = rho * &self.pair.m1 - &acted.m1 * rho;
                let e2 = rho * &self.pair.m2 - &acted.m2 * rho;
                (frobenius(&e1).powi(2) + frobenius(&e2).powi(2)).sqrt()
            })
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// `(g m g⁻¹, g v, g ρ g⁻¹)`.
    pub fn act(&self, g: &CMatrix<T>) -> Result<Self> {
        let gi = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Dimension("conjugating matrix is singular".into()))?;
        Ok(EquivariantTriple {
            pair: self.pair.conjugate_with(g, &gi),
            v: g * &self.v,
            rho: self.rho.conjugated(g, &gi),
        })
    }

    /// Conjugates by `P^{1/2}`, `P = Σ_γ ρ(γ)^H ρ(γ)`, so that `ρ` becomes unitary.
    pub fn unitarized(&self) -> Self {
        let r = self.r();
        let mut p = CMatrix::zeros(r, r);
        for m in &self.rho.matrices {
            p += m.adjoint() * m;
        }
        let (s, s_inv) = sqrt_hpd(&p);
        EquivariantTriple {
            pair: self.pair.conjugate_with(&s, &s_inv),
            v: &s * &self.v,
            rho: self.rho.conjugated(&s, &s_inv),
        }
    }

    /// Conditions of stacky stability: `ρ` is of regular type and some
    /// Γ-fixed vector is cyclic for the pair.
    pub fn stacky_stability(
        &self,
        group: &FiniteSubgroup<T>,
        table: &CharacterTable<T>,
        tols: &Tolerances<T>,
    ) -> Result<StackyStability<T>> {
        let residual = self.rho.relation_residual(group);
        if residual > tols.tol * real::<T>(self.r() as f64).max(T::one()) * real(10.0) {
            return Err(Error::NotARepresentation { residual: to_f64(residual) });
        }
        let multiplicities = self.rho.decompose(table, real(1e-6)).ok();
        let regular_type = multiplicities.as_deref() == Some(&table.irrep_dims[..]);
        let projector = self.rho.fixed_projector();
        let fixed = null_space_scaled(&(CMatrix::identity(self.r(), self.r()) - &projector), tols.rank_tol, T::one());
        let witness = if fixed.ncols() == 1 {
            let v0 = fixed.column(0).into_owned();
            Triple { pair: self.pair.clone(), v: v0.clone() }.is_cyclic(tols).then_some(v0)
        } else {
            // several fixed directions: a generic combination is cyclic if any is
            let mut combo = CVector::zeros(self.r());
            for j in 0..fixed.ncols() {
                let w = Complex::new(real::<T>(1.0 + j as f64 * 0.618_033_988_7), real::<T>(0.3 * j as f64));
                combo += fixed.column(j) * w;
            }
            (fixed.ncols() > 0 && Triple { pair: self.pair.clone(), v: combo.clone() }.is_cyclic(tols))
                .then_some(combo)
        };
        Ok(StackyStability { regular_type, witness })
    }

    /// Groups the joint spectrum into Γ-orbits and computes the orbifold length.
    pub fn support_classification(
        &self,
        group: &FiniteSubgroup<T>,
        tols: &Tolerances<T>,
    ) -> Result<OrbifoldPointReport> {
        let spectrum = self.pair.joint_spectrum(tols)?;
        let support = spectrum.clustered(tols.cluster_tol);
        let near = |p: &[Complex<T>; 2], q: &[Complex<T>; 2]| {
            modulus(p[0] - q[0]).max(modulus(p[1] - q[1])) <= tols.cluster_tol
        };
        let mut assigned = vec![false; support.len()];
        let mut orbits = Vec::new();
        let mut orbil = Ratio::from_integer(0i64);
        for i in 0..support.len() {
            if assigned[i] {
                continue;
            }
            let (p, length) = support[i];
            let images: Vec<[Complex<T>; 2]> = group.elements.iter().map(|g| g.apply(p)).collect();
            let stabilizer_order = images.iter().filter(|q| near(q, &p)).count();
            let mut members = Vec::new();
            for q in &images {
                let j = support
                    .iter()
                    .position(|(s, _)| near(s, q))
                    .ok_or(Error::SpectrumNotInvariant)?;
                if support[j].1 != length {
                    return Err(Error::SpectrumNotInvariant);
                }
                if !members.contains(&j) {
                    members.push(j);
                }
            }
            for &j in &members {
                assigned[j] = true;
            }
            let points = members
                .iter()
                .map(|&j| {
                    let s = support[j].0;
                    [[to_f64(s[0].re), to_f64(s[0].im)], [to_f64(s[1].re), to_f64(s[1].im)]]
                })
                .collect();
            orbil += Ratio::new(length as i64, stabilizer_order as i64);
            orbits.push(SupportOrbit { points, length, stabilizer_order });
        }
        let origin = [czero::<T>(), czero::<T>()];
        let case_tag = match orbits.as_slice() {
            [o] if o.stabilizer_order == 1 => CaseTag::FreeOrbit,
            [_] if near(&support[0].0, &origin) => CaseTag::FixedOrigin,
            _ => CaseTag::Other,
        };
        Ok(OrbifoldPointReport { case_tag, support_orbits: orbits, trapped: !orbil.is_integer(), orbil })
    }
}

/// Orthonormal basis (columns in `ℂ^{2r²}`, `vec m₁` over `vec m₂`) of the
/// pairs satisfying `γ⊙(m₁, m₂) = ρ(γ)(m₁, m₂)ρ(γ)⁻¹` for every generator.
pub fn solve_equivariant_space<T: Real>(
    group: &FiniteSubgroup<T>,
    rho: &Representation<T>,
    rank_tol: T,
) -> CMatrix<T> {
    let r = rho.dim;
    let n = r * r;
    let blocks: Vec<CMatrix<T>> = group
        .generators
        .iter()
        .map(|&g| {
            let (a, b, c, d) = group.elements[g].abcd();
            let rm = &rho.matrices[g];
            // ρ m − (γ⊙m) ρ, vectorized column-major
            let left = CMatrix::<T>::identity(r, r).kronecker(rm);
            let right = rm.transpose().kronecker(&CMatrix::<T>::identity(r, r));
            let mut block = CMatrix::zeros(2 * n, 2 * n);
            block.view_mut((0, 0), (n, n)).copy_from(&(&left - &right * a));
            block.view_mut((0, n), (n, n)).copy_from(&(-&right * c));
            block.view_mut((n, 0), (n, n)).copy_from(&(-&right * b));
            block.view_mut((n, n), (n, n)).copy_from(&(&left - &right * d));
            block
        })
        .collect();
    let scale = rho.matrices.iter().map(frobenius).fold(T::one(), |a, b| a.max(b));
    null_space_scaled(&vstack(&blocks), rank_tol, scale)
}

/// Splits a vector of `ℂ^{2r²}` into a pair.
pub fn pair_from_vector<T: Real>(x: &CVector<T>, r: usize) -> MatrixPair<T> {
    let n = r * r;
    let m1 = unvectorize(&x.rows(0, n).into_owned(), r, r);
    let m2 = unvectorize(&x.rows(n, n).into_owned(), r, r);
    MatrixPair { m1, m2 }
}

/// The equivariant triple of a free Γ-orbit: point `h⁻¹p` in slot `h`,
/// regular `ρ`, `v = (1, …, 1)`.
pub fn orbit_to_triple<T: Real>(
    group: &FiniteSubgroup<T>,
    p: [Complex<T>; 2],
    tols: &Tolerances<T>,
) -> Result<EquivariantTriple<T>> {
    let n = group.order();
    let points: Vec<[Complex<T>; 2]> = (0..n).map(|h| group.elements[group.inverses[h]].apply(p)).collect();
    let separation = real::<T>(10.0) * tols.cluster_tol;
    for i in 0..n {
        for j in (i + 1)..n {
            if modulus(points[i][0] - points[j][0]).max(modulus(points[i][1] - points[j][1])) <= separation {
                return Err(Error::NotFreeOrbit);
            }
        }
    }
    let d1: Vec<_> = points.iter().map(|q| q[0]).collect();
    let d2: Vec<_> = points.iter().map(|q| q[1]).collect();
    Ok(EquivariantTriple {
        pair: MatrixPair::diagonal(&d1, &d2),
        v: CVector::from_element(n, cone()),
        rho: Representation::regular(group),
    })
}
