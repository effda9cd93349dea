//! Γ-clusters over the origin as quotients of `C = S / (S^Γ_+)`.
//!
//! Every origin-supported cluster ideal contains the positive-degree
//! invariants, so it is the preimage of a Γ-stable ideal `K ⊂ C` with `C / K`
//! of regular type. Such a `K` is reached from `0` by repeatedly adding one
//! irreducible Γ-submodule of the socle of `C / K` belonging to an irrep whose
//! multiplicity is still too large. `C` is modelled degree by degree as the
//! orthogonal complement of the ideal in the scaled basis, where
//! substitutions are unitary.

use nalgebra::SymmetricEigen;
use rand::Rng;

use crate::commuting::MatrixPair;
use crate::equivariant::EquivariantTriple;
use crate::error::{Error, Result};
use crate::group::{CharacterTable, FiniteSubgroup, Representation};
use crate::invariants::{binomial_sqrt, substitution_matrix, to_scaled, Generator, Polynomial};
use crate::linalg::{closed_span, null_space_gram, null_space_scaled, orthogonal_complement, range_basis, vstack};
use crate::scalar::{cone, random_complex, random_vector, real, to_f64, vec_norm, CMatrix, CVector, Complex, Real};
use crate::tolerance::Tolerances;

/// `S / (S^Γ_+)` with multiplication operators and the Γ-action.
#[derive(Debug, Clone)]
pub struct CoinvariantAlgebra<T: Real> {
    /// Offset of each degree block; the last entry is the total dimension.
    pub offsets: Vec<usize>,
    pub x: CMatrix<T>,
    pub y: CMatrix<T>,
    /// Substitution on each generator of Γ.
    pub generators: Vec<CMatrix<T>>,
    /// `blocks[g][d]`: substitution by element `g` on degree `d`.
    blocks: Vec<Vec<CMatrix<T>>>,
    /// Projector onto the isotypic component of each irrep.
    isotypic: Vec<CMatrix<T>>,
    irrep_dims: Vec<usize>,
}

/// Degree-`d` part of the ideal generated by `gens`, as scaled columns.
fn ideal_part<T: Real>(gens: &[Generator<T>], d: usize) -> CMatrix<T> {
    let mut cols = Vec::new();
    for g in gens.iter().filter(|g| g.degree > 0 && g.degree <= d) {
        let e = d - g.degree;
        for a in 0..=e {
            let p = Polynomial::monomial(a, e - a).mul(&g.polynomial);
            cols.push(to_scaled(d, &p));
        }
    }
    if cols.is_empty() {
        CMatrix::zeros(d + 1, 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// Multiplication by `z₁` (`first`) or `z₂` from degree `d` to `d + 1` in the
/// scaled basis (index = exponent of `z₁`).
fn multiplication<T: Real>(d: usize, first: bool) -> CMatrix<T> {
    let s0 = binomial_sqrt::<T>(d);
    let s1 = binomial_sqrt::<T>(d + 1);
    let mut m = CMatrix::zeros(d + 2, d + 1);
    for a in 0..=d {
        let target = if first { a + 1 } else { a };
        m[(target, a)] = cone::<T>().scale(s0[a] / s1[target]);
    }
    m
}

impl<T: Real> CoinvariantAlgebra<T> {
    /// Builds `C` from invariant generators; fails if the quotient has not
    /// vanished by `max_degree`.
    pub fn build(
        group: &FiniteSubgroup<T>,
        table: &CharacterTable<T>,
        gens: &[Generator<T>],
        tols: &Tolerances<T>,
        max_degree: usize,
    ) -> Result<Self> {
        let mut complements = Vec::new();
        for d in 0..=max_degree {
            let ideal = ideal_part(gens, d);
            let q = if ideal.ncols() == 0 {
                CMatrix::identity(d + 1, d + 1)
            } else {
                null_space_scaled(&ideal.adjoint(), tols.rank_tol, T::one())
            };
            if q.ncols() == 0 {
                break;
            }
            complements.push(q);
        }
        if complements.len() > max_degree {
            return Err(Error::DegreeCapTooSmall(max_degree));
        }
        let mut offsets = vec![0];
        for q in &complements {
            offsets.push(offsets.last().copied().unwrap_or(0) + q.ncols());
        }
        let dim = *offsets.last().unwrap_or(&0);
        let lift = |first: bool| {
            let mut m = CMatrix::zeros(dim, dim);
            for d in 0..complements.len().saturating_sub(1) {
                let block = complements[d + 1].adjoint() * multiplication::<T>(d, first) * &complements[d];
                m.view_mut((offsets[d + 1], offsets[d]), block.shape()).copy_from(&block);
            }
            m
        };
        let x = lift(true);
        let y = lift(false);
        let blocks: Vec<Vec<CMatrix<T>>> = group
            .elements
            .iter()
            .map(|e| {
                complements
                    .iter()
                    .enumerate()
                    .map(|(d, q)| q.adjoint() * substitution_matrix(e, d) * q)
                    .collect()
            })
            .collect();
        let mut algebra = CoinvariantAlgebra {
            offsets,
            x,
            y,
            generators: Vec::new(),
            blocks,
            isotypic: Vec::new(),
            irrep_dims: table.irrep_dims.clone(),
        };
        algebra.generators = group.generators.iter().map(|&g| algebra.combination(&[(g, cone())])).collect();
        algebra.isotypic = (0..table.num_irreps())
            .map(|i| {
                let w = real::<T>(table.irrep_dims[i] as f64 / group.order() as f64);
                let terms: Vec<_> = (0..group.order())
                    .map(|g| (g, table.characters[i][group.class_of(g)].scale(w)))
                    .collect();
                algebra.combination(&terms)
            })
            .collect();
        Ok(algebra)
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn top_degree(&self) -> usize {
        self.offsets.len().saturating_sub(2)
    }

    /// `Σ c_g R(g)` as a block-diagonal matrix on `C`.
    fn combination(&self, terms: &[(usize, Complex<T>)]) -> CMatrix<T> {
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (d, w) in self.offsets.windows(2).enumerate() {
            let size = w[1] - w[0];
            let mut block = CMatrix::zeros(size, size);
            for &(g, c) in terms {
                block += &self.blocks[g][d] * c;
            }
            m.view_mut((w[0], w[0]), (size, size)).copy_from(&block);
        }
        m
    }

    /// The equivariant triple `(x̄, ȳ; 1̄)` on `C / K` for `K = q^⊥`.
    fn triple_on(&self, group: &FiniteSubgroup<T>, q: &CMatrix<T>) -> Result<EquivariantTriple<T>> {
        let qa = q.adjoint();
        let pair = MatrixPair { m1: &qa * &self.x * q, m2: &qa * &self.y * q };
        let gens: Vec<CMatrix<T>> = self.generators.iter().map(|g| &qa * g * q).collect();
        let rho = Representation::from_generators(group, &gens, true, real(1e-7))?;
        let mut one = CVector::zeros(self.dim());
        one[0] = cone();
        EquivariantTriple::new(pair, &qa * one, rho)
    }

    fn complement(&self, k: &[CVector<T>], tols: &Tolerances<T>) -> CMatrix<T> {
        let dim = self.dim();
        if k.is_empty() {
            CMatrix::identity(dim, dim)
        } else {
            null_space_scaled(&CMatrix::from_columns(k).adjoint(), tols.rank_tol, T::one())
        }
    }

    /// The quotient of `C` by the smallest Γ-stable ideal containing `seeds`.
    pub fn quotient(&self, group: &FiniteSubgroup<T>, seeds: &[CVector<T>], tols: &Tolerances<T>) -> Result<EquivariantTriple<T>> {
        let mut ops: Vec<&CMatrix<T>> = vec![&self.x, &self.y];
        ops.extend(self.generators.iter());
        let apply: Vec<_> = ops.iter().map(|m| move |w: &CVector<T>| *m * w).collect();
        let span = closed_span(&apply, seeds, tols.rank_tol, T::one(), self.dim() + 1);
        let q = self.complement(&span.basis, tols);
        if q.ncols() != group.order() {
            return Err(Error::Dimension(format!(
                "quotient of dimension {} for a group of order {}",
                q.ncols(),
                group.order()
            )));
        }
        self.triple_on(group, &q)
    }

    /// Multiplicity of each irrep in `C`.
    fn multiplicities(&self) -> Vec<usize> {
        self.isotypic
            .iter()
            .zip(&self.irrep_dims)
            .map(|(p, &d)| (to_f64(p.trace().re) / d as f64).round() as usize)
            .collect()
    }

    /// One random cluster: peels irreducible socle pieces of surplus irreps
    /// until `C / K` is of regular type. `C / K` is tracked by an orthonormal
    /// basis `q` of `K^⊥` and the compressed operators `q^H x q`, `q^H y q`.
    /// Fails at a dead end (no socle piece of a surplus irrep).
    pub fn random_cluster<R: Rng + ?Sized>(
        &self,
        group: &FiniteSubgroup<T>,
        tols: &Tolerances<T>,
        rng: &mut R,
    ) -> Result<EquivariantTriple<T>> {
        let dim = self.dim();
        let mut q = CMatrix::<T>::identity(dim, dim);
        let (mut x, mut y) = (self.x.clone(), self.y.clone());
        let mut mult = self.multiplicities();
        let gen_ops: Vec<_> = self.generators.iter().map(|m| move |w: &CVector<T>| m * w).collect();
        let piece_tol = tols.rank_tol.sqrt();
        loop {
            let surplus: Vec<usize> = (0..mult.len()).filter(|&i| mult[i] > self.irrep_dims[i]).collect();
            if surplus.is_empty() {
                if mult != self.irrep_dims {
                    return Err(Error::Dimension(format!("quotient multiplicities {mult:?}")));
                }
                return self.triple_on(group, &q);
            }
            let socle = &q * null_space_gram(&vstack(&[x.clone(), y.clone()]), tols.rank_tol, T::one());
            // a generic Hermitian element of the group algebra acts on an
            // isotypic socle as A ⊗ I, so its eigenspaces have rank one
            let terms: Vec<_> = (0..group.order()).map(|g| (g, random_complex::<T, _>(rng))).collect();
            let a = self.combination(&terms);
            let a = &a + a.adjoint();
            let mut pieces: Vec<CVector<T>> = Vec::new();
            for &i in &surplus {
                let u = range_basis(&(&self.isotypic[i] * &socle), piece_tol);
                if u.ncols() == 0 {
                    continue;
                }
                let local = u.adjoint() * &a * &u;
                let eig = SymmetricEigen::new((&local + local.adjoint()).map(|z| z.scale(real(0.5))));
                let j = rng.random_range(0..eig.eigenvalues.len());
                let lambda = eig.eigenvalues[j];
                let gap = piece_tol * eig.eigenvalues.iter().fold(T::one(), |m, v| m.max(v.abs()));
                let space: Vec<CVector<T>> = (0..eig.eigenvalues.len())
                    .filter(|&k| (eig.eigenvalues[k] - lambda).abs() <= gap)
                    .map(|k| eig.eigenvectors.column(k).into_owned())
                    .collect();
                let coeffs = random_vector::<T, _>(rng, space.len());
                let w_local = space.iter().zip(coeffs.iter()).fold(CVector::zeros(u.ncols()), |acc, (v, c)| acc + v * *c);
                let w = &u * w_local;
                let piece = closed_span(&gen_ops, &[w.unscale(vec_norm(&w))], tols.rank_tol, T::one(), group.order());
                if piece.basis.len() != self.irrep_dims[i] {
                    return Err(Error::Dimension(format!(
                        "socle piece of dimension {} for an irrep of dimension {}",
                        piece.basis.len(),
                        self.irrep_dims[i]
                    )));
                }
                mult[i] -= 1;
                pieces.extend(piece.basis);
            }
            if pieces.is_empty() {
                return Err(Error::Dimension("no removable socle piece".into()));
            }
            let b = orthogonal_complement(&range_basis(&(q.adjoint() * CMatrix::from_columns(&pieces)), piece_tol));
            x = b.adjoint() * x * &b;
            y = b.adjoint() * y * &b;
            q = q * b;
        }
    }
}

/// Draws origin-supported stable triples by [`CoinvariantAlgebra::random_cluster`],
/// keeping those that pass the stability test.
pub fn sample_coinvariant_fiber<T: Real, R: Rng + ?Sized>(
    algebra: &CoinvariantAlgebra<T>,
    group: &FiniteSubgroup<T>,
    table: &CharacterTable<T>,
    count: usize,
    max_attempts: usize,
    tols: &Tolerances<T>,
    rng: &mut R,
) -> Result<Vec<EquivariantTriple<T>>> {
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < max_attempts {
        attempts += 1;
        let Ok(e) = algebra.random_cluster(group, tols, rng) else {
            continue;
        };
        if e.stacky_stability(group, table, tols).is_ok_and(|s| s.is_stable()) {
            out.push(e);
        }
    }
    if out.is_empty() && count > 0 {
        return Err(Error::FiberSampling { attempts });
    }
    Ok(out)
}
