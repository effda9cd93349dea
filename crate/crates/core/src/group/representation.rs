use super::{CharacterTable, FiniteSubgroup};
use crate::error::{Error, Result};
use crate::scalar::{cone, frobenius, real, to_f64, CMatrix, Complex, Real};

/// A representation (or, with `is_anti`, an anti-representation) of a finite
/// subgroup, stored as one matrix per group element.
#[derive(Debug, Clone)]
pub struct Representation<T: Real> {
    pub dim: usize,
    pub matrices: Vec<CMatrix<T>>,
    /// Marks a representation of the opposite group: `ρ(γ₁γ₂) = ρ(γ₂)ρ(γ₁)`.
    pub is_anti: bool,
}

impl<T: Real> Representation<T> {
    /// Right-multiplication permutation action `ρ(γ) e_h = e_{hγ}`, an
    /// anti-representation whose character is `(|Γ|, 0, …, 0)`.
    pub fn regular(group: &FiniteSubgroup<T>) -> Self {
        let n = group.order();
        let matrices = (0..n)
            .map(|g| {
                let mut m = CMatrix::zeros(n, n);
                for h in 0..n {
                    m[(group.mul(h, g), h)] = cone();
                }
                m
            })
            .collect();
        Representation { dim: n, matrices, is_anti: true }
    }

    /// `dim` copies of the trivial representation.
    pub fn trivial(group: &FiniteSubgroup<T>, dim: usize, is_anti: bool) -> Self {
        Representation {
            dim,
            matrices: vec![CMatrix::identity(dim, dim); group.order()],
            is_anti,
        }
    }

    /// The defining two-dimensional representation `Q` (a homomorphism).
    pub fn defining(group: &FiniteSubgroup<T>) -> Self {
        let matrices = group
            .elements
            .iter()
            .map(|e| CMatrix::from_fn(2, 2, |i, j| e.matrix[(i, j)]))
            .collect();
        Representation { dim: 2, matrices, is_anti: false }
    }

    /// Extends matrices given on the group's generators to every element along
    /// the breadth-first words, then verifies closure on all relations
    /// `ρ(h·g)` for `g` a generator.
    pub fn from_generators(
        group: &FiniteSubgroup<T>,
        generator_matrices: &[CMatrix<T>],
        is_anti: bool,
        tol: T,
    ) -> Result<Self> {
        if generator_matrices.len() != group.generators.len() {
            return Err(Error::Dimension(format!(
                "{} generator matrices for {} generators",
                generator_matrices.len(),
                group.generators.len()
            )));
        }
        let dim = generator_matrices.first().map_or(1, |m| m.nrows());
        let mut matrices: Vec<CMatrix<T>> = Vec::with_capacity(group.order());
        for word in &group.words {
            let m = match *word {
                None => CMatrix::identity(dim, dim),
                Some((parent, j)) => compose(&matrices[parent], &generator_matrices[j], is_anti),
            };
            matrices.push(m);
        }
        let rep = Representation { dim, matrices, is_anti };
        let residual = rep.relation_residual(group);
        if residual > tol * real::<T>(dim as f64).max(T::one()) {
            return Err(Error::NotARepresentation { residual: to_f64(residual) });
        }
        Ok(rep)
    }

    /// Matrices on the group's generating set.
    pub fn generator_matrices(&self, group: &FiniteSubgroup<T>) -> Vec<CMatrix<T>> {
        group.generators.iter().map(|&g| self.matrices[g].clone()).collect()
    }

    /// Largest Frobenius defect of `ρ(h·g) = ρ(h)ρ(g)` (or `ρ(g)ρ(h)` when
    /// anti) over all elements `h` and generators `g`.
    pub fn relation_residual(&self, group: &FiniteSubgroup<T>) -> T {
        let mut worst = T::zero();
        for h in 0..group.order() {
            for &g in &group.generators {
                let lhs = &self.matrices[group.mul(h, g)];
                let rhs = compose(&self.matrices[h], &self.matrices[g], self.is_anti);
                worst = worst.max(frobenius(&(lhs - rhs)));
            }
        }
        worst
    }

    /// Character values on the conjugacy classes of `table`.
    pub fn character(&self, table: &CharacterTable<T>) -> Vec<Complex<T>> {
        table.classes.iter().map(|c| self.matrices[c[0]].trace()).collect()
    }

    pub fn decompose(&self, table: &CharacterTable<T>, tol: T) -> Result<Vec<usize>> {
        table.decompose_character(&self.character(table), tol)
    }

    /// Projector `(1/|Γ|) Σ_γ ρ(γ)` onto the Γ-fixed subspace.
    pub fn fixed_projector(&self) -> CMatrix<T> {
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for m in &self.matrices {
            p += m;
        }
        p / Complex::new(real::<T>(self.matrices.len() as f64), T::zero())
    }

    /// Conjugated representation `g ρ g⁻¹`.
    pub fn conjugated(&self, g: &CMatrix<T>, g_inv: &CMatrix<T>) -> Self {
        Representation {
            dim: self.dim,
            matrices: self.matrices.iter().map(|m| g * m * g_inv).collect(),
            is_anti: self.is_anti,
        }
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        let id = CMatrix::identity(self.dim, self.dim);
        self.matrices.iter().all(|m| frobenius(&(m * m.adjoint() - &id)) <= tol)
    }
}

/// `ρ(parent · g)` from `ρ(parent)` and `ρ(g)`.
fn compose<T: Real>(parent: &CMatrix<T>, g: &CMatrix<T>, is_anti: bool) -> CMatrix<T> {
    if is_anti {
        g * parent
    } else {
        parent * g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AdeLabel;

    fn group(label: &str) -> FiniteSubgroup<f64> {
        FiniteSubgroup::build(label.parse::<AdeLabel>().unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn regular_z2_is_swap() {
        let g = group("A1");
        let reg = Representation::regular(&g);
        assert_eq!(reg.dim, 2);
        assert!(reg.is_anti);
        assert_eq!(reg.matrices[0], CMatrix::identity(2, 2));
        assert_eq!(reg.matrices[1][(0, 1)], cone());
        assert_eq!(reg.matrices[1][(1, 0)], cone());
    }

    #[test]
    fn regular_is_anti_homomorphism() {
        let g = group("D5");
        let reg = Representation::regular(&g);
        for a in 0..g.order() {
            for b in 0..g.order() {
                let lhs = &reg.matrices[g.mul(a, b)];
                let rhs = &reg.matrices[b] * &reg.matrices[a];
                assert_eq!(lhs, &rhs);
            }
        }
    }

    #[test]
    fn regular_character_and_decomposition() {
        for label in ["A1", "D4", "E6"] {
            let g = group(label);
            let t = g.character_table().unwrap();
            let reg = Representation::regular(&g);
            let chi = reg.character(&t);
            assert!((chi[0].re - g.order() as f64).abs() < 1e-12);
            assert!(chi[1..].iter().all(|z| z.norm() < 1e-12));
            assert_eq!(reg.decompose(&t, 1e-6).unwrap(), t.irrep_dims);
        }
    }

    #[test]
    fn trivial_and_defining_decompositions() {
        let g = group("D4");
        let t = g.character_table().unwrap();
        let triv = Representation::trivial(&g, 1, false);
        assert_eq!(triv.decompose(&t, 1e-6).unwrap(), vec![1, 0, 0, 0, 0]);
        let q = Representation::defining(&g);
        assert_eq!(q.decompose(&t, 1e-6).unwrap(), vec![0, 0, 0, 0, 1]);
    }

    #[test]
    fn from_generators_rebuilds_regular() {
        let g = group("E6");
        let reg = Representation::regular(&g);
        let rebuilt = Representation::from_generators(&g, &reg.generator_matrices(&g), true, 1e-9).unwrap();
        for (a, b) in reg.matrices.iter().zip(&rebuilt.matrices) {
            assert!(frobenius(&(a - b)) < 1e-12);
        }
    }

    #[test]
    fn non_representation_rejected() {
        let g = group("A2");
        let bad = vec![CMatrix::identity(1, 1) * Complex::new(2.0, 0.0)];
        assert!(matches!(
            Representation::from_generators(&g, &bad, false, 1e-9),
            Err(Error::NotARepresentation { .. })
        ));
    }
}
