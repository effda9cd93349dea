use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FiniteSubgroup;
use crate::error::{Error, Result};
use crate::linalg::{null_space, schur};
use crate::scalar::{czero, from_real, modulus, real, to_f64, CMatrix, Complex, Real};

const SPLIT_ATTEMPTS: usize = 8;

/// Irreducible character table, rows indexed by irreps and columns by classes.
#[derive(Debug, Clone)]
pub struct CharacterTable<T: Real> {
    pub classes: Vec<Vec<usize>>,
    /// `characters[i][j]` is the value of irrep `i` on class `j`.
    pub characters: Vec<Vec<Complex<T>>>,
    pub irrep_dims: Vec<usize>,
    order: usize,
}

impl<T: Real> CharacterTable<T> {
    /// Class-algebra (Burnside–Dixon) computation: the normalized central
    /// characters are the common eigenvectors of the class-multiplication
    /// matrices, split by a random real combination.
    pub(super) fn compute(group: &FiniteSubgroup<T>) -> Result<Self> {
        let classes = group.conjugacy_classes().to_vec();
        let k = classes.len();
        let order = group.order();

        // structure[j] has entry (l, m) = #{x ∈ C_j : x⁻¹ z_m ∈ C_l}
        let structure: Vec<CMatrix<T>> = (0..k)
            .map(|j| {
                CMatrix::from_fn(k, k, |l, m| {
                    let z = classes[m][0];
                    let count = classes[j]
                        .iter()
                        .filter(|&&x| group.class_of(group.mul(group.inverses[x], z)) == l)
                        .count();
                    from_real(real::<T>(count as f64))
                })
            })
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c1a5);
        for _ in 0..SPLIT_ATTEMPTS {
            let mut combo = CMatrix::<T>::zeros(k, k);
            for m in &structure {
                combo += m * from_real(real::<T>(rng.random::<f64>() + 0.5));
            }
            let Ok((_, t)) = schur(&combo) else {
                continue;
            };
            let eigs: Vec<Complex<T>> = (0..k).map(|i| t[(i, i)]).collect();
            let scale = eigs.iter().map(|&z| modulus(z)).fold(T::one(), |a, b| a.max(b));
            let min_gap = (0..k)
                .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
                .map(|(i, j)| modulus(eigs[i] - eigs[j]))
                .fold(T::max_value().unwrap_or(real(1e300)), |a, b| a.min(b));
            if k > 1 && min_gap < real::<T>(1e-6) * scale {
                continue;
            }
            let mut rows = Vec::with_capacity(k);
            for &lambda in &eigs {
                let shifted = &combo - CMatrix::identity(k, k) * lambda;
                let ns = null_space(&shifted, real(1e-8));
                if ns.ncols() == 0 {
                    return Err(Error::CharacterSplit { attempts: SPLIT_ATTEMPTS });
                }
                let w = ns.column(0).into_owned();
                let w0 = w[0];
                if modulus(w0) < real(1e-12) {
                    return Err(Error::CharacterSplit { attempts: SPLIT_ATTEMPTS });
                }
                let omega: Vec<Complex<T>> = w.iter().map(|&x| x / w0).collect();
                let weight = omega
                    .iter()
                    .zip(&classes)
                    .fold(T::zero(), |acc, (&o, c)| acc + o.norm_sqr() / real::<T>(c.len() as f64));
                let dim = (real::<T>(order as f64) / weight).sqrt();
                let rounded = to_f64(dim).round();
                if (to_f64(dim) - rounded).abs() > 1e-6 {
                    return Err(Error::NonIntegerMultiplicity { value: to_f64(dim) });
                }
                let chi: Vec<Complex<T>> = omega
                    .iter()
                    .zip(&classes)
                    .map(|(&o, c)| o * real::<T>(rounded) / real::<T>(c.len() as f64))
                    .collect();
                rows.push((rounded as usize, chi));
            }
            rows.sort_by(|a, b| compare_rows(a, b));
            let irrep_dims = rows.iter().map(|r| r.0).collect();
            let characters = rows.into_iter().map(|r| r.1).collect();
            return Ok(CharacterTable { classes, characters, irrep_dims, order });
        }
        Err(Error::CharacterSplit { attempts: SPLIT_ATTEMPTS })
    }

    pub fn num_irreps(&self) -> usize {
        self.irrep_dims.len()
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    /// `⟨a, b⟩ = (1/|Γ|) Σ_classes |C| a(C) conj(b(C))`.
    pub fn inner(&self, a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
        let mut acc = czero();
        for ((x, y), c) in a.iter().zip(b).zip(&self.classes) {
            acc += *x * y.conj() * real::<T>(c.len() as f64);
        }
        acc / real::<T>(self.order as f64)
    }

    /// Largest `|⟨χ_i, χ_j⟩ − δ_ij|`.
    pub fn orthogonality_defect(&self) -> T {
        let mut worst = T::zero();
        for (i, a) in self.characters.iter().enumerate() {
            for (j, b) in self.characters.iter().enumerate() {
                let target = if i == j { Complex::new(T::one(), T::zero()) } else { czero() };
                worst = worst.max(modulus(self.inner(a, b) - target));
            }
        }
        worst
    }

    /// Multiplicities of each irrep in a class function, rounded after a
    /// check against `tol`.
    pub fn decompose_character(&self, chi: &[Complex<T>], tol: T) -> Result<Vec<usize>> {
        self.characters
            .iter()
            .map(|row| {
                let m = self.inner(chi, row);
                let rounded = to_f64(m.re).round();
                if (to_f64(m.re) - rounded).abs() > to_f64(tol) || m.im.abs() > tol || rounded < 0.0 {
                    Err(Error::NonIntegerMultiplicity { value: to_f64(m.re) })
                } else {
                    Ok(rounded as usize)
                }
            })
            .collect()
    }

    /// Index of the trivial character.
    pub fn trivial_index(&self) -> usize {
        0
    }
}

fn compare_rows<T: Real>(a: &(usize, Vec<Complex<T>>), b: &(usize, Vec<Complex<T>>)) -> std::cmp::Ordering {
    let key = |r: &(usize, Vec<Complex<T>>)| {
        let vals: Vec<(i64, i64)> = r
            .1
            .iter()
            .map(|z| ((-to_f64(z.re) * 1e6).round() as i64, (-to_f64(z.im) * 1e6).round() as i64))
            .collect();
        (r.0, vals)
    };
    key(a).cmp(&key(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AdeLabel;

    fn table(label: &str) -> CharacterTable<f64> {
        let g = FiniteSubgroup::<f64>::build(label.parse::<AdeLabel>().unwrap(), 1e-9).unwrap();
        g.character_table().unwrap()
    }

    #[test]
    fn z2_table() {
        let t = table("A1");
        assert_eq!(t.irrep_dims, vec![1, 1]);
        let expect = [[1.0, 1.0], [1.0, -1.0]];
        for (row, e) in t.characters.iter().zip(expect) {
            for (z, x) in row.iter().zip(e) {
                assert!((z.re - x).abs() < 1e-10 && z.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn quaternion_dims() {
        assert_eq!(table("D4").irrep_dims, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn icosahedral_dims() {
        let t = table("E8");
        let mut dims = t.irrep_dims.clone();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
        assert_eq!(dims.iter().map(|d| d * d).sum::<usize>(), 120);
        assert!(t.orthogonality_defect() < 1e-8);
    }

    #[test]
    fn trivial_row_first() {
        for label in ["A4", "D6", "E6", "E7"] {
            let t = table(label);
            for z in &t.characters[0] {
                assert!((z.re - 1.0).abs() < 1e-10 && z.im.abs() < 1e-10, "{label}");
            }
        }
    }
}
