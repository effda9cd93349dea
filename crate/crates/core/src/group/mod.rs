//! Finite subgroups of SU(2): construction by generator closure, conjugacy
//! classes, character tables and representations.

mod characters;
mod representation;

pub use characters::CharacterTable;
pub use representation::Representation;

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cone, cplx, czero, modulus, real, root_of_unity, Complex, Real};

/// Hard cap on closure size; every ADE group has at most 120 elements.
const CLOSURE_CAP: usize = 1000;

/// ADE type of a finite subgroup of SU(2).
///
/// `A(k)` is the cyclic group of order `k + 1`, `D(k)` (k ≥ 4) the binary
/// dihedral group of order `4(k − 2)`, and `E6`/`E7`/`E8` the binary
/// tetrahedral, octahedral and icosahedral groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AdeLabel {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
}

impl AdeLabel {
    /// Cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLabel(format!("cyclic order {n}")));
        }
        Ok(AdeLabel::A(n - 1))
    }

    /// Binary dihedral group of order `4n`.
    pub fn binary_dihedral(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLabel(format!("binary dihedral parameter {n}")));
        }
        Ok(AdeLabel::D(n + 2))
    }

    pub fn order(&self) -> usize {
        match *self {
            AdeLabel::A(k) => k + 1,
            AdeLabel::D(k) => 4 * (k - 2),
            AdeLabel::E6 => 24,
            AdeLabel::E7 => 48,
            AdeLabel::E8 => 120,
        }
    }
}

impl fmt::Display for AdeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeLabel::A(k) => write!(f, "A{k}"),
            AdeLabel::D(k) => write!(f, "D{k}"),
            AdeLabel::E6 => write!(f, "E6"),
            AdeLabel::E7 => write!(f, "E7"),
            AdeLabel::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for AdeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidLabel(s.to_string());
        let mut chars = t.chars();
        let head = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rest: String = chars.filter(|c| *c != '(' && *c != ')').collect();
        let k: usize = rest.parse().map_err(|_| bad())?;
        match (head, k) {
            ('A', k) if k >= 1 => Ok(AdeLabel::A(k)),
            ('D', k) if k >= 4 => Ok(AdeLabel::D(k)),
            ('E', 6) => Ok(AdeLabel::E6),
            ('E', 7) => Ok(AdeLabel::E7),
            ('E', 8) => Ok(AdeLabel::E8),
            _ => Err(bad()),
        }
    }
}

/// An element of a finite subgroup of SU(2).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement<T: Real> {
    pub index: usize,
    pub matrix: Matrix2<Complex<T>>,
}

impl<T: Real> GroupElement<T> {
    /// Entries `(a, b, c, d)` in the layout `γ = ((a, c), (b, d))`.
    pub fn abcd(&self) -> (Complex<T>, Complex<T>, Complex<T>, Complex<T>) {
        let m = &self.matrix;
        (m[(0, 0)], m[(1, 0)], m[(0, 1)], m[(1, 1)])
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix[(0, 0)] + self.matrix[(1, 1)]
    }

    /// `γ · p` for a point `p` of ℂ² written as a column.
    pub fn apply(&self, p: [Complex<T>; 2]) -> [Complex<T>; 2] {
        let m = &self.matrix;
        [m[(0, 0)] * p[0] + m[(0, 1)] * p[1], m[(1, 0)] * p[0] + m[(1, 1)] * p[1]]
    }
}

/// A finite subgroup of SU(2) with its multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteSubgroup<T: Real> {
    pub label: Option<AdeLabel>,
    pub elements: Vec<GroupElement<T>>,
    /// `mult_table[i][j]` is the index of `elements[i] * elements[j]`.
    pub mult_table: Vec<Vec<usize>>,
    pub inverses: Vec<usize>,
    /// Element indices of the generating set used for the closure.
    pub generators: Vec<usize>,
    /// Breadth-first word for each element: `(parent, generator position)` with
    /// `element = parent * generators[position]`; `None` for the identity.
    pub words: Vec<Option<(usize, usize)>>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

fn quaternion<T: Real>(a: f64, b: f64, c: f64, d: f64) -> Matrix2<Complex<T>> {
    Matrix2::new(cplx(a, b), cplx(c, d), cplx(-c, d), cplx(a, -b))
}

fn diag_root<T: Real>(n: usize) -> Matrix2<Complex<T>> {
    let z = root_of_unity::<T>(n);
    Matrix2::new(z, czero(), czero(), z.conj())
}

fn generator_matrices<T: Real>(label: AdeLabel) -> Vec<Matrix2<Complex<T>>> {
    let half = 0.5;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    match label {
        AdeLabel::A(k) => vec![diag_root(k + 1)],
        AdeLabel::D(k) => vec![diag_root(2 * (k - 2)), quaternion(0.0, 0.0, 1.0, 0.0)],
        AdeLabel::E6 => vec![quaternion(0.0, 1.0, 0.0, 0.0), quaternion(half, half, half, half)],
        AdeLabel::E7 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            vec![quaternion(s, s, 0.0, 0.0), quaternion(half, half, half, half)]
        }
        AdeLabel::E8 => vec![
            quaternion(half, half, half, half),
            quaternion(phi / 2.0, 1.0 / (2.0 * phi), half, 0.0),
        ],
    }
}

fn matrix_distance<T: Real>(a: &Matrix2<Complex<T>>, b: &Matrix2<Complex<T>>) -> T {
    a.iter().zip(b.iter()).map(|(x, y)| modulus(*x - *y)).fold(T::zero(), |m, d| if d > m { d } else { m })
}

impl<T: Real> FiniteSubgroup<T> {
    /// Builds the group for `label` by closing its fixed generator set.
    pub fn build(label: AdeLabel, tol: T) -> Result<Self> {
        let g = Self::close(Some(label), generator_matrices(label), tol)?;
        if g.order() != label.order() {
            return Err(Error::InvalidLabel(format!(
                "{label}: closure has order {} instead of {}",
                g.order(),
                label.order()
            )));
        }
        Ok(g)
    }

    /// The trivial group `{I}`.
    pub fn trivial() -> Self {
        Self::close(None, Vec::new(), real(1e-9)).expect("trivial closure")
    }

    /// Closure of an arbitrary generator set of SU(2) matrices.
    pub fn close(label: Option<AdeLabel>, gens: Vec<Matrix2<Complex<T>>>, tol: T) -> Result<Self> {
        let identity = Matrix2::new(cone(), czero(), czero(), cone());
        let mut mats = vec![identity];
        let mut words: Vec<Option<(usize, usize)>> = vec![None];
        let find = |mats: &[Matrix2<Complex<T>>], m: &Matrix2<Complex<T>>| {
            mats.iter().position(|x| matrix_distance(x, m) < tol)
        };
        let mut head = 0;
        while head < mats.len() {
            for (j, g) in gens.iter().enumerate() {
                let p = mats[head] * g;
                if find(&mats, &p).is_none() {
                    if mats.len() >= CLOSURE_CAP {
                        return Err(Error::ClosureOverflow { cap: CLOSURE_CAP });
                    }
                    mats.push(p);
                    words.push(Some((head, j)));
                }
            }
            head += 1;
        }
        let n = mats.len();
        let mut mult_table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = mats[i] * mats[j];
                mult_table[i][j] = find(&mats, &p).ok_or(Error::ClosureOverflow { cap: n })?;
            }
        }
        let inverses = (0..n)
            .map(|i| mult_table[i].iter().position(|&k| k == 0).expect("inverse in finite group"))
            .collect();
        let generators = gens
            .iter()
            .map(|g| find(&mats, g).expect("generator is an element"))
            .collect();
        let elements = mats
            .into_iter()
            .enumerate()
            .map(|(index, matrix)| GroupElement { index, matrix })
            .collect();
        let mut group = FiniteSubgroup {
            label,
            elements,
            mult_table,
            inverses,
            generators,
            words,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mult_table[i][j]
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class = Vec::new();
            for g in 0..n {
                let y = self.mul(self.mul(g, x), self.inverses[g]);
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    class.push(y);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    /// Conjugacy classes as sorted element-index lists; the identity class is first.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn character_table(&self) -> Result<CharacterTable<T>> {
        CharacterTable::compute(self)
    }

    /// Largest deviation from unitarity or unit determinant over all elements.
    pub fn unitarity_defect(&self) -> T {
        let mut worst = T::zero();
        for e in &self.elements {
            let m = &e.matrix;
            let gram = m * m.adjoint();
            let id = Matrix2::new(cone(), czero(), czero(), cone());
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            worst = worst.max(matrix_distance(&gram, &id)).max(modulus(det - cone()));
        }
        worst
    }

    /// Whether the multiplication table is a Latin square.
    pub fn is_latin_square(&self) -> bool {
        let n = self.order();
        let mut seen = vec![false; n];
        for row in &self.mult_table {
            seen.iter_mut().for_each(|s| *s = false);
            for &k in row {
                if seen[k] {
                    return false;
                }
                seen[k] = true;
            }
        }
        for j in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for row in &self.mult_table {
                if seen[row[j]] {
                    return false;
                }
                seen[row[j]] = true;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(label: &str) -> FiniteSubgroup<f64> {
        FiniteSubgroup::build(label.parse().unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn a1_is_plus_minus_identity() {
        let g = group("A1");
        assert_eq!(g.order(), 2);
        let minus = &g.elements[1].matrix;
        assert!(modulus(minus[(0, 0)] + cone()) < 1e-12);
        assert!(modulus(minus[(1, 1)] + cone()) < 1e-12);
    }

    #[test]
    fn a2_elements_are_diagonal_powers() {
        let g = group("A2");
        assert_eq!(g.order(), 3);
        let w = root_of_unity::<f64>(3);
        for (k, e) in g.elements.iter().enumerate() {
            let wk = w.powu(k as u32);
            assert!(modulus(e.matrix[(0, 0)] - wk) < 1e-12);
            assert!(modulus(e.matrix[(1, 1)] - wk.conj()) < 1e-12);
        }
    }

    #[test]
    fn orders_match_labels() {
        for (label, order) in [("A1", 2), ("A7", 8), ("D4", 8), ("D7", 20), ("E6", 24), ("E7", 48), ("E8", 120)] {
            let g = group(label);
            assert_eq!(g.order(), order, "{label}");
            assert!(g.is_latin_square());
            assert!(g.unitarity_defect() < 1e-9);
            assert_eq!(g.inverses[0], 0);
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(group("A1").conjugacy_classes().len(), 2);
        assert_eq!(group("A2").conjugacy_classes().len(), 3);
        assert_eq!(group("D4").conjugacy_classes().len(), 5);
        assert_eq!(group("E8").conjugacy_classes().len(), 9);
        for label in ["D5", "E6", "E7"] {
            let g = group(label);
            assert_eq!(g.conjugacy_classes()[0], vec![0]);
            let total: usize = g.conjugacy_classes().iter().map(|c| c.len()).sum();
            assert_eq!(total, g.order());
        }
    }

    #[test]
    fn label_parsing() {
        assert_eq!("a3".parse::<AdeLabel>().unwrap(), AdeLabel::A(3));
        assert_eq!("D(5)".parse::<AdeLabel>().unwrap(), AdeLabel::D(5));
        assert!("D3".parse::<AdeLabel>().is_err());
        assert!("A0".parse::<AdeLabel>().is_err());
        assert!("E9".parse::<AdeLabel>().is_err());
        assert_eq!(AdeLabel::binary_dihedral(2).unwrap(), AdeLabel::D(4));
        assert_eq!(AdeLabel::cyclic(3).unwrap().to_string(), "A2");
    }
}
