//! The invariant ring `ℂ[z₁, z₂]^Γ`: Reynolds operator, Molien series,
//! minimal generators, the single relation among them and the induced
//! coordinates on `ℂ²/Γ`.
//!
//! Homogeneous pieces are handled in the scaled basis
//! `√C(d, a) z₁^a z₂^{d−a}`, where every substitution matrix is unitary, so
//! rank decisions stay well conditioned up to the high degrees of E₈.

mod polynomial;

pub use polynomial::Polynomial;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commuting::MatrixPair;
use crate::error::{Error, Result};
use crate::group::{AdeLabel, FiniteSubgroup, GroupElement};
use crate::linalg::null_space_scaled;
use crate::scalar::{cone, czero, modulus, random_complex, real, to_f64, vec_norm, CMatrix, CVector, Complex, Real};
use crate::tolerance::Tolerances;

const RELATION_CHECK_POINTS: usize = 100;
const RELATION_SEED: u64 = 0x002e_1a7e;

/// `√C(d, a)` for `a = 0..=d`; scaled coordinates are `c_a / √C(d, a)`.
pub(crate) fn binomial_sqrt<T: Real>(d: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(d + 1);
    let mut c = 1.0f64;
    for a in 0..=d {
        out.push(real::<T>(c.sqrt()));
        c = c * (d - a) as f64 / (a + 1) as f64;
    }
    out
}

/// Coefficients of `(p z₁ + q z₂)^k` indexed by the `z₁` exponent.
fn linear_power<T: Real>(p: Complex<T>, q: Complex<T>, k: usize) -> Vec<Complex<T>> {
    let mut out = vec![cone::<T>()];
    for _ in 0..k {
        let mut next = vec![czero::<T>(); out.len() + 1];
        for (a, &c) in out.iter().enumerate() {
            next[a + 1] += c * p;
            next[a] += c * q;
        }
        out = next;
    }
    out
}

fn convolve<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = vec![czero::<T>(); x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Matrix of `f ↦ γ⊙f` on degree-`d` forms in the scaled basis (unitary).
pub fn substitution_matrix<T: Real>(gamma: &GroupElement<T>, d: usize) -> CMatrix<T> {
    let (a, b, c, dd) = gamma.abcd();
    let s = binomial_sqrt::<T>(d);
    let mut m = CMatrix::zeros(d + 1, d + 1);
    for i in 0..=d {
        // z₁^i z₂^{d−i} ↦ (a z₁ + c z₂)^i (b z₁ + d z₂)^{d−i}
        let col = convolve(&linear_power(a, c, i), &linear_power(b, dd, d - i));
        for (k, &v) in col.iter().enumerate() {
            m[(k, i)] = v * s[i] / s[k];
        }
    }
    m
}

/// Averaged substitution matrix on degree-`d` forms (scaled basis); an
/// orthogonal projector onto the invariants.
pub fn reynolds_matrix<T: Real>(group: &FiniteSubgroup<T>, d: usize) -> CMatrix<T> {
    let mut r = CMatrix::zeros(d + 1, d + 1);
    for g in &group.elements {
        r += substitution_matrix(g, d);
    }
    r / Complex::new(real::<T>(group.order() as f64), T::zero())
}

/// `(1/|Γ|) Σ_γ γ⊙f`.
pub fn reynolds<T: Real>(f: &Polynomial<T>, group: &FiniteSubgroup<T>) -> Polynomial<T> {
    let n = Complex::new(real::<T>(group.order() as f64), T::zero());
    group
        .elements
        .iter()
        .fold(Polynomial::zero(), |acc, g| acc.add(&f.substitute(g)))
        .scale(cone::<T>() / n)
}

/// Dimensions of the invariants in degrees `0..=degree_cap`, from
/// `(1/|Γ|) Σ_γ 1/det(I − tγ)`. For `γ ∈ SU(2)` the series of one element
/// obeys `h_k = tr(γ) h_{k−1} − h_{k−2}`.
pub fn molien_series<T: Real>(group: &FiniteSubgroup<T>, degree_cap: usize) -> Result<Vec<usize>> {
    let mut sums = vec![czero::<T>(); degree_cap + 1];
    for g in &group.elements {
        let tau = g.trace();
        let (mut prev, mut cur) = (czero::<T>(), cone::<T>());
        for s in sums.iter_mut() {
            *s += cur;
            let next = tau * cur - prev;
            prev = cur;
            cur = next;
        }
    }
    let n = real::<T>(group.order() as f64);
    sums.iter()
        .enumerate()
        .map(|(d, s)| {
            let v = to_f64(s.re / n);
            let rounded = v.round();
            if (v - rounded).abs() > 1e-6 || to_f64(s.im / n).abs() > 1e-6 {
                Err(Error::MolienNotInteger { degree: d, value: v })
            } else {
                Ok(rounded as usize)
            }
        })
        .collect()
}

/// Row-reduces the rows of `rows` (scaled coordinates) so each has a distinct
/// leading `z₁` exponent, highest first.
fn echelon<T: Real>(mut rows: Vec<Vec<Complex<T>>>) -> Vec<Vec<Complex<T>>> {
    let Some(width) = rows.first().map(Vec::len) else {
        return rows;
    };
    let mut pivot_row = 0;
    for col in (0..width).rev() {
        if pivot_row == rows.len() {
            break;
        }
        let best = (pivot_row..rows.len())
            .max_by(|&i, &j| modulus(rows[i][col]).partial_cmp(&modulus(rows[j][col])).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty range");
        if modulus(rows[best][col]) <= real(1e-9) {
            continue;
        }
        rows.swap(pivot_row, best);
        let p = rows[pivot_row][col];
        for x in rows[pivot_row].iter_mut() {
            *x /= p;
        }
        for i in 0..rows.len() {
            if i != pivot_row {
                let f = rows[i][col];
                if f != czero() {
                    let src = rows[pivot_row].clone();
                    for (x, s) in rows[i].iter_mut().zip(&src) {
                        *x -= *s * f;
                    }
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

fn from_scaled<T: Real>(d: usize, scaled: &[Complex<T>]) -> Polynomial<T> {
    let s = binomial_sqrt::<T>(d);
    let coeffs: Vec<Complex<T>> = scaled.iter().zip(&s).map(|(c, w)| c.scale(*w)).collect();
    let p = Polynomial::from_homogeneous(d, &coeffs);
    let top = p.max_coefficient();
    p.cleaned(top * real(1e-12)).normalized()
}

pub(crate) fn to_scaled<T: Real>(d: usize, p: &Polynomial<T>) -> CVector<T> {
    let s = binomial_sqrt::<T>(d);
    CVector::from_iterator(d + 1, p.homogeneous_part(d).into_iter().zip(s).map(|(c, w)| c.unscale(w)))
}

/// Basis of the degree-`d` invariants: normalized polynomials with distinct
/// leading monomials, highest `z₁` exponent first.
pub fn invariant_basis<T: Real>(group: &FiniteSubgroup<T>, d: usize, rank_tol: T) -> Result<Vec<Polynomial<T>>> {
    let projector = reynolds_matrix(group, d);
    let kernel = null_space_scaled(&(CMatrix::identity(d + 1, d + 1) - projector), rank_tol, T::one());
    let rows: Vec<Vec<Complex<T>>> = (0..kernel.ncols()).map(|j| kernel.column(j).iter().copied().collect()).collect();
    let basis: Vec<Polynomial<T>> = echelon(rows).iter().map(|row| from_scaled(d, row)).collect();
    let expected = molien_series(group, d)?[d];
    if basis.len() != expected {
        return Err(Error::MolienMismatch { degree: d, found: basis.len(), expected });
    }
    Ok(basis)
}

/// A minimal homogeneous generator of the invariant ring.
#[derive(Debug, Clone, Serialize)]
pub struct Generator<T: Real> {
    #[serde(skip)]
    pub polynomial: Polynomial<T>,
    pub degree: usize,
}

/// `Σ c_e Π g_i^{e_i}` over generator exponent vectors `e`.
#[derive(Debug, Clone)]
pub struct Relation<T: Real> {
    pub degree: usize,
    pub terms: Vec<(Vec<usize>, Complex<T>)>,
}

impl<T: Real> Relation<T> {
    pub fn eval(&self, values: &[Complex<T>]) -> Complex<T> {
        self.terms.iter().fold(czero(), |acc, (e, c)| acc + *c * monomial_value(values, e))
    }

    pub fn coefficient(&self, exponents: &[usize]) -> Complex<T> {
        self.terms.iter().find(|(e, _)| e == exponents).map_or_else(czero, |t| t.1)
    }
}

fn monomial_value<T: Real>(values: &[Complex<T>], e: &[usize]) -> Complex<T> {
    values.iter().zip(e).fold(cone(), |acc, (v, &k)| acc * v.powu(k as u32))
}

/// Exponent vectors `e` with `Σ e_i w_i = d`.
fn weighted_monomials(weights: &[usize], d: usize) -> Vec<Vec<usize>> {
    fn rec(weights: &[usize], d: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match weights.split_first() {
            None => {
                if d == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((&w, rest)) => {
                for k in (0..=d / w).rev() {
                    prefix.push(k);
                    rec(rest, d - k * w, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    rec(weights, d, &mut Vec::new(), &mut out);
    out
}

fn generator_product<T: Real>(gens: &[Generator<T>], e: &[usize]) -> Polynomial<T> {
    gens.iter()
        .zip(e)
        .fold(Polynomial::monomial(0, 0), |acc, (g, &k)| acc.mul(&g.polynomial.pow(k)))
}

/// Orthonormalizes `w` against `basis` and appends it if it is new.
fn extend_basis<T: Real>(basis: &mut Vec<CVector<T>>, w: CVector<T>, rank_tol: T) -> bool {
    let norm0 = vec_norm(&w);
    if norm0 == T::zero() {
        return false;
    }
    let mut u = w.unscale(norm0);
    for _ in 0..2 {
        for q in basis.iter() {
            let c = q.dotc(&u);
            u.axpy(-c, q, cone());
        }
    }
    let n = vec_norm(&u);
    if n > rank_tol.sqrt() {
        basis.push(u.unscale(n));
        true
    } else {
        false
    }
}

/// Storage order: descending degree, pure powers first, then by leading
/// `z₁` exponent descending.
fn storage_key<T: Real>(g: &Generator<T>) -> (std::cmp::Reverse<usize>, bool, std::cmp::Reverse<usize>) {
    let d = g.degree;
    let pure = g.polynomial.terms().all(|(&(a, b), _)| a == d || b == d);
    let lead = g.polynomial.terms().map(|(&(a, _), _)| a).max().unwrap_or(0);
    (std::cmp::Reverse(d), !pure, std::cmp::Reverse(lead))
}

/// Greedy minimal generators up to `degree_cap`: in each degree, invariants
/// not in the span of products of lower-degree generators.
pub fn find_generators<T: Real>(group: &FiniteSubgroup<T>, degree_cap: usize, rank_tol: T) -> Result<Vec<Generator<T>>> {
    let mut gens: Vec<Generator<T>> = Vec::new();
    for d in 1..=degree_cap {
        let invariants = invariant_basis(group, d, rank_tol)?;
        if invariants.is_empty() {
            continue;
        }
        let weights: Vec<usize> = gens.iter().map(|g| g.degree).collect();
        let mut span = Vec::new();
        if !gens.is_empty() {
            for e in weighted_monomials(&weights, d) {
                extend_basis(&mut span, to_scaled(d, &generator_product(&gens, &e)), rank_tol);
            }
        }
        let mut fresh = Vec::new();
        for p in invariants {
            if extend_basis(&mut span, to_scaled(d, &p), rank_tol) {
                fresh.push(Generator { polynomial: p, degree: d });
            }
        }
        gens.extend(fresh);
    }
    let needed = if group.order() == 1 { 2 } else { 3 };
    if gens.len() < needed {
        return Err(Error::DegreeCapTooSmall(degree_cap));
    }
    gens.sort_by_key(storage_key);
    Ok(gens)
}

/// Lowest-degree relation among the generators, from the null space of the
/// coefficient matrix of generator monomials; normalized so the largest
/// coefficient is 1 (ties go to the lexicographically largest exponent).
pub fn find_relation<T: Real>(gens: &[Generator<T>], degree_cap: usize, rank_tol: T) -> Result<Relation<T>> {
    let weights: Vec<usize> = gens.iter().map(|g| g.degree).collect();
    for d in 1..=degree_cap {
        let monomials = weighted_monomials(&weights, d);
        if monomials.len() < 2 {
            continue;
        }
        let cols: Vec<CVector<T>> = monomials.iter().map(|e| to_scaled(d, &generator_product(gens, e))).collect();
        let norms: Vec<T> = cols.iter().map(vec_norm).collect();
        let matrix = CMatrix::from_fn(d + 1, monomials.len(), |i, j| cols[j][i].unscale(norms[j]));
        let kernel = null_space_scaled(&matrix, rank_tol, T::one());
        match kernel.ncols() {
            0 => continue,
            1 => {
                let coeffs: Vec<Complex<T>> = (0..monomials.len()).map(|j| kernel[(j, 0)].unscale(norms[j])).collect();
                let top = coeffs.iter().map(|c| modulus(*c)).fold(T::zero(), |a, b| a.max(b));
                let lead = monomials
                    .iter()
                    .zip(&coeffs)
                    .filter(|(_, c)| modulus(**c) >= top * (T::one() - real(1e-9)))
                    .max_by(|x, y| x.0.cmp(y.0))
                    .map(|(_, c)| *c)
                    .expect("nonzero kernel vector");
                let terms = monomials
                    .into_iter()
                    .zip(coeffs)
                    .map(|(e, c)| (e, c / lead))
                    .filter(|(_, c)| modulus(*c) > top * real(1e-12) / modulus(lead))
                    .collect();
                return Ok(Relation { degree: d, terms });
            }
            dim => return Err(Error::RelationNotUnique { degree: d, dim }),
        }
    }
    Err(Error::NoRelation(degree_cap))
}

/// Default degree cap for the generator search.
pub fn default_degree_cap(label: AdeLabel) -> usize {
    match label {
        AdeLabel::A(k) => 12.max(k + 1),
        AdeLabel::D(k) => 12.max(2 * (k - 2) + 2),
        AdeLabel::E6 => 12,
        AdeLabel::E7 => 18,
        AdeLabel::E8 => 30,
    }
}

/// Generators, relation and Molien data of `ℂ[z₁, z₂]^Γ`.
#[derive(Debug, Clone)]
pub struct InvariantRingModel<T: Real> {
    pub label: Option<AdeLabel>,
    pub generators: Vec<Generator<T>>,
    pub relation: Option<Relation<T>>,
    pub degree_cap: usize,
    pub molien: Vec<usize>,
}

impl<T: Real> InvariantRingModel<T> {
    /// Builds generators up to `degree_cap`; the relation is searched up to
    /// twice the top generator degree when `with_relation` is set.
    pub fn build(group: &FiniteSubgroup<T>, degree_cap: usize, with_relation: bool, rank_tol: T) -> Result<Self> {
        let generators = find_generators(group, degree_cap, rank_tol)?;
        let top = generators.iter().map(|g| g.degree).max().unwrap_or(0);
        let relation = if with_relation { Some(find_relation(&generators, 2 * top, rank_tol)?) } else { None };
        Ok(InvariantRingModel {
            label: group.label,
            generators,
            relation,
            degree_cap,
            molien: molien_series(group, degree_cap)?,
        })
    }

    pub fn evaluate(&self, p: [Complex<T>; 2]) -> Vec<Complex<T>> {
        self.generators.iter().map(|g| g.polynomial.eval(p)).collect()
    }

    /// Largest `|relation(g(z))|` over seeded random points with `|z| = 1`.
    pub fn relation_residual(&self) -> Option<T> {
        let relation = self.relation.as_ref()?;
        let mut rng = ChaCha8Rng::seed_from_u64(RELATION_SEED);
        let worst = (0..RELATION_CHECK_POINTS)
            .map(|_| {
                let z = [random_complex::<T, _>(&mut rng), random_complex::<T, _>(&mut rng)];
                let n = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
                let z = [z[0].unscale(n), z[1].unscale(n)];
                modulus(relation.eval(&self.evaluate(z)))
            })
            .fold(T::zero(), |a, b| a.max(b));
        Some(worst)
    }

    /// Generator values at the support of an equivariant pair. Every point of
    /// the joint spectrum must give the same values.
    pub fn quotient_coordinates(&self, pair: &MatrixPair<T>, tols: &Tolerances<T>) -> Result<Vec<Complex<T>>> {
        let spectrum = pair.joint_spectrum(tols)?;
        let values: Vec<Vec<Complex<T>>> = spectrum.points.iter().map(|&p| self.evaluate(p)).collect();
        let k = self.generators.len();
        let n = real::<T>(values.len() as f64);
        let mean: Vec<Complex<T>> = (0..k).map(|i| values.iter().fold(czero::<T>(), |a, v| a + v[i]).unscale(n)).collect();
        let spread = values
            .iter()
            .flat_map(|v| v.iter().zip(&mean).map(|(x, m)| modulus(*x - *m) / (T::one() + modulus(*m))))
            .fold(T::zero(), |a, b| a.max(b));
        if spread > real(1e-6) {
            return Err(Error::RepresentativeDependence { spread: to_f64(spread) });
        }
        Ok(mean)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn group(label: &str) -> FiniteSubgroup<f64> {
        FiniteSubgroup::build(label.parse::<AdeLabel>().unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn reynolds_examples() {
        let z2 = group("A1");
        assert!(reynolds(&Polynomial::monomial(1, 0), &z2).cleaned(1e-14).is_zero());
        let sq = Polynomial::monomial(2, 0);
        assert!(reynolds(&sq, &z2).sub(&sq).max_coefficient() < 1e-14);
        let z3 = group("A2");
        let w = Polynomial::monomial(1, 1);
        assert!(reynolds(&w, &z3).sub(&w).max_coefficient() < 1e-14);
    }

    #[test]
    fn molien_examples() {
        assert_eq!(molien_series(&group("A1"), 4).unwrap(), vec![1, 0, 3, 0, 5]);
        assert_eq!(molien_series(&FiniteSubgroup::<f64>::trivial(), 4).unwrap(), vec![1, 2, 3, 4, 5]);
        for label in ["D5", "E6", "E7", "E8"] {
            assert_eq!(molien_series(&group(label), 0).unwrap(), vec![1]);
        }
    }

    #[test]
    fn basis_examples() {
        let z2 = group("A1");
        assert_eq!(invariant_basis(&z2, 2, 1e-8).unwrap().len(), 3);
        assert!(invariant_basis(&z2, 1, 1e-8).unwrap().is_empty());
        assert_eq!(invariant_basis(&group("A2"), 3, 1e-8).unwrap().len(), 2);
    }

    #[test]
    fn generator_degrees() {
        let degrees = |l: &str| -> Vec<usize> {
            let g = group(l);
            let mut d: Vec<usize> = find_generators(&g, 12, 1e-8).unwrap().iter().map(|g| g.degree).collect();
            d.sort();
            d
        };
        assert_eq!(degrees("A1"), vec![2, 2, 2]);
        assert_eq!(degrees("A2"), vec![2, 3, 3]);
        assert_eq!(degrees("D4"), vec![4, 4, 6]);
        assert_eq!(degrees("E6"), vec![6, 8, 12]);
    }

    #[test]
    fn a_type_relations() {
        for n in 2..=4 {
            let g = FiniteSubgroup::<f64>::build(AdeLabel::cyclic(n).unwrap(), 1e-9).unwrap();
            let model = InvariantRingModel::build(&g, 12, true, 1e-8).unwrap();
            let rel = model.relation.as_ref().unwrap();
            assert!((rel.coefficient(&[1, 1, 0]) - cplx(1.0, 0.0)).norm() < 1e-8);
            assert!((rel.coefficient(&[0, 0, n]) - cplx(-1.0, 0.0)).norm() < 1e-8);
            assert_eq!(rel.terms.len(), 2);
        }
    }

    #[test]
    fn trivial_group_has_no_relation() {
        let g = FiniteSubgroup::<f64>::trivial();
        let gens = find_generators(&g, 4, 1e-8).unwrap();
        assert_eq!(gens.len(), 2);
        assert!(matches!(find_relation(&gens, 8, 1e-8), Err(Error::NoRelation(_))));
    }

    #[test]
    fn quotient_coordinates_of_z2_orbit() {
        let t = Tolerances::default();
        let z2 = group("A1");
        let model = InvariantRingModel::build(&z2, 12, true, 1e-8).unwrap();
        let e = crate::equivariant::orbit_to_triple(&z2, [cplx(1.0, 0.0), cplx(0.0, 0.0)], &t).unwrap();
        let q = model.quotient_coordinates(&e.pair, &t).unwrap();
        assert!((q[0] - cplx(1.0, 0.0)).norm() < 1e-12 && q[1].norm() < 1e-12 && q[2].norm() < 1e-12);
        assert!(model.relation.as_ref().unwrap().eval(&q).norm() < 1e-8);
        let origin = model.quotient_coordinates(&MatrixPair::zeros(2), &t).unwrap();
        assert!(origin.iter().all(|z| z.norm() < 1e-12));
    }
}
