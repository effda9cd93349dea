use rand::seq::IndexedRandom;
use rand::Rng;

use super::{partitions, MatrixPair, MonomialIdeal, Triple};
use crate::linalg::inverse_condition;
use crate::scalar::{random_complex, random_matrix, real, CMatrix, CVector, Complex, Real};

/// Families of commuting pairs used by the random samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// One monomial ideal at the origin, conjugated.
    Punctual,
    /// Ideals at distinct random points, conjugated.
    DistinctPoints,
    /// Ideals where at least two pieces share a support point.
    RepeatedPoints,
    /// `(A, p(A))` for a random matrix `A` and polynomial `p`.
    Polynomial,
    /// `(A, p(A))` with `A` diagonalizable with a repeated eigenvalue.
    Derogatory,
}

impl PairKind {
    pub const ALL: [PairKind; 5] = [
        PairKind::Punctual,
        PairKind::DistinctPoints,
        PairKind::RepeatedPoints,
        PairKind::Polynomial,
        PairKind::Derogatory,
    ];
}

/// Gaussian matrix redrawn until reasonably conditioned.
pub fn random_invertible<T: Real, R: Rng + ?Sized>(r: usize, rng: &mut R) -> CMatrix<T> {
    loop {
        let g: CMatrix<T> = random_matrix(rng, r, r) + CMatrix::identity(r, r);
        if r == 0 || inverse_condition(&g) > real(1e-2) {
            return g;
        }
    }
}

fn random_partition<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    partitions(n).choose(rng).expect("n > 0").clone()
}

/// Splits `r` into `parts` positive integers.
fn random_composition<R: Rng + ?Sized>(r: usize, parts: usize, rng: &mut R) -> Vec<usize> {
    let mut sizes = vec![1; parts];
    for _ in parts..r {
        let i = rng.random_range(0..parts);
        sizes[i] += 1;
    }
    sizes
}

fn ideal_sum<T: Real, R: Rng + ?Sized>(sizes: &[usize], points: &[[Complex<T>; 2]], rng: &mut R) -> Triple<T> {
    let mut acc: Option<Triple<T>> = None;
    for (&n, &p) in sizes.iter().zip(points) {
        let piece = MonomialIdeal::from_partition(&random_partition(n, rng)).expect("partition").to_triple::<T>();
        let piece = Triple { pair: piece.pair.shifted(p), v: piece.v };
        acc = Some(match acc {
            None => piece,
            Some(t) => {
                let v = CVector::from_iterator(t.r() + piece.r(), t.v.iter().chain(piece.v.iter()).copied());
                Triple { pair: t.pair.direct_sum(&piece.pair), v }
            }
        });
    }
    acc.expect("at least one piece")
}

fn random_point<T: Real, R: Rng + ?Sized>(rng: &mut R) -> [Complex<T>; 2] {
    [random_complex(rng), random_complex(rng)]
}

fn polynomial_pair<T: Real, R: Rng + ?Sized>(a: CMatrix<T>, rng: &mut R) -> MatrixPair<T> {
    let r = a.nrows();
    let degree = rng.random_range(0..r.max(1));
    let mut p = CMatrix::identity(r, r) * random_complex::<T, _>(rng);
    let mut power = CMatrix::identity(r, r);
    for _ in 0..degree {
        power = &power * &a;
        p += &power * random_complex::<T, _>(rng);
    }
    MatrixPair { m1: a, m2: p }
}

/// Random commuting pair of the given family, conjugated by a random `g`.
pub fn random_commuting_pair<T: Real, R: Rng + ?Sized>(r: usize, kind: PairKind, rng: &mut R) -> MatrixPair<T> {
    let base = match kind {
        PairKind::Punctual => ideal_sum(&[r], &[[Complex::new(T::zero(), T::zero()); 2]], rng).pair,
        PairKind::DistinctPoints => {
            let parts = rng.random_range(1..=r);
            let sizes = random_composition(r, parts, rng);
            let points: Vec<_> = (0..parts).map(|_| random_point(rng)).collect();
            ideal_sum(&sizes, &points, rng).pair
        }
        PairKind::RepeatedPoints if r >= 2 => {
            let parts = rng.random_range(2..=r);
            let sizes = random_composition(r, parts, rng);
            let mut points: Vec<_> = (0..parts).map(|_| random_point(rng)).collect();
            let j = rng.random_range(1..parts);
            points[j] = points[0];
            ideal_sum(&sizes, &points, rng).pair
        }
        PairKind::RepeatedPoints => MatrixPair::zeros(r),
        PairKind::Polynomial => polynomial_pair(random_matrix(rng, r, r), rng),
        PairKind::Derogatory => {
            let mut d: Vec<Complex<T>> = (0..r).map(|_| random_complex(rng)).collect();
            if r >= 2 {
                d[1] = d[0];
            }
            polynomial_pair(CMatrix::from_diagonal(&CVector::from_vec(d)), rng)
        }
    };
    let g = random_invertible(r, rng);
    base.conjugate(&g).expect("invertible")
}

/// Random stable triple: ideals at distinct points with the sum of their
/// cyclic vectors, conjugated by a random `g`.
pub fn random_cyclic_triple<T: Real, R: Rng + ?Sized>(r: usize, rng: &mut R) -> Triple<T> {
    let parts = rng.random_range(1..=r);
    let sizes = random_composition(r, parts, rng);
    let points: Vec<_> = (0..parts).map(|_| random_point(rng)).collect();
    let t = ideal_sum(&sizes, &points, rng);
    let g = random_invertible(r, rng);
    t.act(&g).expect("invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerance::Tolerances;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = Tolerances::default();
        for r in 1..=6 {
            for kind in PairKind::ALL {
                let p = random_commuting_pair::<f64, _>(r, kind, &mut rng);
                assert!(p.commutes(t.tol), "{kind:?} r={r}");
            }
        }
    }

    #[test]
    fn cyclic_triples_are_cyclic() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let t = Tolerances::default();
        for r in 1..=6 {
            assert!(random_cyclic_triple::<f64, _>(r, &mut rng).is_cyclic(&t));
        }
    }
}
