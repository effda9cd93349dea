use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commuting::Triple;
use crate::linalg::{hstack, inverse_condition, null_space_scaled, unvectorize};
use crate::scalar::{modulus, random_complex, real, vec_norm, CMatrix, CVector, Real};
use crate::tolerance::Tolerances;

const INTERTWINER_SEED: u64 = 0x01e7_e5a3;
const INTERTWINER_SAMPLES: usize = 4;

/// An invertible `g` with `g m_i = m_i′ g` and `g v = v′`, if one exists.
///
/// Solves for `(g, λ)` in the null space of `g m_i − m_i′ g`, `g v − λ v′`
/// and samples combinations until `λ ≠ 0` and `g` is invertible.
pub fn intertwiner<T: Real>(a: &Triple<T>, b: &Triple<T>, tols: &Tolerances<T>) -> Option<CMatrix<T>> {
    let r = a.r();
    if b.r() != r {
        return None;
    }
    let n = r * r;
    let id = CMatrix::<T>::identity(r, r);
    let block = |ma: &CMatrix<T>, mb: &CMatrix<T>| {
        // vec(g m − m′ g) = (mᵀ ⊗ I − I ⊗ m′) vec g
        let op = ma.transpose().kronecker(&id) - id.kronecker(mb);
        hstack(&[op, CMatrix::zeros(n, 1)])
    };
    let mut v_row = CMatrix::zeros(r, n + 1);
    v_row.view_mut((0, 0), (r, n)).copy_from(&a.v.transpose().kronecker(&id));
    v_row.view_mut((0, n), (r, 1)).copy_from(&(-&b.v));
    let mut system = CMatrix::zeros(2 * n + r, n + 1);
    system.view_mut((0, 0), (n, n + 1)).copy_from(&block(&a.pair.m1, &b.pair.m1));
    system.view_mut((n, 0), (n, n + 1)).copy_from(&block(&a.pair.m2, &b.pair.m2));
    system.view_mut((2 * n, 0), (r, n + 1)).copy_from(&v_row);
    let scale = a.pair.scale().max(b.pair.scale()).max(vec_norm(&a.v)).max(vec_norm(&b.v));
    let kernel = null_space_scaled(&system, tols.rank_tol, scale);
    if kernel.ncols() == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(INTERTWINER_SEED);
    for attempt in 0..INTERTWINER_SAMPLES {
        let x: CVector<T> = if attempt == 0 && kernel.ncols() == 1 {
            kernel.column(0).into_owned()
        } else {
            let c = CVector::from_fn(kernel.ncols(), |_, _| random_complex(&mut rng));
            &kernel * c
        };
        let lambda = x[n];
        if modulus(lambda) <= tols.rank_tol.sqrt() * vec_norm(&x) {
            continue;
        }
        let g = unvectorize(&x.rows(0, n).into_owned(), r, r) / lambda;
        if inverse_condition(&g) > tols.rank_tol * real(10.0) {
            return Some(g);
        }
    }
    None
}

/// Whether two triples lie in the same `GL_r`-orbit.
pub fn are_conjugate<T: Real>(a: &Triple<T>, b: &Triple<T>, tols: &Tolerances<T>) -> bool {
    intertwiner(a, b, tols).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commuting::{random_cyclic_triple, random_invertible, MonomialIdeal};
    use crate::scalar::frobenius;

    #[test]
    fn conjugated_triples_are_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let tols = Tolerances::default();
        for r in 1..=5 {
            let t = random_cyclic_triple::<f64, _>(r, &mut rng);
            let g = random_invertible(r, &mut rng);
            let u = t.act(&g).unwrap();
            let h = intertwiner(&t, &u, &tols).expect("conjugate");
            assert!(frobenius(&(&h * &t.pair.m1 - &u.pair.m1 * &h)) < 1e-8);
            assert!(vec_norm(&(&h * &t.v - &u.v)) < 1e-8);
        }
    }

    #[test]
    fn different_staircases_are_not_conjugate() {
        let tols = Tolerances::default();
        let a = MonomialIdeal::from_partition(&[2, 1]).unwrap().to_triple::<f64>();
        let b = MonomialIdeal::from_partition(&[3]).unwrap().to_triple::<f64>();
        let c = MonomialIdeal::from_partition(&[1, 1, 1]).unwrap().to_triple::<f64>();
        assert!(!are_conjugate(&a, &b, &tols));
        assert!(!are_conjugate(&b, &c, &tols));
        assert!(are_conjugate(&a, &a, &tols));
    }
}
