//! Dense complex linear algebra helpers: rank-revealing SVD, null spaces,
//! vectorized commutator operators, Hermitian exponentials, reordered Schur
//! forms and invariant-subspace closure.

use nalgebra::{Schur, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use crate::scalar::{cone, czero, frobenius, modulus, random_matrix, real, vec_norm, CMatrix, CVector, Complex, Real};

/// Thin singular value decomposition `a = u diag(σ) vᴴ`, `σ` decreasing.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    pub singular_values: Vec<T>,
    pub u: CMatrix<T>,
    pub v: CMatrix<T>,
}

/// Columns `p < q` of a column-major buffer with `m` rows.
fn column_pair<T>(data: &mut [T], m: usize, p: usize, q: usize) -> (&mut [T], &mut [T]) {
    let (left, right) = data.split_at_mut(q * m);
    (&mut left[p * m..(p + 1) * m], &mut right[..m])
}

/// `(a, b) ↦ (c a − s φ̄ b, s a + c φ̄ b)` on a pair of columns.
fn rotate_columns<T: Real>(a: &mut [Complex<T>], b: &mut [Complex<T>], c: T, s: T, phase: Complex<T>) {
    let conj = phase.conj();
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (u, w) = (*x, *y * conj);
        *x = u.scale(c) - w.scale(s);
        *y = u.scale(s) + w.scale(c);
    }
}

/// One-sided Jacobi on a matrix with at least as many rows as columns.
fn jacobi_tall<T: Real>(a: &CMatrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = CMatrix::<T>::identity(n, n);
    let eps = T::default_epsilon();
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (wp, wq) = column_pair(w.as_mut_slice(), m, p, q);
                let (mut alpha, mut beta, mut gamma) = (T::zero(), T::zero(), czero::<T>());
                for (x, y) in wp.iter().zip(wq.iter()) {
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = modulus(gamma);
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.unscale(g);
                let zeta = (beta - alpha) / (g + g);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                rotate_columns(wp, wq, c, c * t, phase);
                let (vp, vq) = column_pair(v.as_mut_slice(), n, p, q);
                rotate_columns(vp, vq, c, c * t, phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = (0..n).map(|j| vec_norm(&w.column(j).into_owned())).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    // columns that rotated to (numerically) nothing are replaced by an
    // orthonormal completion
    let top = order.first().map_or(T::zero(), |&k| norms[k]);
    let cutoff = eps * real::<T>(n as f64) * top;
    let live = order.iter().take_while(|&&k| norms[k] > cutoff && norms[k] > T::zero()).count();
    let mut u = CMatrix::from_fn(m, n, |i, j| if j < live { w[(i, order[j])].unscale(norms[order[j]]) } else { czero() });
    if live < n {
        let fill = orthogonal_complement(&u.columns(0, live).into_owned());
        u.columns_mut(live, n - live).copy_from(&fill.columns(0, n - live));
    }
    let v = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Svd { singular_values: order.iter().map(|&k| norms[k]).collect(), u, v }
}

/// Thin SVD by one-sided Jacobi rotations. Wide inputs go through the
/// adjoint; otherwise Jacobi runs on `Rᴴ` of a column-pivoted QR, which
/// converges in few sweeps.
pub fn svd<T: Real>(a: &CMatrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.adjoint());
        return Svd { singular_values: t.singular_values, u: t.v, v: t.u };
    }
    if n == 0 {
        return Svd { singular_values: Vec::new(), u: CMatrix::zeros(m, 0), v: CMatrix::zeros(0, 0) };
    }
    // a P = q r and rᴴ = u' σ v'ᴴ give a = (q v') σ (P u')ᴴ
    let qr = a.clone().col_piv_qr();
    let inner = jacobi_tall(&qr.r().adjoint());
    let mut pu = inner.u;
    qr.p().inv_permute_rows(&mut pu);
    Svd { singular_values: inner.singular_values, u: qr.q() * inner.v, v: pu }
}

/// Singular values sorted in decreasing order.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    svd(m).singular_values
}

/// Number of singular values above `rank_tol * σ_max`.
pub fn numerical_rank<T: Real>(m: &CMatrix<T>, rank_tol: T) -> usize {
    numerical_rank_scaled(m, rank_tol, T::zero())
}

/// Number of singular values above `rank_tol * max(σ_max, scale)`; the scale
/// keeps round-off in a numerically zero matrix from counting as rank.
pub fn numerical_rank_scaled<T: Real>(m: &CMatrix<T>, rank_tol: T, scale: T) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or_else(T::zero).max(scale);
    if top == T::zero() {
        return 0;
    }
    s.iter().filter(|&&x| x > rank_tol * top).count()
}

/// Orthonormal basis (as columns) of the null space of `m`.
pub fn null_space<T: Real>(m: &CMatrix<T>, rank_tol: T) -> CMatrix<T> {
    null_space_scaled(m, rank_tol, T::zero())
}

/// Orthonormal basis of the complement of the span of orthonormal columns.
pub fn orthogonal_complement<T: Real>(q: &CMatrix<T>) -> CMatrix<T> {
    let n = q.nrows();
    if q.ncols() == 0 {
        return CMatrix::identity(n, n);
    }
    let p = CMatrix::<T>::identity(n, n) - q * q.adjoint();
    let eig = SymmetricEigen::new((&p + p.adjoint()).map(|z| z.scale(real(0.5))));
    let half = real::<T>(0.5);
    let cols: Vec<CVector<T>> = (0..n)
        .filter(|&i| eig.eigenvalues[i] > half)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// Null space with threshold `rank_tol * max(σ_max, scale)`.
pub fn null_space_scaled<T: Real>(m: &CMatrix<T>, rank_tol: T, scale: T) -> CMatrix<T> {
    let n = m.ncols();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMatrix::identity(n, n);
    }
    let d = svd(m);
    let top = d.singular_values.iter().copied().fold(scale, |a, b| if b > a { b } else { a });
    if top == T::zero() {
        return CMatrix::identity(n, n);
    }
    let threshold = rank_tol * top;
    let rank = d.singular_values.iter().filter(|&&x| x > threshold).count();
    if m.nrows() >= n {
        let cols: Vec<CVector<T>> = (rank..n).map(|j| d.v.column(j).into_owned()).collect();
        return if cols.is_empty() { CMatrix::zeros(n, 0) } else { CMatrix::from_columns(&cols) };
    }
    orthogonal_complement(&d.v.columns(0, rank).into_owned())
}

/// Null space of a tall matrix through the Hermitian Gram matrix: its
/// eigenvectors with `σ ≤ √rank_tol · top` bound a candidate subspace, inside
/// which an SVD applies the `rank_tol` threshold. Much cheaper than a full
/// SVD when the null space is small.
pub fn null_space_gram<T: Real>(m: &CMatrix<T>, rank_tol: T, scale: T) -> CMatrix<T> {
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return CMatrix::identity(n, n);
    }
    let gram = m.adjoint() * m;
    let eig = SymmetricEigen::new((&gram + gram.adjoint()).map(|z| z.scale(real(0.5))));
    let top2 = eig.eigenvalues.iter().fold(scale * scale, |a, &b| a.max(b));
    let loose = rank_tol * top2;
    let cols: Vec<CVector<T>> = (0..n)
        .filter(|&i| eig.eigenvalues[i] <= loose)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        return CMatrix::zeros(n, 0);
    }
    let z = CMatrix::from_columns(&cols);
    let d = svd(&(m * &z));
    let threshold = rank_tol * top2.sqrt();
    let rank = d.singular_values.iter().filter(|&&x| x > threshold).count();
    &z * d.v.columns(rank, z.ncols() - rank)
}

/// Orthonormal basis of the column space of `m`, keeping left singular
/// vectors with `σ > tol · max(σ_max, 1)`.
pub fn range_basis<T: Real>(m: &CMatrix<T>, tol: T) -> CMatrix<T> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let d = svd(m);
    let top = d.singular_values.first().copied().unwrap_or_else(T::zero).max(T::one());
    let rank = d.singular_values.iter().filter(|&&x| x > tol * top).count();
    d.u.columns(0, rank).into_owned()
}

/// Column-major vectorization.
pub fn vectorize<T: Real>(m: &CMatrix<T>) -> CVector<T> {
    CVector::from_iterator(m.len(), m.iter().copied())
}

pub fn unvectorize<T: Real>(v: &CVector<T>, rows: usize, cols: usize) -> CMatrix<T> {
    CMatrix::from_iterator(rows, cols, v.iter().copied())
}

/// Matrix of `X ↦ A X` acting on `vec(X)` for `X` with `cols` columns.
pub fn left_mul_op<T: Real>(a: &CMatrix<T>, cols: usize) -> CMatrix<T> {
    CMatrix::identity(cols, cols).kronecker(a)
}

/// Matrix of `X ↦ X A` acting on `vec(X)` for `X` with `rows` rows.
pub fn right_mul_op<T: Real>(a: &CMatrix<T>, rows: usize) -> CMatrix<T> {
    a.transpose().kronecker(&CMatrix::identity(rows, rows))
}

/// Matrix of `X ↦ A X − X A` on `vec(X)`.
pub fn commutator_op<T: Real>(a: &CMatrix<T>) -> CMatrix<T> {
    let r = a.nrows();
    left_mul_op(a, r) - right_mul_op(a, r)
}

/// Stacks matrices with equal column counts vertically.
pub fn vstack<T: Real>(blocks: &[CMatrix<T>]) -> CMatrix<T> {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Stacks matrices with equal row counts horizontally.
pub fn hstack<T: Real>(blocks: &[CMatrix<T>]) -> CMatrix<T> {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), (rows, b.ncols())).copy_from(b);
        at += b.ncols();
    }
    out
}

/// `(e^{H}, e^{-H})` for Hermitian `H`.
pub fn expm_hermitian<T: Real>(h: &CMatrix<T>) -> (CMatrix<T>, CMatrix<T>) {
    let eig = SymmetricEigen::new(h.clone());
    let u = &eig.eigenvectors;
    let plus = CMatrix::from_diagonal(&CVector::from_iterator(
        h.nrows(),
        eig.eigenvalues.iter().map(|&l| Complex::new(l.exp(), T::zero())),
    ));
    let minus = CMatrix::from_diagonal(&CVector::from_iterator(
        h.nrows(),
        eig.eigenvalues.iter().map(|&l| Complex::new((-l).exp(), T::zero())),
    ));
    (u * plus * u.adjoint(), u * minus * u.adjoint())
}

/// Principal square root and its inverse of a Hermitian positive definite matrix.
pub fn sqrt_hpd<T: Real>(p: &CMatrix<T>) -> (CMatrix<T>, CMatrix<T>) {
    let eig = SymmetricEigen::new(p.clone());
    let u = &eig.eigenvectors;
    let n = p.nrows();
    let s = CVector::from_iterator(n, eig.eigenvalues.iter().map(|&l| Complex::new(l.sqrt(), T::zero())));
    let si = CVector::from_iterator(n, eig.eigenvalues.iter().map(|&l| Complex::new(T::one() / l.sqrt(), T::zero())));
    (
        u * CMatrix::from_diagonal(&s) * u.adjoint(),
        u * CMatrix::from_diagonal(&si) * u.adjoint(),
    )
}

/// Complex Schur form `a = q t q^H` with `t` upper triangular.
///
/// The input is shifted by `‖a‖_F · I` so that deflation tests are not
/// relative to vanishing diagonal entries (nilpotent input). The QR
/// iteration is capped; if it stalls the matrix is rotated by a fixed
/// pseudo-random unitary and the decomposition retried.
pub fn schur<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    let n = a.nrows();
    let eps = T::default_epsilon();
    let max_iter = 200 * n.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5c4u64);
    let mut rotation = CMatrix::<T>::identity(n, n);
    let shift = Complex::new(frobenius(a).max(T::one()), T::zero());
    let shifted = a + CMatrix::<T>::identity(n, n) * shift;
    for _ in 0..SCHUR_ATTEMPTS {
        let rotated = rotation.adjoint() * &shifted * &rotation;
        if let Some(decomp) = Schur::try_new(rotated, eps, max_iter) {
            let (q, mut t) = decomp.unpack();
            for i in 0..n {
                t[(i, i)] -= shift;
            }
            // the strictly lower part is round-off
            for j in 0..t.ncols() {
                for i in (j + 1)..t.nrows() {
                    t[(i, j)] = czero();
                }
            }
            return Ok((&rotation * q, t));
        }
        rotation = random_matrix::<T, _>(&mut rng, n, n).qr().q();
    }
    Err(Error::Triangularization)
}

const SCHUR_ATTEMPTS: usize = 6;

/// Swaps the diagonal entries `k` and `k + 1` of an upper-triangular Schur
/// factor with a unitary rotation, updating `q` so that `q t q^H` is unchanged.
pub fn swap_schur_pair<T: Real>(q: &mut CMatrix<T>, t: &mut CMatrix<T>, k: usize) {
    let n = t.nrows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    let x1 = t[(k, k + 1)];
    let x2 = t22 - t11;
    let norm = (x1.norm_sqr() + x2.norm_sqr()).sqrt();
    if norm == T::zero() {
        return;
    }
    let u1 = (x1.unscale(norm), x2.unscale(norm));
    let u2 = (-u1.1.conj(), u1.0.conj());
    let mut w = CMatrix::identity(n, n);
    w[(k, k)] = u1.0;
    w[(k + 1, k)] = u1.1;
    w[(k, k + 1)] = u2.0;
    w[(k + 1, k + 1)] = u2.1;
    *t = w.adjoint() * &*t * &w;
    t[(k + 1, k)] = czero();
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
    *q = &*q * w;
}

/// Reorders a Schur form so the diagonal follows `order` (a permutation of
/// the current diagonal positions).
pub fn reorder_schur<T: Real>(q: &mut CMatrix<T>, t: &mut CMatrix<T>, order: &[usize]) {
    // bubble sort on target ranks; each adjacent swap is a unitary rotation
    let n = order.len();
    let mut rank = vec![0usize; n];
    for (target, &src) in order.iter().enumerate() {
        rank[src] = target;
    }
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1 + pass) {
            if rank[k] > rank[k + 1] {
                swap_schur_pair(q, t, k);
                rank.swap(k, k + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}

/// Solves `a x − x b = c` for upper-triangular `a` and `b` by column
/// back-substitution; `None` when `a` and `b` share an eigenvalue.
pub fn solve_triangular_sylvester<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, c: &CMatrix<T>) -> Option<CMatrix<T>> {
    let (m, n) = (a.nrows(), b.nrows());
    let mut x = CMatrix::zeros(m, n);
    for j in 0..n {
        let mut rhs = c.column(j).into_owned();
        for k in 0..j {
            rhs += x.column(k) * b[(k, j)];
        }
        let shifted = a - CMatrix::<T>::identity(m, m) * b[(j, j)];
        let col = shifted.solve_upper_triangular(&rhs)?;
        if col.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return None;
        }
        x.set_column(j, &col);
    }
    Some(x)
}

/// Result of closing a set of seed vectors under a family of linear maps.
#[derive(Debug, Clone)]
pub struct ClosedSpan<T: Real> {
    /// Orthonormal basis of the closure.
    pub basis: Vec<CVector<T>>,
    /// Number of vectors added at each degree (degree 0 = seeds).
    pub added_per_degree: Vec<usize>,
}

impl<T: Real> ClosedSpan<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether no new direction appeared at the last explored degree.
    pub fn stabilized(&self) -> bool {
        self.added_per_degree.last().is_none_or(|&n| n == 0)
    }
}

/// Subtracts projections onto an orthonormal family (two passes).
fn orthogonalize<T: Real>(w: &mut CVector<T>, basis: &[CVector<T>]) {
    for _ in 0..2 {
        for q in basis {
            let c = q.dotc(w);
            w.axpy(-c, q, cone());
        }
    }
}

/// Smallest subspace containing `seeds` and stable under every map in `ops`,
/// explored breadth-first by word length up to `max_degree`.
///
/// A candidate direction is kept when its component orthogonal to the current
/// basis exceeds `rank_tol * scale`.
pub fn closed_span<T, F>(
    ops: &[F],
    seeds: &[CVector<T>],
    rank_tol: T,
    scale: T,
    max_degree: usize,
) -> ClosedSpan<T>
where
    T: Real,
    F: Fn(&CVector<T>) -> CVector<T>,
{
    let mut basis: Vec<CVector<T>> = Vec::new();
    let mut added = Vec::new();
    let mut frontier: Vec<CVector<T>> = Vec::new();
    let seed_scale = seeds.iter().map(vec_norm).fold(T::zero(), |a, b| if b > a { b } else { a });
    for s in seeds {
        let mut w = s.clone();
        orthogonalize(&mut w, &basis);
        let nw = vec_norm(&w);
        if nw > rank_tol * seed_scale && nw > T::zero() {
            let q = w.unscale(nw);
            basis.push(q.clone());
            frontier.push(q);
        }
    }
    added.push(basis.len());
    let dim_cap = seeds.first().map_or(0, |s| s.len());
    for _ in 0..max_degree {
        if frontier.is_empty() || basis.len() >= dim_cap {
            added.push(0);
            break;
        }
        let mut next = Vec::new();
        for f in &frontier {
            for op in ops {
                let mut w = op(f);
                orthogonalize(&mut w, &basis);
                let nw = vec_norm(&w);
                if nw > rank_tol * scale && nw > T::zero() {
                    let q = w.unscale(nw);
                    basis.push(q.clone());
                    next.push(q);
                }
            }
        }
        added.push(next.len());
        frontier = next;
    }
    ClosedSpan { basis, added_per_degree: added }
}

/// Smallest singular value divided by the largest; zero for singular input.
pub fn inverse_condition<T: Real>(m: &CMatrix<T>) -> T {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > T::zero() => lo / hi,
        _ => T::zero(),
    }
}

/// Relative distance `‖a − b‖_F / max(1, ‖a‖_F, ‖b‖_F)`.
pub fn relative_distance<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    let scale = frobenius(a).max(frobenius(b)).max(T::one());
    frobenius(&(a - b)) / scale
}

/// Largest entry modulus.
pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().map(|&z| modulus(z)).fold(T::zero(), |a, b| if b > a { b } else { a })
}
