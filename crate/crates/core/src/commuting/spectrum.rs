use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MatrixPair;
use crate::error::{Error, Result};
use crate::linalg::{reorder_schur, schur, solve_triangular_sylvester};
use crate::scalar::{czero, frobenius, modulus, random_unit, real, CMatrix, Complex, Real};
use crate::tolerance::Tolerances;

const SPECTRUM_SEED: u64 = 0x5eed_5bec;
const SEPARATION_LIMIT: f64 = 1e6;

/// Multiset of joint eigenvalues `(λ₁, λ₂)` in a canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMultiset<T: Real> {
    pub points: Vec<[Complex<T>; 2]>,
}

/// Distinct values among `values`, merged by single linkage at `tol`.
pub(crate) fn distinct_values<T: Real, I: Iterator<Item = Complex<T>>>(values: I, tol: T) -> Vec<Complex<T>> {
    let values: Vec<_> = values.collect();
    let labels = single_linkage(values.len(), |i, j| modulus(values[i] - values[j]) <= tol);
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut sums = vec![(czero::<T>(), 0usize); k];
    for (v, &l) in values.iter().zip(&labels) {
        sums[l].0 += v;
        sums[l].1 += 1;
    }
    sums.into_iter().map(|(s, n)| s.unscale(real(n as f64))).collect()
}

/// Cluster label per item, numbered by first appearance.
fn single_linkage<F: Fn(usize, usize) -> bool>(n: usize, close: F) -> Vec<usize> {
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if label[j] == usize::MAX && close(i, j) {
                    label[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    label
}

fn cmp_complex<T: Real>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

impl<T: Real> SpectrumMultiset<T> {
    /// Canonical order: points within `cluster_tol` are snapped to their
    /// cluster mean, then sorted by `(Re λ₁, Im λ₁, Re λ₂, Im λ₂)`.
    pub fn canonical(points: Vec<[Complex<T>; 2]>, cluster_tol: T) -> Self {
        let labels = single_linkage(points.len(), |i, j| {
            modulus(points[i][0] - points[j][0]).max(modulus(points[i][1] - points[j][1])) <= cluster_tol
        });
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut sums = vec![([czero::<T>(), czero::<T>()], 0usize); k];
        for (p, &l) in points.iter().zip(&labels) {
            sums[l].0[0] += p[0];
            sums[l].0[1] += p[1];
            sums[l].1 += 1;
        }
        let mut out: Vec<[Complex<T>; 2]> = labels
            .iter()
            .map(|&l| {
                let n = real::<T>(sums[l].1 as f64);
                [sums[l].0[0].unscale(n), sums[l].0[1].unscale(n)]
            })
            .collect();
        out.sort_by(|a, b| cmp_complex(&a[0], &b[0]).then(cmp_complex(&a[1], &b[1])));
        SpectrumMultiset { points: out }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distinct points with multiplicities.
    pub fn clustered(&self, cluster_tol: T) -> Vec<([Complex<T>; 2], usize)> {
        let mut out: Vec<([Complex<T>; 2], usize)> = Vec::new();
        for p in &self.points {
            match out.iter_mut().find(|(q, _)| {
                modulus(q[0] - p[0]).max(modulus(q[1] - p[1])) <= cluster_tol
            }) {
                Some(entry) => entry.1 += 1,
                None => out.push((*p, 1)),
            }
        }
        out
    }

    /// Multiset equality up to `tol` (greedy matching of points).
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut used = vec![false; other.len()];
        self.points.iter().all(|p| {
            let hit = other.points.iter().enumerate().position(|(j, q)| {
                !used[j] && modulus(p[0] - q[0]).max(modulus(p[1] - q[1])) <= tol
            });
            match hit {
                Some(j) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }

    /// Image under a map of ℂ².
    pub fn map<F: Fn([Complex<T>; 2]) -> [Complex<T>; 2]>(&self, f: F, cluster_tol: T) -> Self {
        SpectrumMultiset::canonical(self.points.iter().map(|&p| f(p)).collect(), cluster_tol)
    }
}

/// Joint spectrum of a commuting pair through a unitary simultaneous
/// triangularization.
///
/// A random combination `c₁m₁ + c₂m₂` is brought to Schur form, its diagonal
/// is clustered and reordered into contiguous blocks; when both matrices are
/// block upper-triangular in that basis, each block contributes the pair of
/// averaged traces.
pub fn joint_spectrum<T: Real>(pair: &MatrixPair<T>, tols: &Tolerances<T>) -> Result<SpectrumMultiset<T>> {
    pair.ensure_commuting(tols.tol)?;
    let r = pair.r();
    if r == 0 {
        return Ok(SpectrumMultiset { points: Vec::new() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPECTRUM_SEED);
    for _ in 0..2 {
        let c1 = random_unit::<T, _>(&mut rng);
        let c2 = random_unit::<T, _>(&mut rng);
        if let Some(points) = try_triangularize(pair, c1, c2) {
            return Ok(SpectrumMultiset::canonical(points, tols.cluster_tol));
        }
    }
    Err(Error::Triangularization)
}

fn try_triangularize<T: Real>(
    pair: &MatrixPair<T>,
    c1: Complex<T>,
    c2: Complex<T>,
) -> Option<Vec<[Complex<T>; 2]>> {
    let r = pair.r();
    let scale = pair.scale();
    let a = &pair.m1 * c1 + &pair.m2 * c2;
    let (q0, t0) = schur(&a).ok()?;
    let diag: Vec<Complex<T>> = (0..r).map(|i| t0[(i, i)]).collect();
    let block_tol = real::<T>(1e-6) * scale;
    let mut tau = real::<T>(1e-10) * scale;
    // perturbed Jordan blocks spread like ε^{1/k}; the loop ends with one cluster
    let tau_max = real::<T>(20.0) * scale;
    let mut last_labels: Option<Vec<usize>> = None;
    while tau <= tau_max {
        let labels = single_linkage(r, |i, j| modulus(diag[i] - diag[j]) <= tau);
        if last_labels.as_ref() != Some(&labels) {
            if let Some(points) = blocks_if_triangular(pair, &q0, &t0, &labels, block_tol) {
                return Some(points);
            }
            last_labels = Some(labels);
        }
        tau *= real(10.0);
    }
    None
}

fn blocks_if_triangular<T: Real>(
    pair: &MatrixPair<T>,
    q0: &CMatrix<T>,
    t0: &CMatrix<T>,
    labels: &[usize],
    block_tol: T,
) -> Option<Vec<[Complex<T>; 2]>> {
    let r = labels.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&i| (labels[i], i));
    let (mut q, mut t) = (q0.clone(), t0.clone());
    reorder_schur(&mut q, &mut t, &order);
    let qh = q.adjoint();
    let b1 = &qh * &pair.m1 * &q;
    let b2 = &qh * &pair.m2 * &q;
    let sorted: Vec<usize> = order.iter().map(|&i| labels[i]).collect();
    let mut lower = T::zero();
    for j in 0..r {
        for i in (j + 1)..r {
            if sorted[i] != sorted[j] {
                lower += b1[(i, j)].norm_sqr() + b2[(i, j)].norm_sqr();
            }
        }
    }
    if lower.sqrt() > block_tol {
        return None;
    }
    // clusters must decouple: a huge Sylvester solution means the split
    // cuts through a perturbed Jordan block
    for e in 1..r {
        if sorted[e - 1] == sorted[e] {
            continue;
        }
        let t11 = t.view((0, 0), (e, e)).into_owned();
        let t22 = t.view((e, e), (r - e, r - e)).into_owned();
        let t12 = t.view((0, e), (e, r - e)).into_owned();
        match solve_triangular_sylvester(&t11, &t22, &t12) {
            Some(x) if frobenius(&x) <= real(SEPARATION_LIMIT) => {}
            _ => return None,
        }
    }
    let mut points = Vec::with_capacity(r);
    let mut start = 0;
    while start < r {
        let mut end = start;
        while end < r && sorted[end] == sorted[start] {
            end += 1;
        }
        let k = end - start;
        let kk = real::<T>(k as f64);
        let mut tr1 = czero::<T>();
        let mut tr2 = czero::<T>();
        for i in start..end {
            tr1 += b1[(i, i)];
            tr2 += b2[(i, i)];
        }
        let p = [tr1.unscale(kk), tr2.unscale(kk)];
        points.extend(std::iter::repeat_n(p, k));
        start = end;
    }
    Some(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commuting::{random_commuting_pair, random_invertible, PairKind};
    use crate::scalar::cplx;

    fn c(x: f64) -> Complex<f64> {
        cplx(x, 0.0)
    }

    #[test]
    fn diagonal_pair_spectrum() {
        let t = Tolerances::default();
        let pair = MatrixPair::diagonal(&[c(1.0), c(2.0)], &[c(3.0), c(4.0)]);
        let s = joint_spectrum(&pair, &t).unwrap();
        assert!(s.approx_eq(&SpectrumMultiset { points: vec![[c(1.0), c(3.0)], [c(2.0), c(4.0)]] }, 1e-10));
    }

    #[test]
    fn conjugated_derogatory_pair() {
        let t = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pair = MatrixPair::diagonal(&[c(1.0), c(1.0), c(1.0), c(-2.0)], &[c(0.0), c(0.0), c(5.0), c(5.0)]);
        let g = random_invertible::<f64, _>(4, &mut rng);
        let s = joint_spectrum(&pair.conjugate(&g).unwrap(), &t).unwrap();
        let expect = joint_spectrum(&pair, &t).unwrap();
        assert!(s.approx_eq(&expect, 1e-7), "{s:?}");
    }

    #[test]
    fn nilpotent_pairs_have_zero_spectrum() {
        let t = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let pair = random_commuting_pair::<f64, _>(5, PairKind::Punctual, &mut rng);
            let s = joint_spectrum(&pair, &t).unwrap();
            assert_eq!(s.len(), 5);
            for p in &s.points {
                assert!(modulus(p[0]) < 1e-5 && modulus(p[1]) < 1e-5, "{p:?}");
            }
        }
    }

    #[test]
    fn canonical_order_is_stable() {
        let pts = vec![[c(2.0), c(0.0)], [c(1.0 + 1e-9), c(0.0)], [c(1.0), c(0.0)]];
        let s = SpectrumMultiset::canonical(pts, 1e-6);
        assert_eq!(s.points[0], s.points[1]);
        assert_eq!(s.clustered(1e-6).len(), 2);
    }
}
