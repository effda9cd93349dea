use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::{MatrixPair, Triple};
use crate::error::{Error, Result};
use crate::linalg::{hstack, null_space};
use crate::scalar::{cone, vec_norm, CMatrix, CVector, Real};
use crate::tolerance::Tolerances;

/// A monomial ideal of finite colength in `ℂ[z₁, z₂]`, given by the
/// exponents `(a, b)` of the monomials `z₁^a z₂^b` outside it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    staircase: Vec<(usize, usize)>,
}

/// Graded order: total degree, then the `z₁` exponent.
fn graded_key(&(a, b): &(usize, usize)) -> (usize, usize) {
    (a + b, a)
}

impl MonomialIdeal {
    pub fn new(cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let set: BTreeSet<(usize, usize)> = cells.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidStaircase("empty staircase".into()));
        }
        for &(a, b) in &set {
            if (a > 0 && !set.contains(&(a - 1, b))) || (b > 0 && !set.contains(&(a, b - 1))) {
                return Err(Error::InvalidStaircase(format!("cell ({a},{b}) has a missing predecessor")));
            }
        }
        let mut staircase: Vec<_> = set.into_iter().collect();
        staircase.sort_by_key(graded_key);
        Ok(MonomialIdeal { staircase })
    }

    /// Staircase whose row `b` (power of `z₂`) has `parts[b]` cells.
    pub fn from_partition(parts: &[usize]) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidStaircase(format!("{parts:?} is not a partition")));
        }
        MonomialIdeal::new(parts.iter().enumerate().flat_map(|(b, &len)| (0..len).map(move |a| (a, b))))
    }

    /// The maximal-ideal power `(z₁, z₂)^d`.
    pub fn power_of_maximal(d: usize) -> Self {
        let parts: Vec<usize> = (1..=d).rev().collect();
        MonomialIdeal::from_partition(&parts).expect("staircase partition")
    }

    pub fn r(&self) -> usize {
        self.staircase.len()
    }

    /// Cells in basis order (graded, then by `z₁` exponent).
    pub fn cells(&self) -> &[(usize, usize)] {
        &self.staircase
    }

    pub fn contains_cell(&self, cell: (usize, usize)) -> bool {
        self.staircase.contains(&cell)
    }

    /// Row lengths, i.e. the partition of `r`.
    pub fn partition(&self) -> Vec<usize> {
        let rows = self.staircase.iter().map(|c| c.1).max().map_or(0, |m| m + 1);
        (0..rows).map(|b| self.staircase.iter().filter(|c| c.1 == b).count()).collect()
    }

    /// Minimal monomial generators of the ideal.
    pub fn generators(&self) -> Vec<(usize, usize)> {
        let p = self.partition();
        let mut gens = vec![(p[0], 0)];
        for b in 1..p.len() {
            if p[b] < p[b - 1] {
                gens.push((p[b], b));
            }
        }
        gens.push((0, p.len()));
        gens
    }

    /// The triple `(z₁·, z₂·; 1)` on the quotient with its monomial basis.
    pub fn to_triple<T: Real>(&self) -> Triple<T> {
        let r = self.r();
        let index = |c: (usize, usize)| self.staircase.iter().position(|&x| x == c);
        let mut m1 = CMatrix::zeros(r, r);
        let mut m2 = CMatrix::zeros(r, r);
        for (j, &(a, b)) in self.staircase.iter().enumerate() {
            if let Some(i) = index((a + 1, b)) {
                m1[(i, j)] = cone();
            }
            if let Some(i) = index((a, b + 1)) {
                m2[(i, j)] = cone();
            }
        }
        let mut v = CVector::zeros(r);
        v[0] = cone();
        Triple { pair: MatrixPair { m1, m2 }, v }
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.staircase.iter().map(|(a, b)| format!("{a},{b}")).collect();
        write!(f, "{}", cells.join(";"))
    }
}

/// Accepts `a,b;a,b;...` cell lists or `partition:p1,p2,...`.
impl FromStr for MonomialIdeal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::InvalidStaircase(format!("{msg}: {s:?}"));
        if let Some(rest) = s.strip_prefix("partition:") {
            let parts = rest
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad("bad partition"))?;
            return MonomialIdeal::from_partition(&parts);
        }
        let mut cells = Vec::new();
        for cell in s.split(';').filter(|c| !c.trim().is_empty()) {
            let xy: Vec<&str> = cell.split(',').collect();
            if xy.len() != 2 {
                return Err(bad("cell must be a,b"));
            }
            let a = xy[0].trim().parse().map_err(|_| bad("bad exponent"))?;
            let b = xy[1].trim().parse().map_err(|_| bad("bad exponent"))?;
            cells.push((a, b));
        }
        let n = cells.len();
        let ideal = MonomialIdeal::new(cells)?;
        if ideal.r() != n {
            return Err(bad("repeated cell"));
        }
        Ok(ideal)
    }
}

/// All partitions of `n` in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// The ideal `Ker(f ↦ f(m₁, m₂)·v)` of a cyclic triple, truncated to degree
/// `r`: for each degree `d`, an orthonormal basis of the polynomials of degree
/// `≤ d` in the kernel, with coefficients indexed by [`IdealData::monomials`].
#[derive(Debug, Clone)]
pub struct IdealData<T: Real> {
    pub max_degree: usize,
    /// Monomials of degree `≤ max_degree` in graded order.
    pub monomials: Vec<(usize, usize)>,
    /// `kernels[d]`: columns span the degree-`≤ d` part of the ideal.
    pub kernels: Vec<CMatrix<T>>,
    /// Standard monomials for the graded order; a staircase of length `r`.
    pub staircase: MonomialIdeal,
}

impl<T: Real> IdealData<T> {
    /// Dimension of `S_{≤d} / (I ∩ S_{≤d})` for each degree.
    pub fn hilbert_function(&self) -> Vec<usize> {
        self.kernels
            .iter()
            .enumerate()
            .map(|(d, k)| (d + 1) * (d + 2) / 2 - k.ncols())
            .collect()
    }
}

fn graded_monomials(max_degree: usize) -> Vec<(usize, usize)> {
    (0..=max_degree).flat_map(|d| (0..=d).map(move |a| (a, d - a))).collect()
}

impl<T: Real> Triple<T> {
    /// Images `m₁^a m₂^b v` for all monomials up to `max_degree`.
    pub fn monomial_images(&self, monomials: &[(usize, usize)]) -> Vec<CVector<T>> {
        let max_b = monomials.iter().map(|m| m.1).max().unwrap_or(0);
        let mut p2 = vec![self.v.clone()];
        for _ in 0..max_b {
            let next = &self.pair.m2 * p2.last().expect("nonempty");
            p2.push(next);
        }
        monomials
            .iter()
            .map(|&(a, b)| {
                let mut w = p2[b].clone();
                for _ in 0..a {
                    w = &self.pair.m1 * w;
                }
                w
            })
            .collect()
    }

    /// Graded standard monomials of `Ker(f ↦ f(m)·v)`.
    pub fn standard_staircase(&self, tols: &Tolerances<T>) -> Result<MonomialIdeal> {
        if !self.is_cyclic(tols) {
            return Err(Error::NotCyclic);
        }
        let r = self.r();
        let mons = graded_monomials(r);
        let images = self.monomial_images(&mons);
        let scale = self.pair.scale();
        let mut kept: Vec<CVector<T>> = Vec::new();
        let mut cells = Vec::new();
        for (m, w) in mons.iter().zip(images) {
            if kept.len() == r {
                break;
            }
            let mut u = w;
            for _ in 0..2 {
                for q in &kept {
                    let c = q.dotc(&u);
                    u.axpy(-c, q, cone());
                }
            }
            let nu = u.norm();
            let reference = vec_norm(&self.v) * scale.powi((m.0 + m.1) as i32);
            let divisors_kept =
                (m.0 == 0 || cells.contains(&(m.0 - 1, m.1))) && (m.1 == 0 || cells.contains(&(m.0, m.1 - 1)));
            if nu > tols.rank_tol * reference && divisors_kept {
                kept.push(u.unscale(nu));
                cells.push(*m);
            }
        }
        MonomialIdeal::new(cells)
    }

    /// Per-degree kernel of the evaluation map.
    pub fn to_ideal(&self, tols: &Tolerances<T>) -> Result<IdealData<T>> {
        let staircase = self.standard_staircase(tols)?;
        let r = self.r();
        let monomials = graded_monomials(r);
        let images = self.monomial_images(&monomials);
        let mut kernels = Vec::with_capacity(r + 1);
        for d in 0..=r {
            let count = (d + 1) * (d + 2) / 2;
            let cols: Vec<CMatrix<T>> = images[..count]
                .iter()
                .map(|w| CMatrix::from_column_slice(r, 1, w.as_slice()))
                .collect();
            let eval = hstack(&cols);
            kernels.push(null_space(&eval, tols.rank_tol));
        }
        Ok(IdealData { max_degree: r, monomials, kernels, staircase })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frobenius;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15]);
    }

    #[test]
    fn parse_forms_agree() {
        let a: MonomialIdeal = "0,0;1,0;0,1".parse().unwrap();
        let b: MonomialIdeal = "partition:2,1".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a, MonomialIdeal::power_of_maximal(2));
        assert_eq!(a.to_string().parse::<MonomialIdeal>().unwrap(), a);
        assert!("0,0;2,0".parse::<MonomialIdeal>().is_err());
        assert!("partition:1,2".parse::<MonomialIdeal>().is_err());
        assert!("0,0;0,0".parse::<MonomialIdeal>().is_err());
    }

    #[test]
    fn generators_of_staircases() {
        let i: MonomialIdeal = "partition:3,1".parse().unwrap();
        assert_eq!(i.generators(), vec![(3, 0), (1, 1), (0, 2)]);
        assert_eq!(MonomialIdeal::power_of_maximal(1).generators(), vec![(1, 0), (0, 1)]);
    }

    #[test]
    fn length_two_triple() {
        let t = MonomialIdeal::new([(0, 0), (1, 0)]).unwrap().to_triple::<f64>();
        assert_eq!(t.pair.m1[(1, 0)], cone());
        assert_eq!(frobenius(&t.pair.m2), 0.0);
        assert_eq!(t.v[0], cone());
        assert!(t.is_cyclic(&Tolerances::default()));
    }

    #[test]
    fn point_triple() {
        let t = MonomialIdeal::new([(0, 0)]).unwrap().to_triple::<f64>();
        assert_eq!(t.r(), 1);
        assert_eq!(frobenius(&t.pair.m1), 0.0);
        assert_eq!(t.v[0], cone());
    }

    #[test]
    fn square_of_maximal_ideal() {
        let tols = Tolerances::default();
        let t = MonomialIdeal::power_of_maximal(2).to_triple::<f64>();
        assert!(t.is_cyclic(&tols));
        let s = t.pair.joint_spectrum(&tols).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.points.iter().all(|p| p[0].norm() < 1e-12 && p[1].norm() < 1e-12));
    }

    #[test]
    fn staircase_round_trip() {
        let tols = Tolerances::default();
        for n in 1..=6 {
            for p in partitions(n) {
                let ideal = MonomialIdeal::from_partition(&p).unwrap();
                let data = ideal.to_triple::<f64>().to_ideal(&tols).unwrap();
                assert_eq!(data.staircase, ideal);
                assert_eq!(*data.hilbert_function().last().unwrap(), n);
            }
        }
    }
}
