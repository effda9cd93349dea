//! Explicit atlas of the A-type resolution.
//!
//! Chart `c` of the `ℤ_n` model uses `k = n − c` and the quotient basis
//! `1, x, …, x^{k−1}, y, …, y^{n−k}` of the ideal
//! `(x^k − t y^{n−k}, y^{n−k+1} − s x^{k−1}, xy − st)`.

use crate::commuting::{MatrixPair, Triple};
use crate::equivariant::EquivariantTriple;
use crate::error::{Error, Result};
use crate::group::{AdeLabel, FiniteSubgroup, Representation};
use crate::linalg::{inverse_condition, relative_distance};
use crate::scalar::{cone, czero, modulus, real, CMatrix, CVector, Complex, Real};
use crate::tolerance::Tolerances;

/// A point `(s, t)` of chart `chart_index` of the `ℤ_n` resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToricChartA<T: Real> {
    pub n: usize,
    pub chart_index: usize,
    pub s: Complex<T>,
    pub t: Complex<T>,
}

/// Basis position of `x^a` (`a < k`) and `y^b` (`b ≤ n − k`).
#[derive(Debug, Clone, Copy)]
struct ChartBasis {
    n: usize,
    k: usize,
}

impl ChartBasis {
    fn x(&self, a: usize) -> usize {
        a
    }

    fn y(&self, b: usize) -> usize {
        if b == 0 {
            0
        } else {
            self.k - 1 + b
        }
    }

    /// `(exponent of x, exponent of y)` of each basis element.
    fn monomials(&self) -> Vec<(usize, usize)> {
        (0..self.k).map(|a| (a, 0)).chain((1..=self.n - self.k).map(|b| (0, b))).collect()
    }
}

impl<T: Real> ToricChartA<T> {
    pub fn new(n: usize, chart_index: usize, s: Complex<T>, t: Complex<T>) -> Result<Self> {
        if n < 2 || chart_index >= n {
            return Err(Error::ChartIndex { n, chart: chart_index });
        }
        Ok(ToricChartA { n, chart_index, s, t })
    }

    /// Number of pure `x` powers in the quotient basis.
    pub fn k(&self) -> usize {
        self.n - self.chart_index
    }

    fn basis(&self) -> ChartBasis {
        ChartBasis { n: self.n, k: self.k() }
    }

    /// Multiplication by `x` and `y` on the quotient basis.
    pub fn pair(&self) -> MatrixPair<T> {
        let (n, k) = (self.n, self.k());
        let basis = self.basis();
        let (s, t) = (self.s, self.t);
        let mut m1 = CMatrix::zeros(n, n);
        let mut m2 = CMatrix::zeros(n, n);
        for (j, (a, b)) in basis.monomials().into_iter().enumerate() {
            if b == 0 {
                if a + 1 < k {
                    m1[(basis.x(a + 1), j)] = cone();
                } else {
                    m1[(basis.y(n - k), j)] += t;
                }
            } else {
                m1[(basis.y(b - 1), j)] += s * t;
            }
            if a == 0 {
                if b < n - k {
                    m2[(basis.y(b + 1), j)] = cone();
                } else {
                    m2[(basis.x(k - 1), j)] += s;
                }
            } else {
                m2[(basis.x(a - 1), j)] += s * t;
            }
        }
        MatrixPair { m1, m2 }
    }

    /// Weight of each basis element under the generator `diag(ζ, ζ⁻¹)`.
    fn weights(&self) -> Vec<i64> {
        self.basis().monomials().into_iter().map(|(a, b)| a as i64 - b as i64).collect()
    }

    /// The equivariant triple `(x, y; 1)` with `ρ` diagonal in the weights.
    pub fn triple_in(&self, group: &FiniteSubgroup<T>) -> Result<EquivariantTriple<T>> {
        if group.order() != self.n || group.generators.len() != 1 {
            return Err(Error::Dimension(format!("chart of ℤ_{} used with a group of order {}", self.n, group.order())));
        }
        let zeta = group.elements[group.generators[0]].matrix[(0, 0)];
        let gen = CMatrix::from_diagonal(&CVector::from_iterator(
            self.n,
            self.weights().into_iter().map(|w| zeta.powi(w as i32)),
        ));
        let rho = Representation::from_generators(group, &[gen], true, real(1e-9))?;
        let mut v = CVector::zeros(self.n);
        v[0] = cone();
        EquivariantTriple::new(self.pair(), v, rho)
    }

    pub fn triple(&self) -> Result<EquivariantTriple<T>> {
        let group = FiniteSubgroup::build(AdeLabel::cyclic(self.n)?, real(1e-9))?;
        self.triple_in(&group)
    }
}

/// Equivariant triple of chart `chart_index` at `(s, t)` for `ℤ_n`.
pub fn chart_triple_a<T: Real>(n: usize, chart_index: usize, s: Complex<T>, t: Complex<T>) -> Result<EquivariantTriple<T>> {
    ToricChartA::new(n, chart_index, s, t)?.triple()
}

/// Coordinates of a triple in a chart, when the chart's monomials applied to
/// `v` form a basis.
#[derive(Debug, Clone, Copy)]
pub struct ChartPoint<T: Real> {
    pub chart: ToricChartA<T>,
    /// Relative distance between the triple expressed in the monomial basis
    /// and the chart model at the recovered `(s, t)`.
    pub residual: T,
}

/// Reads off `(s, t)` from `x^k v` and `y^{n−k+1} v`.
pub fn chart_coordinates<T: Real>(
    n: usize,
    chart_index: usize,
    triple: &Triple<T>,
    tols: &Tolerances<T>,
) -> Result<Option<ChartPoint<T>>> {
    let probe = ToricChartA::<T>::new(n, chart_index, czero(), czero())?;
    if triple.r() != n {
        return Ok(None);
    }
    let basis = probe.basis();
    let k = probe.k();
    let power = |m: &CMatrix<T>, e: usize, w: &CVector<T>| (0..e).fold(w.clone(), |acc, _| m * acc);
    let columns: Vec<CVector<T>> = basis
        .monomials()
        .into_iter()
        .map(|(a, b)| power(&triple.pair.m1, a, &power(&triple.pair.m2, b, &triple.v)))
        .collect();
    let g = CMatrix::from_columns(&columns);
    if inverse_condition(&g) <= tols.rank_tol.sqrt() {
        return Ok(None);
    }
    let Some(gi) = g.clone().try_inverse() else {
        return Ok(None);
    };
    let xk = &gi * power(&triple.pair.m1, k, &triple.v);
    let yk = &gi * power(&triple.pair.m2, n - k + 1, &triple.v);
    let t = xk[basis.y(n - k)];
    let s = yk[basis.x(k - 1)];
    let chart = ToricChartA::new(n, chart_index, s, t)?;
    let model = chart.pair();
    let local = triple.pair.conjugate_with(&gi, &g);
    let residual = relative_distance(&local.m1, &model.m1).max(relative_distance(&local.m2, &model.m2));
    Ok(Some(ChartPoint { chart, residual }))
}

/// Whether a chart coordinate vanishes relative to the chart's scale.
pub(crate) fn coordinate_is_zero<T: Real>(z: Complex<T>, tols: &Tolerances<T>) -> bool {
    modulus(z) <= tols.cluster_tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commuting::MonomialIdeal;
    use crate::scalar::cplx;

    fn group(n: usize) -> FiniteSubgroup<f64> {
        FiniteSubgroup::build(AdeLabel::cyclic(n).unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn z2_chart_zero_at_origin() {
        let e = chart_triple_a::<f64>(2, 0, czero(), czero()).unwrap();
        let expected = MonomialIdeal::from_partition(&[2]).unwrap().to_triple::<f64>();
        assert_eq!(e.pair.m1, expected.pair.m1);
        assert_eq!(e.pair.m2, expected.pair.m2);
        let tols = Tolerances::default();
        let g = group(2);
        let table = g.character_table().unwrap();
        assert!(e.stacky_stability(&g, &table, &tols).unwrap().is_stable());
    }

    #[test]
    fn all_charts_commute_and_are_equivariant() {
        let tols = Tolerances::default();
        for n in 2..=7 {
            let g = group(n);
            let table = g.character_table().unwrap();
            for c in 0..n {
                for (s, t) in [(0.0, 0.0), (0.7, -1.3), (0.0, 2.1), (1.9, 0.0)] {
                    let chart = ToricChartA::new(n, c, cplx(s, 0.3 * s), cplx(t, -0.2)).unwrap();
                    let e = chart.triple_in(&g).unwrap();
                    assert!(e.pair.commutator_residual() < 1e-10, "n={n} c={c}");
                    assert!(e.equivariance_residual_all(&g) < 1e-10, "n={n} c={c}");
                    assert!(e.stacky_stability(&g, &table, &tols).unwrap().is_stable(), "n={n} c={c}");
                }
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let tols = Tolerances::<f64>::default();
        for n in 2..=5 {
            for c in 0..n {
                let chart = ToricChartA::new(n, c, cplx::<f64>(0.4, 0.1), cplx(-0.6, 0.9)).unwrap();
                let e = chart.triple().unwrap();
                let g = crate::commuting::random_invertible(n, &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(n as u64));
                let moved = e.triple().act(&g).unwrap();
                let p = chart_coordinates(n, c, &moved, &tols).unwrap().expect("in chart");
                assert!(p.residual < 1e-9);
                assert!(modulus(p.chart.s - chart.s) < 1e-9 && modulus(p.chart.t - chart.t) < 1e-9);
            }
        }
    }

    #[test]
    fn gluing_of_consecutive_charts() {
        // chart k at (s, 0) is chart k − 1 at (0, 1/s)
        let tols = Tolerances::default();
        let n = 4;
        for c in 0..n - 1 {
            let s = cplx(0.8, -0.5);
            let a = ToricChartA::<f64>::new(n, c, s, czero()).unwrap().triple().unwrap();
            let p = chart_coordinates(n, c + 1, &a.triple(), &tols).unwrap().expect("in next chart");
            assert!(modulus(p.chart.s) < 1e-9);
            assert!(modulus(p.chart.t - cone::<f64>() / s) < 1e-9);
        }
    }
}
