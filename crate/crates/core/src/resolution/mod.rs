//! Points of the resolution as stable equivariant triples: the map to the
//! quotient singularity, the fiber over the origin, checks away from the
//! origin and the moment-map flow.

mod chart;
mod conjugacy;
mod fiber;
mod flow;

pub use chart::{chart_coordinates, chart_triple_a, ChartPoint, ToricChartA};
pub use conjugacy::{are_conjugate, intertwiner};
pub use fiber::{sample_coinvariant_fiber, CoinvariantAlgebra};
pub use flow::{kempf_ness_flow, kempf_ness_flow_equivariant, moment_map, moment_residual, FlowOptions, FlowReport, FlowSummary};

use rand::Rng;
use serde::Serialize;

use crate::equivariant::{orbit_to_triple, EquivariantTriple};
use crate::error::{Error, Result};
use crate::group::{AdeLabel, CharacterTable, FiniteSubgroup};
use crate::invariants::InvariantRingModel;
use crate::scalar::{czero, modulus, random_complex, real, to_f64, Complex, Real};
use crate::tolerance::Tolerances;
use chart::coordinate_is_zero;

const FIBER_ATTEMPTS_PER_SAMPLE: usize = 20;
const GLUING_SAMPLES: usize = 3;

/// Image of a stable equivariant triple in `ℂ^k` under the invariant
/// generators.
pub fn resolution_map<T: Real>(
    triple: &EquivariantTriple<T>,
    group: &FiniteSubgroup<T>,
    table: &CharacterTable<T>,
    model: &InvariantRingModel<T>,
    tols: &Tolerances<T>,
) -> Result<Vec<Complex<T>>> {
    if !triple.stacky_stability(group, table, tols)?.is_stable() {
        return Err(Error::Unstable);
    }
    model.quotient_coordinates(&triple.pair, tols)
}

/// Random stable triples over the origin. Cyclic groups use the chart atlas
/// along the exceptional curves; other groups use [`sample_coinvariant_fiber`].
pub fn exceptional_fiber_sample<T: Real, R: Rng + ?Sized>(
    group: &FiniteSubgroup<T>,
    table: &CharacterTable<T>,
    model: &InvariantRingModel<T>,
    count: usize,
    tols: &Tolerances<T>,
    rng: &mut R,
) -> Result<Vec<EquivariantTriple<T>>> {
    match group.label {
        Some(AdeLabel::A(k)) => {
            let n = k + 1;
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                // curve E_j: chart k = j at (0, τ), or chart k = j + 1 at (σ, 0)
                let j = rng.random_range(1..n);
                let param = if rng.random_range(0..8) == 0 { czero() } else { random_complex(rng) };
                let chart = if rng.random_bool(0.5) {
                    ToricChartA::new(n, n - j, czero(), param)?
                } else {
                    ToricChartA::new(n, n - j - 1, param, czero())?
                };
                let e = chart.triple_in(group)?;
                if e.stacky_stability(group, table, tols)?.is_stable() {
                    out.push(e);
                }
            }
            if out.is_empty() && count > 0 {
                return Err(Error::FiberSampling { attempts: count });
            }
            Ok(out)
        }
        _ => {
            let top = model.generators.iter().map(|g| g.degree).max().unwrap_or(1);
            let algebra = CoinvariantAlgebra::build(group, table, &model.generators, tols, 4 * top)?;
            sample_coinvariant_fiber(&algebra, group, table, count, count * FIBER_ATTEMPTS_PER_SAMPLE, tols, rng)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberCheckReport {
    pub trials: usize,
    pub round_trip_passes: usize,
    pub uniqueness_passes: usize,
    /// Largest `|image − generators(p)| / (1 + |generators(p)|)`.
    pub max_round_trip_error: f64,
    pub candidates_compared: usize,
}

fn relative_gap<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| modulus(*x - *y) / (T::one() + modulus(*y)))
        .fold(T::zero(), |m, d| m.max(d))
}

/// Random point of `ℂ²` with trivial stabilizer.
fn free_point<T: Real, R: Rng + ?Sized>(group: &FiniteSubgroup<T>, tols: &Tolerances<T>, rng: &mut R) -> [Complex<T>; 2] {
    loop {
        let p = [random_complex(rng), random_complex(rng)];
        let separated = group.elements.iter().skip(1).all(|g| {
            let q = g.apply(p);
            modulus(q[0] - p[0]).max(modulus(q[1] - p[1])) > real::<T>(100.0) * tols.cluster_tol
        });
        if separated {
            return p;
        }
    }
}

/// For random free orbits: the round trip `p ↦ orbit_to_triple(p) ↦ ℂ^k`
/// agrees with evaluating the generators at `p`, and among candidates built
/// from other orbit representatives, other orbits and `GL_r`-moves, exactly
/// the conjugates of `orbit_to_triple(p)` share its image.
pub fn fiber_check_off_origin<T: Real, R: Rng + ?Sized>(
    group: &FiniteSubgroup<T>,
    table: &CharacterTable<T>,
    model: &InvariantRingModel<T>,
    trials: usize,
    tols: &Tolerances<T>,
    rng: &mut R,
) -> Result<FiberCheckReport> {
    let close = real::<T>(1e-8);
    let mut report = FiberCheckReport {
        trials,
        round_trip_passes: 0,
        uniqueness_passes: 0,
        max_round_trip_error: 0.0,
        candidates_compared: 0,
    };
    for trial in 0..trials {
        let p = free_point(group, tols, rng);
        let e = orbit_to_triple(group, p, tols)?;
        let image = resolution_map(&e, group, table, model, tols)?;
        let err = relative_gap(&image, &model.evaluate(p));
        report.max_round_trip_error = report.max_round_trip_error.max(to_f64(err));
        if err < close {
            report.round_trip_passes += 1;
        }
        let gamma = &group.elements[rng.random_range(0..group.order())];
        let g = crate::commuting::random_invertible::<T, _>(e.r(), rng);
        let candidates = [
            (orbit_to_triple(group, gamma.apply(p), tols)?, true),
            (e.act(&g)?, true),
            (orbit_to_triple(group, free_point(group, tols, rng), tols)?, false),
        ];
        for (c, same_orbit) in &candidates {
            report.candidates_compared += 1;
            let c_image = resolution_map(c, group, table, model, tols)?;
            let same_image = relative_gap(&c_image, &image) < close;
            let conjugate = are_conjugate(&e.triple(), &c.triple(), tols);
            if same_image != *same_orbit || same_image != conjugate {
                return Err(Error::Uniqueness(format!(
                    "trial {trial}: candidate with same_image = {same_image}, conjugate = {conjugate}, expected same orbit = {same_orbit}"
                )));
            }
        }
        report.uniqueness_passes += 1;
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct IncidenceReport {
    pub n: usize,
    /// Torus-fixed points (chart origins) that are pairwise non-conjugate.
    pub fixed_points: usize,
    pub curves: usize,
    /// For each exceptional curve, the charts containing its generic point.
    pub charts_per_curve: Vec<Vec<usize>>,
    /// For each exceptional curve, the fixed points (by chart index) on it.
    pub fixed_points_per_curve: Vec<Vec<usize>>,
    /// Curves meet when they share a fixed point.
    pub adjacency: Vec<Vec<bool>>,
    pub is_chain: bool,
    /// Worst disagreement of a glued point with its model in the next chart.
    pub gluing_residual: f64,
}

/// Checks the chart atlas of `ℤ_n`: `n` non-conjugate fixed points, and
/// exceptional curves `E_j` (`s = 0` in chart `n − j`, `t = 0` in chart
/// `n − j − 1`) lying over the origin, seen only in those two charts and
/// meeting in a chain.
pub fn incidence_check_a<T: Real>(n: usize, tols: &Tolerances<T>) -> Result<IncidenceReport> {
    if n < 2 {
        return Err(Error::ChartIndex { n, chart: 0 });
    }
    let group = FiniteSubgroup::build(AdeLabel::cyclic(n)?, real(1e-9))?;
    let origin = |c: usize| ToricChartA::<T>::new(n, c, czero(), czero())?.triple_in(&group);
    let fixed: Vec<_> = (0..n).map(origin).collect::<Result<_>>()?;
    for i in 0..n {
        for j in (i + 1)..n {
            if are_conjugate(&fixed[i].triple(), &fixed[j].triple(), tols) {
                return Err(Error::Incidence(format!("chart origins {i} and {j} are conjugate")));
            }
        }
    }
    let taus: Vec<Complex<T>> = (0..GLUING_SAMPLES)
        .map(|i| Complex::new(real::<T>(0.6 + 0.7 * i as f64), real::<T>(0.4 - 0.3 * i as f64)))
        .collect();
    let mut charts_per_curve = Vec::new();
    let mut fixed_points_per_curve = Vec::new();
    let mut gluing_residual = 0.0f64;
    for j in 1..n {
        let (lower, upper) = (n - j, n - j - 1);
        let mut seen: Vec<usize> = Vec::new();
        for &tau in &taus {
            let e = ToricChartA::new(n, lower, czero(), tau)?.triple_in(&group)?;
            let spectrum = e.pair.joint_spectrum(tols)?;
            if spectrum.points.iter().any(|p| modulus(p[0]).max(modulus(p[1])) > tols.cluster_tol) {
                return Err(Error::Incidence(format!("curve {j} leaves the origin")));
            }
            let mut charts = Vec::new();
            for c in 0..n {
                if let Some(point) = chart_coordinates(n, c, &e.triple(), tols)? {
                    charts.push(c);
                    if c == upper {
                        let expected = Complex::new(T::one(), T::zero()) / tau;
                        let gap = modulus(point.chart.s - expected).max(modulus(point.chart.t));
                        gluing_residual = gluing_residual.max(to_f64(gap).max(to_f64(point.residual)));
                    }
                }
            }
            if !seen.is_empty() && seen != charts {
                return Err(Error::Incidence(format!("curve {j} meets charts {seen:?} and {charts:?}")));
            }
            seen = charts;
        }
        charts_per_curve.push(seen);
        let mut on_curve = Vec::new();
        for (c, f) in fixed.iter().enumerate() {
            let lies_on = |chart: usize, on_s_axis: bool| -> Result<bool> {
                Ok(chart_coordinates(n, chart, &f.triple(), tols)?.is_some_and(|p| {
                    let z = if on_s_axis { p.chart.s } else { p.chart.t };
                    p.residual < tols.cluster_tol && coordinate_is_zero(z, tols)
                }))
            };
            if lies_on(lower, true)? || lies_on(upper, false)? {
                on_curve.push(c);
            }
        }
        fixed_points_per_curve.push(on_curve);
    }
    let curves = n - 1;
    let adjacency: Vec<Vec<bool>> = (0..curves)
        .map(|a| {
            (0..curves)
                .map(|b| a != b && fixed_points_per_curve[a].iter().any(|x| fixed_points_per_curve[b].contains(x)))
                .collect()
        })
        .collect();
    let is_chain = (0..curves).all(|a| (0..curves).all(|b| adjacency[a][b] == (a.abs_diff(b) == 1)))
        && charts_per_curve.iter().all(|c| c.len() == 2)
        && fixed_points_per_curve.iter().all(|f| f.len() == 2);
    let report = IncidenceReport {
        n,
        fixed_points: n,
        curves,
        charts_per_curve,
        fixed_points_per_curve,
        adjacency,
        is_chain,
        gluing_residual,
    };
    if !report.is_chain {
        return Err(Error::Incidence(format!("curves do not form a chain: {:?}", report.adjacency)));
    }
    if report.gluing_residual > 1e-8 {
        return Err(Error::Incidence(format!("gluing residual {:.3e}", report.gluing_residual)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::default_degree_cap;
    use crate::scalar::cplx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(label: &str) -> (FiniteSubgroup<f64>, CharacterTable<f64>, InvariantRingModel<f64>) {
        let l: AdeLabel = label.parse().unwrap();
        let g = FiniteSubgroup::build(l, 1e-9).unwrap();
        let t = g.character_table().unwrap();
        let m = InvariantRingModel::build(&g, default_degree_cap(l), true, 1e-8).unwrap();
        (g, t, m)
    }

    #[test]
    fn z2_chart_images() {
        let (g, t, m) = setup("A1");
        let tols = Tolerances::default();
        let origin = chart_triple_a::<f64>(2, 0, czero(), czero()).unwrap();
        let image = resolution_map(&origin, &g, &t, &m, &tols).unwrap();
        assert!(image.iter().all(|z| modulus(*z) < 1e-12));
        let off = chart_triple_a::<f64>(2, 0, cplx(0.5, 0.2), cplx(1.3, -0.4)).unwrap();
        let image = resolution_map(&off, &g, &t, &m, &tols).unwrap();
        assert!(image.iter().any(|z| modulus(*z) > 1e-3));
        let rel = m.relation.as_ref().unwrap();
        assert!(modulus(rel.eval(&image)) < 1e-8);
    }

    #[test]
    fn z3_origins_are_pairwise_non_conjugate() {
        let tols = Tolerances::default();
        let fixed: Vec<_> = (0..3).map(|c| chart_triple_a::<f64>(3, c, czero(), czero()).unwrap()).collect();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(are_conjugate(&fixed[i].triple(), &fixed[j].triple(), &tols), i == j);
            }
        }
    }

    #[test]
    fn z2_exceptional_family_is_a_line_of_distinct_ideals() {
        let (g, t, m) = setup("A1");
        let tols = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let samples = exceptional_fiber_sample(&g, &t, &m, 12, &tols, &mut rng).unwrap();
        assert_eq!(samples.len(), 12);
        for e in &samples {
            let image = resolution_map(e, &g, &t, &m, &tols).unwrap();
            assert!(image.iter().all(|z| modulus(*z) < 1e-9));
        }
        let a = chart_triple_a::<f64>(2, 1, czero(), cplx(0.3, 0.0)).unwrap();
        let b = chart_triple_a::<f64>(2, 1, czero(), cplx(-1.1, 0.5)).unwrap();
        assert!(!are_conjugate(&a.triple(), &b.triple(), &tols));
    }

    #[test]
    fn z3_samples_cover_both_curves() {
        let (g, t, m) = setup("A2");
        let tols = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples = exceptional_fiber_sample(&g, &t, &m, 40, &tols, &mut rng).unwrap();
        let mut on = [false; 2];
        for e in &samples {
            for j in 1..3 {
                if let Some(p) = chart_coordinates(3, 3 - j, &e.triple(), &tols).unwrap() {
                    if modulus(p.chart.s) < 1e-9 {
                        on[j - 1] = true;
                    }
                }
            }
        }
        assert_eq!(on, [true, true]);
    }

    #[test]
    fn off_origin_checks() {
        let tols = Tolerances::default();
        let (g, t, m) = setup("A1");
        let e = orbit_to_triple(&g, [cplx(1.0, 0.0), czero()], &tols).unwrap();
        let image = resolution_map(&e, &g, &t, &m, &tols).unwrap();
        let expected = [1.0, 0.0, 0.0];
        for (z, x) in image.iter().zip(expected) {
            assert!(modulus(*z - cplx(x, 0.0)) < 1e-12);
        }
        let (g, t, m) = setup("A2");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let report = fiber_check_off_origin(&g, &t, &m, 100, &tols, &mut rng).unwrap();
        assert_eq!(report.round_trip_passes, 100);
        assert_eq!(report.uniqueness_passes, 100);
    }

    #[test]
    fn incidence_chains() {
        let tols = Tolerances::default();
        let r2 = incidence_check_a::<f64>(2, &tols).unwrap();
        assert_eq!(r2.curves, 1);
        let r3 = incidence_check_a::<f64>(3, &tols).unwrap();
        assert_eq!(r3.curves, 2);
        assert_eq!(r3.fixed_points_per_curve[0].iter().filter(|c| r3.fixed_points_per_curve[1].contains(c)).count(), 1);
        let r4 = incidence_check_a::<f64>(4, &tols).unwrap();
        assert_eq!(r4.adjacency, vec![vec![false, true, false], vec![true, false, true], vec![false, true, false]]);
    }

    #[test]
    fn d4_and_e6_fiber_samples_map_to_origin() {
        let tols = Tolerances::default();
        for label in ["D4", "E6"] {
            let (g, t, m) = setup(label);
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            let samples = exceptional_fiber_sample(&g, &t, &m, 6, &tols, &mut rng).unwrap();
            assert!(!samples.is_empty(), "{label}");
            for e in &samples {
                assert!(e.pair.commutator_residual() < 1e-10, "{label}");
                assert!(e.equivariance_residual_all(&g) < 1e-10, "{label}");
                let image = resolution_map(e, &g, &t, &m, &tols).unwrap();
                assert!(image.iter().all(|z| modulus(*z) < 1e-9), "{label}");
            }
        }
    }
}
