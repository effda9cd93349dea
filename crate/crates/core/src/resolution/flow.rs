//! Moment-map flow towards the Kempf–Ness representative of a stable triple.

use serde::Serialize;

use crate::commuting::{MatrixPair, Triple};
use crate::equivariant::EquivariantTriple;
use crate::error::{Error, Result};
use crate::group::FiniteSubgroup;
use crate::linalg::expm_hermitian;
use crate::scalar::{frobenius, modulus, real, to_f64, vec_norm, CMatrix, Complex, Real};
use crate::tolerance::Tolerances;

const BACKTRACK_BUDGET: usize = 40;
const STEP_GROWTH: f64 = 1.5;

#[derive(Debug, Clone, Copy)]
pub struct FlowOptions<T: Real> {
    /// Target `‖v‖²/r` used to rescale `v` before flowing.
    pub zeta: T,
    pub max_iters: usize,
    /// Initial step, relative to the inverse squared scale of the input.
    pub step: T,
    pub flow_tol: T,
}

impl<T: Real> Default for FlowOptions<T> {
    fn default() -> Self {
        FlowOptions { zeta: T::one(), max_iters: 5000, step: real(0.25), flow_tol: real(1e-6) }
    }
}

#[derive(Debug, Clone)]
pub struct FlowReport<S> {
    pub iterations: usize,
    pub final_residual: f64,
    pub zeta_eff: f64,
    pub backtracks: usize,
    pub converged: bool,
    /// Largest distance between input and output joint spectra.
    pub spectrum_shift: f64,
    pub triple_out: S,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FlowSummary {
    pub iterations: usize,
    pub final_residual: f64,
    pub zeta_eff: f64,
    pub backtracks: usize,
    pub converged: bool,
    pub spectrum_shift: f64,
}

impl<S> FlowReport<S> {
    pub fn summary(&self) -> FlowSummary {
        FlowSummary {
            iterations: self.iterations,
            final_residual: self.final_residual,
            zeta_eff: self.zeta_eff,
            backtracks: self.backtracks,
            converged: self.converged,
            spectrum_shift: self.spectrum_shift,
        }
    }
}

/// `μ = [m₁, m₁†] + [m₂, m₂†] + v v†`.
pub fn moment_map<T: Real>(t: &Triple<T>) -> CMatrix<T> {
    let c = |m: &CMatrix<T>| m * m.adjoint() - m.adjoint() * m;
    c(&t.pair.m1) + c(&t.pair.m2) + &t.v * t.v.adjoint()
}

/// `μ − ζ_eff I` with `ζ_eff = tr μ / r = ‖v‖²/r`.
fn defect<T: Real>(t: &Triple<T>) -> (CMatrix<T>, T) {
    let r = t.r();
    let zeta = vec_norm(&t.v).powi(2) / real::<T>(r as f64);
    let mut d = moment_map(t);
    for i in 0..r {
        d[(i, i)] -= Complex::new(zeta, T::zero());
    }
    (d, zeta)
}

/// `‖μ − ζ_eff I‖_F` at `t`.
pub fn moment_residual<T: Real>(t: &Triple<T>) -> T {
    frobenius(&defect(t).0)
}

fn flow_step<T: Real>(t: &Triple<T>, h: &CMatrix<T>) -> Triple<T> {
    let (g, gi) = expm_hermitian(h);
    let pair = MatrixPair { m1: &g * &t.pair.m1 * &gi, m2: &g * &t.pair.m2 * &gi };
    Triple { pair, v: &g * &t.v }
}

/// Runs `m ← e^h m e^{−h}`, `v ← e^h v`, `h = −step (μ − ζ_eff I)` with
/// backtracking so the residual decreases monotonically.
fn run<T: Real>(input: &Triple<T>, opts: &FlowOptions<T>) -> Result<FlowReport<Triple<T>>> {
    let r = input.r();
    let mut t = input.clone();
    let nv = vec_norm(&t.v);
    if nv > T::zero() {
        let target = (opts.zeta * real::<T>(r as f64)).sqrt();
        t.v = t.v.scale(target / nv);
    }
    let scale = t.pair.scale().max(vec_norm(&t.v));
    let mut step = opts.step / (scale * scale);
    let (mut d, mut zeta) = defect(&t);
    let mut residual = frobenius(&d);
    let mut iterations = 0;
    let mut backtracks = 0;
    while residual >= opts.flow_tol && iterations < opts.max_iters {
        iterations += 1;
        let mut accepted = false;
        for _ in 0..BACKTRACK_BUDGET {
            let h = d.map(|z| z.scale(-step));
            let next = flow_step(&t, &h);
            let (nd, nz) = defect(&next);
            let nres = frobenius(&nd);
            if nres < residual {
                t = next;
                d = nd;
                zeta = nz;
                residual = nres;
                step *= real::<T>(STEP_GROWTH);
                accepted = true;
                break;
            }
            step /= real::<T>(2.0);
            backtracks += 1;
        }
        if !accepted {
            return Err(Error::FlowStalled { iteration: iterations });
        }
    }
    let report = FlowReport {
        iterations,
        final_residual: to_f64(residual),
        zeta_eff: to_f64(zeta),
        backtracks,
        converged: residual < opts.flow_tol,
        spectrum_shift: 0.0,
        triple_out: t,
    };
    Ok(report)
}

fn spectrum_shift<T: Real>(a: &MatrixPair<T>, b: &MatrixPair<T>, tols: &Tolerances<T>) -> Result<f64> {
    let sa = a.joint_spectrum(tols)?;
    let sb = b.joint_spectrum(tols)?;
    let mut worst = 0.0f64;
    for p in &sa.points {
        let best = sb
            .points
            .iter()
            .map(|q| to_f64(modulus(p[0] - q[0]).max(modulus(p[1] - q[1]))))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    Ok(worst)
}

/// Flows a cyclic triple to `μ = ζ_eff I`; the output is re-checked for
/// cyclicity and the joint spectrum shift is recorded.
pub fn kempf_ness_flow<T: Real>(
    triple: &Triple<T>,
    opts: &FlowOptions<T>,
    tols: &Tolerances<T>,
) -> Result<FlowReport<Triple<T>>> {
    if opts.zeta <= T::zero() {
        return Err(Error::Dimension("zeta must be positive".into()));
    }
    if !triple.is_cyclic(tols) {
        return Err(Error::NotCyclic);
    }
    let mut report = run(triple, opts)?;
    if !report.triple_out.is_cyclic(tols) {
        return Err(Error::NotCyclic);
    }
    report.spectrum_shift = spectrum_shift(&triple.pair, &report.triple_out.pair, tols)?;
    Ok(report)
}

/// Flow for an equivariant triple: `ρ` is first made unitary, after which the
/// flow commutes with it and `ρ` is carried along unchanged.
pub fn kempf_ness_flow_equivariant<T: Real>(
    triple: &EquivariantTriple<T>,
    group: &FiniteSubgroup<T>,
    opts: &FlowOptions<T>,
    tols: &Tolerances<T>,
) -> Result<FlowReport<EquivariantTriple<T>>> {
    let unitary = triple.unitarized();
    let report = kempf_ness_flow(&unitary.triple(), opts, tols)?;
    let out = EquivariantTriple::new(report.triple_out.pair.clone(), report.triple_out.v.clone(), unitary.rho.clone())?;
    let residual = out.equivariance_residual(group);
    if residual > real::<T>(1e-8) * out.pair.scale() {
        return Err(Error::NotARepresentation { residual: to_f64(residual) });
    }
    Ok(FlowReport {
        iterations: report.iterations,
        final_residual: report.final_residual,
        zeta_eff: report.zeta_eff,
        backtracks: report.backtracks,
        converged: report.converged,
        spectrum_shift: report.spectrum_shift,
        triple_out: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commuting::{random_cyclic_triple, random_invertible, MonomialIdeal};
    use crate::scalar::cplx;
    use nalgebra::DVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_one_is_fixed() {
        let pair = MatrixPair::<f64>::diagonal(&[cplx(0.3, 1.0)], &[cplx(-2.0, 0.5)]);
        let t = Triple::new(pair, DVector::from_element(1, cplx(1.0, 0.0))).unwrap();
        let rep = kempf_ness_flow(&t, &FlowOptions::default(), &Tolerances::default()).unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(rep.final_residual < 1e-15);
        assert!((rep.zeta_eff - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_cell_staircase_converges() {
        let t = MonomialIdeal::from_partition(&[2]).unwrap().to_triple::<f64>();
        let opts = FlowOptions { zeta: 2.5, ..FlowOptions::default() };
        let rep = kempf_ness_flow(&t, &opts, &Tolerances::default()).unwrap();
        assert!(rep.converged && rep.final_residual < 1e-6, "{}", rep.final_residual);
        assert!(rep.iterations > 0);
    }

    #[test]
    fn conjugated_inputs_keep_their_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tols = Tolerances::default();
        for r in 2..=6 {
            let t = random_cyclic_triple::<f64, _>(r, &mut rng);
            let moved = t.act(&random_invertible(r, &mut rng)).unwrap();
            let rep = kempf_ness_flow(&moved, &FlowOptions::default(), &tols).unwrap();
            assert!(rep.converged, "r={r} residual {}", rep.final_residual);
            assert!(rep.spectrum_shift < 1e-6, "r={r} shift {}", rep.spectrum_shift);
            assert!(moment_residual(&rep.triple_out) < 1e-6);
        }
    }
}
