//! JSON and CSV interchange. Complex numbers are `[re, im]`, matrices are
//! row-major arrays of rows, and every file carries `format_version`.

use serde::{Deserialize, Serialize};

use crate::commuting::{MatrixPair, SpectrumMultiset, Triple};
use crate::equivariant::EquivariantTriple;
use crate::error::{Error, Result};
use crate::group::{AdeLabel, FiniteSubgroup, Representation};
use crate::scalar::{real, to_f64, CMatrix, CVector, Complex, Real};

pub const FORMAT_VERSION: u32 = 1;

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

pub fn complex_to_json<T: Real>(z: Complex<T>) -> JsonComplex {
    [to_f64(z.re), to_f64(z.im)]
}

pub fn complex_from_json<T: Real>(z: JsonComplex) -> Complex<T> {
    Complex::new(real(z[0]), real(z[1]))
}

pub fn matrix_to_json<T: Real>(m: &CMatrix<T>) -> JsonMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex_to_json(m[(i, j)])).collect()).collect()
}

pub fn matrix_from_json<T: Real>(rows: &JsonMatrix) -> Result<CMatrix<T>> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Format("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(n, cols, |i, j| complex_from_json(rows[i][j])))
}

pub fn vector_to_json<T: Real>(v: &CVector<T>) -> Vec<JsonComplex> {
    v.iter().map(|&z| complex_to_json(z)).collect()
}

pub fn vector_from_json<T: Real>(v: &[JsonComplex]) -> CVector<T> {
    CVector::from_iterator(v.len(), v.iter().map(|&z| complex_from_json(z)))
}

/// `ρ` on the generators of a named group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoBlock {
    pub group: String,
    pub is_anti: bool,
    pub generators: Vec<JsonMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleFile {
    pub format_version: u32,
    pub r: usize,
    pub m1: JsonMatrix,
    pub m2: JsonMatrix,
    pub v: Vec<JsonComplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<RhoBlock>,
}

impl TripleFile {
    pub fn from_triple<T: Real>(t: &Triple<T>) -> Self {
        TripleFile {
            format_version: FORMAT_VERSION,
            r: t.r(),
            m1: matrix_to_json(&t.pair.m1),
            m2: matrix_to_json(&t.pair.m2),
            v: vector_to_json(&t.v),
            rho: None,
        }
    }

    pub fn from_equivariant<T: Real>(e: &EquivariantTriple<T>, group: &FiniteSubgroup<T>) -> Self {
        let mut file = Self::from_triple(&e.triple());
        file.rho = Some(RhoBlock {
            group: group.label.map_or_else(|| "trivial".to_string(), |l| l.to_string()),
            is_anti: e.rho.is_anti,
            generators: e.rho.generator_matrices(group).iter().map(matrix_to_json).collect(),
        });
        file
    }

    fn check(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format_version {}", self.format_version)));
        }
        let square = |m: &JsonMatrix| m.len() == self.r && m.iter().all(|row| row.len() == self.r);
        if !square(&self.m1) || !square(&self.m2) || self.v.len() != self.r {
            return Err(Error::Format(format!("entries do not match r = {}", self.r)));
        }
        Ok(())
    }

    pub fn to_triple<T: Real>(&self) -> Result<Triple<T>> {
        self.check()?;
        let pair = MatrixPair::new(matrix_from_json(&self.m1)?, matrix_from_json(&self.m2)?)?;
        Triple::new(pair, vector_from_json(&self.v))
    }

    /// The group named in the `rho` block.
    pub fn group_label(&self) -> Result<AdeLabel> {
        let rho = self.rho.as_ref().ok_or_else(|| Error::Format("missing rho block".into()))?;
        rho.group.parse()
    }

    /// Rebuilds the equivariant triple, extending `ρ` from the generators.
    pub fn to_equivariant<T: Real>(&self, group: &FiniteSubgroup<T>, tol: T) -> Result<EquivariantTriple<T>> {
        let t = self.to_triple()?;
        let rho = self.rho.as_ref().ok_or_else(|| Error::Format("missing rho block".into()))?;
        let gens: Vec<CMatrix<T>> = rho.generators.iter().map(matrix_from_json).collect::<Result<_>>()?;
        if gens.iter().any(|g| g.nrows() != self.r || g.ncols() != self.r) {
            return Err(Error::Format("rho generator of the wrong size".into()));
        }
        let rep = Representation::from_generators(group, &gens, rho.is_anti, tol)?;
        EquivariantTriple::new(t.pair, t.v, rep)
    }
}

/// A list of triples, e.g. samples of a fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleList {
    pub format_version: u32,
    pub triples: Vec<TripleFile>,
}

impl TripleList {
    pub fn new(triples: Vec<TripleFile>) -> Self {
        TripleList { format_version: FORMAT_VERSION, triples }
    }
}

/// Either a single triple or a list, as accepted by readers.
pub fn parse_triples(text: &str) -> Result<Vec<TripleFile>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("triples").is_some() {
        let list: TripleList = serde_json::from_value(value)?;
        if list.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format_version {}", list.format_version)));
        }
        Ok(list.triples)
    } else {
        Ok(vec![serde_json::from_value(value)?])
    }
}

/// Joint spectrum as CSV with header `re1,im1,re2,im2`.
pub fn spectrum_csv<T: Real>(spectrum: &SpectrumMultiset<T>) -> String {
    let mut out = String::from("re1,im1,re2,im2\n");
    for p in &spectrum.points {
        out.push_str(&format!("{},{},{},{}\n", to_f64(p[0].re), to_f64(p[0].im), to_f64(p[1].re), to_f64(p[1].im)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commuting::random_cyclic_triple;
    use crate::equivariant::orbit_to_triple;
    use crate::scalar::cplx;
    use crate::Tolerances;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triple_round_trip_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = random_cyclic_triple::<f64, _>(4, &mut rng);
        let text = serde_json::to_string(&TripleFile::from_triple(&t)).unwrap();
        let back: TripleFile = serde_json::from_str(&text).unwrap();
        let u = back.to_triple::<f64>().unwrap();
        assert_eq!(t.pair.m1, u.pair.m1);
        assert_eq!(t.pair.m2, u.pair.m2);
        assert_eq!(t.v, u.v);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn equivariant_round_trip_keeps_rho() {
        let g = FiniteSubgroup::<f64>::build(AdeLabel::A(2), 1e-9).unwrap();
        let e = orbit_to_triple(&g, [cplx(0.3, 0.1), cplx(-1.2, 0.4)], &Tolerances::default()).unwrap();
        let file = TripleFile::from_equivariant(&e, &g);
        let text = serde_json::to_string_pretty(&file).unwrap();
        let parsed = parse_triples(&text).unwrap();
        assert_eq!(parsed[0].group_label().unwrap(), AdeLabel::A(2));
        let back = parsed[0].to_equivariant(&g, 1e-9).unwrap();
        assert_eq!(back.rho.matrices, e.rho.matrices);
    }

    #[test]
    fn malformed_input_is_rejected() {
        let bad = r#"{"format_version":1,"r":2,"m1":[[[0,0]]],"m2":[],"v":[]}"#;
        assert!(parse_triples(bad).unwrap()[0].to_triple::<f64>().is_err());
        let wrong_version = r#"{"format_version":9,"r":0,"m1":[],"m2":[],"v":[]}"#;
        assert!(parse_triples(wrong_version).unwrap()[0].to_triple::<f64>().is_err());
    }
}
