//! McKay quiver of a finite subgroup of SU(2) and recognition of the affine
//! Dynkin diagram it reproduces.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CharacterTable, FiniteSubgroup};
use crate::scalar::{real, to_f64, Complex, Real};

/// Multiplicity rounding threshold.
pub const MULTIPLICITY_TOL: f64 = 1e-6;

/// Extended (affine) Dynkin diagram type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AffineDynkin {
    /// Affine `A_n` with `n + 1` nodes.
    A(usize),
    /// Affine `D_n` with `n + 1` nodes, `n ≥ 4`.
    D(usize),
    E6,
    E7,
    E8,
}

impl fmt::Display for AffineDynkin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineDynkin::A(n) => write!(f, "A{n}~"),
            AffineDynkin::D(n) => write!(f, "D{n}~"),
            AffineDynkin::E6 => write!(f, "E6~"),
            AffineDynkin::E7 => write!(f, "E7~"),
            AffineDynkin::E8 => write!(f, "E8~"),
        }
    }
}

impl AffineDynkin {
    pub fn num_nodes(&self) -> usize {
        match *self {
            AffineDynkin::A(n) | AffineDynkin::D(n) => n + 1,
            AffineDynkin::E6 => 7,
            AffineDynkin::E7 => 8,
            AffineDynkin::E8 => 9,
        }
    }

    /// Adjacency matrix of the template (`2I −` affine Cartan matrix).
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.num_nodes();
        let mut a = vec![vec![0i64; n]; n];
        let mut edge = |i: usize, j: usize| {
            a[i][j] += 1;
            a[j][i] += 1;
        };
        match *self {
            AffineDynkin::A(1) => edge(0, 1),
            AffineDynkin::A(_) => {
                for i in 0..n {
                    edge(i, (i + 1) % n);
                }
            }
            AffineDynkin::D(k) => {
                edge(0, 2);
                edge(1, 2);
                for i in 2..(k - 2) {
                    edge(i, i + 1);
                }
                edge(k - 2, k - 1);
                edge(k - 2, k);
            }
            AffineDynkin::E6 | AffineDynkin::E7 | AffineDynkin::E8 => {
                let arms: [usize; 3] = match *self {
                    AffineDynkin::E6 => [2, 2, 2],
                    AffineDynkin::E7 => [1, 3, 3],
                    _ => [1, 2, 5],
                };
                let mut next = 1;
                for len in arms {
                    let mut prev = 0;
                    for _ in 0..len {
                        edge(prev, next);
                        prev = next;
                        next += 1;
                    }
                }
            }
        }
        if matches!(self, AffineDynkin::A(1)) {
            a[0][1] = 2;
            a[1][0] = 2;
        }
        a
    }

    /// Affine Cartan matrix `2I − A`.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let a = self.adjacency();
        let n = a.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { 2 - a[i][j] } else { -a[i][j] }).collect())
            .collect()
    }

    fn candidates(nodes: usize) -> Vec<AffineDynkin> {
        let mut out = Vec::new();
        if nodes >= 2 {
            out.push(AffineDynkin::A(nodes - 1));
        }
        if nodes >= 5 {
            out.push(AffineDynkin::D(nodes - 1));
        }
        match nodes {
            7 => out.push(AffineDynkin::E6),
            8 => out.push(AffineDynkin::E7),
            9 => out.push(AffineDynkin::E8),
            _ => {}
        }
        out
    }
}

/// McKay quiver: node `i` is the `i`-th irrep, `adjacency[i][j]` the
/// multiplicity of irrep `j` in `Q ⊗ V_i`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuiverGraph {
    pub n_nodes: usize,
    pub adjacency: Vec<Vec<i64>>,
    pub node_dims: Vec<usize>,
    pub dynkin_label: AffineDynkin,
    /// `permutation[i]` is the template node matched to quiver node `i`.
    pub permutation: Vec<usize>,
}

/// Builds the McKay quiver from the character table using the defining
/// representation's character `χ_Q(γ) = tr γ`.
pub fn mckay_quiver<T: Real>(group: &FiniteSubgroup<T>, table: &CharacterTable<T>) -> Result<QuiverGraph> {
    let chi_q: Vec<Complex<T>> = table.classes.iter().map(|c| group.elements[c[0]].trace()).collect();
    let k = table.num_irreps();
    let mut adjacency = vec![vec![0i64; k]; k];
    for i in 0..k {
        let product: Vec<Complex<T>> = chi_q.iter().zip(&table.characters[i]).map(|(a, b)| *a * *b).collect();
        for j in 0..k {
            let m = table.inner(&product, &table.characters[j]);
            let rounded = to_f64(m.re).round();
            if (to_f64(m.re) - rounded).abs() > MULTIPLICITY_TOL || to_f64(m.im).abs() > MULTIPLICITY_TOL {
                return Err(Error::NonIntegerMultiplicity { value: to_f64(m.re) });
            }
            adjacency[i][j] = rounded as i64;
        }
    }
    let (dynkin_label, permutation) = detect_dynkin(&adjacency)?;
    Ok(QuiverGraph { n_nodes: k, adjacency, node_dims: table.irrep_dims.clone(), dynkin_label, permutation })
}

/// Matches a symmetric adjacency matrix against the affine templates up to
/// node relabelling.
pub fn detect_dynkin(adjacency: &[Vec<i64>]) -> Result<(AffineDynkin, Vec<usize>)> {
    let n = adjacency.len();
    for label in AffineDynkin::candidates(n) {
        let template = label.adjacency();
        if let Some(perm) = find_isomorphism(adjacency, &template) {
            return Ok((label, perm));
        }
    }
    Err(Error::NoDynkinMatch)
}

fn find_isomorphism(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let signature = |m: &[Vec<i64>], i: usize| {
        let mut row: Vec<i64> = m[i].clone();
        let diag = row.remove(i);
        row.sort_unstable();
        (diag, row)
    };
    let sig_a: Vec<_> = (0..n).map(|i| signature(a, i)).collect();
    let sig_b: Vec<_> = (0..n).map(|i| signature(b, i)).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        i: usize,
        a: &[Vec<i64>],
        b: &[Vec<i64>],
        sig_a: &[(i64, Vec<i64>)],
        sig_b: &[(i64, Vec<i64>)],
        perm: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || sig_a[i] != sig_b[cand] {
                continue;
            }
            if (0..i).any(|j| a[i][j] != b[cand][perm[j]]) {
                continue;
            }
            perm[i] = cand;
            used[cand] = true;
            if extend(i + 1, a, b, sig_a, sig_b, perm, used) {
                return true;
            }
            used[cand] = false;
        }
        false
    }

    if extend(0, a, b, &sig_a, &sig_b, &mut perm, &mut used) {
        Some(perm)
    } else {
        None
    }
}

/// Perron–Frobenius data of a quiver.
#[derive(Debug, Clone)]
pub struct PerronData {
    pub eigenvalue: f64,
    /// Positive eigenvector scaled so its first entry matches the first node dimension.
    pub eigenvector: Vec<f64>,
}

impl QuiverGraph {
    pub fn is_symmetric(&self) -> bool {
        (0..self.n_nodes).all(|i| (0..self.n_nodes).all(|j| self.adjacency[i][j] == self.adjacency[j][i]))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n_nodes).all(|i| self.adjacency[i][i] == 0)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n_nodes;
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if self.adjacency[i][j] > 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Whether `2I − adjacency`, relabelled by `permutation`, equals the
    /// affine Cartan matrix of the detected type.
    pub fn matches_cartan(&self) -> bool {
        let cartan = self.dynkin_label.cartan();
        let n = self.n_nodes;
        cartan.len() == n
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    let own = if i == j { 2 - self.adjacency[i][j] } else { -self.adjacency[i][j] };
                    own == cartan[self.permutation[i]][self.permutation[j]]
                })
            })
    }

    pub fn perron<T: Real>(&self) -> PerronData {
        let n = self.n_nodes;
        let m = DMatrix::<T>::from_fn(n, n, |i, j| real::<T>(self.adjacency[i][j] as f64));
        let eig = SymmetricEigen::new(m);
        let (top, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, T::min_value().unwrap_or(real(-1e300))), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let col = eig.eigenvectors.column(top);
        let scale = real::<T>(self.node_dims[0] as f64) / col[0];
        PerronData {
            eigenvalue: to_f64(eig.eigenvalues[top]),
            eigenvector: col.iter().map(|&x| to_f64(x * scale)).collect(),
        }
    }

    /// Graphviz text; a bond of multiplicity `k` is drawn as `k` edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph mckay {\n");
        for (i, d) in self.node_dims.iter().enumerate() {
            out.push_str(&format!("  {i} [label=\"{d}\"];\n"));
        }
        for i in 0..self.n_nodes {
            for j in (i + 1)..self.n_nodes {
                for _ in 0..self.adjacency[i][j] {
                    out.push_str(&format!("  {i} -- {j};\n"));
                }
            }
        }
        out.push_str(&format!("  label=\"{}\";\n}}\n", self.dynkin_label));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AdeLabel;

    fn quiver(label: &str) -> QuiverGraph {
        let g = FiniteSubgroup::<f64>::build(label.parse::<AdeLabel>().unwrap(), 1e-9).unwrap();
        let t = g.character_table().unwrap();
        mckay_quiver(&g, &t).unwrap()
    }

    #[test]
    fn z2_double_bond() {
        let q = quiver("A1");
        assert_eq!(q.adjacency, vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(q.dynkin_label, AffineDynkin::A(1));
    }

    #[test]
    fn z3_triangle() {
        let q = quiver("A2");
        assert_eq!(q.adjacency, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(q.dynkin_label, AffineDynkin::A(2));
    }

    #[test]
    fn quaternion_star() {
        let q = quiver("D4");
        assert_eq!(q.dynkin_label, AffineDynkin::D(4));
        let center = q.node_dims.iter().position(|&d| d == 2).unwrap();
        for j in 0..5 {
            if j != center {
                assert_eq!(q.adjacency[center][j], 1);
                assert_eq!(q.node_dims[j], 1);
            }
        }
        assert!(q.matches_cartan());
    }

    #[test]
    fn icosahedral_is_affine_e8() {
        let q = quiver("E8");
        assert_eq!(q.dynkin_label, AffineDynkin::E8);
        assert!(q.matches_cartan());
        let p = q.perron::<f64>();
        assert!((p.eigenvalue - 2.0).abs() < 1e-8);
    }

    #[test]
    fn detect_rejects_non_affine() {
        // finite A3 path is not an affine diagram
        let path = vec![vec![0, 1, 0, 0], vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![0, 0, 1, 0]];
        assert!(matches!(detect_dynkin(&path), Err(Error::NoDynkinMatch)));
    }

    #[test]
    fn dot_output_lists_double_edges() {
        let dot = quiver("A1").to_dot();
        assert_eq!(dot.matches("0 -- 1").count(), 2);
    }
}
