use std::collections::BTreeMap;
use std::fmt;

use crate::group::GroupElement;
use crate::scalar::{cone, czero, modulus, real, to_f64, CVector, Complex, Real};

/// A polynomial in `z₁, z₂` with complex coefficients, keyed by `(a, b)` for
/// the monomial `z₁^a z₂^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Real> {
    terms: BTreeMap<(usize, usize), Complex<T>>,
}

impl<T: Real> Default for Polynomial<T> {
    fn default() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }
}

impl<T: Real> Polynomial<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: usize, b: usize) -> Self {
        Self::term(a, b, cone())
    }

    pub fn term(a: usize, b: usize, c: Complex<T>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((a, b), c);
        Polynomial { terms }
    }

    /// Homogeneous polynomial of degree `d` from coefficients indexed by the
    /// `z₁` exponent.
    pub fn from_homogeneous(d: usize, coeffs: &[Complex<T>]) -> Self {
        let terms = coeffs.iter().enumerate().map(|(a, &c)| ((a, d - a), c)).collect();
        Polynomial { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Complex<T>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: usize, b: usize) -> Complex<T> {
        self.terms.get(&(a, b)).copied().unwrap_or_else(czero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| *c == czero())
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    /// Coefficients of the degree-`d` part, indexed by the `z₁` exponent.
    pub fn homogeneous_part(&self, d: usize) -> Vec<Complex<T>> {
        (0..=d).map(|a| self.coefficient(a, d - a)).collect()
    }

    /// Drops coefficients of modulus at most `tol`.
    pub fn cleaned(mut self, tol: T) -> Self {
        self.terms.retain(|_, c| modulus(*c) > tol);
        self
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Polynomial { terms: self.terms.iter().map(|(k, c)| (*k, *c * s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            *terms.entry(*k).or_insert_with(czero) += c;
        }
        Polynomial { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-cone::<T>()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                *terms.entry((a1 + a2, b1 + b2)).or_insert_with(czero) += *c1 * *c2;
            }
        }
        Polynomial { terms }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Polynomial::monomial(0, 0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, p: [Complex<T>; 2]) -> Complex<T> {
        self.terms.iter().fold(czero(), |acc, ((a, b), c)| acc + *c * p[0].powu(*a as u32) * p[1].powu(*b as u32))
    }

    /// `(γ⊙f)(z) = f(γ z)`: substitutes `z₁ ↦ a z₁ + c z₂`, `z₂ ↦ b z₁ + d z₂`.
    /// Satisfies `(γ₂γ₁)⊙f = γ₁⊙(γ₂⊙f)`.
    pub fn substitute(&self, gamma: &GroupElement<T>) -> Self {
        let (a, b, c, d) = gamma.abcd();
        let x = Polynomial::term(1, 0, a).add(&Polynomial::term(0, 1, c));
        let y = Polynomial::term(1, 0, b).add(&Polynomial::term(0, 1, d));
        let max_deg = self.degree();
        let xp: Vec<Polynomial<T>> = std::iter::successors(Some(Polynomial::monomial(0, 0)), |p| Some(p.mul(&x)))
            .take(max_deg + 1)
            .collect();
        let yp: Vec<Polynomial<T>> = std::iter::successors(Some(Polynomial::monomial(0, 0)), |p| Some(p.mul(&y)))
            .take(max_deg + 1)
            .collect();
        self.terms
            .iter()
            .fold(Polynomial::zero(), |acc, ((i, j), coef)| acc.add(&xp[*i].mul(&yp[*j]).scale(*coef)))
    }

    /// Largest coefficient modulus.
    pub fn max_coefficient(&self) -> T {
        self.terms.values().map(|c| modulus(*c)).fold(T::zero(), |a, b| a.max(b))
    }

    /// Scales so the largest coefficient is 1; among coefficients of equal
    /// modulus (to `1e-9` relative) the lexicographically largest exponent wins.
    pub fn normalized(&self) -> Self {
        let top = self.max_coefficient();
        if top == T::zero() {
            return self.clone();
        }
        let lead = self
            .terms
            .iter()
            .rev()
            .find(|(_, c)| modulus(**c) >= top * (T::one() - real(1e-9)))
            .map(|(_, c)| *c)
            .expect("nonzero polynomial");
        self.scale(cone::<T>() / lead)
    }

    /// Coefficient vector in graded monomial order up to `max_degree`.
    pub fn to_vector(&self, max_degree: usize) -> CVector<T> {
        let n = (max_degree + 1) * (max_degree + 2) / 2;
        let mut v = CVector::zeros(n);
        for (&(a, b), &c) in &self.terms {
            let d = a + b;
            if d <= max_degree {
                v[d * (d + 1) / 2 + a] = c;
            }
        }
        v
    }
}

impl<T: Real> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((a, b), c) in self.terms.iter().rev() {
            let (re, im) = (to_f64(c.re), to_f64(c.im));
            if re.abs() < 1e-14 && im.abs() < 1e-14 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if im.abs() < 1e-14 {
                write!(f, "{re}")?;
            } else {
                write!(f, "({re}{im:+}i)")?;
            }
            match (a, b) {
                (0, 0) => {}
                _ => {
                    if *a > 0 {
                        write!(f, "*z1^{a}")?;
                    }
                    if *b > 0 {
                        write!(f, "*z2^{b}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{AdeLabel, FiniteSubgroup};
    use crate::scalar::cplx;

    #[test]
    fn arithmetic() {
        let x = Polynomial::<f64>::monomial(1, 0);
        let y = Polynomial::<f64>::monomial(0, 1);
        let s = x.add(&y).pow(2);
        assert_eq!(s.coefficient(1, 1), cplx(2.0, 0.0));
        assert_eq!(s.degree(), 2);
        assert_eq!(s.eval([cplx(1.0, 0.0), cplx(2.0, 0.0)]), cplx(9.0, 0.0));
        assert!(s.sub(&s).cleaned(1e-15).is_zero());
    }

    #[test]
    fn substitution_is_a_right_action() {
        let g = FiniteSubgroup::<f64>::build(AdeLabel::E6, 1e-9).unwrap();
        let f = Polynomial::monomial(3, 1).add(&Polynomial::term(0, 2, cplx(0.5, -1.0)));
        for (i, j) in [(2, 9), (13, 4), (21, 17)] {
            let lhs = f.substitute(&g.elements[g.mul(j, i)]);
            let rhs = f.substitute(&g.elements[j]).substitute(&g.elements[i]);
            assert!(lhs.sub(&rhs).max_coefficient() < 1e-12);
        }
    }

    #[test]
    fn normalization_prefers_larger_exponent() {
        let p = Polynomial::<f64>::term(1, 1, cplx(-2.0, 0.0)).add(&Polynomial::term(2, 0, cplx(2.0, 0.0)));
        let n = p.normalized();
        assert_eq!(n.coefficient(2, 0), cplx(1.0, 0.0));
        assert_eq!(n.coefficient(1, 1), cplx(-1.0, 0.0));
    }
}
