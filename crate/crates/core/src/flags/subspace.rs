use num_traits::Zero;

use super::linalg::RationalMatrix;
use crate::exact::Rational;

/// Linear subspace of `Q^n`, stored as the nonzero rows of its reduced
/// echelon basis. Equal subspaces have identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = RationalMatrix::identity(ambient).row_vectors();
        Subspace { ambient, basis }
    }

    pub fn span<'a, I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<Rational>>,
    {
        let rows: Vec<Vec<Rational>> = vectors.into_iter().cloned().collect();
        if rows.is_empty() {
            return Self::zero(ambient);
        }
        let (r, pivots) = RationalMatrix::from_rows(&rows, ambient).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        RationalMatrix::from_rows(&rows, self.ambient).rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis))
    }

    /// Orthogonal complement under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        if self.basis.is_empty() {
            return Self::full(self.ambient);
        }
        let k = RationalMatrix::from_rows(&self.basis, self.ambient).kernel();
        Subspace::span(self.ambient, &k)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    /// Image under a square matrix.
    pub fn image(&self, t: &RationalMatrix) -> Subspace {
        let rows: Vec<Vec<Rational>> = self.basis.iter().map(|v| t.apply(v)).collect();
        Subspace::span(self.ambient, &rows)
    }

    /// A spanning vector of a one-dimensional subspace.
    pub fn point(&self) -> Option<&Vec<Rational>> {
        (self.dim() == 1).then(|| &self.basis[0])
    }
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn v(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn canonical_representation() {
        let a = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, &[v(&[1, 2, 1]), v(&[1, 0, -1])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn intersections() {
        let xy = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let yz = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(xy.intersection(&yz), Subspace::span(3, &[v(&[0, 1, 0])]));
        assert_eq!(xy.sum(&yz), Subspace::full(3));
        assert_eq!(xy.intersection(&Subspace::zero(3)).dim(), 0);
        assert!(xy.contains(&v(&[3, -2, 0])));
        assert!(!xy.contains(&v(&[0, 0, 1])));
    }
}
