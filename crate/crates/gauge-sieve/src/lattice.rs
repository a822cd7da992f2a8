//! Lattice bases, coset reduction, and proper-subspace membership.
//!
//! Every decision here is exact rational: the basis inverse is computed once
//! at construction, and membership, reduction, and coordinates never touch
//! floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, QMat, QVec, Rat};

/// Full-rank lattice basis. Columns of `b` are the basis vectors.
#[derive(Debug, Clone)]
pub struct LatticeBasis {
    b: QMat,
    inv: QMat,
    det: Rat,
    cols_f64: Vec<Vec<f64>>,
    /// Denominator-cleared inverse rows: coords(x) = (inv_num nx) / (inv_den dx)
    /// for x with numerators nx over a common denominator dx. Keeping the
    /// inverse as integers makes floors and integrality tests pure BigInt
    /// work with no per-entry reduction. inv_den is positive.
    inv_num: Vec<Vec<BigInt>>,
    inv_den: BigInt,
}

/// Numerators of x over a common positive denominator.
fn cleared(x: &QVec) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for v in x {
        den = rational::lcm_fast(&den, v.denom());
    }
    let num = x.iter().map(|v| v.numer() * (&den / v.denom())).collect();
    (num, den)
}

impl LatticeBasis {
    pub fn new(b: QMat) -> Result<Self> {
        if b.rows() != b.cols() {
            return Err(Error::Input(format!(
                "lattice basis must be square, got {}x{}",
                b.rows(),
                b.cols()
            )));
        }
        let det = b.det();
        let inv = b
            .inverse()
            .ok_or_else(|| Error::Input("lattice basis is singular".into()))?;
        let cols_f64 = (0..b.cols())
            .map(|j| rational::to_f64_vec(&b.column(j)))
            .collect();
        let mut inv_den = BigInt::one();
        for i in 0..inv.rows() {
            for j in 0..inv.cols() {
                inv_den = inv_den.lcm(inv.at(i, j).denom());
            }
        }
        let inv_num = (0..inv.rows())
            .map(|i| {
                (0..inv.cols())
                    .map(|j| {
                        let e = inv.at(i, j);
                        e.numer() * (&inv_den / e.denom())
                    })
                    .collect()
            })
            .collect();
        Ok(LatticeBasis {
            b,
            inv,
            det,
            cols_f64,
            inv_num,
            inv_den,
        })
    }

    pub fn from_columns(cols: Vec<QVec>) -> Result<Self> {
        Self::new(QMat::from_columns(cols)?)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(QMat::identity(n)).expect("identity basis")
    }

    pub fn dim(&self) -> usize {
        self.b.cols()
    }

    pub fn matrix(&self) -> &QMat {
        &self.b
    }

    pub fn inverse(&self) -> &QMat {
        &self.inv
    }

    pub fn determinant(&self) -> &Rat {
        &self.det
    }

    pub fn column(&self, j: usize) -> QVec {
        self.b.column(j)
    }

    pub fn column_f64(&self, j: usize) -> &[f64] {
        &self.cols_f64[j]
    }

    /// Basis coordinates of x (not necessarily integral).
    pub fn coords(&self, x: &QVec) -> QVec {
        let (v, s) = self.coords_cleared(x);
        v.into_iter().map(|vi| Rat::new(vi, s.clone())).collect()
    }

    /// Basis coordinates of x as integer numerators over one shared positive
    /// denominator.
    fn coords_cleared(&self, x: &QVec) -> (Vec<BigInt>, BigInt) {
        let (nx, dx) = cleared(x);
        let s = &self.inv_den * &dx;
        let v = self
            .inv_num
            .iter()
            .map(|row| row.iter().zip(&nx).map(|(m, t)| m * t).sum())
            .collect();
        (v, s)
    }

    /// The lattice point with integer coordinates w.
    pub fn point(&self, w: &[i64]) -> QVec {
        let wr: QVec = w.iter().map(|&v| rational::rat_int(v)).collect();
        self.b.matvec(&wr)
    }

    /// The lattice point with big-integer coordinates w.
    pub fn point_big(&self, w: &[BigInt]) -> QVec {
        let wr: QVec = w.iter().map(|v| Rat::from_integer(v.clone())).collect();
        self.b.matvec(&wr)
    }

    /// True iff x is a lattice point (integral basis coordinates).
    pub fn contains(&self, x: &QVec) -> bool {
        let (v, s) = self.coords_cleared(x);
        v.iter().all(|vi| (vi % &s).is_zero())
    }

    /// Integer coordinates of x when it is a lattice point.
    pub fn integer_coords(&self, x: &QVec) -> Option<Vec<BigInt>> {
        let (v, s) = self.coords_cleared(x);
        if v.iter().all(|vi| (vi % &s).is_zero()) {
            Some(v.into_iter().map(|vi| vi / &s).collect())
        } else {
            None
        }
    }

    /// Unique coset representative of x + L inside B[0,1)^n.
    pub fn reduce(&self, x: &QVec) -> QVec {
        self.reduce_with_shift(x).0
    }

    /// Coset representative together with the integer shift: for a return
    /// value (y, w), y = x + B w and y lies in B[0,1)^n.
    pub fn reduce_with_shift(&self, x: &QVec) -> (QVec, Vec<BigInt>) {
        let (v, s) = self.coords_cleared(x);
        let mut frac = Vec::with_capacity(v.len());
        let mut shift = Vec::with_capacity(v.len());
        for vi in v {
            let fl = vi.div_floor(&s);
            frac.push(Rat::new(vi - &fl * &s, s.clone()));
            shift.push(-fl);
        }
        (self.b.matvec(&frac), shift)
    }

    /// Integer shift w with x + B w in B[0,1)^n, without materializing the
    /// representative itself.
    pub fn shift_coeffs(&self, x: &QVec) -> Vec<BigInt> {
        let (v, s) = self.coords_cleared(x);
        v.into_iter().map(|vi| -vi.div_floor(&s)).collect()
    }
}

/// Proper linear subspace of dimension < n, with a precomputed orthogonal
/// complement basis so membership is a handful of exact dot products.
#[derive(Debug, Clone)]
pub struct Subspace {
    span: Vec<QVec>,
    complement: Vec<QVec>,
    ambient: usize,
    dim: usize,
}

impl Subspace {
    /// Subspace spanned by the given vectors; their span must be proper.
    pub fn new(span: Vec<QVec>, ambient: usize) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::Input("subspace needs a positive ambient dimension".into()));
        }
        for (i, v) in span.iter().enumerate() {
            if v.len() != ambient {
                return Err(Error::Dimension {
                    expected: ambient,
                    got: v.len(),
                    what: "subspace spanning vector",
                });
            }
            if rational::is_zero_vec(v) && span.len() == 1 {
                // A single zero vector is the zero subspace; drop it.
                return Self::zero(ambient);
            }
            let _ = i;
        }
        if span.is_empty() {
            return Self::zero(ambient);
        }
        let mat = QMat::from_rows(span.clone())?;
        let dim = mat.rank();
        if dim >= ambient {
            return Err(Error::Geometry(
                "subspace must be proper (dimension below ambient)".into(),
            ));
        }
        let complement = mat.nullspace();
        Ok(Subspace {
            span,
            complement,
            ambient,
            dim,
        })
    }

    /// The zero subspace {0}.
    pub fn zero(ambient: usize) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::Input("subspace needs a positive ambient dimension".into()));
        }
        let complement = (0..ambient)
            .map(|j| {
                let mut e = rational::zeros(ambient);
                e[j] = rational::rat_int(1);
                e
            })
            .collect();
        Ok(Subspace {
            span: Vec::new(),
            complement,
            ambient,
            dim: 0,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spanning_vectors(&self) -> &[QVec] {
        &self.span
    }

    /// Exact membership: x is orthogonal to every complement vector.
    pub fn contains(&self, x: &QVec) -> bool {
        self.complement
            .iter()
            .all(|c| rational::dot(c, x).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec, qvec_int};

    fn skew_basis() -> LatticeBasis {
        // Columns (2,0) and (1,1).
        LatticeBasis::from_columns(vec![qvec_int(&[2, 0]), qvec_int(&[1, 1])]).unwrap()
    }

    #[test]
    fn reduction_on_the_identity_lattice() {
        let b = LatticeBasis::identity(2);
        assert_eq!(
            b.reduce(&qvec(&[(3, 2), (-1, 4)])),
            qvec(&[(1, 2), (3, 4)])
        );
        assert_eq!(b.reduce(&qvec_int(&[4, -7])), qvec_int(&[0, 0]));
    }

    #[test]
    fn reduction_on_a_skew_basis() {
        let b = skew_basis();
        // Coordinates of (1/2, 1/2) are (0, 1/2): already in the cell.
        assert_eq!(
            b.reduce(&qvec(&[(1, 2), (1, 2)])),
            qvec(&[(1, 2), (1, 2)])
        );
        let (y, w) = b.reduce_with_shift(&qvec(&[(5, 2), (1, 2)]));
        assert_eq!(y, qvec(&[(1, 2), (1, 2)]));
        assert_eq!(b.point_big(&w), qvec_int(&[-2, 0]));
    }

    #[test]
    fn reduction_is_idempotent_and_coset_sound() {
        let b = skew_basis();
        for x in [
            qvec(&[(7, 3), (-2, 5)]),
            qvec(&[(-9, 4), (11, 6)]),
            qvec_int(&[3, 1]),
        ] {
            let r = b.reduce(&x);
            assert_eq!(b.reduce(&r), r);
            assert!(b.contains(&rational::sub(&x, &r)));
            let shifted = rational::add(&x, &b.point(&[3, -2]));
            assert_eq!(b.reduce(&shifted), r);
        }
    }

    #[test]
    fn lattice_membership() {
        let id = LatticeBasis::identity(2);
        assert!(id.contains(&qvec_int(&[2, -3])));
        assert!(!id.contains(&qvec(&[(1, 2), (0, 1)])));
        let b = skew_basis();
        assert!(b.contains(&qvec_int(&[3, 1])));
        assert_eq!(
            b.integer_coords(&qvec_int(&[3, 1])).unwrap(),
            vec![BigInt::from(1), BigInt::from(1)]
        );
        assert!(!b.contains(&qvec_int(&[1, 0])));
    }

    #[test]
    fn singular_bases_are_rejected() {
        let cols = vec![qvec_int(&[1, 2]), qvec_int(&[2, 4])];
        assert!(LatticeBasis::from_columns(cols).is_err());
    }

    #[test]
    fn subspace_membership() {
        let m = Subspace::new(vec![qvec_int(&[1, 0])], 2).unwrap();
        assert!(m.contains(&qvec_int(&[3, 0])));
        assert!(!m.contains(&qvec_int(&[0, 1])));
        let diag = Subspace::new(vec![qvec_int(&[1, 1])], 2).unwrap();
        assert!(diag.contains(&qvec_int(&[2, 2])));
        assert!(!diag.contains(&qvec_int(&[2, 1])));
    }

    #[test]
    fn zero_subspace_contains_only_origin() {
        let z = Subspace::zero(3).unwrap();
        assert_eq!(z.dim(), 0);
        assert!(z.contains(&rational::zeros(3)));
        assert!(!z.contains(&qvec(&[(0, 1), (1, 7), (0, 1)])));
    }

    #[test]
    fn improper_subspaces_are_rejected() {
        let full = vec![qvec_int(&[1, 0]), qvec_int(&[1, 1])];
        assert!(Subspace::new(full, 2).is_err());
        // Redundant spanning sets of a proper subspace are fine.
        let redundant =
            Subspace::new(vec![qvec_int(&[1, 1]), qvec_int(&[2, 2])], 2).unwrap();
        assert_eq!(redundant.dim(), 1);
        assert!(redundant.contains(&qvec(&[(1, 2), (1, 2)])));
    }
}
