//! Exact rational scalars, vectors, and small dense matrices.
//!
//! Every quantity that participates in a lattice or membership decision is
//! kept as an arbitrary-precision rational; floats are derived views only.
//! Matrices here are tiny (dimension <= ~10), so the dense Gauss-Jordan
//! routines below are entirely adequate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type QVec = Vec<Rat>;

pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

pub fn qvec(entries: &[(i64, i64)]) -> QVec {
    entries.iter().map(|&(p, q)| rat(p, q)).collect()
}

pub fn qvec_int(entries: &[i64]) -> QVec {
    entries.iter().map(|&p| rat_int(p)).collect()
}

pub fn zeros(n: usize) -> QVec {
    vec![Rat::zero(); n]
}

/// Parses "p", "p/q", or "-p/q" with optional surrounding whitespace.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::Input(format!("malformed rational {s:?}, expected \"p\" or \"p/q\""));
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::Input(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(p, q))
}

/// Canonical form used by the JSON schemas: "p" when integral, "p/q" otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact dyadic rational equal to a finite f64.
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::Input(format!("non-finite value {x}")))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Largest dyadic rational with a `bits`-bit mantissa that does not exceed x.
/// Requires x > 0. Keeps denominators small where exactness is needed but the
/// magnitude only has to be approximately right.
pub fn snap_down_dyadic(x: f64, bits: u32) -> Result<Rat> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Input(format!("cannot snap non-positive value {x}")));
    }
    let shift = bits as i32 - 1 - x.log2().floor() as i32;
    let scaled = (x * 2f64.powi(shift)).floor();
    let m = Rat::from_float(scaled).expect("finite by construction");
    let out = if shift >= 0 {
        m / Rat::from_integer(BigInt::one() << shift as usize)
    } else {
        m * Rat::from_integer(BigInt::one() << (-shift) as usize)
    };
    if out.is_positive() {
        Ok(out)
    } else {
        // x was so small that flooring lost it; fall back to the exact value.
        rat_from_f64(x)
    }
}

/// Rational upper bound u on sqrt(s), certified by u^2 >= s exactly.
/// Exact for perfect squares; within a relative 2^-32 otherwise.
pub fn sqrt_upper(s: &Rat) -> Result<Rat> {
    if s.is_negative() {
        return Err(Error::Input("sqrt of a negative rational".into()));
    }
    if s.is_zero() {
        return Ok(Rat::zero());
    }
    // sqrt(p/q) = sqrt(p q 4^k) / (q 2^k); the integer ceiling of the
    // numerator's square root certifies the bound.
    const K: u32 = 32;
    let scaled: BigInt = (s.numer() * s.denom()) << (2 * K);
    let root = scaled.sqrt();
    let root = if &root * &root == scaled { root } else { root + 1 };
    Ok(Rat::new(root, s.denom() << K))
}

/// num / 2^exp in lowest terms. The denominator is a power of two, so the
/// reduction is one shift by the shared trailing zero count, never a gcd.
pub fn dyadic(num: BigInt, exp: u64) -> Rat {
    if num.is_zero() {
        return Rat::zero();
    }
    let tz = num.trailing_zeros().unwrap_or(0).min(exp);
    Rat::new_raw(num >> tz, BigInt::one() << (exp - tz))
}

/// True iff the denominator is a power of two.
pub fn is_dyadic(r: &Rat) -> bool {
    let d = r.denom();
    d.trailing_zeros() == Some(d.bits() - 1)
}

/// Exponent of a power-of-two denominator. Callers check `is_dyadic` first.
fn dyadic_exp(r: &Rat) -> u64 {
    r.denom().bits() - 1
}

/// Product of two rationals, reduced by a shift alone when both factors are
/// dyadic; the general reduction runs otherwise.
pub fn mul_fast(a: &Rat, b: &Rat) -> Rat {
    if is_dyadic(a) && is_dyadic(b) {
        dyadic(a.numer() * b.numer(), dyadic_exp(a) + dyadic_exp(b))
    } else {
        a * b
    }
}

/// Least common multiple of two positive integers, with a comparison fast
/// path when both are powers of two.
pub fn lcm_fast(a: &BigInt, b: &BigInt) -> BigInt {
    let pow2 = |v: &BigInt| v.trailing_zeros() == Some(v.bits() - 1);
    if pow2(a) && pow2(b) {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    } else {
        num_integer::Integer::lcm(a, b)
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Rat]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn scale(a: &[Rat], s: &Rat) -> QVec {
    a.iter().map(|x| x * s).collect()
}

pub fn norm2_sq(a: &[Rat]) -> Rat {
    a.iter().map(|x| x * x).sum()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn to_f64_vec(a: &[Rat]) -> Vec<f64> {
    a.iter().map(rat_to_f64).collect()
}

pub fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2_f64(a: &[f64]) -> f64 {
    dot_f64(a, a).sqrt()
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    m: usize,
    n: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zeros(m: usize, n: usize) -> Self {
        QMat {
            m,
            n,
            data: vec![Rat::zero(); m * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = QMat::zeros(n, n);
        for i in 0..n {
            *out.at_mut(i, i) = Rat::one();
        }
        out
    }

    pub fn from_rows(rows: Vec<QVec>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: r.len(),
                    what: if i == 0 { "matrix row" } else { "matrix row" },
                });
            }
        }
        Ok(QMat {
            m,
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(cols: Vec<QVec>) -> Result<Self> {
        QMat::from_rows(cols).map(|t| t.transpose())
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_vecs(&self) -> Vec<QVec> {
        (0..self.m).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> QVec {
        (0..self.m).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMat {
        let mut out = QMat::zeros(self.n, self.m);
        for i in 0..self.m {
            for j in 0..self.n {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Rat]) -> QVec {
        debug_assert_eq!(x.len(), self.n);
        (0..self.m).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.m).map(|i| to_f64_vec(self.row(i))).collect()
    }

    /// Gauss-Jordan inverse; None when singular. Square matrices only.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.m, self.n, "inverse of a non-square matrix");
        let n = self.n;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a.at(col, col).clone();
            for j in 0..n {
                *a.at_mut(col, j) /= &p;
                *inv.at_mut(col, j) /= &p;
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for j in 0..n {
                    let v = a.at(col, j) * &f;
                    *a.at_mut(r, j) -= v;
                    let w = inv.at(col, j) * &f;
                    *inv.at_mut(r, j) -= w;
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.m, self.n, "determinant of a non-square matrix");
        let n = self.n;
        let mut a = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !a.at(r, col).is_zero()) {
                Some(p) => p,
                None => return Rat::zero(),
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a.at(col, col).clone();
            det *= &p;
            for r in col + 1..n {
                if a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col) / &p;
                for j in col..n {
                    let v = a.at(col, j) * &f;
                    *a.at_mut(r, j) -= v;
                }
            }
        }
        det
    }

    /// Basis of the right null space { z : self * z = 0 }.
    pub fn nullspace(&self) -> Vec<QVec> {
        let (m, n) = (self.m, self.n);
        let mut a = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let pivot = (r..m).find(|&i| !a.at(i, c).is_zero());
            let Some(p) = pivot else { continue };
            if p != r {
                for j in 0..n {
                    a.data.swap(r * n + j, p * n + j);
                }
            }
            let pv = a.at(r, c).clone();
            for j in 0..n {
                *a.at_mut(r, j) /= &pv;
            }
            for i in 0..m {
                if i == r || a.at(i, c).is_zero() {
                    continue;
                }
                let f = a.at(i, c).clone();
                for j in 0..n {
                    let v = a.at(r, j) * &f;
                    *a.at_mut(i, j) -= v;
                }
            }
            pivot_cols.push(c);
            r += 1;
            if r == m {
                break;
            }
        }
        let mut basis = Vec::new();
        for free in 0..n {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut z = zeros(n);
            z[free] = Rat::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                z[pc] = -a.at(row, free).clone();
            }
            basis.push(z);
        }
        basis
    }

    /// Rank by elimination, exact.
    pub fn rank(&self) -> usize {
        self.n - self.nullspace().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert_eq!(format_rat(&parse_rat(" -3 / 6 ").unwrap()), "-1/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn f64_conversion_is_exact_for_dyadics() {
        let r = rat_from_f64(0.375).unwrap();
        assert_eq!(r, rat(3, 8));
        assert_eq!(rat_to_f64(&r), 0.375);
    }

    #[test]
    fn snap_down_stays_below_and_close() {
        for &x in &[1.0, 0.3333333, 123.456, 1e-8, 7.25e6] {
            let s = snap_down_dyadic(x, 24).unwrap();
            let sf = rat_to_f64(&s);
            assert!(sf <= x);
            assert!(sf >= x * (1.0 - 2e-7), "snap too coarse: {x} -> {sf}");
        }
    }

    #[test]
    fn sqrt_upper_certifies() {
        for s in [rat(2, 1), rat(1, 3), rat(49, 4), rat(0, 1)] {
            let u = sqrt_upper(&s).unwrap();
            assert!(&u * &u >= s);
        }
        // Perfect squares come back exact, and generic bounds are tight.
        assert_eq!(sqrt_upper(&rat(1, 1)).unwrap(), rat(1, 1));
        assert_eq!(sqrt_upper(&rat(9, 16)).unwrap(), rat(3, 4));
        let u = sqrt_upper(&rat(2, 1)).unwrap();
        assert!(&u * &u < rat(2_000_001, 1_000_000));
    }

    #[test]
    fn inverse_round_trip() {
        let b = QMat::from_rows(vec![qvec_int(&[2, 1]), qvec_int(&[0, 1])]).unwrap();
        let inv = b.inverse().unwrap();
        let x = qvec(&[(1, 2), (1, 2)]);
        let coords = inv.matvec(&x);
        assert_eq!(coords, vec![rat(0, 1), rat(1, 2)]);
        assert_eq!(b.matvec(&coords), x);
        assert_eq!(b.det(), rat_int(2));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let b = QMat::from_rows(vec![qvec_int(&[1, 2]), qvec_int(&[2, 4])]).unwrap();
        assert!(b.inverse().is_none());
        assert_eq!(b.det(), rat_int(0));
        assert_eq!(b.rank(), 1);
    }

    #[test]
    fn nullspace_is_orthogonal_complement_source() {
        let span = QMat::from_rows(vec![qvec_int(&[1, 1, 0])]).unwrap();
        let ns = span.nullspace();
        assert_eq!(ns.len(), 2);
        for z in &ns {
            assert!(dot(span.row(0), z).is_zero());
        }
    }
}
