//! Exact brute-force solvers by bounded coefficient enumeration.
//!
//! These are the ground truth the randomized solvers are tested against.
//! Every bound is certified: a feasible seed point caps the optimal value,
//! the outer radius converts gauge balls to Euclidean balls, and the basis
//! inverse's row norms convert those to per-coordinate integer intervals.
//! All comparisons are exact rational; ties break to the lexicographically
//! smallest coefficient vector, which the lex-ordered scan yields for free.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::CenteredPolytope;
use crate::lattice::{LatticeBasis, Subspace};
use crate::rational::{self, sqrt_upper, QVec, Rat};

/// Ceiling on enumerated candidates per call.
const MAX_POINTS: u128 = 4_000_000;

/// Integer coefficient box guaranteed to cover a gauge ball around a point.
#[derive(Debug, Clone)]
pub struct EnumerationBound {
    /// Gauge radius the box provably covers.
    pub radius_gauge: Rat,
    /// Certified upper bound on the squared Euclidean radius of that ball.
    pub radius_l2_sq: Rat,
    pub box_lo: Vec<i64>,
    pub box_hi: Vec<i64>,
}

impl EnumerationBound {
    pub fn cardinality(&self) -> u128 {
        self.box_lo
            .iter()
            .zip(&self.box_hi)
            .map(|(&l, &h)| if h < l { 0u128 } else { (h - l) as u128 + 1 })
            .product()
    }
}

/// Exact optimum found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceSolution {
    pub point: QVec,
    pub coeffs: Vec<i64>,
    pub value: Rat,
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { n, cap })
    } else {
        Ok(())
    }
}

fn rat_to_i64_bound(v: Rat, what: &str) -> Result<i64> {
    v.to_integer().to_i64().ok_or_else(|| Error::Internal(format!(
        "{what} exceeds the machine integer range"
    )))
}

fn check_cardinality(lo: &[i64], hi: &[i64]) -> Result<()> {
    let points: u128 = lo
        .iter()
        .zip(hi)
        .map(|(&l, &h)| if h < l { 0u128 } else { (h - l) as u128 + 1 })
        .product();
    if points > MAX_POINTS {
        Err(Error::EnumerationTooLarge {
            points,
            cap: MAX_POINTS,
        })
    } else {
        Ok(())
    }
}

/// Lexicographic scan of the integer box, last coordinate fastest.
fn scan_box(lo: &[i64], hi: &[i64], mut visit: impl FnMut(&[i64])) -> Result<()> {
    if lo.iter().zip(hi).any(|(l, h)| h < l) {
        return Ok(());
    }
    check_cardinality(lo, hi)?;
    let n = lo.len();
    let mut w = lo.to_vec();
    loop {
        visit(&w);
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if w[k] < hi[k] {
                w[k] += 1;
                break;
            }
            w[k] = lo[k];
        }
    }
}

/// Coefficient box covering { y in L : gauge(y - center) <= d0 }, derived
/// from the body's certified outer radius and the basis inverse's row norms.
pub fn gauge_ball_box(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    center: &QVec,
    d0: &Rat,
) -> Result<EnumerationBound> {
    let n = basis.dim();
    let l2_sq = c.outer_radius_sq() * d0 * d0;
    let coords = basis.coords(center);
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let row_sq = rational::norm2_sq(basis.inverse().row(i));
        let u = sqrt_upper(&(&row_sq * &l2_sq))?;
        lo.push(rat_to_i64_bound((&coords[i] - &u).ceil(), "enumeration bound")?);
        hi.push(rat_to_i64_bound((&coords[i] + &u).floor(), "enumeration bound")?);
    }
    Ok(EnumerationBound {
        radius_gauge: d0.clone(),
        radius_l2_sq: l2_sq,
        box_lo: lo,
        box_hi: hi,
    })
}

fn dims_consistent(c: &CenteredPolytope, basis: &LatticeBasis) -> Result<()> {
    if c.dim() != basis.dim() {
        return Err(Error::Dimension {
            expected: c.dim(),
            got: basis.dim(),
            what: "lattice basis dimension",
        });
    }
    Ok(())
}

/// Exact closest lattice vector to x under the gauge of the centered body.
pub fn cvp_brute(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    x: &QVec,
    cap: usize,
) -> Result<BruteForceSolution> {
    dims_consistent(c, basis)?;
    check_cap(basis.dim(), cap)?;
    if x.len() != basis.dim() {
        return Err(Error::Dimension {
            expected: basis.dim(),
            got: x.len(),
            what: "target vector",
        });
    }

    // Two cheap feasible seeds cap the optimum: the coset reduction and the
    // coordinatewise rounding of the target.
    let (residue, _) = basis.reduce_with_shift(x);
    let y_floor = rational::sub(x, &residue);
    let coords = basis.coords(x);
    let rounded: QVec = coords
        .iter()
        .map(|v| Rat::from_integer((v + rational::rat(1, 2)).floor().to_integer()))
        .collect();
    let y_round = basis.matrix().matvec(&rounded);
    let d_floor = c.gauge_exact(&rational::sub(&y_floor, x));
    let d_round = c.gauge_exact(&rational::sub(&y_round, x));
    let d0 = if d_floor <= d_round { d_floor } else { d_round };

    let bound = gauge_ball_box(c, basis, x, &d0)?;
    let mut best: Option<BruteForceSolution> = None;
    scan_box(&bound.box_lo, &bound.box_hi, |w| {
        let y = basis.point(w);
        let g = c.gauge_exact(&rational::sub(&y, x));
        if best.as_ref().map_or(true, |b| g < b.value) {
            best = Some(BruteForceSolution {
                point: y,
                coeffs: w.to_vec(),
                value: g,
            });
        }
    })?;
    best.ok_or_else(|| Error::Internal("enumeration box missed its own seed".into()))
}

/// Exact subspace avoiding problem: minimal-gauge lattice vector outside M.
pub fn sap_brute(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    m: &Subspace,
    cap: usize,
) -> Result<BruteForceSolution> {
    dims_consistent(c, basis)?;
    check_cap(basis.dim(), cap)?;
    let n = basis.dim();
    if m.ambient_dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: m.ambient_dim(),
            what: "subspace ambient dimension",
        });
    }

    // Some basis vector avoids M (otherwise M would contain the full
    // lattice span); both signs seed the asymmetric gauge.
    let mut d0: Option<Rat> = None;
    for j in 0..n {
        let col = basis.column(j);
        if m.contains(&col) {
            continue;
        }
        for v in [col.clone(), rational::neg(&col)] {
            let g = c.gauge_exact(&v);
            if d0.as_ref().map_or(true, |d| g < *d) {
                d0 = Some(g);
            }
        }
    }
    let d0 = d0.ok_or_else(|| {
        Error::Geometry("subspace contains every basis vector, so it is not proper".into())
    })?;

    let bound = gauge_ball_box(c, basis, &rational::zeros(n), &d0)?;
    let mut best: Option<BruteForceSolution> = None;
    scan_box(&bound.box_lo, &bound.box_hi, |w| {
        if w.iter().all(|&v| v == 0) {
            return;
        }
        let y = basis.point(w);
        if m.contains(&y) {
            return;
        }
        let g = c.gauge_exact(&y);
        if best.as_ref().map_or(true, |b| g < b.value) {
            best = Some(BruteForceSolution {
                point: y,
                coeffs: w.to_vec(),
                value: g,
            });
        }
    })?;
    best.ok_or_else(|| Error::Internal("SAP enumeration missed its own seed".into()))
}

/// Exact shortest nonzero lattice vector under the gauge.
pub fn svp_brute(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    cap: usize,
) -> Result<BruteForceSolution> {
    sap_brute(c, basis, &Subspace::zero(basis.dim())?, cap)
}

/// Exact minimal squared Euclidean norm over L \ M, for ratio-grid seeding.
pub fn l2_sap_sq(basis: &LatticeBasis, m: &Subspace, cap: usize) -> Result<(QVec, Rat)> {
    check_cap(basis.dim(), cap)?;
    let n = basis.dim();
    let mut d0_sq: Option<Rat> = None;
    for j in 0..n {
        let col = basis.column(j);
        if m.contains(&col) {
            continue;
        }
        let s = rational::norm2_sq(&col);
        if d0_sq.as_ref().map_or(true, |d| s < *d) {
            d0_sq = Some(s);
        }
    }
    let d0_sq = d0_sq.ok_or_else(|| {
        Error::Geometry("subspace contains every basis vector, so it is not proper".into())
    })?;

    let (lo, hi) = l2_box(basis, &rational::zeros(n), &d0_sq)?;
    let mut best: Option<(QVec, Vec<i64>, Rat)> = None;
    scan_box(&lo, &hi, |w| {
        if w.iter().all(|&v| v == 0) {
            return;
        }
        let y = basis.point(w);
        if m.contains(&y) {
            return;
        }
        let s = rational::norm2_sq(&y);
        if best.as_ref().map_or(true, |b| s < b.2) {
            best = Some((y, w.to_vec(), s));
        }
    })?;
    best.map(|(y, _, s)| (y, s))
        .ok_or_else(|| Error::Internal("l2 enumeration missed its own seed".into()))
}

/// Exact minimal squared Euclidean distance from x to the lattice.
pub fn l2_cvp_sq(basis: &LatticeBasis, x: &QVec, cap: usize) -> Result<(QVec, Rat)> {
    check_cap(basis.dim(), cap)?;
    let (residue, _) = basis.reduce_with_shift(x);
    let y0 = rational::sub(x, &residue);
    let d0_sq = rational::norm2_sq(&rational::sub(&y0, x));
    if d0_sq.is_zero() {
        return Ok((y0, d0_sq));
    }
    let (lo, hi) = l2_box(basis, x, &d0_sq)?;
    let mut best: Option<(QVec, Rat)> = None;
    scan_box(&lo, &hi, |w| {
        let y = basis.point(w);
        let s = rational::norm2_sq(&rational::sub(&y, x));
        if best.as_ref().map_or(true, |b| s < b.1) {
            best = Some((y, s));
        }
    })?;
    best.ok_or_else(|| Error::Internal("l2 enumeration missed its own seed".into()))
}

fn l2_box(basis: &LatticeBasis, center: &QVec, d_sq: &Rat) -> Result<(Vec<i64>, Vec<i64>)> {
    let n = basis.dim();
    let coords = basis.coords(center);
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let row_sq = rational::norm2_sq(basis.inverse().row(i));
        let u = sqrt_upper(&(&row_sq * d_sq))?;
        lo.push(rat_to_i64_bound((&coords[i] - &u).ceil(), "enumeration bound")?);
        hi.push(rat_to_i64_bound((&coords[i] + &u).floor(), "enumeration bound")?);
    }
    Ok((lo, hi))
}

/// First lattice point of the body in lexicographic coefficient order, or
/// None when the body is lattice-free. Ambient membership is exact.
pub fn ip_brute(
    k: &CenteredPolytope,
    basis: &LatticeBasis,
    cap: usize,
) -> Result<Option<BruteForceSolution>> {
    dims_consistent(k, basis)?;
    check_cap(basis.dim(), cap)?;
    let (lo, hi) = coeff_bounds_for_body(k, basis)?;
    let mut found: Option<BruteForceSolution> = None;
    scan_box(&lo, &hi, |w| {
        if found.is_some() {
            return;
        }
        let y = basis.point(w);
        if k.contains(&y) {
            found = Some(BruteForceSolution {
                value: k.gauge_exact(&rational::sub(&y, k.center())),
                point: y,
                coeffs: w.to_vec(),
            });
        }
    })?;
    Ok(found)
}

/// Exact maximum of <v, y> over the body's lattice points.
pub fn ip_opt_brute(
    k: &CenteredPolytope,
    basis: &LatticeBasis,
    v: &QVec,
    cap: usize,
) -> Result<Option<BruteForceSolution>> {
    dims_consistent(k, basis)?;
    check_cap(basis.dim(), cap)?;
    let (lo, hi) = coeff_bounds_for_body(k, basis)?;
    let mut best: Option<BruteForceSolution> = None;
    scan_box(&lo, &hi, |w| {
        let y = basis.point(w);
        if !k.contains(&y) {
            return;
        }
        let val = rational::dot(v, &y);
        if best.as_ref().map_or(true, |b| val > b.value) {
            best = Some(BruteForceSolution {
                point: y,
                coeffs: w.to_vec(),
                value: val,
            });
        }
    })?;
    Ok(best)
}

/// Integer coefficient ranges covering all lattice points of the body,
/// from its exact ambient bounding box and the basis inverse's rows.
fn coeff_bounds_for_body(
    k: &CenteredPolytope,
    basis: &LatticeBasis,
) -> Result<(Vec<i64>, Vec<i64>)> {
    let n = basis.dim();
    let (blo, bhi) = k.ambient_box();
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let row = basis.inverse().row(i);
        let mut mn = Rat::zero();
        let mut mx = Rat::zero();
        for j in 0..n {
            if row[j].is_positive() {
                mn += &row[j] * &blo[j];
                mx += &row[j] * &bhi[j];
            } else {
                mn += &row[j] * &bhi[j];
                mx += &row[j] * &blo[j];
            }
        }
        lo.push(rat_to_i64_bound(mn.ceil(), "lattice point bound")?);
        hi.push(rat_to_i64_bound(mx.floor(), "lattice point bound")?);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec, qvec_int, rat, rat_int, QMat};

    const CAP: usize = 5;

    fn cube2() -> CenteredPolytope {
        CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1]), &qvec_int(&[1, 1])).unwrap()
    }

    fn skew2() -> CenteredPolytope {
        CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1]), &qvec_int(&[2, 2])).unwrap()
    }

    #[test]
    fn cvp_on_the_integer_lattice() {
        let b = LatticeBasis::identity(2);
        let sol = cvp_brute(&cube2(), &b, &qvec(&[(2, 5), (3, 10)]), CAP).unwrap();
        assert_eq!(sol.point, qvec_int(&[0, 0]));
        assert_eq!(sol.value, rat(2, 5));

        let on_lattice = cvp_brute(&cube2(), &b, &qvec_int(&[3, -2]), CAP).unwrap();
        assert_eq!(on_lattice.value, rat_int(0));
        assert_eq!(on_lattice.point, qvec_int(&[3, -2]));
    }

    #[test]
    fn cvp_prefers_the_cheap_side_of_an_asymmetric_body() {
        let b = LatticeBasis::identity(2);
        let sol = cvp_brute(&skew2(), &b, &qvec(&[(9, 10), (0, 1)]), CAP).unwrap();
        assert_eq!(sol.point, qvec_int(&[1, 0]));
        assert_eq!(sol.value, rat(1, 20));
    }

    #[test]
    fn sap_on_cube_and_asymmetric_box() {
        let b = LatticeBasis::identity(2);
        let m = Subspace::new(vec![qvec_int(&[1, 0])], 2).unwrap();
        let sol = sap_brute(&cube2(), &b, &m, CAP).unwrap();
        assert_eq!(sol.value, rat_int(1));
        assert!(!m.contains(&sol.point));

        let asym = sap_brute(&skew2(), &b, &m, CAP).unwrap();
        assert_eq!(asym.value, rat(1, 2));
        assert_eq!(asym.point, qvec_int(&[0, 1]));
    }

    #[test]
    fn svp_matches_sap_with_zero_subspace() {
        let b = LatticeBasis::identity(2);
        let sol = svp_brute(&cube2(), &b, CAP).unwrap();
        assert_eq!(sol.value, rat_int(1));

        let scaled = LatticeBasis::from_columns(vec![qvec_int(&[2, 0]), qvec_int(&[0, 2])])
            .unwrap();
        assert_eq!(svp_brute(&cube2(), &scaled, CAP).unwrap().value, rat_int(2));

        let asym = svp_brute(&skew2(), &b, CAP).unwrap();
        assert_eq!(asym.value, rat(1, 2));
    }

    #[test]
    fn l2_oracles() {
        let b = LatticeBasis::identity(2);
        let m = Subspace::new(vec![qvec_int(&[1, 0])], 2).unwrap();
        let (y, sq) = l2_sap_sq(&b, &m, CAP).unwrap();
        assert_eq!(sq, rat_int(1));
        assert!(!m.contains(&y));

        let (y, sq) = l2_cvp_sq(&b, &qvec(&[(2, 5), (3, 10)]), CAP).unwrap();
        assert_eq!(y, qvec_int(&[0, 0]));
        assert_eq!(sq, rat(4, 25) + rat(9, 100));
    }

    #[test]
    fn ip_feasibility() {
        let b = LatticeBasis::identity(2);
        let empty = CenteredPolytope::axis_box(&qvec(&[(1, 5), (1, 5)]), &qvec(&[(4, 5), (4, 5)]))
            .unwrap();
        assert!(ip_brute(&empty, &b, CAP).unwrap().is_none());

        let hit = CenteredPolytope::axis_box(&qvec(&[(-3, 5), (-3, 5)]), &qvec(&[(3, 5), (3, 5)]))
            .unwrap();
        assert_eq!(ip_brute(&hit, &b, CAP).unwrap().unwrap().point, qvec_int(&[0, 0]));

        // Simplex-like corner body: first feasible point in lex order.
        let a = QMat::from_rows(vec![
            qvec_int(&[-1, 0]),
            qvec_int(&[0, -1]),
            qvec_int(&[1, 1]),
        ])
        .unwrap();
        let tri = CenteredPolytope::with_interior_point(
            a,
            vec![rat_int(0), rat_int(0), rat(3, 2)],
            vec![rat(1, 2), rat(1, 2)],
        )
        .unwrap();
        let sol = ip_brute(&tri, &b, CAP).unwrap().unwrap();
        assert_eq!(sol.point, qvec_int(&[0, 0]));
    }

    #[test]
    fn ip_optimization_maximum() {
        let b = LatticeBasis::identity(2);
        let k = CenteredPolytope::axis_box(&qvec(&[(-3, 5), (-3, 5)]), &qvec(&[(13, 5), (3, 5)]))
            .unwrap();
        let sol = ip_opt_brute(&k, &b, &qvec_int(&[1, 0]), CAP).unwrap().unwrap();
        assert_eq!(sol.value, rat_int(2));
        assert_eq!(sol.point, qvec_int(&[2, 0]));
    }

    #[test]
    fn unimodular_change_of_basis_preserves_distances() {
        let x = qvec(&[(2, 5), (3, 10)]);
        let b1 = LatticeBasis::identity(2);
        // Columns (1,0) and (1,1): same lattice Z^2.
        let b2 = LatticeBasis::from_columns(vec![qvec_int(&[1, 0]), qvec_int(&[1, 1])]).unwrap();
        for c in [cube2(), skew2()] {
            let d1 = cvp_brute(&c, &b1, &x, CAP).unwrap().value;
            let d2 = cvp_brute(&c, &b2, &x, CAP).unwrap().value;
            assert_eq!(d1, d2);
        }
    }

    #[test]
    fn enlarging_the_box_never_improves_the_optimum() {
        let c = skew2();
        let b = LatticeBasis::from_columns(vec![qvec_int(&[1, 0]), qvec_int(&[1, 1])]).unwrap();
        let x = qvec(&[(7, 10), (-2, 5)]);
        let sol = cvp_brute(&c, &b, &x, CAP).unwrap();
        let bound = gauge_ball_box(&c, &b, &x, &sol.value).unwrap();
        let lo: Vec<i64> = bound.box_lo.iter().map(|v| v - 1).collect();
        let hi: Vec<i64> = bound.box_hi.iter().map(|v| v + 1).collect();
        let mut best = sol.value.clone();
        scan_box(&lo, &hi, |w| {
            let g = c.gauge_exact(&rational::sub(&b.point(w), &x));
            if g < best {
                best = g.clone();
            }
        })
        .unwrap();
        assert_eq!(best, sol.value);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let b = LatticeBasis::identity(6);
        let lo = vec![rat_int(-1); 6];
        let hi = vec![rat_int(1); 6];
        let c = CenteredPolytope::axis_box(&lo, &hi).unwrap();
        match svp_brute(&c, &b, 5) {
            Err(Error::CapExceeded { n, cap }) => {
                assert_eq!((n, cap), (6, 5));
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }
}
