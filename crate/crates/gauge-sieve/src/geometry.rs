//! H-polytopes with a tracked interior point and the gauge semi-norms they
//! induce.
//!
//! A body is stored in its ambient coordinates as { x : A x <= b } together
//! with a strictly interior point a0. All gauge evaluation refers to the
//! centered translate K - a0, whose facet slacks b - A a0 are strictly
//! positive; for a zero-centered body the translate is the body itself.
//!
//! Facet data is exact rational. Gauge values are computed in f64 (with
//! REL_TOL at comparison sites) and exactly on demand; the exact paths decide
//! everything that certifies a result.

use num_traits::{One, Signed, Zero};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome};
use crate::rational::{self, format_rat, QMat, QVec, Rat};
use crate::sampling::{self, SamplerConfig, UniformSampler};

/// Relative tolerance for every f64 gauge comparison in the crate.
pub const REL_TOL: f64 = 1e-9;

/// Tests a <= b with REL_TOL slack relative to the operand magnitudes.
pub fn leq_tol(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Which of the two one-sided gauges attains the starred gauge.
/// Plus means the body itself, Minus its negation; ties resolve to Plus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Starred gauge value together with the side attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeValue {
    pub value: f64,
    pub sign: Sign,
}

/// Bounded H-polytope { x : A x <= b } with strictly interior point a0 and
/// certified inner/outer radii for its centered translate.
#[derive(Debug, Clone)]
pub struct CenteredPolytope {
    a: QMat,
    b: QVec,
    a0: QVec,
    /// Centered facet slacks b - A a0, all strictly positive.
    bc: QVec,
    /// Exact coordinate bounds of the centered translate.
    box_lo: QVec,
    box_hi: QVec,
    /// Exact upper bound on sup { |x|_2^2 : x in K - a0 }.
    outer_sq: Rat,
    /// Certified radii: ball(inner_r) subset K - a0 subset ball(outer_r).
    inner_r: Rat,
    outer_r: Rat,
    // f64 caches for the hot gauge path.
    rows_over_bc: Vec<Vec<f64>>,
    af: Vec<Vec<f64>>,
    bf: Vec<f64>,
    a0f: Vec<f64>,
}

impl CenteredPolytope {
    /// Zero-centered body { x : A x <= b }; requires every b_i > 0.
    pub fn from_rows(a: QMat, b: QVec) -> Result<Self> {
        let n = a.cols();
        Self::with_interior_point(a, b, rational::zeros(n))
    }

    /// Body { x : A x <= b } with declared interior point a0 (A a0 < b).
    pub fn with_interior_point(a: QMat, b: QVec, a0: QVec) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if m == 0 || n == 0 {
            return Err(Error::Input(
                "polytope needs at least one facet and one dimension".into(),
            ));
        }
        if b.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: b.len(),
                what: "facet offsets",
            });
        }
        if a0.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: a0.len(),
                what: "interior point",
            });
        }
        for i in 0..m {
            if rational::is_zero_vec(a.row(i)) {
                return Err(Error::Geometry(format!("facet {i} has a zero normal")));
            }
        }
        let a_a0 = a.matvec(&a0);
        let bc: QVec = (0..m).map(|i| &b[i] - &a_a0[i]).collect();
        if let Some(i) = bc.iter().position(|s| !s.is_positive()) {
            return Err(Error::Geometry(format!(
                "declared center is not strictly interior: facet {i} has slack {}",
                format_rat(&bc[i])
            )));
        }

        // Exact bounding box of the centered translate; also certifies
        // boundedness, which every downstream radius argument relies on.
        let mut box_lo = Vec::with_capacity(n);
        let mut box_hi = Vec::with_capacity(n);
        for j in 0..n {
            let mut obj = rational::zeros(n);
            obj[j] = Rat::one();
            let hi = match lp::maximize(&obj, &a, &bc)? {
                LpOutcome::Optimal { value, .. } => value,
                LpOutcome::Unbounded => {
                    return Err(Error::Geometry(format!(
                        "polytope is unbounded along coordinate {j}"
                    )))
                }
                LpOutcome::Infeasible => {
                    return Err(Error::Internal("interior point left an empty LP".into()))
                }
            };
            let lo = match lp::minimize(&obj, &a, &bc)? {
                LpOutcome::Optimal { value, .. } => value,
                LpOutcome::Unbounded => {
                    return Err(Error::Geometry(format!(
                        "polytope is unbounded along coordinate {j}"
                    )))
                }
                LpOutcome::Infeasible => {
                    return Err(Error::Internal("interior point left an empty LP".into()))
                }
            };
            box_lo.push(lo);
            box_hi.push(hi);
        }

        let mut outer_sq = Rat::zero();
        for j in 0..n {
            let l2 = &box_lo[j] * &box_lo[j];
            let h2 = &box_hi[j] * &box_hi[j];
            outer_sq += if l2 > h2 { l2 } else { h2 };
        }
        let outer_r = rational::sqrt_upper(&outer_sq)?;

        let mut inner_r: Option<Rat> = None;
        for i in 0..m {
            let norm_up = rational::sqrt_upper(&rational::norm2_sq(a.row(i)))?;
            let cand = &bc[i] / &norm_up;
            if inner_r.as_ref().map_or(true, |r| cand < *r) {
                inner_r = Some(cand);
            }
        }
        let inner_r = inner_r.expect("at least one facet");

        let af = a.to_f64();
        let bf = rational::to_f64_vec(&b);
        let a0f = rational::to_f64_vec(&a0);
        let bcf = rational::to_f64_vec(&bc);
        let rows_over_bc = af
            .iter()
            .zip(&bcf)
            .map(|(row, s)| row.iter().map(|v| v / s).collect())
            .collect();

        Ok(CenteredPolytope {
            a,
            b,
            a0,
            bc,
            box_lo,
            box_hi,
            outer_sq,
            inner_r,
            outer_r,
            rows_over_bc,
            af,
            bf,
            a0f,
        })
    }

    /// Axis-aligned box [lo_1,hi_1] x ... centered at its midpoint.
    pub fn axis_box(lo: &[Rat], hi: &[Rat]) -> Result<Self> {
        let (rows, offs) = box_facets(lo, hi)?;
        let half = crate::rational::rat(1, 2);
        let mid: QVec = (0..lo.len()).map(|j| (&lo[j] + &hi[j]) * &half).collect();
        Self::with_interior_point(QMat::from_rows(rows)?, offs, mid)
    }

    /// Axis-aligned box kept zero-centered: requires lo < 0 < hi, so the
    /// origin-anchored gauge sees the box's asymmetry.
    pub fn axis_box_at_origin(lo: &[Rat], hi: &[Rat]) -> Result<Self> {
        let (rows, offs) = box_facets(lo, hi)?;
        Self::from_rows(QMat::from_rows(rows)?, offs)
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn num_facets(&self) -> usize {
        self.a.rows()
    }

    pub fn normals(&self) -> &QMat {
        &self.a
    }

    /// Ambient facet offsets, as given at construction.
    pub fn offsets(&self) -> &QVec {
        &self.b
    }

    /// Facet slacks of the centered translate (strictly positive).
    pub fn centered_offsets(&self) -> &QVec {
        &self.bc
    }

    pub fn center(&self) -> &QVec {
        &self.a0
    }

    pub fn center_f64(&self) -> &[f64] {
        &self.a0f
    }

    pub fn is_zero_centered(&self) -> bool {
        rational::is_zero_vec(&self.a0)
    }

    /// Certified inner radius of the centered translate.
    pub fn inner_radius(&self) -> &Rat {
        &self.inner_r
    }

    /// Certified outer radius of the centered translate.
    pub fn outer_radius(&self) -> &Rat {
        &self.outer_r
    }

    /// Exact upper bound on the squared Euclidean norm over the centered body.
    pub fn outer_radius_sq(&self) -> &Rat {
        &self.outer_sq
    }

    /// Exact coordinate bounds of the centered translate.
    pub fn centered_box(&self) -> (&QVec, &QVec) {
        (&self.box_lo, &self.box_hi)
    }

    /// Exact coordinate bounds of the body in ambient coordinates.
    pub fn ambient_box(&self) -> (QVec, QVec) {
        let lo = rational::add(&self.box_lo, &self.a0);
        let hi = rational::add(&self.box_hi, &self.a0);
        (lo, hi)
    }

    pub fn normals_f64(&self) -> &[Vec<f64>] {
        &self.af
    }

    pub fn offsets_f64(&self) -> &[f64] {
        &self.bf
    }

    /// The centered translate as a zero-centered body.
    pub fn centered(&self) -> Self {
        if self.is_zero_centered() {
            return self.clone();
        }
        let n = self.dim();
        CenteredPolytope {
            a: self.a.clone(),
            b: self.bc.clone(),
            a0: rational::zeros(n),
            bc: self.bc.clone(),
            box_lo: self.box_lo.clone(),
            box_hi: self.box_hi.clone(),
            outer_sq: self.outer_sq.clone(),
            inner_r: self.inner_r.clone(),
            outer_r: self.outer_r.clone(),
            rows_over_bc: self.rows_over_bc.clone(),
            af: self.af.clone(),
            bf: rational::to_f64_vec(&self.bc),
            a0f: vec![0.0; n],
        }
    }

    /// Exact ambient membership A x <= b.
    pub fn contains(&self, x: &QVec) -> bool {
        let ax = self.a.matvec(x);
        ax.iter().zip(&self.b).all(|(l, r)| l <= r)
    }

    /// Exact strict ambient membership A x < b.
    pub fn contains_strict(&self, x: &QVec) -> bool {
        let ax = self.a.matvec(x);
        ax.iter().zip(&self.b).all(|(l, r)| l < r)
    }

    /// Gauge of the centered translate at x, in f64.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        let mut best = 0.0_f64;
        for row in &self.rows_over_bc {
            let v = rational::dot_f64(row, x);
            if v > best {
                best = v;
            }
        }
        best
    }

    /// Per-facet ratios a_i . x / (b_i - a_i . a0) in f64. `gauge` is the
    /// positive part of their maximum, and subtracting two points' ratio
    /// vectors entrywise gives the ratios of their difference, so batch
    /// gauge comparisons can reuse one table per point.
    pub fn facet_ratios(&self, x: &[f64]) -> Vec<f64> {
        self.rows_over_bc
            .iter()
            .map(|row| rational::dot_f64(row, x))
            .collect()
    }

    /// Exact gauge of the centered translate at x.
    pub fn gauge_exact(&self, x: &QVec) -> Rat {
        let mut best = Rat::zero();
        for i in 0..self.a.rows() {
            let v = rational::dot(self.a.row(i), x) / &self.bc[i];
            if v > best {
                best = v;
            }
        }
        best
    }

    /// Gauge of x under the body or its negation, per sign.
    pub fn gauge_signed(&self, x: &[f64], sign: Sign) -> f64 {
        match sign {
            Sign::Plus => self.gauge(x),
            Sign::Minus => {
                let neg: Vec<f64> = x.iter().map(|v| -v).collect();
                self.gauge(&neg)
            }
        }
    }

    /// Starred gauge min(|x|_C, |x|_{-C}) with the attaining side.
    pub fn gauge_star(&self, x: &[f64]) -> GaugeValue {
        let plus = self.gauge(x);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let minus = self.gauge(&neg);
        if plus <= minus {
            GaugeValue {
                value: plus,
                sign: Sign::Plus,
            }
        } else {
            GaugeValue {
                value: minus,
                sign: Sign::Minus,
            }
        }
    }

    /// Exact starred gauge with the attaining side; ties resolve to Plus.
    pub fn gauge_star_exact(&self, x: &QVec) -> (Rat, Sign) {
        let plus = self.gauge_exact(x);
        let minus = self.gauge_exact(&rational::neg(x));
        if plus <= minus {
            (plus, Sign::Plus)
        } else {
            (minus, Sign::Minus)
        }
    }

    /// Translate to put c at the origin: { x : A x <= b - A c }, zero-centered.
    /// Requires c strictly interior in ambient coordinates.
    pub fn recenter(&self, c: &QVec) -> Result<Self> {
        let ac = self.a.matvec(c);
        let nb: QVec = (0..self.num_facets())
            .map(|i| &self.b[i] - &ac[i])
            .collect();
        Self::from_rows(self.a.clone(), nb)
    }

    /// C intersected with -C; requires a zero-centered body.
    pub fn intersect_with_negation(&self) -> Result<Self> {
        self.require_zero_centered("intersect_with_negation")?;
        let mut rows = self.a.row_vecs();
        rows.extend(self.a.row_vecs().into_iter().map(|r| rational::neg(&r)));
        let mut offs = self.b.clone();
        offs.extend(self.b.iter().cloned());
        Self::from_rows(QMat::from_rows(rows)?, offs)
    }

    /// Dilate a zero-centered body by t > 0.
    pub fn scale(&self, t: &Rat) -> Result<Self> {
        self.require_zero_centered("scale")?;
        if !t.is_positive() {
            return Err(Error::Input("scale factor must be positive".into()));
        }
        let nb: QVec = self.b.iter().map(|v| v * t).collect();
        Self::from_rows(self.a.clone(), nb)
    }

    /// Chebyshev center and radius of the ambient body.
    ///
    /// Facet norms are rationalized upward, so the returned ball is certified
    /// to fit inside and the radius is a valid (slightly conservative) lower
    /// bound on the true Chebyshev radius.
    pub fn chebyshev_center(&self) -> Result<(QVec, Rat)> {
        let (m, n) = (self.num_facets(), self.dim());
        let mut rows = Vec::with_capacity(m + 1);
        let mut offs = Vec::with_capacity(m + 1);
        for i in 0..m {
            let mut row = self.a.row(i).to_vec();
            row.push(rational::sqrt_upper(&rational::norm2_sq(self.a.row(i)))?);
            rows.push(row);
            offs.push(self.b[i].clone());
        }
        let mut nonneg = rational::zeros(n + 1);
        nonneg[n] = -Rat::one();
        rows.push(nonneg);
        offs.push(Rat::zero());

        let mut obj = rational::zeros(n + 1);
        obj[n] = Rat::one();
        match lp::maximize(&obj, &QMat::from_rows(rows)?, &offs)? {
            LpOutcome::Optimal { x, value } => Ok((x[..n].to_vec(), value)),
            LpOutcome::Infeasible => Err(Error::Internal(
                "chebyshev LP infeasible for a validated body".into(),
            )),
            LpOutcome::Unbounded => Err(Error::Internal(
                "chebyshev LP unbounded for a bounded body".into(),
            )),
        }
    }

    /// Exact maximum of <v, x> over the ambient body, with a maximizer.
    pub fn support_max(&self, v: &QVec) -> Result<(QVec, Rat)> {
        match lp::maximize(v, &self.a, &self.b)? {
            LpOutcome::Optimal { x, value } => Ok((x, value)),
            _ => Err(Error::Internal(
                "support LP failed on a validated bounded body".into(),
            )),
        }
    }

    /// Exact minimum of <v, x> over the ambient body, with a minimizer.
    pub fn support_min(&self, v: &QVec) -> Result<(QVec, Rat)> {
        match lp::minimize(v, &self.a, &self.b)? {
            LpOutcome::Optimal { x, value } => Ok((x, value)),
            _ => Err(Error::Internal(
                "support LP failed on a validated bounded body".into(),
            )),
        }
    }

    fn require_zero_centered(&self, what: &str) -> Result<()> {
        if self.is_zero_centered() {
            Ok(())
        } else {
            Err(Error::Geometry(format!(
                "{what} requires a zero-centered body (call centered() or recenter first)"
            )))
        }
    }
}

fn box_facets(lo: &[Rat], hi: &[Rat]) -> Result<(Vec<QVec>, QVec)> {
    let n = lo.len();
    if n == 0 || hi.len() != n {
        return Err(Error::Input("box bounds must be nonempty and aligned".into()));
    }
    if let Some(j) = (0..n).find(|&j| lo[j] >= hi[j]) {
        return Err(Error::Geometry(format!(
            "box is degenerate along coordinate {j}"
        )));
    }
    let mut rows = Vec::with_capacity(2 * n);
    let mut offs = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut up = rational::zeros(n);
        up[j] = Rat::one();
        rows.push(up.clone());
        offs.push(hi[j].clone());
        up[j] = -Rat::one();
        rows.push(up);
        offs.push(-&lo[j]);
    }
    Ok((rows, offs))
}

/// Monte Carlo estimate of the symmetry parameter
/// (vol(C ∩ -C) / vol(C))^(1/n). Symmetry is measured about the origin, so
/// the body must be zero-centered; recenter first for anything else.
pub fn estimate_gamma(c: &CenteredPolytope, samples: usize, seed: u64) -> Result<f64> {
    estimate_gamma_with_se(c, samples, seed).map(|(g, _)| g)
}

/// Symmetry estimate together with its delta-method standard error.
pub fn estimate_gamma_with_se(
    c: &CenteredPolytope,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::Input("gamma estimation needs at least one sample".into()));
    }
    if !c.is_zero_centered() {
        return Err(Error::Geometry(
            "symmetry is measured about the origin; recenter the body first".into(),
        ));
    }
    let mut sampler = UniformSampler::new(c, SamplerConfig::new(seed, sampling::streams::GAMMA))?;
    // Reflection membership of a draw is decided on the grid itself; the
    // counted event x in C, -x in C is exact in both forms.
    let reflected = sampler.reflected_grid()?;
    let mut hits = 0usize;
    for _ in 0..samples {
        if reflected.contains_w(&sampler.draw_grid_words()?) {
            hits += 1;
        }
    }
    let n = c.dim() as f64;
    // The true ratio is positive (0 is interior to C ∩ -C); a zero count is
    // floored so callers can divide by the estimate.
    let p = (hits as f64).max(0.5) / samples as f64;
    let gamma = p.powf(1.0 / n);
    let se_p = (p * (1.0 - p) / samples as f64).sqrt();
    let se = gamma * se_p / (n * p);
    Ok((gamma, se))
}

/// Empirical barycenter: exact average of ceil(c n^2 / eps^2) uniform samples.
/// The average of interior points of a convex body stays interior.
pub fn barycenter_approx(k: &CenteredPolytope, eps: f64, cfg: &SolverConfig) -> Result<QVec> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Input(format!(
            "barycenter tolerance must lie in (0,1), got {eps}"
        )));
    }
    let n = k.dim();
    let count = (cfg.barycenter_constant * (n * n) as f64 / (eps * eps)).ceil() as usize;
    let count = count.max(1);
    let mut sampler = UniformSampler::new(
        k,
        SamplerConfig::from_solver(cfg, sampling::streams::BARYCENTER),
    )?;
    let mut sum = rational::zeros(n);
    for _ in 0..count {
        let x = sampler.draw()?;
        sum = rational::add(&sum, &x);
    }
    let inv = Rat::one() / Rat::from_integer(count.into());
    let bary = rational::scale(&sum, &inv);
    if !k.contains(&bary) {
        return Err(Error::Internal(
            "sample average escaped the body, sampler is broken".into(),
        ));
    }
    Ok(bary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec_int, rat, rat_int};

    fn cube2() -> CenteredPolytope {
        CenteredPolytope::axis_box(&qvec_int(&[-1, -1]), &qvec_int(&[1, 1])).unwrap()
    }

    fn interval(lo: i64, hi: i64) -> CenteredPolytope {
        let a = QMat::from_rows(vec![qvec_int(&[1]), qvec_int(&[-1])]).unwrap();
        CenteredPolytope::from_rows(a, vec![rat_int(hi), rat_int(-lo)]).unwrap()
    }

    #[test]
    fn cube_gauge_is_max_abs() {
        let c = cube2();
        assert!((c.gauge(&[0.5, -0.25]) - 0.5).abs() < 1e-15);
        assert_eq!(c.gauge_exact(&vec![rat(1, 2), rat(-1, 4)]), rat(1, 2));
        assert_eq!(c.gauge(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn asymmetric_interval_gauge() {
        let c = interval(-1, 2);
        assert!((c.gauge(&[-1.0]) - 1.0).abs() < 1e-15);
        assert!((c.gauge(&[1.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn starred_gauge_sides_and_ties() {
        let c = interval(-1, 2);
        let g = c.gauge_star(&[-1.0]);
        assert!((g.value - 0.5).abs() < 1e-15);
        assert_eq!(g.sign, Sign::Minus);
        let g = c.gauge_star(&[2.0]);
        assert!((g.value - 1.0).abs() < 1e-15);
        assert_eq!(g.sign, Sign::Plus);

        let sym = cube2();
        let g = sym.gauge_star(&[0.3, 0.0]);
        assert!((g.value - 0.3).abs() < 1e-15);
        assert_eq!(g.sign, Sign::Plus);

        let (v, s) = c.gauge_star_exact(&vec![rat_int(-1)]);
        assert_eq!(v, rat(1, 2));
        assert_eq!(s, Sign::Minus);
    }

    #[test]
    fn gauge_matches_membership_exactly() {
        let c = interval(-1, 2);
        for p in [rat_int(-1), rat(3, 2), rat_int(2), rat(-5, 4), rat(9, 4)] {
            let inside = c.contains(&vec![p.clone()]);
            let unit = c.gauge_exact(&vec![p.clone()]) <= rat_int(1);
            assert_eq!(inside, unit, "at {}", format_rat(&p));
        }
    }

    #[test]
    fn recenter_unit_square() {
        let k = CenteredPolytope::axis_box(&qvec_int(&[0, 0]), &qvec_int(&[1, 1])).unwrap();
        let c = k.recenter(&vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert!(c.is_zero_centered());
        for off in c.offsets() {
            assert_eq!(*off, rat(1, 2));
        }
        assert_eq!(c.gauge_exact(&rational::zeros(2)), rat_int(0));
        assert!(k.recenter(&vec![rat_int(0), rat(1, 2)]).is_err());
    }

    #[test]
    fn recenter_shifted_interval() {
        let k = CenteredPolytope::axis_box(&[rat_int(0)], &[rat_int(3)]).unwrap();
        let c = k.recenter(&vec![rat_int(1)]).unwrap();
        assert!((c.gauge(&[-1.0]) - 1.0).abs() < 1e-15);
        assert!((c.gauge(&[2.0]) - 1.0).abs() < 1e-15);
        assert!((c.gauge(&[1.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn negation_intersection_is_symmetric() {
        let c = interval(-1, 2).intersect_with_negation().unwrap();
        assert!((c.gauge(&[1.0]) - 1.0).abs() < 1e-15);
        assert!((c.gauge(&[-1.0]) - 1.0).abs() < 1e-15);
        let tall = CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1]), &qvec_int(&[1, 4]))
            .unwrap()
            .intersect_with_negation()
            .unwrap();
        for x in [[0.7, 0.9], [-0.7, 0.9], [0.2, -0.95]] {
            let sym_diff = (tall.gauge(&x) - tall.gauge(&[-x[0], -x[1]])).abs();
            assert!(sym_diff < 1e-12);
        }
        assert!((tall.gauge(&[0.0, 1.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn radii_sandwich_the_gauge() {
        let c =
            CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1]), &qvec_int(&[2, 2])).unwrap();
        let r = c.inner_radius().clone();
        let big_r = c.outer_radius().clone();
        assert!(r.is_positive());
        assert!(big_r > r);
        for x in [vec![rat(3, 2), rat(-1, 2)], vec![rat(-3, 4), rat(7, 8)]] {
            let g = c.gauge_exact(&x);
            let nsq = rational::norm2_sq(&x);
            let gr = &g * &big_r;
            let gs = &g * &r;
            assert!(&gr * &gr >= nsq, "outer radius bound violated");
            assert!(&gs * &gs <= nsq, "inner radius bound violated");
        }
    }

    #[test]
    fn scaling_is_homogeneous() {
        let c = interval(-1, 2);
        let c3 = c.scale(&rat_int(3)).unwrap();
        assert_eq!(c3.gauge_exact(&vec![rat_int(3)]), rat(1, 2));
        assert_eq!(
            c.gauge_exact(&vec![rat(7, 5)]) * rat(1, 3),
            c3.gauge_exact(&vec![rat(7, 5)])
        );
    }

    #[test]
    fn chebyshev_center_of_boxes() {
        let k = CenteredPolytope::axis_box(&qvec_int(&[0, 0]), &qvec_int(&[1, 1])).unwrap();
        let (c, r) = k.chebyshev_center().unwrap();
        assert_eq!(c, vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(r, rat(1, 2));

        let seg = interval(-1, 2);
        let (c, r) = seg.chebyshev_center().unwrap();
        assert_eq!(c, vec![rat(1, 2)]);
        assert_eq!(r, rat(3, 2));
    }

    #[test]
    fn support_functions_over_a_box() {
        let k = CenteredPolytope::axis_box(&qvec_int(&[0, 0]), &qvec_int(&[1, 1])).unwrap();
        let (x, v) = k.support_max(&qvec_int(&[1, 1])).unwrap();
        assert_eq!(v, rat_int(2));
        assert_eq!(x, qvec_int(&[1, 1]));
        let (x, v) = k.support_min(&qvec_int(&[1, -1])).unwrap();
        assert_eq!(v, rat_int(-1));
        assert_eq!(x, qvec_int(&[0, 1]));
    }

    #[test]
    fn unbounded_and_empty_bodies_are_rejected() {
        let half = QMat::from_rows(vec![qvec_int(&[1, 0])]).unwrap();
        assert!(CenteredPolytope::from_rows(half, vec![rat_int(1)]).is_err());
        let a = QMat::from_rows(vec![qvec_int(&[1]), qvec_int(&[-1])]).unwrap();
        // Origin on the boundary: not strictly interior.
        assert!(CenteredPolytope::from_rows(a, vec![rat_int(0), rat_int(1)]).is_err());
    }

    #[test]
    fn gamma_of_symmetric_cube_is_one() {
        let c =
            CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1, -1]), &qvec_int(&[1, 1, 1]))
                .unwrap();
        let g = estimate_gamma(&c, 4_000, 7).unwrap();
        assert!((g - 1.0).abs() < 1e-12, "got {g}");
    }

    #[test]
    fn gamma_of_tall_box_matches_volume_ratio() {
        // C = [-1,1] x [-1,4]: vol(C ∩ -C) = 4, vol(C) = 10.
        let c =
            CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1]), &qvec_int(&[1, 4])).unwrap();
        let (g, se) = estimate_gamma_with_se(&c, 20_000, 11).unwrap();
        let expected = (4.0_f64 / 10.0).sqrt();
        assert!((g - expected).abs() < 3.0 * se + 0.02, "got {g}, want {expected}");
    }

    #[test]
    fn barycenter_of_unit_square() {
        let k = CenteredPolytope::axis_box(&qvec_int(&[0, 0]), &qvec_int(&[1, 1])).unwrap();
        let cfg = SolverConfig::with_seed(5);
        let b = barycenter_approx(&k, 1.0 / 3.0, &cfg).unwrap();
        let centered = k.recenter(&b).unwrap();
        let diff = rational::sub(&vec![rat(1, 2), rat(1, 2)], &b);
        let (gv, _) = centered.gauge_star_exact(&diff);
        let (gv_neg, _) = centered.gauge_star_exact(&rational::neg(&diff));
        assert!(gv <= rat(1, 3), "gauge {}", format_rat(&gv));
        assert!(gv_neg <= rat(1, 3), "gauge {}", format_rat(&gv_neg));
    }

    #[test]
    fn barycenter_of_simplex_is_near_centroid() {
        // conv{0, e1, e2} = { x >= 0, x1 + x2 <= 1 }.
        let a = QMat::from_rows(vec![
            qvec_int(&[-1, 0]),
            qvec_int(&[0, -1]),
            qvec_int(&[1, 1]),
        ])
        .unwrap();
        let k = CenteredPolytope::with_interior_point(
            a,
            vec![rat_int(0), rat_int(0), rat_int(1)],
            vec![rat(1, 4), rat(1, 4)],
        )
        .unwrap();
        let cfg = SolverConfig::with_seed(9);
        let b = barycenter_approx(&k, 0.25, &cfg).unwrap();
        let bf = rational::to_f64_vec(&b);
        assert!((bf[0] - 1.0 / 3.0).abs() < 0.08, "got {bf:?}");
        assert!((bf[1] - 1.0 / 3.0).abs() < 0.08, "got {bf:?}");
    }
}
