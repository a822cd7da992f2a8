//! Integer feasibility and optimization over H-polytopes.
//!
//! Feasibility reduces to one closest-vector call: recenter the body at an
//! approximate barycenter b, ask for a near-closest lattice point y, and
//! accept on the gauge test |y - b|_{K-b} <= 1 + 3 eps / 4. Accepted points
//! land in K + eps (K - K) deterministically; only an EMPTY verdict relies
//! on the solver's success probability. Optimization binary-searches the
//! objective with feasibility calls on slab restrictions of the body, and
//! the bracket contracts by at least 3/4 per round.

use num_traits::{One, Signed, Zero};

use crate::config::SolverConfig;
use crate::cvp::{self, CvpReport};
use crate::error::{Error, Result};
use crate::geometry::{barycenter_approx, CenteredPolytope};
use crate::lattice::LatticeBasis;
use crate::lp::{self, LpOutcome};
use crate::rational::{self, rat_from_f64, rat_to_f64, QMat, QVec, Rat};

/// Denominator bound for the snapped barycenter. The sample average has a
/// denominator that grows with the sample count and grid depth; rounding it
/// to this dyadic grid keeps every downstream exact computation small while
/// moving the center by at most 2^-17 per coordinate.
const CENTER_SNAP_BITS: u32 = 16;

/// Verdict of a feasibility run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpStatus {
    /// The returned point lies in K itself.
    FoundInK,
    /// The returned point lies in the eps-blowup of K but not in K.
    FoundInBlowup,
    /// No lattice point was accepted; correct up to solver failure.
    Empty,
}

/// Feasibility answer. The gauge is measured about the approximate
/// barycenter used for the run and is reported even for EMPTY, where it
/// belongs to the rejected closest-vector candidate.
#[derive(Debug, Clone)]
pub struct IpResult {
    pub status: IpStatus,
    pub point: Option<QVec>,
    pub blowup_gauge: f64,
    pub center: QVec,
    pub cvp: CvpReport,
    pub seed: u64,
}

/// Verdict of an optimization run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptStatus {
    Solved,
    Empty,
}

/// Optimization answer with the final bracket as its certificate: the true
/// integer optimum lies below bracket.1, and the returned value reaches it
/// within delta.
#[derive(Debug, Clone)]
pub struct OptResult {
    pub status: OptStatus,
    pub point: Option<QVec>,
    pub value: Option<Rat>,
    pub value_f64: Option<f64>,
    pub bracket: Option<(Rat, Rat)>,
    pub iterations: usize,
    pub ip_calls: usize,
    pub repetitions: usize,
    pub seed: u64,
}

/// Integer feasibility: returns a lattice point in the eps-blowup of K or
/// EMPTY. A returned point always passes the exact gauge test, so soundness
/// is deterministic; EMPTY is wrong only when the inner solvers miss an
/// existing point.
pub fn approx_ip(
    k: &CenteredPolytope,
    basis: &LatticeBasis,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<IpResult> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Input(
            "feasibility tolerance eps must lie in (0, 1/2]".into(),
        ));
    }
    if basis.dim() != k.dim() {
        return Err(Error::Dimension {
            expected: k.dim(),
            got: basis.dim(),
            what: "lattice basis",
        });
    }

    let center = snapped_barycenter(k, cfg)?;
    let recentered = k.recenter(&center)?;
    let report = cvp::approx_cvp(&recentered, basis, &center, 0.4 * eps, cfg)?;

    let gauge = report.witness.distance.clone();
    let eps_rat = rat_from_f64(eps)?;
    let accept = Rat::one() + Rat::new(3.into(), 4.into()) * &eps_rat;
    let status = if gauge <= Rat::one() {
        IpStatus::FoundInK
    } else if gauge <= accept {
        IpStatus::FoundInBlowup
    } else {
        IpStatus::Empty
    };
    let point = match status {
        IpStatus::Empty => None,
        _ => Some(report.witness.point.clone()),
    };
    Ok(IpResult {
        status,
        point,
        blowup_gauge: rat_to_f64(&gauge),
        center,
        cvp: report,
        seed: cfg.seed,
    })
}

/// Approximate barycenter rounded onto a coarse dyadic grid. Falls back to
/// the exact sample average when the rounded point leaves the interior,
/// which only happens for bodies thinner than the snap step.
fn snapped_barycenter(k: &CenteredPolytope, cfg: &SolverConfig) -> Result<QVec> {
    let exact = barycenter_approx(k, 1.0 / 3.0, cfg)?;
    let denom = Rat::from_integer((1u64 << CENTER_SNAP_BITS).into());
    let snapped: QVec = exact
        .iter()
        .map(|x| {
            let scaled = rat_to_f64(&(x * &denom)).round();
            rat_from_f64(scaled).map(|s| s / &denom)
        })
        .collect::<Result<_>>()?;
    if k.recenter(&snapped).is_ok() {
        Ok(snapped)
    } else {
        Ok(exact)
    }
}

/// Exact minimizer and maximizer of <v, x> over the body. The contract
/// allows delta/12 slack on each side; linear programming over the
/// H-representation achieves zero slack, which satisfies it.
pub fn objective_bounds(
    k: &CenteredPolytope,
    v: &QVec,
    delta: f64,
) -> Result<(QVec, QVec)> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Input("objective slack delta must be positive".into()));
    }
    if v.len() != k.dim() {
        return Err(Error::Dimension {
            expected: k.dim(),
            got: v.len(),
            what: "objective vector",
        });
    }
    let (x_l, _) = k.support_min(v)?;
    let (x_u, _) = k.support_max(v)?;
    Ok((x_l, x_u))
}

/// A slab restriction of the body, or the signal that the slab misses it.
#[derive(Debug, Clone)]
pub enum RestrictOutcome {
    Body(CenteredPolytope),
    EmptySlab,
}

/// Intersects the body with { x : lo <= <v, x> <= hi } and recenters at the
/// Chebyshev center of the intersection. Empty or flat intersections come
/// back as EmptySlab so the caller can skip the solver call; the constructor
/// recertifies the sandwich radii of the restricted body from scratch.
pub fn restrict(
    k: &CenteredPolytope,
    v: &QVec,
    lo: &Rat,
    hi: &Rat,
) -> Result<RestrictOutcome> {
    let n = k.dim();
    if v.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: v.len(),
            what: "objective vector",
        });
    }
    if rational::is_zero_vec(v) {
        return Err(Error::Input("slab normal must be nonzero".into()));
    }

    let mut rows = k.normals().row_vecs();
    let mut offs = k.offsets().clone();
    rows.push(v.clone());
    offs.push(hi.clone());
    rows.push(rational::neg(v));
    offs.push(-lo);
    let a = QMat::from_rows(rows)?;

    // Chebyshev LP over (x, t): a_i x + |a_i|_2 t <= b_i, maximize t. The
    // body does not exist yet, so the LP runs on the raw row system.
    let mut ball_rows = Vec::with_capacity(a.rows() + 1);
    for i in 0..a.rows() {
        let mut row = a.row(i).to_vec();
        row.push(rational::sqrt_upper(&rational::norm2_sq(a.row(i)))?);
        ball_rows.push(row);
    }
    let mut nonneg = rational::zeros(n + 1);
    nonneg[n] = -Rat::one();
    ball_rows.push(nonneg);
    let mut ball_offs = offs.clone();
    ball_offs.push(Rat::zero());
    let mut obj = rational::zeros(n + 1);
    obj[n] = Rat::one();

    let center = match lp::maximize(&obj, &QMat::from_rows(ball_rows)?, &ball_offs)? {
        LpOutcome::Optimal { x, value } if value.is_positive() => x[..n].to_vec(),
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => {
            return Ok(RestrictOutcome::EmptySlab)
        }
        LpOutcome::Unbounded => {
            return Err(Error::Internal(
                "chebyshev LP unbounded over a bounded restriction".into(),
            ))
        }
    };
    Ok(RestrictOutcome::Body(CenteredPolytope::with_interior_point(
        a, offs, center,
    )?))
}

/// Per-facet minima of the body, cached so repeated blowup tests pay the
/// linear programs once.
#[derive(Debug, Clone)]
pub struct FacetMinima {
    minima: QVec,
}

impl FacetMinima {
    pub fn new(k: &CenteredPolytope) -> Result<Self> {
        let mut minima = Vec::with_capacity(k.num_facets());
        for i in 0..k.num_facets() {
            let (_, value) = k.support_min(&k.normals().row(i).to_vec())?;
            minima.push(value);
        }
        Ok(FacetMinima { minima })
    }

    /// Exact membership in K + eps (K - K): each valid inequality relaxes by
    /// eps times its variation over K.
    pub fn blowup_contains(&self, k: &CenteredPolytope, eps: &Rat, y: &QVec) -> bool {
        (0..k.num_facets()).all(|i| {
            let lhs = rational::dot(k.normals().row(i), y);
            let relaxed = &k.offsets()[i] + eps * (&k.offsets()[i] - &self.minima[i]);
            lhs <= relaxed
        })
    }
}

/// Membership test for the eps-blowup K + eps (K - K); eps = 0 is exact
/// membership in K.
pub fn blowup_membership(k: &CenteredPolytope, eps: &Rat, y: &QVec) -> Result<bool> {
    if eps.is_negative() {
        return Err(Error::Input("blowup factor must be nonnegative".into()));
    }
    if y.len() != k.dim() {
        return Err(Error::Dimension {
            expected: k.dim(),
            got: y.len(),
            what: "membership query point",
        });
    }
    Ok(FacetMinima::new(k)?.blowup_contains(k, eps, y))
}

/// The eps-blowup as an H-polytope of its own, for oracles and generators.
pub fn blowup_body(k: &CenteredPolytope, eps: &Rat) -> Result<CenteredPolytope> {
    if eps.is_negative() {
        return Err(Error::Input("blowup factor must be nonnegative".into()));
    }
    let minima = FacetMinima::new(k)?;
    let relaxed: QVec = (0..k.num_facets())
        .map(|i| &k.offsets()[i] + eps * (&k.offsets()[i] - &minima.minima[i]))
        .collect();
    CenteredPolytope::with_interior_point(k.normals().clone(), relaxed, k.center().clone())
}

/// The scaling (1 + eps) K - eps c of the body about an interior point c,
/// equal to K + eps (K - c). An integer-free instance of this body with c at
/// the barycenter certifies that feasibility must answer EMPTY.
pub fn barycentric_blowup(
    k: &CenteredPolytope,
    eps: &Rat,
    c: &QVec,
) -> Result<CenteredPolytope> {
    if eps.is_negative() {
        return Err(Error::Input("blowup factor must be nonnegative".into()));
    }
    if c.len() != k.dim() {
        return Err(Error::Dimension {
            expected: k.dim(),
            got: c.len(),
            what: "blowup center",
        });
    }
    let ac = k.normals().matvec(c);
    let relaxed: QVec = (0..k.num_facets())
        .map(|i| &k.offsets()[i] + eps * (&k.offsets()[i] - &ac[i]))
        .collect();
    CenteredPolytope::with_interior_point(k.normals().clone(), relaxed, c.clone())
}

/// The shrink (1/(1+eps)) K + (eps/(1+eps)) c of the body toward an interior
/// point c. A lattice point in here with c at the barycenter is a planted
/// witness that feasibility succeeds with high probability, so generators
/// certify their feasible instances against this region.
pub fn deep_region(k: &CenteredPolytope, eps: &Rat, c: &QVec) -> Result<CenteredPolytope> {
    if eps.is_negative() {
        return Err(Error::Input("shrink factor must be nonnegative".into()));
    }
    if c.len() != k.dim() {
        return Err(Error::Dimension {
            expected: k.dim(),
            got: c.len(),
            what: "shrink center",
        });
    }
    let lambda = Rat::one() / (Rat::one() + eps);
    let ac = k.normals().matvec(c);
    let shrunk: QVec = (0..k.num_facets())
        .map(|i| &lambda * &k.offsets()[i] + (Rat::one() - &lambda) * &ac[i])
        .collect();
    CenteredPolytope::with_interior_point(k.normals().clone(), shrunk, c.clone())
}

/// Integer optimization by binary search on the objective value. Returns a
/// lattice point in K + eps (K - K) whose value is within delta of the best
/// lattice point in K, or EMPTY. The bracket (l, u) is exact throughout and
/// must contract by 3/4 per round, which the accepted-point gauge test
/// guarantees; a violation means a solver invariant broke.
pub fn approx_opt(
    k: &CenteredPolytope,
    basis: &LatticeBasis,
    v: &QVec,
    eps: f64,
    delta: f64,
    cfg: &SolverConfig,
) -> Result<OptResult> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Input(
            "optimization tolerance eps must lie in (0, 1/2]".into(),
        ));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Input("objective slack delta must be positive".into()));
    }
    if v.len() != k.dim() || rational::is_zero_vec(v) {
        return Err(Error::Input(
            "objective vector must be nonzero and match the dimension".into(),
        ));
    }
    if basis.dim() != k.dim() {
        return Err(Error::Dimension {
            expected: k.dim(),
            got: basis.dim(),
            what: "lattice basis",
        });
    }

    // Nothing is lost by shrinking delta, and delta <= |v|_2 r keeps the
    // iteration bound honest.
    let norm_v = rat_to_f64(&rational::norm2_sq(v)).sqrt();
    let delta = delta.min(norm_v * rat_to_f64(k.inner_radius()));
    let delta_rat = rat_from_f64(delta)?;
    let slack = &delta_rat / Rat::from_integer(12.into());
    let radius = rat_to_f64(k.outer_radius());
    let iter_cap = ((4.0 * radius * norm_v / delta).ln() / (4.0_f64 / 3.0).ln())
        .ceil()
        .max(1.0) as usize;
    let reps = repetition_count(k.dim(), radius * norm_v / delta, cfg.rep_constant);
    let eps_rat = rat_from_f64(eps)?;

    // Every inner feasibility call gets its own seed, otherwise repetitions
    // on the same slab would replay the same randomness. EMPTY is the only
    // probabilistic answer, so only it gets repeated; the first accepted
    // point wins.
    let mut calls = 0usize;
    let seeded = |calls: &mut usize| -> SolverConfig {
        let mut run_cfg = cfg.clone();
        run_cfg.seed = cfg.seed.wrapping_add(*calls as u64);
        *calls += 1;
        run_cfg
    };
    let slab = |lo: &Rat, hi: &Rat, calls: &mut usize| -> Result<Option<QVec>> {
        let body = match restrict(k, v, lo, hi)? {
            RestrictOutcome::EmptySlab => return Ok(None),
            RestrictOutcome::Body(body) => body,
        };
        for _ in 0..reps {
            let result = approx_ip(&body, basis, eps, &seeded(calls))?;
            if let Some(point) = result.point {
                return Ok(Some(point));
            }
        }
        Ok(None)
    };

    let first = approx_ip(k, basis, eps, &seeded(&mut calls))?;
    let mut z = match first.point {
        Some(point) => point,
        None => {
            return Ok(OptResult {
                status: OptStatus::Empty,
                point: None,
                value: None,
                value_f64: None,
                bracket: None,
                iterations: 0,
                ip_calls: calls,
                repetitions: reps,
                seed: cfg.seed,
            })
        }
    };

    let (_, x_u) = objective_bounds(k, v, delta)?;
    let mut l = rational::dot(v, &z);
    let mut u = rational::dot(v, &x_u) + &slack;
    if u < l {
        // the accepted point may exceed the supremum over K by the blowup
        // margin; the bracket only needs to start at its own value
        u = l.clone();
    }

    let mut iterations = 0usize;
    while &u - &l > delta_rat {
        iterations += 1;
        if iterations > iter_cap {
            return Err(Error::IterationCap(format!(
                "optimization bracket failed to close in {iter_cap} rounds; \
                 gap {} against delta {delta}",
                rat_to_f64(&(&u - &l)),
            )));
        }
        let gap = &u - &l;
        let m = (&l + &u) / Rat::from_integer(2.into());

        let mut y = slab(&m, &u, &mut calls)?;
        if y.is_none() {
            u = m.clone();
            y = slab(&l, &m, &mut calls)?;
            if y.is_none() {
                // both slabs look lattice-free, so the incumbent is optimal
                // for the bracket and the loop closes here
                u = l.clone();
            }
        }
        if let Some(point) = y {
            let value = rational::dot(v, &point);
            if l < value {
                z = point;
                l = value;
            }
        }

        let shrunk = (&u - &l) * Rat::from_integer(4.into());
        if shrunk > &gap * Rat::from_integer(3.into()) {
            return Err(Error::Internal(
                "bracket contracted by less than three quarters".into(),
            ));
        }
    }

    if !FacetMinima::new(k)?.blowup_contains(k, &eps_rat, &z) {
        return Err(Error::Internal(
            "optimization winner escaped the blowup body".into(),
        ));
    }
    let value = rational::dot(v, &z);
    Ok(OptResult {
        status: OptStatus::Solved,
        value_f64: Some(rat_to_f64(&value)),
        point: Some(z),
        value: Some(value),
        bracket: Some((l, u)),
        iterations,
        ip_calls: calls,
        repetitions: reps,
        seed: cfg.seed,
    })
}

/// Number of times an EMPTY verdict is retried. The failure probability of
/// one feasibility call drops exponentially in n k, so a loglog number of
/// repetitions suffices for a union bound over all rounds.
fn repetition_count(n: usize, ratio: f64, constant: f64) -> usize {
    let loglog = if ratio > std::f64::consts::E {
        ratio.ln().ln().max(0.0)
    } else {
        0.0
    };
    let k = (constant * (1.0 + loglog / n as f64)).ceil();
    (k.max(1.0)) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::rational::{qvec_int, rat, rat_int};

    fn unit_box() -> CenteredPolytope {
        CenteredPolytope::axis_box(&qvec_int(&[0, 0]), &qvec_int(&[1, 1])).unwrap()
    }

    fn quick_cfg(seed: u64) -> SolverConfig {
        SolverConfig {
            seed,
            gamma_override: Some(1.0),
            budget_multiplier: 0.05,
            pair_cap: 4096,
            rep_constant: 1.0,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn objective_bounds_are_exact_box_vertices() {
        let k = unit_box();
        let (x_l, x_u) = objective_bounds(&k, &qvec_int(&[1, 1]), 0.1).unwrap();
        assert_eq!(x_l, qvec_int(&[0, 0]));
        assert_eq!(x_u, qvec_int(&[1, 1]));
        let (x_l, x_u) = objective_bounds(&k, &qvec_int(&[1, -1]), 0.1).unwrap();
        assert_eq!(x_l, qvec_int(&[0, 1]));
        assert_eq!(x_u, qvec_int(&[1, 0]));
    }

    #[test]
    fn restriction_keeps_the_slab_and_drops_the_rest() {
        let k = unit_box();
        let v = qvec_int(&[1, 0]);
        match restrict(&k, &v, &rat(1, 4), &rat(3, 4)).unwrap() {
            RestrictOutcome::Body(body) => {
                assert!(body.contains(&vec![rat(1, 4), rat(1, 2)]));
                assert!(body.contains(&vec![rat(3, 4), rat_int(1)]));
                assert!(!body.contains(&vec![rat(1, 5), rat(1, 2)]));
                assert!(body.inner_radius().is_positive());
            }
            RestrictOutcome::EmptySlab => panic!("slab through the box came back empty"),
        }
        assert!(matches!(
            restrict(&k, &v, &rat_int(2), &rat_int(3)).unwrap(),
            RestrictOutcome::EmptySlab
        ));
        assert!(matches!(
            restrict(&k, &v, &rat(1, 2), &rat(1, 2)).unwrap(),
            RestrictOutcome::EmptySlab
        ));
    }

    #[test]
    fn blowup_relaxes_each_facet_by_its_variation() {
        let k = unit_box();
        let half = rat(1, 2);
        assert!(blowup_membership(&k, &half, &vec![rat(3, 2), rat(1, 2)]).unwrap());
        assert!(!blowup_membership(&k, &half, &vec![rat(8, 5), rat(1, 2)]).unwrap());
        assert!(blowup_membership(&k, &Rat::zero(), &qvec_int(&[1, 1])).unwrap());
        assert!(!blowup_membership(&k, &Rat::zero(), &vec![rat(11, 10), rat(1, 2)]).unwrap());

        let body = blowup_body(&k, &half).unwrap();
        assert!(body.contains(&vec![rat(3, 2), rat(1, 2)]));
        assert!(!body.contains(&vec![rat(8, 5), rat(1, 2)]));
    }

    #[test]
    fn feasibility_finds_the_deep_point() {
        let k =
            CenteredPolytope::axis_box_at_origin(&vec![rat(-3, 5), rat(-3, 5)], &vec![rat(3, 5), rat(3, 5)])
                .unwrap();
        let b = LatticeBasis::identity(2);
        let result = approx_ip(&k, &b, 0.5, &quick_cfg(3)).unwrap();
        assert_eq!(result.status, IpStatus::FoundInK);
        assert_eq!(result.point, Some(qvec_int(&[0, 0])));
        assert!(result.blowup_gauge <= 1.0);
        let brute = oracle::ip_brute(&k, &b, 5).unwrap().unwrap();
        assert_eq!(brute.point, qvec_int(&[0, 0]));
    }

    #[test]
    fn feasibility_reports_empty_when_the_blowup_is_integer_free() {
        let a = QMat::from_rows(vec![
            qvec_int(&[1, 0]),
            qvec_int(&[-1, 0]),
            qvec_int(&[0, 1]),
            qvec_int(&[0, -1]),
        ])
        .unwrap();
        let offs = vec![rat(4, 5), rat(-1, 5), rat(4, 5), rat(-1, 5)];
        let k =
            CenteredPolytope::with_interior_point(a, offs, vec![rat(1, 2), rat(1, 2)]).unwrap();
        let b = LatticeBasis::identity(2);

        // scaling by 3/2 about the exact barycenter leaves the box integer
        // free, so EMPTY is forced
        let blowup =
            barycentric_blowup(&k, &rat(1, 2), &vec![rat(1, 2), rat(1, 2)]).unwrap();
        let (lo, hi) = blowup.ambient_box();
        assert_eq!(lo, vec![rat(1, 20), rat(1, 20)]);
        assert_eq!(hi, vec![rat(19, 20), rat(19, 20)]);
        assert!(oracle::ip_brute(&blowup, &b, 5).unwrap().is_none());

        let result = approx_ip(&k, &b, 0.5, &quick_cfg(7)).unwrap();
        assert_eq!(result.status, IpStatus::Empty);
        assert!(result.point.is_none());
        assert!(result.blowup_gauge > 1.375);
    }

    #[test]
    fn optimization_meets_the_oracle_within_delta() {
        let k = CenteredPolytope::with_interior_point(
            QMat::from_rows(vec![
                qvec_int(&[1, 0]),
                qvec_int(&[-1, 0]),
                qvec_int(&[0, 1]),
                qvec_int(&[0, -1]),
            ])
            .unwrap(),
            vec![rat(13, 5), rat(3, 5), rat(3, 5), rat(3, 5)],
            vec![rat_int(1), rat_int(0)],
        )
        .unwrap();
        let b = LatticeBasis::identity(2);
        let v = qvec_int(&[1, 0]);
        let result = approx_opt(&k, &b, &v, 0.5, 0.5, &quick_cfg(4)).unwrap();
        assert_eq!(result.status, OptStatus::Solved);

        let oracle_best = oracle::ip_opt_brute(&k, &b, &v, 5).unwrap().unwrap();
        assert_eq!(oracle_best.value, rat_int(2));
        let value = result.value.unwrap();
        assert!(value >= &oracle_best.value - rat(1, 2));
        let (l, u) = result.bracket.unwrap();
        assert!(&u - &l <= rat(1, 2));
        assert_eq!(value, l);
        let point = result.point.unwrap();
        assert!(blowup_membership(&k, &rat(1, 2), &point).unwrap());
        assert!(result.iterations <= 12);
    }

    #[test]
    fn optimization_reports_empty_on_an_integer_free_body() {
        let a = QMat::from_rows(vec![
            qvec_int(&[1, 0]),
            qvec_int(&[-1, 0]),
            qvec_int(&[0, 1]),
            qvec_int(&[0, -1]),
        ])
        .unwrap();
        let offs = vec![rat(4, 5), rat(-1, 5), rat(4, 5), rat(-1, 5)];
        let k =
            CenteredPolytope::with_interior_point(a, offs, vec![rat(1, 2), rat(1, 2)]).unwrap();
        let result = approx_opt(
            &k,
            &LatticeBasis::identity(2),
            &qvec_int(&[1, 1]),
            0.5,
            0.25,
            &quick_cfg(6),
        )
        .unwrap();
        assert_eq!(result.status, OptStatus::Empty);
        assert!(result.point.is_none());
    }

    #[test]
    fn repetition_count_follows_the_loglog_rule() {
        assert_eq!(repetition_count(2, 1.0, 1.0), 1);
        assert_eq!(repetition_count(2, 100.0, 1.0), 2);
        let k = repetition_count(2, 100.0, 3.0);
        assert!(k >= 4, "constant should scale the count, got {k}");
        assert_eq!(repetition_count(4, 0.5, 0.0), 1);
    }
}
