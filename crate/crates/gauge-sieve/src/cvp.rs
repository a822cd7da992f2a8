//! Closest vector solver via a lifted subspace avoiding problem.
//!
//! The target is folded into an extra lattice dimension: the lifted body
//! assigns a point (y, z) the gauge max{|y|_C, beta z, -2 beta z}, the lifted
//! lattice is generated by (L, 0) and (-x, 1), and the avoided subspace is
//! the z = 0 slice. Lattice points w then correspond to lift vectors
//! (w - x, 1), whose lifted gauge equals |w - x|_C whenever that distance is
//! at least beta, while every vector with z outside {0, 1} costs at least
//! 2 beta. For a guess beta with beta <= d <= 3/2 beta this forces any
//! sufficiently short SAP answer back onto the z = 1 layer.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::geometry::CenteredPolytope;
use crate::lattice::{LatticeBasis, Subspace};
use crate::oracle;
use crate::rational::{self, rat_to_f64, sqrt_upper, QMat, QVec, Rat};
use crate::sampling::streams;
use crate::sieve;

/// Largest tolerance the lift supports: the z = 1 forcing argument needs
/// (1 + eps) d < 2 beta, which fails at eps = 1/3 exactly.
const EPS_CEILING: f64 = 1.0 / 3.0 - 1.0 / (1 << 20) as f64;

/// A closest-vector instance rewritten as subspace avoidance one dimension up.
#[derive(Debug, Clone)]
pub struct LiftedInstance {
    pub body: CenteredPolytope,
    pub basis: LatticeBasis,
    pub subspace: Subspace,
    pub beta: Rat,
    pub target: QVec,
}

impl LiftedInstance {
    /// The embedding m(y) = (y - x, 1) of original lattice points.
    pub fn lift_point(&self, y: &QVec) -> QVec {
        let mut v = rational::sub(y, &self.target);
        v.push(Rat::one());
        v
    }

    /// Maps a lifted point back when it sits on the z = 1 layer.
    pub fn unlift(&self, point: &QVec) -> Option<QVec> {
        let (z, head) = point.split_last()?;
        if !z.is_one() {
            return None;
        }
        Some(rational::add(head, &self.target))
    }
}

/// Builds the lifted instance for one radius guess. The extra coordinate of
/// the body is the slab beta z <= 1, -2 beta z <= 1, so the lifted gauge is
/// the closed formula max{|y|_C, beta z, -2 beta z} evaluated facet by facet.
pub fn lift(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    x: &QVec,
    beta: &Rat,
) -> Result<LiftedInstance> {
    let n = c.dim();
    if !c.is_zero_centered() {
        return Err(Error::Geometry(
            "the lift requires a zero-centered body".into(),
        ));
    }
    if basis.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: basis.dim(),
            what: "lattice basis",
        });
    }
    if x.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len(),
            what: "target point",
        });
    }
    if !beta.is_positive() {
        return Err(Error::Input("lift radius beta must be positive".into()));
    }

    let mut rows: Vec<QVec> = Vec::with_capacity(c.num_facets() + 2);
    let mut offsets: QVec = Vec::with_capacity(c.num_facets() + 2);
    for i in 0..c.num_facets() {
        let mut row = c.normals().row(i).to_vec();
        row.push(Rat::zero());
        rows.push(row);
        offsets.push(c.centered_offsets()[i].clone());
    }
    let mut up = rational::zeros(n + 1);
    up[n] = beta.clone();
    rows.push(up);
    offsets.push(Rat::one());
    let mut down = rational::zeros(n + 1);
    down[n] = -(beta + beta);
    rows.push(down);
    offsets.push(Rat::one());
    let body = CenteredPolytope::from_rows(QMat::from_rows(rows)?, offsets)?;

    let mut cols: Vec<QVec> = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut col = basis.column(j);
        col.push(Rat::zero());
        cols.push(col);
    }
    let mut shifted = rational::neg(x);
    shifted.push(Rat::one());
    cols.push(shifted);
    let lifted_basis = LatticeBasis::from_columns(cols)?;

    let mut span = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = rational::zeros(n + 1);
        e[j] = Rat::one();
        span.push(e);
    }
    let subspace = Subspace::new(span, n + 1)?;

    Ok(LiftedInstance {
        body,
        basis: lifted_basis,
        subspace,
        beta: beta.clone(),
        target: x.clone(),
    })
}

/// The lift divides volumes coordinate by coordinate, so its symmetry
/// parameter is exactly ((2/3) gamma^n)^(1/(n+1)).
fn lifted_gamma(gamma: f64, n: usize) -> f64 {
    ((2.0 / 3.0) * gamma.powi(n as i32)).powf(1.0 / (n as f64 + 1.0))
}

/// Per-guess counters inside a CVP run.
#[derive(Debug, Clone)]
pub struct CvpGuessStats {
    pub beta: f64,
    pub lifted_gauge: Option<f64>,
    pub z: Option<i64>,
    pub distance: Option<f64>,
    pub inner_guesses: usize,
    pub budget_exhausted: bool,
}

/// The winning lattice point with its exact distance to the target.
#[derive(Debug, Clone)]
pub struct CvpWitness {
    pub point: QVec,
    pub distance: Rat,
    pub distance_f64: f64,
}

/// Result of a CVP run, with the guess grid laid out for auditing.
#[derive(Debug, Clone)]
pub struct CvpReport {
    pub witness: CvpWitness,
    pub nu: f64,
    pub eps_requested: f64,
    pub eps_used: f64,
    pub eps_clamped: bool,
    pub exact_t: Option<f64>,
    pub guesses: Vec<CvpGuessStats>,
    pub gamma: f64,
    pub gamma_lift: f64,
    pub seed: u64,
}

/// Closest vector, approximate mode: for eps in (0, 1/3) returns a lattice
/// point within (1 + eps) of the true gauge distance. Requests in
/// [1/3, 1/2] are clamped to just under 1/3 and flagged in the report.
pub fn approx_cvp(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    x: &QVec,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<CvpReport> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Input(
            "cvp tolerance eps must lie in (0, 1/2]; values from 1/3 up are clamped".into(),
        ));
    }
    let clamped = eps >= 1.0 / 3.0;
    let eps_used = if clamped { EPS_CEILING } else { eps };
    cvp_driver(c, basis, x, eps, eps_used, clamped, None, cfg)
}

/// Closest vector, exact mode: valid when the distance is within a factor t
/// of the shortest vector, in which case the lifted avoiding minimum is the
/// distance itself and the sieve pins it exactly.
pub fn exact_cvp(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    x: &QVec,
    t: f64,
    cfg: &SolverConfig,
) -> Result<CvpReport> {
    if !(t >= 2.0 && t.is_finite()) {
        return Err(Error::Input("exact mode needs a ratio bound t >= 2".into()));
    }
    cvp_driver(c, basis, x, 1.0 / t, 1.0 / t, false, Some(t), cfg)
}

fn cvp_driver(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    x: &QVec,
    eps_requested: f64,
    eps_used: f64,
    eps_clamped: bool,
    exact_t: Option<f64>,
    cfg: &SolverConfig,
) -> Result<CvpReport> {
    let n = c.dim();
    if !c.is_zero_centered() {
        return Err(Error::Geometry(
            "cvp requires a zero-centered body".into(),
        ));
    }
    if basis.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: basis.dim(),
            what: "lattice basis",
        });
    }
    if x.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.len(),
            what: "target point",
        });
    }

    let gamma = sieve::resolve_gamma(c, cfg)?;
    let gamma_lift = lifted_gamma(gamma, n);
    let report = |witness: CvpWitness, nu: f64, guesses: Vec<CvpGuessStats>| CvpReport {
        witness,
        nu,
        eps_requested,
        eps_used,
        eps_clamped,
        exact_t,
        guesses,
        gamma,
        gamma_lift,
        seed: cfg.seed,
    };

    // Lattice targets have distance zero; no sieving required.
    if basis.contains(x) {
        let witness = CvpWitness {
            point: x.clone(),
            distance: Rat::zero(),
            distance_f64: 0.0,
        };
        return Ok(report(witness, 0.0, Vec::new()));
    }

    let grid = cvp_grid(c, basis, x, cfg)?;
    let (nu, guess_count) = (grid.nu, grid.guesses);
    // gauge distance of the known near point: a certified upper bound on
    // the z = 1 layer of every lift
    let near_gauge = rat_to_f64(&c.gauge_exact(&rational::sub(&grid.near, x)));
    let mut run_cfg = cfg.clone();
    run_cfg.gamma_override = Some(gamma_lift);

    let mut guesses = Vec::with_capacity(guess_count);
    let mut best: Option<CvpWitness> = None;
    for g in 0..guess_count {
        let beta = nu * 1.5_f64.powi(g as i32);
        // the guess only needs the right magnitude; a coarse dyadic keeps
        // the lifted body's facet data and the sieve's exact work small
        let beta_rat = rational::snap_down_dyadic(beta, 24)?;
        let lifted = lift(c, basis, x, &beta_rat)?;
        let stream_base = streams::SIEVE + ((g as u64 + 1) << 16);
        // every lifted vector outside the slice costs at least beta, and the
        // lift of the known near point bounds the minimum from above, so the
        // inner grid can be pinned to this bracket
        let beta_f64 = rat_to_f64(&beta_rat);
        let hint = Some((beta_f64, near_gauge.max(beta_f64)));
        match sieve::approx_sap_stream(
            &lifted.body,
            &lifted.basis,
            &lifted.subspace,
            eps_used,
            &run_cfg,
            hint,
            stream_base,
        ) {
            Ok(sap) => {
                let z_rat = sap.witness.point.last().cloned().ok_or_else(|| {
                    Error::Internal("lifted witness has no layer coordinate".into())
                })?;
                if !z_rat.is_integer() {
                    return Err(Error::Internal(
                        "lifted witness sits between lattice layers".into(),
                    ));
                }
                let z = z_rat.to_integer().to_i64().ok_or_else(|| {
                    Error::Internal("lifted layer index exceeds the machine range".into())
                })?;
                let mut stats = CvpGuessStats {
                    beta,
                    lifted_gauge: Some(sap.witness.gauge_f64),
                    z: Some(z),
                    distance: None,
                    inner_guesses: sap.guesses.len(),
                    budget_exhausted: false,
                };
                match lifted.unlift(&sap.witness.point) {
                    Some(w) => {
                        let distance = c.gauge_exact(&rational::sub(&w, x));
                        // the lifted gauge of (w - x, 1) is the distance
                        // capped below by beta, exactly
                        let expected = if distance >= beta_rat {
                            distance.clone()
                        } else {
                            beta_rat.clone()
                        };
                        if sap.witness.gauge != expected {
                            return Err(Error::Internal(
                                "lifted gauge disagrees with the unlifted distance".into(),
                            ));
                        }
                        stats.distance = Some(rat_to_f64(&distance));
                        let replace = best.as_ref().map_or(true, |b| distance < b.distance);
                        if replace {
                            best = Some(CvpWitness {
                                distance_f64: rat_to_f64(&distance),
                                point: w,
                                distance,
                            });
                        }
                    }
                    None => {
                        // every layer other than z = 1 prices at 2 beta or more
                        if sap.witness.gauge < &beta_rat + &beta_rat {
                            return Err(Error::Internal(
                                "a non-unit lift layer fell below twice the guess radius".into(),
                            ));
                        }
                    }
                }
                guesses.push(stats);
            }
            Err(Error::BudgetExhausted(_)) => guesses.push(CvpGuessStats {
                beta,
                lifted_gauge: None,
                z: None,
                distance: None,
                inner_guesses: 0,
                budget_exhausted: true,
            }),
            Err(e) => return Err(e),
        }
    }

    match best {
        Some(witness) => Ok(report(witness, nu, guesses)),
        None => Err(Error::BudgetExhausted(
            "no radius guess mapped back to a lattice point".into(),
        )),
    }
}

/// Outer guess grid together with a known lattice point near the target.
struct CvpGrid {
    nu: f64,
    guesses: usize,
    near: QVec,
}

/// Radius grid for the guesses: anchored at a certified lower bound on the
/// distance from the exact Euclidean closest point, spanning the sandwich
/// ratio R/r in 3/2 steps so some guess brackets the distance. Past the
/// enumeration cap the coset residue bounds the distance from above and the
/// grid spans downward from it with an extra 2^n margin.
fn cvp_grid(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    x: &QVec,
    cfg: &SolverConfig,
) -> Result<CvpGrid> {
    let ratio = rat_to_f64(&(c.outer_radius() / c.inner_radius()));
    let log_step = 1.5_f64.ln();
    match oracle::l2_cvp_sq(basis, x, cfg.oracle_cap) {
        Ok((near, sq)) => {
            if sq.is_zero() {
                return Err(Error::Internal(
                    "zero distance reached the guess grid despite the lattice short-circuit"
                        .into(),
                ));
            }
            let mu_lower = &sq / sqrt_upper(&sq)?;
            let nu = rat_to_f64(&(mu_lower / c.outer_radius()));
            let guesses = (ratio.ln() / log_step).ceil().max(0.0) as usize + 1;
            Ok(CvpGrid { nu, guesses, near })
        }
        Err(Error::CapExceeded { .. }) | Err(Error::EnumerationTooLarge { .. }) => {
            let n = basis.dim();
            let residue = basis.reduce(x);
            let above = c.gauge_exact(&rational::neg(&residue));
            if above.is_zero() {
                return Err(Error::Internal(
                    "zero residue reached the guess grid despite the lattice short-circuit".into(),
                ));
            }
            let span = (n as f64) * 2.0_f64.ln() + ratio.ln();
            let nu = rat_to_f64(&above) / (ratio * (n as f64).exp2());
            let guesses = (span / log_step).ceil().max(0.0) as usize + 1;
            // the coset representative exhibits one concrete lattice point
            // whose distance bounds the true one from above
            let near = rational::sub(x, &residue);
            Ok(CvpGrid { nu, guesses, near })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{estimate_gamma, leq_tol};
    use crate::rational::{qvec_int, rat, rat_int};

    fn cube2() -> CenteredPolytope {
        CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1]), &qvec_int(&[1, 1])).unwrap()
    }

    fn skew2() -> CenteredPolytope {
        CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1]), &qvec_int(&[2, 2])).unwrap()
    }

    fn quick_cfg(seed: u64, gamma: f64) -> SolverConfig {
        SolverConfig {
            seed,
            gamma_override: Some(gamma),
            budget_multiplier: 0.05,
            pair_cap: 4096,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn lifted_gauge_matches_the_closed_formula() {
        let c = CenteredPolytope::axis_box_at_origin(&[rat_int(-1)], &[rat_int(1)]).unwrap();
        let b = LatticeBasis::identity(1);
        let x = vec![rat(2, 5)];
        let lifted = lift(&c, &b, &x, &rat(2, 5)).unwrap();

        let m1 = lifted.lift_point(&vec![rat_int(1)]);
        assert_eq!(m1, vec![rat(3, 5), rat_int(1)]);
        assert_eq!(lifted.body.gauge_exact(&m1), rat(3, 5));
        // layers above one and below zero price at 2 beta or more
        assert_eq!(
            lifted.body.gauge_exact(&vec![rat_int(0), rat_int(2)]),
            rat(4, 5)
        );
        assert_eq!(
            lifted.body.gauge_exact(&vec![rat_int(0), rat_int(-1)]),
            rat(4, 5)
        );
        // points closer than beta still pay the floor on the unit layer
        assert_eq!(
            lifted.body.gauge_exact(&vec![rat(1, 5), rat_int(1)]),
            rat(2, 5)
        );

        assert!(lifted.subspace.contains(&vec![rat_int(5), rat_int(0)]));
        assert!(!lifted.subspace.contains(&vec![rat_int(0), rat_int(1)]));
        assert_eq!(
            lifted.unlift(&vec![rat(3, 5), rat_int(1)]),
            Some(vec![rat_int(1)])
        );
        assert_eq!(lifted.unlift(&vec![rat(3, 5), rat_int(2)]), None);
    }

    #[test]
    fn lifted_symmetry_follows_the_product_rule() {
        // volumes multiply across the extra slab, so the skew box lands on
        // ((2/3) * (2/3)^2)^(1/3) = 2/3 exactly
        assert!((lifted_gamma(2.0 / 3.0, 2) - 2.0 / 3.0).abs() < 1e-12);

        let c = skew2();
        let lifted = lift(&c, &LatticeBasis::identity(2), &qvec_int(&[0, 0]), &rat(1, 2)).unwrap();
        let measured = estimate_gamma(&lifted.body, 20_000, 5).unwrap();
        assert!((measured - 2.0 / 3.0).abs() < 0.02, "measured {measured}");
    }

    #[test]
    fn approx_cvp_stays_in_the_oracle_window() {
        let c = cube2();
        let b = LatticeBasis::identity(2);
        let x = vec![rat(2, 5), rat(3, 10)];
        let report = approx_cvp(&c, &b, &x, 0.25, &quick_cfg(5, 1.0)).unwrap();
        let brute = oracle::cvp_brute(&c, &b, &x, 5).unwrap();
        assert_eq!(brute.value, rat(2, 5));
        assert!(report.witness.distance >= brute.value);
        assert!(leq_tol(report.witness.distance_f64, 0.5));
        assert!(!report.eps_clamped);
    }

    #[test]
    fn asymmetric_bodies_prefer_the_cheap_side() {
        let c = skew2();
        let b = LatticeBasis::identity(2);
        let x = vec![rat(9, 10), rat_int(0)];
        let report = approx_cvp(&c, &b, &x, 0.25, &quick_cfg(2, 2.0 / 3.0)).unwrap();
        let brute = oracle::cvp_brute(&c, &b, &x, 5).unwrap();
        assert_eq!(brute.value, rat(1, 20));
        assert!(report.witness.distance >= brute.value);
        assert!(leq_tol(report.witness.distance_f64, 0.0625));
    }

    #[test]
    fn lattice_targets_short_circuit_to_distance_zero() {
        let c = cube2();
        let b = LatticeBasis::identity(2);
        let report = approx_cvp(&c, &b, &qvec_int(&[3, -2]), 0.25, &quick_cfg(1, 1.0)).unwrap();
        assert_eq!(report.witness.point, qvec_int(&[3, -2]));
        assert!(report.witness.distance.is_zero());
        assert!(report.guesses.is_empty());
    }

    #[test]
    fn oversized_tolerances_are_clamped_and_flagged() {
        let c = cube2();
        let b = LatticeBasis::identity(2);
        let x = vec![rat(2, 5), rat(3, 10)];
        let report = approx_cvp(&c, &b, &x, 0.4, &quick_cfg(5, 1.0)).unwrap();
        assert!(report.eps_clamped);
        assert!(report.eps_used < 1.0 / 3.0);
        assert_eq!(report.eps_requested, 0.4);

        let err = approx_cvp(&c, &b, &x, 0.6, &quick_cfg(5, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn exact_cvp_recovers_the_brute_distance() {
        let c = cube2();
        let b = LatticeBasis::identity(2);
        let x = vec![rat(2, 5), rat(3, 10)];
        let report = exact_cvp(&c, &b, &x, 2.0, &quick_cfg(9, 1.0)).unwrap();
        assert_eq!(report.witness.distance, rat(2, 5));
        assert_eq!(report.witness.point, qvec_int(&[0, 0]));

        let err = exact_cvp(&c, &b, &x, 1.5, &quick_cfg(9, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn lifted_shortest_vector_splits_into_distance_and_original() {
        // with beta inside [2d/3, d] the lifted shortest vector is exactly
        // min of the target distance and the original shortest vector
        let c = cube2();
        let b = LatticeBasis::identity(2);
        let x = vec![rat(2, 5), rat(3, 10)];
        let d = oracle::cvp_brute(&c, &b, &x, 5).unwrap().value;
        let beta = &d * rat(4, 5);
        let lifted = lift(&c, &b, &x, &beta).unwrap();
        let lifted_min = oracle::svp_brute(&lifted.body, &lifted.basis, 5)
            .unwrap()
            .value;
        let original_min = oracle::svp_brute(&c, &b, 5).unwrap().value;
        let expected = if d < original_min { d } else { original_min };
        assert_eq!(lifted_min, expected);
    }
}
