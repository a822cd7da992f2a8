//! The asymmetric sieve: pair clustering, the staged sieving loop, and the
//! solvers for the subspace avoiding problem built on top of it.
//!
//! A sieve pair couples a small exact perturbation x with the integer
//! coefficients w of its lattice shift, so the partner y = x + B w is
//! reconstructible exactly at any time. Clustering contracts the partners by
//! a constant factor per stage while y - x stays in the lattice; pairwise
//! differences of the survivors then yield short lattice vectors outside a
//! forbidden subspace.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::{SolverConfig, VerifyLevel};
use crate::error::{Error, Result};
use crate::geometry::{self, leq_tol, CenteredPolytope, Sign};
use crate::lattice::{LatticeBasis, Subspace};
use crate::oracle;
use crate::rational::{self, rat_to_f64, sqrt_upper, QVec, Rat};
use crate::sampling::{streams, SamplerConfig, UniformSampler};

/// Pairs inspected per stage when verification runs in sampled mode.
const SAMPLED_CHECKS: usize = 64;

/// One sieving pair. The perturbation x never changes after creation; the
/// partner is carried as integer coefficients w with y = x + B w, so the
/// lattice identity y - x in L holds by construction. Float mirrors of x and
/// y drive the clustering tests, and `sign` is the side attaining the starred
/// gauge of x, fixed at creation.
#[derive(Debug, Clone)]
pub struct SievePair {
    x: QVec,
    w: Vec<i64>,
    x_f64: Vec<f64>,
    y_f64: Vec<f64>,
    sign: Sign,
}

impl SievePair {
    /// Builds a pair from an exact perturbation and partner. Fails when the
    /// difference y - x is not a lattice vector.
    pub fn from_parts(
        x: QVec,
        y: QVec,
        basis: &LatticeBasis,
        c: &CenteredPolytope,
    ) -> Result<SievePair> {
        let diff = rational::sub(&y, &x);
        let w = basis.integer_coords(&diff).ok_or_else(|| {
            Error::Input("pair difference y - x is not a lattice vector".into())
        })?;
        Ok(Self::assemble(x, coeffs_to_i64(&w)?, basis, c))
    }

    fn assemble(x: QVec, w: Vec<i64>, basis: &LatticeBasis, c: &CenteredPolytope) -> SievePair {
        let x_f64 = rational::to_f64_vec(&x);
        let mut y_f64 = x_f64.clone();
        for (j, &wj) in w.iter().enumerate() {
            if wj != 0 {
                for (yi, ci) in y_f64.iter_mut().zip(basis.column_f64(j)) {
                    *yi += wj as f64 * ci;
                }
            }
        }
        let sign = c.gauge_star(&x_f64).sign;
        SievePair {
            x,
            w,
            x_f64,
            y_f64,
            sign,
        }
    }

    /// The exact perturbation.
    pub fn x(&self) -> &QVec {
        &self.x
    }

    /// Integer coefficients of the lattice shift y - x.
    pub fn coeffs(&self) -> &[i64] {
        &self.w
    }

    /// Float mirror of the perturbation.
    pub fn x_f64(&self) -> &[f64] {
        &self.x_f64
    }

    /// Float mirror of the partner.
    pub fn y_f64(&self) -> &[f64] {
        &self.y_f64
    }

    /// Side attaining the starred gauge of x.
    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Exact partner y = x + B w.
    pub fn y_exact(&self, basis: &LatticeBasis) -> QVec {
        rational::add(&self.x, &basis.point(&self.w))
    }

    /// Combines this pair with a cluster center: the partner moves to
    /// y - y_center + x_center while x stays fixed, so the shift coefficients
    /// become w - w_center.
    fn attach(&self, center: &SievePair) -> Result<SievePair> {
        let mut w = Vec::with_capacity(self.w.len());
        for (a, b) in self.w.iter().zip(&center.w) {
            w.push(a.checked_sub(*b).ok_or_else(|| {
                Error::Internal("lattice coefficient overflow during attachment".into())
            })?);
        }
        let y_f64 = self
            .y_f64
            .iter()
            .zip(&center.y_f64)
            .zip(&center.x_f64)
            .map(|((y, yc), xc)| y - yc + xc)
            .collect();
        Ok(SievePair {
            x: self.x.clone(),
            w,
            x_f64: self.x_f64.clone(),
            y_f64,
            sign: self.sign,
        })
    }
}

fn coeffs_to_i64(w: &[BigInt]) -> Result<Vec<i64>> {
    w.iter()
        .map(|v| {
            v.to_i64().ok_or_else(|| {
                Error::Internal("lattice coefficient exceeds the machine range".into())
            })
        })
        .collect()
}

/// Greedy clustering of sieve pairs. Scans pairs in index order; a pair
/// attaches to the first center j with |y - y_j| at most D/2 under the
/// center's signed gauge, otherwise it opens a new cluster. Returns the
/// center indices and the attached pairs (centers are consumed), so the
/// output holds exactly `pairs.len() - centers.len()` pairs, each with
/// starred partner gauge at most D/2 + beta. Each partner's facet ratios
/// are tabulated once up front; every attachment test is then a linear
/// scan over facet differences with no further dot products.
pub fn basic_sieve(
    pairs: Vec<SievePair>,
    c: &CenteredPolytope,
    beta: f64,
    d: f64,
) -> Result<(Vec<usize>, Vec<SievePair>)> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Input("sieving radius beta must be positive".into()));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Input("stage bound D must be positive".into()));
    }
    let mut tables: Vec<Vec<f64>> = Vec::with_capacity(pairs.len());
    for (index, p) in pairs.iter().enumerate() {
        if p.x.len() != c.dim() {
            return Err(Error::Dimension {
                expected: c.dim(),
                got: p.x.len(),
                what: "sieve pair",
            });
        }
        let xs = c.gauge_star(p.x_f64()).value;
        if !leq_tol(xs, beta) {
            return Err(Error::PairInvariant {
                index,
                detail: format!("perturbation gauge {xs} exceeds beta {beta}"),
            });
        }
        let t = c.facet_ratios(p.y_f64());
        let mut plus = 0.0_f64;
        let mut minus = 0.0_f64;
        for &v in &t {
            if v > plus {
                plus = v;
            }
            if -v > minus {
                minus = -v;
            }
        }
        let ys = plus.min(minus);
        if !leq_tol(ys, d) {
            return Err(Error::PairInvariant {
                index,
                detail: format!("partner gauge {ys} exceeds the stage bound {d}"),
            });
        }
        tables.push(t);
    }

    let half = 0.5 * d;
    let mut centers: Vec<usize> = Vec::new();
    let mut center_pairs: Vec<SievePair> = Vec::new();
    let mut clustered: Vec<SievePair> = Vec::new();
    'scan: for (index, p) in pairs.into_iter().enumerate() {
        for (k, cen) in center_pairs.iter().enumerate() {
            if attaches(&tables[index], &tables[centers[k]], cen.sign, half) {
                clustered.push(p.attach(cen)?);
                continue 'scan;
            }
        }
        centers.push(index);
        center_pairs.push(p);
    }
    Ok((centers, clustered))
}

/// Signed gauge test of a pair difference against half the stage bound,
/// evaluated from the two facet-ratio tables. Entrywise table differences
/// are the ratios of y - y_cen, so the running maximum reproduces
/// `leq_tol(gauge_signed(y - y_cen, sign), half)`. The pass set of
/// `leq_tol` is downward closed in its first argument, so a partial
/// maximum that already fails settles the test early.
fn attaches(tp: &[f64], tc: &[f64], sign: Sign, half: f64) -> bool {
    let mut best = 0.0_f64;
    match sign {
        Sign::Plus => {
            for (a, b) in tp.iter().zip(tc) {
                let v = a - b;
                if v > best {
                    if !leq_tol(v, half) {
                        return false;
                    }
                    best = v;
                }
            }
        }
        Sign::Minus => {
            for (a, b) in tp.iter().zip(tc) {
                let v = b - a;
                if v > best {
                    if !leq_tol(v, half) {
                        return false;
                    }
                    best = v;
                }
            }
        }
    }
    leq_tol(best, half)
}

/// Stage plan for one sieving run. `n0` is the scheduled pair count after the
/// budget multiplier and the hard cap; `capped` records that the theoretical
/// budget was cut, so success is empirical rather than guaranteed. `eta` is
/// the per-sample uniformity budget the pair count implies; the dyadic grid
/// sampler is exactly uniform on its grid, which stands in for an
/// eta-uniform sampler, so eta is carried for reporting only.
#[derive(Debug, Clone)]
pub struct SieveSchedule {
    pub d0: f64,
    pub n0: usize,
    pub eta: f64,
    pub stage_bound: usize,
    pub capped: bool,
    pub gamma: f64,
}

impl SieveSchedule {
    /// Computes the pair budget 4 ceil(6 ln(D0/beta)) (20/gamma^2)^n +
    /// 8 (36/(gamma^2 eps))^n, scaled and capped per the config.
    pub fn new(
        n: usize,
        d0: f64,
        beta: f64,
        eps: f64,
        gamma: f64,
        cfg: &SolverConfig,
    ) -> Result<SieveSchedule> {
        if !(d0 > 0.0 && d0.is_finite()) {
            return Err(Error::Input("initial sieve bound must be positive".into()));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Input("sieving radius beta must be positive".into()));
        }
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::Input("tolerance eps must lie in (0, 1/2]".into()));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::Input(
                "symmetry parameter gamma must lie in (0, 1]".into(),
            ));
        }
        if !(cfg.budget_multiplier > 0.0) {
            return Err(Error::Input("budget multiplier must be positive".into()));
        }
        let stage_term = (6.0 * (d0 / beta).ln()).ceil().max(0.0);
        let stage_bound = stage_term.min(1e9) as usize;
        let g2 = gamma * gamma;
        let raw = 4.0 * stage_term * (20.0 / g2).powi(n as i32)
            + 8.0 * (36.0 / (g2 * eps)).powi(n as i32);
        let scaled = raw * cfg.budget_multiplier;
        let cap = cfg.pair_cap as f64;
        let (n0, capped) = if !scaled.is_finite() || scaled > cap {
            (cfg.pair_cap, true)
        } else {
            (scaled.ceil() as usize, false)
        };
        let n0 = n0.max(2);
        let eta = 0.5_f64.powi(n as i32 + 1) / n0 as f64;
        Ok(SieveSchedule {
            d0,
            n0,
            eta,
            stage_bound,
            capped,
            gamma,
        })
    }
}

/// One lattice vector from the sieve's difference set, with its exact gauge.
#[derive(Debug, Clone)]
pub struct ShortVector {
    pub point: QVec,
    pub coeffs: Vec<i64>,
    pub gauge: Rat,
    pub gauge_f64: f64,
}

/// Counters from one sieving run.
#[derive(Debug, Clone)]
pub struct SieveStats {
    pub beta: f64,
    pub eps: f64,
    pub schedule: SieveSchedule,
    pub stages_run: usize,
    pub survivors: usize,
    pub distinct: usize,
    pub truncated: bool,
}

/// Vectors and counters from one sieving run, vectors sorted by gauge.
#[derive(Debug, Clone)]
pub struct SieveOutcome {
    pub vectors: Vec<ShortVector>,
    pub stats: SieveStats,
}

/// One sieving run at a fixed radius guess: creates the scheduled pairs,
/// contracts them stage by stage while D >= 3 beta, and returns the
/// deduplicated difference set of the survivors, restricted to lattice
/// vectors outside M. An empty return is an answer ("nothing found"); running
/// out of pairs before the bound contracts is a budget error.
pub fn short_vectors(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    m: &Subspace,
    beta: f64,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<SieveOutcome> {
    short_vectors_stream(c, basis, m, beta, eps, cfg, streams::SIEVE)
}

fn short_vectors_stream(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    m: &Subspace,
    beta: f64,
    eps: f64,
    cfg: &SolverConfig,
    stream: u64,
) -> Result<SieveOutcome> {
    let n = c.dim();
    if !c.is_zero_centered() {
        return Err(Error::Geometry(
            "sieving requires a zero-centered body".into(),
        ));
    }
    if basis.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: basis.dim(),
            what: "lattice basis",
        });
    }
    if m.ambient_dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: m.ambient_dim(),
            what: "avoided subspace",
        });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Input("sieving radius beta must be positive".into()));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Input("tolerance eps must lie in (0, 1/2]".into()));
    }
    let gamma = resolve_gamma(c, cfg)?;

    let mut gmax = Rat::zero();
    for j in 0..n {
        let g = c.gauge_exact(&basis.column(j));
        if g > gmax {
            gmax = g;
        }
    }
    if gmax.is_zero() {
        return Err(Error::Internal(
            "every basis column has zero gauge under a bounded body".into(),
        ));
    }
    let d0 = rat_to_f64(&(&gmax * Rat::from_integer(BigInt::from(n))));
    let schedule = SieveSchedule::new(n, d0, beta, eps, gamma, cfg)?;

    let scfg = SamplerConfig::from_solver(cfg, stream);
    let mut sampler = UniformSampler::new(c, scfg)?;
    // a coarse dyadic radius keeps pair coordinates and the sampler's facet
    // forms small; only beta's magnitude matters, not its exact f64 value
    let beta_rat = rational::snap_down_dyadic(beta, 24)?;
    let mut pairs = Vec::with_capacity(schedule.n0);
    for _ in 0..schedule.n0 {
        let (x, _) = sampler.draw_signed_scaled(&beta_rat)?;
        let shift = basis.shift_coeffs(&x);
        pairs.push(SievePair::assemble(x, coeffs_to_i64(&shift)?, basis, c));
    }

    let cluster_cap = 2.0 * (5.0 / gamma).powi(n as i32);
    let mut d = schedule.d0;
    let mut stages_run = 0usize;
    while d >= 3.0 * beta {
        if pairs.is_empty() {
            return Err(Error::BudgetExhausted(format!(
                "pair population exhausted at stage {stages_run} with bound {d:.6} above 3 beta"
            )));
        }
        let (centers, clustered) = basic_sieve(pairs, c, beta, d)?;
        if !leq_tol(centers.len() as f64, cluster_cap) {
            return Err(Error::Internal(format!(
                "stage {stages_run} produced {} centers, above the bound {cluster_cap:.3}",
                centers.len()
            )));
        }
        pairs = clustered;
        d = 0.5 * d + beta;
        stages_run += 1;
        if stages_run > schedule.stage_bound {
            return Err(Error::Internal(
                "sieving exceeded its certified stage bound".into(),
            ));
        }
        verify_pairs(&pairs, c, basis, d, cfg.verify)?;
    }

    let survivors = pairs.len();
    let mut seen = HashSet::new();
    let mut shifts: Vec<Vec<i64>> = Vec::new();
    for p in &pairs {
        if seen.insert(p.w.clone()) {
            shifts.push(p.w.clone());
        }
    }

    let mut cand_seen: HashSet<Vec<i64>> = HashSet::new();
    let mut cands: Vec<Vec<i64>> = Vec::new();
    let mut truncated = false;
    'differences: for i in 0..shifts.len() {
        for j in (i + 1)..shifts.len() {
            for (a, b) in [(i, j), (j, i)] {
                let mut delta = Vec::with_capacity(n);
                for k in 0..n {
                    let v = shifts[a][k].checked_sub(shifts[b][k]).ok_or_else(|| {
                        Error::Internal("coefficient overflow in the difference set".into())
                    })?;
                    delta.push(v);
                }
                if cand_seen.insert(delta.clone()) {
                    cands.push(delta);
                }
                if cands.len() >= cfg.max_unique {
                    truncated = true;
                    break 'differences;
                }
            }
        }
    }

    let mut vectors = Vec::new();
    for coeffs in cands {
        let point = basis.point(&coeffs);
        if !basis.contains(&point) {
            return Err(Error::Internal(
                "difference vector escaped the lattice".into(),
            ));
        }
        if m.contains(&point) {
            continue;
        }
        let gauge = c.gauge_exact(&point);
        let gauge_f64 = rat_to_f64(&gauge);
        vectors.push(ShortVector {
            point,
            coeffs,
            gauge,
            gauge_f64,
        });
    }
    vectors.sort_by(|a, b| a.gauge.cmp(&b.gauge).then_with(|| a.coeffs.cmp(&b.coeffs)));
    let distinct = vectors.len();
    Ok(SieveOutcome {
        vectors,
        stats: SieveStats {
            beta,
            eps,
            schedule,
            stages_run,
            survivors,
            distinct,
            truncated,
        },
    })
}

/// Re-derives pair caches from exact data and re-checks the contracted bound.
/// Sampled mode strides through a fixed-size subset; full mode checks every
/// pair.
fn verify_pairs(
    pairs: &[SievePair],
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    bound: f64,
    level: VerifyLevel,
) -> Result<()> {
    if matches!(level, VerifyLevel::Off) || pairs.is_empty() {
        return Ok(());
    }
    let full = matches!(level, VerifyLevel::Full);
    let step = if full {
        1
    } else {
        (pairs.len() / SAMPLED_CHECKS).max(1)
    };
    for index in (0..pairs.len()).step_by(step) {
        let p = &pairs[index];
        let exact = rational::to_f64_vec(&p.y_exact(basis));
        for (cached, fresh) in p.y_f64().iter().zip(&exact) {
            if (cached - fresh).abs() > 1e-9 * fresh.abs().max(1.0) {
                return Err(Error::Internal(format!(
                    "pair {index} float cache drifted from its exact partner"
                )));
            }
        }
        let star = c.gauge_star(p.y_f64()).value;
        if !leq_tol(star, bound) {
            return Err(Error::PairInvariant {
                index,
                detail: format!("partner gauge {star} exceeds the contracted bound {bound}"),
            });
        }
    }
    Ok(())
}

pub(crate) fn resolve_gamma(c: &CenteredPolytope, cfg: &SolverConfig) -> Result<f64> {
    let gamma = match cfg.gamma_override {
        Some(g) => g,
        None => geometry::estimate_gamma(c, cfg.gamma_samples, cfg.seed)?,
    };
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Input(
            "symmetry parameter gamma must lie in (0, 1]".into(),
        ));
    }
    Ok(gamma)
}

struct LambdaGrid {
    nu: f64,
    guesses: usize,
    fallback: bool,
}

/// Certified lower bound nu on the subspace avoiding minimum, from the exact
/// Euclidean minimizer when enumeration is feasible: nu <= lambda <= (R/r) nu.
/// Past the enumeration cap it falls back to the cheapest basis column with
/// nu <= lambda <= 2^n (R/r) nu.
pub fn lambda_bounds(c: &CenteredPolytope, basis: &LatticeBasis, m: &Subspace) -> Result<f64> {
    lambda_grid(c, basis, m, SolverConfig::default().oracle_cap).map(|g| g.nu)
}

fn lambda_grid(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    m: &Subspace,
    cap: usize,
) -> Result<LambdaGrid> {
    let n = basis.dim();
    if c.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: c.dim(),
            what: "gauge body",
        });
    }
    if m.ambient_dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: m.ambient_dim(),
            what: "avoided subspace",
        });
    }
    let ratio = rat_to_f64(&(c.outer_radius() / c.inner_radius()));
    let log_step = 1.5_f64.ln();
    match oracle::l2_sap_sq(basis, m, cap) {
        Ok((_, sq)) => {
            // sq / sqrt_upper(sq) never exceeds the true root, so nu stays a
            // certified lower bound after the division by the outer radius.
            let mu_lower = &sq / sqrt_upper(&sq)?;
            let nu = rat_to_f64(&(mu_lower / c.outer_radius()));
            let guesses = (ratio.ln() / log_step).ceil().max(0.0) as usize + 1;
            Ok(LambdaGrid {
                nu,
                guesses,
                fallback: false,
            })
        }
        Err(Error::CapExceeded { .. }) | Err(Error::EnumerationTooLarge { .. }) => {
            let mut best: Option<Rat> = None;
            for j in 0..n {
                let col = basis.column(j);
                if m.contains(&col) {
                    continue;
                }
                let sq = rational::norm2_sq(&col);
                if best.as_ref().map_or(true, |b| sq < *b) {
                    best = Some(sq);
                }
            }
            let sq = best.ok_or_else(|| {
                Error::Geometry("subspace contains every basis vector, so it is not proper".into())
            })?;
            let mu_lower = &sq / sqrt_upper(&sq)?;
            let denom = c.outer_radius() * Rat::from_integer(BigInt::one() << n);
            let nu = rat_to_f64(&(mu_lower / denom));
            let span = (n as f64) * 2.0_f64.ln() + ratio.ln();
            let guesses = (span / log_step).ceil().max(0.0) as usize + 1;
            Ok(LambdaGrid {
                nu,
                guesses,
                fallback: true,
            })
        }
        Err(e) => Err(e),
    }
}

/// Per-guess counters inside a SAP run.
#[derive(Debug, Clone)]
pub struct GuessStats {
    pub beta: f64,
    pub n0: usize,
    pub capped: bool,
    pub stages: usize,
    pub survivors: usize,
    pub distinct: usize,
    pub truncated: bool,
    pub best_gauge: Option<f64>,
    pub budget_exhausted: bool,
}

/// The minimum-gauge vector found across all guesses.
#[derive(Debug, Clone)]
pub struct SapWitness {
    pub point: QVec,
    pub coeffs: Vec<i64>,
    pub gauge: Rat,
    pub gauge_f64: f64,
}

/// Result of a SAP run: the winning vector plus enough counters to replay
/// and audit every guess.
#[derive(Debug, Clone)]
pub struct SapReport {
    pub witness: SapWitness,
    pub nu: f64,
    pub fallback_bound: bool,
    pub guesses: Vec<GuessStats>,
    pub gamma: f64,
    pub eps: f64,
    pub seed: u64,
}

/// Subspace avoiding problem, approximate mode: runs the sieve once per
/// radius guess beta = (3/2)^i nu and returns the minimum-gauge lattice
/// vector outside M found across all guesses. Each guess draws from its own
/// derived random stream, so guesses are independent and the whole run is
/// reproducible from the seed.
pub fn approx_sap(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    m: &Subspace,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<SapReport> {
    approx_sap_stream(c, basis, m, eps, cfg, None, streams::SIEVE)
}

/// Same as `approx_sap` with an explicit base stream, so callers running
/// several SAP instances under one seed keep their randomness disjoint, and
/// an optional certified bracket (lo, hi) on the avoiding minimum that
/// replaces the generic sandwich grid when the caller knows better.
pub(crate) fn approx_sap_stream(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    m: &Subspace,
    eps: f64,
    cfg: &SolverConfig,
    grid_hint: Option<(f64, f64)>,
    stream_base: u64,
) -> Result<SapReport> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Input("tolerance eps must lie in (0, 1/2]".into()));
    }
    if !c.is_zero_centered() {
        return Err(Error::Geometry(
            "sieving requires a zero-centered body".into(),
        ));
    }
    let gamma = resolve_gamma(c, cfg)?;
    let mut run_cfg = cfg.clone();
    run_cfg.gamma_override = Some(gamma);
    let grid = match grid_hint {
        Some((lo, hi)) => {
            if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
                return Err(Error::Input(format!(
                    "grid hint must satisfy 0 < lo <= hi, got ({lo}, {hi})"
                )));
            }
            LambdaGrid {
                nu: lo,
                guesses: ((hi / lo).ln() / 1.5_f64.ln()).ceil().max(0.0) as usize + 1,
                fallback: false,
            }
        }
        None => lambda_grid(c, basis, m, cfg.oracle_cap)?,
    };

    let mut guesses = Vec::with_capacity(grid.guesses);
    let mut best: Option<SapWitness> = None;
    for i in 0..grid.guesses {
        let beta = grid.nu * 1.5_f64.powi(i as i32);
        match short_vectors_stream(c, basis, m, beta, eps, &run_cfg, stream_base + i as u64) {
            Ok(out) => {
                guesses.push(GuessStats {
                    beta,
                    n0: out.stats.schedule.n0,
                    capped: out.stats.schedule.capped,
                    stages: out.stats.stages_run,
                    survivors: out.stats.survivors,
                    distinct: out.stats.distinct,
                    truncated: out.stats.truncated,
                    best_gauge: out.vectors.first().map(|v| v.gauge_f64),
                    budget_exhausted: false,
                });
                if let Some(v) = out.vectors.into_iter().next() {
                    let replace = best.as_ref().map_or(true, |b| v.gauge < b.gauge);
                    if replace {
                        best = Some(SapWitness {
                            point: v.point,
                            coeffs: v.coeffs,
                            gauge: v.gauge,
                            gauge_f64: v.gauge_f64,
                        });
                    }
                }
            }
            Err(Error::BudgetExhausted(_)) => guesses.push(GuessStats {
                beta,
                n0: 0,
                capped: false,
                stages: 0,
                survivors: 0,
                distinct: 0,
                truncated: false,
                best_gauge: None,
                budget_exhausted: true,
            }),
            Err(e) => return Err(e),
        }
    }
    match best {
        Some(witness) => Ok(SapReport {
            witness,
            nu: grid.nu,
            fallback_bound: grid.fallback,
            guesses,
            gamma,
            eps,
            seed: cfg.seed,
        }),
        None => Err(Error::BudgetExhausted(
            "no sieving guess produced a lattice vector outside the subspace".into(),
        )),
    }
}

/// Subspace avoiding problem, exact mode: valid when the avoiding minimum is
/// within a factor t of the shortest vector, in which case the approximate
/// run at eps = 1/t already pins the exact minimizer.
pub fn exact_sap(
    c: &CenteredPolytope,
    basis: &LatticeBasis,
    m: &Subspace,
    t: f64,
    cfg: &SolverConfig,
) -> Result<SapReport> {
    if !(t >= 2.0 && t.is_finite()) {
        return Err(Error::Input("exact mode needs a ratio bound t >= 2".into()));
    }
    approx_sap(c, basis, m, 1.0 / t, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec, qvec_int, rat, rat_int};

    fn line_body() -> CenteredPolytope {
        CenteredPolytope::axis_box_at_origin(&[rat_int(-1)], &[rat_int(1)]).unwrap()
    }

    fn tenth_basis() -> LatticeBasis {
        LatticeBasis::from_columns(vec![qvec(&[(1, 10)])]).unwrap()
    }

    fn cube2() -> CenteredPolytope {
        CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1]), &qvec_int(&[1, 1])).unwrap()
    }

    fn skew2() -> CenteredPolytope {
        CenteredPolytope::axis_box_at_origin(&qvec_int(&[-1, -1]), &qvec_int(&[2, 2])).unwrap()
    }

    fn pair(x: (i64, i64), y: (i64, i64), b: &LatticeBasis, c: &CenteredPolytope) -> SievePair {
        SievePair::from_parts(vec![rat(x.0, x.1)], vec![rat(y.0, y.1)], b, c).unwrap()
    }

    #[test]
    fn single_pair_is_its_own_center() {
        let c = line_body();
        let b = tenth_basis();
        let p = pair((1, 10), (3, 1), &b, &c);
        let (centers, clustered) = basic_sieve(vec![p], &c, 0.25, 4.0).unwrap();
        assert_eq!(centers, vec![0]);
        assert!(clustered.is_empty());
    }

    #[test]
    fn greedy_scan_matches_the_hand_trace() {
        let c = line_body();
        let b = tenth_basis();
        let pairs = vec![
            pair((1, 10), (3, 1), &b, &c),
            pair((2, 10), (29, 10), &b, &c),
            pair((-1, 10), (-29, 10), &b, &c),
        ];
        let (centers, clustered) = basic_sieve(pairs, &c, 0.25, 4.0).unwrap();
        assert_eq!(centers, vec![0, 2]);
        assert_eq!(clustered.len(), 1);
        // second pair attaches to the first: y moves to 2.9 - 3.0 + 0.1 = 0
        // while its perturbation x = 0.2 is untouched
        let p = &clustered[0];
        assert_eq!(p.x(), &vec![rat(1, 5)]);
        assert_eq!(p.y_exact(&b), vec![rat_int(0)]);
        assert_eq!(p.coeffs(), &[-2]);
        let star = c.gauge_star(p.y_f64()).value;
        assert!(leq_tol(star, 4.0 / 2.0 + 0.25));
    }

    #[test]
    fn invariant_violations_report_the_offending_index() {
        let c = line_body();
        let b = tenth_basis();
        let good = pair((1, 10), (3, 1), &b, &c);
        let far = pair((1, 10), (9, 1), &b, &c);
        let err = basic_sieve(vec![good, far], &c, 0.25, 4.0).unwrap_err();
        match err {
            Error::PairInvariant { index, .. } => assert_eq!(index, 1),
            other => panic!("expected a pair invariant error, got {other:?}"),
        }
    }

    #[test]
    fn pairs_must_differ_by_a_lattice_vector() {
        let c = line_body();
        let b = LatticeBasis::identity(1);
        let err = SievePair::from_parts(vec![rat(1, 10)], vec![rat(1, 3)], &b, &c).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn schedule_follows_the_budget_formula() {
        let cfg = SolverConfig {
            pair_cap: 1 << 20,
            ..SolverConfig::default()
        };
        let s = SieveSchedule::new(2, 2.0, 0.9, 0.5, 1.0, &cfg).unwrap();
        // ceil(6 ln(2/0.9)) = 5, so 4*5*400 + 8*72^2 = 49472
        assert_eq!(s.n0, 49_472);
        assert_eq!(s.stage_bound, 5);
        assert!(!s.capped);
        assert!((s.eta - 0.125 / 49_472.0).abs() < 1e-18);

        let half = SolverConfig {
            budget_multiplier: 0.5,
            pair_cap: 1 << 20,
            ..SolverConfig::default()
        };
        assert_eq!(SieveSchedule::new(2, 2.0, 0.9, 0.5, 1.0, &half).unwrap().n0, 24_736);

        let tiny_cap = SolverConfig {
            pair_cap: 1000,
            ..SolverConfig::default()
        };
        let s = SieveSchedule::new(2, 2.0, 0.9, 0.5, 1.0, &tiny_cap).unwrap();
        assert_eq!(s.n0, 1000);
        assert!(s.capped);

        // gamma = 1/2 blows the second term past the default cap
        let dft = SolverConfig::default();
        let s = SieveSchedule::new(2, 2.0, 0.9, 0.5, 0.5, &dft).unwrap();
        assert_eq!(s.n0, dft.pair_cap);
        assert!(s.capped);
    }

    #[test]
    fn short_vectors_stay_in_the_lattice_and_avoid_the_subspace() {
        let c = cube2();
        let b = LatticeBasis::identity(2);
        let m = Subspace::new(vec![qvec_int(&[1, 0])], 2).unwrap();
        let cfg = SolverConfig {
            seed: 7,
            gamma_override: Some(1.0),
            budget_multiplier: 0.1,
            ..SolverConfig::default()
        };
        let out = short_vectors(&c, &b, &m, 0.3, 0.5, &cfg).unwrap();
        // D contracts 2 -> 1.3 -> 0.95 -> 0.775 before dropping under 3 beta
        assert_eq!(out.stats.stages_run, 3);
        assert!(out.stats.stages_run <= out.stats.schedule.stage_bound);
        assert!(!out.vectors.is_empty());
        for v in &out.vectors {
            assert!(b.contains(&v.point));
            assert!(!m.contains(&v.point));
            assert!(v.gauge >= rat_int(1));
        }
    }

    #[test]
    fn lambda_bounds_sandwich_the_cube_minimum() {
        let c = cube2();
        let b = LatticeBasis::identity(2);
        let m = Subspace::new(vec![qvec_int(&[1, 0])], 2).unwrap();
        let nu = lambda_bounds(&c, &b, &m).unwrap();
        // true minimum is 1 via e2; nu = 1/R with R just above sqrt(2)
        assert!(nu > 0.70 && nu <= 0.7072);
        let ratio = rat_to_f64(&(c.outer_radius() / c.inner_radius()));
        assert!(ratio * nu >= 1.0 - 1e-9);

        let doubled = LatticeBasis::from_columns(vec![qvec_int(&[2, 0]), qvec_int(&[0, 2])]).unwrap();
        let nu2 = lambda_bounds(&c, &doubled, &m).unwrap();
        assert_eq!(nu2, 2.0 * nu);
    }

    #[test]
    fn approx_sap_lands_in_the_oracle_window() {
        let b = LatticeBasis::identity(2);
        let m = Subspace::new(vec![qvec_int(&[1, 0])], 2).unwrap();
        let cfg = SolverConfig {
            seed: 11,
            gamma_override: Some(1.0),
            budget_multiplier: 0.05,
            ..SolverConfig::default()
        };

        let cube = cube2();
        let report = approx_sap(&cube, &b, &m, 0.5, &cfg).unwrap();
        let brute = oracle::sap_brute(&cube, &b, &m, 5).unwrap();
        assert!(report.witness.gauge >= brute.value);
        assert!(leq_tol(report.witness.gauge_f64, 1.5 * rat_to_f64(&brute.value)));
        assert!(!m.contains(&report.witness.point));

        let skew = skew2();
        let skew_cfg = SolverConfig {
            gamma_override: Some(2.0 / 3.0),
            ..cfg
        };
        let report = approx_sap(&skew, &b, &m, 0.5, &skew_cfg).unwrap();
        let brute = oracle::sap_brute(&skew, &b, &m, 5).unwrap();
        assert_eq!(brute.value, rat(1, 2));
        assert!(report.witness.gauge >= brute.value);
        assert!(leq_tol(report.witness.gauge_f64, 0.75));
    }

    #[test]
    fn exact_sap_recovers_the_exact_minimum() {
        let c = cube2();
        let b = LatticeBasis::identity(2);
        let m = Subspace::new(vec![qvec_int(&[1, 0])], 2).unwrap();
        let cfg = SolverConfig {
            seed: 3,
            gamma_override: Some(1.0),
            budget_multiplier: 0.05,
            ..SolverConfig::default()
        };
        let report = exact_sap(&c, &b, &m, 2.0, &cfg).unwrap();
        assert_eq!(report.eps, 0.5);
        assert_eq!(report.witness.gauge, rat_int(1));

        let err = exact_sap(&c, &b, &m, 1.5, &cfg).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn exhaustion_is_reported_as_a_budget_error() {
        let c = cube2();
        let wide = LatticeBasis::from_columns(vec![qvec_int(&[100, 0]), qvec_int(&[0, 100])]).unwrap();
        let m = Subspace::new(vec![qvec_int(&[1, 0])], 2).unwrap();
        let cfg = SolverConfig {
            seed: 1,
            gamma_override: Some(1.0),
            budget_multiplier: 1e-9,
            pair_cap: 2,
            ..SolverConfig::default()
        };
        let err = short_vectors(&c, &wide, &m, 0.9, 0.5, &cfg).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted(_)));
    }
}
