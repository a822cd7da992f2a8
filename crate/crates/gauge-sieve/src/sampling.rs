//! Seeded uniform sampling from H-polytopes.
//!
//! Points are drawn on an exact dyadic grid laid over the body's bounding
//! box: each coordinate is lo + step * w with w a 53-bit integer, so every
//! emitted point is an exact rational and lattice arithmetic downstream stays
//! exact. Membership of a grid point is decided by precomputed integer
//! affine forms (i128 fast path, big-integer fallback), never by floats.
//!
//! Rejection from the box is the default and is exactly uniform on the grid.
//! Hit-and-run is available for bodies that fill too little of their box; its
//! mixing quality is a documented contract, not a certified bound, but every
//! point it emits still passes the exact membership check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::geometry::{CenteredPolytope, Sign};
use crate::rational::{self, QMat, QVec, Rat};

/// Grid resolution: 2^53 cells per axis.
const GRID_BITS: u32 = 53;
/// Box bounds are snapped outward to this dyadic denominator.
const SNAP_BITS: u32 = 12;

/// Fixed stream ids so independent solver stages never share random state.
pub mod streams {
    pub const GAMMA: u64 = 1;
    pub const BARYCENTER: u64 = 2;
    pub const LAMBDA: u64 = 3;
    pub const GEN: u64 = 4;
    pub const OPT: u64 = 5;
    pub const VERIFY: u64 = 6;
    /// Base for per-guess sieve streams; guess i uses SIEVE + i.
    pub const SIEVE: u64 = 0x100;
}

/// One RNG per (seed, stream) pair; streams are independent by construction.
pub fn derive_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SampleMethod {
    Rejection,
    #[value(name = "hitandrun")]
    #[serde(rename = "hitandrun")]
    HitAndRun,
}

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub seed: u64,
    pub stream: u64,
    pub method: SampleMethod,
    pub burn_in: usize,
    pub thinning: usize,
    pub max_rejections: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, stream: u64) -> Self {
        SamplerConfig {
            seed,
            stream,
            method: SampleMethod::Rejection,
            burn_in: 64,
            thinning: 4,
            max_rejections: 50_000,
        }
    }

    pub fn from_solver(cfg: &SolverConfig, stream: u64) -> Self {
        SamplerConfig {
            seed: cfg.seed,
            stream,
            method: cfg.sampler,
            burn_in: cfg.burn_in,
            thinning: cfg.thinning,
            max_rejections: cfg.max_rejections,
        }
    }
}

struct GridAxis {
    lo: Rat,
    step: Rat,
    lof: f64,
    stepf: f64,
    /// lo and step over one power-of-two denominator 2^exp, so the cell-w
    /// coordinate materializes as (lo_num + step_num w) / 2^exp with a
    /// shift-only reduction.
    lo_num: BigInt,
    step_num: BigInt,
    exp: u64,
}

impl GridAxis {
    fn new(lo: Rat, step: Rat) -> GridAxis {
        debug_assert!(rational::is_dyadic(&lo) && rational::is_dyadic(&step));
        let e_lo = lo.denom().bits() - 1;
        let e_step = step.denom().bits() - 1;
        let exp = e_lo.max(e_step);
        GridAxis {
            lof: rational::rat_to_f64(&lo),
            stepf: rational::rat_to_f64(&step),
            lo_num: lo.numer() << (exp - e_lo),
            step_num: step.numer() << (exp - e_step),
            lo,
            step,
            exp,
        }
    }

    /// Exact coordinate of cell w.
    fn coord(&self, w: u64) -> Rat {
        rational::dyadic(&self.lo_num + &self.step_num * BigInt::from(w), self.exp)
    }
}

/// One facet inequality evaluated over grid integers: sum d_j w_j <= c.
enum RowForm {
    Small { d: Vec<i128>, c: i128 },
    Big { d: Vec<BigInt>, c: BigInt },
}

/// A polytope together with the integer forms of its facets on the grid.
pub struct GridPoly {
    axes: Vec<GridAxis>,
    forms: Vec<RowForm>,
}

fn snap_dyadic(x: &Rat, bits: u32, up: bool) -> Rat {
    let den = BigInt::one() << bits;
    let scaled = x * Rat::from_integer(den.clone());
    let snapped = if up { scaled.ceil() } else { scaled.floor() };
    Rat::new(snapped.to_integer(), den)
}

impl GridPoly {
    /// Builds the grid for { x : a x <= b } inside the exact box [lo, hi],
    /// snapping the box outward to denominator 2^SNAP_BITS.
    pub fn new(a: &QMat, b: &QVec, lo: &QVec, hi: &QVec) -> Result<GridPoly> {
        let (m, n) = (a.rows(), a.cols());
        let cells = BigInt::one() << GRID_BITS;
        let mut axes = Vec::with_capacity(n);
        for j in 0..n {
            let slo = snap_dyadic(&lo[j], SNAP_BITS, false);
            let shi = snap_dyadic(&hi[j], SNAP_BITS, true);
            if slo >= shi {
                return Err(Error::Geometry(format!(
                    "sampling box degenerate along coordinate {j}"
                )));
            }
            let step = (&shi - &slo) / Rat::from_integer(cells.clone());
            axes.push(GridAxis::new(slo, step));
        }

        // Facet i becomes sum_j (a_ij step_j) w_j <= b_i - a_i . lo, then is
        // cleared to integers by the row's common denominator.
        let wmax = BigInt::from((1u64 << GRID_BITS) - 1);
        let limit = BigInt::one() << 126;
        let mut forms = Vec::with_capacity(m);
        for i in 0..m {
            let mut coefs = Vec::with_capacity(n);
            let mut rhs = b[i].clone();
            for j in 0..n {
                coefs.push(a.at(i, j) * &axes[j].step);
                rhs -= a.at(i, j) * &axes[j].lo;
            }
            let mut q = rhs.denom().clone();
            for cf in &coefs {
                q = q.lcm(cf.denom());
            }
            let qr = Rat::from_integer(q);
            let d: Vec<BigInt> = coefs
                .iter()
                .map(|cf| (cf * &qr).to_integer())
                .collect();
            let c = (&rhs * &qr).to_integer();
            let mut bound: BigInt = c.abs();
            for dj in &d {
                bound += dj.abs() * &wmax;
            }
            forms.push(if bound < limit {
                RowForm::Small {
                    d: d.iter().map(|v| v.to_i128().expect("bounded above")).collect(),
                    c: c.to_i128().expect("bounded above"),
                }
            } else {
                RowForm::Big { d, c }
            });
        }
        Ok(GridPoly { axes, forms })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Exact membership of the grid point indexed by w.
    pub fn contains_w(&self, w: &[u64]) -> bool {
        for form in &self.forms {
            match form {
                RowForm::Small { d, c } => {
                    let mut acc: i128 = 0;
                    for (dj, wj) in d.iter().zip(w) {
                        acc += dj * (*wj as i128);
                    }
                    if acc > *c {
                        return false;
                    }
                }
                RowForm::Big { d, c } => {
                    let mut acc = BigInt::zero();
                    for (dj, wj) in d.iter().zip(w) {
                        acc += dj * BigInt::from(*wj);
                    }
                    if acc > *c {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The exact rational coordinates of the grid point indexed by w.
    pub fn point(&self, w: &[u64]) -> QVec {
        self.axes.iter().zip(w).map(|(ax, wj)| ax.coord(*wj)).collect()
    }

    fn snap_to_grid(&self, p: &[f64]) -> Vec<u64> {
        let top = (1u64 << GRID_BITS) - 1;
        self.axes
            .iter()
            .zip(p)
            .map(|(ax, pj)| {
                let w = ((pj - ax.lof) / ax.stepf).round();
                if w <= 0.0 {
                    0
                } else if w >= top as f64 {
                    top
                } else {
                    w as u64
                }
            })
            .collect()
    }
}

/// Seeded uniform sampler over one body. Draws are exact rational points that
/// always pass the body's exact membership test.
pub struct UniformSampler<'a> {
    body: &'a CenteredPolytope,
    grid: GridPoly,
    rng: ChaCha8Rng,
    method: SampleMethod,
    burn_in: usize,
    thinning: usize,
    max_rejections: usize,
    har_state: Vec<f64>,
    har_started: bool,
}

impl<'a> UniformSampler<'a> {
    pub fn new(body: &'a CenteredPolytope, cfg: SamplerConfig) -> Result<Self> {
        let (lo, hi) = body.ambient_box();
        let grid = GridPoly::new(body.normals(), body.offsets(), &lo, &hi)?;
        Ok(UniformSampler {
            body,
            grid,
            rng: derive_rng(cfg.seed, cfg.stream),
            method: cfg.method,
            burn_in: cfg.burn_in.max(1),
            thinning: cfg.thinning.max(1),
            max_rejections: cfg.max_rejections.max(1),
            har_state: body.center_f64().to_vec(),
            har_started: false,
        })
    }

    /// One uniform draw from the body, as an exact rational point.
    pub fn draw(&mut self) -> Result<QVec> {
        match self.method {
            SampleMethod::Rejection => self.draw_rejection(),
            SampleMethod::HitAndRun => self.draw_hit_and_run(),
        }
    }

    /// A fair sign from the same stream.
    pub fn draw_sign(&mut self) -> Sign {
        if self.rng.gen::<bool>() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Algorithm step shared by the sieving stages: a uniform point of
    /// beta * body with an independent fair sign applied. Requires the
    /// sampler's body to be zero-centered so the scaling is central.
    pub fn draw_signed_scaled(&mut self, beta: &Rat) -> Result<(QVec, Sign)> {
        if !self.body.is_zero_centered() {
            return Err(Error::Geometry(
                "signed sampling requires a zero-centered body".into(),
            ));
        }
        let x = self.draw()?;
        let s = self.draw_sign();
        let scaled: QVec = x.iter().map(|v| rational::mul_fast(v, beta)).collect();
        Ok(match s {
            Sign::Plus => (scaled, Sign::Plus),
            Sign::Minus => (rational::neg(&scaled), Sign::Minus),
        })
    }

    fn draw_w(&mut self) -> Vec<u64> {
        let top = 1u64 << GRID_BITS;
        (0..self.grid.dim())
            .map(|_| self.rng.gen_range(0..top))
            .collect()
    }

    /// One uniform draw, as the accepted cell's grid words. Rejection only:
    /// the hit-and-run walk has no grid-uniform cell to report.
    pub fn draw_grid_words(&mut self) -> Result<Vec<u64>> {
        if !matches!(self.method, SampleMethod::Rejection) {
            return Err(Error::Input(
                "grid-word draws require the rejection sampler".into(),
            ));
        }
        for _ in 0..self.max_rejections {
            let w = self.draw_w();
            if self.grid.contains_w(&w) {
                return Ok(w);
            }
        }
        Err(Error::RejectionBudget {
            attempts: self.max_rejections,
        })
    }

    /// The reflection -C of the sampler's body, as integer facet forms over
    /// the same grid, so symmetry tests on draws stay exact without leaving
    /// grid words.
    pub fn reflected_grid(&self) -> Result<GridPoly> {
        let rows: Vec<QVec> = self
            .body
            .normals()
            .row_vecs()
            .iter()
            .map(|r| rational::neg(r))
            .collect();
        let (lo, hi) = self.body.ambient_box();
        GridPoly::new(&QMat::from_rows(rows)?, self.body.offsets(), &lo, &hi)
    }

    fn draw_rejection(&mut self) -> Result<QVec> {
        for _ in 0..self.max_rejections {
            let w = self.draw_w();
            if self.grid.contains_w(&w) {
                return Ok(self.grid.point(&w));
            }
        }
        Err(Error::RejectionBudget {
            attempts: self.max_rejections,
        })
    }

    fn gaussian(&mut self) -> f64 {
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    fn har_step(&mut self) {
        let n = self.grid.dim();
        let mut dir = vec![0.0_f64; n];
        loop {
            for d in dir.iter_mut() {
                *d = self.gaussian();
            }
            let norm = rational::norm2_f64(&dir);
            if norm > 1e-12 {
                for d in dir.iter_mut() {
                    *d /= norm;
                }
                break;
            }
        }
        // Chord of the body through the current point along dir.
        let mut t_lo = f64::NEG_INFINITY;
        let mut t_hi = f64::INFINITY;
        for (row, bi) in self.body.normals_f64().iter().zip(self.body.offsets_f64()) {
            let slack = bi - rational::dot_f64(row, &self.har_state);
            let speed = rational::dot_f64(row, &dir);
            if speed.abs() < 1e-15 {
                continue;
            }
            let t = slack / speed;
            if speed > 0.0 {
                t_hi = t_hi.min(t);
            } else {
                t_lo = t_lo.max(t);
            }
        }
        if !(t_lo.is_finite() && t_hi.is_finite()) || t_hi <= t_lo {
            return;
        }
        let t = t_lo + (t_hi - t_lo) * self.rng.gen::<f64>();
        for (p, d) in self.har_state.iter_mut().zip(&dir) {
            *p += t * d;
        }
    }

    fn draw_hit_and_run(&mut self) -> Result<QVec> {
        let warm = if self.har_started {
            self.thinning
        } else {
            self.har_started = true;
            self.burn_in
        };
        for _ in 0..warm {
            self.har_step();
        }
        for _ in 0..self.max_rejections {
            let w = self.grid.snap_to_grid(&self.har_state);
            if self.grid.contains_w(&w) {
                return Ok(self.grid.point(&w));
            }
            self.har_step();
        }
        Err(Error::RejectionBudget {
            attempts: self.max_rejections,
        })
    }
}

/// One-shot uniform draw.
pub fn uniform_sample(k: &CenteredPolytope, cfg: SamplerConfig) -> Result<QVec> {
    UniformSampler::new(k, cfg)?.draw()
}

/// One-shot signed scaled draw from a zero-centered body: a uniform point of
/// beta * C with a fair sign, landing in beta * (C ∪ -C).
pub fn sample_signed(
    c: &CenteredPolytope,
    beta: &Rat,
    cfg: SamplerConfig,
) -> Result<(QVec, Sign)> {
    if !beta.is_positive() {
        return Err(Error::Input("sampling radius beta must be positive".into()));
    }
    UniformSampler::new(c, cfg)?.draw_signed_scaled(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec_int, rat_int, rat_to_f64};

    fn unit_cube(n: usize) -> CenteredPolytope {
        let lo = vec![rat_int(0); n];
        let hi = vec![rat_int(1); n];
        CenteredPolytope::axis_box(&lo, &hi).unwrap()
    }

    #[test]
    fn rejection_draws_are_members_with_sane_mean() {
        let k = unit_cube(3);
        let mut s = UniformSampler::new(&k, SamplerConfig::new(3, 42)).unwrap();
        let mut mean = [0.0_f64; 3];
        let count = 4_000;
        for _ in 0..count {
            let x = s.draw().unwrap();
            assert!(k.contains(&x));
            for (m, xi) in mean.iter_mut().zip(&x) {
                *m += rat_to_f64(xi);
            }
        }
        for m in mean {
            assert!((m / count as f64 - 0.5).abs() < 0.05);
        }
    }

    #[test]
    fn identical_seeds_give_identical_streams() {
        let k = unit_cube(2);
        let mut s1 = UniformSampler::new(&k, SamplerConfig::new(11, 5)).unwrap();
        let mut s2 = UniformSampler::new(&k, SamplerConfig::new(11, 5)).unwrap();
        for _ in 0..16 {
            assert_eq!(s1.draw().unwrap(), s2.draw().unwrap());
        }
        let mut s3 = UniformSampler::new(&k, SamplerConfig::new(11, 6)).unwrap();
        let differs = (0..16).any(|_| s1.draw().unwrap() != s3.draw().unwrap());
        assert!(differs, "distinct streams should decorrelate");
    }

    #[test]
    fn grid_points_are_dyadic_rationals() {
        let k = unit_cube(2);
        let mut s = UniformSampler::new(&k, SamplerConfig::new(1, 1)).unwrap();
        let den_cap = BigInt::one() << (GRID_BITS + SNAP_BITS);
        for _ in 0..32 {
            let x = s.draw().unwrap();
            for xi in &x {
                assert!((&den_cap % xi.denom()).is_zero(), "denominator {}", xi.denom());
            }
        }
    }

    #[test]
    fn signed_sampling_reaches_the_asymmetric_tail() {
        // C = [-1,2]: only the positive sign branch can land in (1,2], and it
        // does so with probability (1/2) * (1/3).
        let a = QMat::from_rows(vec![qvec_int(&[1]), qvec_int(&[-1])]).unwrap();
        let c = CenteredPolytope::from_rows(a, vec![rat_int(2), rat_int(1)]).unwrap();
        let mut s = UniformSampler::new(&c, SamplerConfig::new(17, 9)).unwrap();
        let beta = rat_int(1);
        let count = 20_000;
        let mut tail = 0usize;
        for _ in 0..count {
            let (x, _sign) = s.draw_signed_scaled(&beta).unwrap();
            let (g, _) = c.gauge_star_exact(&x);
            assert!(g <= beta, "signed sample escaped beta(C ∪ -C)");
            if x[0] > rat_int(1) {
                tail += 1;
            }
        }
        let freq = tail as f64 / count as f64;
        assert!((freq - 1.0 / 6.0).abs() < 0.012, "tail frequency {freq}");
    }

    #[test]
    fn signed_sampling_requires_zero_center() {
        let k = unit_cube(2);
        assert!(sample_signed(&k, &rat_int(1), SamplerConfig::new(0, 0)).is_err());
    }

    #[test]
    fn chi_square_uniformity_on_the_square() {
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let k = unit_cube(2);
        let mut s = UniformSampler::new(&k, SamplerConfig::new(23, 1)).unwrap();
        let cells = 4usize;
        let count = 8_000usize;
        let mut hist = vec![0usize; cells * cells];
        for _ in 0..count {
            let x = s.draw().unwrap();
            let cx = ((rat_to_f64(&x[0]) * cells as f64) as usize).min(cells - 1);
            let cy = ((rat_to_f64(&x[1]) * cells as f64) as usize).min(cells - 1);
            hist[cx * cells + cy] += 1;
        }
        let expected = count as f64 / (cells * cells) as f64;
        let stat: f64 = hist
            .iter()
            .map(|&h| {
                let d = h as f64 - expected;
                d * d / expected
            })
            .sum();
        let crit = ChiSquared::new((cells * cells - 1) as f64)
            .unwrap()
            .inverse_cdf(0.99);
        assert!(stat < crit, "chi-square {stat} exceeds critical {crit}");
    }

    #[test]
    fn hit_and_run_emits_exact_members() {
        let k = unit_cube(2);
        let mut cfg = SamplerConfig::new(31, 2);
        cfg.method = SampleMethod::HitAndRun;
        let mut s = UniformSampler::new(&k, cfg).unwrap();
        let mut mean = [0.0_f64; 2];
        let count = 600;
        for _ in 0..count {
            let x = s.draw().unwrap();
            assert!(k.contains(&x));
            for (m, xi) in mean.iter_mut().zip(&x) {
                *m += rat_to_f64(xi);
            }
        }
        for m in mean {
            assert!((m / count as f64 - 0.5).abs() < 0.1);
        }
    }
}
