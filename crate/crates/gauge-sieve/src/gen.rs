//! Deterministic instance generators for the test corpus and benchmarks.
//!
//! Every generator is a pure function of (kind, dimension, seed, options):
//! the same inputs reproduce the same instance byte for byte. Planted kinds
//! certify their own label with the exact oracles before returning, so a
//! generated file is trustworthy evidence, not just a random draw.

use num_traits::{One, Signed};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::CenteredPolytope;
use crate::instance::{Instance, ParamsJson};
use crate::ip::{barycentric_blowup, deep_region};
use crate::lattice::{LatticeBasis, Subspace};
use crate::oracle::{ip_brute, svp_brute};
use crate::rational::{self, rat, rat_from_f64, rat_int, QMat, QVec, Rat};
use crate::sampling::{derive_rng, streams};

/// Draws with smaller determinant magnitude count as degenerate.
const MIN_BASIS_DET: (i64, i64) = (1, 4);
/// Attempts before a certification loop gives up.
const MAX_DRAWS: usize = 64;

/// Families the generator can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// Random body, basis, and target; optionally planted near the lattice.
    RandomCvp,
    /// Feasible body whose deep region provably contains a lattice point.
    PlantedIp,
    /// Body whose barycentric blowup is provably integer-free.
    EmptyIp,
}

impl GenKind {
    pub fn name(self) -> &'static str {
        match self {
            GenKind::RandomCvp => "random-cvp",
            GenKind::PlantedIp => "planted-ip",
            GenKind::EmptyIp => "empty-ip",
        }
    }
}

impl std::str::FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-cvp" => Ok(GenKind::RandomCvp),
            "planted-ip" => Ok(GenKind::PlantedIp),
            "empty-ip" => Ok(GenKind::EmptyIp),
            other => Err(Error::Input(format!("unknown generator kind {other:?}"))),
        }
    }
}

/// Knobs shared by all kinds. `eps` lands in the instance parameters and
/// defaults per kind: 0.25 for CVP, 0.5 for the feasibility kinds.
#[derive(Debug, Clone)]
pub struct GenOptions {
    pub eps: Option<f64>,
    /// Place the CVP target within (3/4) lambda_1 of a lattice point, so
    /// exact mode at t = 2 applies; records exact_t in the parameters.
    pub plant: bool,
    /// Attach a random integer objective with delta = 1/10.
    pub objective: bool,
    /// Dimension cap for the certifying oracles.
    pub oracle_cap: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            eps: None,
            plant: false,
            objective: false,
            oracle_cap: 6,
        }
    }
}

/// A zero-centered sheared box with its exact symmetry measure and exact
/// barycenter. Shearing preserves both, so they are certified by
/// construction rather than estimated.
#[derive(Debug, Clone)]
pub struct GammaBody {
    pub body: CenteredPolytope,
    pub gamma: Rat,
    pub barycenter: QVec,
}

/// The symmetric cube [-1, 1]^n.
pub fn cube(n: usize) -> Result<CenteredPolytope> {
    CenteredPolytope::axis_box_at_origin(&vec![rat_int(-1); n], &vec![rat_int(1); n])
}

/// The asymmetric box [-1, 2]^n, the standard off-center test body.
pub fn skew_box(n: usize) -> Result<CenteredPolytope> {
    CenteredPolytope::axis_box_at_origin(&vec![rat_int(-1); n], &vec![rat_int(2); n])
}

/// Random unimodular integer matrix built from a few elementary row
/// operations, so its inverse is integer as well.
fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> QMat {
    let mut rows: Vec<QVec> = (0..n)
        .map(|i| (0..n).map(|j| rat_int((i == j) as i64)).collect())
        .collect();
    if n == 1 {
        if rng.gen::<bool>() {
            rows[0][0] = rat_int(-1);
        }
        return QMat::from_rows(rows).expect("square integer matrix");
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let sign = if rng.gen::<bool>() { 1 } else { -1 };
        let delta: QVec = rows[j].iter().map(|v| v * rat_int(sign)).collect();
        rows[i] = rational::add(&rows[i], &delta);
    }
    QMat::from_rows(rows).expect("square integer matrix")
}

/// Random zero-centered body with exact symmetry at least 1/2: a box
/// [-1, u_i]^n with u_i drawn from {1, 9/8, 5/4, 11/8, 3/2}, redrawn until
/// the exact product formula clears 1/2, then sheared by a random
/// unimodular map.
pub fn random_gamma_body(n: usize, rng: &mut ChaCha8Rng) -> Result<GammaBody> {
    let menu = [rat_int(1), rat(9, 8), rat(5, 4), rat(11, 8), rat(3, 2)];
    let half = rat(1, 2);
    let (uppers, gamma) = loop {
        let uppers: Vec<Rat> = (0..n)
            .map(|_| menu[rng.gen_range(0..menu.len())].clone())
            .collect();
        // For the box [-1, u] each axis contributes 2 min(1, u) / (1 + u)
        // to the symmetric volume fraction.
        let gamma = uppers
            .iter()
            .fold(Rat::one(), |acc, u| acc * rat_int(2) / (Rat::one() + u));
        if gamma >= half {
            break (uppers, gamma);
        }
    };
    let shear = random_unimodular(n, rng);
    // The body is {x : (Sx)_i <= u_i, -(Sx)_i <= 1}, the preimage of the box
    // under the shear; linear maps preserve gamma and the barycenter.
    let mut rows = Vec::with_capacity(2 * n);
    let mut offs = Vec::with_capacity(2 * n);
    for i in 0..n {
        rows.push(shear.row(i).to_vec());
        offs.push(uppers[i].clone());
    }
    for i in 0..n {
        rows.push(rational::neg(shear.row(i)));
        offs.push(Rat::one());
    }
    let body = CenteredPolytope::from_rows(QMat::from_rows(rows)?, offs)?;
    let box_center: QVec = uppers.iter().map(|u| (u - Rat::one()) / rat_int(2)).collect();
    let inv = shear
        .inverse()
        .ok_or_else(|| Error::Internal("unimodular shear lost its inverse".into()))?;
    Ok(GammaBody {
        body,
        gamma,
        barycenter: inv.matvec(&box_center),
    })
}

/// Random basis with entries in eighths over [-3, 3]. Draws whose
/// determinant magnitude falls below 1/4 count as degenerate and are
/// resampled along with the exactly singular ones.
pub fn random_basis(n: usize, rng: &mut ChaCha8Rng) -> Result<LatticeBasis> {
    let floor = rat(MIN_BASIS_DET.0, MIN_BASIS_DET.1);
    for _ in 0..MAX_DRAWS * MAX_DRAWS {
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let row: QVec = (0..n).map(|_| rat(rng.gen_range(-24..=24), 8)).collect();
            rows.push(row);
        }
        let mat = QMat::from_rows(rows)?;
        if mat.det().abs() < floor {
            continue;
        }
        if let Ok(basis) = LatticeBasis::new(mat) {
            return Ok(basis);
        }
    }
    Err(Error::Internal(
        "basis sampling kept hitting degenerate draws".into(),
    ))
}

/// Uniform dyadic point in the box scaled by `factor` about the body's
/// stored interior point.
pub fn random_target(body: &CenteredPolytope, factor: i64, rng: &mut ChaCha8Rng) -> QVec {
    let (lo, hi) = body.ambient_box();
    let c = body.center();
    let f = rat_int(factor);
    (0..body.dim())
        .map(|i| {
            let lo2 = &c[i] + &f * (&lo[i] - &c[i]);
            let hi2 = &c[i] + &f * (&hi[i] - &c[i]);
            let t = rat(rng.gen_range(0..=4096), 4096);
            &lo2 + (hi2 - &lo2) * t
        })
        .collect()
}

/// Random one-dimensional rational subspace with small integer direction.
pub fn random_line_subspace(n: usize, rng: &mut ChaCha8Rng) -> Result<Subspace> {
    loop {
        let v: QVec = (0..n).map(|_| rat_int(rng.gen_range(-3..=3))).collect();
        if !rational::is_zero_vec(&v) {
            return Subspace::new(vec![v], n);
        }
    }
}

/// Random lattice point with coefficients in [-2, 2].
fn random_lattice_point(basis: &LatticeBasis, rng: &mut ChaCha8Rng) -> QVec {
    let coeffs: Vec<i64> = (0..basis.dim()).map(|_| rng.gen_range(-2..=2)).collect();
    basis.point(&coeffs)
}

fn random_direction(n: usize, rng: &mut ChaCha8Rng) -> QVec {
    loop {
        let v: QVec = (0..n).map(|_| rat_int(rng.gen_range(-3..=3))).collect();
        if !rational::is_zero_vec(&v) {
            return v;
        }
    }
}

/// Target within (3/4) lambda_1 of a lattice point in gauge distance, so
/// the distance is at most 2 lambda_1 and exact CVP at t = 2 is valid.
pub fn plant_cvp_target(
    body: &CenteredPolytope,
    basis: &LatticeBasis,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<QVec> {
    let lambda1 = svp_brute(body, basis, cap)?.value;
    let fractions = [rat(1, 4), rat(1, 2), rat(3, 4)];
    let f = fractions[rng.gen_range(0..fractions.len())].clone();
    let d0 = random_direction(body.dim(), rng);
    let g0 = body.gauge_exact(&d0);
    let offset = rational::scale(&d0, &(f * lambda1 / g0));
    Ok(rational::add(&random_lattice_point(basis, rng), &offset))
}

fn random_cvp_body(n: usize, rng: &mut ChaCha8Rng) -> Result<CenteredPolytope> {
    match rng.gen_range(0..3) {
        0 => cube(n),
        1 => skew_box(n),
        _ => Ok(random_gamma_body(n, rng)?.body),
    }
}

fn random_cvp(n: usize, rng: &mut ChaCha8Rng, opts: &GenOptions) -> Result<Instance> {
    let body = random_cvp_body(n, rng)?;
    let basis = random_basis(n, rng)?;
    let target = if opts.plant {
        plant_cvp_target(&body, &basis, opts.oracle_cap, rng)?
    } else {
        random_target(&body, 2, rng)
    };
    Ok(Instance {
        body,
        basis,
        target: Some(target),
        subspace: None,
        objective: None,
        params: ParamsJson {
            eps: Some(opts.eps.unwrap_or(0.25)),
            exact_t: opts.plant.then_some(2.0),
            ..ParamsJson::default()
        },
    })
}

/// Translates a zero-centered body by a lattice point and stores the exact
/// barycenter as the interior point, so downstream certification can
/// recompute the deep region from the file alone.
fn planted_ip(n: usize, rng: &mut ChaCha8Rng, eps: &Rat, cap: usize) -> Result<Instance> {
    for _ in 0..MAX_DRAWS {
        let gb = random_gamma_body(n, rng)?;
        let basis = random_basis(n, rng)?;
        let y = random_lattice_point(&basis, rng);
        let shifted_offs = {
            let ay = gb.body.normals().matvec(&y);
            (0..gb.body.num_facets())
                .map(|i| &gb.body.offsets()[i] + &ay[i])
                .collect::<QVec>()
        };
        let center = rational::add(&gb.barycenter, &y);
        let body =
            CenteredPolytope::with_interior_point(gb.body.normals().clone(), shifted_offs, center)?;
        let deep = deep_region(&body, eps, body.center())?;
        match ip_brute(&deep, &basis, cap) {
            Ok(Some(_)) => {
                return Ok(Instance {
                    body,
                    basis,
                    target: None,
                    subspace: None,
                    objective: None,
                    params: ParamsJson::default(),
                })
            }
            Ok(None) => continue,
            Err(Error::EnumerationTooLarge { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal(
        "planted feasibility draws kept failing certification".into(),
    ))
}

/// A sheared box sitting strictly inside one lattice cell, with margins
/// wide enough that even the (1 + eps)-blowup about the barycenter misses
/// every lattice point; certified by enumeration before returning.
fn empty_ip(n: usize, rng: &mut ChaCha8Rng, eps: &Rat, cap: usize) -> Result<Instance> {
    let margins = [rat(1, 5), rat(9, 40), rat(1, 4)];
    for _ in 0..MAX_DRAWS {
        let basis = random_basis(n, rng)?;
        let alphas: Vec<Rat> = (0..n)
            .map(|_| margins[rng.gen_range(0..margins.len())].clone())
            .collect();
        let betas: Vec<Rat> = (0..n)
            .map(|_| margins[rng.gen_range(0..margins.len())].clone())
            .collect();
        let shift: Vec<Rat> = (0..n).map(|_| rat_int(rng.gen_range(-2..=2))).collect();
        // Coefficient-space box [alpha + w, 1 - beta + w], expressed through
        // the inverse basis rows so the body lives in ambient space.
        let inv = basis.inverse();
        let mut rows = Vec::with_capacity(2 * n);
        let mut offs = Vec::with_capacity(2 * n);
        for i in 0..n {
            rows.push(inv.row(i).to_vec());
            offs.push(Rat::one() - &betas[i] + &shift[i]);
        }
        for i in 0..n {
            rows.push(rational::neg(inv.row(i)));
            offs.push(-(&alphas[i] + &shift[i]));
        }
        let mid: QVec = (0..n)
            .map(|i| (&alphas[i] + Rat::one() - &betas[i]) / rat_int(2) + &shift[i])
            .collect();
        let center = basis.matrix().matvec(&mid);
        let body = CenteredPolytope::with_interior_point(QMat::from_rows(rows)?, offs, center)?;
        let blowup = barycentric_blowup(&body, eps, body.center())?;
        match ip_brute(&blowup, &basis, cap) {
            Ok(None) => {
                return Ok(Instance {
                    body,
                    basis,
                    target: None,
                    subspace: None,
                    objective: None,
                    params: ParamsJson::default(),
                })
            }
            Ok(Some(_)) => continue,
            Err(Error::EnumerationTooLarge { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Internal(
        "empty feasibility draws kept failing certification".into(),
    ))
}

/// Generates one instance. The RNG stream depends only on the seed, so the
/// same (kind, n, seed, options) reproduce the identical instance.
pub fn generate(kind: GenKind, n: usize, seed: u64, opts: &GenOptions) -> Result<Instance> {
    if n == 0 {
        return Err(Error::Input("dimension must be at least 1".into()));
    }
    if kind != GenKind::RandomCvp && n > opts.oracle_cap {
        return Err(Error::Input(format!(
            "planted kinds need n <= {} for oracle certification, got {n}",
            opts.oracle_cap
        )));
    }
    let mut rng = derive_rng(seed, streams::GEN);
    let mut instance = match kind {
        GenKind::RandomCvp => random_cvp(n, &mut rng, opts)?,
        GenKind::PlantedIp | GenKind::EmptyIp => {
            let eps_f = opts.eps.unwrap_or(0.5);
            if !(eps_f > 0.0 && eps_f <= 0.5) {
                return Err(Error::Input(
                    "feasibility tolerance eps must lie in (0, 1/2]".into(),
                ));
            }
            let eps = rat_from_f64(eps_f)?;
            let mut inst = if kind == GenKind::PlantedIp {
                planted_ip(n, &mut rng, &eps, opts.oracle_cap)?
            } else {
                empty_ip(n, &mut rng, &eps, opts.oracle_cap)?
            };
            inst.params.eps = Some(eps_f);
            inst
        }
    };
    if opts.objective {
        instance.objective = Some((random_direction(n, &mut rng), rat(1, 10)));
    }
    instance.params.seed = Some(seed);
    Ok(instance)
}
