//! Brute-force verification: explicit point configurations against the
//! Onsager smearing inequality, product-state indirect energies against the
//! assembled bound, and a seeded Monte Carlo estimate of the smearing error
//! integral F.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, BoundBreakdown, K_FROM_K_PRIME, LIEB_OXFORD_C};
use crate::densities::{RadialDensity, RadialPotential};
use crate::error::{Error, Result};
use crate::functionals;
use crate::mu_model::TrialMu;
use crate::quad;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// N point charges at pairwise-distinct positions, common charge e.
#[derive(Debug, Clone)]
pub struct PointConfig {
    positions: Vec<[f64; 3]>,
    charge: f64,
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

impl PointConfig {
    pub fn new(positions: Vec<[f64; 3]>, charge: f64) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::TooFewPoints(positions.len()));
        }
        if !charge.is_finite() || charge < 0.0 {
            return Err(Error::NonFinite {
                name: "e",
                value: charge,
            });
        }
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                let d = dist(&positions[i], &positions[j]);
                if d < 1e-12 {
                    return Err(Error::CoincidentPoints { i, j, dist: d });
                }
            }
        }
        Ok(PointConfig { positions, charge })
    }

    /// Seeded uniform draw of `n` points inside a ball.
    pub fn random_in_ball(n: usize, radius: f64, charge: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut positions = Vec::with_capacity(n);
        while positions.len() < n {
            let p = [
                rng.gen_range(-radius..radius),
                rng.gen_range(-radius..radius),
                rng.gen_range(-radius..radius),
            ];
            if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] > radius * radius {
                continue;
            }
            if positions.iter().any(|q| dist(q, &p) < 1e-6) {
                continue;
            }
            positions.push(p);
        }
        PointConfig::new(positions, charge)
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }
}

/// Exact pairwise Coulomb sum e²Σ_{i<j} 1/|x_i−x_j|.
pub fn coulomb_sum(cfg: &PointConfig) -> f64 {
    let mut sum = 0.0;
    let p = &cfg.positions;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            sum += 1.0 / dist(&p[i], &p[j]);
        }
    }
    cfg.charge * cfg.charge * sum
}

/// How the point charges are replaced by smeared balls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smearing {
    /// every point gets the same smearing radius
    FixedRadius(f64),
    /// radius 1/(λρ(x_i)^{1/3}) tied to the local density
    LambdaRecipe(f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct OnsagerReport {
    pub coulomb_sum: f64,
    pub rhs: f64,
    pub margin: f64,
    pub d_rho_rho: f64,
    pub cross_sum: f64,
    pub self_sum: f64,
    pub smearing_radii: Vec<f64>,
}

/// ∬ f(x)·g(y−c)/|x−y| dxdy for radial f, g with centers |c| = d apart,
/// reduced through Newton's theorem and bipolar coordinates.
pub fn offcenter_interaction(f: &RadialDensity, g: &RadialDensity, d: f64) -> Result<f64> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::NonFinite { name: "d", value: d });
    }
    // integrate the more localized factor against the other's potential
    let (small, big) = if g.extent() <= f.extent() {
        (g, f)
    } else {
        (f, g)
    };
    let potential = big.potential();
    Ok(smeared_interaction(
        &potential,
        &|u| small.value(u),
        small.extent(),
        d,
    ))
}

/// ∬ ρ(x)·g(y−c)/|x−y| with ρ given through its potential and g through its
/// radial profile of support `g_extent`.
fn smeared_interaction(
    rho_potential: &RadialPotential,
    g: &dyn Fn(f64) -> f64,
    g_extent: f64,
    d: f64,
) -> f64 {
    if d < 1e-9 * g_extent.max(1e-300) {
        // concentric case
        return quad::adaptive(
            &|u| 4.0 * PI * u * u * g(u) * rho_potential.eval(u),
            0.0,
            g_extent,
            1e-10,
            1e-300,
        )
        .value;
    }
    let rule_outer = quad::gl32();
    let rule_inner = quad::gl32();
    let mut total = 0.0;
    // modest paneling keeps mildly singular profiles accurate
    let panels = 8;
    for p in 0..panels {
        let a = g_extent * p as f64 / panels as f64;
        let b = g_extent * (p + 1) as f64 / panels as f64;
        total += rule_outer.integrate(a, b, |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let lo = (d - u).abs();
            let hi = d + u;
            let inner = rule_inner.integrate(lo, hi, |s| s * rho_potential.eval(s));
            u * g(u) * inner
        });
    }
    2.0 * PI / d * total
}

/// LHS − RHS of the Onsager smearing inequality for unit charges:
/// Σ_{i<j}1/|x_i−x_j| ≥ −D(ρ,ρ) + 2Σ_i D(ρ,μ_{x_i}) − Σ_i D(μ_{x_i},μ_{x_i}).
pub fn onsager_margin(
    cfg: &PointConfig,
    rho: &RadialDensity,
    mu: &TrialMu,
    smearing: Smearing,
) -> Result<OnsagerReport> {
    if (cfg.charge - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitCharge(cfg.charge));
    }
    let radii: Vec<f64> = match smearing {
        Smearing::FixedRadius(r0) => {
            if !(r0 > 0.0) {
                return Err(Error::NonPositive {
                    name: "r0",
                    value: r0,
                });
            }
            vec![r0; cfg.positions.len()]
        }
        Smearing::LambdaRecipe(lambda) => {
            if !(lambda > 0.0) {
                return Err(Error::NonPositive {
                    name: "lambda",
                    value: lambda,
                });
            }
            cfg.positions
                .iter()
                .enumerate()
                .map(|(index, p)| {
                    let local = rho.value((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt());
                    if local <= 0.0 {
                        Err(Error::ZeroDensityAtPoint { index })
                    } else {
                        Ok(1.0 / (lambda * local.cbrt()))
                    }
                })
                .collect::<Result<_>>()?
        }
    };
    let lhs = coulomb_sum(cfg);
    let d_rho_rho = functionals::direct_energy(rho, rho)?.value;
    let potential = rho.potential();
    let mut cross_sum = 0.0;
    let mut self_sum = 0.0;
    for (p, &r0) in cfg.positions.iter().zip(&radii) {
        let d = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let profile = |u: f64| mu.density(u / r0) / r0.powi(3);
        let interaction = smeared_interaction(&potential, &profile, r0, d);
        cross_sum += 0.5 * interaction;
        self_sum += mu.self_energy() / r0;
    }
    let rhs = -d_rho_rho + 2.0 * cross_sum - self_sum;
    Ok(OnsagerReport {
        coulomb_sum: lhs,
        rhs,
        margin: lhs - rhs,
        d_rho_rho,
        cross_sum,
        self_sum,
        smearing_radii: radii,
    })
}

// ---------------------------------------------------------------------------
// Product states
// ---------------------------------------------------------------------------

/// Normalized radial orbital families for the product-state oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Orbital {
    /// φ(r) = (c³/π)^{1/2} e^{−cr}
    Exponential { c: f64 },
    /// φ(r) = (πs²)^{−3/4} e^{−r²/(2s²)}
    Gaussian { s: f64 },
}

impl Orbital {
    /// |φ|² as a unit-charge radial density.
    pub fn density(&self) -> Result<RadialDensity> {
        match self {
            Orbital::Exponential { c } => {
                RadialDensity::exponential(c.powi(3) / PI, 2.0 * c)
            }
            Orbital::Gaussian { s } => {
                RadialDensity::gaussian(1.0 / (SQRT_PI.powi(3) * s.powi(3)), *s)
            }
        }
    }
}

/// ψ = Πφ(x_i): N particles in the same normalized orbital.
#[derive(Debug, Clone)]
pub struct ProductState {
    orbital_density: RadialDensity,
    n: usize,
}

impl ProductState {
    pub fn new(orbital: Orbital, n: usize) -> Result<Self> {
        Ok(ProductState {
            orbital_density: orbital.density()?,
            n,
        })
    }

    /// Build from an explicit |φ|² profile; rejects non-normalized orbitals.
    pub fn from_orbital_density(orbital_density: RadialDensity, n: usize) -> Result<Self> {
        let norm = orbital_density.total_charge();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NonNormalizedOrbital { norm });
        }
        Ok(ProductState { orbital_density, n })
    }

    pub fn particle_count(&self) -> usize {
        self.n
    }

    pub fn orbital_density(&self) -> &RadialDensity {
        &self.orbital_density
    }

    /// Single-particle number density N|φ|².
    pub fn number_density(&self) -> Result<RadialDensity> {
        self.orbital_density.scale_amplitude(self.n as f64)
    }

    /// J = ∬|φ(x)|²|φ(y)|²/|x−y| dxdy.
    pub fn pair_integral(&self) -> Result<f64> {
        Ok(2.0 * functionals::direct_energy(&self.orbital_density, &self.orbital_density)?.value)
    }
}

/// Indirect energy of the product state with unit charges:
/// ⟨Σ_{i<j}1/|x_i−x_j|⟩ − D(ρ,ρ) = −(N/2)·J (zero when there are no pairs).
pub fn indirect_energy_product(state: &ProductState) -> Result<f64> {
    if state.n < 2 {
        return Ok(0.0);
    }
    Ok(-(state.n as f64) / 2.0 * state.pair_integral()?)
}

/// One row of the theorem check for a product state.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremCheck {
    pub n: usize,
    pub e: f64,
    pub indirect_energy: f64,
    pub l43: f64,
    pub k_prime: f64,
    pub bound: Option<BoundBreakdown>,
    pub lieb_oxford: f64,
    pub margin_bound: f64,
    pub margin_lieb_oxford: f64,
}

/// Evaluates E for the product state at charge e and checks it against the
/// optimized three-term bound and the −1.68e^{2/3}L reference.
pub fn check_theorem(state: &ProductState, e: f64) -> Result<TheoremCheck> {
    if !e.is_finite() || e < 0.0 {
        return Err(Error::NonFinite { name: "e", value: e });
    }
    if e == 0.0 || state.n == 0 {
        return Ok(TheoremCheck {
            n: state.n,
            e,
            indirect_energy: 0.0,
            l43: 0.0,
            k_prime: 0.0,
            bound: None,
            lieb_oxford: 0.0,
            margin_bound: 0.0,
            margin_lieb_oxford: 0.0,
        });
    }
    let energy = e * e * indirect_energy_product(state)?;
    let rho = state.orbital_density.scale_amplitude(state.n as f64 * e)?;
    let l = functionals::l43(&rho)?.value;
    let k_prime = functionals::k_fourier(&rho)?.value;
    let bound = bounds::optimize_alpha(l, k_prime, e)?;
    let lo = bounds::lieb_oxford_bound(l, e, LIEB_OXFORD_C);
    Ok(TheoremCheck {
        n: state.n,
        e,
        indirect_energy: energy,
        l43: l,
        k_prime,
        margin_bound: energy - bound.total,
        margin_lieb_oxford: energy - lo,
        bound: Some(bound),
        lieb_oxford: lo,
    })
}

// ---------------------------------------------------------------------------
// Monte Carlo estimate of F
// ---------------------------------------------------------------------------

/// Sampling parameters; a fixed (seed, samples) pair is bit-reproducible
/// regardless of thread count.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MCConfig {
    pub seed: u64,
    pub samples: u64,
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig {
            seed: 1,
            samples: 400_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

const MC_BATCH: u64 = 8192;

struct RadialSampler {
    edges: Vec<f64>,
    cumulative: Vec<f64>,
    total: f64,
}

impl RadialSampler {
    /// Panel table for sampling r ∝ r²ρ(r)^{4/3}; within one panel the draw
    /// is uniform, and `density_at` returns the exact sampling pdf so the
    /// estimator stays unbiased.
    fn new(rho: &RadialDensity) -> Self {
        let extent = rho.extent();
        let n = 16384usize;
        let r_lo = extent * 1e-6;
        let step = (extent / r_lo).ln() / (n - 1) as f64;
        let mut edges = Vec::with_capacity(n + 1);
        edges.push(0.0);
        for i in 0..n {
            edges.push(r_lo * (i as f64 * step).exp());
        }
        let rule = quad::gl8();
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in edges.windows(2) {
            acc += rule.integrate(w[0], w[1], |r| r * r * rho.value(r).powf(4.0 / 3.0));
            cumulative.push(acc);
        }
        RadialSampler {
            edges,
            cumulative,
            total: acc,
        }
    }

    fn sample(&self, u: f64) -> (f64, f64) {
        let target = u * self.total;
        let mut lo = 0;
        let mut hi = self.cumulative.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cumulative[mid] <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mass = self.cumulative[hi] - self.cumulative[lo];
        let width = self.edges[hi] - self.edges[lo];
        let frac = if mass > 0.0 {
            (target - self.cumulative[lo]) / mass
        } else {
            0.5
        };
        let r = self.edges[lo] + frac * width;
        let pdf = mass / (self.total * width);
        (r, pdf)
    }
}

/// Importance-sampled estimate of
/// F = ∬ ρ(y)·λρ(x)^{4/3}·R(λρ(x)^{1/3}(x−y)) dy dx:
/// x drawn ∝ r²ρ^{4/3}, y uniform in the smearing ball around x.
pub fn mc_smearing_f(
    rho: &RadialDensity,
    lambda: f64,
    mu: &TrialMu,
    cfg: MCConfig,
) -> Result<MCEstimate> {
    if !(lambda > 0.0) {
        return Err(Error::NonPositive {
            name: "lambda",
            value: lambda,
        });
    }
    let sampler = RadialSampler::new(rho);
    let batches = cfg.samples.div_ceil(MC_BATCH).max(1);
    let partials: Vec<(f64, f64)> = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(batch + 1);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..MC_BATCH {
                let (r, pdf) = sampler.sample(rng.gen::<f64>());
                let rho_x = rho.value(r);
                if rho_x <= 0.0 || pdf <= 0.0 {
                    continue;
                }
                let r0 = 1.0 / (lambda * rho_x.cbrt());
                // u uniform in the unit ball
                let z = 2.0 * rng.gen::<f64>() - 1.0;
                let phi = 2.0 * PI * rng.gen::<f64>();
                let t = rng.gen::<f64>().cbrt();
                let sin_theta = (1.0 - z * z).sqrt();
                let u = [t * sin_theta * phi.cos(), t * sin_theta * phi.sin(), t * z];
                let y_norm = ((u[0] * r0) * (u[0] * r0)
                    + (u[1] * r0) * (u[1] * r0)
                    + (r + u[2] * r0) * (r + u[2] * r0))
                    .sqrt();
                let remainder = mu.remainder(t.max(1e-300)).unwrap_or(0.0);
                let g = 4.0 * PI * r * r / pdf * (4.0 * PI / 3.0) * rho_x.cbrt()
                    * rho.value(y_norm)
                    * remainder
                    / (lambda * lambda);
                sum += g;
                sum_sq += g * g;
            }
            (sum, sum_sq)
        })
        .collect();
    let n = (batches * MC_BATCH) as f64;
    let (sum, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(a, b), (s, q)| (a + s, b + q));
    let mean = sum / n;
    let variance = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(MCEstimate {
        mean,
        std_error: (variance / n).sqrt(),
        samples: batches * MC_BATCH,
        seed: cfg.seed,
    })
}

/// Outcome of the F ≤ M1L/λ² + λ^{−3/2}√K[√F + (M2/λ)√L] check.
#[derive(Debug, Clone, Serialize)]
pub struct SmearingBoundReport {
    pub f_estimate: MCEstimate,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    /// F/(M1·L/λ²): tends to 1 from below as λ grows
    pub leading_term_ratio: f64,
    pub lambda: f64,
}

/// Monte Carlo check of the smearing error inequality at one λ.
pub fn check_smearing_bound(
    rho: &RadialDensity,
    lambda: f64,
    mu: &TrialMu,
    cfg: MCConfig,
) -> Result<SmearingBoundReport> {
    let f = mc_smearing_f(rho, lambda, mu, cfg)?;
    let l = functionals::l43(rho)?.value;
    let k = K_FROM_K_PRIME * functionals::k_fourier(rho)?.value;
    let m1 = mu.m1();
    let m2 = mu.m2();
    let f_val = f.mean.max(0.0);
    let rhs = m1 * l / (lambda * lambda)
        + lambda.powf(-1.5) * k.sqrt() * (f_val.sqrt() + m2 / lambda * l.sqrt());
    let budget = 3.0 * f.std_error;
    let leading = m1 * l / (lambda * lambda);
    Ok(SmearingBoundReport {
        rhs,
        slack: rhs - f.mean,
        holds: f.mean <= rhs + budget,
        leading_term_ratio: f.mean / leading,
        lambda,
        f_estimate: f,
    })
}
