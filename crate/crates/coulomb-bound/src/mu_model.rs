//! Trial smearing charge distributions μ: radial, unit mass, supported in
//! the unit ball, together with the derived quantities φ, R, M1, M2 and the
//! self-energy D(μ,μ).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::quad;

/// Constants derived from one trial distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuConstants {
    /// M1 = (2π/3)∫_{|z|<1}|z|²μ(z)dz
    pub m1: f64,
    /// M2 = (∫|z|⁴R(z)²dz)^{1/2}
    pub m2: f64,
    /// D(μ,μ) = ½∫∫μ(x)μ(y)/|x-y|
    pub d_mu: f64,
}

#[derive(Debug, Clone)]
enum Profile {
    Uniform,
    /// μ(t) ∝ (1-t)^p, p ≥ 0
    PowerLaw { p: f64, coeff: f64 },
    /// linear interpolation of nonnegative samples on [0,1]
    Grid { t: Vec<f64>, v: Vec<f64> },
}

/// Cumulative tables on [0,1]: inner mass, outer shell integral and the
/// moment ∫_0^τ u R(u) du used by the off-center Coulomb reductions.
#[derive(Debug, Clone)]
struct Tables {
    inner_mass: Pchip,
    outer_shell: Pchip,
    remainder_moment: Pchip,
}

/// A bounded radial unit-mass charge profile supported in the unit ball.
#[derive(Debug, Clone)]
pub struct TrialMu {
    profile: Profile,
    tables: Option<Tables>,
    constants: MuConstants,
    renormalization: f64,
}

impl TrialMu {
    /// Uniform distribution on the unit ball, μ = 3/(4π).
    pub fn uniform() -> Self {
        TrialMu {
            profile: Profile::Uniform,
            tables: None,
            constants: MuConstants {
                m1: 2.0 * PI / 5.0,
                m2: (23.0 * PI / 2310.0).sqrt(),
                d_mu: 0.6,
            },
            renormalization: 1.0,
        }
    }

    /// μ(t) = c_p (1-t)^p with c_p = (p+1)(p+2)(p+3)/(8π).
    pub fn power_law(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::NonFinite { name: "p", value: p });
        }
        let coeff = (p + 1.0) * (p + 2.0) * (p + 3.0) / (8.0 * PI);
        Self::finish(Profile::PowerLaw { p, coeff }, 1.0)
    }

    /// Sampled profile on [0,1]; automatically renormalized to unit mass.
    /// The applied renormalization factor is available via
    /// [`TrialMu::renormalization`].
    pub fn from_grid(t: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if t.len() < 2 {
            return Err(Error::GridTooShort { min: 2, got: t.len() });
        }
        if t.len() != v.len() {
            return Err(Error::InvalidDescriptor(format!(
                "mu grid length mismatch: {} abscissae vs {} values",
                t.len(),
                v.len()
            )));
        }
        if !(t[0] >= 0.0) || t[t.len() - 1] > 1.0 {
            return Err(Error::InvalidDescriptor(
                "mu grid abscissae must lie in [0,1]".into(),
            ));
        }
        for i in 1..t.len() {
            if !(t[i] > t[i - 1]) {
                return Err(Error::GridNotIncreasing { index: i });
            }
        }
        for (i, &x) in v.iter().enumerate() {
            if !(x >= 0.0) || !x.is_finite() {
                return Err(Error::GridNegativeValue { index: i });
            }
        }
        let raw = Profile::Grid { t, v };
        let mass = quad::adaptive(&|s| 4.0 * PI * s * s * raw.value(s), 0.0, 1.0, 1e-13, 1e-300);
        if !(mass.value > 0.0) {
            return Err(Error::InvalidTotalCharge(mass.value));
        }
        let factor = 1.0 / mass.value;
        let Profile::Grid { t, v } = raw else { unreachable!() };
        let v: Vec<f64> = v.into_iter().map(|x| x * factor).collect();
        Self::finish(Profile::Grid { t, v }, factor)
    }

    fn finish(profile: Profile, renormalization: f64) -> Result<Self> {
        let tables = Tables::build(&profile);
        let phi = |t: f64| tables.phi(t);
        let m1 = quad::adaptive(
            &|t| (2.0 * PI / 3.0) * 4.0 * PI * t.powi(4) * profile.value(t),
            0.0,
            1.0,
            1e-12,
            1e-300,
        )
        .value;
        let m2_sq = quad::adaptive(
            &|t| {
                let r = (1.0 / t - phi(t)).max(0.0);
                4.0 * PI * t.powi(6) * r * r
            },
            1e-12,
            1.0,
            1e-12,
            1e-300,
        )
        .value;
        let d_mu = quad::adaptive(
            &|t| 2.0 * PI * t * t * profile.value(t) * phi(t),
            0.0,
            1.0,
            1e-12,
            1e-300,
        )
        .value;
        Ok(TrialMu {
            profile,
            tables: Some(tables),
            constants: MuConstants {
                m1,
                m2: m2_sq.max(0.0).sqrt(),
                d_mu,
            },
            renormalization,
        })
    }

    /// μ(|z|); zero outside the unit ball.
    pub fn density(&self, t: f64) -> f64 {
        self.profile.value(t)
    }

    /// Renormalization factor applied to a grid profile (1 otherwise).
    pub fn renormalization(&self) -> f64 {
        self.renormalization
    }

    /// φ(t) = ∫ min(1/t, 1/|y|) μ(y) dy; equals 1/t outside the support.
    pub fn phi(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::NonPositive { name: "t", value: t });
        }
        Ok(self.phi_unchecked(t))
    }

    fn phi_unchecked(&self, t: f64) -> f64 {
        if t >= 1.0 {
            return 1.0 / t;
        }
        match (&self.profile, &self.tables) {
            (Profile::Uniform, _) => 1.5 - 0.5 * t * t,
            (_, Some(tables)) => tables.phi(t),
            _ => unreachable!("non-uniform profiles always carry tables"),
        }
    }

    /// R(t) = 1/t − φ(t); identically zero for t ≥ 1, in [0, 1/t) below.
    pub fn remainder(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::NonPositive { name: "t", value: t });
        }
        if t >= 1.0 {
            return Ok(0.0);
        }
        Ok((1.0 / t - self.phi_unchecked(t)).max(0.0))
    }

    /// W(τ) = ∫_0^τ u R(u) du, saturating at τ = 1.
    pub fn remainder_moment(&self, tau: f64) -> f64 {
        let tau = tau.max(0.0);
        match (&self.profile, &self.tables) {
            (Profile::Uniform, _) => {
                let t = tau.min(1.0);
                t - 0.75 * t * t + 0.125 * t.powi(4)
            }
            (_, Some(tables)) => tables.remainder_moment.eval(tau.min(1.0)),
            _ => unreachable!(),
        }
    }

    /// M1 = (2π/3)∫|z|²μ(z)dz.
    pub fn m1(&self) -> f64 {
        self.constants.m1
    }

    /// M2 = (∫|z|⁴R(z)²dz)^{1/2} = (4π∫_0^1 t⁶R(t)²dt)^{1/2}.
    pub fn m2(&self) -> f64 {
        self.constants.m2
    }

    /// D(μ,μ) = ½∫∫μ(x)μ(y)/|x−y|dxdy.
    pub fn self_energy(&self) -> f64 {
        self.constants.d_mu
    }

    /// D(μ,μ)^{2/3} M1^{1/3}, the quantity minimized by the uniform ball.
    pub fn objective(&self) -> f64 {
        self.constants.d_mu.powf(2.0 / 3.0) * self.constants.m1.cbrt()
    }

    pub fn constants(&self) -> MuConstants {
        self.constants
    }
}

impl Profile {
    fn value(&self, t: f64) -> f64 {
        if t > 1.0 {
            return 0.0;
        }
        match self {
            Profile::Uniform => 3.0 / (4.0 * PI),
            Profile::PowerLaw { p, coeff } => {
                let base = (1.0 - t).max(0.0);
                if *p == 0.0 {
                    *coeff
                } else {
                    coeff * base.powf(*p)
                }
            }
            Profile::Grid { t: ts, v } => {
                let t = t.max(0.0);
                if t <= ts[0] {
                    return v[0];
                }
                if t >= ts[ts.len() - 1] {
                    return v[v.len() - 1];
                }
                let i = match ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
                    Ok(i) => return v[i],
                    Err(i) => i - 1,
                };
                let w = (t - ts[i]) / (ts[i + 1] - ts[i]);
                v[i] * (1.0 - w) + v[i + 1] * w
            }
        }
    }
}

impl Tables {
    fn build(profile: &Profile) -> Self {
        let n = 4000usize;
        let h = 1.0 / n as f64;
        let rule = quad::gl8();
        let nodes: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        // inner_mass(t) = 4π∫_0^t s²μ ds
        let mut inner = vec![0.0; n + 1];
        for i in 1..=n {
            inner[i] = inner[i - 1]
                + rule.integrate(nodes[i - 1], nodes[i], |s| {
                    4.0 * PI * s * s * profile.value(s)
                });
        }
        // outer_shell(t) = 4π∫_t^1 sμ ds
        let mut outer = vec![0.0; n + 1];
        for i in (0..n).rev() {
            outer[i] = outer[i + 1]
                + rule.integrate(nodes[i], nodes[i + 1], |s| 4.0 * PI * s * profile.value(s));
        }
        let inner_mass = Pchip::new(nodes.clone(), inner.clone());
        let outer_shell = Pchip::new(nodes.clone(), outer.clone());
        // moment(t) = ∫_0^t u R(u) du with R = 1/u − inner/u − outer
        let phi = |u: f64| {
            if u <= 0.0 {
                outer[0]
            } else {
                inner_mass.eval(u) / u + outer_shell.eval(u)
            }
        };
        let mut moment = vec![0.0; n + 1];
        for i in 1..=n {
            moment[i] = moment[i - 1]
                + rule.integrate(nodes[i - 1], nodes[i], |u| {
                    (1.0 - u * phi(u)).max(0.0)
                });
        }
        let remainder_moment = Pchip::new(nodes, moment);
        Tables {
            inner_mass,
            outer_shell,
            remainder_moment,
        }
    }

    fn phi(&self, t: f64) -> f64 {
        if t >= 1.0 {
            1.0 / t
        } else if t <= 0.0 {
            self.outer_shell.eval(0.0)
        } else {
            self.inner_mass.eval(t) / t + self.outer_shell.eval(t)
        }
    }
}

/// Potential of a uniform charge of total 4π/3 in the unit ball:
/// Φ(z) = 4π/3 + (4π/6)(1−z²) inside, (4π/3)/z outside.
pub fn potential_phi_ball(z: f64) -> f64 {
    if z < 1.0 {
        4.0 * PI / 3.0 + 4.0 * PI / 6.0 * (1.0 - z * z)
    } else {
        4.0 * PI / 3.0 / z
    }
}

// ---------------------------------------------------------------------------
// JSON descriptor
// ---------------------------------------------------------------------------

/// Wire format: `{"type":"uniform"}`, `{"type":"power_law","p":..}`,
/// `{"type":"grid","t":[..],"mu":[..]}` (auto-renormalized).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MuDescriptor {
    Uniform,
    PowerLaw { p: f64 },
    Grid { t: Vec<f64>, mu: Vec<f64> },
}

impl MuDescriptor {
    pub fn parse(json: &str) -> Result<TrialMu> {
        let descriptor: MuDescriptor = serde_json::from_str(json)
            .map_err(|e| Error::InvalidDescriptor(format!("mu: {e}")))?;
        descriptor.build()
    }

    /// Compact CLI form: `uniform`, `power_law:<p>` or inline JSON.
    pub fn parse_compact(spec: &str) -> Result<TrialMu> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            return Self::parse(spec);
        }
        if spec == "uniform" {
            return Ok(TrialMu::uniform());
        }
        if let Some(p) = spec.strip_prefix("power_law:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::InvalidDescriptor(format!("bad power_law exponent `{p}`")))?;
            return TrialMu::power_law(p);
        }
        Err(Error::InvalidDescriptor(format!(
            "unknown mu spec `{spec}` (expected `uniform`, `power_law:<p>` or JSON)"
        )))
    }

    pub fn build(&self) -> Result<TrialMu> {
        match self {
            MuDescriptor::Uniform => Ok(TrialMu::uniform()),
            MuDescriptor::PowerLaw { p } => TrialMu::power_law(*p),
            MuDescriptor::Grid { t, mu } => TrialMu::from_grid(t.clone(), mu.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_phi_closed_form() {
        let mu = TrialMu::uniform();
        assert_relative_eq!(mu.phi(0.5).unwrap(), 11.0 / 8.0, epsilon = 1e-15);
        assert_relative_eq!(mu.phi(2.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(mu.phi(1e-6).unwrap(), 1.5, epsilon = 1e-9);
        assert!(mu.phi(0.0).is_err());
    }

    #[test]
    fn uniform_phi_matches_min_kernel_quadrature() {
        // φ(t) = ∫ min(1/t,1/|y|) μ(y) dy evaluated directly
        let mu = TrialMu::uniform();
        for &t in &[1e-6, 0.2, 0.5, 0.9] {
            let direct = quad::adaptive(
                &|y: f64| {
                    4.0 * PI * y * y * (3.0 / (4.0 * PI)) * (1.0 / t).min(1.0 / y)
                },
                1e-12,
                1.0,
                1e-12,
                1e-300,
            )
            .value;
            assert_relative_eq!(mu.phi(t).unwrap(), direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn remainder_examples() {
        let mu = TrialMu::uniform();
        assert_relative_eq!(mu.remainder(0.5).unwrap(), 5.0 / 8.0, epsilon = 1e-15);
        assert_eq!(mu.remainder(3.0).unwrap(), 0.0);
        assert_relative_eq!(mu.remainder(1.0).unwrap(), 0.0, epsilon = 1e-12);
        assert!(mu.remainder(-1.0).is_err());
    }

    #[test]
    fn remainder_bounds_hold_on_sample() {
        for mu in [
            TrialMu::uniform(),
            TrialMu::power_law(0.5).unwrap(),
            TrialMu::power_law(2.0).unwrap(),
        ] {
            for i in 1..=100 {
                let t = i as f64 / 50.0; // covers (0, 2]
                let r = mu.remainder(t).unwrap();
                if t > 1.0 {
                    assert_eq!(r, 0.0);
                } else {
                    assert!((0.0..1.0 / t).contains(&r), "R({t}) = {r}");
                }
            }
        }
    }

    #[test]
    fn potential_phi_examples() {
        assert_relative_eq!(potential_phi_ball(0.0), 2.0 * PI, epsilon = 1e-15);
        assert_relative_eq!(potential_phi_ball(1.0), 4.0 * PI / 3.0, epsilon = 1e-15);
        assert_relative_eq!(potential_phi_ball(2.0), 2.0 * PI / 3.0, epsilon = 1e-15);
        // continuity at the ball boundary
        assert_relative_eq!(
            potential_phi_ball(1.0 - 1e-12),
            potential_phi_ball(1.0 + 1e-12),
            max_relative = 1e-9
        );
    }

    #[test]
    fn uniform_constants_match_closed_forms() {
        let mu = TrialMu::uniform();
        assert_relative_eq!(mu.m1(), 2.0 * PI / 5.0, max_relative = 1e-14);
        assert_relative_eq!(mu.m2() * mu.m2(), 23.0 * PI / 2310.0, max_relative = 1e-14);
        assert_relative_eq!(mu.self_energy(), 0.6, max_relative = 1e-14);
    }

    #[test]
    fn uniform_constants_by_quadrature() {
        // rebuild the uniform profile through the generic table machinery
        let mu = TrialMu::power_law(0.0).unwrap();
        assert_relative_eq!(mu.m1(), 2.0 * PI / 5.0, max_relative = 1e-10);
        assert_relative_eq!(mu.self_energy(), 0.6, max_relative = 1e-9);
        assert_relative_eq!(mu.m2() * mu.m2(), 23.0 * PI / 2310.0, max_relative = 1e-9);
        // 64-node Gauss–Legendre on [0,1] against the polynomial expansion
        let u = TrialMu::uniform();
        let m2_sq = quad::gl64().integrate(1e-14, 1.0, |t| {
            let r = u.remainder(t).unwrap();
            4.0 * PI * t.powi(6) * r * r
        });
        let expansion = 4.0 * PI
            * (0.2 + 9.0 / 28.0 + 1.0 / 44.0 - 0.5 + 0.125 - 1.0 / 6.0);
        assert_relative_eq!(m2_sq, expansion, max_relative = 1e-10);
        assert_relative_eq!(expansion, 23.0 * PI / 2310.0, max_relative = 1e-14);
    }

    #[test]
    fn remainder_integral_identity() {
        // 4π ∫ t² R(t) dt = M1 for every profile in the family
        for mu in [
            TrialMu::uniform(),
            TrialMu::power_law(0.25).unwrap(),
            TrialMu::power_law(1.0).unwrap(),
            TrialMu::power_law(4.0).unwrap(),
        ] {
            let integral = quad::adaptive(
                &|t| 4.0 * PI * t * t * mu.remainder(t).unwrap(),
                1e-12,
                1.0,
                1e-11,
                1e-300,
            )
            .value;
            assert_relative_eq!(integral, mu.m1(), max_relative = 1e-8);
        }
    }

    #[test]
    fn self_energy_grows_with_concentration() {
        let mut last = TrialMu::uniform().self_energy();
        for p in [1.0, 2.0, 4.0, 8.0] {
            let d = TrialMu::power_law(p).unwrap().self_energy();
            assert!(d > last, "D not increasing at p={p}: {d} <= {last}");
            last = d;
        }
    }

    #[test]
    fn uniform_minimizes_objective() {
        let reference = TrialMu::uniform().objective();
        assert_relative_eq!(reference, 0.7676633170710052, max_relative = 1e-9);
        for p in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let obj = TrialMu::power_law(p).unwrap().objective();
            assert!(obj > reference, "objective({p}) = {obj} < uniform");
        }
        // near-uniform profile sits within 1% of the minimum
        let near = TrialMu::power_law(0.01).unwrap().objective();
        assert!((near - reference).abs() / reference < 0.01);
        // PowerLaw(1) value frozen from the independent quadrature oracle
        let p1 = TrialMu::power_law(1.0).unwrap();
        assert_relative_eq!(p1.m1(), 4.0 * PI / 15.0, max_relative = 1e-10);
        assert_relative_eq!(p1.self_energy(), 26.0 / 35.0, max_relative = 1e-9);
        assert_relative_eq!(p1.objective(), 0.773231855, max_relative = 1e-7);
    }

    #[test]
    fn grid_profile_renormalizes() {
        let t: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        let v = vec![2.0; 51]; // mass 2·(4π/3) before renormalization
        let (mu, factor) = {
            let mu = TrialMu::from_grid(t, v).unwrap();
            let f = mu.renormalization();
            (mu, f)
        };
        assert_relative_eq!(factor, 3.0 / (8.0 * PI), max_relative = 1e-9);
        assert_relative_eq!(mu.m1(), 2.0 * PI / 5.0, max_relative = 1e-8);
        assert_relative_eq!(mu.self_energy(), 0.6, max_relative = 1e-8);
    }

    #[test]
    fn phi_times_t_tends_to_one() {
        for mu in [TrialMu::uniform(), TrialMu::power_law(1.5).unwrap()] {
            for t in [1.0, 5.0, 1e3, 1e8] {
                assert_relative_eq!(mu.phi(t).unwrap() * t, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn descriptor_roundtrip() {
        let mu = MuDescriptor::parse_compact("power_law:1").unwrap();
        assert_relative_eq!(mu.m1(), 4.0 * PI / 15.0, max_relative = 1e-9);
        assert!(MuDescriptor::parse_compact("triangle").is_err());
        let mu = MuDescriptor::parse(r#"{"type":"uniform"}"#).unwrap();
        assert_relative_eq!(mu.self_energy(), 0.6, epsilon = 1e-14);
    }
}
