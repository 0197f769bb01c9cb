//! Spherically symmetric single-particle densities: construction,
//! normalization, rescaling and Newton potentials.
//!
//! Every density here is radial; ρ(r) ≥ 0 and the total charge
//! N = 4π∫r²ρ(r)dr is finite, positive and cached at construction.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::Pchip;
use crate::quad;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Grid-backed radial profile: monotone cubic in (ln r, ρ) with a fitted
/// exponential tail beyond the last node.
#[derive(Debug, Clone)]
pub struct GridDensity {
    r: Vec<f64>,
    v: Vec<f64>,
    interp: Pchip,
    tail_decay: f64,
}

impl GridDensity {
    fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() < 4 {
            return Err(Error::GridTooShort {
                min: 4,
                got: r.len(),
            });
        }
        if r.len() != v.len() {
            return Err(Error::InvalidDescriptor(format!(
                "grid length mismatch: {} radii vs {} values",
                r.len(),
                v.len()
            )));
        }
        if r[0] <= 0.0 {
            return Err(Error::GridNotIncreasing { index: 0 });
        }
        for i in 1..r.len() {
            if !(r[i] > r[i - 1]) || !r[i].is_finite() {
                return Err(Error::GridNotIncreasing { index: i });
            }
        }
        for (i, &x) in v.iter().enumerate() {
            if !(x >= 0.0) || !x.is_finite() {
                return Err(Error::GridNegativeValue { index: i });
            }
        }
        let n = r.len();
        let (last, prev) = (v[n - 1], v[n - 2]);
        let tail_decay = if last == 0.0 {
            f64::INFINITY
        } else if prev <= 0.0 {
            // value appears out of nowhere at the edge: treat as non-decaying
            return Err(Error::InfiniteExtent { rate: 0.0 });
        } else {
            let rate = (prev / last).ln() / (r[n - 1] - r[n - 2]);
            if rate <= 0.0 {
                return Err(Error::InfiniteExtent { rate });
            }
            rate
        };
        let x: Vec<f64> = r.iter().map(|&t| t.ln()).collect();
        let interp = Pchip::new(x, v.clone());
        Ok(GridDensity {
            r,
            v,
            interp,
            tail_decay,
        })
    }

    fn value(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r <= self.r[0] {
            self.v[0]
        } else if r <= self.r[n - 1] {
            self.interp.eval(r.ln()).max(0.0)
        } else if self.tail_decay.is_finite() {
            self.v[n - 1] * (-self.tail_decay * (r - self.r[n - 1])).exp()
        } else {
            0.0
        }
    }

    fn derivative(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r <= self.r[0] {
            0.0
        } else if r <= self.r[n - 1] {
            self.interp.derivative(r.ln()) / r
        } else if self.tail_decay.is_finite() {
            -self.tail_decay * self.value(r)
        } else {
            0.0
        }
    }

    fn extent(&self) -> f64 {
        let n = self.r.len();
        if self.tail_decay.is_finite() && self.v[n - 1] > 0.0 {
            self.r[n - 1] + 80.0 / self.tail_decay
        } else {
            self.r[n - 1]
        }
    }
}

#[derive(Debug, Clone)]
enum Form {
    /// a·e^{-b r}
    Exponential { a: f64, b: f64 },
    /// a·e^{-(r/s)²}
    Gaussian { a: f64, s: f64 },
    /// ρ0 inside radius R, zero outside
    UniformBall { rho0: f64, radius: f64 },
    Grid(GridDensity),
    /// amplitude · base(dilation · r)
    Scaled {
        base: Arc<RadialDensity>,
        dilation: f64,
        amplitude: f64,
    },
}

/// A nonnegative spherically symmetric single-particle density with finite
/// positive total charge.
#[derive(Debug, Clone)]
pub struct RadialDensity {
    form: Form,
    total_charge: f64,
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFinite { name, value });
    }
    if value <= 0.0 {
        return Err(Error::NonPositive { name, value });
    }
    Ok(())
}

impl RadialDensity {
    pub fn exponential(a: f64, b: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("b", b)?;
        Ok(RadialDensity {
            form: Form::Exponential { a, b },
            total_charge: 8.0 * PI * a / b.powi(3),
        })
    }

    /// Exponential profile with amplitude `a` normalized to total charge `n`:
    /// b = (8πa/N)^{1/3}.
    pub fn exponential_with_charge(n: f64, a: f64) -> Result<Self> {
        check_positive("N", n)?;
        check_positive("a", a)?;
        let b = (8.0 * PI * a / n).cbrt();
        Self::exponential(a, b)
    }

    pub fn gaussian(a: f64, s: f64) -> Result<Self> {
        check_positive("a", a)?;
        check_positive("s", s)?;
        Ok(RadialDensity {
            form: Form::Gaussian { a, s },
            total_charge: a * SQRT_PI.powi(3) * s.powi(3),
        })
    }

    /// Gaussian profile with amplitude `a` normalized to total charge `n`.
    pub fn gaussian_with_charge(n: f64, a: f64) -> Result<Self> {
        check_positive("N", n)?;
        check_positive("a", a)?;
        let s = (n / (a * SQRT_PI.powi(3))).cbrt();
        Self::gaussian(a, s)
    }

    pub fn uniform_ball(rho0: f64, radius: f64) -> Result<Self> {
        check_positive("rho0", rho0)?;
        check_positive("R", radius)?;
        Ok(RadialDensity {
            form: Form::UniformBall { rho0, radius },
            total_charge: 4.0 * PI / 3.0 * radius.powi(3) * rho0,
        })
    }

    pub fn from_grid(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let grid = GridDensity::new(r, v)?;
        let density = RadialDensity {
            total_charge: f64::NAN,
            form: Form::Grid(grid),
        };
        let n = density.charge_by_quadrature();
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::InvalidTotalCharge(n));
        }
        Ok(RadialDensity {
            form: density.form,
            total_charge: n,
        })
    }

    /// Sample this density on `n` log-spaced radii in [r_min, r_max] and
    /// rebuild it as a grid density.
    pub fn sample_to_grid(&self, n: usize, r_min: f64, r_max: f64) -> Result<Self> {
        check_positive("r_min", r_min)?;
        check_positive("r_max", r_max)?;
        if r_max <= r_min {
            return Err(Error::InvalidDescriptor(format!(
                "r_max {r_max} must exceed r_min {r_min}"
            )));
        }
        let step = (r_max / r_min).ln() / (n - 1) as f64;
        let r: Vec<f64> = (0..n).map(|i| r_min * (i as f64 * step).exp()).collect();
        let v: Vec<f64> = r.iter().map(|&t| self.value(t)).collect();
        Self::from_grid(r, v)
    }

    /// Total charge 4π∫r²ρ(r)dr (cached; closed forms for analytic families).
    pub fn total_charge(&self) -> f64 {
        self.total_charge
    }

    fn charge_by_quadrature(&self) -> f64 {
        let est = quad::adaptive(
            &|r| 4.0 * PI * r * r * self.value(r),
            0.0,
            self.extent(),
            1e-12,
            1e-300,
        );
        est.value
    }

    /// ρ(r); error for negative radii.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::NegativeRadius(r));
        }
        Ok(self.value(r))
    }

    /// ρ(r) without the domain check (r must be ≥ 0).
    pub(crate) fn value(&self, r: f64) -> f64 {
        match &self.form {
            Form::Exponential { a, b } => a * (-b * r).exp(),
            Form::Gaussian { a, s } => a * (-(r / s).powi(2)).exp(),
            Form::UniformBall { rho0, radius } => {
                if r <= *radius {
                    *rho0
                } else {
                    0.0
                }
            }
            Form::Grid(g) => g.value(r),
            Form::Scaled {
                base,
                dilation,
                amplitude,
            } => amplitude * base.value(dilation * r),
        }
    }

    /// dρ/dr (used for the seminorm diagonal limit).
    pub(crate) fn derivative(&self, r: f64) -> f64 {
        match &self.form {
            Form::Exponential { a, b } => -b * a * (-b * r).exp(),
            Form::Gaussian { a, s } => -2.0 * r / (s * s) * a * (-(r / s).powi(2)).exp(),
            Form::UniformBall { .. } => 0.0,
            Form::Grid(g) => g.derivative(r),
            Form::Scaled {
                base,
                dilation,
                amplitude,
            } => amplitude * dilation * base.derivative(dilation * r),
        }
    }

    /// Thomas–Fermi rescaling x ↦ Z²ρ(Z^{1/3}x); total charge becomes Z·N.
    pub fn scale_tf(&self, z: f64) -> Result<Self> {
        check_positive("Z", z)?;
        self.rescaled(z.cbrt(), z * z)
    }

    /// Dilation x ↦ s³ρ(sx) (mass preserving) or x ↦ ρ(sx).
    pub fn dilate(&self, s: f64, mass_preserving: bool) -> Result<Self> {
        check_positive("s", s)?;
        let amplitude = if mass_preserving { s.powi(3) } else { 1.0 };
        self.rescaled(s, amplitude)
    }

    /// amplitude · ρ(dilation · x), normalizing analytic families in place.
    fn rescaled(&self, dilation: f64, amplitude: f64) -> Result<Self> {
        let density = match &self.form {
            Form::Exponential { a, b } => RadialDensity::exponential(amplitude * a, dilation * b)?,
            Form::Gaussian { a, s } => RadialDensity::gaussian(amplitude * a, s / dilation)?,
            Form::UniformBall { rho0, radius } => {
                RadialDensity::uniform_ball(amplitude * rho0, radius / dilation)?
            }
            Form::Scaled {
                base,
                dilation: d0,
                amplitude: a0,
            } => RadialDensity {
                total_charge: self.total_charge * amplitude / dilation.powi(3),
                form: Form::Scaled {
                    base: Arc::clone(base),
                    dilation: d0 * dilation,
                    amplitude: a0 * amplitude,
                },
            },
            Form::Grid(_) => RadialDensity {
                total_charge: self.total_charge * amplitude / dilation.powi(3),
                form: Form::Scaled {
                    base: Arc::new(self.clone()),
                    dilation,
                    amplitude,
                },
            },
        };
        Ok(density)
    }

    /// Scaling the overall amplitude by c > 0 (homogeneity tests).
    pub fn scale_amplitude(&self, c: f64) -> Result<Self> {
        check_positive("c", c)?;
        self.rescaled(1.0, c)
    }

    /// Radius beyond which the density no longer contributes to integrals.
    pub(crate) fn extent(&self) -> f64 {
        match &self.form {
            Form::Exponential { b, .. } => 120.0 / b,
            Form::Gaussian { s, .. } => 14.0 * s,
            Form::UniformBall { radius, .. } => *radius,
            Form::Grid(g) => g.extent(),
            Form::Scaled { base, dilation, .. } => base.extent() / dilation,
        }
    }

    /// True when √ρ has a jump discontinuity (uniform-ball boundary).
    pub(crate) fn sqrt_has_jump(&self) -> bool {
        match &self.form {
            Form::UniformBall { .. } => true,
            Form::Scaled { base, .. } => base.sqrt_has_jump(),
            _ => false,
        }
    }

    pub(crate) fn form_kind(&self) -> FormKind {
        match &self.form {
            Form::Exponential { a, b } => FormKind::Exponential { a: *a, b: *b },
            Form::Gaussian { a, s } => FormKind::Gaussian { a: *a, s: *s },
            Form::UniformBall { rho0, radius } => FormKind::UniformBall {
                rho0: *rho0,
                radius: *radius,
            },
            Form::Grid(_) => FormKind::Grid,
            Form::Scaled { .. } => FormKind::Scaled,
        }
    }

    /// Newton potential V(r) = (4π/r)∫_0^r s²ρ ds + 4π∫_r^∞ sρ ds.
    pub fn potential(&self) -> RadialPotential {
        match &self.form {
            Form::Exponential { a, b } => RadialPotential::Exponential { a: *a, b: *b },
            Form::UniformBall { radius, .. } => RadialPotential::UniformBall {
                charge: self.total_charge,
                radius: *radius,
            },
            Form::Scaled {
                base,
                dilation,
                amplitude,
            } => RadialPotential::Scaled {
                base: Box::new(base.potential()),
                dilation: *dilation,
                amplitude: *amplitude,
            },
            _ => RadialPotential::table(self),
        }
    }
}

/// Discriminant of the underlying analytic family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum FormKind {
    Exponential { a: f64, b: f64 },
    Gaussian { a: f64, s: f64 },
    UniformBall { rho0: f64, radius: f64 },
    Grid,
    Scaled,
}

/// Evaluable Newton potential of a radial density.
#[derive(Debug, Clone)]
pub enum RadialPotential {
    Exponential {
        a: f64,
        b: f64,
    },
    UniformBall {
        charge: f64,
        radius: f64,
    },
    Scaled {
        base: Box<RadialPotential>,
        dilation: f64,
        amplitude: f64,
    },
    Table {
        log_r: Vec<f64>,
        inner: Pchip,
        outer: Pchip,
        r_first: f64,
        r_last: f64,
        v_zero: f64,
        charge: f64,
    },
}

impl RadialPotential {
    fn table(density: &RadialDensity) -> Self {
        let r_lo = density.extent() * 1e-7;
        let r_hi = density.extent();
        let n = 3000usize;
        let step = (r_hi / r_lo).ln() / (n - 1) as f64;
        let r: Vec<f64> = (0..n).map(|i| r_lo * (i as f64 * step).exp()).collect();
        let rule = quad::gl16();
        // inner[i] = 4π ∫_0^{r_i} s²ρ ds, outer[i] = 4π ∫_{r_i}^∞ sρ ds
        let mut inner = vec![0.0; n];
        inner[0] = rule.integrate(0.0, r[0], |s| 4.0 * PI * s * s * density.value(s));
        for i in 1..n {
            inner[i] = inner[i - 1]
                + rule.integrate(r[i - 1], r[i], |s| 4.0 * PI * s * s * density.value(s));
        }
        let mut outer = vec![0.0; n];
        outer[n - 1] = 0.0;
        for i in (0..n - 1).rev() {
            outer[i] =
                outer[i + 1] + rule.integrate(r[i], r[i + 1], |s| 4.0 * PI * s * density.value(s));
        }
        let v_zero = outer[0] + inner[0] / r[0];
        let log_r: Vec<f64> = r.iter().map(|&t| t.ln()).collect();
        RadialPotential::Table {
            inner: Pchip::new(log_r.clone(), inner),
            outer: Pchip::new(log_r.clone(), outer),
            log_r,
            r_first: r[0],
            r_last: r[n - 1],
            v_zero,
            charge: density.total_charge(),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialPotential::Exponential { a, b } => {
                if r < 1e-12 / b {
                    return 4.0 * PI * a / (b * b);
                }
                let e = (-b * r).exp();
                let q = 4.0 * PI * a
                    * (2.0 / b.powi(3) - e * (r * r / b + 2.0 * r / (b * b) + 2.0 / b.powi(3)));
                let t = 4.0 * PI * a * e * (r / b + 1.0 / (b * b));
                q / r + t
            }
            RadialPotential::UniformBall { charge, radius } => {
                if r < *radius {
                    charge * (3.0 * radius * radius - r * r) / (2.0 * radius.powi(3))
                } else {
                    charge / r
                }
            }
            RadialPotential::Scaled {
                base,
                dilation,
                amplitude,
            } => amplitude / (dilation * dilation) * base.eval(dilation * r),
            RadialPotential::Table {
                inner,
                outer,
                r_first,
                r_last,
                v_zero,
                charge,
                ..
            } => {
                if r <= *r_first {
                    *v_zero
                } else if r >= *r_last {
                    charge / r
                } else {
                    let x = r.ln();
                    inner.eval(x) / r + outer.eval(x)
                }
            }
        }
    }
}

/// One particle species: per-particle charge and its number density.
#[derive(Debug, Clone)]
pub struct SpeciesDensity {
    charge: f64,
    number_density: RadialDensity,
}

impl SpeciesDensity {
    /// `number_density` integrates to the particle count of the species.
    pub fn new(charge: f64, number_density: RadialDensity) -> Result<Self> {
        if !charge.is_finite() || charge < 0.0 {
            return Err(Error::NonFinite {
                name: "e_i",
                value: charge,
            });
        }
        Ok(SpeciesDensity {
            charge,
            number_density,
        })
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn number_density(&self) -> &RadialDensity {
        &self.number_density
    }

    /// Charge density ρ_i(r) = e_i·n_i(r).
    pub fn charge_density_at(&self, r: f64) -> f64 {
        self.charge * self.number_density.value(r)
    }

    /// ∫ρ_i = e_i × particle count.
    pub fn total_charge(&self) -> f64 {
        self.charge * self.number_density.total_charge()
    }
}

// ---------------------------------------------------------------------------
// JSON descriptors
// ---------------------------------------------------------------------------

/// Wire format for densities:
/// `{"type":"exponential","a":..,"b":..}` (or `"N"` instead of `"b"`),
/// `{"type":"gaussian","a":..,"s":..}` (or `"N"`),
/// `{"type":"uniform_ball","rho0":..,"R":..}`,
/// `{"type":"grid","r":[..],"rho":[..]}`,
/// `{"type":"tf_scaled","Z":..,"base":{..}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityDescriptor {
    Exponential {
        a: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        b: Option<f64>,
        #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
        n: Option<f64>,
    },
    Gaussian {
        a: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        s: Option<f64>,
        #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
        n: Option<f64>,
    },
    UniformBall {
        rho0: f64,
        #[serde(rename = "R")]
        radius: f64,
    },
    Grid {
        r: Vec<f64>,
        rho: Vec<f64>,
    },
    TfScaled {
        #[serde(rename = "Z")]
        z: f64,
        base: Box<DensityDescriptor>,
    },
}

impl DensityDescriptor {
    pub fn parse(json: &str) -> Result<RadialDensity> {
        let descriptor: DensityDescriptor = serde_json::from_str(json)
            .map_err(|e| Error::InvalidDescriptor(format!("density: {e}")))?;
        descriptor.build()
    }

    pub fn build(&self) -> Result<RadialDensity> {
        match self {
            DensityDescriptor::Exponential { a, b, n } => match (b, n) {
                (Some(b), None) => RadialDensity::exponential(*a, *b),
                (None, Some(n)) => RadialDensity::exponential_with_charge(*n, *a),
                _ => Err(Error::InvalidDescriptor(
                    "exponential: exactly one of `b`/`N` is required".into(),
                )),
            },
            DensityDescriptor::Gaussian { a, s, n } => match (s, n) {
                (Some(s), None) => RadialDensity::gaussian(*a, *s),
                (None, Some(n)) => RadialDensity::gaussian_with_charge(*n, *a),
                _ => Err(Error::InvalidDescriptor(
                    "gaussian: exactly one of `s`/`N` is required".into(),
                )),
            },
            DensityDescriptor::UniformBall { rho0, radius } => {
                RadialDensity::uniform_ball(*rho0, *radius)
            }
            DensityDescriptor::Grid { r, rho } => RadialDensity::from_grid(r.clone(), rho.clone()),
            DensityDescriptor::TfScaled { z, base } => base.build()?.scale_tf(*z),
        }
    }
}
