//! The density functionals entering the lower bound: L = ∫ρ^{4/3},
//! the seminorm K' = (√ρ,|p|√ρ) computed by two independent routes,
//! the direct Coulomb energy D(f,g) and the ratio Q = K'/L.
//!
//! Fourier convention: f̂(k) = ∫e^{−2πik·x}f(x)dx, so
//! K' = ∫|f̂_√ρ(k)|²|2πk|dk = 8π²∫_0^∞ k³|f̂_√ρ(k)|²dk, and equivalently
//! K' = (1/2π²)∫∫|√ρ(x)−√ρ(y)|²/|x−y|⁴ dxdy.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::densities::{FormKind, RadialDensity};
use crate::error::{Error, Result};
use crate::quad::{self, Estimate};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// All functionals of one density, with per-entry error estimates.
#[derive(Debug, Clone, Serialize)]
pub struct FunctionalReport {
    pub l43: Estimate,
    pub k_prime_fourier: Option<Estimate>,
    pub k_prime_double: Option<Estimate>,
    pub d_rho: Estimate,
    pub q: Option<Estimate>,
    pub notes: Vec<String>,
}

/// L = ∫ρ^{4/3} dx = 4π∫r²ρ(r)^{4/3}dr.
pub fn l43(rho: &RadialDensity) -> Result<Estimate> {
    let closed = match rho.form_kind() {
        FormKind::Exponential { a, b } => {
            Some(27.0 * a.powf(4.0 / 3.0) * PI / (8.0 * b.powi(3)))
        }
        FormKind::Gaussian { a, s } => {
            // ρ^{4/3} is a Gaussian of width s·√3/2
            let w = s * 3.0f64.sqrt() / 2.0;
            Some(a.powf(4.0 / 3.0) * SQRT_PI.powi(3) * w.powi(3))
        }
        FormKind::UniformBall { rho0, radius } => {
            Some(4.0 * PI / 3.0 * radius.powi(3) * rho0.powf(4.0 / 3.0))
        }
        _ => None,
    };
    if let Some(v) = closed {
        return Ok(Estimate::exact(v));
    }
    Ok(l43_numeric(rho))
}

/// L by adaptive radial quadrature regardless of the analytic family.
pub fn l43_numeric(rho: &RadialDensity) -> Estimate {
    quad::adaptive(
        &|r| 4.0 * PI * r * r * rho.value(r).powf(4.0 / 3.0),
        0.0,
        rho.extent(),
        1e-11,
        1e-300,
    )
}

fn sqrt_value(rho: &RadialDensity, r: f64) -> f64 {
    rho.value(r).sqrt()
}

fn sqrt_derivative(rho: &RadialDensity, r: f64) -> f64 {
    let v = rho.value(r);
    if v <= 0.0 {
        0.0
    } else {
        rho.derivative(r) / (2.0 * v.sqrt())
    }
}

/// Radial Fourier transform of √ρ at wavenumber k > 0:
/// f̂(k) = (2/k)∫_0^∞ r√ρ(r) sin(2πkr) dr (real for radial input).
pub fn fourier_sqrt(rho: &RadialDensity, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::NonPositiveWavenumber(k));
    }
    match rho.form_kind() {
        FormKind::Exponential { a, b } => {
            Ok(64.0 * PI * a.sqrt() * b / (b * b + 16.0 * PI * PI * k * k).powi(2))
        }
        FormKind::Gaussian { a, s } => {
            Ok(a.sqrt() * (2.0 * PI * s * s).powf(1.5) * (-2.0 * PI * PI * s * s * k * k).exp())
        }
        _ => fourier_sqrt_numeric(rho, k),
    }
}

/// The same transform by oscillation-resolving quadrature, assuming no
/// closed form.
pub fn fourier_sqrt_numeric(rho: &RadialDensity, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::NonPositiveWavenumber(k));
    }
    let extent = rho.extent();
    let v = quad::integrate_sin(
        &|r| r * sqrt_value(rho, r),
        2.0 * PI * k,
        0.0,
        extent,
        extent / 60.0,
    );
    Ok(2.0 / k * v)
}

/// K' = (√ρ,|p|√ρ) via the k-space route. Closed forms for the exponential
/// (32a/(3b²)) and Gaussian (2πas²) families; quadrature otherwise.
pub fn k_fourier(rho: &RadialDensity) -> Result<Estimate> {
    match rho.form_kind() {
        FormKind::Exponential { a, b } => Ok(Estimate::exact(32.0 * a / (3.0 * b * b))),
        FormKind::Gaussian { a, s } => Ok(Estimate::exact(2.0 * PI * a * s * s)),
        _ => k_fourier_numeric(rho),
    }
}

/// K' by quadrature of 8π²k³|f̂(k)|² with no closed form assumed anywhere:
/// the transform itself is evaluated by [`fourier_sqrt_numeric`].
pub fn k_fourier_numeric(rho: &RadialDensity) -> Result<Estimate> {
    if rho.sqrt_has_jump() {
        return Err(Error::NonConvergentKIntegral);
    }
    let integrand = |k: f64| {
        if k <= 0.0 {
            return 0.0;
        }
        let f = fourier_sqrt_numeric(rho, k).unwrap_or(0.0);
        8.0 * PI * PI * k.powi(3) * f * f
    };
    // probe doubling wavenumbers for the point where the integrand has
    // decayed to 1e-13 of its running peak
    let k_char = 10.0 / rho.extent();
    let mut peak = 0.0f64;
    let mut k_cut = None;
    let mut below = 0;
    for j in 0..48 {
        let k = k_char * 2.0f64.powi(j - 10);
        let v = integrand(k);
        peak = peak.max(v);
        if peak > 0.0 && v < 1e-13 * peak {
            below += 1;
            if below >= 2 {
                k_cut = Some(k);
                break;
            }
        } else {
            below = 0;
        }
    }
    let Some(k_cut) = k_cut else {
        return Err(Error::NonConvergentKIntegral);
    };
    let body = quad::adaptive(&integrand, 0.0, k_cut, 1e-9, 1e-300);
    // k⁻⁵ tail bound appended from the endpoint value
    let tail = integrand(k_cut) * k_cut / 4.0;
    Ok(Estimate {
        value: body.value + tail,
        error: body.error + tail,
    })
}

/// K' via the position-space double integral, radially reduced to
/// ∬ 8r²s² q(r,s)² /(r+s)² dr ds with q the difference quotient of √ρ
/// (its derivative on the diagonal, where the 0/0 is removable).
pub fn k_double(rho: &RadialDensity) -> Result<Estimate> {
    if rho.sqrt_has_jump() {
        return Err(Error::DivergentSeminorm);
    }
    let fine = k_double_with_panels(rho, 256);
    let coarse = k_double_with_panels(rho, 128);
    let error = (fine - coarse).abs().max(1e-12 * fine.abs());
    Ok(Estimate { value: fine, error })
}

fn k_double_with_panels(rho: &RadialDensity, panels: usize) -> f64 {
    let extent = rho.extent();
    let r_lo = extent * 1e-5;
    let step = (extent / r_lo).ln() / panels as f64;
    let rule = quad::gl8();
    let mut xs = Vec::with_capacity(panels * 8);
    let mut ws = Vec::with_capacity(panels * 8);
    for i in 0..panels {
        let a = r_lo * ((i as f64) * step).exp();
        let b = r_lo * ((i as f64 + 1.0) * step).exp();
        for (x, w) in rule.mapped(a, b) {
            xs.push(x);
            ws.push(w);
        }
    }
    let fs: Vec<f64> = xs.iter().map(|&r| sqrt_value(rho, r)).collect();
    let dfs: Vec<f64> = xs.iter().map(|&r| sqrt_derivative(rho, r)).collect();
    let n = xs.len();
    // row sums in parallel, reduced in index order for bit-stable totals
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (ri, fi, wi) = (xs[i], fs[i], ws[i]);
            let mut acc = 0.0;
            for j in 0..n {
                let (rj, fj, wj) = (xs[j], fs[j], ws[j]);
                let q = if i == j {
                    dfs[i]
                } else {
                    (fi - fj) / (ri - rj)
                };
                let rs = ri * rj;
                let sum = ri + rj;
                acc += wi * wj * 8.0 * rs * rs * q * q / (sum * sum);
            }
            acc
        })
        .collect();
    rows.iter().sum()
}

/// Direct Coulomb energy D(f,g) = ½∫∫f(x)g(y)/|x−y| dxdy via Newton's
/// theorem: ½·4π∫r²f(r)V_g(r)dr.
pub fn direct_energy(f: &RadialDensity, g: &RadialDensity) -> Result<Estimate> {
    let potential = g.potential();
    let est = quad::adaptive(
        &|r| 2.0 * PI * r * r * f.value(r) * potential.eval(r),
        0.0,
        f.extent(),
        1e-11,
        1e-300,
    );
    Ok(est)
}

/// Q(ρ) = K'/L.
pub fn q_ratio(rho: &RadialDensity) -> Result<Estimate> {
    let l = l43(rho)?;
    if l.value <= 0.0 {
        return Err(Error::ZeroL43);
    }
    let k = k_fourier(rho)?;
    let value = k.value / l.value;
    let error = value * (k.error / k.value.abs().max(1e-300) + l.error / l.value);
    Ok(Estimate { value, error })
}

/// Full functional report: L, both K' routes, D(ρ,ρ) and Q.
pub fn report(rho: &RadialDensity) -> Result<FunctionalReport> {
    let l = l43(rho)?;
    let d = direct_energy(rho, rho)?;
    let mut notes = Vec::new();
    let kf = match k_fourier(rho) {
        Ok(e) => Some(e),
        Err(err) => {
            notes.push(format!("K' (k-space route): {err}"));
            None
        }
    };
    let kd = match k_double(rho) {
        Ok(e) => {
            if e.error > 1e-3 * e.value.abs() {
                notes.push(format!(
                    "K' double integral converged slowly (error estimate {:.3e})",
                    e.error
                ));
            }
            Some(e)
        }
        Err(err) => {
            notes.push(format!("K' (double-integral route): {err}"));
            None
        }
    };
    let q = kf.map(|k| {
        let value = k.value / l.value;
        let error = value * (k.error / k.value.abs().max(1e-300) + l.error / l.value.max(1e-300));
        Estimate { value, error }
    });
    Ok(FunctionalReport {
        l43: l,
        k_prime_fourier: kf,
        k_prime_double: kd,
        d_rho: d,
        q,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn exp11() -> RadialDensity {
        RadialDensity::exponential(1.0, 1.0).unwrap()
    }

    #[test]
    fn l43_closed_forms() {
        // ∫ρ^{4/3} = 27 a^{4/3} π /(8b³) for the exponential family
        let d = RadialDensity::exponential(2.0, 1.5).unwrap();
        assert_relative_eq!(
            l43(&d).unwrap().value,
            27.0 * 2.0f64.powf(4.0 / 3.0) * PI / (8.0 * 1.5f64.powi(3)),
            epsilon = 1e-13
        );
        let ball = RadialDensity::uniform_ball(0.9, 1.7).unwrap();
        assert_relative_eq!(
            l43(&ball).unwrap().value,
            4.0 * PI / 3.0 * 1.7f64.powi(3) * 0.9f64.powf(4.0 / 3.0),
            epsilon = 1e-13
        );
    }

    #[test]
    fn l43_closed_forms_match_quadrature() {
        for d in [
            exp11(),
            RadialDensity::exponential(2.0, 0.6).unwrap(),
            RadialDensity::gaussian(1.3, 0.8).unwrap(),
        ] {
            let closed = l43(&d).unwrap().value;
            let numeric = l43_numeric(&d);
            assert_relative_eq!(closed, numeric.value, max_relative = 1e-9);
        }
    }

    #[test]
    fn l43_tf_scaling() {
        let f = exp11();
        let l0 = l43(&f).unwrap().value;
        let l8 = l43(&f.scale_tf(8.0).unwrap()).unwrap().value;
        assert_relative_eq!(l8 / l0, 32.0, max_relative = 1e-8);
        let l27 = l43(&f.scale_tf(27.0).unwrap()).unwrap().value;
        assert_relative_eq!(l27 / l0, 243.0, max_relative = 1e-8);
        // grid base exercises the generic quadrature path
        let grid = f.sample_to_grid(2000, 1e-4, 40.0).unwrap();
        let ratio =
            l43(&grid.scale_tf(8.0).unwrap()).unwrap().value / l43(&grid).unwrap().value;
        assert_relative_eq!(ratio, 32.0, max_relative = 1e-6);
    }

    #[test]
    fn fourier_sqrt_closed_vs_numeric() {
        // the independent oracle fixes the exponential coefficient at 64π
        let d = RadialDensity::exponential(1.7, 1.3).unwrap();
        let (a, b) = (1.7, 1.3);
        for i in 0..20 {
            let k = 0.02 * 1.35f64.powi(i);
            let closed = 64.0 * PI * a.sqrt() * b / (b * b + 16.0 * PI * PI * k * k).powi(2);
            assert_relative_eq!(fourier_sqrt(&d, k).unwrap(), closed, epsilon = 1e-14);
            assert_relative_eq!(
                fourier_sqrt_numeric(&d, k).unwrap(),
                closed,
                max_relative = 1e-7
            );
        }
        let g = RadialDensity::gaussian(1.0, 1.0).unwrap();
        for &k in &[0.05, 0.3, 0.8] {
            assert!(fourier_sqrt(&g, k).unwrap() > 0.0);
            assert_relative_eq!(
                fourier_sqrt_numeric(&g, k).unwrap(),
                fourier_sqrt(&g, k).unwrap(),
                max_relative = 1e-7
            );
        }
        assert!(fourier_sqrt(&g, 0.0).is_err());
        assert!(fourier_sqrt(&g, -1.0).is_err());
    }

    #[test]
    fn fourier_sqrt_large_k_decay() {
        let d = exp11();
        let f1 = fourier_sqrt(&d, 8.0).unwrap();
        let f2 = fourier_sqrt(&d, 16.0).unwrap();
        assert_relative_eq!(f1 / f2, 16.0, max_relative = 2e-2);
    }

    #[test]
    fn k_fourier_exponential_adjudicated() {
        // quadrature route and momentum-space oracle both give 32a/(3b²)
        let (a, b) = (1.0, 1.0);
        let d = exp11();
        assert_relative_eq!(
            k_fourier(&d).unwrap().value,
            32.0 * a / (3.0 * b * b),
            epsilon = 1e-14
        );
        let numeric = k_fourier_numeric(&d).unwrap();
        assert_relative_eq!(numeric.value, 32.0 / 3.0, max_relative = 1e-6);
        // the momentum-space oracle: norm² · ⟨|p|⟩ with ⟨|p|⟩ = 8c/(3π), c = b/2
        let norm_sq = 8.0 * PI * a / b.powi(3);
        let c = b / 2.0;
        let p_mean = quad::adaptive(
            &|p: f64| 4.0 * PI * p.powi(3) * (8.0 * c.powi(5) / (PI * PI))
                / (p * p + c * c).powi(4),
            0.0,
            4000.0,
            1e-12,
            1e-300,
        )
        .value;
        assert_relative_eq!(p_mean, 8.0 * c / (3.0 * PI), max_relative = 1e-9);
        assert_relative_eq!(numeric.value, norm_sq * p_mean, max_relative = 1e-6);
    }

    #[test]
    fn k_fourier_gaussian_closed_form() {
        let g = RadialDensity::gaussian(1.3, 0.8).unwrap();
        assert_relative_eq!(
            k_fourier(&g).unwrap().value,
            2.0 * PI * 1.3 * 0.64,
            epsilon = 1e-14
        );
        let numeric = k_fourier_numeric(&g).unwrap();
        assert_relative_eq!(numeric.value, 2.0 * PI * 1.3 * 0.64, max_relative = 1e-6);
    }

    #[test]
    fn k_prime_scaling_laws() {
        let d = exp11();
        let k0 = k_fourier(&d).unwrap().value;
        // mass-preserving dilation: K' → s K'
        let k2 = k_fourier(&d.dilate(2.0, true).unwrap()).unwrap().value;
        assert_relative_eq!(k2 / k0, 2.0, max_relative = 1e-6);
        // Thomas–Fermi: K' → Z^{4/3} K'
        let k8 = k_fourier(&d.scale_tf(8.0).unwrap()).unwrap().value;
        assert_relative_eq!(k8 / k0, 16.0, max_relative = 1e-6);
    }

    #[test]
    fn k_double_agrees_with_k_fourier() {
        let d = exp11();
        let kd = k_double(&d).unwrap();
        assert_relative_eq!(kd.value, 32.0 / 3.0, max_relative = 1e-4);
        let g = RadialDensity::gaussian(1.0, 1.0).unwrap();
        let kd = k_double(&g).unwrap();
        assert!(kd.value > 0.0);
        assert_relative_eq!(kd.value, 2.0 * PI, max_relative = 1e-4);
    }

    #[test]
    fn k_double_flags_ball_divergence() {
        let ball = RadialDensity::uniform_ball(1.0, 1.0).unwrap();
        assert_eq!(k_double(&ball).unwrap_err(), Error::DivergentSeminorm);
        assert!(k_fourier_numeric(&ball).is_err());
    }

    #[test]
    fn direct_energy_examples() {
        // uniform unit ball with unit charge: D = 3/5
        let ball = RadialDensity::uniform_ball(3.0 / (4.0 * PI), 1.0).unwrap();
        assert_relative_eq!(
            direct_energy(&ball, &ball).unwrap().value,
            0.6,
            max_relative = 1e-9
        );
        // D(exp(1,1)) = 10π² (frozen from the independent oracle)
        let d = exp11();
        assert_relative_eq!(
            direct_energy(&d, &d).unwrap().value,
            10.0 * PI * PI,
            max_relative = 1e-9
        );
        // bilinear symmetry
        let g = RadialDensity::gaussian(1.0, 1.0).unwrap();
        let dg = direct_energy(&d, &g).unwrap().value;
        let gd = direct_energy(&g, &d).unwrap().value;
        assert_relative_eq!(dg, gd, max_relative = 1e-10);
        assert!(dg > 0.0);
    }

    #[test]
    fn q_ratio_n_scaling() {
        // Q ∝ N^{-1/3} for the exponential family
        let q1 = q_ratio(&RadialDensity::exponential_with_charge(1.0, 1.0).unwrap())
            .unwrap()
            .value;
        let q8 = q_ratio(&RadialDensity::exponential_with_charge(8.0, 1.0).unwrap())
            .unwrap()
            .value;
        assert_relative_eq!(q8 / q1, 0.5, max_relative = 1e-6);
        // coefficient 2⁹/(3⁴π^{2/3}) fixed by the adjudicated K'
        assert_relative_eq!(
            q1,
            512.0 / (81.0 * PI.powf(2.0 / 3.0)),
            max_relative = 1e-12
        );
    }

    #[test]
    fn q_ratio_invariances() {
        let d = exp11();
        let q0 = q_ratio(&d).unwrap().value;
        let q5 = q_ratio(&d.dilate(5.0, true).unwrap()).unwrap().value;
        assert_relative_eq!(q5, q0, max_relative = 1e-6);
        // Q·Z^{1/3} constant across a Thomas–Fermi sweep
        let base = q0;
        for &z in &[8.0, 27.0] {
            let q = q_ratio(&d.scale_tf(z).unwrap()).unwrap().value;
            assert_relative_eq!(q * z.cbrt(), base, max_relative = 1e-6);
        }
    }

    #[test]
    fn amplitude_homogeneity() {
        let d = RadialDensity::gaussian(0.7, 1.1).unwrap();
        let c = 3.0f64;
        let scaled = d.scale_amplitude(c).unwrap();
        assert_relative_eq!(
            l43(&scaled).unwrap().value,
            c.powf(4.0 / 3.0) * l43(&d).unwrap().value,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            k_fourier(&scaled).unwrap().value,
            c * k_fourier(&d).unwrap().value,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            direct_energy(&scaled, &scaled).unwrap().value,
            c * c * direct_energy(&d, &d).unwrap().value,
            max_relative = 1e-9
        );
    }

    #[test]
    fn smooth_grid_routes_agree() {
        let grid = exp11().sample_to_grid(2000, 1e-4, 40.0).unwrap();
        let kf = k_fourier(&grid).unwrap().value;
        let kd = k_double(&grid).unwrap().value;
        assert_relative_eq!(kf, 32.0 / 3.0, max_relative = 1e-4);
        assert_relative_eq!(kd, kf, max_relative = 1e-4);
    }

    #[test]
    fn report_contains_both_routes() {
        let rep = report(&exp11()).unwrap();
        assert!(rep.k_prime_fourier.is_some());
        assert!(rep.k_prime_double.is_some());
        assert!(rep.q.is_some());
        let rep = report(&RadialDensity::uniform_ball(1.0, 1.0).unwrap()).unwrap();
        assert!(rep.k_prime_fourier.is_none());
        assert!(rep.k_prime_double.is_none());
        assert_eq!(rep.notes.len(), 2);
    }
}
