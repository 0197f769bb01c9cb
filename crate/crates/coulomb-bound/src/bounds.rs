//! Assembly of the lower bound on the indirect Coulomb energy from L and K',
//! optimization of the free parameters α and λ, derivation of the bound's
//! coefficients from any trial smearing distribution, and the classical
//! reference bounds (Dirac, Lieb 1979, Lieb–Oxford, Chan–Handy).
//!
//! Conventions: all public entry points take K' = (√ρ,|p|√ρ). The
//! proof-internal seminorm K = 2π²K' appears only in [`intermediate_bound`].

use std::f64::consts::PI;

use serde::Serialize;

use crate::densities::SpeciesDensity;
use crate::error::{Error, Result};
use crate::mu_model::MuConstants;
use crate::quad;

/// Conversion between the two seminorm conventions: K = 2π²·K'.
pub const K_FROM_K_PRIME: f64 = 2.0 * PI * PI;

/// Coefficients of the three-term bound
/// E ≥ −C1(1−α)^{−1/3}e^{2/3}L − C2(1−α)^{−1/6}e^{5/6}√(K'L) − C3 e K'/α,
/// stored as closed forms evaluated at full precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremConstants {
    /// C1 = (9/10)(4π/3)^{1/3}
    pub c1: f64,
    /// C2 = (3/(4π))^{5/6}·√(23π/2310)·√(2π²)
    pub c2: f64,
    /// C3 = 3π/8
    pub c3: f64,
}

impl TheoremConstants {
    /// The uniform-ball values entering the bound.
    pub fn standard() -> Self {
        TheoremConstants {
            c1: 0.9 * (4.0 * PI / 3.0).cbrt(),
            c2: (3.0 / (4.0 * PI)).powf(5.0 / 6.0)
                * (23.0 * PI / 2310.0).sqrt()
                * K_FROM_K_PRIME.sqrt(),
            c3: 3.0 * PI / 8.0,
        }
    }
}

/// Dirac's exchange coefficient c_D = (3/4)(3/π)^{1/3}.
pub fn dirac_coefficient() -> f64 {
    0.75 * (3.0 / PI).cbrt()
}

/// Reference values the bound is always compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparisons {
    pub dirac: f64,
    pub lieb79: f64,
    pub lieb_oxford_168: f64,
    pub chan_handy_1636: f64,
    pub best_known_lower_1234: f64,
}

impl Comparisons {
    fn for_equal_charges(l: f64, e: f64) -> Self {
        let base = e.powf(2.0 / 3.0) * l;
        Comparisons {
            dirac: -dirac_coefficient() * base,
            lieb79: -8.52 * base,
            lieb_oxford_168: -1.68 * base,
            chan_handy_1636: -1.636 * base,
            best_known_lower_1234: -1.234 * base,
        }
    }
}

/// Inputs echoed back in reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "K_prime")]
    pub k_prime: f64,
    pub e: f64,
}

/// One evaluation of the three-term bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundBreakdown {
    pub alpha: f64,
    /// true when the reported α is the K'=0 limit of vanishing α
    pub alpha_is_limit: bool,
    pub term1: f64,
    pub term2: f64,
    pub term3: f64,
    pub total: f64,
    pub comparisons: Comparisons,
    pub inputs: BoundInputs,
}

fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::NonFinite { name, value: v });
    }
    Ok(())
}

/// The bound at fixed α ∈ (0,1).
pub fn theorem_bound(l: f64, k_prime: f64, e: f64, alpha: f64) -> Result<BoundBreakdown> {
    check_nonneg("L", l)?;
    check_nonneg("K_prime", k_prime)?;
    if !e.is_finite() || e <= 0.0 {
        return Err(Error::NonPositive { name: "e", value: e });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(breakdown(l, k_prime, e, alpha, false))
}

fn breakdown(l: f64, k_prime: f64, e: f64, alpha: f64, alpha_is_limit: bool) -> BoundBreakdown {
    let c = TheoremConstants::standard();
    let one_minus = 1.0 - alpha;
    let term1 = -c.c1 * one_minus.powf(-1.0 / 3.0) * e.powf(2.0 / 3.0) * l;
    let term2 = -c.c2 * one_minus.powf(-1.0 / 6.0) * e.powf(5.0 / 6.0) * (k_prime * l).sqrt();
    let term3 = if k_prime == 0.0 {
        0.0
    } else {
        -c.c3 * e * k_prime / alpha
    };
    BoundBreakdown {
        alpha,
        alpha_is_limit,
        term1,
        term2,
        term3,
        total: term1 + term2 + term3,
        comparisons: Comparisons::for_equal_charges(l, e),
        inputs: BoundInputs { l, k_prime, e },
    }
}

/// Best α in (0,1): maximizes the (negative) total. The objective
/// A(1−α)^{−1/3}+B(1−α)^{−1/6}+C/α is strictly convex, so golden-section
/// on a logit grid brackets the unique minimizer; K' = 0 degenerates to the
/// α→0 limit, reported with `alpha_is_limit`.
pub fn optimize_alpha(l: f64, k_prime: f64, e: f64) -> Result<BoundBreakdown> {
    check_nonneg("L", l)?;
    check_nonneg("K_prime", k_prime)?;
    if !e.is_finite() || e <= 0.0 {
        return Err(Error::NonPositive { name: "e", value: e });
    }
    if k_prime == 0.0 {
        let c = TheoremConstants::standard();
        let term1 = -c.c1 * e.powf(2.0 / 3.0) * l;
        return Ok(BoundBreakdown {
            alpha: 0.0,
            alpha_is_limit: true,
            term1,
            term2: 0.0,
            term3: 0.0,
            total: term1,
            comparisons: Comparisons::for_equal_charges(l, e),
            inputs: BoundInputs { l, k_prime, e },
        });
    }
    let objective = |u: f64| {
        let alpha = 1.0 / (1.0 + (-u).exp());
        -breakdown(l, k_prime, e, alpha, false).total
    };
    let span = (1e12f64).ln();
    let (u_star, _) = quad::golden_min(objective, -span, span, 1e-11);
    let alpha_star = 1.0 / (1.0 + (-u_star).exp());
    Ok(breakdown(l, k_prime, e, alpha_star, false))
}

/// The bound's three coefficients derived from an arbitrary trial
/// distribution at a given α, in both seminorm conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuBoundCoefficients {
    /// coefficient of L: 3M1^{1/3}D^{2/3}/(2^{2/3}(1−α)^{1/3})
    pub l_coeff: f64,
    /// coefficient of √(K·L), paper-internal K convention
    pub cross_coeff_k: f64,
    /// coefficient of K
    pub k_coeff_k: f64,
    /// coefficient of √(K'·L)
    pub cross_coeff_k_prime: f64,
    /// coefficient of K'
    pub k_coeff_k_prime: f64,
}

/// Coefficients obtained by smearing with `mu` and optimizing the first
/// term over λ; the uniform ball reproduces [`TheoremConstants`].
pub fn constants_from_mu(mu: &MuConstants, alpha: f64) -> Result<MuBoundCoefficients> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let one_minus = 1.0 - alpha;
    let l_coeff = 3.0 * mu.m1.cbrt() * mu.d_mu.powf(2.0 / 3.0)
        / (2.0f64.powf(2.0 / 3.0) * one_minus.cbrt());
    let cross_coeff_k =
        mu.m2 * mu.d_mu.powf(5.0 / 6.0) / ((2.0 * mu.m1).powf(5.0 / 6.0) * one_minus.powf(1.0 / 6.0));
    let k_coeff_k = mu.d_mu / (8.0 * alpha * mu.m1);
    Ok(MuBoundCoefficients {
        l_coeff,
        cross_coeff_k,
        k_coeff_k,
        cross_coeff_k_prime: cross_coeff_k * K_FROM_K_PRIME.sqrt(),
        k_coeff_k_prime: k_coeff_k * K_FROM_K_PRIME,
    })
}

/// λ* = (2M1/((1−α)D))^{1/3}, the minimizer of M1L/((1−α)λ²) + λD·L.
pub fn lambda_star(mu: &MuConstants, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok((2.0 * mu.m1 / ((1.0 - alpha) * mu.d_mu)).cbrt())
}

/// The pre-optimization bound on |E| at explicit (λ, α):
/// [M1/((1−α)λ²) + λD]L + M2√(K·L)/((1−α)λ^{5/2}) + K/(4(1−α)αλ³),
/// with K in the paper-internal convention K = 2π²K'.
pub fn intermediate_bound(
    l: f64,
    k: f64,
    lambda: f64,
    alpha: f64,
    mu: &MuConstants,
) -> Result<f64> {
    check_nonneg("L", l)?;
    check_nonneg("K", k)?;
    if !(lambda > 0.0) {
        return Err(Error::NonPositive {
            name: "lambda",
            value: lambda,
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let one_minus = 1.0 - alpha;
    Ok(
        (mu.m1 / (one_minus * lambda * lambda) + lambda * mu.d_mu) * l
            + mu.m2 / (one_minus * lambda.powf(2.5)) * (k * l).sqrt()
            + k / (4.0 * one_minus * alpha * lambda.powi(3)),
    )
}

/// Dirac's plane-wave estimate E ≈ −c_D e^{2/3} L.
pub fn dirac_estimate(l: f64, e: f64) -> f64 {
    -dirac_coefficient() * e.powf(2.0 / 3.0) * l
}

/// E ≥ −C e^{2/3} L with C defaulting to the 1.68 constant.
pub fn lieb_oxford_bound(l: f64, e: f64, c: f64) -> f64 {
    -c * e.powf(2.0 / 3.0) * l
}

pub const LIEB_OXFORD_C: f64 = 1.68;
pub const CHAN_HANDY_C: f64 = 1.636;
pub const BEST_KNOWN_LOWER_C: f64 = 1.234;

fn species_integrals(
    species: &[SpeciesDensity],
    weight: impl Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    if species.is_empty() {
        return Err(Error::EmptySpecies);
    }
    let extent = species
        .iter()
        .map(|s| s.number_density().extent())
        .fold(0.0f64, f64::max);
    // ∫[Σ w(e_i)ρ_i]^{4/3} and ∫ρ^{4/3} with ρ = Σρ_i
    let weighted = quad::adaptive(
        &|r| {
            let sum: f64 = species.iter().map(|s| weight(s.charge()) * s.charge_density_at(r)).sum();
            4.0 * PI * r * r * sum.powf(4.0 / 3.0)
        },
        0.0,
        extent,
        1e-10,
        1e-300,
    );
    let plain = quad::adaptive(
        &|r| {
            let sum: f64 = species.iter().map(|s| s.charge_density_at(r)).sum();
            4.0 * PI * r * r * sum.powf(4.0 / 3.0)
        },
        0.0,
        extent,
        1e-10,
        1e-300,
    );
    Ok((weighted.value, plain.value))
}

/// The 1979 bound E ≥ −8.52{∫[Σe_i^{2/3}ρ_i]^{4/3}}^{3/4}[∫ρ^{4/3}]^{1/4}.
pub fn lieb79_bound(species: &[SpeciesDensity]) -> Result<f64> {
    let (weighted, plain) = species_integrals(species, |e| e.powf(2.0 / 3.0))?;
    Ok(-8.52 * weighted.powf(0.75) * plain.powf(0.25))
}

/// The general-charge form E ≥ −1.68{∫[Σe_iρ_i]^{4/3}}^{1/2}[∫ρ^{4/3}]^{1/2}.
pub fn lieb_oxford_general(species: &[SpeciesDensity]) -> Result<f64> {
    let (weighted, plain) = species_integrals(species, |e| e)?;
    Ok(-LIEB_OXFORD_C * weighted.sqrt() * plain.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::RadialDensity;
    use crate::functionals;
    use crate::mu_model::TrialMu;
    use approx::assert_relative_eq;

    #[test]
    fn constants_reproduce_reference_decimals() {
        let c = TheoremConstants::standard();
        assert_relative_eq!(c.c1, 1.4508, epsilon = 5e-5);
        assert_relative_eq!(c.c2, 0.2382, epsilon = 5e-5);
        assert_relative_eq!(c.c3, 1.1781, epsilon = 5e-5);
        assert_relative_eq!(c.c3, 3.0 * PI / 8.0, epsilon = 0.0);
        assert_relative_eq!(dirac_coefficient(), 0.7386, epsilon = 5e-5);
    }

    #[test]
    fn theorem_bound_arithmetic() {
        // frozen from direct evaluation of the closed-form constants
        let b = theorem_bound(1.0, 1.0, 1.0, 0.5).unwrap();
        assert_relative_eq!(b.total, -4.451417768712581, max_relative = 1e-12);
        assert!((b.total - (-4.4514)).abs() < 5e-5);
        assert_relative_eq!(b.total, b.term1 + b.term2 + b.term3, epsilon = 1e-15);
        assert!(b.term1 < 0.0 && b.term2 < 0.0 && b.term3 < 0.0);
    }

    #[test]
    fn theorem_bound_k_zero_alpha_small() {
        let b = theorem_bound(2.0, 0.0, 1.0, 1e-9).unwrap();
        let c = TheoremConstants::standard();
        assert_relative_eq!(b.total, -c.c1 * 2.0, max_relative = 1e-8);
        assert_eq!(b.term3, 0.0);
    }

    #[test]
    fn theorem_bound_charge_homogeneity() {
        let b1 = theorem_bound(1.3, 0.7, 1.0, 0.4).unwrap();
        let b8 = theorem_bound(1.3, 0.7, 8.0, 0.4).unwrap();
        assert_relative_eq!(b8.term1, 4.0 * b1.term1, max_relative = 1e-12);
        assert_relative_eq!(
            b8.term2,
            8.0f64.powf(5.0 / 6.0) * b1.term2,
            max_relative = 1e-12
        );
        assert_relative_eq!(b8.term3, 8.0 * b1.term3, max_relative = 1e-12);
    }

    #[test]
    fn theorem_bound_rejects_bad_alpha() {
        assert!(theorem_bound(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(theorem_bound(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(theorem_bound(1.0, 1.0, 1.0, -0.2).is_err());
    }

    #[test]
    fn optimizer_dominates_fixed_alpha() {
        let best = optimize_alpha(1.0, 1.0, 1.0).unwrap();
        assert!(best.total >= theorem_bound(1.0, 1.0, 1.0, 0.5).unwrap().total);
        for i in 1..100 {
            let alpha = i as f64 / 100.0;
            let b = theorem_bound(1.0, 1.0, 1.0, alpha).unwrap();
            assert!(
                best.total + 1e-12 >= b.total,
                "alpha = {alpha}: {} > {}",
                b.total,
                best.total
            );
        }
    }

    #[test]
    fn optimizer_limit_flag_for_zero_k() {
        let b = optimize_alpha(3.0, 0.0, 2.0).unwrap();
        assert!(b.alpha_is_limit);
        assert_eq!(b.alpha, 0.0);
        let c = TheoremConstants::standard();
        assert_relative_eq!(
            b.total,
            -c.c1 * 2.0f64.powf(2.0 / 3.0) * 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn optimizer_favors_small_alpha_for_small_k() {
        let b = optimize_alpha(1.0, 1e-6, 1.0).unwrap();
        assert!(b.alpha < 1e-2, "alpha* = {}", b.alpha);
        assert!(b.alpha > 0.0);
    }

    #[test]
    fn bound_monotone_in_l_and_k() {
        let base = theorem_bound(1.0, 1.0, 1.0, 0.3).unwrap().total;
        assert!(theorem_bound(1.5, 1.0, 1.0, 0.3).unwrap().total < base);
        assert!(theorem_bound(1.0, 1.5, 1.0, 0.3).unwrap().total < base);
    }

    #[test]
    fn mu_coefficients_match_theorem_for_uniform() {
        let mu = TrialMu::uniform().constants();
        let theorem = TheoremConstants::standard();
        for &alpha in &[0.1, 0.5, 0.9] {
            let c = constants_from_mu(&mu, alpha).unwrap();
            let one_minus: f64 = 1.0 - alpha;
            assert_relative_eq!(
                c.l_coeff,
                theorem.c1 * one_minus.powf(-1.0 / 3.0),
                max_relative = 1e-12
            );
            assert_relative_eq!(
                c.cross_coeff_k_prime,
                theorem.c2 * one_minus.powf(-1.0 / 6.0),
                max_relative = 1e-12
            );
            assert_relative_eq!(
                c.k_coeff_k_prime,
                theorem.c3 / alpha,
                max_relative = 1e-12
            );
            // K-convention third coefficient is 3/(16πα)
            assert_relative_eq!(
                c.k_coeff_k,
                3.0 / (16.0 * PI * alpha),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn mu_coefficients_power_law_exceed_uniform() {
        let uniform = constants_from_mu(&TrialMu::uniform().constants(), 0.5).unwrap();
        let pl = constants_from_mu(&TrialMu::power_law(1.0).unwrap().constants(), 0.5).unwrap();
        assert!(pl.l_coeff > uniform.l_coeff);
    }

    #[test]
    fn lambda_star_examples() {
        let mu = TrialMu::uniform().constants();
        let l0 = lambda_star(&mu, 0.0).unwrap();
        assert_relative_eq!(l0, (4.0 * PI / 3.0).cbrt(), max_relative = 1e-14);
        assert_relative_eq!(l0, 1.6119919540164696, max_relative = 1e-12);
        // monotone increasing in alpha
        let mut last = l0;
        for &alpha in &[0.2, 0.5, 0.8] {
            let l = lambda_star(&mu, alpha).unwrap();
            assert!(l > last);
            last = l;
        }
        // substituting λ* reproduces the optimized first bracket
        for &alpha in &[0.0, 0.3, 0.7] {
            let lam = lambda_star(&mu, alpha).unwrap();
            let first = mu.m1 / ((1.0 - alpha) * lam * lam) + lam * mu.d_mu;
            let optimized = 3.0 * mu.m1.cbrt() * mu.d_mu.powf(2.0 / 3.0)
                / (2.0f64.powf(2.0 / 3.0) * (1.0f64 - alpha).cbrt());
            assert_relative_eq!(first, optimized, max_relative = 1e-12);
        }
    }

    #[test]
    fn intermediate_bound_scan_and_equality() {
        let mu = TrialMu::uniform().constants();
        let (l, alpha) = (1.0, 0.5);
        let k = K_FROM_K_PRIME; // K' = 1 in paper convention
        let lam_star = lambda_star(&mu, alpha).unwrap();
        // scan: the first bracket is minimized at λ*
        let bracket = |lam: f64| mu.m1 / ((1.0 - alpha) * lam * lam) + lam * mu.d_mu;
        let mut best = (f64::INFINITY, 0.0);
        let n = 40_000;
        for i in 0..=n {
            let lam = lam_star * 0.1 * (100.0f64).powf(i as f64 / n as f64);
            if bracket(lam) < best.0 {
                best = (bracket(lam), lam);
            }
        }
        assert_relative_eq!(best.1, lam_star, max_relative = 1e-3);
        // at λ* the expression reproduces the theorem bound exactly
        let value = intermediate_bound(l, k, lam_star, alpha, &mu).unwrap();
        let theorem = theorem_bound(l, 1.0, 1.0, alpha).unwrap();
        assert_relative_eq!(value, -theorem.total, max_relative = 1e-12);
        // K = 0 degenerates to the two-term λ trade-off
        let v0 = intermediate_bound(l, 0.0, lam_star, alpha, &mu).unwrap();
        assert_relative_eq!(v0, bracket(lam_star) * l, max_relative = 1e-14);
    }

    #[test]
    fn dirac_and_lieb_oxford_values() {
        assert_relative_eq!(dirac_estimate(10.0, 1.0), -7.386, epsilon = 5e-4);
        assert_eq!(dirac_estimate(0.0, 1.0), 0.0);
        assert_relative_eq!(lieb_oxford_bound(1.0, 1.0, LIEB_OXFORD_C), -1.68, epsilon = 1e-14);
        // ordering: dirac ≥ best-known ≥ 1.68-bound
        let l = 2.7;
        assert!(dirac_estimate(l, 1.0) > lieb_oxford_bound(l, 1.0, BEST_KNOWN_LOWER_C));
        assert!(
            lieb_oxford_bound(l, 1.0, BEST_KNOWN_LOWER_C) > lieb_oxford_bound(l, 1.0, LIEB_OXFORD_C)
        );
        assert_relative_eq!(
            lieb_oxford_bound(l, 1.0, CHAN_HANDY_C) - lieb_oxford_bound(l, 1.0, LIEB_OXFORD_C),
            0.044 * l,
            max_relative = 1e-10
        );
    }

    #[test]
    fn lieb79_reduces_for_single_species() {
        let n = RadialDensity::exponential(1.0, 1.0).unwrap();
        let l = functionals::l43(&n).unwrap().value;
        let species = vec![SpeciesDensity::new(1.0, n.clone()).unwrap()];
        assert_relative_eq!(lieb79_bound(&species).unwrap(), -8.52 * l, max_relative = 1e-8);
        // e = 8: exponent bookkeeping gives −8.52·e^{2/3}·L(ρ) with ρ = e·n
        let species = vec![SpeciesDensity::new(8.0, n.clone()).unwrap()];
        let rho = n.scale_amplitude(8.0).unwrap();
        let l_rho = functionals::l43(&rho).unwrap().value;
        assert_relative_eq!(
            lieb79_bound(&species).unwrap(),
            -8.52 * 8.0f64.powf(2.0 / 3.0) * l_rho,
            max_relative = 1e-8
        );
    }

    #[test]
    fn lieb79_merging_identical_species() {
        let n = RadialDensity::gaussian(1.0, 1.0).unwrap();
        let two = vec![
            SpeciesDensity::new(1.0, n.clone()).unwrap(),
            SpeciesDensity::new(1.0, n.clone()).unwrap(),
        ];
        let merged = vec![SpeciesDensity::new(1.0, n.scale_amplitude(2.0).unwrap()).unwrap()];
        assert_relative_eq!(
            lieb79_bound(&two).unwrap(),
            lieb79_bound(&merged).unwrap(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn lieb_oxford_general_reduces_for_equal_charges() {
        let n = RadialDensity::exponential(1.0, 1.0).unwrap();
        let l = functionals::l43(&n).unwrap().value;
        let single = vec![SpeciesDensity::new(1.0, n.clone()).unwrap()];
        assert_relative_eq!(
            lieb_oxford_general(&single).unwrap(),
            -1.68 * l,
            max_relative = 1e-8
        );
        let e = 8.0f64;
        let rho = n.scale_amplitude(e).unwrap();
        let l_rho = functionals::l43(&rho).unwrap().value;
        let species = vec![SpeciesDensity::new(e, n.clone()).unwrap()];
        assert_relative_eq!(
            lieb_oxford_general(&species).unwrap(),
            -1.68 * e.powf(2.0 / 3.0) * l_rho,
            max_relative = 1e-8
        );
        // zero-charge species contributes nothing
        let padded = vec![
            SpeciesDensity::new(1.0, n.clone()).unwrap(),
            SpeciesDensity::new(0.0, n.clone()).unwrap(),
        ];
        assert_relative_eq!(
            lieb_oxford_general(&padded).unwrap(),
            lieb_oxford_general(&single).unwrap(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn first_term_dominance_grows_with_n() {
        // share of the first term at the optimized α; Q ∝ N^{-1/3} drives it
        // toward 1 (shares recomputed with an independent optimizer:
        // 0.78 at N=1e4, 0.89 at 1e6, 0.95 at 1e8, 0.97 at 1e10).
        let mut last = 0.0;
        for (n, expected) in [
            (1e4, 0.776),
            (1e6, 0.888),
            (1e8, 0.946),
            (1e10, 0.974),
        ] {
            let rho = RadialDensity::exponential_with_charge(n, 1.0).unwrap();
            let l = functionals::l43(&rho).unwrap().value;
            let k = functionals::k_fourier(&rho).unwrap().value;
            let b = optimize_alpha(l, k, 1.0).unwrap();
            let share = b.term1 / b.total;
            assert!(share > expected, "share({n}) = {share}");
            assert!(share > last, "share not increasing at N = {n}");
            last = share;
        }
        assert!(last > 0.95);
    }
}
