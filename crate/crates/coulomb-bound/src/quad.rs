//! Gauss–Legendre quadrature, adaptive integration and 1-D minimization.

use std::sync::OnceLock;

use serde::Serialize;

/// Value together with a quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }
}

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights via Newton iteration on the Legendre polynomial roots.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let m = n.div_ceil(2);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nn = n as f64;
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nn + 0.5)).cos();
            loop {
                let (p1, p2) = legendre_pair(n, z);
                let pp = nn * (z * p1 - p2) / (z * z - 1.0);
                let z1 = z;
                z -= p1 / pp;
                if (z - z1).abs() < 1e-15 {
                    nodes[i] = -z;
                    nodes[n - 1 - i] = z;
                    let w = 2.0 / ((1.0 - z * z) * pp * pp);
                    weights[i] = w;
                    weights[n - 1 - i] = w;
                    break;
                }
            }
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Nodes mapped into [a, b] together with scaled weights.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
    }
}

/// (P_n(z), P_{n-1}(z))
fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

fn rule(n: usize) -> &'static GaussLegendre {
    static GL8: OnceLock<GaussLegendre> = OnceLock::new();
    static GL16: OnceLock<GaussLegendre> = OnceLock::new();
    static GL32: OnceLock<GaussLegendre> = OnceLock::new();
    static GL64: OnceLock<GaussLegendre> = OnceLock::new();
    match n {
        8 => GL8.get_or_init(|| GaussLegendre::new(8)),
        16 => GL16.get_or_init(|| GaussLegendre::new(16)),
        32 => GL32.get_or_init(|| GaussLegendre::new(32)),
        64 => GL64.get_or_init(|| GaussLegendre::new(64)),
        _ => panic!("no cached rule of order {n}"),
    }
}

pub fn gl8() -> &'static GaussLegendre {
    rule(8)
}
pub fn gl16() -> &'static GaussLegendre {
    rule(16)
}
pub fn gl32() -> &'static GaussLegendre {
    rule(32)
}
pub fn gl64() -> &'static GaussLegendre {
    rule(64)
}

/// Adaptive Gauss–Legendre on [a, b]: bisect until the GL16/GL32 discrepancy
/// meets the tolerance budget assigned to each subinterval.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Estimate {
    let coarse = gl16().integrate(a, b, f);
    let fine = gl32().integrate(a, b, f);
    let scale = fine.abs().max(abs_tol);
    let tol = (rel_tol * scale).max(abs_tol);
    adaptive_inner(f, a, b, fine, coarse, tol, 48)
}

fn adaptive_inner<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fine: f64,
    coarse: f64,
    tol: f64,
    depth: usize,
) -> Estimate {
    let err = (fine - coarse).abs();
    if err <= tol || depth == 0 || (b - a) < f64::EPSILON * a.abs().max(1.0) {
        return Estimate {
            value: fine,
            error: err,
        };
    }
    let mid = 0.5 * (a + b);
    let lc = gl16().integrate(a, mid, f);
    let lf = gl32().integrate(a, mid, f);
    let rc = gl16().integrate(mid, b, f);
    let rf = gl32().integrate(mid, b, f);
    let left = adaptive_inner(f, a, mid, lf, lc, 0.5 * tol, depth - 1);
    let right = adaptive_inner(f, mid, b, rf, rc, 0.5 * tol, depth - 1);
    Estimate {
        value: left.value + right.value,
        error: left.error + right.error,
    }
}

/// Integrate g(r)·sin(w·r) over [a, b] with panels short enough to resolve
/// both the oscillation and the smooth factor.
pub fn integrate_sin<F: Fn(f64) -> f64>(g: &F, w: f64, a: f64, b: f64, smooth_scale: f64) -> f64 {
    let period = 2.0 * std::f64::consts::PI / w.abs().max(1e-300);
    let width = (period / 3.0).min(smooth_scale / 4.0).min(b - a);
    let n = (((b - a) / width).ceil() as usize).clamp(1, 400_000);
    let h = (b - a) / n as f64;
    let rule = gl8();
    let mut sum = 0.0;
    for i in 0..n {
        let lo = a + i as f64 * h;
        sum += rule.integrate(lo, lo + h, |r| g(r) * (w * r).sin());
    }
    sum
}

/// Golden-section minimizer of a unimodal function on [a, b].
///
/// Returns `(x_min, f_min)` after shrinking the bracket below `x_tol`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > x_tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
