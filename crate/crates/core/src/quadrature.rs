//! Paneled Gauss–Legendre quadrature for smooth, oscillatory, exponentially
//! damped integrands on `[0, ∞)`.

use std::f64::consts::PI;

use crate::error::{Result, TrapError};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(order, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy)]
pub struct DampedIntegral {
    pub value: f64,
    /// Difference between the last two panel orders plus the truncated tail
    /// bound.
    pub error_estimate: f64,
    pub upper_limit: f64,
    pub order: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Tail truncation threshold relative to the running integral.
    pub tail_tol: f64,
    pub initial_order: usize,
    pub max_order: usize,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-15,
            tail_tol: 1e-14,
            initial_order: 12,
            max_order: 192,
            max_panels: 200_000,
        }
    }
}

/// Integrates `f` over `[0, ∞)` in panels of width `panel_width`.
///
/// `tail_bound(k)` must bound `∫_k^∞ |f|`; integration stops at the first
/// panel edge where it drops below `tail_tol` times the running integral
/// (or `abs_tol`). The panel order is doubled until two successive totals
/// agree to `rel_tol`.
pub fn integrate_damped<F, T>(f: F, panel_width: f64, tail_bound: T, opts: &QuadratureOptions) -> Result<DampedIntegral>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    if !(panel_width > 0.0) {
        return Err(TrapError::Domain(format!(
            "panel width must be positive, got {panel_width}"
        )));
    }
    let mut order = opts.initial_order;
    let mut previous = integrate_panels(&f, panel_width, &tail_bound, order, opts)?;
    loop {
        let next_order = order * 2;
        let current = integrate_panels(&f, panel_width, &tail_bound, next_order, opts)?;
        let diff = (current.0 - previous.0).abs();
        let tol = opts.rel_tol * current.0.abs() + opts.abs_tol;
        if diff <= tol {
            return Ok(DampedIntegral {
                value: current.0,
                error_estimate: diff + current.2,
                upper_limit: current.1,
                order: next_order,
            });
        }
        if next_order >= opts.max_order {
            return Err(TrapError::numerical("panel order doubling did not converge", diff));
        }
        order = next_order;
        previous = current;
    }
}

fn integrate_panels<F, T>(
    f: &F,
    width: f64,
    tail_bound: &T,
    order: usize,
    opts: &QuadratureOptions,
) -> Result<(f64, f64, f64)>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    let rule = GaussLegendre::new(order);
    let mut sum: f64 = 0.0;
    // Kahan compensation; thousands of panels for near-plane kernels.
    let mut carry = 0.0;
    for panel in 0..opts.max_panels {
        let a = panel as f64 * width;
        let tail = tail_bound(a);
        if panel > 0 && tail <= opts.tail_tol * sum.abs() + 0.1 * opts.abs_tol {
            return Ok((sum, a, tail));
        }
        let y = rule.integrate(f, a, a + width) - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    let k = opts.max_panels as f64 * width;
    Err(TrapError::numerical(
        format!("integrand not negligible at k = {k}"),
        tail_bound(k),
    ))
}

/// Bound on `scale · ∫_k^∞ t^p e^{-c t} dt`, the tail of a polynomially
/// weighted exponential envelope.
pub fn poly_exp_tail(power: u32, rate: f64, k: f64, scale: f64) -> f64 {
    // Γ(p+1, ck)/c^{p+1} = e^{-ck} Σ_j p!/j! k^j / c^{p+1-j}
    let mut total = 0.0;
    let mut factor = 1.0; // p!/j!
    for j in (0..=power).rev() {
        total += factor * k.powi(j as i32) / rate.powi((power + 1 - j) as i32);
        factor *= j.max(1) as f64;
    }
    scale * (-rate * k).exp() * total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for order in [1, 2, 5, 12, 24, 64] {
            let rule = GaussLegendre::new(order);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "order {order}");
            let deg = 2 * order - 1;
            let got = rule.integrate(|x| x.powi(deg as i32 - 1), 0.0, 1.0);
            assert!((got - 1.0 / deg as f64).abs() < 1e-13, "order {order}: {got}");
        }
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        let rule = GaussLegendre::new(17);
        for i in 0..17 {
            assert!((rule.nodes[i] + rule.nodes[16 - i]).abs() < 1e-15);
            if i > 0 {
                assert!(rule.nodes[i] > rule.nodes[i - 1]);
            }
        }
    }

    #[test]
    fn damped_oscillatory_integral() {
        // ∫_0^∞ e^{-k} cos(3k) dk = 1/10
        let got = integrate_damped(
            |k| (-k).exp() * (3.0 * k).cos(),
            PI / 3.0,
            |k| (-k).exp(),
            &QuadratureOptions::default(),
        )
        .unwrap();
        assert!((got.value - 0.1).abs() < 1e-14, "{got:?}");
    }

    #[test]
    fn poly_exp_tail_matches_closed_form() {
        // ∫_k^∞ t^2 e^{-2t} dt = e^{-2k}(k^2/2 + k/2 + 1/4)
        let k: f64 = 1.7;
        let want = (-2.0 * k).exp() * (k * k / 2.0 + k / 2.0 + 0.25);
        assert!((poly_exp_tail(2, 2.0, k, 1.0) - want).abs() < 1e-15);
        assert!((poly_exp_tail(0, 3.0, 0.0, 2.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_panel_width() {
        let r = integrate_damped(|k| k, 0.0, |_| 0.0, &QuadratureOptions::default());
        assert!(r.is_err());
    }
}
