//! Composite Gauss–Legendre quadrature with 64 nodes per piece.

use std::sync::OnceLock;

pub const NODES: usize = 64;

struct Rule {
    nodes: [f64; NODES],
    weights: [f64; NODES],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES;
        let mut nodes = [0.0; NODES];
        let mut weights = [0.0; NODES];
        for i in 0..n / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                deriv = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / deriv;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Rule { nodes, weights }
    })
}

/// Integrates a pair of functions over `[lo, hi]`, split at `breaks`.
/// Exact for integrands that are polynomial of degree < 128 on every piece.
pub fn integrate_pair<F>(f: F, lo: f64, hi: f64, breaks: &[f64]) -> (f64, f64)
where
    F: Fn(f64) -> (f64, f64),
{
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| b.is_finite() && *b > lo && *b < hi)
        .collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let rule = rule();
    let mut total = (0.0, 0.0);
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, wt) in rule.nodes.iter().zip(rule.weights.iter()) {
            let (f1, f2) = f(mid + half * x);
            total.0 += wt * half * f1;
            total.1 += wt * half * f2;
        }
    }
    total
}
