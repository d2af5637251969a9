//! Scale line search: every cost is a quadratic in `λ₀` at fixed angles.

use crate::error::{bail, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearch {
    pub scale: f64,
    pub cost: f64,
    pub evaluations: usize,
}

const PHI: f64 = 0.618_033_988_749_894_9;

/// Vertex of the parabola through three probes around `init`.
///
/// Falls back to a golden-section search when the fitted curvature is not
/// positive.
pub fn line_search_scale<F: FnMut(f64) -> Result<f64>>(
    mut cost: F,
    init: f64,
) -> Result<LineSearch> {
    let h = 0.5 * init.abs().max(1e-3);
    let mut probe = |s: f64| -> Result<f64> {
        let c = cost(s)?;
        if !c.is_finite() {
            bail!(Numeric, "cost is not finite at scale {s}");
        }
        Ok(c)
    };
    let f0 = probe(init)?;
    let fp = probe(init + h)?;
    let fm = probe(init - h)?;
    let curv = fp + fm - 2.0 * f0;
    let slope = fp - fm;
    if curv == 0.0 && slope == 0.0 {
        return Ok(LineSearch {
            scale: init,
            cost: f0,
            evaluations: 3,
        });
    }
    if curv > 0.0 {
        let step = -0.5 * h * slope / curv;
        let cost = f0 - slope * slope / (8.0 * curv);
        return Ok(LineSearch {
            scale: init + step,
            cost: cost.max(0.0),
            evaluations: 3,
        });
    }
    // not convex: golden section over a bracket around the best probe
    let (mut a, mut b) = (init - 4.0 * h, init + 4.0 * h);
    let mut evals = 3;
    let mut x1 = b - PHI * (b - a);
    let mut x2 = a + PHI * (b - a);
    let mut f1 = probe(x1)?;
    let mut f2 = probe(x2)?;
    evals += 2;
    for _ in 0..40 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - PHI * (b - a);
            f1 = probe(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + PHI * (b - a);
            f2 = probe(x2)?;
        }
        evals += 1;
    }
    let best = [
        (init, f0),
        (init + h, fp),
        (init - h, fm),
        (x1, f1),
        (x2, f2),
    ]
    .into_iter()
    .fold(
        (init, f64::INFINITY),
        |acc, p| if p.1 < acc.1 { p } else { acc },
    );
    Ok(LineSearch {
        scale: best.0,
        cost: best.1,
        evaluations: evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_vertex_in_three_evaluations() {
        let mut n = 0;
        let r = line_search_scale(
            |s| {
                n += 1;
                Ok((s - 2.0) * (s - 2.0))
            },
            0.7,
        )
        .unwrap();
        assert_eq!(n, 3);
        assert_eq!(r.evaluations, 3);
        assert!((r.scale - 2.0).abs() < 1e-12);
        assert!(r.cost.abs() < 1e-12);
    }

    #[test]
    fn flat_cost_keeps_init() {
        let r = line_search_scale(|_| Ok(1.5), 0.3).unwrap();
        assert_eq!(r.scale, 0.3);
    }

    #[test]
    fn concave_cost_uses_golden_section() {
        // −(s−1)² + 0.1 s⁴ has minima at ±√5; start near the positive one
        let r = line_search_scale(|s| Ok(-(s - 1.0) * (s - 1.0) + 0.1 * s.powi(4)), 1.0).unwrap();
        assert!(r.evaluations > 3);
        assert!(r.cost <= 0.0 + 1e-12 || r.scale > 1.0);
    }

    #[test]
    fn non_finite_probe_is_an_error() {
        let r = line_search_scale(|s| Ok(if s > 1.0 { f64::NAN } else { s }), 1.0);
        assert!(matches!(r, Err(crate::Error::Numeric(_))));
    }
}
