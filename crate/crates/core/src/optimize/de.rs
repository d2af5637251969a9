//! DE/rand/1/bin with generation-synchronous selection.
//!
//! All trial vectors of a generation are drawn before any is evaluated, so
//! the result does not depend on evaluation order or thread count.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{clamp_into, eval_batch, Objective, OptimizeResult, OptimizerConfig};
use crate::error::Result;

/// Initial population: the clamped warm start plus random members.
pub(crate) fn initial_population(
    config: &OptimizerConfig,
    init: &[f64],
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let mut first = init.to_vec();
    clamp_into(&mut first, &config.bounds);
    let mut pop = Vec::with_capacity(config.population);
    pop.push(first.clone());
    for _ in 1..config.population {
        let x: Vec<f64> = config
            .bounds
            .iter()
            .zip(&first)
            .map(|(&(lo, hi), &c)| {
                if hi <= lo {
                    return lo;
                }
                match config.init_spread {
                    Some(s) => {
                        let w = s * 0.5 * (hi - lo);
                        (c + rng.random_range(-1.0..=1.0) * w).clamp(lo, hi)
                    }
                    None => rng.random_range(lo..=hi),
                }
            })
            .collect();
        pop.push(x);
    }
    pop
}

fn best_of(costs: &[f64]) -> usize {
    let mut b = 0;
    for (i, c) in costs.iter().enumerate() {
        if *c < costs[b] {
            b = i;
        }
    }
    b
}

pub fn differential_evolution(
    f: &dyn Objective,
    config: &OptimizerConfig,
    init: &[f64],
) -> Result<OptimizeResult> {
    let dim = init.len();
    config.validate(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let np = config.population;
    let mut pop = initial_population(config, init, &mut rng);
    let mut costs = eval_batch(f, &pop)?;
    let mut evals = np;
    let mut b = best_of(&costs);
    let mut trace = alloc::vec![(evals, costs[b])];

    while evals < config.budget && costs[b] > config.stop_below {
        let take = np.min(config.budget - evals);
        let mut trials = Vec::with_capacity(take);
        for i in 0..take {
            let (r1, r2, r3) = distinct3(np, i, &mut rng);
            let jrand = rng.random_range(0..dim);
            let parent = &pop[i];
            let mut t = parent.clone();
            for j in 0..dim {
                if j == jrand || rng.random::<f64>() < config.de.cr {
                    let v = pop[r1][j] + config.de.f * (pop[r2][j] - pop[r3][j]);
                    let (lo, hi) = config.bounds[j];
                    // bounce back between the parent and the violated bound
                    t[j] = if v < lo {
                        lo + rng.random::<f64>() * (parent[j] - lo)
                    } else if v > hi {
                        hi - rng.random::<f64>() * (hi - parent[j])
                    } else {
                        v
                    };
                }
            }
            trials.push(t);
        }
        let tc = eval_batch(f, &trials)?;
        evals += take;
        for (i, (t, c)) in trials.into_iter().zip(tc).enumerate() {
            if c <= costs[i] {
                pop[i] = t;
                costs[i] = c;
            }
        }
        b = best_of(&costs);
        trace.push((evals, costs[b]));
    }
    Ok(OptimizeResult {
        best: pop[b].clone(),
        best_cost: costs[b],
        evaluations_used: evals,
        trace,
    })
}

fn distinct3(np: usize, i: usize, rng: &mut ChaCha8Rng) -> (usize, usize, usize) {
    let mut pick = |avoid: &[usize]| loop {
        let r = rng.random_range(0..np);
        if !avoid.contains(&r) {
            return r;
        }
    };
    let r1 = pick(&[i]);
    let r2 = pick(&[i, r1]);
    let r3 = pick(&[i, r1, r2]);
    (r1, r2, r3)
}
