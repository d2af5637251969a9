//! Global-best particle swarm with constriction coefficients.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::de::initial_population;
use super::{eval_batch, Objective, OptimizeResult, OptimizerConfig};
use crate::error::Result;

const INERTIA: f64 = 0.7298;
const PULL: f64 = 1.49618;

pub fn particle_swarm(
    f: &dyn Objective,
    config: &OptimizerConfig,
    init: &[f64],
) -> Result<OptimizeResult> {
    let dim = init.len();
    config.validate(dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let np = config.population;
    let mut pos = initial_population(config, init, &mut rng);
    let vmax: Vec<f64> = config
        .bounds
        .iter()
        .map(|(lo, hi)| 0.5 * (hi - lo))
        .collect();
    let mut vel: Vec<Vec<f64>> = (0..np)
        .map(|i| {
            if i == 0 {
                vec![0.0; dim]
            } else {
                vmax.iter()
                    .map(|&m| {
                        if m > 0.0 {
                            rng.random_range(-m..=m) * 0.5
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
        })
        .collect();
    let mut pcost = eval_batch(f, &pos)?;
    let mut pbest = pos.clone();
    let mut evals = np;
    let mut g = (0..np).fold(0, |b, i| if pcost[i] < pcost[b] { i } else { b });
    let mut gbest = pbest[g].clone();
    let mut gcost = pcost[g];
    let mut trace = vec![(evals, gcost)];

    while evals < config.budget && gcost > config.stop_below {
        let take = np.min(config.budget - evals);
        for i in 0..take {
            for j in 0..dim {
                let (r1, r2): (f64, f64) = (rng.random(), rng.random());
                let v = INERTIA * vel[i][j]
                    + PULL * r1 * (pbest[i][j] - pos[i][j])
                    + PULL * r2 * (gbest[j] - pos[i][j]);
                vel[i][j] = v.clamp(-vmax[j], vmax[j]);
                let (lo, hi) = config.bounds[j];
                let x = pos[i][j] + vel[i][j];
                if x < lo || x > hi {
                    vel[i][j] = 0.0;
                }
                pos[i][j] = x.clamp(lo, hi);
            }
        }
        let c = eval_batch(f, &pos[..take])?;
        evals += take;
        for (i, ci) in c.into_iter().enumerate() {
            if ci < pcost[i] {
                pcost[i] = ci;
                pbest[i] = pos[i].clone();
            }
        }
        g = (0..np).fold(g, |b, i| if pcost[i] < pcost[b] { i } else { b });
        if pcost[g] < gcost {
            gcost = pcost[g];
            gbest = pbest[g].clone();
        }
        trace.push((evals, gcost));
    }
    Ok(OptimizeResult {
        best: gbest,
        best_cost: gcost,
        evaluations_used: evals,
        trace,
    })
}
