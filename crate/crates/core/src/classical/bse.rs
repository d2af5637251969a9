//! Backward-Euler Black–Scholes references in one and two dimensions.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::{
    basket_put_payoff, physical_grid, physical_grid_2d, put_payoff, BoundaryMode, Trajectory,
};
use crate::costfn::bse1d::Bse1dProblem;
use crate::costfn::bse2d::Bse2dProblem;
use crate::error::{bail, Result};
use crate::evolve::{reflect_2d, reflect_for_dirichlet};
use crate::fft::{forward_2d, inverse_2d, FftPlan};
use crate::math::{exp, powi, sincos, PI};
use crate::state::Grid1D;
use crate::C64;

fn lu_solve(m: DMatrix<f64>, rhs: &[f64]) -> Result<Vec<f64>> {
    match m.lu().solve(&DVector::from_column_slice(rhs)) {
        Some(x) if x.iter().all(|v| v.is_finite()) => Ok(x.iter().copied().collect()),
        _ => bail!(Numeric, "scheme matrix is singular"),
    }
}

/// `(∂² − ∂)v` by central differences; periodic or interior-only.
fn chi_stencil(v: &[f64], h: f64, periodic: bool) -> Vec<f64> {
    let np = v.len();
    let (a, b) = (0.5 / h, 1.0 / (h * h));
    let mut out = vec![0.0; np];
    for i in 0..np {
        let (l, r) = if periodic {
            ((i + np - 1) % np, (i + 1) % np)
        } else if i == 0 || i + 1 == np {
            continue;
        } else {
            (i - 1, i + 1)
        };
        out[i] = b * (v[r] + v[l] - 2.0 * v[i]) - a * (v[r] - v[l]);
    }
    out
}

/// Scheme matrix `α + γ∂² − β∂ + κ D_χ(∂² − ∂)`; boundary rows left empty
/// in Dirichlet mode.
fn bse1d_matrix(
    p: &Bse1dProblem,
    np: usize,
    h: f64,
    periodic: bool,
    chi: Option<&[f64]>,
) -> DMatrix<f64> {
    let (a, b) = (0.5 / h, 1.0 / (h * h));
    let (al, be, ga) = (p.alpha(), p.beta(), p.gamma());
    let k = p.kappa();
    let mut m = DMatrix::zeros(np, np);
    for i in 0..np {
        let (l, r) = if periodic {
            ((i + np - 1) % np, (i + 1) % np)
        } else if i == 0 || i + 1 == np {
            continue;
        } else {
            (i - 1, i + 1)
        };
        let c = chi.map_or(0.0, |c| k * c[i]);
        m[(i, i)] += al - 2.0 * (ga + c) * b;
        m[(i, r)] += (ga + c) * b - (be + c) * a;
        m[(i, l)] += (ga + c) * b + (be + c) * a;
    }
    m
}

/// 1D Black–Scholes (optionally with the nonlinear volatility term) from
/// `problem.t` for `steps` steps of `problem.tau`.
///
/// `problem.grid` is the ansatz grid. Dirichlet mode works on its physical
/// half and pins `V(x_min) = K(1 − rτ)^{-j} − e^{x_min}` and `V(x_max) = 0`;
/// periodic mode uses the full grid. `initial` defaults to the put payoff
/// (reflected in periodic mode).
pub fn solve_bse1d_classical(
    problem: &Bse1dProblem,
    mode: BoundaryMode,
    steps: usize,
    initial: Option<&[f64]>,
) -> Result<Trajectory> {
    let (grid, periodic) = match mode {
        BoundaryMode::DirichletExact => (physical_grid(&problem.grid), false),
        BoundaryMode::PeriodicReflected => (problem.grid, true),
    };
    let np = grid.points();
    let v0 = match initial {
        Some(v) if v.len() == np => v.to_vec(),
        Some(v) => bail!(
            Dimension,
            "initial condition of length {} on {} points",
            v.len(),
            np
        ),
        None => {
            let phys = put_payoff(&physical_grid(&problem.grid), problem.strike);
            if periodic && problem.grid.reflected {
                reflect_for_dirichlet(&phys, &problem.grid)?
            } else {
                phys
            }
        }
    };
    let h = grid.spacing();
    let nonlinear = problem.kappa() != 0.0 || problem.nonlinearity != 0.0;
    let left = |j: usize| problem.strike * powi(problem.alpha(), -(j as i32)) - exp(grid.x0);
    let pin = |m: &mut DMatrix<f64>| {
        if !periodic {
            m[(0, 0)] = 1.0;
            m[(np - 1, np - 1)] = 1.0;
        }
    };
    let mut cached = None;
    let mut traj = Trajectory {
        times: vec![problem.t],
        values: vec![v0],
    };
    for j in 0..steps {
        let mut p = *problem;
        p.t = problem.t + j as f64 * problem.tau;
        let prev = traj.values.last().unwrap();
        let mut rhs = prev.clone();
        if !periodic {
            rhs[0] = left(j + 1);
            rhs[np - 1] = 0.0;
        }
        let next = if nonlinear {
            let chi = chi_stencil(prev, h, periodic);
            let mut m = bse1d_matrix(&p, np, h, periodic, Some(&chi));
            pin(&mut m);
            lu_solve(m, &rhs).map_err(|e| e.at_step(j))?
        } else {
            let lu = cached.get_or_insert_with(|| {
                let mut m = bse1d_matrix(&p, np, h, periodic, None);
                pin(&mut m);
                m.lu()
            });
            match lu.solve(&DVector::from_column_slice(&rhs)) {
                Some(x) if x.iter().all(|v| v.is_finite()) => x.iter().copied().collect(),
                _ => {
                    return Err(crate::Error::Numeric("scheme matrix is singular".into()).at_step(j))
                }
            }
        };
        traj.times.push(p.t + problem.tau);
        traj.values.push(next);
    }
    Ok(traj)
}

/// Per-step values along one edge of the 2D domain: a 1D put with weight
/// `w` on `axis` and effective strike `strike`.
fn edge_values(
    p: &Bse2dProblem,
    axis: &Grid1D,
    sigma: f64,
    strike: f64,
    w: f64,
    steps: usize,
) -> Result<Vec<Vec<f64>>> {
    let np = axis.points();
    let alpha = p.alpha();
    if strike <= 0.0 {
        return Ok(vec![vec![0.0; np]; steps + 1]);
    }
    if w == 0.0 {
        return Ok((0..=steps)
            .map(|j| vec![strike * powi(alpha, -(j as i32)); np])
            .collect());
    }
    let one = Bse1dProblem {
        strike: strike / w,
        rate: p.rate,
        sigma0_sq: sigma * sigma,
        nonlinearity: 0.0,
        maturity: p.maturity,
        tau: p.tau,
        grid: *axis,
        t: p.maturity,
    };
    let tr = solve_bse1d_classical(&one, BoundaryMode::DirichletExact, steps, None)?;
    Ok(tr
        .values
        .into_iter()
        .map(|v| v.into_iter().map(|x| w * x).collect())
        .collect())
}

fn bse2d_dirichlet(p: &Bse2dProblem, steps: usize, initial: Option<&[f64]>) -> Result<Trajectory> {
    let g = physical_grid_2d(&p.grid);
    let (nx, ny) = (g.x.points(), g.y.points());
    let np = nx * ny;
    let v0 = match initial {
        Some(v) if v.len() == np => v.to_vec(),
        Some(v) => bail!(
            Dimension,
            "initial condition of length {} on {} points",
            v.len(),
            np
        ),
        None => basket_put_payoff(&g, p.strike, p.w_x, p.w_y),
    };
    let (ax, bx) = (0.5 / g.x.spacing(), 1.0 / (g.x.spacing() * g.x.spacing()));
    let (ay, by) = (0.5 / g.y.spacing(), 1.0 / (g.y.spacing() * g.y.spacing()));
    let (al, bex, bey, gx, gy, gxy) = (
        p.alpha(),
        p.beta_x(),
        p.beta_y(),
        p.gamma_x(),
        p.gamma_y(),
        p.gamma_xy(),
    );
    let boundary = |kx: usize, ky: usize| kx == 0 || ky == 0 || kx + 1 == nx || ky + 1 == ny;
    let mut m = DMatrix::zeros(np, np);
    for kx in 0..nx {
        for ky in 0..ny {
            let i = g.flatten(kx, ky);
            if boundary(kx, ky) {
                m[(i, i)] = 1.0;
                continue;
            }
            m[(i, i)] += al - 2.0 * gx * bx - 2.0 * gy * by;
            m[(i, g.flatten(kx + 1, ky))] += gx * bx - bex * ax;
            m[(i, g.flatten(kx - 1, ky))] += gx * bx + bex * ax;
            m[(i, g.flatten(kx, ky + 1))] += gy * by - bey * ay;
            m[(i, g.flatten(kx, ky - 1))] += gy * by + bey * ay;
            if gxy != 0.0 {
                let c = gxy * ax * ay;
                m[(i, g.flatten(kx + 1, ky + 1))] += c;
                m[(i, g.flatten(kx - 1, ky - 1))] += c;
                m[(i, g.flatten(kx + 1, ky - 1))] -= c;
                m[(i, g.flatten(kx - 1, ky + 1))] -= c;
            }
        }
    }
    let lu = m.lu();
    let k_low_x = p.strike - p.w_x * exp(g.x.x0);
    let k_low_y = p.strike - p.w_y * exp(g.y.x0);
    let x_lo = edge_values(p, &g.y, p.sigma_y, k_low_x, p.w_y, steps)?;
    let y_lo = edge_values(p, &g.x, p.sigma_x, k_low_y, p.w_x, steps)?;
    let x_hi = if p.w_x > 0.0 {
        vec![vec![0.0; ny]; steps + 1]
    } else {
        edge_values(p, &g.y, p.sigma_y, p.strike, p.w_y, steps)?
    };
    let y_hi = if p.w_y > 0.0 {
        vec![vec![0.0; nx]; steps + 1]
    } else {
        edge_values(p, &g.x, p.sigma_x, p.strike, p.w_x, steps)?
    };
    let mut traj = Trajectory {
        times: vec![p.maturity],
        values: vec![v0],
    };
    for j in 0..steps {
        let mut rhs = traj.values.last().unwrap().clone();
        for ky in 0..ny {
            rhs[g.flatten(0, ky)] = x_lo[j + 1][ky];
            rhs[g.flatten(nx - 1, ky)] = x_hi[j + 1][ky];
        }
        for kx in 0..nx {
            rhs[g.flatten(kx, 0)] = y_lo[j + 1][kx];
            rhs[g.flatten(kx, ny - 1)] = y_hi[j + 1][kx];
        }
        let next: Vec<f64> = match lu.solve(&DVector::from_column_slice(&rhs)) {
            Some(x) if x.iter().all(|v| v.is_finite()) => x.iter().copied().collect(),
            _ => return Err(crate::Error::Numeric("scheme matrix is singular".into()).at_step(j)),
        };
        traj.times.push(p.maturity + (j + 1) as f64 * p.tau);
        traj.values.push(next);
    }
    Ok(traj)
}

/// Fourier symbol of the 2D scheme matrix at frequencies `(jx, jy)`.
fn symbol(p: &Bse2dProblem, jx: usize, jy: usize) -> C64 {
    let g = &p.grid;
    let (sx, cx) = sincos(2.0 * PI * jx as f64 / g.x.points() as f64);
    let (sy, cy) = sincos(2.0 * PI * jy as f64 / g.y.points() as f64);
    let (ax, bx) = (0.5 / g.x.spacing(), 1.0 / (g.x.spacing() * g.x.spacing()));
    let (ay, by) = (0.5 / g.y.spacing(), 1.0 / (g.y.spacing() * g.y.spacing()));
    let dx = C64::new(0.0, 2.0 * ax * sx);
    let dy = C64::new(0.0, 2.0 * ay * sy);
    C64::new(
        p.alpha() + p.gamma_x() * bx * (2.0 * cx - 2.0) + p.gamma_y() * by * (2.0 * cy - 2.0),
        0.0,
    ) - p.beta_x() * dx
        - p.beta_y() * dy
        + p.gamma_xy() * dx * dy
}

fn bse2d_periodic(p: &Bse2dProblem, steps: usize, initial: Option<&[f64]>) -> Result<Trajectory> {
    let g = &p.grid;
    let np = g.points();
    let v0 = match initial {
        Some(v) if v.len() == np => v.to_vec(),
        Some(v) => bail!(
            Dimension,
            "initial condition of length {} on {} points",
            v.len(),
            np
        ),
        None => {
            let phys = basket_put_payoff(&physical_grid_2d(g), p.strike, p.w_x, p.w_y);
            reflect_2d(&phys, g)?
        }
    };
    let (px, py) = (FftPlan::new(g.x.points()), FftPlan::new(g.y.points()));
    let mut inv = vec![C64::new(0.0, 0.0); np];
    for jx in 0..g.x.points() {
        for jy in 0..g.y.points() {
            let s = symbol(p, jx, jy);
            if s.norm() < 1e-300 {
                bail!(
                    Numeric,
                    "scheme matrix is singular at frequency ({jx}, {jy})"
                );
            }
            inv[g.flatten(jx, jy)] = s.inv() / np as f64;
        }
    }
    let mut traj = Trajectory {
        times: vec![p.maturity],
        values: vec![v0],
    };
    for j in 0..steps {
        let mut buf: Vec<C64> = traj
            .values
            .last()
            .unwrap()
            .iter()
            .map(|&v| C64::new(v, 0.0))
            .collect();
        forward_2d(&mut buf, &px, &py);
        for (b, s) in buf.iter_mut().zip(&inv) {
            *b *= s;
        }
        inverse_2d(&mut buf, &px, &py);
        traj.times.push(p.maturity + (j + 1) as f64 * p.tau);
        traj.values.push(buf.iter().map(|z| z.re).collect());
    }
    Ok(traj)
}

/// 2D linear Black–Scholes Backward Euler from `T` for `steps` steps.
///
/// Dirichlet mode solves on the physical quadrant with 1D put solutions on
/// the low edges and zero on the high edges (for positive weights); periodic
/// mode solves on the full reflected grid in Fourier space.
pub fn solve_bse2d_classical(
    problem: &Bse2dProblem,
    mode: BoundaryMode,
    steps: usize,
    initial: Option<&[f64]>,
) -> Result<Trajectory> {
    match mode {
        BoundaryMode::DirichletExact => bse2d_dirichlet(problem, steps, initial),
        BoundaryMode::PeriodicReflected => bse2d_periodic(problem, steps, initial),
    }
}
