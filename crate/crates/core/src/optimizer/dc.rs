//! Convex-concave procedure over one block, with projected gradient as the
//! convex solver.

use super::objective::{Block, Problem, AN_FLOOR};

const ARMIJO_SIGMA: f64 = 1e-4;
const DYKSTRA_MAX_ITERS: usize = 500;

/// Euclidean projection onto `{x >= 0, sum x = total}`.
pub fn project_simplex(y: &[f64], total: f64) -> Vec<f64> {
    if y.is_empty() {
        return Vec::new();
    }
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &v) in u.iter().enumerate() {
        cumsum += v;
        let candidate = (cumsum - total) / (j + 1) as f64;
        if v - candidate > 0.0 {
            theta = candidate;
        }
    }
    y.iter().map(|&v| (v - theta).max(0.0)).collect()
}

/// Projection onto `{x >= 0, lo <= sum x <= hi}`.
pub fn project_band(y: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let clipped: Vec<f64> = y.iter().map(|&v| v.max(0.0)).collect();
    let s: f64 = clipped.iter().sum();
    if s > hi {
        project_simplex(y, hi)
    } else if s < lo {
        project_simplex(y, lo)
    } else {
        clipped
    }
}

/// Projection onto `{a . x >= 0}`.
pub fn project_halfspace(y: &[f64], a: &[f64]) -> Vec<f64> {
    let dot: f64 = y.iter().zip(a).map(|(p, q)| p * q).sum();
    if dot >= 0.0 {
        return y.to_vec();
    }
    let norm2: f64 = a.iter().map(|v| v * v).sum();
    y.iter().zip(a).map(|(p, q)| p - dot / norm2 * q).collect()
}

/// Dykstra's alternating projection onto the capped simplex
/// `{x >= 0, sum x <= cap}` intersected with `{a . x >= 0}`. The capped simplex
/// is applied last so the budget holds exactly.
pub fn project_capped_cone(y: &[f64], cap: f64, a: &[f64], tol: f64) -> Vec<f64> {
    let n = y.len();
    let mut x = y.to_vec();
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];
    for _ in 0..DYKSTRA_MAX_ITERS {
        let xp: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + b).collect();
        let u = project_band(&xp, 0.0, cap);
        p = xp.iter().zip(&u).map(|(a, b)| a - b).collect();
        let uq: Vec<f64> = u.iter().zip(&q).map(|(a, b)| a + b).collect();
        let next = project_halfspace(&uq, a);
        q = uq.iter().zip(&next).map(|(a, b)| a - b).collect();
        let change = max_abs_diff(&next, &x);
        x = next;
        if change <= tol {
            break;
        }
    }
    project_band(&x, 0.0, cap)
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

#[derive(Debug, Clone)]
pub struct PgOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iters: usize,
    /// Backtracking ran out before an acceptable step was found.
    pub stalled: bool,
}

/// Projected gradient with a Barzilai-Borwein trial step and Armijo
/// backtracking along the projection arc. `f` returns `None` outside the
/// domain; such trial points are treated as failures of the sufficient
/// decrease test. Stops when the unbacktracked step moves less than `tol` in
/// the max norm.
pub fn projected_gradient(
    f: impl Fn(&[f64]) -> Option<f64>,
    grad: impl Fn(&[f64]) -> Vec<f64>,
    project: impl Fn(&[f64]) -> Vec<f64>,
    x0: &[f64],
    tol: f64,
    max_iters: usize,
    max_backtracks: usize,
) -> PgOutcome {
    let mut x = x0.to_vec();
    let Some(mut fx) = f(&x) else {
        return PgOutcome { x, value: f64::NAN, iters: 0, stalled: true };
    };
    let mut g = grad(&x);
    let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if gmax == 0.0 {
        return PgOutcome { x, value: fx, iters: 0, stalled: false };
    }
    let xmax = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut step = xmax.max(tol) / gmax;

    for iter in 0..max_iters {
        let mut s = step;
        let mut trial = project(&step_along(&x, &g, s));
        if max_abs_diff(&trial, &x) <= tol {
            return PgOutcome { x, value: fx, iters: iter, stalled: false };
        }
        let mut accepted = None;
        for _ in 0..=max_backtracks {
            let d: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
            if let Some(v) = f(&trial) {
                if v <= fx + ARMIJO_SIGMA * dot(&g, &d) {
                    accepted = Some(v);
                    break;
                }
            }
            s *= 0.5;
            trial = project(&step_along(&x, &g, s));
        }
        let Some(v) = accepted else {
            return PgOutcome { x, value: fx, iters: iter, stalled: true };
        };
        let g_new = grad(&trial);
        let dx: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
        let dg: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let curv = dot(&dx, &dg);
        step = if curv > 0.0 { dot(&dx, &dx) / curv } else { 2.0 * s };
        step = step.clamp(1e-300, 1e300);
        x = trial;
        fx = v;
        g = g_new;
    }
    PgOutcome { x, value: fx, iters: max_iters, stalled: false }
}

fn step_along(x: &[f64], g: &[f64], s: f64) -> Vec<f64> {
    x.iter().zip(g).map(|(a, b)| a - s * b).collect()
}

impl Problem {
    /// Projection onto the block's convex feasible set with the other block
    /// held at its value in `x0`. The `C_s` constraint is not part of it; the
    /// objective rejects points that violate it.
    pub(crate) fn block_projection(&self, block: Block, x0: &[f64]) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
        let k = self.k;
        let r = self.coeff;
        let c = self.ratio_c;
        let fixed_an = self.an(x0);
        let fixed_signal: Vec<f64> = x0[..k].to_vec();
        let fixed_sum: f64 = fixed_signal.iter().sum();
        let p_max = self.p_max;
        let mut normal = vec![r; k];
        normal.push(-c);
        move |y: &[f64]| match block {
            Block::Signal => {
                let mut hi = (p_max - fixed_an).max(0.0);
                if r < 0.0 {
                    hi = hi.min(c.abs() * fixed_an / r.abs());
                }
                let mut out = project_band(&y[..k], 0.0, hi);
                out.push(fixed_an);
                out
            }
            Block::ArtificialNoise => {
                let mut lo = AN_FLOOR * p_max;
                if r < 0.0 && fixed_sum > 0.0 {
                    lo = lo.max(if c == 0.0 { f64::INFINITY } else { r.abs() * fixed_sum / c.abs() });
                }
                let hi = p_max - fixed_sum;
                let mut out = fixed_signal.clone();
                out.push(if lo > hi { y[k] } else { y[k].clamp(lo, hi) });
                out
            }
            Block::Joint => {
                let mut out = project_capped_cone(y, p_max, &normal, 1e-14 * p_max);
                out[k] = out[k].max(AN_FLOOR * p_max);
                out
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct DcOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    /// Convex subproblems solved.
    pub iters: usize,
    pub pg_iters: usize,
    pub stalled: bool,
}

pub(crate) struct DcSettings {
    pub tol: f64,
    pub max_iters: usize,
    pub pg_max_iters: usize,
    pub max_backtracks: usize,
}

/// Convex-concave procedure on one block of the penalized objective.
pub(crate) fn ccp(
    problem: &Problem,
    block: Block,
    eta: f64,
    omega: f64,
    start: &[f64],
    settings: &DcSettings,
) -> DcOutcome {
    let mut x = start.to_vec();
    let Some(mut value) = problem.penalized(&x, eta, omega) else {
        return DcOutcome { x, value: f64::NAN, iters: 0, pg_iters: 0, stalled: true };
    };
    let tol = settings.tol * problem.p_max;
    let mut pg_iters = 0;
    let mut stalled = false;
    let mut iters = 0;
    while iters < settings.max_iters {
        iters += 1;
        let lin = problem.subtracted_grad(block, &x, omega);
        let surrogate = |y: &[f64]| Some(problem.convex_part(block, y, eta, omega)? - dot(&lin, y));
        let grad = |y: &[f64]| {
            let mut g = problem.convex_grad(block, y, eta, omega);
            g.iter_mut().zip(&lin).for_each(|(a, b)| *a -= b);
            g
        };
        let project = problem.block_projection(block, &x);
        let out = projected_gradient(surrogate, grad, project, &x, tol, settings.pg_max_iters, settings.max_backtracks);
        pg_iters += out.iters;
        stalled |= out.stalled;
        let moved = max_abs_diff(&out.x, &x);
        match problem.penalized(&out.x, eta, omega) {
            Some(v) if v <= value => {
                x = out.x;
                value = v;
            }
            _ => break,
        }
        if moved <= tol {
            break;
        }
    }
    DcOutcome { x, value, iters, pg_iters, stalled }
}
