//! Damped-term expansion of the Gaussian kernel.
//!
//! `e^(-t^2) = sum_n a_n |t|^n e^(-b_n |t|) + eps_N(t)`, where the term index
//! `n` is also the power of `|t|`. The two-term instance with
//! `(a_0, b_0) = (1, 5.5)` and `(a_1, b_1) = (5.5, 2.75)` is the one the
//! rational pseudo-Voigt formulas are built on.

use argmin::core::{CostFunction, Executor, State, TerminationReason, TerminationStatus};
use argmin::solver::neldermead::NelderMead;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub alpha: f64,
    pub beta: f64,
}

impl Term {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        Term { alpha, beta }
    }
}

/// Ordered coefficient pairs `(a_n, b_n)`, `n = 0..=N`.
///
/// Always non-empty, with every coefficient finite and every `b_n > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelExpansion {
    terms: Vec<Term>,
}

impl KernelExpansion {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("expansion needs at least one term"));
        }
        for (n, term) in terms.iter().enumerate() {
            if !term.alpha.is_finite() || !term.beta.is_finite() {
                return Err(Error::domain(format!(
                    "term {n} has a non-finite coefficient"
                )));
            }
            if term.beta <= 0.0 {
                return Err(Error::domain(format!(
                    "term {n} has beta = {} but every beta must be positive",
                    term.beta
                )));
            }
        }
        Ok(KernelExpansion { terms })
    }

    /// The two-term expansion `e^(-5.5|t|) + 5.5|t| e^(-2.75|t|)`.
    pub fn standard() -> Self {
        KernelExpansion {
            terms: vec![Term::new(1.0, 5.5), Term::new(5.5, 2.75)],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Highest power of `|t|` in the series.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    /// Evaluates the series without checking `t`.
    pub(crate) fn eval_unchecked(&self, t: f64) -> f64 {
        let a = t.abs();
        let mut power = 1.0;
        let mut sum = 0.0;
        for term in &self.terms {
            sum += term.alpha * power * (-term.beta * a).exp();
            power *= a;
        }
        sum
    }
}

fn check_finite(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("t must be finite, got {t}")))
    }
}

/// `sum_n a_n |t|^n e^(-b_n |t|)`. Even in `t` bit for bit, since only `|t|` is used.
pub fn evaluate_expansion(expansion: &KernelExpansion, t: f64) -> Result<f64> {
    check_finite(t)?;
    Ok(expansion.eval_unchecked(t))
}

/// Residual `e^(-t^2) - evaluate_expansion(expansion, t)`.
pub fn epsilon_error(expansion: &KernelExpansion, t: f64) -> Result<f64> {
    check_finite(t)?;
    Ok((-t * t).exp() - expansion.eval_unchecked(t))
}

/// Half-line approximation `e^(-t^2/4) ~ e^(-gamma t) + gamma t e^(-gamma t / 2)`, `t >= 0`.
///
/// With `gamma = 2.75` this is the standard expansion evaluated at `t / 2`.
pub fn half_kernel_approx(t: f64, gamma: f64) -> Result<f64> {
    check_finite(t)?;
    if t < 0.0 {
        return Err(Error::domain(format!("t must be non-negative, got {t}")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!(
            "gamma must be positive and finite, got {gamma}"
        )));
    }
    Ok((-gamma * t).exp() + gamma * t * (-gamma * t / 2.0).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitObjective {
    /// Root-mean-square residual over the grid.
    L2,
    /// Largest absolute residual over the grid.
    Linf,
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    pub objective: FitObjective,
    pub t_max: f64,
    /// Number of grid intervals on `[0, t_max]`.
    pub grid_intervals: usize,
    /// Nelder-Mead iteration cap per run.
    pub max_iters: u64,
    /// Simplex cost standard deviation at which a run counts as converged.
    pub sd_tolerance: f64,
    /// Single starting point; replaces the multi-start grid when set.
    pub initial: Option<KernelExpansion>,
}

impl FitOptions {
    pub fn new(t_max: f64, objective: FitObjective) -> Self {
        FitOptions {
            objective,
            t_max,
            grid_intervals: 2000,
            max_iters: 20_000,
            sd_tolerance: 1e-13,
            initial: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub expansion: KernelExpansion,
    pub objective: f64,
    /// Total Nelder-Mead iterations spent on the winning start.
    pub iterations: u64,
}

/// Residuals of `expansion` on the uniform fit grid over `[0, t_max]`.
struct FitGrid {
    t: Vec<f64>,
    target: Vec<f64>,
}

impl FitGrid {
    fn new(t_max: f64, intervals: usize) -> Self {
        let step = t_max / intervals as f64;
        let t: Vec<f64> = (0..=intervals).map(|i| i as f64 * step).collect();
        let target = t.iter().map(|&t| (-t * t).exp()).collect();
        FitGrid { t, target }
    }

    fn objective(&self, expansion: &KernelExpansion, objective: FitObjective) -> f64 {
        let residuals = self
            .t
            .iter()
            .zip(&self.target)
            .map(|(&t, &g)| g - expansion.eval_unchecked(t));
        match objective {
            FitObjective::L2 => {
                let ss: f64 = residuals.map(|r| r * r).sum();
                (ss / self.t.len() as f64).sqrt()
            }
            FitObjective::Linf => residuals.fold(0.0, |m, r| m.max(r.abs())),
        }
    }
}

/// Objective value of `expansion` on the fitter's grid over `[0, t_max]`.
pub fn objective_value(
    expansion: &KernelExpansion,
    objective: FitObjective,
    t_max: f64,
    grid_intervals: usize,
) -> f64 {
    FitGrid::new(t_max, grid_intervals).objective(expansion, objective)
}

// Free parameters are [ln b_0, a_1, ln b_1, a_2, ln b_2, ...]; a_0 is pinned to 1
// and the log keeps every b_n positive.
fn unpack(params: &[f64]) -> KernelExpansion {
    let mut terms = Vec::with_capacity(params.len() / 2 + 1);
    terms.push(Term::new(1.0, params[0].exp()));
    for pair in params[1..].chunks_exact(2) {
        terms.push(Term::new(pair[0], pair[1].exp()));
    }
    KernelExpansion { terms }
}

fn pack(expansion: &KernelExpansion) -> Vec<f64> {
    let terms = expansion.terms();
    let mut params = vec![terms[0].beta.ln()];
    for term in &terms[1..] {
        params.push(term.alpha);
        params.push(term.beta.ln());
    }
    params
}

struct FitProblem<'a> {
    grid: &'a FitGrid,
    objective: FitObjective,
}

impl CostFunction for FitProblem<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, params: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let expansion = unpack(params);
        let value = self.grid.objective(&expansion, self.objective);
        // Overflowing betas produce NaN; rank those last instead of poisoning the simplex.
        Ok(if value.is_finite() { value } else { f64::MAX })
    }
}

struct RunOutcome {
    params: Vec<f64>,
    cost: f64,
    iterations: u64,
    converged: bool,
}

fn nelder_mead(problem: FitProblem<'_>, start: &[f64], opts: &FitOptions) -> RunOutcome {
    let mut simplex = vec![start.to_vec()];
    for i in 0..start.len() {
        let mut vertex = start.to_vec();
        // even slots hold ln(beta)
        vertex[i] += if i % 2 == 0 {
            0.25
        } else {
            0.1 * start[i].abs().max(1.0)
        };
        simplex.push(vertex);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(opts.sd_tolerance)
        .expect("sd_tolerance is non-negative");
    let result = Executor::new(problem, solver)
        .configure(|state| state.max_iters(opts.max_iters))
        .run()
        .expect("cost function is infallible");
    let state = result.state();
    RunOutcome {
        params: state
            .get_best_param()
            .cloned()
            .unwrap_or_else(|| start.to_vec()),
        cost: state.get_best_cost(),
        iterations: state.get_iter(),
        converged: matches!(
            state.get_termination_status(),
            TerminationStatus::Terminated(TerminationReason::SolverConverged)
        ),
    }
}

const START_BETAS: [f64; 4] = [8.0, 4.0, 2.0, 1.0];

#[allow(clippy::needless_range_loop)]
/// Least-squares amplitudes for terms 1.. given fixed betas, with `a_0 = 1`.
fn initial_alphas(grid: &FitGrid, betas: &[f64]) -> Vec<f64> {
    let m = betas.len() - 1;
    let basis = |k: usize, t: f64| t.powi(k as i32) * (-betas[k] * t).exp();
    let mut normal = vec![vec![0.0; m + 1]; m];
    for (&t, &g) in grid.t.iter().zip(&grid.target) {
        let rhs = g - (-betas[0] * t).exp();
        for i in 0..m {
            let bi = basis(i + 1, t);
            for j in 0..m {
                normal[i][j] += bi * basis(j + 1, t);
            }
            normal[i][m] += bi * rhs;
        }
    }
    solve_augmented(normal).unwrap_or_else(|| vec![1.0; m])
}

#[allow(clippy::needless_range_loop)]
/// Gaussian elimination with partial pivoting on an `m x (m+1)` augmented matrix.
fn solve_augmented(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let m = a.len();
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        for row in col + 1..m {
            let factor = a[row][col] / a[col][col];
            for k in col..=m {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    let mut x = vec![0.0; m];
    for row in (0..m).rev() {
        let tail: f64 = (row + 1..m).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][m] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Beta combinations drawn with replacement from [`START_BETAS`], in a fixed order.
fn start_betas(n_terms: usize) -> Vec<Vec<f64>> {
    fn extend(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == n {
            out.push(prefix.iter().map(|&i| START_BETAS[i]).collect());
            return;
        }
        let from = prefix.last().copied().unwrap_or(0);
        for i in from..START_BETAS.len() {
            prefix.push(i);
            extend(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), n_terms, &mut out);
    out
}

/// Fits `n_terms` coefficient pairs to `e^(-t^2)` on `[0, t_max]`, with `a_0 = 1`.
///
/// Runs Nelder-Mead from every start (or from `opts.initial` alone), keeps the
/// first strictly best result, then restarts the simplex from it until a
/// restart stops improving. Returns [`Error::FitNonConvergence`] with the best
/// expansion found if the final run hits the iteration cap.
pub fn fit_expansion(n_terms: usize, opts: &FitOptions) -> Result<FitResult> {
    if n_terms == 0 {
        return Err(Error::domain("n_terms must be at least 1"));
    }
    if !(opts.t_max > 0.0 && opts.t_max.is_finite()) {
        return Err(Error::domain(format!(
            "t_max must be positive, got {}",
            opts.t_max
        )));
    }
    if opts.grid_intervals == 0 {
        return Err(Error::domain("grid_intervals must be at least 1"));
    }
    let grid = FitGrid::new(opts.t_max, opts.grid_intervals);

    let starts: Vec<Vec<f64>> = match &opts.initial {
        Some(init) => {
            if init.terms().len() != n_terms {
                return Err(Error::domain(format!(
                    "initial expansion has {} terms, expected {n_terms}",
                    init.terms().len()
                )));
            }
            if init.terms()[0].alpha != 1.0 {
                return Err(Error::domain("initial expansion must have alpha_0 = 1"));
            }
            vec![pack(init)]
        }
        None => start_betas(n_terms)
            .into_iter()
            .map(|betas| {
                let alphas = initial_alphas(&grid, &betas);
                let mut params = vec![betas[0].ln()];
                for (a, b) in alphas.iter().zip(&betas[1..]) {
                    params.push(*a);
                    params.push(b.ln());
                }
                params
            })
            .collect(),
    };

    let problem = || FitProblem {
        grid: &grid,
        objective: opts.objective,
    };
    let runs: Vec<RunOutcome> = starts
        .par_iter()
        .map(|start| nelder_mead(problem(), start, opts))
        .collect();

    let mut best = runs
        .into_iter()
        .reduce(|best, run| if run.cost < best.cost { run } else { best })
        .expect("at least one start");

    const MAX_RESTARTS: usize = 20;
    for _ in 0..MAX_RESTARTS {
        let run = nelder_mead(problem(), &best.params, opts);
        let improved = run.cost < best.cost;
        let iterations = best.iterations + run.iterations;
        if improved {
            best = RunOutcome { iterations, ..run };
        } else {
            best.iterations = iterations;
            best.converged = run.converged;
            break;
        }
    }

    let expansion = unpack(&best.params);
    if !best.converged {
        return Err(Error::FitNonConvergence {
            best: expansion,
            objective: best.cost,
            iterations: best.iterations,
        });
    }
    Ok(FitResult {
        expansion,
        objective: best.cost,
        iterations: best.iterations,
    })
}
