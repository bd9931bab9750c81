//! Primal and dual solvers for target sets with finite support.
//!
//! With `𝒴_R = {y₀ < … < y_K}` the dual problem reduces to minimizing the
//! convex piecewise-linear function
//!
//! ```text
//! Ĵ(g) = Σ_x m(x) max_k (x y_k − g_k) + max_v ⟨g, r^{(v)}⟩,   g₀ = 0,
//! ```
//!
//! whose value is an upper bound on the hull value `χ_R(m)` for every `g`.
//! The primal side maximizes the concave map `λ ↦ χ(m, Σ_v λ_v r^{(v)})`
//! over the simplex by Frank–Wolfe, linearizing with exact single-target
//! potentials. [`duality_gap_report`] runs both and certifies the gap.

use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::scalar::{CompensatedSum, Scalar};
use crate::transport::{chi_generators, chi_single, comonotone_coupling, exact_potentials_single, Coupling, GeneratorSet, HullMode, HullPolicy};
use crate::verify::SplitMix64;

/// Dual variable on the generator support, pinned so that `g[0] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPotential<T> {
    g: Vec<T>,
}

impl<T: Scalar> DualPotential<T> {
    /// Shifts `g` by `−g[0]`; the dual objective is invariant under this shift.
    pub fn new(g: Vec<T>) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&bad) = g.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(bad.to_f64_lossy()));
        }
        Ok(Self::pinned(g))
    }

    pub fn zeros(len: usize) -> Self {
        Self { g: vec![T::zero(); len.max(1)] }
    }

    fn pinned(mut g: Vec<T>) -> Self {
        let g0 = g[0];
        g.iter_mut().for_each(|v| *v -= g0);
        Self { g }
    }

    pub fn values(&self) -> &[T] {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    pub fn into_inner(self) -> Vec<T> {
        self.g
    }
}

/// Iteration budgets, convergence target and restart seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Subgradient iterations.
    pub max_iters: usize,
    /// Frank–Wolfe iterations.
    pub fw_iters: usize,
    /// Converged iff `gap ≤ target_gap · (1 + |primal|)`.
    pub target_gap: T,
    /// Seeds perturbed restarts of the subgradient method.
    pub seed: u64,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            fw_iters: 2_000,
            target_gap: T::lit(1e-6),
            seed: 0,
        }
    }
}

impl<T: Scalar> SolverOptions<T> {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::BadOptions("max_iters must be positive".into()));
        }
        if self.fw_iters == 0 {
            return Err(Error::BadOptions("fw_iters must be positive".into()));
        }
        if !(self.target_gap.is_finite() && self.target_gap > T::zero()) {
            return Err(Error::BadOptions(format!("target_gap = {} must be positive", self.target_gap)));
        }
        Ok(())
    }

    fn converged(&self, gap: T, primal: T) -> bool {
        gap <= self.target_gap * (T::one() + primal.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    IterLimit,
}

fn check_len<T: Scalar>(set: &GeneratorSet<T>, g: &DualPotential<T>) {
    assert_eq!(g.len(), set.support().len(), "dual potential must match the generator support");
}

/// `max_k x y_k − g_k` and its argmax (lowest index on ties).
pub fn eval_conjugate<T: Scalar>(g: &DualPotential<T>, set: &GeneratorSet<T>, x: T) -> (T, usize) {
    check_len(set, g);
    let mut best = (T::neg_infinity(), 0);
    for (k, (&y, &gk)) in set.support().iter().zip(&g.g).enumerate() {
        let v = x * y - gk;
        if v > best.0 {
            best = (v, k);
        }
    }
    best
}

/// `max_v ⟨g, r^{(v)}⟩` and its argmax (lowest index on ties).
pub fn support_function<T: Scalar>(set: &GeneratorSet<T>, g: &DualPotential<T>) -> (T, usize) {
    check_len(set, g);
    let mut best = (T::neg_infinity(), 0);
    for (v, r) in set.vertices().iter().enumerate() {
        let mut acc = CompensatedSum::new();
        r.iter().zip(&g.g).for_each(|(&w, &gk)| acc.add(w * gk));
        if acc.value() > best.0 {
            best = (acc.value(), v);
        }
    }
    best
}

/// `Ĵ(g)`; an upper bound on `χ` over the convex hull of the vertices.
pub fn dual_objective<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, g: &DualPotential<T>) -> T {
    dual_subgradient(m, set, g).0
}

/// `Ĵ(g)` with a subgradient `s` (`s[0] = 0`): `s_k = r^{(v*)}_k − q_k`,
/// where `q_k` is the `m`-mass whose conjugate argmax is `k`.
pub fn dual_subgradient<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, g: &DualPotential<T>) -> (T, Vec<T>) {
    let mut acc = CompensatedSum::new();
    let mut q = vec![T::zero(); set.support().len()];
    for (x, w) in m.atoms() {
        let (v, k) = eval_conjugate(g, set, x);
        acc.add(w * v);
        q[k] += w;
    }
    let (sigma, vstar) = support_function(set, g);
    acc.add(sigma);
    let r = &set.vertices()[vstar];
    let mut s: Vec<T> = r.iter().zip(&q).map(|(&rk, &qk)| rk - qk).collect();
    s[0] = T::zero();
    (acc.value(), s)
}

/// `g̃ = (g*|_{supp m})*` on the generator support, re-pinned.
///
/// Pointwise `g̃ ≤ g` and `g̃* = g*` on `supp(m)`, so `Ĵ(g̃) ≤ Ĵ(g)`. When
/// the evaluated objective of `g̃` exceeds that of `g` (round-off only), `g`
/// is returned unchanged.
pub fn double_conjugate_refine<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, g: &DualPotential<T>) -> DualPotential<T> {
    let refined = biconjugate(m, set, g);
    if dual_objective(m, set, &refined) <= dual_objective(m, set, g) {
        refined
    } else {
        g.clone()
    }
}

fn biconjugate<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, g: &DualPotential<T>) -> DualPotential<T> {
    let f: Vec<T> = m.positions().iter().map(|&x| eval_conjugate(g, set, x).0).collect();
    let refined = set
        .support()
        .iter()
        .map(|&y| {
            m.positions()
                .iter()
                .zip(&f)
                .fold(T::neg_infinity(), |acc, (&x, &fx)| acc.max(x * y - fx))
        })
        .collect();
    DualPotential::pinned(refined)
}

/// Outcome of [`solve_dual_subgradient`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution<T> {
    pub g: DualPotential<T>,
    pub value: T,
    /// Best objective after each iteration.
    pub trace: Vec<T>,
    pub iterations: usize,
    /// Best primal lower bound known at exit.
    pub lower_bound: T,
    /// Mixture weights attaining `lower_bound`.
    pub lambda: Vec<T>,
    pub status: Status,
}

/// Minimizes `Ĵ` by projected subgradient descent from `g = 0`.
///
/// The best vertex value is the initial primal lower bound; it is raised
/// along the way by averaging the vertices selected by the support function.
pub fn solve_dual_subgradient<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, opts: &SolverOptions<T>) -> Result<DualSolution<T>> {
    opts.validate()?;
    let best = chi_generators(m, set, HullPolicy::LowerBound)?;
    let mut lambda = vec![T::zero(); set.num_vertices()];
    lambda[best.vertex] = T::one();
    let start = DualPotential::zeros(set.support().len());
    Ok(subgradient_from(m, set, opts, start, (lambda, best.value)))
}

/// Polyak steps `γ (Ĵ(g) − lower) / ‖s‖²`; a factor close to 2 keeps
/// progress on ill-conditioned supports (clustered `y_k`).
const POLYAK_FACTOR: f64 = 1.9;
/// Iterations without a new best before a perturbed restart.
const STALL_ITERS: usize = 5_000;
/// Window length for primal recovery.
const RECOVERY_WINDOW: usize = 250;

/// Subgradient descent with Polyak steps toward the primal lower bound.
///
/// The step-weighted average of the vertices selected by the support
/// function over each window is a primal candidate; its transport value is
/// a valid lower bound and replaces the Polyak target when larger.
fn subgradient_from<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, opts: &SolverOptions<T>, start: DualPotential<T>, primal: (Vec<T>, T)) -> DualSolution<T> {
    let (mut lambda, mut lower) = primal;
    let mut rng = SplitMix64::new(opts.seed);
    let nv = set.num_vertices();

    let mut g = start;
    let mut best_g = g.clone();
    let mut best = dual_objective(m, set, &g);
    let mut trace = Vec::new();
    let mut gamma = T::lit(POLYAK_FACTOR);
    let mut since_improvement = 0usize;
    let mut iterations = 0usize;
    let mut window = vec![T::zero(); nv];
    let mut total = vec![T::zero(); nv];

    let recover = |weights: &[T], lambda: &mut Vec<T>, lower: &mut T| {
        let mass = weights.iter().fold(T::zero(), |a, &w| a + w);
        if mass > T::zero() {
            let candidate: Vec<T> = weights.iter().map(|&w| w / mass).collect();
            let value = chi_single(m, &set.mixture(&candidate));
            if value > *lower {
                *lower = value;
                *lambda = candidate;
            }
        }
    };

    while iterations < opts.max_iters && !opts.converged(best - lower, lower) {
        iterations += 1;
        let (value, s) = dual_subgradient(m, set, &g);
        if value < best {
            best = value;
            best_g = g.clone();
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }
        trace.push(best);
        let norm2 = s.iter().fold(T::zero(), |acc, &v| acc + v * v);
        if norm2 == T::zero() {
            break;
        }
        let step = gamma * (value - lower).max(T::zero()) / norm2;
        let (_, vstar) = support_function(set, &g);
        window[vstar] += step;
        total[vstar] += step;
        if iterations.is_multiple_of(RECOVERY_WINDOW) {
            recover(&window, &mut lambda, &mut lower);
            recover(&total, &mut lambda, &mut lower);
            window.iter_mut().for_each(|w| *w = T::zero());
        }
        let mut next: Vec<T> = g.g.iter().zip(&s).map(|(&gk, &sk)| gk - step * sk).collect();

        if since_improvement >= STALL_ITERS {
            // Stalled: shorten the Polyak factor and restart near the best iterate.
            gamma = (gamma * T::lit(0.7)).max(T::lit(0.5));
            let radius = step * norm2.sqrt() * T::lit(0.1);
            next = best_g.g.iter().map(|&gk| gk + radius * T::lit(rng.next_f64() - 0.5)).collect();
            since_improvement = 0;
        }
        g = DualPotential::pinned(next);
    }
    recover(&total, &mut lambda, &mut lower);

    let refined = double_conjugate_refine(m, set, &best_g);
    let refined_value = dual_objective(m, set, &refined);
    if refined_value <= best {
        best = refined_value;
        best_g = refined;
    }
    let status = if opts.converged(best - lower, lower) { Status::Converged } else { Status::IterLimit };
    DualSolution {
        g: best_g,
        value: best,
        trace,
        iterations,
        lower_bound: lower,
        lambda,
        status,
    }
}

/// Outcome of [`primal_frank_wolfe`].
#[derive(Debug, Clone, PartialEq)]
pub struct FrankWolfe<T> {
    /// Mixture weights of the best iterate.
    pub lambda: Vec<T>,
    /// `χ(m, mixture)`, a lower bound for the hull value.
    pub value: T,
    pub mixture: DiscreteMeasure<T>,
    /// Smallest dual objective seen among the linearizing potentials.
    pub upper: T,
    /// Potential attaining `upper`.
    pub g: DualPotential<T>,
    pub iterations: usize,
}

/// Frank–Wolfe ascent of `λ ↦ χ(m, Σ_v λ_v r^{(v)})` over the simplex.
pub fn primal_frank_wolfe<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, opts: &SolverOptions<T>) -> Result<FrankWolfe<T>> {
    if set.mode() != HullMode::ConvexHull {
        return Err(Error::WrongMode { expected: "convex-hull" });
    }
    opts.validate()?;
    Ok(frank_wolfe(m, set, opts))
}

/// Exact potentials of the current mixture, extended to the whole generator
/// support by conjugation.
fn linearization<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, mixture: &DiscreteMeasure<T>) -> DualPotential<T> {
    let pair = exact_potentials_single(m, mixture);
    DualPotential::pinned(set.support().iter().map(|&y| pair.g_at(y)).collect())
}

fn frank_wolfe<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, opts: &SolverOptions<T>) -> FrankWolfe<T> {
    let nv = set.num_vertices();
    let start = chi_generators(m, set, HullPolicy::LowerBound).expect("lower-bound policy accepts any mode");
    let mut lambda = vec![T::zero(); nv];
    lambda[start.vertex] = T::one();

    let mut best_lambda = lambda.clone();
    let mut best_value = start.value;
    let mut best_mixture = set.vertex_measure(start.vertex);
    let mut upper = T::infinity();
    let mut best_g = DualPotential::zeros(set.support().len());
    let mut g_sum = vec![T::zero(); set.support().len()];
    let mut iterations = 0usize;

    let mut mixture = best_mixture.clone();
    while iterations < opts.fw_iters {
        iterations += 1;
        let g = linearization(m, set, &mixture);
        for (acc, &gk) in g_sum.iter_mut().zip(&g.g) {
            *acc += gk;
        }
        let j = dual_objective(m, set, &g);
        if j < upper {
            upper = j;
            best_g = g.clone();
        }
        // Averaged potentials often certify where the last linearization does not.
        let avg = DualPotential::pinned(g_sum.iter().map(|&s| s / T::from_count(iterations)).collect());
        let j_avg = dual_objective(m, set, &avg);
        if j_avg < upper {
            upper = j_avg;
            best_g = avg;
        }
        if opts.converged(upper - best_value, best_value) {
            break;
        }
        let (_, vertex) = support_function(set, &g);
        let step = T::lit(2.0) / T::from_count(iterations + 1);
        lambda.iter_mut().for_each(|l| *l *= T::one() - step);
        lambda[vertex] += step;
        mixture = set.mixture(&lambda);
        let value = chi_single(m, &mixture);
        if value > best_value {
            best_value = value;
            best_lambda = lambda.clone();
            best_mixture = mixture.clone();
        }
    }
    FrankWolfe {
        lambda: best_lambda,
        value: best_value,
        mixture: best_mixture,
        upper,
        g: best_g,
        iterations,
    }
}

/// Certified primal/dual bracket for the hull value.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport<T> {
    pub primal_lower: T,
    pub dual_upper: T,
    /// `dual_upper − primal_lower`.
    pub gap: T,
    /// Mixture weights of the primal witness.
    pub lambda: Vec<T>,
    /// Comonotone plan between `m` and the primal mixture.
    pub coupling: Coupling<T>,
    pub dual_witness: DualPotential<T>,
    /// Best single vertex value, a lower bound that ignores mixing.
    pub vertex_lower: T,
    pub fw_iterations: usize,
    pub dual_iterations: usize,
    pub status: Status,
}

/// Runs Frank–Wolfe, then subgradient descent warm-started from its best
/// potential, and reports both bounds.
///
/// Finite sets are bracketed on their convex-hull closure; the vertex
/// maximum is reported separately as `vertex_lower`.
pub fn duality_gap_report<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, opts: &SolverOptions<T>) -> Result<GapReport<T>> {
    opts.validate()?;
    let vertex_lower = chi_generators(m, set, HullPolicy::LowerBound)?.value;
    let fw = frank_wolfe(m, set, opts);

    let mut dual_g = double_conjugate_refine(m, set, &fw.g);
    let mut dual_upper = dual_objective(m, set, &dual_g);
    let mut dual_iterations = 0;
    let (mut lambda, mut primal_lower, mut mixture) = (fw.lambda, fw.value, fw.mixture);
    // The linearizing potential can sit in a poorly conditioned region, so
    // half of the budget restarts from g = 0.
    let starts = [dual_g.clone(), DualPotential::zeros(set.support().len())];
    let budget = SolverOptions {
        max_iters: opts.max_iters.div_ceil(starts.len()),
        ..*opts
    };
    for start in starts {
        if opts.converged(dual_upper - primal_lower, primal_lower) {
            break;
        }
        let sol = subgradient_from(m, set, &budget, start, (lambda.clone(), primal_lower));
        dual_iterations += sol.iterations;
        if sol.value < dual_upper {
            dual_upper = sol.value;
            dual_g = sol.g;
        }
        if sol.lower_bound > primal_lower {
            primal_lower = sol.lower_bound;
            mixture = set.mixture(&sol.lambda);
            lambda = sol.lambda;
        }
    }
    let gap = dual_upper - primal_lower;
    let status = if opts.converged(gap, primal_lower) { Status::Converged } else { Status::IterLimit };
    Ok(GapReport {
        primal_lower,
        dual_upper,
        gap,
        lambda,
        coupling: comonotone_coupling(m, &mixture),
        dual_witness: dual_g,
        vertex_lower,
        fw_iterations: fw.iterations,
        dual_iterations,
        status,
    })
}
