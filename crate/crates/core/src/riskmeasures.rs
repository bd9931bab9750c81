//! Named risk measures and dispatch over a [`RiskSpec`].
//!
//! * CV@R at level `β`: tail average of the upper `1 − β` mass, equal to the
//!   Rockafellar–Uryasev infimum `inf_t t + E[(X − t)_+] / (1 − β)` and to
//!   transport against `r_β = β δ₀ + (1 − β) δ_{1/(1−β)}`.
//! * Higher-moment measure `ρ_{p,c}(X) = inf_t t + c ‖(X − t)_+‖_p`, with a
//!   closed-form dual certificate.
//! * Mixtures `Σ_j w_j CV@R_{β_j}`, mapped to a single target measure `r_μ`
//!   whose quantile function is `ψ_μ(t) = Σ_{β_j ≤ t} w_j / (1 − β_j)`.

use crate::dualsolver::{duality_gap_report, SolverOptions};
use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::scalar::{compensated_sum, CompensatedSum, Order, Scalar};
use crate::transport::{chi_generators, chi_single, lipschitz_constant, GeneratorSet, HullMode, HullPolicy};

/// Largest admissible mixture level; keeps `1/(1 − β)` bounded.
pub const MAX_MIXTURE_BETA: f64 = 1.0 - 1e-9;

/// Selects a risk measure.
#[derive(Debug, Clone, PartialEq)]
pub enum RiskSpec<T> {
    /// Conditional value at risk, `β ∈ [0, 1)`.
    CVaR { beta: T },
    /// Higher-moment measure with `p ∈ (1, ∞)` and `c > 1`.
    HigherMoment { p: T, c: T },
    /// `Σ_j w_j CV@R_{β_j}` given as `(β_j, w_j)` pairs.
    KusuokaMixture { atoms: Vec<(T, T)> },
    /// Transport against an explicit target set; `p` is the integrability
    /// order used for Lipschitz and moment bounds.
    Explicit { set: GeneratorSet<T>, p: Order<T> },
}

impl<T: Scalar> RiskSpec<T> {
    /// Checks parameter ranges.
    pub fn validate(&self) -> Result<()> {
        match self {
            RiskSpec::CVaR { beta } => check_beta(*beta),
            RiskSpec::HigherMoment { p, c } => check_higher_moment(*p, *c),
            RiskSpec::KusuokaMixture { atoms } => kusuoka_to_measure(atoms).map(|_| ()),
            RiskSpec::Explicit { p, .. } => p.validated().map(|_| ()),
        }
    }

    /// The target set representing this measure, when it is finite.
    ///
    /// `None` for the higher-moment measure, whose target set is not finitely
    /// generated.
    pub fn generator_set(&self) -> Result<Option<GeneratorSet<T>>> {
        Ok(match self {
            RiskSpec::CVaR { beta } => Some(cvar_target_set(*beta)?),
            RiskSpec::HigherMoment { p, c } => {
                check_higher_moment(*p, *c)?;
                None
            }
            RiskSpec::KusuokaMixture { atoms } => Some(GeneratorSet::singleton(kusuoka_to_measure(atoms)?.image_measure())?),
            RiskSpec::Explicit { set, .. } => Some(set.clone()),
        })
    }

    /// Integrability order `p` and Lipschitz constant `L_R = sup_R ℳ_q(r)`.
    ///
    /// Single-target measures with bounded targets use `p = 1`, `q = ∞`; the
    /// higher-moment measure uses its own `p` and `L = c`.
    pub fn lipschitz(&self) -> Result<(Order<T>, T)> {
        match self {
            RiskSpec::HigherMoment { p, c } => {
                check_higher_moment(*p, *c)?;
                Ok((Order::Finite(*p), *c))
            }
            RiskSpec::Explicit { set, p } => {
                let p = p.validated()?;
                Ok((p, lipschitz_constant(set, p.conjugate())?))
            }
            _ => {
                let set = self.generator_set()?.expect("finitely generated");
                Ok((Order::Finite(T::one()), lipschitz_constant(&set, Order::Infinity)?))
            }
        }
    }
}

fn check_beta<T: Scalar>(beta: T) -> Result<()> {
    if beta >= T::zero() && beta < T::one() {
        Ok(())
    } else {
        Err(Error::out_of_range("beta", beta.to_f64_lossy()))
    }
}

fn check_higher_moment<T: Scalar>(p: T, c: T) -> Result<()> {
    if !(p.is_finite() && p > T::one()) {
        return Err(Error::InvalidParams(format!("higher-moment order p = {p} must lie in (1, inf)")));
    }
    if !(c.is_finite() && c > T::one()) {
        return Err(Error::InvalidParams(format!("higher-moment constant c = {c} must exceed 1")));
    }
    Ok(())
}

/// CV@R_β as the average of the upper `1 − β` mass; the atom straddling the
/// β-quantile contributes proportionally.
pub fn cvar<T: Scalar>(m: &DiscreteMeasure<T>, beta: T) -> Result<T> {
    check_beta(beta)?;
    if beta == T::zero() {
        return Ok(m.expectation());
    }
    let partition = m.quantile_partition();
    let mut acc = CompensatedSum::new();
    let mut prev = T::zero();
    for (&b, &x) in partition.breakpoints().iter().zip(partition.values()) {
        let lo = prev.max(beta);
        if b > lo {
            acc.add((b - lo) * x);
        }
        prev = b;
    }
    Ok(acc.value() / (T::one() - beta))
}

/// The target measure `r_β = β δ₀ + (1 − β) δ_{1/(1−β)}` (`δ₁` when `β = 0`).
pub fn cvar_target_measure<T: Scalar>(beta: T) -> Result<DiscreteMeasure<T>> {
    check_beta(beta)?;
    if beta == T::zero() {
        return Ok(DiscreteMeasure::dirac(T::one()));
    }
    let top = T::one() - beta;
    DiscreteMeasure::from_atoms(&[(T::zero(), beta), (T::one() / top, top)])
}

/// Singleton generator set `{r_β}`.
pub fn cvar_target_set<T: Scalar>(beta: T) -> Result<GeneratorSet<T>> {
    check_beta(beta)?;
    if beta == T::zero() {
        return GeneratorSet::new(vec![T::one()], vec![vec![T::one()]], HullMode::FiniteSet);
    }
    let top = T::one() - beta;
    GeneratorSet::new(vec![T::zero(), T::one() / top], vec![vec![beta, top]], HullMode::FiniteSet)
}

/// Value and minimizer of the higher-moment objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HigherMoment<T> {
    pub value: T,
    pub t_star: T,
}

/// Dual certificate `(t̄, ū)` and the dual objective it attains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HigherMomentCertificate<T> {
    pub t_bar: T,
    pub u_bar: T,
    pub dual_value: T,
}

fn upper_partial_moment<T: Scalar>(m: &DiscreteMeasure<T>, t: T, p: T) -> T {
    compensated_sum(m.atoms().filter(|&(x, _)| x > t).map(|(x, w)| w * (x - t).powf(p)))
}

fn higher_moment_objective<T: Scalar>(m: &DiscreteMeasure<T>, t: T, p: T, c: T) -> T {
    t + c * upper_partial_moment(m, t, p).powf(T::one() / p)
}

/// `ρ_{p,c}(m) = inf_t t + c (Σ w (x − t)_+^p)^{1/p}` by golden-section search.
///
/// The objective is convex, equals `t` for `t ≥ max x`, and for `c` close to
/// one its minimizer can sit far below the support, so the left end of the
/// bracket is pushed out geometrically until the objective stops
/// decreasing. The final iterate is compared with the nearest support atom
/// and the support maximum, where the objective has kinks.
pub fn higher_moment<T: Scalar>(m: &DiscreteMeasure<T>, p: T, c: T) -> Result<HigherMoment<T>> {
    check_higher_moment(p, c)?;
    let range = m.range();
    if range == T::zero() {
        return Ok(HigherMoment {
            value: m.min(),
            t_star: m.min(),
        });
    }
    let h = |t: T| higher_moment_objective(m, t, p, c);

    let mut lo = m.min() - range;
    let mut step = range;
    let mut h_lo = h(lo);
    for _ in 0..200 {
        let h_next = h(lo - step);
        if h_next >= h_lo {
            break;
        }
        lo -= step;
        h_lo = h_next;
        step = step + step;
    }
    let mut a = lo - step;
    let mut b = m.max();

    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) * (T::one() + range);
    let inv_phi = T::lit(0.5 * (5f64.sqrt() - 1.0));
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (h(x1), h(x2));
    for _ in 0..400 {
        if b - a <= tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = h(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = h(x2);
        }
    }
    let (mut t_star, mut value) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };

    let positions = m.positions();
    let k = positions.partition_point(|&x| x < t_star);
    let mut candidates = vec![m.max()];
    if k < positions.len() {
        candidates.push(positions[k]);
    }
    if k > 0 {
        candidates.push(positions[k - 1]);
    }
    for t in candidates {
        let v = h(t);
        if v <= value {
            t_star = t;
            value = v;
        }
    }
    Ok(HigherMoment { value, t_star })
}

/// Dual certificate for the higher-moment measure.
///
/// With `a = Σ w (x − t̄)_+^p` and `ū = a^{1/p} / (q c^{q−1})`, the dual
/// objective is `Σ w g*(x) + t̄ + ū c^q` where
/// `g*(x) = (1/p)(ū q)^{−(p−1)} (x − t̄)_+^p`. When `a = 0` the conjugate is
/// the indicator of `(−∞, t̄]` and the dual value is `t̄`.
pub fn higher_moment_dual_cert<T: Scalar>(m: &DiscreteMeasure<T>, p: T, c: T) -> Result<HigherMomentCertificate<T>> {
    let HigherMoment { t_star: t_bar, .. } = higher_moment(m, p, c)?;
    let a = upper_partial_moment(m, t_bar, p);
    if a == T::zero() {
        return Ok(HigherMomentCertificate {
            t_bar,
            u_bar: T::zero(),
            dual_value: t_bar,
        });
    }
    let q = p / (p - T::one());
    let u_bar = a.powf(T::one() / p) / (q * c.powf(q - T::one()));
    let scale = (u_bar * q).powf(-(p - T::one())) / p;
    let conjugate_mean = compensated_sum(m.atoms().filter(|&(x, _)| x > t_bar).map(|(x, w)| w * scale * (x - t_bar).powf(p)));
    Ok(HigherMomentCertificate {
        t_bar,
        u_bar,
        dual_value: conjugate_mean + t_bar + u_bar * c.powf(q),
    })
}

/// The step function `ψ_μ` and its image measure `r_μ = (ψ_μ)_# Leb[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct KusuokaImage<T> {
    psi_breaks: Vec<(T, T)>,
    image: DiscreteMeasure<T>,
}

impl<T: Scalar> KusuokaImage<T> {
    /// `(t, ψ_μ(t))` at every jump, plus `(0, 0)` when the first level is positive.
    pub fn psi_breaks(&self) -> &[(T, T)] {
        &self.psi_breaks
    }

    pub fn image_measure(&self) -> &DiscreteMeasure<T> {
        &self.image
    }

    /// Right-continuous `ψ_μ(t)`.
    pub fn psi(&self, t: T) -> T {
        let k = self.psi_breaks.partition_point(|&(b, _)| b <= t);
        if k == 0 {
            T::zero()
        } else {
            self.psi_breaks[k - 1].1
        }
    }
}

/// Maps a CV@R mixture `(β_j, w_j)` to its single target measure.
pub fn kusuoka_to_measure<T: Scalar>(mixture: &[(T, T)]) -> Result<KusuokaImage<T>> {
    if mixture.is_empty() {
        return Err(Error::InvalidMixture("no atoms".into()));
    }
    let max_beta = T::lit(MAX_MIXTURE_BETA);
    for &(beta, w) in mixture {
        if !(beta >= T::zero() && beta < T::one() && beta <= max_beta) {
            return Err(Error::InvalidMixture(format!("level {beta} outside [0, 1 - 1e-9]")));
        }
        if !(w.is_finite() && w > T::zero()) {
            return Err(Error::InvalidMixture(format!("weight {w} must be positive")));
        }
    }
    let total = compensated_sum(mixture.iter().map(|a| a.1));
    if (total - T::one()).abs() > T::lit(T::MASS_TOL) {
        return Err(Error::InvalidMixture(format!("weights sum to {total}")));
    }

    let mut sorted = mixture.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite levels"));
    let mut merged: Vec<(T, T)> = Vec::with_capacity(sorted.len());
    for (beta, w) in sorted {
        match merged.last_mut() {
            Some(last) if last.0 == beta => last.1 += w / total,
            _ => merged.push((beta, w / total)),
        }
    }

    let mut psi_breaks = Vec::with_capacity(merged.len() + 1);
    let mut atoms = Vec::with_capacity(merged.len() + 1);
    if merged[0].0 > T::zero() {
        psi_breaks.push((T::zero(), T::zero()));
        atoms.push((T::zero(), merged[0].0));
    }
    let mut psi = CompensatedSum::new();
    for (j, &(beta, w)) in merged.iter().enumerate() {
        psi.add(w / (T::one() - beta));
        let next = merged.get(j + 1).map_or(T::one(), |a| a.0);
        psi_breaks.push((beta, psi.value()));
        atoms.push((psi.value(), next - beta));
    }
    let image = DiscreteMeasure::from_atoms(&atoms)?;
    Ok(KusuokaImage { psi_breaks, image })
}

/// `ρ(m)` for any spec, using default solver options for convex hulls.
pub fn rho<T: Scalar>(spec: &RiskSpec<T>, m: &DiscreteMeasure<T>) -> Result<T> {
    rho_with(spec, m, &SolverOptions::default())
}

/// `ρ(m)`; convex-hull target sets are evaluated by the primal/dual pair
/// and the certified primal lower bound is returned.
pub fn rho_with<T: Scalar>(spec: &RiskSpec<T>, m: &DiscreteMeasure<T>, opts: &SolverOptions<T>) -> Result<T> {
    match spec {
        RiskSpec::CVaR { beta } => cvar(m, *beta),
        RiskSpec::HigherMoment { p, c } => Ok(higher_moment(m, *p, *c)?.value),
        RiskSpec::KusuokaMixture { atoms } => Ok(chi_single(m, kusuoka_to_measure(atoms)?.image_measure())),
        RiskSpec::Explicit { set, p } => {
            p.validated()?;
            match set.mode() {
                HullMode::FiniteSet => Ok(chi_generators(m, set, HullPolicy::Reject)?.value),
                HullMode::ConvexHull => Ok(duality_gap_report(m, set, opts)?.primal_lower),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform4() -> DiscreteMeasure<f64> {
        DiscreteMeasure::uniform(&[1.0, 2.0, 3.0, 4.0]).unwrap()
    }

    /// Rockafellar–Uryasev objective minimized on a grid.
    fn ru_grid(m: &DiscreteMeasure<f64>, beta: f64, lo: f64, hi: f64, n: usize) -> f64 {
        (0..=n)
            .map(|k| {
                let t = lo + (hi - lo) * k as f64 / n as f64;
                t + m.atoms().map(|(x, w)| w * (x - t).max(0.0)).sum::<f64>() / (1.0 - beta)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn cvar_examples() {
        let m = uniform4();
        let oracle = ru_grid(&m, 0.5, 0.0, 5.0, 5_000_000);
        assert!((oracle - 3.5).abs() < 1e-9);
        assert!((cvar(&m, 0.5).unwrap() - oracle).abs() < 1e-9);
        assert_eq!(cvar(&m, 0.0).unwrap(), m.expectation());
        assert_eq!(cvar(&DiscreteMeasure::dirac(-1.75), 0.3).unwrap(), -1.75);
        assert!(matches!(cvar(&m, 1.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(cvar(&m, -0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn cvar_straddling_atom_matches_ru_infimum_at_quantile() {
        let m: DiscreteMeasure<f64> = DiscreteMeasure::from_samples(&[-2.0, 0.5, 1.0, 6.0], Some(&[0.3, 0.25, 0.35, 0.1])).unwrap();
        for &beta in &[0.1, 0.3, 0.42, 0.55, 0.9, 0.95] {
            let t = m.quantile(beta).unwrap();
            let ru = t + m.atoms().map(|(x, w)| w * (x - t).max(0.0)).sum::<f64>() / (1.0 - beta);
            assert!((cvar(&m, beta).unwrap() - ru).abs() < 1e-12, "beta = {beta}");
        }
    }

    #[test]
    fn cvar_target_set_examples() {
        let s = cvar_target_set(0.5).unwrap();
        assert_eq!(s.support(), &[0.0, 2.0]);
        assert_eq!(s.vertices(), &[vec![0.5, 0.5]]);
        let s = cvar_target_set(0.0).unwrap();
        assert_eq!(s.support(), &[1.0]);
        assert_eq!(s.vertices(), &[vec![1.0]]);
        let s = cvar_target_set(0.9f64).unwrap();
        assert_eq!(s.support()[0], 0.0);
        assert!((s.support()[1] - 10.0).abs() < 1e-12);
        assert!((s.vertices()[0][0] - 0.9).abs() < 1e-15);
        assert!((s.vertices()[0][1] - 0.1).abs() < 1e-15);
        assert!(cvar_target_set(1.0f64).is_err());
    }

    /// Dense grid of the higher-moment objective followed by a local refinement.
    fn hm_grid(m: &DiscreteMeasure<f64>, p: f64, c: f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
        let h = |t: f64| t + c * m.atoms().map(|(x, w)| w * (x - t).max(0.0).powf(p)).sum::<f64>().powf(1.0 / p);
        let step = (hi - lo) / n as f64;
        let mut best = (f64::INFINITY, lo);
        for k in 0..=n {
            let t = lo + step * k as f64;
            let v = h(t);
            if v < best.0 {
                best = (v, t);
            }
        }
        let (mut a, mut b) = (best.1 - step, best.1 + step);
        for _ in 0..200 {
            let (t1, t2) = (a + (b - a) / 3.0, b - (b - a) / 3.0);
            if h(t1) <= h(t2) {
                b = t2;
            } else {
                a = t1;
            }
        }
        let t = 0.5 * (a + b);
        (h(t).min(best.0), t)
    }

    #[test]
    fn higher_moment_examples() {
        let d: DiscreteMeasure<f64> = DiscreteMeasure::dirac(2.5);
        assert_eq!(higher_moment(&d, 2.0, 2.0).unwrap(), HigherMoment { value: 2.5, t_star: 2.5 });

        let m: DiscreteMeasure<f64> = DiscreteMeasure::uniform(&[0.0, 1.0]).unwrap();
        let hm = higher_moment(&m, 2.0, 2.0).unwrap();
        assert_eq!(hm, HigherMoment { value: 1.0, t_star: 1.0 });

        let (gv, gt) = hm_grid(&m, 2.0, 1.2, -2.0, 2.0, 1_000_000);
        assert!((gv - 0.83166).abs() < 1e-5);
        assert!((gt + 0.25378).abs() < 1e-5);
        let hm = higher_moment(&m, 2.0, 1.2).unwrap();
        assert!((hm.value - gv).abs() < 1e-10);
        assert!((hm.t_star - gt).abs() < 1e-5);
    }

    #[test]
    fn higher_moment_minimizer_far_below_support() {
        // c close to 1 pushes the minimizer several ranges to the left.
        let m: DiscreteMeasure<f64> = DiscreteMeasure::uniform(&[0.0, 1.0]).unwrap();
        let (gv, gt) = hm_grid(&m, 2.0, 1.01, -20.0, 1.0, 2_000_000);
        assert!(gt < -2.0, "oracle minimizer {gt}");
        let hm = higher_moment(&m, 2.0, 1.01).unwrap();
        assert!((hm.value - gv).abs() < 1e-10, "{} vs {gv}", hm.value);
    }

    #[test]
    fn higher_moment_rejects_bad_params() {
        let m = uniform4();
        assert!(matches!(higher_moment(&m, 1.0, 2.0), Err(Error::InvalidParams(_))));
        assert!(matches!(higher_moment(&m, 2.0, 1.0), Err(Error::InvalidParams(_))));
        assert!(matches!(higher_moment_dual_cert(&m, 0.5, 2.0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn dual_certificate_examples() {
        let m: DiscreteMeasure<f64> = DiscreteMeasure::uniform(&[0.0, 1.0]).unwrap();
        let cert = higher_moment_dual_cert(&m, 2.0, 2.0).unwrap();
        assert_eq!(cert, HigherMomentCertificate { t_bar: 1.0, u_bar: 0.0, dual_value: 1.0 });

        let cert = higher_moment_dual_cert(&m, 2.0, 1.2).unwrap();
        let primal = higher_moment(&m, 2.0, 1.2).unwrap().value;
        assert!((cert.t_bar + 0.25378).abs() < 1e-5);
        assert!((cert.u_bar - 0.37689).abs() < 1e-5);
        assert!((cert.dual_value - 0.83166).abs() < 1e-5);
        assert!((cert.dual_value - primal).abs() < 1e-7);

        let d: DiscreteMeasure<f64> = DiscreteMeasure::dirac(-4.0);
        assert_eq!(higher_moment_dual_cert(&d, 2.0, 2.0).unwrap(), HigherMomentCertificate { t_bar: -4.0, u_bar: 0.0, dual_value: -4.0 });
    }

    #[test]
    fn kusuoka_examples() {
        let img = kusuoka_to_measure(&[(0.0, 0.5), (0.5, 0.5)]).unwrap();
        assert_eq!(img.image_measure().atoms().collect::<Vec<_>>(), vec![(0.5, 0.5), (1.5, 0.5)]);
        assert_eq!(img.image_measure().expectation(), 1.0);
        assert_eq!(img.psi(0.0), 0.5);
        assert_eq!(img.psi(0.49), 0.5);
        assert_eq!(img.psi(0.5), 1.5);

        for &beta in &[0.2, 0.5, 0.9] {
            let img = kusuoka_to_measure::<f64>(&[(beta, 1.0)]).unwrap();
            let r = cvar_target_measure(beta).unwrap();
            let got: Vec<_> = img.image_measure().atoms().collect();
            let want: Vec<_> = r.atoms().collect();
            assert_eq!(got.len(), want.len());
            for (a, b) in got.iter().zip(&want) {
                assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-15);
            }
            assert_eq!(img.psi(0.0), 0.0);
        }

        let img = kusuoka_to_measure(&[(0.0, 1.0)]).unwrap();
        assert_eq!(img.image_measure(), &DiscreteMeasure::dirac(1.0));
    }

    #[test]
    fn kusuoka_merges_equal_levels_and_validates() {
        let img = kusuoka_to_measure::<f64>(&[(0.3, 0.25), (0.0, 0.5), (0.3, 0.25)]).unwrap();
        assert_eq!(img.image_measure().len(), 2);
        assert!((img.image_measure().expectation() - 1.0).abs() < 1e-12);
        assert!(kusuoka_to_measure::<f64>(&[]).is_err());
        assert!(kusuoka_to_measure(&[(1.0, 1.0)]).is_err());
        assert!(kusuoka_to_measure(&[(1.0 - 1e-10, 1.0)]).is_err());
        assert!(kusuoka_to_measure(&[(0.2, 0.5), (0.4, 0.4)]).is_err());
        assert!(kusuoka_to_measure(&[(0.2, 1.5), (0.4, -0.5)]).is_err());
    }

    #[test]
    fn rho_dispatch_examples() {
        let m = uniform4();
        assert_eq!(rho(&RiskSpec::CVaR { beta: 0.5 }, &m).unwrap(), 3.5);
        let mix = RiskSpec::KusuokaMixture { atoms: vec![(0.0, 0.5), (0.5, 0.5)] };
        let v = rho(&mix, &m).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        assert!((v - (0.5 * 2.5 + 0.5 * 3.5)).abs() < 1e-12);
        let explicit = RiskSpec::Explicit {
            set: GeneratorSet::singleton(&DiscreteMeasure::dirac(1.0)).unwrap(),
            p: Order::Finite(2.0),
        };
        assert_eq!(rho(&explicit, &m).unwrap(), m.expectation());
        assert!(rho(&RiskSpec::CVaR { beta: 1.2 }, &m).is_err());
    }

    #[test]
    fn lipschitz_constants_per_family() {
        let (p, l) = RiskSpec::CVaR { beta: 0.9f64 }.lipschitz().unwrap();
        assert_eq!(p, Order::Finite(1.0));
        assert!((l - 10.0).abs() < 1e-12);
        let (_, l) = RiskSpec::KusuokaMixture { atoms: vec![(0.0f64, 0.5), (0.5, 0.5)] }.lipschitz().unwrap();
        assert_eq!(l, 1.5);
        let (p, l) = RiskSpec::HigherMoment { p: 3.0, c: 1.7 }.lipschitz().unwrap();
        assert_eq!((p, l), (Order::Finite(3.0), 1.7));
    }
}
