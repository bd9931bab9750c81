//! Transport with bilinear gain `x·y` between a loss distribution and a
//! target set of measures.
//!
//! For a single target `r` the optimal plan is the comonotone coupling and
//! the optimal value is `∫₀¹ Q_m(t) Q_r(t) dt`; both are read off the merged
//! quantile cells. A target *set* is described by a [`GeneratorSet`]: a
//! finite support `y₀ < … < y_K` in `ℝ₊` plus a list of weight vectors
//! (vertices), taken either as a finite family or through its convex hull.

use crate::error::{Error, Result};
use crate::measures::{merged_cells, DiscreteMeasure};
use crate::scalar::{compensated_sum, CompensatedSum, Order, Scalar};

/// How the vertex list of a [`GeneratorSet`] is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullMode {
    /// The target set is exactly the listed vertices.
    FiniteSet,
    /// The target set is the convex hull of the listed vertices.
    ConvexHull,
}

/// Finite description of a target set of probability measures on `ℝ₊`.
///
/// Every vertex is a probability vector over `support` with unit mean.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet<T> {
    support: Vec<T>,
    vertices: Vec<Vec<T>>,
    mode: HullMode,
}

impl<T: Scalar> GeneratorSet<T> {
    /// Validates and builds a generator set.
    ///
    /// Requirements: support finite, nonnegative and strictly increasing;
    /// every vertex nonnegative, summing to one within `T::MASS_TOL`
    /// (then renormalized) and with mean one within `T::NORMALIZE_TOL`;
    /// every support point charged by at least one vertex.
    pub fn new(support: Vec<T>, vertices: Vec<Vec<T>>, mode: HullMode) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidGeneratorSet(msg));
        if support.is_empty() {
            return bad("empty support".into());
        }
        if vertices.is_empty() {
            return bad("no vertices".into());
        }
        for (k, &y) in support.iter().enumerate() {
            if !y.is_finite() || y < T::zero() {
                return bad(format!("support point {k} = {y} must be finite and nonnegative"));
            }
            if k > 0 && y <= support[k - 1] {
                return bad("support must be strictly increasing".into());
            }
        }
        let mut vertices = vertices;
        let mut charged = vec![false; support.len()];
        for (v, r) in vertices.iter_mut().enumerate() {
            if r.len() != support.len() {
                return bad(format!("vertex {v} has {} weights for {} support points", r.len(), support.len()));
            }
            if r.iter().any(|&w| !w.is_finite() || w < T::zero()) {
                return bad(format!("vertex {v} has a negative or non-finite weight"));
            }
            let total = compensated_sum(r.iter().copied());
            if (total - T::one()).abs() > T::lit(T::MASS_TOL) {
                return bad(format!("vertex {v} weights sum to {total}"));
            }
            r.iter_mut().for_each(|w| *w /= total);
            let mean = compensated_sum(r.iter().zip(&support).map(|(&w, &y)| w * y));
            if (mean - T::one()).abs() > T::lit(T::NORMALIZE_TOL) {
                return bad(format!("vertex {v} has mean {mean}, expected 1"));
            }
            for (c, &w) in charged.iter_mut().zip(r.iter()) {
                *c |= w > T::zero();
            }
        }
        if let Some(k) = charged.iter().position(|&c| !c) {
            return bad(format!("support point {k} carries no mass in any vertex"));
        }
        Ok(Self {
            support,
            vertices,
            mode,
        })
    }

    /// Generator set whose vertices are the given measures, on the union of
    /// their supports.
    pub fn from_measures(measures: &[DiscreteMeasure<T>], mode: HullMode) -> Result<Self> {
        let mut support: Vec<T> = measures.iter().flat_map(|r| r.positions().iter().copied()).collect();
        support.sort_by(|a, b| a.partial_cmp(b).expect("finite positions"));
        support.dedup();
        let vertices = measures
            .iter()
            .map(|r| {
                let mut w = vec![T::zero(); support.len()];
                for (y, p) in r.atoms() {
                    let k = support.partition_point(|&s| s < y);
                    w[k] = p;
                }
                w
            })
            .collect();
        Self::new(support, vertices, mode)
    }

    /// `{r}` as a finite set.
    pub fn singleton(r: &DiscreteMeasure<T>) -> Result<Self> {
        Self::from_measures(std::slice::from_ref(r), HullMode::FiniteSet)
    }

    pub fn support(&self) -> &[T] {
        &self.support
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn mode(&self) -> HullMode {
        self.mode
    }

    pub fn with_mode(mut self, mode: HullMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Vertex `v` as a measure (zero-weight support points dropped).
    pub fn vertex_measure(&self, v: usize) -> DiscreteMeasure<T> {
        self.measure_from_weights(&self.vertices[v])
    }

    /// Weights of `Σ_v λ_v r^{(v)}` on the full support.
    pub fn mixture_weights(&self, lambda: &[T]) -> Vec<T> {
        assert_eq!(lambda.len(), self.vertices.len(), "one weight per vertex");
        (0..self.support.len())
            .map(|k| compensated_sum(lambda.iter().zip(&self.vertices).map(|(&l, r)| l * r[k])))
            .collect()
    }

    /// `Σ_v λ_v r^{(v)}` as a measure; atoms below `T::NEGLIGIBLE_MASS` are dropped.
    pub fn mixture(&self, lambda: &[T]) -> DiscreteMeasure<T> {
        let mut w = self.mixture_weights(lambda);
        let floor = T::lit(T::NEGLIGIBLE_MASS);
        w.iter_mut().filter(|x| **x < floor).for_each(|x| *x = T::zero());
        self.measure_from_weights(&w)
    }

    fn measure_from_weights(&self, w: &[T]) -> DiscreteMeasure<T> {
        DiscreteMeasure::from_samples(&self.support, Some(w)).expect("validated generator weights")
    }
}

/// Finitely supported plan on `ℝ²` with cached marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling<T> {
    atoms: Vec<(T, T, T)>,
    first: DiscreteMeasure<T>,
    second: DiscreteMeasure<T>,
}

impl<T: Scalar> Coupling<T> {
    /// Builds a coupling from `(x, y, mass)` triples; masses must be
    /// nonnegative and sum to one.
    pub fn from_atoms(atoms: Vec<(T, T, T)>) -> Result<Self> {
        let atoms: Vec<(T, T, T)> = atoms.into_iter().filter(|a| a.2 != T::zero()).collect();
        let xs: Vec<(T, T)> = atoms.iter().map(|&(x, _, w)| (x, w)).collect();
        let ys: Vec<(T, T)> = atoms.iter().map(|&(_, y, w)| (y, w)).collect();
        let first = DiscreteMeasure::from_atoms(&xs)?;
        let second = DiscreteMeasure::from_atoms(&ys)?;
        Ok(Self { atoms, first, second })
    }

    pub fn atoms(&self) -> &[(T, T, T)] {
        &self.atoms
    }

    pub fn first_marginal(&self) -> &DiscreteMeasure<T> {
        &self.first
    }

    pub fn second_marginal(&self) -> &DiscreteMeasure<T> {
        &self.second
    }

    /// `∫ x·y dπ`.
    pub fn objective(&self) -> T {
        compensated_sum(self.atoms.iter().map(|&(x, y, w)| x * y * w))
    }
}

/// The monotone (comonotone) coupling `(Q_m, Q_r)_# Leb[0,1]`.
pub fn comonotone_coupling<T: Scalar>(m: &DiscreteMeasure<T>, r: &DiscreteMeasure<T>) -> Coupling<T> {
    let cells = merged_cells(&m.quantile_partition(), &r.quantile_partition());
    let atoms = cells.iter().map(|c| (c.left, c.right, c.width)).collect();
    Coupling::from_atoms(atoms).expect("merged cells form a probability plan")
}

/// Optimal transport value `χ_r(m) = ∫₀¹ Q_m Q_r dt`.
pub fn chi_single<T: Scalar>(m: &DiscreteMeasure<T>, r: &DiscreteMeasure<T>) -> T {
    let cells = merged_cells(&m.quantile_partition(), &r.quantile_partition());
    compensated_sum(cells.iter().map(|c| c.width * c.left * c.right))
}

/// What [`chi_generators`] should do with a convex-hull generator set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullPolicy {
    /// Refuse; the vertex maximum is not the hull value.
    Reject,
    /// Return the vertex maximum as a lower bound for the hull value.
    LowerBound,
}

/// Best vertex value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexMax<T> {
    pub value: T,
    pub vertex: usize,
}

/// `max_v χ_{r^{(v)}}(m)` with the lowest index winning ties.
pub fn chi_generators<T: Scalar>(m: &DiscreteMeasure<T>, set: &GeneratorSet<T>, policy: HullPolicy) -> Result<VertexMax<T>> {
    if set.mode() == HullMode::ConvexHull && policy == HullPolicy::Reject {
        return Err(Error::WrongMode { expected: "finite-set" });
    }
    let mut best = VertexMax {
        value: T::neg_infinity(),
        vertex: 0,
    };
    for v in 0..set.num_vertices() {
        let value = chi_single(m, &set.vertex_measure(v));
        if value > best.value {
            best = VertexMax { value, vertex: v };
        }
    }
    Ok(best)
}

/// `L_R = max_v ℳ_q(r^{(v)})`; also the hull value since the q-th moment is
/// linear in the weights.
pub fn lipschitz_constant<T: Scalar>(set: &GeneratorSet<T>, q: Order<T>) -> Result<T> {
    let q = q.validated()?;
    let mut best = T::zero();
    for v in 0..set.num_vertices() {
        best = best.max(set.vertex_measure(v).moment(q)?);
    }
    Ok(best)
}

/// Pair of potentials `(f, g)` on `supp(m) × supp(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPair<T> {
    pub xs: Vec<T>,
    pub f: Vec<T>,
    pub ys: Vec<T>,
    pub g: Vec<T>,
}

impl<T: Scalar> PotentialPair<T> {
    /// `Σ f dm + Σ g dr`; the measures must live on `xs` and `ys`.
    pub fn dual_value(&self, m: &DiscreteMeasure<T>, r: &DiscreteMeasure<T>) -> T {
        let mut acc = CompensatedSum::new();
        for (x, w) in m.atoms() {
            acc.add(w * self.f_at(x));
        }
        for (y, w) in r.atoms() {
            acc.add(w * self.g_at(y));
        }
        acc.value()
    }

    /// `min_{i,j} f_i + g_j − x_i y_j`; nonnegative iff the pair is feasible.
    pub fn min_slack(&self) -> T {
        let mut worst = T::infinity();
        for (&x, &f) in self.xs.iter().zip(&self.f) {
            for (&y, &g) in self.ys.iter().zip(&self.g) {
                worst = worst.min(f + g - x * y);
            }
        }
        worst
    }

    /// `f` at an atom of `xs`, or the conjugate `max_j x y_j − g_j` elsewhere.
    pub fn f_at(&self, x: T) -> T {
        match self.xs.binary_search_by(|p| p.partial_cmp(&x).expect("finite")) {
            Ok(i) => self.f[i],
            Err(_) => self.f_conjugate(x),
        }
    }

    /// `g` at an atom of `ys`, or `max_i x_i y − f_i` elsewhere.
    pub fn g_at(&self, y: T) -> T {
        match self.ys.binary_search_by(|p| p.partial_cmp(&y).expect("finite")) {
            Ok(j) => self.g[j],
            Err(_) => self.g_conjugate(y),
        }
    }

    fn f_conjugate(&self, x: T) -> T {
        self.ys
            .iter()
            .zip(&self.g)
            .fold(T::neg_infinity(), |acc, (&y, &g)| acc.max(x * y - g))
    }

    fn g_conjugate(&self, y: T) -> T {
        self.xs
            .iter()
            .zip(&self.f)
            .fold(T::neg_infinity(), |acc, (&x, &f)| acc.max(x * y - f))
    }
}

/// Kantorovich potentials attaining `χ_r(m)` with `g(y₀) = 0`.
///
/// Potentials are propagated along the comonotone staircase so that every
/// support cell is tight. When a cell advances both indices at once the new
/// `g` is fixed by the binding constraint of the largest already-assigned
/// `x`, which is the maximizer of `x·y − f(x)` over assigned atoms because
/// `g` has nondecreasing slopes.
pub fn exact_potentials_single<T: Scalar>(m: &DiscreteMeasure<T>, r: &DiscreteMeasure<T>) -> PotentialPair<T> {
    let xs = m.positions().to_vec();
    let ys = r.positions().to_vec();
    let cells = merged_cells(&m.quantile_partition(), &r.quantile_partition());
    let mut f: Vec<Option<T>> = vec![None; xs.len()];
    let mut g: Vec<Option<T>> = vec![None; ys.len()];

    let mut prev: Option<(usize, usize)> = None;
    for c in &cells {
        let (i, j) = (c.left_index, c.right_index);
        match prev {
            None => {
                g[j] = Some(T::zero());
                f[i] = Some(xs[i] * ys[j]);
            }
            Some((pi, pj)) => {
                if j != pj {
                    let gp = g[pj].expect("assigned on previous cell");
                    g[j] = Some(gp + xs[pi] * (ys[j] - ys[pj]));
                }
                if i != pi {
                    f[i] = Some(xs[i] * ys[j] - g[j].expect("assigned"));
                }
            }
        }
        prev = Some((i, j));
    }

    // Atoms skipped by near-simultaneous breakpoints carry negligible mass;
    // close them with conjugates so the pair stays feasible.
    for j in 0..ys.len() {
        if g[j].is_none() {
            g[j] = Some(
                xs.iter()
                    .zip(&f)
                    .filter_map(|(&x, fi)| fi.map(|fi| x * ys[j] - fi))
                    .fold(T::neg_infinity(), T::max),
            );
        }
    }
    for i in 0..xs.len() {
        if f[i].is_none() {
            f[i] = Some(
                ys.iter()
                    .zip(&g)
                    .map(|(&y, gj)| xs[i] * y - gj.expect("filled"))
                    .fold(T::neg_infinity(), T::max),
            );
        }
    }
    let g0 = g[0].expect("filled");
    PotentialPair {
        xs,
        f: f.into_iter().map(|v| v.expect("filled") + g0).collect(),
        ys,
        g: g.into_iter().map(|v| v.expect("filled") - g0).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r_half() -> DiscreteMeasure<f64> {
        DiscreteMeasure::from_atoms(&[(0.0, 0.5), (2.0, 0.5)]).unwrap()
    }

    #[test]
    fn comonotone_coupling_examples() {
        let m = DiscreteMeasure::uniform(&[1.0, 3.0]).unwrap();
        let pi = comonotone_coupling(&m, &r_half());
        assert_eq!(pi.atoms(), &[(1.0, 0.0, 0.5), (3.0, 2.0, 0.5)]);

        let m4 = DiscreteMeasure::uniform(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let pi4 = comonotone_coupling(&m4, &r_half());
        assert_eq!(
            pi4.atoms(),
            &[(1.0, 0.0, 0.25), (2.0, 0.0, 0.25), (3.0, 2.0, 0.25), (4.0, 2.0, 0.25)]
        );

        let r: DiscreteMeasure<f64> = DiscreteMeasure::from_atoms(&[(0.5, 0.2), (1.0, 0.3), (1.4, 0.5)]).unwrap();
        let pi = comonotone_coupling(&DiscreteMeasure::dirac(7.0), &r);
        assert_eq!(pi.atoms().len(), 3);
        for (&(x, y, w), (ry, rw)) in pi.atoms().iter().zip(r.atoms()) {
            assert_eq!((x, y), (7.0, ry));
            assert!((w - rw).abs() < 1e-15);
        }
    }

    #[test]
    fn chi_single_examples() {
        let m = DiscreteMeasure::uniform(&[1.0, 3.0]).unwrap();
        // Grid over the 2x2 polytope [[a, 1/2 - a], [1/2 - a, a]].
        let brute = (0..=1000)
            .map(|k| {
                let a = 0.5 * k as f64 / 1000.0;
                let b = 0.5 - a;
                a * 1.0 * 0.0 + b * 1.0 * 2.0 + b * 3.0 * 0.0 + a * 3.0 * 2.0
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((brute - 3.0).abs() < 1e-12);
        assert!((chi_single(&m, &r_half()) - brute).abs() < 1e-12);

        let r: DiscreteMeasure<f64> = DiscreteMeasure::from_atoms(&[(0.5, 0.5), (1.5, 0.5)]).unwrap();
        assert_eq!(chi_single(&DiscreteMeasure::dirac(-2.5), &r), -2.5);

        let m4 = DiscreteMeasure::uniform(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(chi_single(&m4, &r_half()), 3.5);
    }

    #[test]
    fn chi_generators_examples() {
        let m4 = DiscreteMeasure::uniform(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let delta1 = DiscreteMeasure::dirac(1.0);
        let only_delta = GeneratorSet::singleton(&delta1).unwrap();
        let best = chi_generators(&m4, &only_delta, HullPolicy::Reject).unwrap();
        assert_eq!(best.value, 2.5);

        let both = GeneratorSet::from_measures(&[delta1, r_half()], HullMode::FiniteSet).unwrap();
        let best = chi_generators(&m4, &both, HullPolicy::Reject).unwrap();
        assert_eq!(best, VertexMax { value: 3.5, vertex: 1 });

        let hull = both.clone().with_mode(HullMode::ConvexHull);
        assert!(matches!(
            chi_generators(&m4, &hull, HullPolicy::Reject),
            Err(Error::WrongMode { .. })
        ));
        assert_eq!(chi_generators(&m4, &hull, HullPolicy::LowerBound).unwrap().value, 3.5);
    }

    #[test]
    fn exact_potentials_examples() {
        let m = DiscreteMeasure::uniform(&[1.0, 3.0]).unwrap();
        let pp = exact_potentials_single(&m, &r_half());
        assert_eq!(pp.f, vec![0.0, 4.0]);
        assert_eq!(pp.g, vec![0.0, 2.0]);
        assert_eq!(pp.dual_value(&m, &r_half()), 3.0);
        // Binding constraint of the disconnected block: f(1) + g(2) = 2 = 1·2.
        assert_eq!(pp.f[0] + pp.g[1], 1.0 * 2.0);
        assert!(pp.min_slack() >= 0.0);

        let pp = exact_potentials_single(&DiscreteMeasure::dirac(3.0), &DiscreteMeasure::dirac(1.0));
        assert_eq!((pp.f[0], pp.g[0]), (3.0, 0.0));
    }

    #[test]
    fn potentials_on_staircase_with_vertical_steps() {
        let m: DiscreteMeasure<f64> = DiscreteMeasure::from_samples(&[-1.0, 0.5, 2.0, 4.0], Some(&[0.1, 0.4, 0.3, 0.2])).unwrap();
        let r: DiscreteMeasure<f64> = DiscreteMeasure::from_atoms(&[(0.0, 0.3), (0.7, 0.25), (1.2, 0.25), (2.5, 0.2)]).unwrap();
        let pp = exact_potentials_single(&m, &r);
        assert!(pp.min_slack() >= -1e-12);
        let chi = chi_single(&m, &r);
        assert!((pp.dual_value(&m, &r) - chi).abs() <= 1e-10 * (1.0 + chi.abs()));
        assert_eq!(pp.g[0], 0.0);
    }

    #[test]
    fn lipschitz_examples() {
        let set = GeneratorSet::singleton(&r_half()).unwrap();
        assert_eq!(lipschitz_constant(&set, Order::Infinity).unwrap(), 2.0);
        assert!((lipschitz_constant(&set, Order::Finite(2.0)).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let d = GeneratorSet::singleton(&DiscreteMeasure::dirac(1.0)).unwrap();
        assert_eq!(lipschitz_constant(&d, Order::Finite(3.0)).unwrap(), 1.0);
        assert!(lipschitz_constant(&d, Order::Finite(0.0)).is_err());
    }

    #[test]
    fn generator_set_validation() {
        let err = |s: Vec<f64>, v: Vec<Vec<f64>>| GeneratorSet::new(s, v, HullMode::FiniteSet).is_err();
        assert!(err(vec![-1.0, 3.0], vec![vec![0.5, 0.5]]));
        assert!(err(vec![2.0, 0.0], vec![vec![0.5, 0.5]]));
        assert!(err(vec![0.0, 2.0], vec![vec![0.6, 0.5]]));
        assert!(err(vec![0.0, 2.0], vec![vec![0.25, 0.75]]), "mean 1.5 is not a unit mean");
        assert!(err(vec![0.0, 1.0, 2.0], vec![vec![0.5, 0.0, 0.5]]), "uncharged support point");
        assert!(err(vec![0.0, 2.0], vec![vec![0.5]]));
        assert!(!err(vec![0.0, 2.0], vec![vec![0.5, 0.5]]));
    }

    #[test]
    fn mixture_drops_negligible_atoms() {
        let set: GeneratorSet<f64> = GeneratorSet::new(vec![0.0, 1.0, 2.0], vec![vec![0.0, 1.0, 0.0], vec![0.5, 0.0, 0.5]], HullMode::ConvexHull).unwrap();
        let mix = set.mixture(&[1.0, 0.0]);
        assert_eq!(mix.positions(), &[1.0]);
        let mix = set.mixture(&[0.5, 0.5]);
        assert_eq!(mix.len(), 3);
        assert!((mix.expectation() - 1.0).abs() < 1e-15);
    }
}
