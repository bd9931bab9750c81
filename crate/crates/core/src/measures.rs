//! Finitely supported probability measures on the real line.
//!
//! A [`DiscreteMeasure`] keeps its atoms sorted by position with duplicates
//! merged and weights normalized, so that quantile functions, moments and
//! one-dimensional transport all reduce to sweeps over sorted arrays.
//!
//! The quantile function is the right-inverse of the CDF,
//!
//! ```text
//! Q(t) = inf { x : CDF(x) >= t },   t in (0, 1]
//! ```
//!
//! which is a nondecreasing step function described by a
//! [`QuantilePartition`]. Two partitions can be merged into common cells
//! ([`merged_cells`]); every comonotone quantity in the crate (transport
//! value, Wasserstein distance, comonotone coupling) is a sum over those
//! cells.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, CompensatedSum, Order, Scalar};

/// Probability measure with finitely many atoms.
///
/// Invariants: positions finite and strictly increasing, weights strictly
/// positive and summing to one up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure<T> {
    positions: Vec<T>,
    weights: Vec<T>,
}

/// Step-function description of a quantile function.
///
/// Cell `i` covers `(breakpoints[i-1], breakpoints[i]]` (with an implicit
/// leading 0) and the quantile function equals `values[i]` there.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantilePartition<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

/// One cell of two merged quantile partitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell<T> {
    /// Lebesgue length of the cell in `(0, 1]`.
    pub width: T,
    /// Quantile value of the first measure on the cell.
    pub left: T,
    /// Quantile value of the second measure on the cell.
    pub right: T,
    /// Atom index of `left` in the first measure.
    pub left_index: usize,
    /// Atom index of `right` in the second measure.
    pub right_index: usize,
}

fn check_finite<T: Scalar>(x: T) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteValue(x.to_f64_lossy()))
    }
}

impl<T: Scalar> DiscreteMeasure<T> {
    /// Empirical distribution of a sample, optionally weighted.
    ///
    /// Weights may be any nonnegative numbers (counts, frequencies); they are
    /// normalized by their total. Missing weights mean `1/n` each.
    pub fn from_samples(values: &[T], weights: Option<&[T]>) -> Result<Self> {
        Self::build(values, weights, None, false)
    }

    /// Like [`from_samples`](Self::from_samples) but merges positions that
    /// lie within `snap` of the first position of their cluster.
    pub fn from_samples_snapped(values: &[T], weights: Option<&[T]>, snap: T) -> Result<Self> {
        Self::build(values, weights, Some(snap), false)
    }

    /// Probability measure from `(position, weight)` pairs whose weights
    /// already sum to one. Sums off by more than `T::NORMALIZE_TOL` are
    /// rejected rather than silently rescaled.
    pub fn from_atoms(atoms: &[(T, T)]) -> Result<Self> {
        let (xs, ws): (Vec<T>, Vec<T>) = atoms.iter().copied().unzip();
        Self::build(&xs, Some(&ws), None, true)
    }

    /// Point mass at `a`.
    ///
    /// # Panics
    /// If `a` is not finite.
    pub fn dirac(a: T) -> Self {
        assert!(a.is_finite(), "dirac position must be finite");
        Self {
            positions: vec![a],
            weights: vec![T::one()],
        }
    }

    /// Uniform distribution over the given values (duplicates accumulate).
    pub fn uniform(values: &[T]) -> Result<Self> {
        Self::from_samples(values, None)
    }

    fn build(values: &[T], weights: Option<&[T]>, snap: Option<T>, strict: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(ws) = weights {
            if ws.len() != values.len() {
                return Err(Error::LengthMismatch {
                    left: values.len(),
                    right: ws.len(),
                });
            }
        }
        for &x in values {
            check_finite(x)?;
        }
        let raw: Vec<T> = match weights {
            Some(ws) => {
                for &w in ws {
                    check_finite(w)?;
                    if w < T::zero() {
                        return Err(Error::NegativeWeight(w.to_f64_lossy()));
                    }
                }
                ws.to_vec()
            }
            None => vec![T::one(); values.len()],
        };
        let total = compensated_sum(raw.iter().copied());
        if total <= T::zero() {
            return Err(Error::ZeroTotalWeight);
        }
        if strict && (total - T::one()).abs() > T::lit(T::NORMALIZE_TOL) {
            return Err(Error::WeightSum(total.to_f64_lossy()));
        }

        let mut order: Vec<usize> = (0..values.len()).filter(|&i| raw[i] > T::zero()).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));

        let mut positions: Vec<T> = Vec::with_capacity(order.len());
        let mut acc: Vec<CompensatedSum<T>> = Vec::with_capacity(order.len());
        let mut anchor = T::zero();
        for i in order {
            let x = values[i];
            let merge = match (positions.last(), snap) {
                (Some(&last), None) => x == last,
                (Some(_), Some(tol)) => x - anchor <= tol,
                (None, _) => false,
            };
            if !merge {
                positions.push(x);
                acc.push(CompensatedSum::new());
                anchor = x;
            }
            acc.last_mut().expect("pushed above").add(raw[i]);
        }
        let weights = acc.iter().map(|a| a.value() / total).collect();
        Ok(Self { positions, weights })
    }

    pub fn positions(&self) -> &[T] {
        &self.positions
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `(position, weight)` pairs in increasing position order.
    pub fn atoms(&self) -> impl ExactSizeIterator<Item = (T, T)> + '_ {
        self.positions
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Number of distinct atoms.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Always false; a probability measure has at least one atom.
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn min(&self) -> T {
        self.positions[0]
    }

    pub fn max(&self) -> T {
        *self.positions.last().expect("nonempty measure")
    }

    /// `max − min` of the support.
    pub fn range(&self) -> T {
        self.max() - self.min()
    }

    /// `m((−∞, x])`.
    pub fn cdf(&self, x: T) -> T {
        let k = self.positions.partition_point(|&p| p <= x);
        compensated_sum(self.weights[..k].iter().copied())
    }

    /// Right-inverse of the CDF at level `t ∈ (0, 1]`.
    pub fn quantile(&self, t: T) -> Result<T> {
        if !(t > T::zero() && t <= T::one()) {
            return Err(Error::out_of_range("quantile level", t.to_f64_lossy()));
        }
        let partition = self.quantile_partition();
        let k = partition.breakpoints.partition_point(|&b| b < t);
        Ok(partition.values[k.min(partition.values.len() - 1)])
    }

    /// Cumulative weights and the quantile value on each cell.
    pub fn quantile_partition(&self) -> QuantilePartition<T> {
        let mut acc = CompensatedSum::new();
        let mut breakpoints: Vec<T> = self
            .weights
            .iter()
            .map(|&w| {
                acc.add(w);
                acc.value().min(T::one())
            })
            .collect();
        *breakpoints.last_mut().expect("nonempty measure") = T::one();
        QuantilePartition {
            breakpoints,
            values: self.positions.clone(),
        }
    }

    /// `(Σ w |x|^p)^{1/p}`, or `max |x|` for the infinite order.
    pub fn moment(&self, order: Order<T>) -> Result<T> {
        match order.validated()? {
            Order::Infinity => Ok(self
                .positions
                .iter()
                .fold(T::zero(), |acc, &x| acc.max(x.abs()))),
            Order::Finite(p) => {
                let s = compensated_sum(self.atoms().map(|(x, w)| w * x.abs().powf(p)));
                Ok(s.max(T::zero()).powf(T::one() / p))
            }
        }
    }

    /// Mean `Σ w x`.
    pub fn expectation(&self) -> T {
        compensated_sum(self.atoms().map(|(x, w)| w * x))
    }

    /// Push-forward under `x ↦ x + alpha`.
    pub fn translate(&self, alpha: T) -> Self {
        Self {
            positions: self.positions.iter().map(|&x| x + alpha).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Push-forward under `x ↦ delta · x` for `delta ≥ 0`.
    pub fn scale(&self, delta: T) -> Self {
        assert!(delta >= T::zero(), "scale factor must be nonnegative");
        if delta == T::zero() {
            return Self::dirac(T::zero());
        }
        Self {
            positions: self.positions.iter().map(|&x| x * delta).collect(),
            weights: self.weights.clone(),
        }
    }
}

impl<T: Scalar> QuantilePartition<T> {
    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Cell widths `b_i − b_{i−1}`.
    pub fn widths(&self) -> Vec<T> {
        let mut prev = T::zero();
        self.breakpoints
            .iter()
            .map(|&b| {
                let w = b - prev;
                prev = b;
                w
            })
            .collect()
    }

    /// Push-forward of Lebesgue measure on `(0,1]` through the step function.
    pub fn to_measure(&self) -> Result<DiscreteMeasure<T>> {
        let atoms: Vec<(T, T)> = self
            .values
            .iter()
            .copied()
            .zip(self.widths())
            .collect();
        DiscreteMeasure::from_atoms(&atoms)
    }
}

/// Merges two quantile partitions into common cells.
///
/// Two-pointer sweep over the cumulative weights; breakpoints within
/// `T::BREAKPOINT_TOL` of each other are treated as simultaneous jumps.
/// Empty cells are skipped, so consecutive cells always differ in at least
/// one index.
pub fn merged_cells<T: Scalar>(a: &QuantilePartition<T>, b: &QuantilePartition<T>) -> Vec<Cell<T>> {
    let tol = T::lit(T::BREAKPOINT_TOL);
    let (na, nb) = (a.breakpoints.len(), b.breakpoints.len());
    let mut cells = Vec::with_capacity(na + nb);
    let (mut i, mut j) = (0usize, 0usize);
    let mut prev = T::zero();
    while i < na && j < nb {
        let (bi, bj) = (a.breakpoints[i], b.breakpoints[j]);
        let simultaneous = (bi - bj).abs() <= tol || (i + 1 == na && j + 1 == nb);
        let next = if simultaneous { bi.max(bj) } else { bi.min(bj) };
        let width = next - prev;
        if width > T::zero() {
            cells.push(Cell {
                width,
                left: a.values[i],
                right: b.values[j],
                left_index: i,
                right_index: j,
            });
        }
        if simultaneous {
            i += 1;
            j += 1;
        } else if bi < bj {
            i += 1;
        } else {
            j += 1;
        }
        prev = prev.max(next);
    }
    cells
}

/// `W_p(m1, m2)` through the one-dimensional quantile formula.
pub fn wasserstein<T: Scalar>(m1: &DiscreteMeasure<T>, m2: &DiscreteMeasure<T>, order: Order<T>) -> Result<T> {
    let order = order.validated()?;
    let cells = merged_cells(&m1.quantile_partition(), &m2.quantile_partition());
    Ok(match order {
        Order::Infinity => cells
            .iter()
            .fold(T::zero(), |acc, c| acc.max((c.left - c.right).abs())),
        Order::Finite(p) => {
            let s = compensated_sum(cells.iter().map(|c| c.width * (c.left - c.right).abs().powf(p)));
            s.max(T::zero()).powf(T::one() / p)
        }
    })
}
