//! Cylindrical potentials, the transfer operator as a finite matrix,
//! Perron spectral data, pressure, normalisation and the equilibrium
//! (Gibbs/Parry) measure.
//!
//! A potential of order `k` depends on the first `k` symbols of a point, so
//! the transfer operator acts on functions of the first `k-1` symbols. With
//! states enumerated as the admissible `(k-1)`-words, the operator is the
//! transpose action of the weight matrix `W(u, v) = exp(phi(u + last(v)))`
//! over state pairs that overlap admissibly:
//!
//! ```text
//! (L phi)(v) = sum_u W(u, v) psi(u)
//! ```
//!
//! The dominant eigenvalue of `W` is `exp(P)` with `P` the pressure, its
//! left eigenvector (the eigenfunction of the operator action) normalises
//! the potential, and together with the right eigenvector it defines the
//! equilibrium measure through the usual Markov-type cylinder formula.

use std::collections::HashMap;

use crate::defaults::Tolerances;
use crate::error::{Error, Result};
use crate::graph;
use crate::mat::{dot, sup_norm, Mat};
use crate::scalar::Scalar;
use crate::sft::{self, BlockModel, SftModel};

/// Locally constant potential: one real value (natural-log scale) per
/// admissible word of length `order`. A 1-cylindrical potential is stored
/// as order 2 with values constant in the second coordinate.
#[derive(Clone, Debug)]
pub struct CylindricalPotential<S> {
    model: SftModel,
    order: usize,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    values: Vec<S>,
}

impl<S: Scalar> CylindricalPotential<S> {
    /// Build from a value function evaluated on every admissible k-word.
    pub fn from_fn(
        model: &SftModel,
        order: usize,
        mut f: impl FnMut(&[usize]) -> S,
    ) -> Result<Self> {
        if order < 2 {
            return Err(Error::BadPotentialOrder { order });
        }
        let words: Vec<Vec<usize>> = model
            .admissible_words(order)
            .into_iter()
            .map(|w| w.symbols().to_vec())
            .collect();
        let mut values = Vec::with_capacity(words.len());
        for w in &words {
            let v = f(w);
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(w.clone()));
            }
            values.push(v);
        }
        let index = words.iter().cloned().zip(0..).collect();
        Ok(CylindricalPotential {
            model: model.clone(),
            order,
            words,
            index,
            values,
        })
    }

    /// Build from an explicit table. The table must cover every admissible
    /// word of length `order` exactly once.
    pub fn from_table(model: &SftModel, order: usize, entries: &[(Vec<usize>, S)]) -> Result<Self> {
        if order < 2 {
            return Err(Error::BadPotentialOrder { order });
        }
        let mut table: HashMap<Vec<usize>, S> = HashMap::new();
        for (w, v) in entries {
            if w.len() != order || !model.word_admissible(w) {
                return Err(Error::InadmissibleWord(w.clone()));
            }
            if !v.is_finite() {
                return Err(Error::NonFiniteValue(w.clone()));
            }
            if table.insert(w.clone(), *v).is_some() {
                return Err(Error::DuplicatePotentialValue(w.clone()));
            }
        }
        let complete = CylindricalPotential::from_fn(model, order, |w| {
            table.get(w).copied().unwrap_or_else(S::nan)
        });
        match complete {
            Err(Error::NonFiniteValue(w)) => Err(Error::MissingPotentialValue(w)),
            other => other,
        }
    }

    /// Potential constant equal to `c` (order 2).
    pub fn constant(model: &SftModel, c: S) -> Result<Self> {
        CylindricalPotential::from_fn(model, 2, |_| c)
    }

    pub fn model(&self) -> &SftModel {
        &self.model
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Admissible k-words in lexicographic order.
    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn value(&self, word: &[usize]) -> Option<S> {
        self.index.get(word).map(|&i| self.values[i])
    }

    /// Birkhoff sum of the potential over the first `steps` shifts of a
    /// word long enough to carry them (length >= steps + order - 1).
    pub fn birkhoff(&self, word: &[usize], steps: usize) -> Option<S> {
        let k = self.order;
        if word.len() + 1 < steps + k {
            return None;
        }
        let mut acc = S::zero();
        for i in 0..steps {
            acc = acc + self.value(&word[i..i + k])?;
        }
        Some(acc)
    }

    /// Restriction of the table to the words of a sub-model (labels must be
    /// a subset of this model's labels).
    pub fn restrict(&self, sub: &SftModel) -> Result<Self> {
        let map: Vec<usize> = sub
            .labels()
            .iter()
            .map(|l| {
                self.model
                    .index_of(l)
                    .ok_or_else(|| Error::UnknownSymbol(l.clone()))
            })
            .collect::<Result<_>>()?;
        let order = self.order;
        let mut missing: Option<Vec<usize>> = None;
        let pot = CylindricalPotential::from_fn(sub, order, |w| {
            let parent: Vec<usize> = w.iter().map(|&s| map[s]).collect();
            match self.value(&parent) {
                Some(v) => v,
                None => {
                    missing.get_or_insert(parent);
                    S::nan()
                }
            }
        });
        match pot {
            Err(Error::NonFiniteValue(_)) => {
                Err(Error::MissingPotentialValue(missing.unwrap_or_default()))
            }
            other => other,
        }
    }

    /// The potential `S_m(phi)` induced on an m-block recoding of this
    /// model: the Birkhoff sum of the base potential over one block.
    pub fn birkhoff_block(&self, block: &BlockModel) -> Result<Self> {
        if block.base != self.model {
            return Err(Error::UnknownSymbol(
                "block model built over a different base".into(),
            ));
        }
        let m = block.block_len;
        let k = self.order;
        let block_order = 2 + (k - 2) / m;
        CylindricalPotential::from_fn(&block.model, block_order, |bw| {
            let base = block.expand(bw);
            self.birkhoff(&base, m)
                .expect("block word spans all windows")
        })
    }
}

/// Nonnegative weight matrix realising the transfer operator on state
/// vectors, states being the admissible `(k-1)`-words in lexicographic
/// order.
#[derive(Clone, Debug)]
pub struct TransferMatrix<S> {
    model: SftModel,
    order: usize,
    states: Vec<Vec<usize>>,
    state_index: HashMap<Vec<usize>, usize>,
    weights: Mat<S>,
}

impl<S: Scalar> TransferMatrix<S> {
    pub fn model(&self) -> &SftModel {
        &self.model
    }

    /// Cylinder order of the underlying potential.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Length of a state word (`order - 1`).
    pub fn state_len(&self) -> usize {
        self.order - 1
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn state_index(&self, word: &[usize]) -> Option<usize> {
        self.state_index.get(word).copied()
    }

    pub fn state_label(&self, u: usize) -> String {
        self.states[u]
            .iter()
            .map(|&s| self.model.label(s))
            .collect::<Vec<_>>()
            .join("")
    }

    pub fn weight(&self, u: usize, v: usize) -> S {
        self.weights.get(u, v)
    }

    pub(crate) fn weights(&self) -> &Mat<S> {
        &self.weights
    }

    /// Operator action on a state vector: `(L psi)(v) = sum_u W(u,v) psi(u)`.
    pub fn apply(&self, psi: &[S]) -> Vec<S> {
        self.weights.tr_matvec(psi)
    }

    /// Worst deviation of a column sum from 1.
    pub fn normalization_deviation(&self) -> S {
        let ones = vec![S::one(); self.dim()];
        let sums = self.apply(&ones);
        sums.iter()
            .fold(S::zero(), |m, s| m.max((*s - S::one()).abs()))
    }
}

/// Build the weight matrix of the transfer operator of `potential`.
pub fn build_transfer<S: Scalar>(potential: &CylindricalPotential<S>) -> Result<TransferMatrix<S>> {
    let model = potential.model().clone();
    let k = potential.order();
    let states: Vec<Vec<usize>> = model
        .admissible_words(k - 1)
        .into_iter()
        .map(|w| w.symbols().to_vec())
        .collect();
    let state_index: HashMap<Vec<usize>, usize> = states.iter().cloned().zip(0..).collect();
    let mut weights = Mat::zeros(states.len());
    for w in model.admissible_words(k) {
        let w = w.symbols();
        let phi = potential
            .value(w)
            .ok_or_else(|| Error::MissingPotentialValue(w.to_vec()))?;
        let u = state_index[&w[..k - 1]];
        let v = state_index[&w[1..]];
        weights.set(u, v, phi.exp());
    }
    Ok(TransferMatrix {
        model,
        order: k,
        states,
        state_index,
        weights,
    })
}

/// True iff every column sum of the weight matrix is within `tol` of 1,
/// i.e. the operator fixes the constant function 1 up to `tol`.
pub fn check_normalized<S: Scalar>(transfer: &TransferMatrix<S>, tol: S) -> bool {
    transfer.normalization_deviation() <= tol
}

/// Dominant eigendata of a nonnegative irreducible matrix.
///
/// `right` is the right eigenvector scaled to sum 1, `left` the left
/// eigenvector scaled so that `<left, right> = 1`; both are strictly
/// positive. For the transfer matrix, `left` is the eigenfunction of the
/// operator action and `lambda = exp(P)` carries the pressure.
#[derive(Clone, Debug)]
pub struct PerronData<S> {
    pub lambda: S,
    pub right: Vec<S>,
    pub left: Vec<S>,
    pub iterations: usize,
    pub residual: S,
}

impl<S: Scalar> PerronData<S> {
    /// Pressure `P = log lambda`.
    pub fn pressure(&self) -> S {
        self.lambda.ln()
    }
}

struct PowerCore<S> {
    lambda: S,
    right: Vec<S>,
    left: Vec<S>,
    iterations: usize,
}

/// Two-sided power iteration for a primitive nonnegative matrix, sup-norm
/// scaling per step, eigenvalue from the two-sided quotient.
fn two_sided_power<S: Scalar>(a: &Mat<S>, tol: S, max_iter: usize) -> Result<PowerCore<S>> {
    let n = a.n();
    let seed = S::one() / S::from_count(n);
    let mut right = vec![seed; n];
    let mut left = vec![seed; n];
    for it in 1..=max_iter {
        let ar = a.matvec(&right);
        let al = a.tr_matvec(&left);
        let lambda = dot(&left, &ar) / dot(&left, &right);
        if !lambda.is_finite() || lambda <= S::zero() {
            return Err(Error::NonConvergence {
                iterations: it,
                residual: f64::NAN,
            });
        }
        let mut worst = S::zero();
        for i in 0..n {
            worst = worst.max((ar[i] - lambda * right[i]).abs());
            worst = worst.max((al[i] - lambda * left[i]).abs());
        }
        let scale_r = sup_norm(&ar);
        let scale_l = sup_norm(&al);
        let rel = worst / (lambda * sup_norm(&right).max(sup_norm(&left)));
        for i in 0..n {
            right[i] = ar[i] / scale_r;
            left[i] = al[i] / scale_l;
        }
        if rel <= tol {
            return Ok(PowerCore {
                lambda,
                right,
                left,
                iterations: it,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: f64::NAN,
    })
}

fn residual_of<S: Scalar>(a: &Mat<S>, lambda: S, right: &[S], left: &[S]) -> S {
    let ar = a.matvec(right);
    let al = a.tr_matvec(left);
    let mut worst = S::zero();
    for i in 0..a.n() {
        worst = worst.max((ar[i] - lambda * right[i]).abs() / sup_norm(right));
        worst = worst.max((al[i] - lambda * left[i]).abs() / sup_norm(left));
    }
    worst / lambda
}

/// Perron solve on a raw matrix. Periodic zero patterns are handled by
/// iterating the m-th power restricted to one cyclic class and propagating
/// the eigenvectors around the classes.
fn perron_core<S: Scalar>(a: &Mat<S>, tol: S, max_iter: usize) -> Result<PerronData<S>> {
    if tol <= S::zero() {
        return Err(Error::InvalidTolerance);
    }
    let n = a.n();
    let adj = a.pattern();
    if n == 0 || (n == 1 && a.get(0, 0) == S::zero()) || !graph::is_strongly_connected(&adj) {
        return Err(Error::Reducible);
    }
    let (m, classes) = graph::pattern_period(&adj);

    let (lambda, mut right, mut left, iterations) = if m == 1 {
        let core = two_sided_power(a, tol, max_iter)?;
        (core.lambda, core.right, core.left, core.iterations)
    } else {
        let class0: Vec<usize> = (0..n).filter(|&i| classes[i] == 0).collect();
        let a0 = a.pow(m).submatrix(&class0);
        let core = two_sided_power(&a0, tol, max_iter)?;
        let lambda = core.lambda.powf(S::one() / S::from_count(m));
        let mut right = vec![S::zero(); n];
        let mut left = vec![S::zero(); n];
        for (i, &oi) in class0.iter().enumerate() {
            right[oi] = core.right[i];
            left[oi] = core.left[i];
        }
        // right: r(u) = (1/lambda) sum_v a(u,v) r(v), filled class m-1 down to 1
        for step in 1..m {
            let target = m - step;
            for u in 0..n {
                if classes[u] == target {
                    let mut acc = S::zero();
                    for &v in &adj[u] {
                        acc = acc + a.get(u, v) * right[v];
                    }
                    right[u] = acc / lambda;
                }
            }
        }
        // left: l(v) = (1/lambda) sum_u l(u) a(u,v), filled class 1 up to m-1
        for target in 1..m {
            for v in 0..n {
                if classes[v] == target {
                    let mut acc = S::zero();
                    for u in 0..n {
                        if classes[u] == target - 1 && a.get(u, v) != S::zero() {
                            acc = acc + left[u] * a.get(u, v);
                        }
                    }
                    left[v] = acc / lambda;
                }
            }
        }
        (lambda, right, left, core.iterations)
    };

    // scale conventions: sum(right) = 1, <left, right> = 1
    let sum_r: S = right.iter().copied().sum();
    for r in right.iter_mut() {
        *r = *r / sum_r;
    }
    let pairing = dot(&left, &right);
    for l in left.iter_mut() {
        *l = *l / pairing;
    }
    if right
        .iter()
        .chain(left.iter())
        .any(|&x| !x.is_finite() || x <= S::zero())
    {
        return Err(Error::NonConvergence {
            iterations,
            residual: f64::NAN,
        });
    }
    let residual = residual_of(a, lambda, &right, &left);
    Ok(PerronData {
        lambda,
        right,
        left,
        iterations,
        residual,
    })
}

/// Dominant eigendata of a transfer matrix; errors on reducible patterns
/// or when the iteration stalls.
pub fn perron<S: Scalar>(
    transfer: &TransferMatrix<S>,
    tol: S,
    max_iter: usize,
) -> Result<PerronData<S>> {
    perron_core(transfer.weights(), tol, max_iter)
}

/// The cohomologous normalisation `phi' = phi - P + log w - log (w o S)`,
/// with `w` the eigenfunction of the transfer operator. The result
/// satisfies [`check_normalized`] and has pressure 0.
pub fn normalize<S: Scalar>(
    potential: &CylindricalPotential<S>,
    tols: &Tolerances,
) -> Result<CylindricalPotential<S>> {
    let diag = sft::validate(potential.model());
    if !diag.irreducible {
        return Err(Error::Reducible);
    }
    if !diag.aperiodic {
        return Err(Error::NotAperiodic {
            period: diag.period.unwrap_or(0),
        });
    }
    let transfer = build_transfer(potential)?;
    let per = perron(
        &transfer,
        S::from_config(tols.perron_tol),
        tols.perron_max_iter,
    )?;
    let pressure = per.pressure();
    let k = potential.order();
    CylindricalPotential::from_fn(potential.model(), k, |w| {
        let u = transfer.state_index(&w[..k - 1]).expect("prefix state");
        let v = transfer.state_index(&w[1..]).expect("suffix state");
        potential.value(w).expect("admissible word") - pressure + per.left[u].ln()
            - per.left[v].ln()
    })
}

/// Equilibrium (Gibbs/Parry) measure with a cylinder evaluator.
///
/// For a word `w` no shorter than a state, the mass of the cylinder is
///
/// ```text
/// mu[w] = left(u_0) * prod_t W(u_t, u_{t+1}) * right(u_last)
///         / (lambda^{#factors} * <left, right>)
/// ```
///
/// with `u_t` the states read along `w`; shorter words sum their admissible
/// extensions. Products of long words are accumulated in the log domain.
#[derive(Clone, Debug)]
pub struct GibbsMeasure<S> {
    transfer: TransferMatrix<S>,
    perron: PerronData<S>,
}

impl<S: Scalar> GibbsMeasure<S> {
    pub fn new(transfer: TransferMatrix<S>, perron: PerronData<S>) -> Self {
        GibbsMeasure { transfer, perron }
    }

    pub fn transfer(&self) -> &TransferMatrix<S> {
        &self.transfer
    }

    pub fn perron(&self) -> &PerronData<S> {
        &self.perron
    }

    /// Mass of the state cylinder: `mu[u] = left(u) right(u) / <left,right>`.
    pub fn state_mass(&self, u: usize) -> S {
        self.perron.left[u] * self.perron.right[u] / dot(&self.perron.left, &self.perron.right)
    }

    /// Log-mass of a cylinder; `None` marks an inadmissible word.
    pub fn log_measure(&self, word: &[usize]) -> Option<S> {
        if word.is_empty() {
            return Some(S::zero());
        }
        if !self.transfer.model().word_admissible(word) {
            return None;
        }
        let p = self.transfer.state_len();
        if word.len() < p {
            let mut total = S::zero();
            let mut stack = word.to_vec();
            self.sum_extensions(&mut stack, p, &mut total);
            return if total > S::zero() {
                Some(total.ln())
            } else {
                None
            };
        }
        let per = &self.perron;
        let u0 = self.transfer.state_index(&word[..p])?;
        let mut acc = per.left[u0].ln() - dot(&per.left, &per.right).ln();
        let log_lambda = per.lambda.ln();
        for t in 0..word.len() - p {
            let u = self.transfer.state_index(&word[t..t + p])?;
            let v = self.transfer.state_index(&word[t + 1..t + 1 + p])?;
            let w = self.transfer.weight(u, v);
            if w <= S::zero() {
                return None;
            }
            acc = acc + w.ln() - log_lambda;
        }
        let last = self.transfer.state_index(&word[word.len() - p..])?;
        Some(acc + per.right[last].ln())
    }

    fn sum_extensions(&self, word: &mut Vec<usize>, target: usize, total: &mut S) {
        if word.len() == target {
            if let Some(u) = self.transfer.state_index(word) {
                *total = *total + self.state_mass(u);
            }
            return;
        }
        let last = *word.last().unwrap();
        let model = self.transfer.model();
        for next in 0..model.size() {
            if model.allows(last, next) {
                word.push(next);
                self.sum_extensions(word, target, total);
                word.pop();
            }
        }
    }

    /// Cylinder mass; inadmissible words have mass 0.
    pub fn measure(&self, word: &[usize]) -> S {
        self.log_measure(word).map_or(S::zero(), |lm| lm.exp())
    }

    /// Integral of a state vector: `sum_u psi(u) mu[u]`.
    pub fn integrate(&self, psi: &[S]) -> S {
        psi.iter()
            .enumerate()
            .map(|(u, &p)| p * self.state_mass(u))
            .sum()
    }
}

/// Probability eigenmeasure of the dual operator: the conditionally
/// invariant measure of open-system theory, whose cylinder masses use the
/// right eigenvector only. It coincides with the equilibrium measure
/// exactly when the potential is normalised (left eigenvector constant);
/// it is the measure paired with test functions in the scaled limits of
/// the restricted iterates.
pub fn conditional_measure<S: Scalar>(
    transfer: TransferMatrix<S>,
    perron: PerronData<S>,
) -> GibbsMeasure<S> {
    let dim = transfer.dim();
    let mut per = perron;
    per.left = vec![S::one(); dim];
    GibbsMeasure::new(transfer, per)
}

/// Convenience: transfer + Perron + measure in one step.
pub fn equilibrium_of<S: Scalar>(
    potential: &CylindricalPotential<S>,
    tols: &Tolerances,
) -> Result<GibbsMeasure<S>> {
    let transfer = build_transfer(potential)?;
    let per = perron(
        &transfer,
        S::from_config(tols.perron_tol),
        tols.perron_max_iter,
    )?;
    Ok(GibbsMeasure::new(transfer, per))
}

/// Measure-theoretic entropy through the variational identity
/// `h(mu) = P(phi) - int phi dmu`, the integral being the mass-weighted sum
/// of the potential over its admissible words.
pub fn entropy<S: Scalar>(measure: &GibbsMeasure<S>, potential: &CylindricalPotential<S>) -> S {
    let pressure = measure.perron().pressure();
    let mean_phi: S = potential
        .words()
        .iter()
        .map(|w| measure.measure(w) * potential.value(w).expect("tabled word"))
        .sum();
    pressure - mean_phi
}
