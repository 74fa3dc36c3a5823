//! The restricted transfer operator and the periodic subsystem.
//!
//! For a proper sub-alphabet `Delta`, the restricted operator multiplies by
//! the indicator of first-symbol-in-`Delta` before transferring, so its
//! iterates compute survivor masses. When the sub-model is irreducible with
//! period `m`, the analysis produces:
//!
//! * the subsystem pressure `P_Delta` (through the m-th power of the
//!   subsystem transfer matrix restricted to one cyclic class);
//! * the coupled nonnegative eigenfunctions `h_0..h_{m-1}` as scaled limits
//!   of the restricted iterates, their sum `h_Delta`, and the support masks
//!   on which each is strictly positive;
//! * the class measures `nu_j` as conditionally invariant eigenmeasures of
//!   the m-block recoding of the subsystem (each block component is
//!   primitive);
//! * the coupling constants `d_j` with `L_Delta h_j = d_j h_{j+1}` and the
//!   residue weights `alpha_j(k)`.

use crate::defaults::Tolerances;
use crate::error::{Error, Result};
use crate::mat::{sup_diff, sup_norm, Mat};
use crate::scalar::Scalar;
use crate::sft;
use crate::transfer::{
    build_transfer, conditional_measure, perron, CylindricalPotential, GibbsMeasure, PerronData,
    TransferMatrix,
};

/// Transfer operator composed with the indicator of first-symbol-in-Delta:
/// the action matrix agrees with the full weight matrix on rows whose state
/// starts in Delta and is zero on the other rows.
#[derive(Clone, Debug)]
pub struct RestrictedTransfer<S> {
    transfer: TransferMatrix<S>,
    delta: Vec<usize>,
    first_mask: Vec<bool>,
    action: Mat<S>,
}

impl<S: Scalar> RestrictedTransfer<S> {
    pub fn new(transfer: &TransferMatrix<S>, delta: &[usize]) -> Result<Self> {
        let model = transfer.model();
        if delta.is_empty() {
            return Err(Error::EmptyDelta);
        }
        let mut delta: Vec<usize> = delta.to_vec();
        delta.sort_unstable();
        delta.dedup();
        if let Some(&bad) = delta.iter().find(|&&s| s >= model.size()) {
            return Err(Error::UnknownSymbol(format!("#{bad}")));
        }
        if delta.len() == model.size() {
            return Err(Error::FullDelta);
        }
        let in_delta: Vec<bool> = (0..model.size())
            .map(|s| delta.binary_search(&s).is_ok())
            .collect();
        let first_mask: Vec<bool> = transfer.states().iter().map(|st| in_delta[st[0]]).collect();
        let n = transfer.dim();
        let mut action = Mat::zeros(n);
        for (u, &masked) in first_mask.iter().enumerate() {
            if masked {
                for v in 0..n {
                    action.set(u, v, transfer.weight(u, v));
                }
            }
        }
        Ok(RestrictedTransfer {
            transfer: transfer.clone(),
            delta,
            first_mask,
            action,
        })
    }

    pub fn transfer(&self) -> &TransferMatrix<S> {
        &self.transfer
    }

    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    /// States whose first symbol lies in Delta.
    pub fn first_mask(&self) -> &[bool] {
        &self.first_mask
    }

    /// Restricted action on a state vector.
    pub fn apply(&self, psi: &[S]) -> Vec<S> {
        self.action.tr_matvec(psi)
    }
}

/// Conditionally invariant eigenmeasure of one primitive block component,
/// together with the spelling of its block symbols in the original
/// alphabet. This is the measure the scaled restricted iterates pair test
/// functions with; it agrees with the component's equilibrium state on
/// singleton classes but differs in general.
#[derive(Clone, Debug)]
pub struct ClassMeasure<S> {
    pub class: usize,
    measure: GibbsMeasure<S>,
    expansions: Vec<Vec<usize>>,
}

impl<S: Scalar> ClassMeasure<S> {
    pub fn measure(&self) -> &GibbsMeasure<S> {
        &self.measure
    }

    /// Integrate a parent-state vector against this measure, marginalising
    /// block cylinders down to the first parent-state word.
    pub fn integrate_states(&self, parent: &TransferMatrix<S>, f: &[S]) -> S {
        let p = parent.state_len();
        let block_len = self.expansions[0].len();
        let b = p.div_ceil(block_len).max(1);
        let nu_model = self.measure.transfer().model();
        let mut total = S::zero();
        for word in nu_model.admissible_words(b) {
            let mass = self.measure.measure(word.symbols());
            if mass == S::zero() {
                continue;
            }
            let base: Vec<usize> = word
                .symbols()
                .iter()
                .flat_map(|&s| self.expansions[s].iter().copied())
                .collect();
            let state = parent
                .state_index(&base[..p])
                .expect("prefix of an admissible subsystem word is a state");
            total = total + mass * f[state];
        }
        total
    }
}

/// Complete description of the Delta-subsystem.
#[derive(Clone, Debug)]
pub struct SubsystemAnalysis<S> {
    delta: Vec<usize>,
    /// Period of the sub-model.
    pub period: usize,
    /// Cyclic class per original symbol; `None` outside Delta.
    pub class_of: Vec<Option<usize>>,
    /// Original symbols per cyclic class; class 0 holds the lowest symbol.
    pub classes: Vec<Vec<usize>>,
    /// Subsystem pressure (negative for normalised potentials).
    pub p_delta: S,
    /// Eigenfunctions `h_0..h_{m-1}` as vectors over the full state space.
    pub h: Vec<Vec<S>>,
    /// `h_Delta = sum_j h_j`.
    pub h_delta: Vec<S>,
    /// Coupling constants: `L_Delta h_j = d_j h_{j+1 mod m}`.
    pub d: Vec<S>,
    /// Residue weights `alpha[j][k]`, `alpha[j][0] = 1`.
    pub alpha: Vec<Vec<S>>,
    /// Class measures `nu_0..nu_{m-1}`.
    pub nu: Vec<ClassMeasure<S>>,
    /// Support masks of the `h_j` over states.
    pub z_classes: Vec<Vec<bool>>,
    /// Union of the class supports.
    pub z_delta: Vec<bool>,
    /// m-steps used by each eigenfunction limit.
    pub h_steps: Vec<usize>,
    restricted: RestrictedTransfer<S>,
    subsystem: TransferMatrix<S>,
    /// Perron data of the subsystem transfer matrix.
    pub sub_perron: PerronData<S>,
}

impl<S: Scalar> SubsystemAnalysis<S> {
    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    pub fn restricted(&self) -> &RestrictedTransfer<S> {
        &self.restricted
    }

    /// Transfer matrix of the subsystem itself (states fully inside Delta).
    pub fn subsystem(&self) -> &TransferMatrix<S> {
        &self.subsystem
    }
}

/// Scaled power limit `lim scale^n (apply^per_step)^n seed`, stopped when
/// the sup-norm change per outer step falls below `tol` relative to the
/// current sup-norm.
fn limit_vector<S: Scalar>(
    apply: impl Fn(&[S]) -> Vec<S>,
    per_step: usize,
    scale: S,
    seed: Vec<S>,
    tol: S,
    cap: usize,
) -> Result<(Vec<S>, usize)> {
    let mut cur = seed;
    let mut last_diff = S::infinity();
    for step in 1..=cap {
        let mut next = cur.clone();
        for _ in 0..per_step {
            next = apply(&next);
        }
        for x in next.iter_mut() {
            *x = *x * scale;
        }
        last_diff = sup_diff(&next, &cur);
        let sup = sup_norm(&next);
        cur = next;
        // the first step only absorbs the seed's mask
        if step >= 2 && last_diff <= tol * sup {
            return Ok((cur, step));
        }
    }
    Err(Error::NonConvergence {
        iterations: cap,
        residual: last_diff.to_f64().unwrap_or(f64::NAN),
    })
}

/// Support masks of the eigenfunctions: a state belongs to the class-j mask
/// exactly when its first symbol has a predecessor in class j-1.
pub fn z_support<S: Scalar>(
    transfer: &TransferMatrix<S>,
    classes: &[Vec<usize>],
) -> (Vec<Vec<bool>>, Vec<bool>) {
    let m = classes.len();
    let model = transfer.model();
    let mut z_classes = Vec::with_capacity(m);
    for j in 0..m {
        let preds = &classes[(j + m - 1) % m];
        let mask: Vec<bool> = transfer
            .states()
            .iter()
            .map(|st| preds.iter().any(|&b| model.allows(b, st[0])))
            .collect();
        z_classes.push(mask);
    }
    let dim = transfer.dim();
    let z_delta = (0..dim)
        .map(|v| z_classes.iter().any(|mask| mask[v]))
        .collect();
    (z_classes, z_delta)
}

/// Full analysis of the Delta-subsystem of a normalised potential.
pub fn analyze<S: Scalar>(
    potential: &CylindricalPotential<S>,
    delta: &[usize],
    tols: &Tolerances,
) -> Result<SubsystemAnalysis<S>> {
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
    let deviation = transfer.normalization_deviation();
    if deviation > S::from_config(tols.normalized_tol) {
        return Err(Error::NotNormalized {
            deviation: deviation.to_f64().unwrap_or(f64::NAN),
        });
    }

    let restricted = RestrictedTransfer::new(&transfer, delta)?;
    let delta = restricted.delta().to_vec();

    let delta_model = sft::restrict(potential.model(), &delta)?;
    if !delta_model.is_irreducible() {
        return Err(Error::Reducible);
    }
    let cyc = sft::period(&delta_model)?;
    let m = cyc.period;

    let mut class_of = vec![None; potential.model().size()];
    for (local, &orig) in delta.iter().enumerate() {
        class_of[orig] = Some(cyc.class_of[local]);
    }
    let classes: Vec<Vec<usize>> = cyc
        .classes
        .iter()
        .map(|cl| cl.iter().map(|&l| delta[l]).collect())
        .collect();

    let perron_tol = S::from_config(tols.perron_tol);
    let sub_pot = potential.restrict(&delta_model)?;
    let subsystem = build_transfer(&sub_pot)?;
    let sub_perron = perron(&subsystem, perron_tol, tols.perron_max_iter)?;
    let p_delta = sub_perron.pressure();

    // scaled limits of the restricted iterates, one seed per class
    let h_tol = S::from_config(tols.h_tol);
    let scale = (-(S::from_count(m) * p_delta)).exp();
    let mut h = Vec::with_capacity(m);
    let mut h_steps = Vec::with_capacity(m);
    for j in 0..m {
        let seed: Vec<S> = transfer
            .states()
            .iter()
            .map(|st| {
                if class_of[st[0]] == Some(j) {
                    S::one()
                } else {
                    S::zero()
                }
            })
            .collect();
        let (hj, steps) = limit_vector(
            |v| restricted.apply(v),
            m,
            scale,
            seed,
            h_tol,
            tols.h_max_steps,
        )?;
        h.push(hj);
        h_steps.push(steps);
    }
    let dim = transfer.dim();
    let mut h_delta = vec![S::zero(); dim];
    for hj in &h {
        for (acc, &x) in h_delta.iter_mut().zip(hj) {
            *acc = *acc + x;
        }
    }

    // class measures on the m-block recoding of the subsystem
    let block = sft::block_recode(&delta_model, m)?;
    let block_pot = sub_pot.birkhoff_block(&block)?;
    let mut nu = Vec::with_capacity(m);
    for j in 0..m {
        let members: Vec<usize> = (0..block.model.size())
            .filter(|&b| cyc.class_of[block.word_of(b)[0]] == j)
            .collect();
        let (nu_model, nu_pot) = if members.len() == block.model.size() {
            (block.model.clone(), block_pot.clone())
        } else {
            let sub = sft::restrict(&block.model, &members)?;
            let pot = block_pot.restrict(&sub)?;
            (sub, pot)
        };
        let t = build_transfer(&nu_pot)?;
        let per = perron(&t, perron_tol, tols.perron_max_iter)?;
        let expansions: Vec<Vec<usize>> = (0..nu_model.size())
            .map(|s| {
                let b = block
                    .model
                    .index_of(nu_model.label(s))
                    .expect("labels survive restriction");
                block.word_of(b).iter().map(|&l| delta[l]).collect()
            })
            .collect();
        nu.push(ClassMeasure {
            class: j,
            measure: conditional_measure(t, per),
            expansions,
        });
    }

    // d_j = integral of L_Delta(1) over the (j+1)-th class measure
    let ones = vec![S::one(); dim];
    let l_delta_one = restricted.apply(&ones);
    let d: Vec<S> = (0..m)
        .map(|j| nu[(j + 1) % m].integrate_states(&transfer, &l_delta_one))
        .collect();

    // alpha[j][k] = exp(-k P_Delta) prod_{s<k} d_{j+s}
    let mut alpha = Vec::with_capacity(m);
    for j in 0..m {
        let mut row = Vec::with_capacity(m);
        let mut prod = S::one();
        for k in 0..m {
            if k == 0 {
                row.push(S::one());
            } else {
                prod = prod * d[(j + k - 1) % m];
                row.push((-(S::from_count(k) * p_delta)).exp() * prod);
            }
        }
        alpha.push(row);
    }

    let (z_classes, z_delta) = z_support(&transfer, &classes);

    Ok(SubsystemAnalysis {
        delta,
        period: m,
        class_of,
        classes,
        p_delta,
        h,
        h_delta,
        d,
        alpha,
        nu,
        z_classes,
        z_delta,
        h_steps,
        restricted,
        subsystem,
        sub_perron,
    })
}

/// Mass of a cylinder under the Pianigiani–Yorke measure: the integral of
/// `h_Delta` over the cylinder. The empty word gives the total mass.
pub fn py_measure<S: Scalar>(
    analysis: &SubsystemAnalysis<S>,
    measure: &GibbsMeasure<S>,
    word: &[usize],
) -> S {
    let transfer = measure.transfer();
    if word.is_empty() {
        return measure.integrate(&analysis.h_delta);
    }
    if !transfer.model().word_admissible(word) {
        return S::zero();
    }
    let p = transfer.state_len();
    if word.len() >= p {
        let u = transfer.state_index(&word[..p]).expect("admissible prefix");
        return analysis.h_delta[u] * measure.measure(word);
    }
    // refine short words to full states
    let mut total = S::zero();
    let mut stack = word.to_vec();
    refine(
        transfer,
        &analysis.h_delta,
        measure,
        &mut stack,
        p,
        &mut total,
    );
    total
}

fn refine<S: Scalar>(
    transfer: &TransferMatrix<S>,
    h_delta: &[S],
    measure: &GibbsMeasure<S>,
    word: &mut Vec<usize>,
    target: usize,
    total: &mut S,
) {
    if word.len() == target {
        if let Some(u) = transfer.state_index(word) {
            *total = *total + h_delta[u] * measure.measure(word);
        }
        return;
    }
    let model = transfer.model();
    let last = *word.last().expect("nonempty");
    for next in 0..model.size() {
        if model.allows(last, next) {
            word.push(next);
            refine(transfer, h_delta, measure, word, target, total);
            word.pop();
        }
    }
}

/// Deviations between the direct analysis and independent recomputations.
#[derive(Clone, Debug)]
pub struct BlockEquivalenceReport<S> {
    /// Sup-norm gap per class between `h_j` and its block-recoded
    /// recomputation mapped back to the original states.
    pub h_deviation: Vec<S>,
    /// Sup-norm gap per class between `h_j` on subsystem states and the
    /// eigenfunction computed inside the subsystem.
    pub w_deviation: Vec<S>,
    /// Residuals of the coupling identities `L_Delta h_j = d_j h_{j+1}`.
    pub chain_residual: Vec<S>,
    /// Relative residual of `L_Delta^m h_Delta = e^{m P_Delta} h_Delta`.
    pub eigen_residual: S,
    /// Relative error of `prod_j d_j = e^{m P_Delta}`.
    pub prod_d_rel_err: S,
    /// Per class: |pressure(block component)/m - P_Delta|.
    pub block_pressure_err: Vec<S>,
}

impl<S: Scalar> BlockEquivalenceReport<S> {
    /// Worst deviation across all checks.
    pub fn max_deviation(&self) -> S {
        let mut worst = self.eigen_residual.max(self.prod_d_rel_err);
        for v in self
            .h_deviation
            .iter()
            .chain(&self.w_deviation)
            .chain(&self.chain_residual)
            .chain(&self.block_pressure_err)
        {
            worst = worst.max(*v);
        }
        worst
    }
}

/// Recompute each `h_j` through the literal block-recoded route (power
/// iteration of the block-restricted operator on the m-block model of the
/// full space) and report deviations from the direct computation, together
/// with the residuals of the coupling identities. Thresholds are applied by
/// the caller.
pub fn verify_block_equivalence<S: Scalar>(
    potential: &CylindricalPotential<S>,
    analysis: &SubsystemAnalysis<S>,
    tols: &Tolerances,
) -> Result<BlockEquivalenceReport<S>> {
    let m = analysis.period;
    let parent = analysis.restricted().transfer();
    let p = parent.state_len();
    let h_tol = S::from_config(tols.h_tol);
    let scale = (-(S::from_count(m) * analysis.p_delta)).exp();

    // coupling residuals of the direct data
    let chain_residual: Vec<S> = (0..m)
        .map(|j| {
            let lhs = analysis.restricted().apply(&analysis.h[j]);
            let rhs: Vec<S> = analysis.h[(j + 1) % m]
                .iter()
                .map(|&x| analysis.d[j] * x)
                .collect();
            sup_diff(&lhs, &rhs)
        })
        .collect();

    let mut iter = analysis.h_delta.clone();
    for _ in 0..m {
        iter = analysis.restricted().apply(&iter);
    }
    let factor = (S::from_count(m) * analysis.p_delta).exp();
    let expect: Vec<S> = analysis.h_delta.iter().map(|&x| factor * x).collect();
    let eigen_residual = sup_diff(&iter, &expect) / sup_norm(&analysis.h_delta) / factor;

    let prod_d: S = analysis.d.iter().copied().fold(S::one(), |a, b| a * b);
    let prod_d_rel_err = ((prod_d - factor) / factor).abs();

    // block route on the full model
    let block = sft::block_recode(potential.model(), m)?;
    let block_pot = potential.birkhoff_block(&block)?;
    let block_transfer = build_transfer(&block_pot)?;
    let mut h_deviation = Vec::with_capacity(m);
    for j in 0..m {
        let members: Vec<usize> = (0..block.model.size())
            .filter(|&b| {
                let w = block.word_of(b);
                w.iter().all(|&s| analysis.class_of[s].is_some())
                    && analysis.class_of[w[0]] == Some(j)
            })
            .collect();
        let rb = RestrictedTransfer::new(&block_transfer, &members)?;
        let seed = vec![S::one(); block_transfer.dim()];
        let (hb, _) = limit_vector(|v| rb.apply(v), 1, scale, seed, h_tol, tols.h_max_steps)?;
        let mut dev = S::zero();
        for (b_state, &value) in block_transfer.states().iter().zip(&hb) {
            let base = block.expand(b_state);
            let u = parent.state_index(&base[..p]).expect("block state prefix");
            dev = dev.max((value - analysis.h[j][u]).abs());
        }
        h_deviation.push(dev);
    }

    // subsystem route for the w_j, mapped through the inclusion of states
    let sub = analysis.subsystem();
    let delta = analysis.delta();
    let mut w_deviation = Vec::with_capacity(m);
    for j in 0..m {
        let seed: Vec<S> = sub
            .states()
            .iter()
            .map(|st| {
                if analysis.class_of[delta[st[0]]] == Some(j) {
                    S::one()
                } else {
                    S::zero()
                }
            })
            .collect();
        let (wj, _) = limit_vector(|v| sub.apply(v), m, scale, seed, h_tol, tols.h_max_steps)?;
        let mut dev = S::zero();
        for (st, &value) in sub.states().iter().zip(&wj) {
            let base: Vec<usize> = st.iter().map(|&l| delta[l]).collect();
            let u = parent.state_index(&base).expect("subsystem state embeds");
            dev = dev.max((value - analysis.h[j][u]).abs());
        }
        w_deviation.push(dev);
    }

    let block_pressure_err: Vec<S> = analysis
        .nu
        .iter()
        .map(|cm| (cm.measure().perron().pressure() / S::from_count(m) - analysis.p_delta).abs())
        .collect();

    Ok(BlockEquivalenceReport {
        h_deviation,
        w_deviation,
        chain_residual,
        eigen_residual,
        prod_d_rel_err,
        block_pressure_err,
    })
}
