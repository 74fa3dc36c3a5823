//! Brute-force reference routes, deliberately naive, used as ground truth
//! against the matrix routes in tests and in the verification command.

use crate::defaults::ORACLE_BUDGET;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sft::{self, SftModel};
use crate::transfer::{CylindricalPotential, GibbsMeasure};

fn delta_flags(model: &SftModel, delta: &[usize]) -> Result<Vec<bool>> {
    let mut flags = vec![false; model.size()];
    for &s in delta {
        if s >= model.size() {
            return Err(Error::UnknownSymbol(format!("#{s}")));
        }
        flags[s] = true;
    }
    Ok(flags)
}

/// Number of admissible n-words staying inside the flagged symbols.
fn count_delta_words(model: &SftModel, flags: &[bool], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let mut counts: Vec<f64> = (0..model.size())
        .map(|s| if flags[s] { 1.0 } else { 0.0 })
        .collect();
    for _ in 1..n {
        let mut next = vec![0.0; model.size()];
        for (i, ni) in next.iter_mut().enumerate() {
            if flags[i] {
                for (j, cj) in counts.iter().enumerate() {
                    if flags[j] && model.allows(i, j) {
                        *ni += cj;
                    }
                }
            }
        }
        counts = next;
    }
    counts.iter().sum()
}

/// Survivor mass by full enumeration: the sum of the cylinder masses over
/// all admissible n-words with every symbol in `delta`; n = 0 gives 1.
pub fn brute_mu_delta_n<S: Scalar>(
    measure: &GibbsMeasure<S>,
    delta: &[usize],
    n: usize,
) -> Result<S> {
    let model = measure.transfer().model();
    let flags = delta_flags(model, delta)?;
    if n == 0 {
        return Ok(S::one());
    }
    let estimated = count_delta_words(model, &flags, n);
    if estimated > ORACLE_BUDGET {
        return Err(Error::EnumerationBudget { estimated });
    }
    let mut total = S::zero();
    let mut word = Vec::with_capacity(n);
    for s in 0..model.size() {
        if flags[s] {
            word.push(s);
            sum_words(model, &flags, measure, &mut word, n, &mut total);
            word.pop();
        }
    }
    Ok(total)
}

fn sum_words<S: Scalar>(
    model: &SftModel,
    flags: &[bool],
    measure: &GibbsMeasure<S>,
    word: &mut Vec<usize>,
    n: usize,
    total: &mut S,
) {
    if word.len() == n {
        *total = *total + measure.measure(word);
        return;
    }
    let last = *word.last().expect("nonempty");
    for next in 0..model.size() {
        if flags[next] && model.allows(last, next) {
            word.push(next);
            sum_words(model, flags, measure, word, n, total);
            word.pop();
        }
    }
}

/// Transfer action by direct preimage sum at the point prefix `x`:
/// `sum_i exp(phi(i x_0 .. x_{k-2})) psi(i x_0 .. x_{k-3})` over symbols i
/// allowed to precede `x_0`. `psi` is indexed by the lexicographic rank of
/// the admissible (k-1)-words.
pub fn brute_apply<S: Scalar>(
    potential: &CylindricalPotential<S>,
    psi: &[S],
    x: &[usize],
) -> Result<S> {
    let model = potential.model();
    let k = potential.order();
    if x.len() < k - 1 {
        return Err(Error::InadmissibleWord(x.to_vec()));
    }
    if !model.word_admissible(&x[..k - 1]) {
        return Err(Error::InadmissibleWord(x.to_vec()));
    }
    // independent state ranking by enumeration
    let states: Vec<Vec<usize>> = model
        .admissible_words(k - 1)
        .into_iter()
        .map(|w| w.symbols().to_vec())
        .collect();
    let mut total = S::zero();
    for i in 0..model.size() {
        if model.allows(i, x[0]) {
            let mut word = Vec::with_capacity(k);
            word.push(i);
            word.extend_from_slice(&x[..k - 1]);
            let phi = potential
                .value(&word)
                .ok_or_else(|| Error::MissingPotentialValue(word.clone()))?;
            let state = &word[..k - 1];
            let rank = states
                .iter()
                .position(|s| s == state)
                .expect("prefix of an admissible word is a state");
            total = total + phi.exp() * psi[rank];
        }
    }
    Ok(total)
}

/// Log partition sum over admissible n-words with the potential summed
/// along all complete windows of the word.
pub fn log_partition<S: Scalar>(potential: &CylindricalPotential<S>, n: usize) -> Result<S> {
    let model = potential.model();
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let estimated = model.count_admissible(n);
    if estimated > ORACLE_BUDGET {
        return Err(Error::EnumerationBudget { estimated });
    }
    let mut total = S::zero();
    let mut word = Vec::with_capacity(n);
    for s in 0..model.size() {
        word.push(s);
        partition_dfs(potential, n, &mut word, S::zero(), &mut total);
        word.pop();
    }
    if total > S::zero() {
        Ok(total.ln())
    } else {
        Err(Error::EnumerationBudget { estimated: 0.0 })
    }
}

fn partition_dfs<S: Scalar>(
    potential: &CylindricalPotential<S>,
    n: usize,
    word: &mut Vec<usize>,
    acc: S,
    total: &mut S,
) {
    let model = potential.model();
    let k = potential.order();
    let len = word.len();
    // each extension past length k contributes exactly one new window
    let acc = if len >= k {
        acc + potential
            .value(&word[len - k..])
            .expect("admissible window")
    } else {
        acc
    };
    if len == n {
        *total = *total + acc.exp();
        return;
    }
    let last = word[len - 1];
    for next in 0..model.size() {
        if model.allows(last, next) {
            word.push(next);
            partition_dfs(potential, n, word, acc, total);
            word.pop();
        }
    }
}

/// Finite-n pressure estimate: the growth rate of the partition sums over
/// one period of the transition structure,
/// `(log Z(n + m) - log Z(n)) / m`. Converges geometrically to the
/// pressure and is exact at every n when the word weights are constant per
/// residue class.
pub fn finite_pressure_estimate<S: Scalar>(
    potential: &CylindricalPotential<S>,
    n: usize,
) -> Result<S> {
    if n == 0 {
        return Err(Error::EmptyWord);
    }
    let m = sft::period(potential.model())?.period;
    let z_n = log_partition(potential, n)?;
    let z_nm = log_partition(potential, n + m)?;
    Ok((z_nm - z_n) / S::from_count(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defaults::Tolerances;
    use crate::presets::paper4;
    use crate::transfer::{build_transfer, equilibrium_of};

    fn setup() -> (SftModel, CylindricalPotential<f64>, GibbsMeasure<f64>) {
        let (model, pot) = paper4::<f64>(0.2, 0.3).unwrap();
        let mu = equilibrium_of(&pot, &Tolerances::strict()).unwrap();
        (model, pot, mu)
    }

    #[test]
    fn survivor_masses_by_enumeration() {
        let (_, _, mu) = setup();
        assert_eq!(brute_mu_delta_n(&mu, &[0, 1], 0).unwrap(), 1.0);
        let n1 = brute_mu_delta_n(&mu, &[0, 1], 1).unwrap();
        assert!((n1 - 31.0 / 78.0).abs() < 1e-14);
        let n3 = brute_mu_delta_n(&mu, &[0, 1], 3).unwrap();
        assert!((n3 - (0.01 + 0.06 * 3.0 / 13.0)).abs() < 1e-15);
        // single self-loop word
        let n5 = brute_mu_delta_n(&mu, &[2], 5).unwrap();
        assert!((n5 - 0.5f64.powi(4) * (47.0 / 78.0)).abs() < 1e-15);
    }

    #[test]
    fn enumeration_budget_guards_large_sweeps() {
        let (_, _, mu) = setup();
        assert!(matches!(
            brute_mu_delta_n(&mu, &[0, 1, 2], 100).unwrap_err(),
            Error::EnumerationBudget { .. }
        ));
    }

    #[test]
    fn preimage_sum_matches_the_matrix_action() {
        let (_, pot, _) = setup();
        let transfer = build_transfer(&pot).unwrap();
        // normalised potential: L(1) = 1 at every point
        let ones = vec![1.0; 3];
        for x in [[0usize, 1], [1, 0], [2, 2]] {
            assert!((brute_apply(&pot, &ones, &x).unwrap() - 1.0).abs() < 1e-14);
        }
        // indicator of the first cylinder picks out one preimage term
        let ind = vec![1.0, 0.0, 0.0];
        assert!((brute_apply(&pot, &ind, &[1, 0]).unwrap() - 0.2).abs() < 1e-15);
        // no mass on the predecessors of x_0 = 1 other than symbols 2 and 3
        let off = vec![1.0, 0.0, 0.0];
        assert_eq!(brute_apply(&pot, &off, &[0, 1]).unwrap(), 0.0);
        // agreement with the matrix route on random-ish vectors
        let psi = vec![0.3, -1.2, 2.5];
        let applied = transfer.apply(&psi);
        for (v, x) in [[0usize, 1], [1, 0], [2, 0]].iter().enumerate() {
            let direct = brute_apply(&pot, &psi, x).unwrap();
            let state = transfer.state_index(&x[..1]).unwrap();
            assert!((direct - applied[state]).abs() < 1e-13, "state {v}");
        }
    }

    #[test]
    fn pressure_estimates_converge_to_the_spectral_values() {
        let (model, pot, _) = setup();
        // normalised potential: partition sums are constant, estimate is 0
        for n in [2, 5, 8] {
            assert!(finite_pressure_estimate(&pot, n).unwrap().abs() < 1e-12);
        }
        // restricted periodic orbit: exact at every even n
        let sub = sft::restrict(&model, &[0, 1]).unwrap();
        let sub_pot = pot.restrict(&sub).unwrap();
        for n in [2, 4, 6, 8] {
            let est = finite_pressure_estimate(&sub_pot, n).unwrap();
            assert!((est - 0.5 * 0.06f64.ln()).abs() < 1e-12, "n = {n}");
        }
        // zero potential: estimate approaches the topological entropy
        let zero = CylindricalPotential::constant(&model, 0.0).unwrap();
        let est = finite_pressure_estimate(&zero, 16).unwrap();
        assert!((est - (1.0 + 2.0f64.sqrt()).ln()).abs() < 1e-3);
    }
}
