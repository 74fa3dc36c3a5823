//! Shared fixtures for the integration suites: a small deterministic PRNG,
//! random normalised potentials, and the constructed periodic graphs.

#![allow(dead_code)]

use thermoshift::sft::SftModel;
use thermoshift::transfer::{normalize, CylindricalPotential};
use thermoshift::{Potential, Tolerances};

/// xorshift64 with fixed seeds, enough randomness for property batteries.
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Random potential of the given order, values in [-2, 0.5].
pub fn random_potential(model: &SftModel, order: usize, rng: &mut XorShift) -> Potential {
    CylindricalPotential::from_fn(model, order, |_| rng.uniform(-2.0, 0.5)).unwrap()
}

/// Random potential normalised to column sums 1.
pub fn random_normalized(model: &SftModel, order: usize, rng: &mut XorShift) -> Potential {
    normalize(&random_potential(model, order, rng), &Tolerances::strict()).unwrap()
}

/// Five symbols; the first four form a complete bipartite period-2
/// subsystem, the fifth keeps the full model aperiodic.
pub fn period2_graph() -> (SftModel, Vec<usize>) {
    let model = SftModel::from_matrix(vec![
        vec![0, 0, 1, 1, 1],
        vec![0, 0, 1, 1, 1],
        vec![1, 1, 0, 0, 1],
        vec![1, 1, 0, 0, 1],
        vec![1, 1, 1, 1, 1],
    ])
    .unwrap();
    (model, vec![0, 1, 2, 3])
}

/// Four symbols; the period-2 subsystem has classes of different sizes.
pub fn period2_uneven_graph() -> (SftModel, Vec<usize>) {
    let model = SftModel::from_matrix(vec![
        vec![0, 1, 1, 1],
        vec![1, 0, 0, 1],
        vec![1, 0, 0, 1],
        vec![1, 1, 1, 1],
    ])
    .unwrap();
    (model, vec![0, 1, 2])
}

/// Four symbols; the first three form a 3-cycle, the fourth is a hub.
pub fn period3_graph() -> (SftModel, Vec<usize>) {
    let model = SftModel::from_matrix(vec![
        vec![0, 1, 0, 1],
        vec![0, 0, 1, 1],
        vec![1, 0, 0, 1],
        vec![1, 1, 1, 1],
    ])
    .unwrap();
    (model, vec![0, 1, 2])
}

/// Random irreducible aperiodic model on 4..=6 symbols with a proper
/// sub-alphabet whose restriction is irreducible and small enough for the
/// brute-force sweeps.
pub fn random_model_with_delta(rng: &mut XorShift) -> (SftModel, Vec<usize>) {
    loop {
        let size = 4 + rng.below(3);
        let rows: Vec<Vec<u8>> = (0..size)
            .map(|_| (0..size).map(|_| u8::from(rng.next_f64() < 0.55)).collect())
            .collect();
        let Ok(model) = SftModel::from_matrix(rows) else {
            continue;
        };
        let diag = thermoshift::sft::validate(&model);
        if !diag.irreducible || !diag.aperiodic {
            continue;
        }
        let delta_size = 2 + rng.below(size - 2);
        let mut delta: Vec<usize> = (0..size).collect();
        while delta.len() > delta_size {
            delta.remove(rng.below(delta.len()));
        }
        if delta.len() == size {
            continue;
        }
        let Ok(sub) = thermoshift::sft::restrict(&model, &delta) else {
            continue;
        };
        if !sub.is_irreducible() {
            continue;
        }
        // keep the word count at n = 14 enumerable
        let mut counts = vec![1.0f64; sub.size()];
        for _ in 1..14 {
            let mut next = vec![0.0f64; sub.size()];
            for i in 0..sub.size() {
                for j in 0..sub.size() {
                    if sub.allows(i, j) {
                        next[i] += counts[j];
                    }
                }
            }
            counts = next;
        }
        if counts.iter().sum::<f64>() > 1e6 {
            continue;
        }
        return (model, delta);
    }
}

/// Shannon entropy rate of the state chain of an equilibrium measure:
/// an entropy route independent of the variational identity.
pub fn shannon_entropy_rate(measure: &thermoshift::Measure) -> f64 {
    let t = measure.transfer();
    let per = measure.perron();
    let mut h = 0.0;
    for u in 0..t.dim() {
        let pi = measure.state_mass(u);
        for v in 0..t.dim() {
            let w = t.weight(u, v);
            if w > 0.0 {
                let p = w * per.right[v] / (per.lambda * per.right[u]);
                h -= pi * p * p.ln();
            }
        }
    }
    h
}
