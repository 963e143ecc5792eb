//! Seeded random instances shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robustnp_core::rational::{int, ratio};
use robustnp_core::{Charge, Rational, SampleSpace, Space, TestProblem};

pub const ALPHAS: [(i64, i64); 3] = [(1, 4), (1, 2), (3, 4)];

/// Spreads `d` units over `slots` and returns masses `k/d`.
fn units(rng: &mut ChaCha8Rng, slots: &[usize], width: usize, d: i64) -> Vec<Rational> {
    let mut counts = vec![0i64; width];
    for _ in 0..d {
        counts[*slots.choose(rng).expect("at least one slot")] += 1;
    }
    counts.into_iter().map(|c| ratio(c, d)).collect()
}

/// Probability charge with denominator at most 8 on the given variable slots.
pub fn random_charge(rng: &mut ChaCha8Rng, space: &Space, slots: &[usize]) -> Charge {
    let d = rng.gen_range(1..=8);
    let mut v = units(rng, slots, space.variable_count(), d);
    let tail = if space.has_tail() { v.pop().expect("tail slot") } else { int(0) };
    Charge::probability(space, v, tail).expect("valid charge")
}

pub fn random_space(rng: &mut ChaCha8Rng, max_atoms: usize) -> Space {
    let n = rng.gen_range(1..=max_atoms);
    SampleSpace::new((0..n).map(|i| format!("w{}", i + 1)), rng.gen_bool(0.5)).expect("valid space")
}

/// Up to four atoms plus an optional tail, families of at most three
/// members, denominators at most 8. A quarter of the instances put the
/// alternative on atoms the null does not charge.
pub fn random_problem(seed: u64) -> TestProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = random_space(&mut rng, 4);
    let n = space.len();
    let all: Vec<usize> = (0..space.variable_count()).collect();
    let atoms_only: Vec<usize> = (0..n).collect();
    let (p_slots, q_slots) = if n >= 2 && rng.gen_bool(0.25) {
        let cut = rng.gen_range(1..n);
        let mut p: Vec<usize> = (0..cut).collect();
        if space.has_tail() && rng.gen_bool(0.5) {
            p.push(n);
        }
        (p, (cut..n).collect())
    } else {
        (all.clone(), all)
    };
    let pick = |rng: &mut ChaCha8Rng, slots: &Vec<usize>| -> Vec<usize> {
        if space.has_tail() && rng.gen_bool(0.5) {
            let s: Vec<usize> = slots.iter().copied().filter(|&k| k < n).collect();
            if s.is_empty() { atoms_only.clone() } else { s }
        } else {
            slots.clone()
        }
    };
    let np = rng.gen_range(1..=3);
    let nq = rng.gen_range(1..=3);
    let null = (0..np)
        .map(|_| {
            let s = pick(&mut rng, &p_slots);
            random_charge(&mut rng, &space, &s)
        })
        .collect();
    let alternative = (0..nq)
        .map(|_| {
            let s = pick(&mut rng, &q_slots);
            random_charge(&mut rng, &space, &s)
        })
        .collect();
    let (a, b) = ALPHAS[rng.gen_range(0..ALPHAS.len())];
    TestProblem::from_charges(null, alternative, ratio(a, b)).expect("valid problem")
}

/// Two countably additive probabilities on at most five atoms.
pub fn random_pair(seed: u64) -> (Charge, Charge, Rational) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=5);
    let space = SampleSpace::new((0..n).map(|i| format!("w{}", i + 1)), false).expect("valid space");
    let mut slots: Vec<usize> = (0..n).collect();
    let p = random_charge(&mut rng, &space, &slots);
    slots.shuffle(&mut rng);
    let keep = rng.gen_range(1..=n);
    let q = random_charge(&mut rng, &space, &slots[..keep]);
    let (a, b) = ALPHAS[rng.gen_range(0..ALPHAS.len())];
    (p, q, ratio(a, b))
}

/// Seeds used by the acceptance suite.
pub fn seeds(count: usize) -> impl Iterator<Item = u64> {
    (0..count as u64).map(|i| 0x5eed_0000 + i)
}
