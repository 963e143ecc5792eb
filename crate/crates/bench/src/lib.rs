//! Deterministic workloads for the solver benchmarks.

use robustnp_core::rational::{int, ratio};
use robustnp_core::lp::{LinearProgram, Sense};
use robustnp_core::{Charge, Rational, SampleSpace, Space, TestProblem};

fn charge(space: &Space, weights: &[i64], tail: i64) -> Charge {
    let total: i64 = weights.iter().sum::<i64>() + tail;
    let masses = weights.iter().map(|&w| ratio(w, total)).collect();
    Charge::probability(space, masses, ratio(tail, total)).expect("weights are positive")
}

/// `atoms` atoms, `members` charges per family, level 1/4. With `tail`,
/// every charge also puts some mass on the tail atom.
pub fn composite_problem(atoms: usize, members: usize, tail: bool) -> TestProblem {
    let space = SampleSpace::new((0..atoms).map(|a| format!("w{a}")), tail).expect("labels are distinct");
    let family = |salt: i64| -> Vec<Charge> {
        (0..members as i64)
            .map(|j| {
                let w: Vec<i64> = (0..atoms as i64).map(|a| (a * 7 + j * 3 + salt) % 5 + 1).collect();
                charge(&space, &w, if tail { j % 2 + salt % 2 } else { 0 })
            })
            .collect()
    };
    TestProblem::from_charges(family(0), family(1), ratio(1, 4)).expect("valid problem")
}

/// Single null and alternative charges on `atoms` atoms.
pub fn simple_pair(atoms: usize) -> (Charge, Charge, Rational) {
    let space = SampleSpace::new((0..atoms).map(|a| format!("w{a}")), false).expect("labels are distinct");
    let p: Vec<i64> = (0..atoms as i64).map(|a| a % 4 + 1).collect();
    let q: Vec<i64> = (0..atoms as i64).map(|a| (a * 3) % 7 + 1).collect();
    (charge(&space, &p, 0), charge(&space, &q, 0), ratio(1, 3))
}

/// Dense packing LP: maximize the sum of `n` variables under `n` mixed rows
/// and unit upper bounds.
pub fn packing_lp(n: usize) -> LinearProgram {
    let mut lp = LinearProgram::maximize(vec![int(1); n]);
    for r in 0..n as i64 {
        let coeffs = (0..n as i64).map(|c| ratio((r * 5 + c * 3) % 7 + 1, 4)).collect();
        lp.add_row(coeffs, Sense::Le, int(n as i64));
    }
    for k in 0..n {
        let mut e = vec![int(0); n];
        e[k] = int(1);
        lp.add_row(e, Sense::Le, int(1));
    }
    lp
}

#[cfg(test)]
mod tests {
    use super::*;
    use robustnp_core::{np_test, solve_minimax};

    #[test]
    fn workloads_are_solvable() {
        for tail in [false, true] {
            let prob = composite_problem(6, 3, tail);
            assert_eq!(prob.space().has_tail(), tail);
            solve_minimax(&prob).unwrap();
        }
        let (p, q, alpha) = simple_pair(16);
        assert!(np_test(&p, &q, &alpha).unwrap().attained_level <= alpha);
        assert!(packing_lp(5).solve().is_ok());
    }
}
