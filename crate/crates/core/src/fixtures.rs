//! The two worked instances used throughout the tests and the CLI examples.

use crate::instance::{Assignment, Instance};

/// Three sets of four 6-component vectors.
pub fn fig1() -> Instance {
    Instance::from_strs(&[
        &["001101", "110111", "011101", "111101"],
        &["110010", "010101", "110011", "010101"],
        &["110110", "010110", "010011", "001111"],
    ])
    .expect("fixture is well formed")
}

/// The depicted feasible solution of cost 17, stacks in drawing order
/// (costs 3, 6, 4, 4). The first permutation is not the identity.
pub fn fig1_depicted_assignment() -> Assignment {
    Assignment::new(vec![vec![1, 0, 2, 3], vec![0, 2, 3, 1], vec![0, 1, 2, 3]])
        .expect("fixture is a bijection")
}

/// Instance where no optimal solution contains an all-ones stack.
pub fn fig2() -> Instance {
    Instance::from_strs(&[
        &["111", "101", "011"],
        &["111", "101", "110"],
        &["111", "011", "110"],
    ])
    .expect("fixture is well formed")
}

/// Optimal solution of cost 3 (three stacks of cost 1), canonical form.
pub fn fig2_depicted_assignment() -> Assignment {
    Assignment::new(vec![vec![0, 1, 2], vec![2, 1, 0], vec![2, 0, 1]])
        .expect("fixture is a bijection")
}
