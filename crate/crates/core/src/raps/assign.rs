//! Greedy subcarrier assignment within one slot.

use alloc::vec;
use alloc::vec::Vec;

/// Assigns subcarriers of one slot to users so that user `k` ends up with
/// exactly `targets[k]` subcarriers.
///
/// `quality[k][n]` is the channel quality of user `k` on subcarrier `n`.
/// Every subcarrier first goes to its best user (lowest index on ties). Users
/// holding more than their target then hand subcarriers, in ascending user
/// order, to users below target: each move picks the pair (subcarrier held by
/// the donor, receiving user) with the smallest quality difference.
///
/// Returns the owner of every subcarrier. `targets` must sum to the number of
/// subcarriers.
pub fn assign_subcarriers(quality: &[Vec<f64>], targets: &[usize]) -> Vec<usize> {
    let users = quality.len();
    let subcarriers = quality.first().map_or(0, Vec::len);
    assert_eq!(targets.len(), users);
    assert_eq!(
        targets.iter().sum::<usize>(),
        subcarriers,
        "targets must fill the slot"
    );

    let mut owner = vec![0usize; subcarriers];
    let mut held = vec![0usize; users];
    for n in 0..subcarriers {
        let mut best = 0;
        for k in 1..users {
            if quality[k][n] > quality[best][n] {
                best = k;
            }
        }
        owner[n] = best;
        held[best] += 1;
    }

    for donor in 0..users {
        while held[donor] > targets[donor] {
            let mut choice: Option<(f64, usize, usize)> = None;
            for n in (0..subcarriers).filter(|&n| owner[n] == donor) {
                for receiver in (0..users).filter(|&l| held[l] < targets[l]) {
                    let loss = (quality[donor][n] - quality[receiver][n]).abs();
                    if choice.is_none_or(|(best, _, _)| loss < best) {
                        choice = Some((loss, n, receiver));
                    }
                }
            }
            let (_, n, receiver) =
                choice.expect("an under-served user exists while a donor is over target");
            owner[n] = receiver;
            held[donor] -= 1;
            held[receiver] += 1;
        }
    }
    owner
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_user_keeps_what_it_needs() {
        let q = vec![vec![5.0, 4.0, 3.0, 2.0], vec![1.0, 1.0, 1.0, 1.5]];
        let owner = assign_subcarriers(&q, &[2, 2]);
        assert_eq!(owner, vec![0, 0, 1, 1]);
    }

    #[test]
    fn counts_match_targets() {
        let q = vec![
            vec![1.0, 2.0, 3.0],
            vec![0.5, 0.1, 0.2],
            vec![0.9, 0.3, 0.4],
        ];
        let owner = assign_subcarriers(&q, &[0, 1, 2]);
        let mut held = [0; 3];
        for &k in &owner {
            held[k] += 1;
        }
        assert_eq!(held, [0, 1, 2]);
    }
}
