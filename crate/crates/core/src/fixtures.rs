//! Multiplication tables for groups that have no builder keyword.

use crate::group::FiniteGroup;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut current, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

fn permutation_group(perms: Vec<Vec<usize>>, label: String) -> FiniteGroup {
    let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    // apply p first, then q
                    let pq: Vec<usize> = (0..p.len()).map(|x| q[p[x]]).collect();
                    index(&pq)
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(&table, label).expect("permutation products form a group")
}

/// The symmetric group on `n` points. Element ids follow the lexicographic
/// order of the permutations written as image lists, so the identity is `0`.
pub fn symmetric_group(n: usize) -> FiniteGroup {
    permutation_group(permutations(n), format!("symmetric:{n}"))
}

/// The alternating group on `n` points, ids in lexicographic order.
pub fn alternating_group(n: usize) -> FiniteGroup {
    let perms = permutations(n).into_iter().filter(|p| is_even(p)).collect();
    permutation_group(perms, format!("alternating:{n}"))
}

/// The permutation (as an image list) behind element `id` of [`symmetric_group`].
pub fn symmetric_permutation(n: usize, id: usize) -> Vec<usize> {
    permutations(n)[id].clone()
}

/// Element id of the permutation `p` in [`symmetric_group`].
pub fn symmetric_element(p: &[usize]) -> usize {
    permutations(p.len())
        .binary_search(&p.to_vec())
        .expect("a permutation of 0..n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(symmetric_group(3).order(), 6);
        assert_eq!(symmetric_group(5).order(), 120);
        assert_eq!(alternating_group(4).order(), 12);
        assert!(!symmetric_group(3).is_abelian());
        assert_eq!(symmetric_element(&[0, 1, 2, 3]), 0);
        assert_eq!(symmetric_permutation(3, 5), vec![2, 1, 0]);
    }
}
