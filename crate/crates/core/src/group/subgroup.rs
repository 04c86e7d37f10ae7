use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Elem, FiniteGroup};
use crate::{automorphism, Error, Limits, Result};

/// A subgroup, stored as its strictly increasing element list.
///
/// Subgroups order by size first and then lexicographically, which is the
/// canonical order used in every report.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    elements: Vec<Elem>,
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements
            .len()
            .cmp(&other.elements.len())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    pub(crate) fn from_sorted(elements: Vec<Elem>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { elements }
    }

    fn from_mask(mask: &[bool]) -> Self {
        Subgroup {
            elements: mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect(),
        }
    }

    /// Checks that `elements` really is a subgroup of `g`.
    pub fn new(g: &FiniteGroup, mut elements: Vec<Elem>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&x) = elements.iter().find(|&&x| x >= g.order()) {
            return Err(Error::ElementOutOfRange(x));
        }
        let h = Subgroup { elements };
        let closed = h.contains(0)
            && h.elements.iter().all(|&x| {
                h.contains(g.inv(x)) && h.elements.iter().all(|&y| h.contains(g.mul(x, y)))
            });
        if !closed {
            return Err(Error::PreconditionFailed("element set is not a subgroup".into()));
        }
        Ok(h)
    }

    pub fn trivial() -> Self {
        Subgroup { elements: vec![0] }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup {
            elements: g.elements().collect(),
        }
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.len() <= other.elements.len()
            && self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            elements: self.elements.iter().copied().filter(|&x| other.contains(x)).collect(),
        }
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        self.elements
            .iter()
            .all(|&x| g.elements().all(|y| self.contains(g.conjugate(x, y))))
    }
}

/// Smallest subgroup containing `set`.
pub fn subgroup_generated(g: &FiniteGroup, set: &[Elem]) -> Subgroup {
    Subgroup::from_mask(&g.closure_of(set))
}

/// Conjugacy classes, each sorted, ordered by smallest member.
pub fn conjugacy_classes(g: &FiniteGroup) -> Vec<Vec<Elem>> {
    let mut seen = vec![false; g.order()];
    let mut classes = Vec::new();
    for x in g.elements() {
        if seen[x] {
            continue;
        }
        let mut class: Vec<Elem> = g.elements().map(|y| g.conjugate(x, y)).collect();
        class.sort_unstable();
        class.dedup();
        for &c in &class {
            seen[c] = true;
        }
        classes.push(class);
    }
    classes
}

/// All normal subgroups of `g`, sorted by size and then element list.
///
/// Every normal subgroup is generated by a union of conjugacy classes, so the
/// search joins one class at a time onto already-found normal subgroups.
pub fn all_normal_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    limits.check_order(g.order())?;
    let classes = conjugacy_classes(g);
    let mut found: HashSet<Subgroup> = HashSet::new();
    let mut queue: Vec<(Subgroup, Vec<Elem>)> = vec![(Subgroup::trivial(), Vec::new())];
    found.insert(Subgroup::trivial());
    let mut head = 0;
    while head < queue.len() {
        let (n, gens) = queue[head].clone();
        head += 1;
        for class in &classes {
            if n.contains(class[0]) {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.extend_from_slice(class);
            let m = subgroup_generated(g, &next_gens);
            if found.insert(m.clone()) {
                queue.push((m, next_gens));
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Every subgroup of `g`, sorted canonically. Exponential in general; guarded by the order cap.
pub fn all_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    limits.check_order(g.order())?;
    let mut found: HashSet<Subgroup> = HashSet::new();
    found.insert(Subgroup::trivial());
    let mut queue: Vec<(Subgroup, Vec<Elem>)> = vec![(Subgroup::trivial(), Vec::new())];
    let mut head = 0;
    while head < queue.len() {
        let (h, gens) = queue[head].clone();
        head += 1;
        // elements generating the same cyclic subgroup give the same join
        let mut tried = vec![false; g.order()];
        for x in g.elements() {
            if h.contains(x) || tried[x] {
                continue;
            }
            let mut y = x;
            while y != 0 {
                if g.element_order(y) == g.element_order(x) {
                    tried[y] = true;
                }
                y = g.mul(y, x);
            }
            let mut next = gens.clone();
            next.push(x);
            let k = subgroup_generated(g, &next);
            if found.insert(k.clone()) {
                queue.push((k, next));
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Inclusion-maximal proper subgroups.
pub fn maximal_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    let all = all_subgroups(g, limits)?;
    let proper: Vec<&Subgroup> = all.iter().filter(|h| h.order() < g.order()).collect();
    Ok(proper
        .iter()
        .filter(|h| {
            !proper
                .iter()
                .any(|k| k.order() > h.order() && h.is_subgroup_of(k))
        })
        .map(|h| (*h).clone())
        .collect())
}

/// The Frattini subgroup: intersection of all maximal proper subgroups.
pub fn frattini_subgroup(g: &FiniteGroup, limits: &Limits) -> Result<Subgroup> {
    Ok(maximal_subgroups(g, limits)?
        .iter()
        .fold(Subgroup::whole(g), |acc, m| acc.intersection(m)))
}

/// Whether the only `Aut(g)`-invariant normal subgroups are `{1}` and `g`.
pub fn is_characteristically_simple(g: &FiniteGroup, limits: &Limits) -> Result<bool> {
    let aut = automorphism::automorphism_group(g, limits)?;
    let normals = all_normal_subgroups(g, limits)?;
    Ok(normals
        .iter()
        .filter(|n| !n.is_trivial() && n.order() < g.order())
        .all(|n| !automorphism::is_invariant_subgroup(n, &aut)))
}

/// The natural map `G → G/N`.
///
/// Cosets are numbered in order of their smallest element, so the kernel is
/// coset `0` and the quotient's identity stays `0`.
#[derive(Debug, Clone)]
pub struct CosetMap {
    kernel: Subgroup,
    quotient: FiniteGroup,
    projection: Vec<Elem>,
}

impl CosetMap {
    pub(crate) fn from_parts(kernel: Subgroup, quotient: FiniteGroup, projection: Vec<Elem>) -> Self {
        CosetMap {
            kernel,
            quotient,
            projection,
        }
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn quotient(&self) -> &FiniteGroup {
        &self.quotient
    }

    pub fn projection(&self) -> &[Elem] {
        &self.projection
    }

    #[inline]
    pub fn project(&self, x: Elem) -> Elem {
        self.projection[x]
    }

    /// The cosets in quotient-id order.
    pub fn cosets(&self) -> Vec<Vec<Elem>> {
        let mut cosets = vec![Vec::new(); self.quotient.order()];
        for (x, &c) in self.projection.iter().enumerate() {
            cosets[c].push(x);
        }
        cosets
    }
}

/// The quotient of `g` by the normal subgroup `n`.
pub fn quotient(g: &FiniteGroup, n: &Subgroup) -> Result<CosetMap> {
    if !n.is_normal_in(g) {
        return Err(Error::NotNormal);
    }
    const UNSET: Elem = usize::MAX;
    let mut projection = vec![UNSET; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if projection[x] != UNSET {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        for &k in n.elements() {
            projection[g.mul(x, k)] = id;
        }
    }
    let label = format!("{}/{}", g.label(), n.order());
    let quotient = FiniteGroup::from_fn(reps.len(), label, |a, b| projection[g.mul(reps[a], reps[b])]);
    Ok(CosetMap {
        kernel: n.clone(),
        quotient,
        projection,
    })
}

/// Brute-force subgroup lattice over all element subsets; test oracle for tiny groups.
#[cfg(test)]
pub(crate) fn brute_force_subgroups(g: &FiniteGroup) -> std::collections::BTreeSet<Subgroup> {
    assert!(g.order() <= 16);
    let n = g.order();
    let mut out = std::collections::BTreeSet::new();
    for mask in 0u32..(1 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let has = |x: Elem| mask >> x & 1 == 1;
        let closed = (0..n)
            .filter(|&x| has(x))
            .all(|x| (0..n).filter(|&y| has(y)).all(|y| has(g.mul(x, y))));
        if closed {
            out.insert(Subgroup::from_sorted((0..n).filter(|&x| has(x)).collect()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::direct_product;

    fn lim() -> Limits {
        Limits::default()
    }

    fn dihedral_rotations(n: usize, step: usize) -> Subgroup {
        let mut v: Vec<Elem> = (0..n).step_by(step).collect();
        v.sort();
        Subgroup::from_sorted(v)
    }

    #[test]
    fn generated_subgroups() {
        let d6 = FiniteGroup::dihedral(3);
        assert_eq!(subgroup_generated(&d6, &[]), Subgroup::trivial());
        assert_eq!(subgroup_generated(&d6, &[3]).elements(), &[0, 3]);
        assert_eq!(subgroup_generated(&d6, &[3, 4]).order(), 6);
    }

    #[test]
    fn normal_subgroups_of_small_groups() {
        let z6 = all_normal_subgroups(&FiniteGroup::cyclic(6), &lim()).unwrap();
        assert_eq!(z6.len(), 4);
        let d6 = all_normal_subgroups(&FiniteGroup::dihedral(3), &lim()).unwrap();
        let orders: Vec<usize> = d6.iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 3, 6]);
        assert_eq!(d6[1], dihedral_rotations(3, 1));
        // D8: {1}, <a^2>, <a>, <a^2,b>, <a^2,ba>, G
        let d8g = FiniteGroup::dihedral(4);
        let d8 = all_normal_subgroups(&d8g, &lim()).unwrap();
        assert_eq!(d8.len(), 6);
        assert!(d8.contains(&Subgroup::from_sorted(vec![0, 2])));
        assert!(d8.contains(&Subgroup::from_sorted(vec![0, 2, 4, 6])));
        assert!(d8.contains(&Subgroup::from_sorted(vec![0, 2, 5, 7])));
    }

    #[test]
    fn normal_subgroups_match_brute_force() {
        let groups = vec![
            FiniteGroup::cyclic(8),
            FiniteGroup::cyclic(12),
            FiniteGroup::dihedral(4),
            FiniteGroup::dihedral(6),
            FiniteGroup::dihedral(8),
            FiniteGroup::elementary_abelian(2, 3).unwrap(),
            direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4)),
            direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::dihedral(3)),
            crate::fixtures::alternating_group(4),
        ];
        for g in groups {
            let brute: Vec<Subgroup> = brute_force_subgroups(&g)
                .into_iter()
                .filter(|h| h.is_normal_in(&g))
                .collect();
            let mut brute = brute;
            brute.sort();
            assert_eq!(all_normal_subgroups(&g, &lim()).unwrap(), brute, "{}", g.label());
            let mut subs: Vec<Subgroup> = brute_force_subgroups(&g).into_iter().collect();
            subs.sort();
            assert_eq!(all_subgroups(&g, &lim()).unwrap(), subs, "{}", g.label());
        }
    }

    #[test]
    fn quotients() {
        let z6 = FiniteGroup::cyclic(6);
        let q = quotient(&z6, &Subgroup::trivial()).unwrap();
        assert_eq!(q.projection(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(q.quotient().table(), z6.table());

        let d12 = FiniteGroup::dihedral(6);
        let q = quotient(&d12, &dihedral_rotations(6, 1)).unwrap();
        assert_eq!(q.quotient().order(), 2);

        let z12 = FiniteGroup::cyclic(12);
        let q = quotient(&z12, &Subgroup::from_sorted(vec![0, 4, 8])).unwrap();
        assert_eq!(q.quotient().order(), 4);
        assert!(q.quotient().elements().any(|x| q.quotient().element_order(x) == 4));

        let refl = subgroup_generated(&d12, &[6]);
        assert_eq!(quotient(&d12, &refl).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn quotient_projection_is_homomorphism() {
        let g = FiniteGroup::dihedral(8);
        for n in all_normal_subgroups(&g, &lim()).unwrap() {
            let q = quotient(&g, &n).unwrap();
            assert_eq!(q.quotient().order() * n.order(), g.order());
            for x in g.elements() {
                for y in g.elements() {
                    assert_eq!(q.project(g.mul(x, y)), q.quotient().mul(q.project(x), q.project(y)));
                }
            }
        }
    }

    fn radical(n: usize) -> usize {
        crate::numtheory::prime_factors(n as u64).iter().map(|&p| p as usize).product()
    }

    #[test]
    fn frattini_of_cyclic_and_dihedral() {
        let z12 = FiniteGroup::cyclic(12);
        assert_eq!(frattini_subgroup(&z12, &lim()).unwrap().elements(), &[0, 6]);
        for n in 3..=16 {
            let m = radical(n);
            let expected = dihedral_rotations(n, m);
            assert_eq!(frattini_subgroup(&FiniteGroup::cyclic(n), &lim()).unwrap(), expected);
            assert_eq!(frattini_subgroup(&FiniteGroup::dihedral(n), &lim()).unwrap(), expected);
        }
        let s4 = crate::fixtures::symmetric_group(4);
        assert!(frattini_subgroup(&s4, &lim()).unwrap().is_trivial());
    }

    #[test]
    fn characteristic_simplicity() {
        let klein = FiniteGroup::elementary_abelian(2, 2).unwrap();
        assert!(is_characteristically_simple(&klein, &lim()).unwrap());
        assert!(!is_characteristically_simple(&FiniteGroup::cyclic(4), &lim()).unwrap());
        assert!(!is_characteristically_simple(&FiniteGroup::cyclic(6), &lim()).unwrap());
        assert!(is_characteristically_simple(&FiniteGroup::cyclic(7), &lim()).unwrap());
    }

    #[test]
    fn order_cap_is_enforced() {
        let g = FiniteGroup::cyclic(20);
        let small = Limits::default().with_order_cap(10);
        assert_eq!(
            all_normal_subgroups(&g, &small).unwrap_err(),
            Error::OrderCapExceeded { order: 20, cap: 10 }
        );
        assert!(frattini_subgroup(&g, &small).is_err());
    }
}
