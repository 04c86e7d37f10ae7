//! Automorphism groups of explicit finite groups.
//!
//! `Aut(G)` is found by backtracking over the images of a short generating
//! sequence and stored as an explicit, sorted list of image tables. Stabilizers
//! of sets are then plain filters.

use serde::{Deserialize, Serialize};

use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::{Error, Limits, Result};

/// A group automorphism as its full image table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Automorphism {
    image: Vec<Elem>,
}

impl Automorphism {
    pub fn identity(order: usize) -> Self {
        Automorphism {
            image: (0..order).collect(),
        }
    }

    /// Wraps an image table already known to be an automorphism.
    pub(crate) fn from_image(image: Vec<Elem>) -> Self {
        Automorphism { image }
    }

    /// Wraps an image table after checking it is a multiplication-preserving bijection.
    pub fn new(g: &FiniteGroup, image: Vec<Elem>) -> Result<Self> {
        let n = g.order();
        if image.len() != n {
            return Err(Error::PreconditionFailed("image table has the wrong length".into()));
        }
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(Error::PreconditionFailed("image table is not a bijection".into()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if image[g.mul(x, y)] != g.mul(image[x], image[y]) {
                    return Err(Error::PreconditionFailed(format!(
                        "image table does not preserve the product of {x} and {y}"
                    )));
                }
            }
        }
        Ok(Automorphism { image })
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x]
    }

    pub fn image(&self) -> &[Elem] {
        &self.image
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &Automorphism) -> Automorphism {
        Automorphism {
            image: self.image.iter().map(|&y| then.image[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut image = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y] = x;
        }
        Automorphism { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Image of a set, sorted.
    pub fn apply_set(&self, set: &[Elem]) -> Vec<Elem> {
        let mut out: Vec<Elem> = set.iter().map(|&x| self.image[x]).collect();
        out.sort_unstable();
        out
    }

    /// Order of this automorphism in `Aut(G)`.
    pub fn order(&self) -> usize {
        let mut power = self.clone();
        let mut k = 1;
        while !power.is_identity() {
            power = power.compose(self);
            k += 1;
        }
        k
    }
}

/// An explicit group of automorphisms, sorted by image table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutGroup {
    degree: usize,
    elements: Vec<Automorphism>,
}

impl AutGroup {
    /// Builds the group from a list already known to be closed.
    pub(crate) fn from_closed(degree: usize, mut elements: Vec<Automorphism>) -> Self {
        elements.sort();
        elements.dedup();
        AutGroup { degree, elements }
    }

    /// The subgroup generated by `gens`, closed under composition.
    pub fn generated(degree: usize, gens: &[Automorphism]) -> Self {
        let mut elements = vec![Automorphism::identity(degree)];
        let mut seen: std::collections::HashSet<Automorphism> = elements.iter().cloned().collect();
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for s in gens {
                let y = x.compose(s);
                if seen.insert(y.clone()) {
                    elements.push(y);
                }
            }
        }
        Self::from_closed(degree, elements)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: &Automorphism) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.contains(&a.inverse()) && self.elements.iter().all(|b| self.contains(&a.compose(b)))
        })
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Largest order of an element (the exponent when the group is abelian).
    pub fn max_element_order(&self) -> usize {
        self.elements.iter().map(Automorphism::order).max().unwrap_or(1)
    }

    /// Lcm of element orders.
    pub fn exponent(&self) -> usize {
        self.elements
            .iter()
            .map(Automorphism::order)
            .fold(1, crate::numtheory::lcm)
    }
}

/// Element order and centralizer size, preserved by every automorphism.
fn profile(g: &FiniteGroup, x: Elem) -> (usize, usize) {
    let centralizer = g.elements().filter(|&y| g.mul(x, y) == g.mul(y, x)).count();
    (g.element_order(x), centralizer)
}

/// Greedy short generating sequence: repeatedly add an element of largest
/// order outside the subgroup generated so far.
fn generating_sequence(g: &FiniteGroup) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut closure = g.closure_of(&gens);
    while let Some(x) = g
        .elements()
        .filter(|&x| !closure[x])
        .max_by_key(|&x| (g.element_order(x), std::cmp::Reverse(x)))
    {
        gens.push(x);
        closure = g.closure_of(&gens);
    }
    gens
}

const UNSET: Elem = usize::MAX;

struct Search<'a> {
    g: &'a FiniteGroup,
    gens: Vec<Elem>,
    candidates: Vec<Vec<Elem>>,
    found: Vec<Automorphism>,
    cap: usize,
}

impl Search<'_> {
    /// Extends `map` from the elements already mapped using the generator
    /// images in `images`; fails on any inconsistency or collision.
    fn extend(&self, map: &mut [Elem], used: &mut [bool], images: &[Elem]) -> bool {
        let mut queue: Vec<Elem> = (0..map.len()).filter(|&x| map[x] != UNSET).collect();
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (&s, &t) in self.gens.iter().zip(images) {
                let y = self.g.mul(x, s);
                let fy = self.g.mul(map[x], t);
                if map[y] == UNSET {
                    if used[fy] {
                        return false;
                    }
                    map[y] = fy;
                    used[fy] = true;
                    queue.push(y);
                } else if map[y] != fy {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, level: usize, map: &[Elem], used: &[bool], images: &mut Vec<Elem>) -> Result<()> {
        if level == self.gens.len() {
            debug_assert!(map.iter().all(|&y| y != UNSET));
            self.found.push(Automorphism { image: map.to_vec() });
            if self.found.len() > self.cap {
                return Err(Error::AutTooLarge { cap: self.cap });
            }
            return Ok(());
        }
        for i in 0..self.candidates[level].len() {
            let y = self.candidates[level][i];
            if used[y] {
                continue;
            }
            images.push(y);
            let mut next_map = map.to_vec();
            let mut next_used = used.to_vec();
            if self.extend(&mut next_map, &mut next_used, images) {
                self.run(level + 1, &next_map, &next_used, images)?;
            }
            images.pop();
        }
        Ok(())
    }
}

/// The full automorphism group of `g`.
pub fn automorphism_group(g: &FiniteGroup, limits: &Limits) -> Result<AutGroup> {
    limits.check_order(g.order())?;
    let n = g.order();
    let gens = generating_sequence(g);
    let profiles: Vec<(usize, usize)> = g.elements().map(|x| profile(g, x)).collect();
    let candidates = gens
        .iter()
        .map(|&s| g.elements().filter(|&y| profiles[y] == profiles[s]).collect())
        .collect();
    let mut search = Search {
        g,
        gens,
        candidates,
        found: Vec::new(),
        cap: limits.aut_cap,
    };
    let mut map = vec![UNSET; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;
    search.run(0, &map, &used, &mut Vec::new())?;
    Ok(AutGroup::from_closed(n, search.found))
}

/// `{σ ∈ A : set^σ = set}`.
pub fn setwise_stabilizer(a: &AutGroup, set: &[Elem]) -> AutGroup {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let elements = a
        .elements
        .iter()
        .filter(|s| s.apply_set(&sorted) == sorted)
        .cloned()
        .collect();
    AutGroup {
        degree: a.degree,
        elements,
    }
}

/// Orbit partition of an `A`-invariant set; orbits sorted, listed by smallest member.
pub fn orbits(a: &AutGroup, set: &[Elem]) -> Result<Vec<Vec<Elem>>> {
    let mut member = vec![false; a.degree];
    for &x in set {
        member[x] = true;
    }
    let mut done = vec![false; a.degree];
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = Vec::new();
    for &x in &sorted {
        if done[x] {
            continue;
        }
        let mut orbit: Vec<Elem> = a.elements.iter().map(|s| s.apply(x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        if orbit.iter().any(|&y| !member[y]) {
            return Err(Error::NotInvariant);
        }
        for &y in &orbit {
            done[y] = true;
        }
        out.push(orbit);
    }
    Ok(out)
}

/// Whether every automorphism in `a` maps `h` onto itself.
pub fn is_invariant_subgroup(h: &Subgroup, a: &AutGroup) -> bool {
    a.elements
        .iter()
        .all(|s| h.elements().iter().all(|&x| h.contains(s.apply(x))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::subgroup_generated;

    fn lim() -> Limits {
        Limits::default()
    }

    /// Every bijection fixing 0 that preserves the product; factorial time.
    fn brute_force_aut(g: &FiniteGroup) -> Vec<Automorphism> {
        let n = g.order();
        let mut out = Vec::new();
        let mut perm: Vec<Elem> = (0..n).collect();
        fn rec(k: usize, perm: &mut Vec<Elem>, g: &FiniteGroup, out: &mut Vec<Automorphism>) {
            let n = perm.len();
            if k == n {
                if let Ok(a) = Automorphism::new(g, perm.clone()) {
                    out.push(a);
                }
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, g, out);
                perm.swap(k, i);
            }
        }
        rec(1, &mut perm, g, &mut out);
        out.sort();
        out
    }

    #[test]
    fn matches_brute_force_on_small_groups() {
        let groups = vec![
            FiniteGroup::cyclic(1),
            FiniteGroup::cyclic(2),
            FiniteGroup::cyclic(5),
            FiniteGroup::cyclic(6),
            FiniteGroup::cyclic(8),
            FiniteGroup::dihedral(2),
            FiniteGroup::dihedral(3),
            FiniteGroup::dihedral(4),
            FiniteGroup::elementary_abelian(2, 3).unwrap(),
            crate::group::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4)),
        ];
        for g in groups {
            let aut = automorphism_group(&g, &lim()).unwrap();
            assert_eq!(aut.elements(), brute_force_aut(&g).as_slice(), "{}", g.label());
        }
    }

    #[test]
    fn known_orders() {
        assert_eq!(automorphism_group(&FiniteGroup::cyclic(5), &lim()).unwrap().order(), 4);
        assert_eq!(automorphism_group(&FiniteGroup::dihedral(6), &lim()).unwrap().order(), 12);
        let e16 = FiniteGroup::elementary_abelian(2, 4).unwrap();
        assert_eq!(automorphism_group(&e16, &lim()).unwrap().order(), 20160);
        let s4 = crate::fixtures::symmetric_group(4);
        assert_eq!(automorphism_group(&s4, &lim()).unwrap().order(), 24);
    }

    #[test]
    fn dihedral_aut_orders_follow_n_phi_n() {
        for n in 3..=40u64 {
            let g = FiniteGroup::dihedral(n as usize);
            let aut = automorphism_group(&g, &lim()).unwrap();
            assert_eq!(aut.order() as u64, n * crate::numtheory::euler_phi(n), "n = {n}");
        }
    }

    #[test]
    fn aut_cap_aborts() {
        let g = FiniteGroup::elementary_abelian(2, 4).unwrap();
        let limits = Limits {
            aut_cap: 1000,
            ..Limits::default()
        };
        assert_eq!(automorphism_group(&g, &limits).unwrap_err(), Error::AutTooLarge { cap: 1000 });
    }

    #[test]
    fn stabilizers_and_orbits() {
        let g = FiniteGroup::dihedral(6);
        let aut = automorphism_group(&g, &lim()).unwrap();
        let reflections: Vec<Elem> = (6..12).collect();
        assert_eq!(setwise_stabilizer(&aut, &reflections).order(), 12);

        // {a, a^5, b}: only τ_5 survives
        let c1 = [1, 5, 6];
        let stab = setwise_stabilizer(&aut, &c1);
        assert_eq!(stab.order(), 2);
        assert!(stab.is_closed());
        assert_eq!(orbits(&stab, &c1).unwrap(), vec![vec![1, 5], vec![6]]);

        let trivial = AutGroup::generated(12, &[]);
        assert_eq!(orbits(&trivial, &c1).unwrap(), vec![vec![1], vec![5], vec![6]]);
        assert_eq!(orbits(&aut, &c1).unwrap_err(), Error::NotInvariant);
    }

    #[test]
    fn invariant_subgroups_of_dihedral() {
        let n = 6;
        let g = FiniteGroup::dihedral(n);
        let aut = automorphism_group(&g, &lim()).unwrap();
        assert!(is_invariant_subgroup(&Subgroup::trivial(), &aut));
        assert!(is_invariant_subgroup(&subgroup_generated(&g, &[1]), &aut));
        // M2' = <a^2, ba> is swapped with M2 by τ_{n-1}φ
        let m2_prime = subgroup_generated(&g, &[2, n + 1]);
        let tau_phi = Automorphism::new(
            &g,
            (0..2 * n)
                .map(|x| if x < n { (x * (n - 1)) % n } else { n + ((x - n) * (n - 1) + 1) % n })
                .collect(),
        )
        .unwrap();
        let swap = AutGroup::generated(2 * n, &[tau_phi]);
        assert!(!is_invariant_subgroup(&m2_prime, &swap));
    }
}
