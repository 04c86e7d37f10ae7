//! Connection sets and the relative Frattini subgroup `Φ(G;C)`.
//!
//! For an inverse-closed connection set `C` the lattice `A(G;C)` holds the
//! proper normal subgroups invariant under `Aut(G;C)`; `Φ(G;C)` is the
//! intersection of its inclusion-maximal members. The subset-quantified
//! characterization of `Φ(G;C)` is implemented separately in
//! [`phi_membership_oracle`] and shares no code with the lattice path.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::automorphism::{self, AutGroup, Automorphism};
use crate::group::{
    all_normal_subgroups, direct_product, quotient, subgroup_generated, Elem, FiniteGroup,
    Subgroup,
};
use crate::{Error, Limits, Result};

/// Largest group accepted by [`phi_membership_oracle`].
pub const ORACLE_ORDER_CAP: usize = 16;

/// An inverse-closed subset of `G ∖ {1}` with its stabilizer `Aut(G;C)` and orbits.
#[derive(Debug, Clone)]
pub struct ConnectionSet {
    group: Arc<FiniteGroup>,
    aut: Arc<AutGroup>,
    elements: Vec<Elem>,
    aut_gc: AutGroup,
    orbits: Vec<Vec<Elem>>,
}

impl ConnectionSet {
    /// Validates `set` and computes `Aut(G)` and `Aut(G;C)`.
    pub fn new(group: Arc<FiniteGroup>, set: &[Elem], limits: &Limits) -> Result<Self> {
        validate(&group, set)?;
        let aut = Arc::new(automorphism::automorphism_group(&group, limits)?);
        Self::with_aut(group, aut, set)
    }

    /// Like [`ConnectionSet::new`] but reuses an already computed `Aut(G)`.
    pub fn with_aut(group: Arc<FiniteGroup>, aut: Arc<AutGroup>, set: &[Elem]) -> Result<Self> {
        let elements = validate(&group, set)?;
        let aut_gc = automorphism::setwise_stabilizer(&aut, &elements);
        let orbits = automorphism::orbits(&aut_gc, &elements)?;
        Ok(ConnectionSet {
            group,
            aut,
            elements,
            aut_gc,
            orbits,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// The full automorphism group of the parent group.
    pub fn full_aut(&self) -> &Arc<AutGroup> {
        &self.aut
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// `Aut(G;C)`.
    pub fn aut_gc(&self) -> &AutGroup {
        &self.aut_gc
    }

    pub fn orbits(&self) -> &[Vec<Elem>] {
        &self.orbits
    }
}

fn validate(g: &FiniteGroup, set: &[Elem]) -> Result<Vec<Elem>> {
    let mut elements = set.to_vec();
    elements.sort_unstable();
    elements.dedup();
    if elements.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(&x) = elements.iter().find(|&&x| x >= g.order()) {
        return Err(Error::ElementOutOfRange(x));
    }
    if elements[0] == 0 {
        return Err(Error::ContainsIdentity);
    }
    if let Some(&x) = elements.iter().find(|&&x| elements.binary_search(&g.inv(x)).is_err()) {
        return Err(Error::NotInverseClosed(x));
    }
    Ok(elements)
}

/// Shorthand for [`ConnectionSet::new`].
pub fn make_connection_set(g: &Arc<FiniteGroup>, set: &[Elem], limits: &Limits) -> Result<ConnectionSet> {
    ConnectionSet::new(Arc::clone(g), set, limits)
}

pub fn is_generating(c: &ConnectionSet) -> bool {
    c.group.generates(&c.elements)
}

/// Whether the orbits of `Aut(G;C)` on `C` are a single orbit or two mutually inverse ones.
pub fn has_transitive_orbit_structure(c: &ConnectionSet) -> bool {
    match c.orbits.as_slice() {
        [_] => true,
        [first, second] => {
            let mut inverted: Vec<Elem> = first.iter().map(|&x| c.group.inv(x)).collect();
            inverted.sort_unstable();
            &inverted == second
        }
        _ => false,
    }
}

/// Transitivity of a generating connection set; equivalent to normal
/// edge-transitivity of its Cayley graph.
pub fn is_transitive_set(c: &ConnectionSet) -> Result<bool> {
    if !is_generating(c) {
        return Err(Error::NotGenerating);
    }
    Ok(has_transitive_orbit_structure(c))
}

/// `A(G;C)`, its maximal members and `Φ(G;C)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantNormalLattice {
    pub all: Vec<Subgroup>,
    pub maximal: Vec<Subgroup>,
    pub phi: Subgroup,
}

impl InvariantNormalLattice {
    pub fn contains(&self, n: &Subgroup) -> bool {
        self.all.binary_search(n).is_ok()
    }
}

pub fn invariant_normal_lattice(c: &ConnectionSet, limits: &Limits) -> Result<InvariantNormalLattice> {
    let g = &c.group;
    let all: Vec<Subgroup> = all_normal_subgroups(g, limits)?
        .into_iter()
        .filter(|n| n.order() < g.order() || g.order() == 1)
        .filter(|n| automorphism::is_invariant_subgroup(n, &c.aut_gc))
        .collect();
    let maximal: Vec<Subgroup> = all
        .iter()
        .filter(|n| !all.iter().any(|m| m.order() > n.order() && n.is_subgroup_of(m)))
        .cloned()
        .collect();
    let phi = maximal
        .iter()
        .fold(Subgroup::whole(g), |acc, m| acc.intersection(m));
    Ok(InvariantNormalLattice { all, maximal, phi })
}

/// Smallest superset of `set` closed under conjugation and under `Aut(G;C)`.
pub fn normal_c_closure(c: &ConnectionSet, set: &[Elem]) -> Vec<Elem> {
    let g = &c.group;
    let mut member = vec![false; g.order()];
    let mut queue: Vec<Elem> = Vec::new();
    for &x in set {
        if !std::mem::replace(&mut member[x], true) {
            queue.push(x);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let conjugates = g.elements().map(|h| g.conjugate(x, h));
        let images = c.aut_gc.elements().iter().map(|s| s.apply(x));
        for y in conjugates.chain(images) {
            if !std::mem::replace(&mut member[y], true) {
                queue.push(y);
            }
        }
    }
    queue.sort_unstable();
    queue
}

fn is_normal_c_closed(c: &ConnectionSet, set: &[Elem]) -> bool {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    normal_c_closure(c, &sorted) == sorted
}

/// Checks that deleting `Φ(G;C)` from a normal C-closed generating set keeps
/// both properties.
pub fn check_removal_property(c: &ConnectionSet, set: &[Elem], limits: &Limits) -> Result<bool> {
    if !is_normal_c_closed(c, set) {
        return Err(Error::PreconditionFailed("set is not normal C-closed".into()));
    }
    if !c.group.generates(set) {
        return Err(Error::PreconditionFailed("set does not generate the group".into()));
    }
    let phi = invariant_normal_lattice(c, limits)?.phi;
    let rest: Vec<Elem> = set.iter().copied().filter(|&x| !phi.contains(x)).collect();
    Ok(is_normal_c_closed(c, &rest) && c.group.generates(&rest))
}

/// For every subset `X ⊆ G`, whether the normal C-closure of `X` generates `G`.
/// Indexed by the bitmask of `X`.
fn closure_generation_table(c: &ConnectionSet) -> Result<Vec<bool>> {
    let g = &c.group;
    let n = g.order();
    if n > ORACLE_ORDER_CAP {
        return Err(Error::OrderCapExceeded {
            order: n,
            cap: ORACLE_ORDER_CAP,
        });
    }
    let single: Vec<u32> = g
        .elements()
        .map(|x| {
            normal_c_closure(c, &[x])
                .into_iter()
                .fold(0u32, |m, y| m | 1 << y)
        })
        .collect();
    let mut memo: HashMap<u32, bool> = HashMap::new();
    let mut table = vec![false; 1 << n];
    for (mask, slot) in table.iter_mut().enumerate() {
        let closure = (0..n)
            .filter(|&x| mask >> x & 1 == 1)
            .fold(0u32, |m, x| m | single[x]);
        *slot = *memo.entry(closure).or_insert_with(|| {
            let gens: Vec<Elem> = (0..n).filter(|&x| closure >> x & 1 == 1).collect();
            g.generates(&gens)
        });
    }
    Ok(table)
}

fn oracle_verdict(table: &[bool], y: Elem) -> bool {
    let bit = 1usize << y;
    (0..table.len()).all(|mask| !table[mask | bit] || table[mask])
}

/// Decides `y ∈ Φ(G;C)` from the subset criterion: `y` belongs iff adding
/// it never turns a non-generating normal C-closure into a generating one.
///
/// Quantifies over all `2^|G|` subsets and therefore refuses groups of
/// order above [`ORACLE_ORDER_CAP`].
pub fn phi_membership_oracle(c: &ConnectionSet, y: Elem) -> Result<bool> {
    let table = closure_generation_table(c)?;
    Ok(oracle_verdict(&table, y))
}

/// Every element passing [`phi_membership_oracle`], sharing one subset table.
pub fn phi_by_oracle(c: &ConnectionSet) -> Result<Vec<Elem>> {
    let table = closure_generation_table(c)?;
    Ok(c.group.elements().filter(|&y| oracle_verdict(&table, y)).collect())
}

/// The constant `ℓ = |C ∩ yΦ|` over cosets meeting `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetIntersectionProfile {
    pub phi: Subgroup,
    pub ell: usize,
    /// Coset ids (cosets of `Φ` numbered by smallest element) that meet `C`.
    pub nonempty_cosets: Vec<usize>,
}

pub fn coset_profile(c: &ConnectionSet, limits: &Limits) -> Result<CosetIntersectionProfile> {
    if !is_transitive_set(c)? {
        return Err(Error::NotTransitive);
    }
    let phi = invariant_normal_lattice(c, limits)?.phi;
    let map = quotient(&c.group, &phi)?;
    let mut counts = vec![0usize; map.quotient().order()];
    for &x in &c.elements {
        counts[map.project(x)] += 1;
    }
    if counts[0] != 0 {
        return Err(Error::InconsistencyDetected(
            "connection set meets Φ(G;C) although it is transitive".into(),
        ));
    }
    let nonempty_cosets: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] > 0).collect();
    let ell = counts[nonempty_cosets[0]];
    if let Some(&bad) = nonempty_cosets.iter().find(|&&i| counts[i] != ell) {
        return Err(Error::NonConstantIntersection(format!(
            "coset {} meets C in {} elements, coset {} in {}",
            nonempty_cosets[0], ell, bad, counts[bad]
        )));
    }
    Ok(CosetIntersectionProfile {
        phi,
        ell,
        nonempty_cosets,
    })
}

/// `C^σ` as a connection set of the same group.
pub fn transitive_set_image(c: &ConnectionSet, sigma: &Automorphism) -> Result<ConnectionSet> {
    if !c.aut.contains(sigma) {
        return Err(Error::PreconditionFailed("σ is not an automorphism of the group".into()));
    }
    ConnectionSet::with_aut(Arc::clone(&c.group), Arc::clone(&c.aut), &sigma.apply_set(&c.elements))
}

/// `C × D` on `G × H` for transitive `C` and `D`, at least one of them a single orbit.
///
/// Transitivity here is the orbit condition alone; the product of two
/// generating sets need not generate `G × H`.
pub fn product_transitive_set(c: &ConnectionSet, d: &ConnectionSet, limits: &Limits) -> Result<ConnectionSet> {
    if !has_transitive_orbit_structure(c) || !has_transitive_orbit_structure(d) {
        return Err(Error::PreconditionFailed("both factors must be transitive".into()));
    }
    if c.orbits.len() != 1 && d.orbits.len() != 1 {
        return Err(Error::PreconditionFailed(
            "neither stabilizer is transitive; the product may split into four orbits".into(),
        ));
    }
    let group = Arc::new(direct_product(&c.group, &d.group));
    let m = d.group.order();
    let set: Vec<Elem> = c
        .elements
        .iter()
        .flat_map(|&x| d.elements.iter().map(move |&y| x * m + y))
        .collect();
    let product = ConnectionSet::new(group, &set, limits)?;
    if !has_transitive_orbit_structure(&product) {
        return Err(Error::InconsistencyDetected(
            "product of transitive sets is not transitive".into(),
        ));
    }
    Ok(product)
}

/// `∩ (M^g)^σ` over `g ∈ G` and `σ ∈ Aut(G;C)`: the largest normal
/// invariant subgroup inside `m`.
pub fn invariant_core(c: &ConnectionSet, m: &Subgroup) -> Subgroup {
    let g = &c.group;
    let elements: Vec<Elem> = m
        .elements()
        .iter()
        .copied()
        .filter(|&x| {
            g.elements().all(|h| {
                c.aut_gc
                    .elements()
                    .iter()
                    .all(|s| m.contains(s.inverse().apply(g.conjugate(x, g.inv(h)))))
            })
        })
        .collect();
    subgroup_generated(g, &elements)
}

/// Inverse-closed "units" of `g`: involutions as singletons and `{x, x^-1}` pairs.
pub fn inverse_pairs(g: &FiniteGroup) -> Vec<Vec<Elem>> {
    g.elements()
        .skip(1)
        .filter(|&x| x <= g.inv(x))
        .map(|x| if x == g.inv(x) { vec![x] } else { vec![x, g.inv(x)] })
        .collect()
}

/// Every inverse-closed generating subset of `G ∖ {1}`, each sorted.
pub fn inverse_closed_generating_sets(g: &FiniteGroup) -> Vec<Vec<Elem>> {
    let units = inverse_pairs(g);
    assert!(units.len() <= 20, "too many inverse-closed subsets to enumerate");
    let mut out = Vec::new();
    for mask in 1u32..(1 << units.len()) {
        let mut set: Vec<Elem> = (0..units.len())
            .filter(|&i| mask >> i & 1 == 1)
            .flat_map(|i| units[i].iter().copied())
            .collect();
        set.sort_unstable();
        if g.generates(&set) {
            out.push(set);
        }
    }
    out
}

/// A random transitive generating set: the orbit of `{x, x^-1}` under a
/// random subgroup of `Aut(G)`. Returns `None` if no attempt generates `G`.
pub fn sample_transitive_set<R: Rng>(g: &FiniteGroup, aut: &AutGroup, rng: &mut R) -> Option<Vec<Elem>> {
    if g.order() < 2 {
        return None;
    }
    for _ in 0..64 {
        let gens: Vec<Automorphism> = (0..rng.gen_range(0..3))
            .filter_map(|_| aut.elements().choose(rng).cloned())
            .collect();
        let h = AutGroup::generated(g.order(), &gens);
        let x = rng.gen_range(1..g.order());
        let mut set: Vec<Elem> = h
            .elements()
            .iter()
            .flat_map(|s| [s.apply(x), s.apply(g.inv(x))])
            .collect();
        set.sort_unstable();
        set.dedup();
        if g.generates(&set) {
            return Some(set);
        }
    }
    None
}

/// A random inverse-closed generating set built from random inverse pairs.
pub fn sample_generating_set<R: Rng>(g: &FiniteGroup, rng: &mut R) -> Option<Vec<Elem>> {
    let units = inverse_pairs(g);
    if units.is_empty() {
        return None;
    }
    for _ in 0..64 {
        let p = rng.gen_range(0.1..0.6);
        let mut set: Vec<Elem> = units
            .iter()
            .filter(|_| rng.gen_bool(p))
            .flat_map(|u| u.iter().copied())
            .collect();
        set.sort_unstable();
        if !set.is_empty() && g.generates(&set) {
            return Some(set);
        }
    }
    None
}

/// Parses a connection-set expression.
///
/// Tokens are comma separated. Dihedral groups accept `a^I`, `b.a^I`, `a`,
/// `b`, `b.a` and the shorthand `all-reflections`; every group accepts raw
/// element ids.
pub fn parse_connection_set(g: &FiniteGroup, text: &str) -> Result<Vec<Elem>> {
    let dihedral = g.dihedral_degree();
    let mut out = Vec::new();
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Ok(id) = token.parse::<usize>() {
            if id >= g.order() {
                return Err(Error::ElementOutOfRange(id));
            }
            out.push(id);
            continue;
        }
        let n = dihedral.ok_or_else(|| {
            Error::Parse(format!("`{token}`: symbolic tokens need a dihedral group"))
        })?;
        if token == "all-reflections" {
            out.extend(n..2 * n);
            continue;
        }
        let (reflection, rotation) = match token.strip_prefix('b') {
            Some(rest) => (true, rest.strip_prefix('.').unwrap_or(rest)),
            None => (false, token),
        };
        let exponent: i64 = if rotation.is_empty() {
            0
        } else if rotation == "a" {
            1
        } else {
            let e = rotation
                .strip_prefix("a^")
                .ok_or_else(|| Error::Parse(format!("bad dihedral token `{token}`")))?;
            e.parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{token}`")))?
        };
        let i = exponent.rem_euclid(n as i64) as usize;
        out.push(if reflection { n + i } else { i });
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Formats an element of a dihedral group as `a^i` or `b.a^i`, other groups as the id.
pub fn format_element(g: &FiniteGroup, x: Elem) -> String {
    match g.dihedral_degree() {
        Some(n) if x < n => format!("a^{x}"),
        Some(n) => format!("b.a^{}", x - n),
        None => x.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn cs(g: FiniteGroup, set: &[Elem]) -> ConnectionSet {
        ConnectionSet::new(Arc::new(g), set, &lim()).unwrap()
    }

    fn rotations(n: usize, step: usize) -> Subgroup {
        Subgroup::new(&FiniteGroup::dihedral(n), (0..n).step_by(step).collect()).unwrap()
    }

    #[test]
    fn validation_errors() {
        let z6 = Arc::new(FiniteGroup::cyclic(6));
        assert_eq!(make_connection_set(&z6, &[1], &lim()).unwrap_err(), Error::NotInverseClosed(1));
        assert_eq!(make_connection_set(&z6, &[0, 3], &lim()).unwrap_err(), Error::ContainsIdentity);
        assert_eq!(make_connection_set(&z6, &[], &lim()).unwrap_err(), Error::Empty);
        assert!(make_connection_set(&z6, &[1, 5], &lim()).is_ok());
        // {b, ba} in D6
        assert!(make_connection_set(&Arc::new(FiniteGroup::dihedral(3)), &[3, 4], &lim()).is_ok());
    }

    #[test]
    fn generation_and_transitivity() {
        assert!(is_generating(&cs(FiniteGroup::dihedral(3), &[3, 4])));
        assert!(!is_generating(&cs(FiniteGroup::cyclic(6), &[2, 4])));
        let d12_rot = cs(FiniteGroup::dihedral(6), &[1, 5]);
        assert!(!is_generating(&d12_rot));
        assert_eq!(is_transitive_set(&d12_rot).unwrap_err(), Error::NotGenerating);

        assert!(is_transitive_set(&cs(FiniteGroup::dihedral(6), &[6, 7])).unwrap());
        let c1 = cs(FiniteGroup::dihedral(6), &[1, 5, 6]);
        assert_eq!(c1.orbits(), &[vec![1, 5], vec![6]]);
        assert!(!is_transitive_set(&c1).unwrap());
        assert!(is_transitive_set(&cs(FiniteGroup::dihedral(6), &(6..12).collect::<Vec<_>>())).unwrap());
    }

    #[test]
    fn lattice_examples() {
        let z6 = invariant_normal_lattice(&cs(FiniteGroup::cyclic(6), &[1, 5]), &lim()).unwrap();
        let orders: Vec<usize> = z6.all.iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 2, 3]);
        assert_eq!(z6.maximal.len(), 2);
        assert!(z6.phi.is_trivial());

        for n in [3, 5, 7, 9] {
            let l = invariant_normal_lattice(&cs(FiniteGroup::dihedral(n), &[n, n + 1]), &lim()).unwrap();
            assert_eq!(l.maximal, vec![rotations(n, 1)]);
            assert_eq!(l.phi, rotations(n, 1));
        }

        let d12 = FiniteGroup::dihedral(6);
        let m2 = Subgroup::new(&d12, vec![0, 2, 4, 6, 8, 10]).unwrap();
        let m2p = Subgroup::new(&d12, vec![0, 2, 4, 7, 9, 11]).unwrap();
        let l = invariant_normal_lattice(&cs(d12, &[1, 5, 6]), &lim()).unwrap();
        let mut expected = vec![rotations(6, 1), m2, m2p];
        expected.sort();
        assert_eq!(l.maximal, expected);
        assert_eq!(l.phi, rotations(6, 2));
    }

    #[test]
    fn closures() {
        let c = cs(FiniteGroup::dihedral(3), &[3, 4]);
        assert!(normal_c_closure(&c, &[]).is_empty());
        assert_eq!(normal_c_closure(&c, &[3]), vec![3, 4, 5]);
    }

    #[test]
    fn removal_property_examples() {
        let c = cs(FiniteGroup::dihedral(5), &[5, 6]);
        let x = normal_c_closure(&c, &[5, 1]);
        assert_eq!(x, vec![1, 4, 5, 6, 7, 8, 9]);
        assert!(check_removal_property(&c, &x, &lim()).unwrap());
        let z6 = cs(FiniteGroup::cyclic(6), &[1, 5]);
        assert!(check_removal_property(&z6, &[1, 2, 3, 4, 5], &lim()).unwrap());
        assert!(matches!(
            check_removal_property(&z6, &[1], &lim()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn oracle_examples() {
        let c = cs(FiniteGroup::dihedral(5), &[5, 6]);
        assert!(phi_membership_oracle(&c, 0).unwrap());
        assert!(phi_membership_oracle(&c, 1).unwrap());
        assert!(!phi_membership_oracle(&c, 5).unwrap());
        assert_eq!(phi_by_oracle(&c).unwrap(), vec![0, 1, 2, 3, 4]);
        let big = cs(FiniteGroup::cyclic(17), &[1, 16]);
        assert!(matches!(phi_membership_oracle(&big, 0), Err(Error::OrderCapExceeded { .. })));
    }

    #[test]
    fn coset_profiles() {
        let p = coset_profile(&cs(FiniteGroup::dihedral(5), &[5, 6]), &lim()).unwrap();
        assert_eq!((p.ell, p.nonempty_cosets.clone()), (2, vec![1]));
        let p = coset_profile(&cs(FiniteGroup::dihedral(6), &(6..12).collect::<Vec<_>>()), &lim()).unwrap();
        assert_eq!(p.phi, rotations(6, 1));
        assert_eq!(p.ell, 6);
        let a5 = crate::fixtures::alternating_group(5);
        let three_cycles: Vec<Elem> = a5.elements().filter(|&x| a5.element_order(x) == 3).collect();
        let p = coset_profile(&cs(a5, &three_cycles), &lim()).unwrap();
        assert!(p.phi.is_trivial());
        assert_eq!(p.ell, 1);
        let c1 = cs(FiniteGroup::dihedral(6), &[1, 5, 6]);
        assert_eq!(coset_profile(&c1, &lim()).unwrap_err(), Error::NotTransitive);
    }

    #[test]
    fn images_and_products() {
        let n = 7;
        let c = cs(FiniteGroup::dihedral(n), &[n, n + 1]);
        let id = Automorphism::identity(2 * n);
        assert_eq!(transitive_set_image(&c, &id).unwrap().elements(), c.elements());
        // φ^i : b·a^x ↦ b·a^(x+i)
        for i in 0..n {
            let phi_i = Automorphism::new(
                c.group(),
                (0..2 * n).map(|x| if x < n { x } else { n + (x - n + i) % n }).collect(),
            )
            .unwrap();
            let img = transitive_set_image(&c, &phi_i).unwrap();
            let mut expected = vec![n + i, n + (i + 1) % n];
            expected.sort();
            assert_eq!(img.elements(), expected.as_slice());
            assert!(is_transitive_set(&img).unwrap());
        }

        let z2 = cs(FiniteGroup::cyclic(2), &[1]);
        let prod = product_transitive_set(&cs(FiniteGroup::cyclic(3), &[1, 2]), &z2, &lim()).unwrap();
        assert_eq!(prod.elements(), &[3, 5]);
        assert!(is_transitive_set(&prod).unwrap());
        let prod = product_transitive_set(&cs(FiniteGroup::dihedral(3), &[3, 4]), &z2, &lim()).unwrap();
        assert_eq!(prod.group().order(), 12);
        assert!(!is_generating(&prod));
        assert!(has_transitive_orbit_structure(&prod));
    }

    #[test]
    fn product_needs_transitive_factors() {
        let c1 = cs(FiniteGroup::dihedral(6), &[1, 5, 6]);
        let z2 = cs(FiniteGroup::cyclic(2), &[1]);
        assert!(matches!(
            product_transitive_set(&c1, &z2, &lim()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn parser() {
        let d = FiniteGroup::dihedral(10);
        assert_eq!(parse_connection_set(&d, "b.a^0,b.a^1").unwrap(), vec![10, 11]);
        assert_eq!(parse_connection_set(&d, "a, a^-1, b").unwrap(), vec![1, 9, 10]);
        assert_eq!(parse_connection_set(&d, "all-reflections").unwrap(), (10..20).collect::<Vec<_>>());
        assert_eq!(parse_connection_set(&FiniteGroup::cyclic(6), "1,5").unwrap(), vec![1, 5]);
        assert!(parse_connection_set(&FiniteGroup::cyclic(6), "a").is_err());
        assert!(parse_connection_set(&FiniteGroup::cyclic(6), "9").is_err());
        assert_eq!(format_element(&d, 12), "b.a^2");
    }
}
