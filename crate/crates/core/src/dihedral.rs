//! Formula-driven arithmetic for `D_2n` and the classification of its
//! 4-valent normal edge-transitive Cayley graphs.
//!
//! Elements use the encoding of [`FiniteGroup::dihedral`]: `a^i` is `i` and
//! `b·a^i` is `n + i`. Every automorphism is `τ_k φ^j`, acting by
//! `a^i ↦ a^{ik}` and `b·a^i ↦ b·a^{ik+j}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::automorphism::{self, AutGroup, Automorphism};
use crate::group::{Elem, FiniteGroup};
use crate::numtheory::{euler_phi, gcd, is_mersenne_prime, is_prime, units};
use crate::{Error, Limits, Result};

fn md(x: i64, n: usize) -> usize {
    x.rem_euclid(n as i64) as usize
}

fn coprime(a: usize, b: usize) -> bool {
    gcd(a as u64, b as u64) == 1
}

/// The automorphism `τ_k φ^j` of `D_2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DihedralAut {
    pub n: usize,
    pub k: usize,
    pub j: usize,
}

impl DihedralAut {
    pub fn new(n: usize, k: usize, j: usize) -> Result<Self> {
        if n < 2 || !coprime(k % n, n) {
            return Err(Error::BadParameters(format!("τ_{k} needs gcd({k}, {n}) = 1")));
        }
        Ok(DihedralAut { n, k: k % n, j: j % n })
    }

    pub fn identity(n: usize) -> Self {
        DihedralAut { n, k: 1 % n, j: 0 }
    }

    pub fn apply(&self, e: Elem) -> Elem {
        let n = self.n;
        if e < n {
            e * self.k % n
        } else {
            n + ((e - n) * self.k + self.j) % n
        }
    }

    pub fn apply_set(&self, set: &[Elem]) -> Vec<Elem> {
        let mut out: Vec<Elem> = set.iter().map(|&e| self.apply(e)).collect();
        out.sort_unstable();
        out
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &DihedralAut) -> DihedralAut {
        let n = self.n;
        DihedralAut {
            n,
            k: self.k * then.k % n,
            j: (self.j * then.k + then.j) % n,
        }
    }

    pub fn inverse(&self) -> DihedralAut {
        let n = self.n;
        let k_inv = (1..=n).find(|&x| x * self.k % n == 1 % n).expect("k is a unit");
        DihedralAut {
            n,
            k: k_inv % n,
            j: md(-((self.j * k_inv) as i64), n),
        }
    }

    pub fn order(&self) -> usize {
        let mut x = *self;
        let mut order = 1;
        while x != DihedralAut::identity(self.n) {
            x = x.compose(self);
            order += 1;
        }
        order
    }

    pub fn to_automorphism(&self) -> Automorphism {
        Automorphism::from_image((0..2 * self.n).map(|e| self.apply(e)).collect())
    }

    /// Reads `(k, j)` off an automorphism of `dihedral(n)`.
    pub fn from_automorphism(n: usize, a: &Automorphism) -> Self {
        DihedralAut {
            n,
            k: a.apply(1 % n) % n,
            j: a.apply(n) - n,
        }
    }
}

impl std::fmt::Display for DihedralAut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "τ_{}φ^{}", self.k, self.j)
    }
}

/// All `n·φ(n)` automorphisms ordered by `k`, then `j`.
pub fn all_dihedral_auts(n: usize) -> Vec<DihedralAut> {
    units(n as u64)
        .into_iter()
        .flat_map(|k| (0..n).map(move |j| DihedralAut { n, k: k as usize % n, j }))
        .collect()
}

pub fn dihedral_aut_count(n: usize) -> usize {
    n * euler_phi(n as u64) as usize
}

/// `Aut(D_2n)` as an explicit permutation group built from the formulas.
pub fn dihedral_aut_group(n: usize) -> AutGroup {
    AutGroup::from_closed(2 * n, all_dihedral_auts(n).iter().map(DihedralAut::to_automorphism).collect())
}

/// Whether `set` generates `D_2n`: it must contain a reflection, and the
/// rotation exponents together with reflection differences must be coprime to `n`.
pub fn generates_dihedral(n: usize, set: &[Elem]) -> bool {
    let Some(&first) = set.iter().find(|&&e| e >= n) else {
        return false;
    };
    let d = set.iter().fold(n as u64, |acc, &e| {
        let step = if e < n { e } else { md(e as i64 - first as i64, n) };
        gcd(acc, step as u64)
    });
    d == 1
}

/// `Aut(D_2n; C)` for a set containing a reflection: every stabilizing
/// automorphism sends the first reflection of `C` into `C`, which fixes `j`
/// once `k` is chosen.
pub fn stabilizer(n: usize, set: &[Elem]) -> Vec<DihedralAut> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let Some(&x0) = sorted.iter().find(|&&e| e >= n) else {
        return all_dihedral_auts(n)
            .into_iter()
            .filter(|s| s.apply_set(&sorted) == sorted)
            .collect();
    };
    let t0 = x0 - n;
    let mut out = Vec::new();
    for k in units(n as u64) {
        let k = k as usize % n;
        for &y in sorted.iter().filter(|&&y| y >= n) {
            let s = DihedralAut {
                n,
                k,
                j: md((y - n) as i64 - (t0 * k) as i64, n),
            };
            if s.apply_set(&sorted) == sorted {
                out.push(s);
            }
        }
    }
    out.sort();
    out
}

fn dihedral_inverse(n: usize, e: Elem) -> Elem {
    if e < n {
        (n - e) % n
    } else {
        e
    }
}

/// The transitivity condition on the orbits of `stab` on `set`.
fn orbit_transitive(n: usize, set: &[Elem], stab: &[DihedralAut]) -> bool {
    let orbit_of = |x: Elem| -> BTreeSet<Elem> { stab.iter().map(|s| s.apply(x)).collect() };
    let first = orbit_of(set[0]);
    if first.len() == set.len() {
        return true;
    }
    let inverted: BTreeSet<Elem> = first.iter().map(|&x| dihedral_inverse(n, x)).collect();
    if inverted.is_disjoint(&first) && first.len() * 2 == set.len() {
        return set.iter().all(|x| first.contains(x) || inverted.contains(x));
    }
    false
}

/// Transitivity of an inverse-closed generating subset of `D_2n`, using the fast stabilizer.
pub fn is_transitive_dihedral(n: usize, set: &[Elem]) -> bool {
    generates_dihedral(n, set) && orbit_transitive(n, set, &stabilizer(n, set))
}

fn validate_set(n: usize, set: &[Elem]) -> Result<Vec<Elem>> {
    if n < 3 {
        return Err(Error::BadParameters("n must be at least 3".into()));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(&x) = sorted.iter().find(|&&x| x >= 2 * n) {
        return Err(Error::ElementOutOfRange(x));
    }
    if sorted[0] == 0 {
        return Err(Error::ContainsIdentity);
    }
    if let Some(&x) = sorted.iter().find(|&&x| sorted.binary_search(&dihedral_inverse(n, x)).is_err()) {
        return Err(Error::NotInverseClosed(x));
    }
    Ok(sorted)
}

/// The coset decomposition `C = ∪_{i∈I} b·a^i⟨a^r⟩` of a transitive set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitiveSetStructure {
    pub n: usize,
    pub r: usize,
    pub index_set: Vec<usize>,
    pub aut_order: usize,
}

pub fn transitive_structure(n: usize, set: &[Elem]) -> Result<TransitiveSetStructure> {
    let set = validate_set(n, set)?;
    if !generates_dihedral(n, &set) {
        return Err(Error::NotGenerating);
    }
    let a0: Vec<DihedralAut> = all_dihedral_auts(n)
        .into_iter()
        .filter(|s| s.apply_set(&set) == set)
        .collect();
    if !orbit_transitive(n, &set, &a0) {
        return Err(Error::NotTransitive);
    }
    let r = (1..=n)
        .find(|&r| n % r == 0 && a0.contains(&DihedralAut { n, k: 1 % n, j: r % n }))
        .expect("φ^n is the identity");
    if let Some(&x) = set.iter().find(|&&x| x < n) {
        return Err(Error::StructureViolation(format!("transitive set contains the rotation a^{x}")));
    }
    let index_set: BTreeSet<usize> = set.iter().map(|&x| (x - n) % r).collect();
    let rebuilt: Vec<Elem> = index_set
        .iter()
        .flat_map(|&i| (0..n / r).map(move |t| n + i + t * r))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if rebuilt != set {
        return Err(Error::StructureViolation(format!(
            "C is not a union of cosets b·a^i⟨a^{r}⟩"
        )));
    }
    Ok(TransitiveSetStructure {
        n,
        r,
        index_set: index_set.into_iter().collect(),
        aut_order: a0.len(),
    })
}

pub fn family_a_valid(n: usize, i: usize) -> bool {
    n >= 3 && (2..n).contains(&i) && coprime(2 * i - 1, n) && 2 * i * (i - 1) % n == 0
}

pub fn family_b_valid(n: usize, k: usize) -> bool {
    n >= 3 && k >= 1 && k + 2 <= n && coprime(k, n) && (1 + k + k * k + k * k * k) % n == 0
}

fn reflections(n: usize, exponents: &[i64]) -> Vec<Elem> {
    let set: BTreeSet<Elem> = exponents.iter().map(|&e| n + md(e, n)).collect();
    set.into_iter().collect()
}

/// `{b, ba, ba^i, ba^{1−i}}`.
pub fn family_a_set(n: usize, i: usize) -> Vec<Elem> {
    reflections(n, &[0, 1, i as i64, 1 - i as i64])
}

/// `{b, ba, ba^{k+1}, ba^{k²+k+1}}`.
pub fn family_b_set(n: usize, k: usize) -> Vec<Elem> {
    let k = k as i64;
    reflections(n, &[0, 1, k + 1, k * k + k + 1])
}

/// `{b, ba^i, ba^j, ba^k}`.
pub fn new_family_set(n: usize, i: usize, j: usize, k: usize) -> Vec<Elem> {
    reflections(n, &[0, i as i64, j as i64, k as i64])
}

/// Parameters of the third family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NewFamilyParams {
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub ell: usize,
    pub m: usize,
}

impl NewFamilyParams {
    pub fn set(&self) -> Vec<Elem> {
        new_family_set(self.n, self.i, self.j, self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseCheck {
    pub clause: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewFamilyCheck {
    pub valid: bool,
    pub clauses: Vec<ClauseCheck>,
}

pub fn new_family_valid(p: &NewFamilyParams) -> NewFamilyCheck {
    let NewFamilyParams { n, i, j, k, ell, m } = *p;
    let in_range = n >= 5 && [i, j, k].iter().all(|&x| 1 < x && x < n);
    let mut clauses = vec![("n ≥ 5 and 1 < i, j, k < n".to_string(), in_range)];
    let n = n.max(1);
    let c = |x: usize| x % n;
    clauses.extend([
        ("i, j, k pairwise coprime".into(), coprime(i, j) && coprime(i, k) && coprime(j, k)),
        ("gcd(x, n) > 1 for x in {i, j, k}".into(), [i, j, k].iter().all(|&x| !coprime(x, n))),
        ("ℓ² ≡ 1".into(), c(ell * ell) == c(1)),
        ("m² ≡ 1".into(), c(m * m) == c(1)),
        ("ℓ ≢ 1".into(), c(ell) != c(1)),
        ("m ≢ 1".into(), c(m) != c(1)),
        ("ℓm ≢ 1".into(), c(ell * m) != c(1)),
        ("k ≡ jℓ + i".into(), c(k) == c(j * ell + i)),
        ("k ≡ im + j".into(), c(k) == c(i * m + j)),
        ("i(ℓ + 1) ≡ 0".into(), c(i * (ell + 1)) == 0),
        ("j(m + 1) ≡ 0".into(), c(j * (m + 1)) == 0),
    ]);
    NewFamilyCheck {
        valid: clauses.iter().all(|(_, h)| *h),
        clauses: clauses
            .into_iter()
            .map(|(clause, holds)| ClauseCheck { clause, holds })
            .collect(),
    }
}

/// The smallest `(ℓ, m)` completing `(n, i, j, k)` to valid parameters.
pub fn find_ell_m(n: usize, i: usize, j: usize, k: usize) -> Option<(usize, usize)> {
    let shape = n >= 5
        && [i, j, k].iter().all(|&x| 1 < x && x < n)
        && coprime(i, j)
        && coprime(i, k)
        && coprime(j, k)
        && [i, j, k].iter().all(|&x| !coprime(x, n));
    if !shape {
        return None;
    }
    let ells: Vec<usize> = (0..n)
        .filter(|&l| l * l % n == 1 && l != 1 && k % n == (j * l + i) % n && i * (l + 1) % n == 0)
        .collect();
    let ms: Vec<usize> = (0..n)
        .filter(|&m| m * m % n == 1 && m != 1 && k % n == (i * m + j) % n && j * (m + 1) % n == 0)
        .collect();
    let (ell, m) = ells
        .iter()
        .find_map(|&l| ms.iter().find(|&&m| l * m % n != 1).map(|&m| (l, m)))?;
    debug_assert!(new_family_valid(&NewFamilyParams { n, i, j, k, ell, m }).valid);
    Some((ell, m))
}

/// The explicit instance built from a non-Mersenne odd prime `p` and an odd prime `q | p+1`.
pub fn mersenne_family(p: usize, q: usize) -> Result<NewFamilyParams> {
    if p < 3 || !is_prime(p as u64) {
        return Err(Error::BadParameters(format!("p = {p} is not an odd prime")));
    }
    if is_mersenne_prime(p as u64) {
        return Err(Error::BadParameters(format!("p = {p} is a Mersenne prime")));
    }
    if q < 3 || !is_prime(q as u64) || (p + 1) % q != 0 {
        return Err(Error::BadParameters(format!("q = {q} is not an odd prime divisor of p + 1")));
    }
    let n = 2 * p * q;
    let params = NewFamilyParams {
        n,
        i: p,
        j: q,
        k: p + q,
        ell: 2 * p + 1,
        m: n - 2 * p - 1,
    };
    if !new_family_valid(&params).valid {
        return Err(Error::InconsistencyDetected(format!("{params:?} fails the family conditions")));
    }
    Ok(params)
}

/// Family label of a 4-element transitive set, up to `Aut(D_2n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family")]
pub enum FourValentFamily {
    FamilyA { i: usize },
    FamilyB { k: usize },
    NewFamily(NewFamilyParams),
    Overlap { i_a: usize, k_b: usize },
    NotNet,
}

/// A classification result; `sigma` carries the input to the family representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FourValentClass {
    pub family: FourValentFamily,
    pub sigma: Option<DihedralAut>,
}

impl FourValentClass {
    /// The family representative `C^σ`, if the class is a family member.
    pub fn representative(&self, n: usize) -> Option<Vec<Elem>> {
        match self.family {
            FourValentFamily::FamilyA { i } => Some(family_a_set(n, i)),
            FourValentFamily::FamilyB { k } => Some(family_b_set(n, k)),
            FourValentFamily::Overlap { i_a, .. } => Some(family_a_set(n, i_a)),
            FourValentFamily::NewFamily(p) => Some(p.set()),
            FourValentFamily::NotNet => None,
        }
    }
}

fn exponents(n: usize, set: &[Elem]) -> Vec<usize> {
    set.iter().map(|&x| x - n).collect()
}

/// Smallest valid family-(a) parameter producing exactly `e`.
fn match_family_a(n: usize, e: &[usize]) -> Option<usize> {
    e.iter()
        .copied()
        .filter(|&i| family_a_valid(n, i) && family_a_set(n, i) == reflections(n, &e.iter().map(|&x| x as i64).collect::<Vec<_>>()))
        .map(|i| i.min(n + 1 - i))
        .min()
}

fn match_family_b(n: usize, e: &[usize]) -> Option<usize> {
    let target = reflections(n, &e.iter().map(|&x| x as i64).collect::<Vec<_>>());
    e.iter()
        .filter(|&&x| x >= 2)
        .map(|&x| x - 1)
        .filter(|&k| family_b_valid(n, k) && family_b_set(n, k) == target)
        .min()
}

/// Family-(new) parameters for `e = {0, x, y, z}`, preferring `k` largest and
/// `i > j`, then the smallest `(ℓ, m)`.
fn match_new_family(n: usize, e: &[usize]) -> Option<NewFamilyParams> {
    if e.len() != 4 || e[0] != 0 {
        return None;
    }
    let (x, y, z) = (e[1], e[2], e[3]);
    let orders = [(y, x, z), (x, y, z), (z, y, x), (y, z, x), (z, x, y), (x, z, y)];
    orders.iter().find_map(|&(i, j, k)| {
        find_ell_m(n, i, j, k).map(|(ell, m)| NewFamilyParams { n, i, j, k, ell, m })
    })
}

/// Classifies a 4-element inverse-closed generating subset of `D_2n`.
///
/// Reported parameters are the smallest over the `Aut(D_2n)`-orbit: `i` for
/// family (a), `k` for family (b), `(k, i, j, ℓ, m)` for the new family.
pub fn classify_4valent(n: usize, set: &[Elem]) -> Result<FourValentClass> {
    let set = validate_set(n, set)?;
    if set.len() != 4 {
        return Err(Error::PreconditionFailed(format!("expected 4 elements, found {}", set.len())));
    }
    if !generates_dihedral(n, &set) {
        return Err(Error::NotGenerating);
    }
    if !is_transitive_dihedral(n, &set) {
        return Ok(FourValentClass {
            family: FourValentFamily::NotNet,
            sigma: None,
        });
    }
    let mut first_a: Option<(usize, DihedralAut)> = None;
    let mut first_b: Option<(usize, DihedralAut)> = None;
    let mut both: Option<(usize, usize, DihedralAut)> = None;
    let mut first_new: Option<(NewFamilyParams, DihedralAut)> = None;
    let new_key = |p: &NewFamilyParams| (p.k, p.i, p.j, p.ell, p.m);
    for sigma in all_dihedral_auts(n) {
        let image = sigma.apply_set(&set);
        if image.iter().any(|&x| x < n) {
            return Err(Error::StructureViolation("transitive set contains a rotation".into()));
        }
        let e = exponents(n, &image);
        let a = match_family_a(n, &e);
        let b = match_family_b(n, &e);
        if let (Some(i), Some(k)) = (a, b) {
            if both.map_or(true, |(bi, bk, _)| (i, k) < (bi, bk)) {
                both = Some((i, k, sigma));
            }
        }
        if let Some(i) = a {
            if first_a.map_or(true, |(bi, _)| i < bi) {
                first_a = Some((i, sigma));
            }
        }
        if let Some(k) = b {
            if first_b.map_or(true, |(bk, _)| k < bk) {
                first_b = Some((k, sigma));
            }
        }
        if a.is_none() && b.is_none() {
            if let Some(p) = match_new_family(n, &e) {
                if first_new.map_or(true, |(q, _)| new_key(&p) < new_key(&q)) {
                    first_new = Some((p, sigma));
                }
            }
        }
    }
    if first_new.is_some() && (first_a.is_some() || first_b.is_some()) {
        return Err(Error::InconsistencyDetected(
            "set matches the new family and a family (a) or (b) set".into(),
        ));
    }
    let (family, sigma) = match (both, first_a, first_b, first_new) {
        (Some((i_a, k_b, s)), ..) => (FourValentFamily::Overlap { i_a, k_b }, s),
        (None, Some((i_a, s)), Some((k_b, _)), _) => (FourValentFamily::Overlap { i_a, k_b }, s),
        (None, Some((i, s)), None, _) => (FourValentFamily::FamilyA { i }, s),
        (None, None, Some((k, s)), _) => (FourValentFamily::FamilyB { k }, s),
        (None, None, None, Some((p, s))) => (FourValentFamily::NewFamily(p), s),
        (None, None, None, None) => {
            return Err(Error::ClassificationGap(format!(
                "transitive set {set:?} of D_{} matches no family",
                2 * n
            )))
        }
    };
    Ok(FourValentClass {
        family,
        sigma: Some(sigma),
    })
}

/// One `Aut(D_2n)`-orbit of 4-element transitive generating sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumeratedClass {
    /// Lexicographically least set in the orbit.
    pub canonical: Vec<Elem>,
    pub orbit_size: usize,
    pub class: FourValentClass,
}

/// Lexicographically least image of `set` under `Aut(D_2n)`, and the orbit size.
pub fn canonical_form(n: usize, set: &[Elem]) -> (Vec<Elem>, usize) {
    let images: BTreeSet<Vec<Elem>> = all_dihedral_auts(n).iter().map(|s| s.apply_set(set)).collect();
    let size = images.len();
    (images.into_iter().next().expect("nonempty"), size)
}

/// Every inverse-closed 4-element subset of `D_2n ∖ {1}`, without pruning.
pub fn inverse_closed_4sets(n: usize) -> Vec<Vec<Elem>> {
    let mut involutions: Vec<Elem> = (n..2 * n).collect();
    if n % 2 == 0 {
        involutions.insert(0, n / 2);
    }
    let pairs: Vec<[Elem; 2]> = (1..n).filter(|&r| 2 * r < n).map(|r| [r, n - r]).collect();
    let mut out = Vec::new();
    let v = involutions.len();
    for a in 0..v {
        for b in a + 1..v {
            for c in b + 1..v {
                for d in c + 1..v {
                    out.push(vec![involutions[a], involutions[b], involutions[c], involutions[d]]);
                }
            }
            for p in &pairs {
                out.push(vec![involutions[a], involutions[b], p[0], p[1]]);
            }
        }
    }
    for (x, p) in pairs.iter().enumerate() {
        for q in &pairs[x + 1..] {
            out.push(vec![p[0], p[1], q[0], q[1]]);
        }
    }
    for set in &mut out {
        set.sort_unstable();
    }
    out
}

/// All `Aut(D_2n)`-classes of 4-valent normal edge-transitive Cayley graphs of `D_2n`.
pub fn enumerate_4valent(n: usize, limits: &Limits) -> Result<Vec<EnumeratedClass>> {
    if n < 3 {
        return Err(Error::BadParameters("n must be at least 3".into()));
    }
    if n > limits.enumeration_cap {
        return Err(Error::CapExceeded {
            value: n,
            cap: limits.enumeration_cap,
        });
    }
    let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut classes: BTreeMap<Vec<Elem>, EnumeratedClass> = BTreeMap::new();
    for set in inverse_closed_4sets(n) {
        if seen.contains(&set) || !is_transitive_dihedral(n, &set) {
            continue;
        }
        let images: BTreeSet<Vec<Elem>> = all_dihedral_auts(n).iter().map(|s| s.apply_set(&set)).collect();
        let canonical = images.iter().next().expect("nonempty").clone();
        let orbit_size = images.len();
        seen.extend(images);
        let class = classify_4valent(n, &canonical)?;
        classes.insert(
            canonical.clone(),
            EnumeratedClass {
                canonical,
                orbit_size,
                class,
            },
        );
    }
    Ok(classes.into_values().collect())
}

/// Exhaustively confirms that no `Aut(D_2n)`-image of a new-family set is a family (a) or (b) set.
pub fn new_family_not_classical(p: &NewFamilyParams) -> Result<bool> {
    if !new_family_valid(p).valid {
        return Err(Error::PreconditionFailed("parameters fail the family conditions".into()));
    }
    let n = p.n;
    let set = p.set();
    for sigma in all_dihedral_auts(n) {
        let e = exponents(n, &sigma.apply_set(&set));
        if match_family_a(n, &e).is_some() || match_family_b(n, &e).is_some() {
            return Err(Error::InconsistencyDetected(format!(
                "{sigma} carries the new-family set onto a family (a) or (b) set"
            )));
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AutStructureLabel {
    D8,
    #[serde(rename = "Z2xZ2")]
    Z2xZ2,
    Z4,
}

impl std::fmt::Display for AutStructureLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AutStructureLabel::D8 => "D8",
            AutStructureLabel::Z2xZ2 => "Z2xZ2",
            AutStructureLabel::Z4 => "Z4",
        })
    }
}

/// Predicted `Aut(G;C)` for a family representative, confirmed by brute force.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutStructure {
    pub label: AutStructureLabel,
    pub order: usize,
    pub generators: Vec<DihedralAut>,
}

fn closure(n: usize, gens: &[DihedralAut]) -> BTreeSet<DihedralAut> {
    let mut group: BTreeSet<DihedralAut> = BTreeSet::from([DihedralAut::identity(n)]);
    let mut frontier = vec![DihedralAut::identity(n)];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.compose(g);
            if group.insert(y) {
                frontier.push(y);
            }
        }
    }
    group
}

fn structure_label(elements: &BTreeSet<DihedralAut>) -> Option<AutStructureLabel> {
    let abelian = elements
        .iter()
        .all(|x| elements.iter().all(|y| x.compose(y) == y.compose(x)));
    let max_order = elements.iter().map(DihedralAut::order).max().unwrap_or(1);
    match (elements.len(), abelian, max_order) {
        (8, false, 4) => Some(AutStructureLabel::D8),
        (4, true, 2) => Some(AutStructureLabel::Z2xZ2),
        (4, true, 4) => Some(AutStructureLabel::Z4),
        _ => None,
    }
}

pub fn aut_gc_structure(n: usize, class: &FourValentClass) -> Result<AutStructure> {
    let d8_a = n % 4 == 0;
    let (label, generators) = match class.family {
        FourValentFamily::FamilyA { i } if d8_a && (i == n / 2 || i == n / 2 + 1) => {
            (AutStructureLabel::D8, vec![(n / 2 + 1, 0), (n - 1, 1)])
        }
        FourValentFamily::FamilyA { i } => (
            AutStructureLabel::Z2xZ2,
            vec![(n - 1, 1), (2 * i - 1, md(1 - i as i64, n))],
        ),
        FourValentFamily::FamilyB { k } if d8_a && k + 1 == n / 2 => {
            (AutStructureLabel::D8, vec![(n / 2 + 1, 0), (n / 2 - 1, 1)])
        }
        FourValentFamily::FamilyB { k } => (AutStructureLabel::Z4, vec![(k, 1)]),
        FourValentFamily::Overlap { .. } => (AutStructureLabel::D8, vec![(n / 2 + 1, 0), (n - 1, 1)]),
        FourValentFamily::NewFamily(p) => (AutStructureLabel::Z2xZ2, vec![(p.ell, p.i), (p.m, p.j)]),
        FourValentFamily::NotNet => {
            return Err(Error::PreconditionFailed("class is not a family member".into()))
        }
    };
    let generators: Vec<DihedralAut> = generators
        .into_iter()
        .map(|(k, j)| DihedralAut::new(n, k, j))
        .collect::<Result<_>>()?;
    let predicted = closure(n, &generators);
    let set = class.representative(n).expect("family member");
    let brute: BTreeSet<DihedralAut> = automorphism::setwise_stabilizer(&dihedral_aut_group(n), &set)
        .elements()
        .iter()
        .map(|a| DihedralAut::from_automorphism(n, a))
        .collect();
    if predicted != brute {
        return Err(Error::MismatchWithBruteForce(format!(
            "predicted {} elements, stabilizer has {}",
            predicted.len(),
            brute.len()
        )));
    }
    if structure_label(&brute) != Some(label) {
        return Err(Error::MismatchWithBruteForce(format!("stabilizer is not {label}")));
    }
    Ok(AutStructure {
        label,
        order: brute.len(),
        generators,
    })
}

/// Checks that `g` is a dihedral group built by [`FiniteGroup::dihedral`] and returns `n`.
pub fn dihedral_degree(g: &FiniteGroup) -> Result<usize> {
    g.dihedral_degree()
        .ok_or_else(|| Error::PreconditionFailed(format!("{} is not a dihedral builder group", g.label())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn aut_arithmetic() {
        assert!((0..12).all(|e| DihedralAut::identity(6).apply(e) == e));
        assert_eq!(DihedralAut::new(6, 5, 0).unwrap().apply(1), 5);
        assert_eq!(DihedralAut::new(6, 1, 1).unwrap().apply(6), 7);
        assert!(DihedralAut::new(6, 2, 0).is_err());
        for n in [3, 4, 6, 10] {
            let all = all_dihedral_auts(n);
            assert_eq!(all.len(), dihedral_aut_count(n));
            for x in &all {
                assert_eq!(x.compose(&x.inverse()), DihedralAut::identity(n));
                for y in &all {
                    let composed = x.compose(y);
                    assert!((0..2 * n).all(|e| composed.apply(e) == y.apply(x.apply(e))));
                }
            }
        }
    }

    #[test]
    fn formulas_match_table_automorphisms() {
        for n in 3..=40 {
            let g = FiniteGroup::dihedral(n);
            let formula = dihedral_aut_group(n);
            assert!(formula.elements().iter().all(|a| Automorphism::new(&g, a.image().to_vec()).is_ok()));
            if n <= 16 {
                let table = automorphism::automorphism_group(&g, &lim()).unwrap();
                assert_eq!(table.elements(), formula.elements());
            }
            assert_eq!(formula.order(), n * euler_phi(n as u64) as usize);
        }
    }

    #[test]
    fn fast_generation_and_stabilizer_agree_with_generic() {
        for n in 3..=9 {
            let g = FiniteGroup::dihedral(n);
            let aut = dihedral_aut_group(n);
            for set in inverse_closed_4sets(n) {
                assert_eq!(generates_dihedral(n, &set), g.generates(&set), "{n} {set:?}");
                let brute: Vec<DihedralAut> = automorphism::setwise_stabilizer(&aut, &set)
                    .elements()
                    .iter()
                    .map(|a| DihedralAut::from_automorphism(n, a))
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                assert_eq!(stabilizer(n, &set), brute);
            }
        }
    }

    #[test]
    fn structure_examples() {
        let s = transitive_structure(6, &(6..12).collect::<Vec<_>>()).unwrap();
        assert_eq!((s.r, s.index_set.clone()), (1, vec![0]));
        let s = transitive_structure(6, &[6, 7]).unwrap();
        assert_eq!((s.r, s.index_set.clone(), s.aut_order), (6, vec![0, 1], 2));
        let s = transitive_structure(8, &[8, 9, 12, 13]).unwrap();
        assert_eq!((s.r, s.index_set), (4, vec![0, 1]));
        assert_eq!(transitive_structure(6, &[1, 5, 6]).unwrap_err(), Error::NotTransitive);
    }

    #[test]
    fn family_predicates() {
        assert!(family_a_valid(21, 7));
        assert!((4..40).step_by(2).all(|n| family_a_valid(n, n / 2)));
        assert!(family_b_valid(5, 2));
        assert!((2..7).all(|k| family_b_valid(k * k + 1, k)));

        let p = NewFamilyParams { n: 30, i: 5, j: 3, k: 8, ell: 11, m: 19 };
        let check = new_family_valid(&p);
        assert!(check.valid, "{check:?}");
        assert_eq!(check.clauses.len(), 12);
        let unit_i = new_family_valid(&NewFamilyParams { i: 7, ..p });
        assert!(!unit_i.clauses[2].holds);
        assert!(!new_family_valid(&NewFamilyParams { ell: 1, ..p }).clauses[5].holds);

        assert_eq!(mersenne_family(5, 3).unwrap(), p);
        assert_eq!(
            mersenne_family(11, 3).unwrap(),
            NewFamilyParams { n: 66, i: 11, j: 3, k: 14, ell: 23, m: 43 }
        );
        assert!(matches!(mersenne_family(7, 3), Err(Error::BadParameters(_))));
        assert!(matches!(mersenne_family(5, 5), Err(Error::BadParameters(_))));
        assert!(matches!(mersenne_family(9, 5), Err(Error::BadParameters(_))));
    }

    #[test]
    fn classification_examples() {
        let c = classify_4valent(8, &[8, 9, 12, 13]).unwrap();
        assert_eq!(c.family, FourValentFamily::Overlap { i_a: 4, k_b: 3 });
        assert_eq!(c.sigma, Some(DihedralAut::identity(8)));

        let c = classify_4valent(30, &[30, 35, 33, 38]).unwrap();
        assert_eq!(
            c.family,
            FourValentFamily::NewFamily(NewFamilyParams { n: 30, i: 5, j: 3, k: 8, ell: 11, m: 19 })
        );
        assert_eq!(classify_4valent(6, &[1, 5, 6, 7]).unwrap().family, FourValentFamily::NotNet);
        assert_eq!(classify_4valent(5, &family_b_set(5, 2)).unwrap().family, FourValentFamily::FamilyB { k: 2 });
        assert_eq!(classify_4valent(21, &family_a_set(21, 15)).unwrap().family, FourValentFamily::FamilyA { i: 7 });

        // σ really carries the input to the representative
        let input = DihedralAut::new(30, 7, 4).unwrap().apply_set(&[30, 33, 35, 38]);
        let c = classify_4valent(30, &input).unwrap();
        assert_eq!(c.sigma.unwrap().apply_set(&input), c.representative(30).unwrap());
    }

    #[test]
    fn aut_structures() {
        let s = aut_gc_structure(8, &classify_4valent(8, &family_a_set(8, 4)).unwrap()).unwrap();
        assert_eq!((s.label, s.order), (AutStructureLabel::D8, 8));
        let s = aut_gc_structure(5, &classify_4valent(5, &family_b_set(5, 2)).unwrap()).unwrap();
        assert_eq!(s.label, AutStructureLabel::Z4);
        let s = aut_gc_structure(30, &classify_4valent(30, &[30, 33, 35, 38]).unwrap()).unwrap();
        assert_eq!(s.label, AutStructureLabel::Z2xZ2);
    }

    #[test]
    fn enumeration_examples() {
        let five = enumerate_4valent(5, &lim()).unwrap();
        assert!(!five.is_empty());
        assert!(five.iter().all(|c| matches!(c.class.family, FourValentFamily::FamilyB { .. })));
        let four = enumerate_4valent(4, &lim()).unwrap();
        assert!(four.iter().any(|c| c.canonical == vec![4, 5, 6, 7]));
        assert!(matches!(enumerate_4valent(61, &lim()), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn new_family_is_never_classical() {
        for (p, q) in [(5, 3), (11, 3)] {
            assert!(new_family_not_classical(&mersenne_family(p, q).unwrap()).unwrap());
        }
        let overlap = NewFamilyParams { n: 8, i: 1, j: 4, k: 5, ell: 3, m: 3 };
        assert!(matches!(new_family_not_classical(&overlap), Err(Error::PreconditionFailed(_))));
    }
}
