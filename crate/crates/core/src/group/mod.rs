//! Explicit finite groups given by their multiplication tables.
//!
//! Elements are the integers `0..order`, the identity is always `0`, and every
//! derived object (subgroups, cosets, quotients) keeps that convention so that
//! equality of subgroups is plain equality of sorted element lists.

mod spec;
mod subgroup;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use spec::{parse_group_spec, parse_table_text, table_to_text};
pub use subgroup::{
    all_normal_subgroups, all_subgroups, conjugacy_classes, frattini_subgroup,
    is_characteristically_simple, maximal_subgroups, quotient, subgroup_generated, CosetMap,
    Subgroup,
};

/// Element id inside a [`FiniteGroup`].
pub type Elem = usize;

/// A finite group stored as a dense multiplication table.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    label: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a square table, validating every group axiom.
    ///
    /// If the identity of the table is not element `0` the elements are
    /// relabelled by swapping the identity with `0`.
    pub fn from_table(table: &[Vec<Elem>], label: impl Into<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!(
                    "row {r} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!("entry {bad} in row {r} is out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;

        // swap `identity` and 0
        let relabel = |x: Elem| {
            if x == identity {
                0
            } else if x == 0 {
                identity
            } else {
                x
            }
        };
        let mut mul = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[relabel(x) * n + relabel(y)] = relabel(table[x][y]);
            }
        }

        for x in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for y in 0..n {
                row_seen[mul[x * n + y]] = true;
                col_seen[mul[y * n + x]] = true;
            }
            if row_seen.contains(&false) || col_seen.contains(&false) {
                return Err(Error::NotAGroup(format!(
                    "row or column {x} is not a permutation"
                )));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = mul[x * n + y];
                for z in 0..n {
                    let yz = mul[y * n + z];
                    if mul[xy * n + z] != mul[x * n + yz] {
                        return Err(Error::NotAGroup(format!(
                            "associativity fails for ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        let inv = (0..n)
            .map(|x| (0..n).find(|&y| mul[x * n + y] == 0).expect("rows are permutations"))
            .collect();
        Ok(FiniteGroup {
            order: n,
            mul,
            inv,
            label: label.into(),
        })
    }

    /// Builds a group from a multiplication closure that is known to satisfy the axioms.
    pub(crate) fn from_fn(order: usize, label: String, f: impl Fn(Elem, Elem) -> Elem) -> Self {
        let mut mul = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                mul.push(f(x, y));
            }
        }
        let inv = (0..order)
            .map(|x| {
                (0..order)
                    .find(|&y| mul[x * order + y] == 0)
                    .expect("every element has an inverse")
            })
            .collect();
        FiniteGroup {
            order,
            mul,
            inv,
            label,
        }
    }

    /// The cyclic group `Z_n`; element `i` is `a^i`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        Self::from_fn(n, format!("cyclic:{n}"), |x, y| (x + y) % n)
    }

    /// The dihedral group of order `2n`.
    ///
    /// Ids `0..n` are the rotations `a^i`; ids `n..2n` are the reflections
    /// `b·a^(i-n)`. With `ba = a^-1 b` the products reduce to index arithmetic
    /// modulo `n`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 2, "dihedral group needs n >= 2");
        Self::from_fn(2 * n, format!("dihedral:{n}"), |x, y| {
            let (xr, xi) = (x >= n, x % n);
            let (yr, yi) = (y >= n, y % n);
            match (xr, yr) {
                (false, false) => (xi + yi) % n,
                (false, true) => n + (yi + n - xi) % n,
                (true, false) => n + (xi + yi) % n,
                (true, true) => (yi + n - xi) % n,
            }
        })
    }

    /// The elementary abelian group `Z_p^k`, coordinates in base `p` with the
    /// first coordinate most significant.
    pub fn elementary_abelian(p: usize, k: u32) -> Result<Self> {
        if !crate::numtheory::is_prime(p as u64) {
            return Err(Error::BadParameters(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::BadParameters("exponent must be at least 1".into()));
        }
        let order = p.checked_pow(k).ok_or_else(|| Error::BadParameters("order overflows".into()))?;
        Ok(Self::from_fn(order, format!("elemab:{p}^{k}"), move |x, y| {
            let (mut x, mut y) = (x, y);
            let (mut out, mut place) = (0, 1);
            for _ in 0..k {
                out += ((x % p + y % p) % p) * place;
                x /= p;
                y /= p;
                place *= p;
            }
            out
        }))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: Elem) -> Elem {
        self.inv[x]
    }

    /// `g^-1 x g`
    #[inline]
    pub fn conjugate(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    pub fn element_order(&self, x: Elem) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Largest element order.
    pub fn exponent(&self) -> usize {
        let orders: Vec<usize> = self.elements().map(|x| self.element_order(x)).collect();
        orders.into_iter().fold(1, crate::numtheory::lcm)
    }

    pub fn table(&self) -> Vec<Vec<Elem>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Dihedral degree `n` if this group was built as `dihedral:n`.
    pub fn dihedral_degree(&self) -> Option<usize> {
        self.label.strip_prefix("dihedral:")?.parse().ok()
    }

    /// Elements reachable from the identity by right multiplication with `gens`.
    pub(crate) fn closure_of(&self, gens: &[Elem]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Whether `gens` generates the whole group.
    pub fn generates(&self, gens: &[Elem]) -> bool {
        self.closure_of(gens).iter().all(|&b| b)
    }
}

/// A direct product with the projections onto both factors.
#[derive(Debug, Clone)]
pub struct DirectProduct {
    pub group: FiniteGroup,
    pub left: CosetMap,
    pub right: CosetMap,
}

/// `G × H` with pair encoding `id = g·|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let m = h.order();
    FiniteGroup::from_fn(
        g.order() * m,
        format!("product({},{})", g.label(), h.label()),
        |x, y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m),
    )
}

/// [`direct_product`] together with its two coordinate projections.
pub fn direct_product_with_projections(g: &FiniteGroup, h: &FiniteGroup) -> DirectProduct {
    let group = direct_product(g, h);
    let m = h.order();
    let left_kernel = Subgroup::from_sorted((0..m).collect());
    let right_kernel = Subgroup::from_sorted((0..g.order()).map(|x| x * m).collect());
    let left = CosetMap::from_parts(
        left_kernel,
        g.clone(),
        group.elements().map(|x| x / m).collect(),
    );
    let right = CosetMap::from_parts(
        right_kernel,
        h.clone(),
        group.elements().map(|x| x % m).collect(),
    );
    DirectProduct { group, left, right }
}
