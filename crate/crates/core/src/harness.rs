//! The casebook of worked examples and the JSON report format.
//!
//! Each case runs a scripted computation and compares it with values written
//! down by hand. A case that hits a computation error still produces a
//! report; the error is recorded and the case fails.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automorphism::{Automorphism, AutGroup};
use crate::cayley::{
    self, cayley_graph, complete_bipartite, complete_graph, cycle_graph, graph_isomorphic, hypercube,
    SimpleGraph, SubdirectFailure, VertexMap,
};
use crate::dihedral::{self, DihedralAut, FourValentClass, FourValentFamily};
use crate::fixtures;
use crate::frattini::{self, make_connection_set, ConnectionSet};
use crate::group::{frattini_subgroup, is_characteristically_simple, maximal_subgroups, Elem, FiniteGroup, Subgroup};
use crate::numtheory::{euler_phi, radical};
use crate::{Error, Limits, Result};

/// One expected-versus-computed comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub description: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
    /// How the expected value was obtained.
    pub basis: String,
}

impl Claim {
    pub fn new(description: impl Into<String>, expected: impl Serialize, computed: impl Serialize, basis: &str) -> Self {
        let expected = serde_json::to_value(expected).expect("serializable");
        let computed = serde_json::to_value(computed).expect("serializable");
        Claim {
            description: description.into(),
            pass: expected == computed,
            expected,
            computed,
            basis: basis.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_id: String,
    pub claims: Vec<Claim>,
    /// Named graphs in graph6 format.
    pub artifacts: BTreeMap<String, String>,
    pub error: Option<String>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.claims.is_empty() && self.claims.iter().all(|c| c.pass)
    }
}

/// The report emitted by every CLI command in JSON mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub claims: Vec<Claim>,
    pub timing_ms: u64,
}

impl Report {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}

pub const CASE_IDS: &[&str] = &[
    "ex2.1", "ex2.2", "ex2.3-s5", "ex2.5", "lem3.1", "thm1.2-z6", "prop4.3", "prop4.7", "ex5.1",
];

const CLOSED_FORM: &str = "closed form";
const HAND: &str = "hand calculation";
const STRUCTURE: &str = "structural statement";

#[derive(Default)]
struct Case {
    claims: Vec<Claim>,
    artifacts: BTreeMap<String, String>,
}

impl Case {
    fn claim(&mut self, description: impl Into<String>, expected: impl Serialize, computed: impl Serialize, basis: &str) {
        self.claims.push(Claim::new(description, expected, computed, basis));
    }

    fn artifact(&mut self, name: &str, g: &SimpleGraph) {
        self.artifacts.insert(name.to_string(), g.to_graph6());
    }
}

/// Runs one registered case.
pub fn run_case(case_id: &str, limits: &Limits) -> Result<CaseReport> {
    let runner: fn(&mut Case, &Limits) -> Result<()> = match case_id {
        "ex2.1" => cyclic_frattini,
        "ex2.2" => dihedral_frattini,
        "ex2.3-s5" => symmetric_s5,
        "ex2.5" => reflection_sets,
        "lem3.1" => product_identity,
        "thm1.2-z6" => six_cycle_decomposition,
        "prop4.3" => dihedral_aut_structures,
        "prop4.7" => mersenne_instances,
        "ex5.1" => non_normal_counterexample,
        other => return Err(Error::UnknownCase(other.to_string())),
    };
    let mut case = Case::default();
    let error = runner(&mut case, limits).err().map(|e| e.to_string());
    Ok(CaseReport {
        case_id: case_id.to_string(),
        claims: case.claims,
        artifacts: case.artifacts,
        error,
    })
}

/// Runs every registered case in parallel; reports come back in case-id order.
pub fn run_all(limits: &Limits) -> Vec<CaseReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = CASE_IDS
            .iter()
            .map(|id| s.spawn(move || run_case(id, limits).expect("registered case")))
            .collect();
        handles.into_iter().map(|h| h.join().expect("case thread")).collect()
    })
}

fn phi_of(c: &ConnectionSet, limits: &Limits) -> Result<Vec<Elem>> {
    Ok(frattini::invariant_normal_lattice(c, limits)?.phi.elements().to_vec())
}

fn isomorphic(a: &SimpleGraph, b: &SimpleGraph, limits: &Limits) -> Result<bool> {
    Ok(graph_isomorphic(a, b, limits)?.is_some())
}

fn dihedral_auts(n: usize, a: &AutGroup) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = a
        .elements()
        .iter()
        .map(|x| {
            let d = DihedralAut::from_automorphism(n, x);
            (d.k, d.j)
        })
        .collect();
    out.sort_unstable();
    out
}

fn cyclic_frattini(case: &mut Case, limits: &Limits) -> Result<()> {
    for n in 2..=30usize {
        let g = Arc::new(FiniteGroup::cyclic(n));
        let set: Vec<Elem> = if n == 2 { vec![1] } else { vec![1, n - 1] };
        let c = make_connection_set(&g, &set, limits)?;
        let m = radical(n as u64) as usize;
        let expected: Vec<Elem> = (0..n).step_by(m).collect();
        case.claim(format!("Φ(Z_{n}; {{a, a^-1}}) = ⟨a^{m}⟩"), &expected, phi_of(&c, limits)?, CLOSED_FORM);
        let plain = frattini_subgroup(&g, limits)?;
        case.claim(format!("Φ(Z_{n}) = ⟨a^{m}⟩"), &expected, plain.elements(), CLOSED_FORM);
    }
    let g = Arc::new(FiniteGroup::cyclic(12));
    let c = make_connection_set(&g, &[1, 11], limits)?;
    case.claim("Φ(Z_12; {a, a^-1}) has order 2", 2, phi_of(&c, limits)?.len(), CLOSED_FORM);
    let c = make_connection_set(&g, &[1, 5, 7, 11], limits)?;
    case.claim("Φ(Z_12; C) is the same for another generating C", vec![0, 6], phi_of(&c, limits)?, CLOSED_FORM);
    Ok(())
}

fn dihedral_frattini(case: &mut Case, limits: &Limits) -> Result<()> {
    for n in 3..=16usize {
        let g = Arc::new(FiniteGroup::dihedral(n));
        let rotations: Vec<Elem> = (0..n).collect();
        let even_rotations: Vec<Elem> = (0..n).step_by(2).collect();
        let c1 = make_connection_set(&g, &[1, n - 1, n], limits)?;
        let c2 = make_connection_set(&g, &[n, n + 1], limits)?;
        let l1 = frattini::invariant_normal_lattice(&c1, limits)?;
        let l2 = frattini::invariant_normal_lattice(&c2, limits)?;
        let expected1 = if n % 2 == 1 { &rotations } else { &even_rotations };
        case.claim(format!("n={n}: Φ(D_{}; {{a, a^-1, b}})", 2 * n), expected1, l1.phi.elements(), CLOSED_FORM);
        case.claim(format!("n={n}: Φ(D_{}; {{b, ba}}) = ⟨a⟩", 2 * n), &rotations, l2.phi.elements(), CLOSED_FORM);

        if n % 2 == 0 {
            let mut expected: Vec<Vec<Elem>> = vec![rotations.clone()];
            for parity in 0..2 {
                let mut m: Vec<Elem> = even_rotations.clone();
                m.extend((0..n).filter(|i| i % 2 == parity).map(|i| n + i));
                expected.push(m);
            }
            expected.sort();
            let mut computed: Vec<Vec<Elem>> = l1.maximal.iter().map(|m| m.elements().to_vec()).collect();
            computed.sort();
            case.claim(format!("n={n}: A_max for {{a, a^-1, b}} is ⟨a⟩, ⟨a², b⟩, ⟨a², ba⟩"), expected, computed, HAND);
        }

        case.claim(
            format!("n={n}: Aut(G; {{a, a^-1, b}}) = ⟨τ_(n-1)⟩"),
            vec![(1, 0), (n - 1, 0)],
            dihedral_auts(n, c1.aut_gc()),
            HAND,
        );
        case.claim(
            format!("n={n}: Aut(G; {{b, ba}}) = ⟨τ_(n-1) φ⟩"),
            vec![(1, 0), (n - 1, 1)],
            dihedral_auts(n, c2.aut_gc()),
            HAND,
        );

        let plain = frattini_subgroup(&g, limits)?;
        let contained = plain.is_subgroup_of(&l1.phi) && plain.is_subgroup_of(&l2.phi);
        case.claim(format!("n={n}: Φ(G) ≤ Φ(G;C) for both sets"), true, contained, STRUCTURE);

        let maximal = maximal_subgroups(&g, limits)?;
        let core_ok = [(&c1, &l1), (&c2, &l2)].iter().all(|(c, l)| {
            l.maximal.iter().all(|nn| {
                maximal
                    .iter()
                    .filter(|m| nn.is_subgroup_of(m))
                    .all(|m| &frattini::invariant_core(c, m) == nn)
            })
        });
        case.claim(
            format!("n={n}: each N in A_max is the invariant core of every maximal M ⊇ N"),
            true,
            core_ok,
            STRUCTURE,
        );
    }
    Ok(())
}

/// Lengths of the nontrivial cycles of a permutation, sorted.
fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        let mut x = start;
        let mut len = 0;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 1 {
            out.push(len);
        }
    }
    out.sort_unstable();
    out
}

fn symmetric_s5(case: &mut Case, limits: &Limits) -> Result<()> {
    let g = Arc::new(fixtures::symmetric_group(5));
    let perms: Vec<Vec<usize>> = g.elements().map(|x| fixtures::symmetric_permutation(5, x)).collect();
    let types: Vec<Vec<usize>> = perms.iter().map(|p| cycle_type(p)).collect();
    let a5: Vec<Elem> = g.elements().filter(|&x| types[x].iter().map(|l| l - 1).sum::<usize>() % 2 == 0).collect();
    let transpositions: Vec<Elem> = g.elements().filter(|&x| types[x] == [2]).collect();
    let four_cycles: Vec<Elem> = g.elements().filter(|&x| types[x] == [4]).collect();
    let t = fixtures::symmetric_element(&[1, 0, 2, 3, 4]);
    let five = fixtures::symmetric_element(&[1, 2, 3, 4, 0]);
    let mut mixed = vec![t, five, g.inv(five)];
    mixed.sort_unstable();

    case.claim("S5 has 10 transpositions and 30 four-cycles", (10, 30), (transpositions.len(), four_cycles.len()), HAND);
    let plain = frattini_subgroup(&g, limits)?;
    case.claim("Φ(S5) = 1", vec![0], plain.elements(), STRUCTURE);

    let aut = Arc::new(crate::automorphism::automorphism_group(&g, limits)?);
    case.claim("|Aut(S5)| = 120", 120, aut.order(), STRUCTURE);

    let mut sets = vec![
        ("all transpositions".to_string(), transpositions),
        ("all four-cycles".to_string(), four_cycles),
        ("(12), (12345) and its inverse".to_string(), mixed),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..3 {
        if let Some(s) = frattini::sample_generating_set(&g, &mut rng) {
            sets.push((format!("sampled set {i}"), s));
        }
    }
    for (name, set) in sets {
        let c = ConnectionSet::with_aut(g.clone(), aut.clone(), &set)?;
        let phi = phi_of(&c, limits)?;
        let contains = a5.iter().all(|x| phi.binary_search(x).is_ok());
        case.claim(format!("A5 ≤ Φ(S5; C) for C = {name}"), true, contains, STRUCTURE);
    }
    Ok(())
}

fn reflection_sets(case: &mut Case, limits: &Limits) -> Result<()> {
    for n in 3..=10usize {
        let g = Arc::new(FiniteGroup::dihedral(n));
        let aut = Arc::new(dihedral::dihedral_aut_group(n));
        let mut cycles_ok = true;
        for i in 0..n {
            let c = ConnectionSet::with_aut(g.clone(), aut.clone(), &[n + i, n + (i + 1) % n])?;
            let gamma = cayley_graph(&c);
            cycles_ok &= frattini::is_transitive_set(&c)? && isomorphic(gamma.graph(), &cycle_graph(2 * n), limits)?;
        }
        case.claim(format!("n={n}: every D_i is transitive and Cay(G; D_i) ≅ C_{}", 2 * n), true, cycles_ok, HAND);

        let cover = (0..n).all(|r| (0..n).filter(|&i| r == i || r == (i + 1) % n).count() == 2);
        case.claim(format!("n={n}: each reflection lies in exactly two D_i"), true, cover, HAND);

        let all: Vec<Elem> = (n..2 * n).collect();
        let c = ConnectionSet::with_aut(g.clone(), aut.clone(), &all)?;
        let gamma = cayley_graph(&c);
        case.claim(format!("n={n}: all reflections form a transitive set"), true, frattini::is_transitive_set(&c)?, HAND);
        case.claim(
            format!("n={n}: Aut(G; all reflections) = Aut(G)"),
            n * euler_phi(n as u64) as usize,
            c.aut_gc().order(),
            HAND,
        );
        case.claim(
            format!("n={n}: Cay(G; all reflections) ≅ K_{{{n},{n}}}"),
            true,
            isomorphic(gamma.graph(), &complete_bipartite(n, n), limits)?,
            HAND,
        );
        if n == 4 {
            case.artifact("k44", gamma.graph());
        }
    }
    Ok(())
}

fn product_identity(case: &mut Case, limits: &Limits) -> Result<()> {
    let z2 = FiniteGroup::cyclic(2);
    let z3 = FiniteGroup::cyclic(3);
    let z4 = FiniteGroup::cyclic(4);
    let d6 = FiniteGroup::dihedral(3);
    let d8 = FiniteGroup::dihedral(4);
    let z2sq = FiniteGroup::elementary_abelian(2, 2)?;
    let pairs: Vec<(&str, Vec<(&FiniteGroup, Vec<Elem>)>)> = vec![
        ("Z2{1} × Z2{1}", vec![(&z2, vec![1]), (&z2, vec![1])]),
        ("Z2{1} × Z3{1,2}", vec![(&z2, vec![1]), (&z3, vec![1, 2])]),
        ("Z4{1,3} × Z3{1,2}", vec![(&z4, vec![1, 3]), (&z3, vec![1, 2])]),
        ("D6{b,ba} × Z2{1}", vec![(&d6, vec![3, 4]), (&z2, vec![1])]),
        ("D8{all reflections} × Z4{1,2,3}", vec![(&d8, vec![4, 5, 6, 7]), (&z4, vec![1, 2, 3])]),
        ("Z2²{1,2,3} × D6{a,a^-1,b}", vec![(&z2sq, vec![1, 2, 3]), (&d6, vec![1, 2, 3])]),
        ("Z2{1} × Z3{1,2} × Z2{1}", vec![(&z2, vec![1]), (&z3, vec![1, 2]), (&z2, vec![1])]),
    ];
    for (name, factors) in pairs {
        let refs: Vec<(&FiniteGroup, &[Elem])> = factors.iter().map(|(g, s)| (*g, s.as_slice())).collect();
        let equal = cayley::cayley_of_product_equals_product(&refs, limits)?;
        case.claim(format!("Cay(∏G_i; ∏C_i) = ∏Cay(G_i; C_i) for {name}"), true, equal, STRUCTURE);
    }
    Ok(())
}

fn six_cycle_decomposition(case: &mut Case, limits: &Limits) -> Result<()> {
    let g = Arc::new(FiniteGroup::cyclic(6));
    let gamma = cayley::build_cayley_graph(&g, &[1, 5], limits)?;
    case.claim("Cay(Z6; {1, 5}) is normal edge-transitive", true, cayley::is_normal_edge_transitive(&gamma)?, HAND);
    let report = cayley::decompose(&gamma, limits)?;
    case.claim("Φ(Z6; {1, 5}) = 1", vec![0], report.phi.elements(), CLOSED_FORM);
    case.claim("two factors", 2, report.factors.len(), HAND);
    let orders: Vec<usize> = report.factors.iter().map(|f| f.quotient.map.quotient().order()).collect();
    case.claim("factor quotient orders", vec![3, 2], orders, HAND);
    let f0 = report.factors[0].quotient.graph.graph();
    let f1 = report.factors[1].quotient.graph.graph();
    case.claim("first factor ≅ K3", true, isomorphic(f0, &complete_graph(3), limits)?, HAND);
    case.claim("second factor ≅ K2", true, isomorphic(f1, &complete_graph(2), limits)?, HAND);
    case.claim("image is a full subdirect product", true, report.subdirect.full, STRUCTURE);
    case.claim(
        "ζ is a graph isomorphism onto K3 × K2",
        (true, true, 6),
        (
            report.zeta.is_injective(),
            report.zeta.is_homomorphism(report.phi_quotient.graph.graph(), &report.product),
            report.product.edge_count(),
        ),
        HAND,
    );
    case.claim("Cay(Z6; {1, 5}) ≅ C6", true, isomorphic(gamma.graph(), &cycle_graph(6), limits)?, HAND);
    case.artifact("gamma", gamma.graph());
    case.artifact("factor_0", f0);
    case.artifact("factor_1", f1);
    case.artifact("product", &report.product);
    Ok(())
}

fn dihedral_aut_structures(case: &mut Case, _limits: &Limits) -> Result<()> {
    let instances = [
        ("a", 8, 4, "D8", 8),
        ("a", 12, 7, "D8", 8),
        ("a", 10, 5, "Z2xZ2", 4),
        ("a", 21, 7, "Z2xZ2", 4),
        ("b", 5, 2, "Z4", 4),
        ("b", 10, 3, "Z4", 4),
        ("b", 13, 5, "Z4", 4),
        ("b", 8, 3, "D8", 8),
    ];
    for (family, n, param, label, order) in instances {
        let fam = if family == "a" {
            FourValentFamily::FamilyA { i: param }
        } else {
            FourValentFamily::FamilyB { k: param }
        };
        let valid = if family == "a" {
            dihedral::family_a_valid(n, param)
        } else {
            dihedral::family_b_valid(n, param)
        };
        case.claim(format!("family ({family}) parameters n={n}, {param} are valid"), true, valid, HAND);
        let s = dihedral::aut_gc_structure(n, &FourValentClass { family: fam, sigma: None })?;
        case.claim(
            format!("Aut(G;C) for family ({family}), n={n}, parameter {param}"),
            (label, order),
            (s.label.to_string(), s.order),
            STRUCTURE,
        );
    }
    let overlap = dihedral::classify_4valent(8, &[8, 9, 12, 13])?;
    case.claim(
        "n=8: {b, ba, ba^4, ba^5} lies in both families",
        json!({"family": "Overlap", "i_a": 4, "k_b": 3}),
        &overlap.family,
        HAND,
    );
    let same = dihedral::family_a_set(9, 4) == dihedral::family_a_set(9, 6);
    case.claim("family (a) parameters i and n+1-i give the same set", true, same, HAND);
    Ok(())
}

fn mersenne_instances(case: &mut Case, _limits: &Limits) -> Result<()> {
    let instances = [
        ((5, 3), (30, 5, 3, 8, 11, 19)),
        ((11, 3), (66, 11, 3, 14, 23, 43)),
        ((13, 7), (182, 13, 7, 20, 27, 155)),
        ((23, 3), (138, 23, 3, 26, 47, 91)),
    ];
    for ((p, q), expected) in instances {
        let params = dihedral::mersenne_family(p, q)?;
        let got = (params.n, params.i, params.j, params.k, params.ell, params.m);
        case.claim(format!("(p, q) = ({p}, {q}): parameters (n, i, j, k, ℓ, m)"), expected, got, HAND);
        case.claim(format!("(p, q) = ({p}, {q}): all conditions hold"), true, dihedral::new_family_valid(&params).valid, HAND);
        let class = dihedral::classify_4valent(params.n, &params.set())?;
        let kind = matches!(class.family, FourValentFamily::NewFamily(_));
        case.claim(format!("(p, q) = ({p}, {q}): classified in the new family"), true, kind, STRUCTURE);
        case.claim(
            format!("(p, q) = ({p}, {q}): no automorphic image is a family (a) or (b) set"),
            true,
            dihedral::new_family_not_classical(&params)?,
            STRUCTURE,
        );
        let s = dihedral::aut_gc_structure(params.n, &class)?;
        case.claim(format!("(p, q) = ({p}, {q}): Aut(G;C) ≅ Z2×Z2"), "Z2xZ2", s.label.to_string(), STRUCTURE);
    }
    let rejected = dihedral::mersenne_family(7, 3).is_err() && dihedral::mersenne_family(3, 2).is_err();
    case.claim("Mersenne primes and even q are rejected", true, rejected, HAND);
    Ok(())
}

fn coords(x: Elem) -> [usize; 4] {
    [(x >> 3) & 1, (x >> 2) & 1, (x >> 1) & 1, x & 1]
}

fn from_coords(v: [usize; 4]) -> Elem {
    v.iter().fold(0, |acc, &b| acc * 2 + b % 2)
}

fn linear_map(g: &FiniteGroup, f: impl Fn([usize; 4]) -> [usize; 4]) -> Result<Automorphism> {
    Automorphism::new(g, (0..16).map(|x| from_coords(f(coords(x)))).collect())
}

fn order_profile(a: &AutGroup) -> BTreeMap<usize, usize> {
    let mut profile = BTreeMap::new();
    for x in a.elements() {
        *profile.entry(x.order()).or_insert(0) += 1;
    }
    profile
}

fn non_normal_counterexample(case: &mut Case, limits: &Limits) -> Result<()> {
    let g = Arc::new(FiniteGroup::elementary_abelian(2, 4)?);
    let a1 = from_coords([1, 0, 1, 1]);
    let a2 = from_coords([0, 1, 1, 1]);
    let b1 = from_coords([1, 0, 1, 0]);
    let b2 = from_coords([0, 1, 0, 1]);
    let b3 = from_coords([1, 1, 1, 1]);
    let a = g.mul(a1, a2);
    let mut set = vec![a1, a2, b1, b2, b3];
    set.sort_unstable();
    let c = make_connection_set(&g, &set, limits)?;

    case.claim("C generates G", true, frattini::is_generating(&c), HAND);
    case.claim("|Aut(G;C)| = 12", 12, c.aut_gc().order(), HAND);
    let tau1 = linear_map(&g, |[x, y, z, w]| [y + z + w, x + z + w, z, w])?;
    let tau2 = linear_map(&g, |[x, y, z, w]| [x + z + w, x + w, w, x + y])?;
    let tau3 = linear_map(&g, |[x, y, z, w]| [y, x, w, z])?;
    let h = AutGroup::generated(16, &[tau1.clone(), tau2, tau3]);
    case.claim("Aut(G;C) = ⟨τ1, τ2, τ3⟩", true, &h == c.aut_gc(), HAND);
    let s2s3: BTreeMap<usize, usize> = [(1, 1), (2, 7), (3, 2), (6, 2)].into_iter().collect();
    case.claim("Aut(G;C) has the element orders of S2 × S3", s2s3, order_profile(c.aut_gc()), HAND);
    case.claim("Aut(G;C) is not abelian", false, c.aut_gc().is_abelian(), HAND);

    let mut orbit_sets: Vec<Vec<Elem>> = c.orbits().to_vec();
    orbit_sets.sort_by_key(Vec::len);
    let mut aa = vec![a1, a2];
    aa.sort_unstable();
    let mut bb = vec![b1, b2, b3];
    bb.sort_unstable();
    case.claim("the orbits on C are A and B", vec![aa.clone(), bb.clone()], orbit_sets, HAND);
    case.claim("C is not transitive", false, frattini::is_transitive_set(&c)?, HAND);

    let lattice = frattini::invariant_normal_lattice(&c, limits)?;
    let m = crate::group::subgroup_generated(&g, &aa);
    let nn = crate::group::subgroup_generated(&g, &[b1, b2, a]);
    case.claim("M = ⟨A⟩ = {0, a1, a2, a1+a2}", vec![0, a2, a1, a], m.elements(), HAND);
    case.claim("N consists of the vectors (x+z, y+z, x, y)", {
        let mut v: Vec<Elem> = (0..8)
            .map(|t| {
                let [x, y, z] = [(t >> 2) & 1, (t >> 1) & 1, t & 1];
                from_coords([x + z, y + z, x, y])
            })
            .collect();
        v.sort_unstable();
        v
    }, nn.elements(), HAND);
    case.claim("M ∈ A_max(G;C)", true, lattice.maximal.contains(&m), HAND);
    case.claim("N ∈ A_max(G;C)", true, lattice.maximal.contains(&nn), HAND);
    let expected_phi = vec![0, from_coords([1, 1, 0, 0])];
    case.claim("Φ(G;C) = {0, (1,1,0,0)}", &expected_phi, lattice.phi.elements(), HAND);
    case.claim("Φ(G;C) = M ∩ N", expected_phi.as_slice(), m.intersection(&nn).elements(), HAND);
    case.claim("the generation criterion gives the same Φ(G;C)", &expected_phi, frattini::phi_by_oracle(&c)?, HAND);
    case.claim("τ1 fixes N pointwise", true, nn.elements().iter().all(|&x| tau1.apply(x) == x), HAND);

    let gamma = cayley_graph(&c);
    case.claim("Γ is not normal edge-transitive", false, cayley::is_normal_edge_transitive(&gamma)?, HAND);
    let strict_refused = matches!(cayley::quotient_cayley(&gamma, &m, limits), Err(Error::ConnectionMeetsKernel));
    case.claim("C meets M, so Γ_M drops the loops from A", true, strict_refused, HAND);

    let gm = cayley::quotient_cayley_dropping_loops(&gamma, &m, limits)?;
    let gn = cayley::quotient_cayley_dropping_loops(&gamma, &nn, limits)?;
    let phi = Subgroup::new(&g, expected_phi.clone())?;
    let gphi = cayley::quotient_cayley(&gamma, &phi, limits)?;
    case.claim("loops dropped from Γ_M come from A", &aa, &gm.dropped, HAND);
    case.claim("loops dropped from Γ_N come from B", &bb, &gn.dropped, HAND);
    case.claim("Γ_M ≅ K4", true, isomorphic(gm.graph.graph(), &complete_graph(4), limits)?, HAND);
    case.claim("Γ_N ≅ K2", true, isomorphic(gn.graph.graph(), &complete_graph(2), limits)?, HAND);
    for (name, q) in [("Γ_M", &gm), ("Γ_N", &gn)] {
        let in_class = cayley::is_normal_edge_transitive(&q.graph)?
            && is_characteristically_simple(q.map.quotient(), limits)?;
        case.claim(format!("{name} is a normal edge-transitive Cayley graph of a characteristically simple group"), true, in_class, HAND);
    }
    let phi_graph = gphi.graph.graph();
    case.claim(
        "Γ_Φ is 4-regular on 8 vertices",
        (8, Some(4)),
        (phi_graph.vertex_count(), phi_graph.regular_degree()),
        HAND,
    );
    case.claim(
        "Γ_Φ ≅ complement of Q3",
        true,
        isomorphic(phi_graph, &hypercube(3).complement(), limits)?,
        HAND,
    );

    let qm = gm.map.quotient().order();
    let qn = gn.map.quotient().order();
    let mut zeta: Vec<Option<usize>> = vec![None; gphi.map.quotient().order()];
    let mut well_defined = true;
    for x in g.elements() {
        let image = gm.map.project(x) * qn + gn.map.project(x);
        let slot = &mut zeta[gphi.map.project(x)];
        well_defined &= slot.map_or(true, |y| y == image);
        *slot = Some(image);
    }
    let zeta: Vec<usize> = zeta.into_iter().map(|z| z.expect("every coset is hit")).collect();
    let zmap = VertexMap { map: zeta.clone() };
    let homomorphism = g.elements().all(|x| {
        g.elements().all(|y| {
            let xy = g.mul(x, y);
            let (px, py) = (gphi.map.project(x), gphi.map.project(y));
            let (zx, zy) = (zeta[px], zeta[py]);
            let product = gm.map.quotient().mul(zx / qn, zy / qn) * qn + gn.map.quotient().mul(zx % qn, zy % qn);
            zeta[gphi.map.project(xy)] == product
        })
    });
    case.claim(
        "g ↦ (gM, gN) induces a group isomorphism G/Φ → G/M × G/N",
        (true, true, true, qm * qn),
        (well_defined, zmap.is_injective(), homomorphism, zeta.len()),
        HAND,
    );

    let product = cayley::direct_product_graph(&[gm.graph.graph(), gn.graph.graph()], limits)?;
    let (u, v) = (gphi.map.project(0), gphi.map.project(b3));
    case.claim("{0+Φ, b3+Φ} is an edge of Γ_Φ", true, phi_graph.has_edge(u, v), HAND);
    case.claim("its image is not an edge of Γ_M × Γ_N", false, product.has_edge(zeta[u], zeta[v]), HAND);
    case.claim("b3-edge projects to a loop of Γ_N", true, gn.map.project(0) == gn.map.project(b3), HAND);
    case.claim("ζ is not a graph homomorphism Γ_Φ → Γ_M × Γ_N", false, zmap.is_homomorphism(phi_graph, &product), HAND);
    let edges: Vec<(usize, usize)> = phi_graph.edges().iter().map(|&(x, y)| (zeta[x], zeta[y])).collect();
    let report = cayley::is_full_subdirect(&zeta, &edges, &[gm.graph.graph(), gn.graph.graph()]);
    let failure = match report.failure {
        Some(SubdirectFailure::NotAProductEdge { .. }) => "NotAProductEdge",
        Some(_) => "other failure",
        None => "none",
    };
    case.claim("the image is rejected as a subgraph of Γ_M × Γ_N", "NotAProductEdge", failure, HAND);

    case.artifact("gamma", gamma.graph());
    case.artifact("gamma_phi", phi_graph);
    case.artifact("gamma_m", gm.graph.graph());
    case.artifact("gamma_n", gn.graph.graph());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_case_is_an_error() {
        assert!(matches!(run_case("ex9.9", &Limits::default()), Err(Error::UnknownCase(_))));
    }

    #[test]
    fn claim_pass_flag_tracks_equality() {
        assert!(Claim::new("x", vec![1, 2], vec![1, 2], HAND).pass);
        assert!(!Claim::new("x", 3, 4, HAND).pass);
    }

    #[test]
    fn counterexample_case_passes() {
        let r = run_case("ex5.1", &Limits::default()).unwrap();
        for c in &r.claims {
            assert!(c.pass, "{c:?}");
        }
        assert!(r.passed(), "{:?}", r.error);
        assert!(r.claims.iter().any(|c| c.description == "b3-edge projects to a loop of Γ_N"));
    }

    #[test]
    fn report_round_trips() {
        let r = Report {
            command: "casebook run".into(),
            inputs: json!({"case": "lem3.1"}),
            results: serde_json::to_value(run_case("lem3.1", &Limits::default()).unwrap()).unwrap(),
            claims: vec![Claim::new("x", 1, 1, HAND)],
            timing_ms: 3,
        };
        let text = r.to_json_string();
        let back = Report::from_json_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json_string(), text);
    }
}
