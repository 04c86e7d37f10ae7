//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes plain strings and returns a JSON string with either
//! `"ok": true` and the results, or `"ok": false` and an error message.

use std::sync::Arc;

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use netcay::cayley::{self, build_cayley_graph, SimpleGraph};
use netcay::dihedral::{self, FourValentFamily};
use netcay::frattini::{self, format_element, parse_connection_set};
use netcay::group::{parse_group_spec, Elem, FiniteGroup};
use netcay::{Error, Limits};

/// Groups above this order are refused to keep the page responsive.
const WEB_ORDER_CAP: usize = 64;

fn limits() -> Limits {
    Limits::default().with_order_cap(WEB_ORDER_CAP)
}

fn respond(result: Result<Value, Error>) -> String {
    match result {
        Ok(mut v) => {
            v["ok"] = json!(true);
            v.to_string()
        }
        Err(e) => json!({"ok": false, "error": e.to_string()}).to_string(),
    }
}

fn load(spec: &str, set: &str) -> Result<(Arc<FiniteGroup>, Vec<Elem>), Error> {
    if spec.trim_start().starts_with("table:") {
        return Err(Error::Parse("table files are not available in the browser".into()));
    }
    let g = parse_group_spec(spec)?;
    limits().check_order(g.order())?;
    let set = parse_connection_set(&g, set)?;
    Ok((Arc::new(g), set))
}

fn labels(g: &FiniteGroup, xs: &[Elem]) -> Vec<String> {
    xs.iter().map(|&x| format_element(g, x)).collect()
}

fn graph_json(g: &SimpleGraph) -> Value {
    json!({
        "vertices": g.vertex_count(),
        "edges": g.edges(),
        "graph6": g.to_graph6(),
    })
}

/// `Φ(G;C)`, the maximal invariant normal subgroups and the orbits of `Aut(G;C)` on `C`.
#[wasm_bindgen]
pub fn relative_frattini(spec: &str, set: &str) -> String {
    respond((|| {
        let limits = limits();
        let (g, set) = load(spec, set)?;
        let c = frattini::make_connection_set(&g, &set, &limits)?;
        let lattice = frattini::invariant_normal_lattice(&c, &limits)?;
        Ok(json!({
            "order": g.order(),
            "set": labels(&g, &set),
            "aut_gc_order": c.aut_gc().order(),
            "orbits": c.orbits().iter().map(|o| labels(&g, o)).collect::<Vec<_>>(),
            "transitive": frattini::is_transitive_set(&c)?,
            "maximal": lattice.maximal.iter().map(|m| labels(&g, m.elements())).collect::<Vec<_>>(),
            "phi": labels(&g, lattice.phi.elements()),
        }))
    })())
}

/// The Cayley graph and its quotient by `Φ(G;C)`, with vertex labels for drawing.
#[wasm_bindgen]
pub fn cayley_graphs(spec: &str, set: &str) -> String {
    respond((|| {
        let limits = limits();
        let (g, set) = load(spec, set)?;
        let gamma = build_cayley_graph(&g, &set, &limits)?;
        let lattice = frattini::invariant_normal_lattice(gamma.connection(), &limits)?;
        let quotient = cayley::quotient_cayley_dropping_loops(&gamma, &lattice.phi, &limits)?;
        let coset_labels: Vec<String> = quotient
            .map
            .cosets()
            .iter()
            .map(|coset| format_element(&g, coset[0]))
            .collect();
        let mut graph = graph_json(gamma.graph());
        graph["labels"] = json!(labels(&g, &g.elements().collect::<Vec<_>>()));
        let mut phi_graph = graph_json(quotient.graph.graph());
        phi_graph["labels"] = json!(coset_labels);
        Ok(json!({
            "normal_edge_transitive": cayley::is_normal_edge_transitive(&gamma)?,
            "graph": graph,
            "phi_quotient": phi_graph,
            "phi_order": lattice.phi.order(),
        }))
    })())
}

/// Classifies a 4-element connection set of `D_2n`.
#[wasm_bindgen]
pub fn classify_dihedral(n: u32, set: &str) -> String {
    respond((|| {
        let n = n as usize;
        if n < 3 {
            return Err(Error::BadParameters("n must be at least 3".into()));
        }
        limits().check_order(2 * n)?;
        let g = FiniteGroup::dihedral(n);
        let set = parse_connection_set(&g, set)?;
        let class = dihedral::classify_4valent(n, &set)?;
        let structure = match class.family {
            FourValentFamily::NotNet => None,
            _ => Some(dihedral::aut_gc_structure(n, &class)?),
        };
        Ok(json!({
            "set": labels(&g, &set),
            "class": class,
            "sigma": class.sigma.map(|s| s.to_string()),
            "representative": class.representative(n).map(|r| labels(&g, &r)),
            "aut_gc": structure.map(|s| json!({"label": s.label.to_string(), "order": s.order})),
        }))
    })())
}
