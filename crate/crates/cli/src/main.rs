use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use netcay::automorphism::automorphism_group;
use netcay::cayley::{self, build_cayley_graph};
use netcay::dihedral::{self, FourValentFamily};
use netcay::frattini::{self, format_element, parse_connection_set};
use netcay::group::{all_normal_subgroups, frattini_subgroup, parse_group_spec, Elem, FiniteGroup, Subgroup};
use netcay::harness::{self, Claim, Report};
use netcay::{Error, Limits};

#[derive(Parser)]
#[command(name = "netcay", version, about = "Relative Frattini subgroups and normal edge-transitive Cayley graphs")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest group order accepted.
    #[arg(long, global = true, value_name = "N")]
    order_cap: Option<usize>,
    /// Reserved; every algorithm is deterministic.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Compute Φ(G;C) and the invariant normal lattice.
    Frattini {
        #[command(flatten)]
        target: Target,
        /// Also run the subset-criterion oracle (|G| ≤ 16).
        #[arg(long)]
        oracle: bool,
    },
    /// Build Cayley graphs.
    #[command(subcommand)]
    Cayley(CayleyCmd),
    /// Test normal edge-transitivity.
    #[command(subcommand)]
    Net(NetCmd),
    /// Decompose a normal edge-transitive Cayley graph.
    Decompose {
        #[command(flatten)]
        target: Target,
        /// List every valid choice of kernels.
        #[arg(long)]
        all_factorizations: bool,
    },
    /// 4-valent Cayley graphs of dihedral groups.
    #[command(subcommand)]
    Dihedral(DihedralCmd),
    /// Worked examples.
    #[command(subcommand)]
    Casebook(CasebookCmd),
}

#[derive(Args)]
struct Target {
    /// Group spec, e.g. `dihedral:10` or `product(cyclic:2,cyclic:3)`.
    spec: String,
    /// Connection set, e.g. `b,b.a` or `1,5`.
    #[arg(long)]
    set: String,
}

#[derive(Subcommand)]
enum GroupCmd {
    Show { spec: String },
}

#[derive(Subcommand)]
enum CayleyCmd {
    Build {
        #[command(flatten)]
        target: Target,
        /// Write the graph in graph6 format to this file.
        #[arg(long, value_name = "PATH")]
        g6: Option<std::path::PathBuf>,
    },
}

#[derive(Subcommand)]
enum NetCmd {
    Test {
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Subcommand)]
enum DihedralCmd {
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        set: String,
    },
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    Mersenne {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
}

#[derive(Subcommand)]
enum CasebookCmd {
    Run {
        #[arg(long = "case", value_name = "ID")]
        case_id: Option<String>,
    },
}

/// A finished command: the report plus text lines for human output.
struct Outcome {
    command: String,
    inputs: Value,
    results: Value,
    claims: Vec<Claim>,
    text: Vec<String>,
}

impl Outcome {
    fn new(command: &str, inputs: Value) -> Self {
        Outcome {
            command: command.to_string(),
            inputs,
            results: Value::Null,
            claims: Vec::new(),
            text: Vec::new(),
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }
}

fn fmt_set(g: &FiniteGroup, set: &[Elem]) -> String {
    let parts: Vec<String> = set.iter().map(|&x| format_element(g, x)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn fmt_subgroup(g: &FiniteGroup, h: &Subgroup) -> String {
    fmt_set(g, h.elements())
}

fn load(target: &Target, limits: &Limits) -> Result<(Arc<FiniteGroup>, Vec<Elem>), Error> {
    let g = parse_group_spec(&target.spec)?;
    limits.check_order(g.order())?;
    let set = parse_connection_set(&g, &target.set)?;
    Ok((Arc::new(g), set))
}

fn target_inputs(target: &Target) -> Value {
    json!({"spec": target.spec, "set": target.set})
}

fn group_show(spec: &str, limits: &Limits) -> Result<Outcome, Error> {
    let g = parse_group_spec(spec)?;
    limits.check_order(g.order())?;
    let mut out = Outcome::new("group show", json!({"spec": spec}));
    let normal = all_normal_subgroups(&g, limits)?;
    let phi = frattini_subgroup(&g, limits)?;
    let aut = automorphism_group(&g, limits)?;
    let orders: Vec<usize> = g.elements().map(|x| g.element_order(x)).collect();
    out.results = json!({
        "label": g.label(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "exponent": g.exponent(),
        "element_orders": orders,
        "normal_subgroups": normal.iter().map(|n| n.elements().to_vec()).collect::<Vec<_>>(),
        "frattini": phi.elements(),
        "aut_order": aut.order(),
        "table": g.table(),
    });
    out.line(format!("group      {}", g.label()));
    out.line(format!("order      {}", g.order()));
    out.line(format!("abelian    {}", g.is_abelian()));
    out.line(format!("exponent   {}", g.exponent()));
    out.line(format!("normal     {} subgroups", normal.len()));
    out.line(format!("Φ(G)       {}", fmt_subgroup(&g, &phi)));
    out.line(format!("|Aut(G)|   {}", aut.order()));
    Ok(out)
}

fn frattini_cmd(target: &Target, oracle: bool, limits: &Limits) -> Result<Outcome, Error> {
    let (g, set) = load(target, limits)?;
    let mut out = Outcome::new("frattini", json!({"spec": target.spec, "set": target.set, "oracle": oracle}));
    let c = frattini::make_connection_set(&g, &set, limits)?;
    let lattice = frattini::invariant_normal_lattice(&c, limits)?;
    let transitive = frattini::is_transitive_set(&c)?;
    let mut results = json!({
        "set": set,
        "set_display": fmt_set(&g, &set),
        "aut_gc_order": c.aut_gc().order(),
        "orbits": c.orbits(),
        "transitive": transitive,
        "lattice": lattice.all.iter().map(|n| n.elements().to_vec()).collect::<Vec<_>>(),
        "maximal": lattice.maximal.iter().map(|n| n.elements().to_vec()).collect::<Vec<_>>(),
        "phi": lattice.phi.elements(),
        "phi_display": fmt_subgroup(&g, &lattice.phi),
    });
    out.line(format!("C            {}", fmt_set(&g, &set)));
    out.line(format!("|Aut(G;C)|   {}", c.aut_gc().order()));
    out.line(format!("transitive   {transitive}"));
    for m in &lattice.maximal {
        out.line(format!("A_max        {}", fmt_subgroup(&g, m)));
    }
    out.line(format!("Φ(G;C)       {}", fmt_subgroup(&g, &lattice.phi)));
    if oracle {
        let by_oracle = frattini::phi_by_oracle(&c)?;
        results["oracle_phi"] = json!(by_oracle);
        let claim = Claim::new("subset criterion agrees with the lattice", lattice.phi.elements(), &by_oracle, "lattice computation");
        out.line(format!("oracle       {} ({})", fmt_set(&g, &by_oracle), if claim.pass { "agrees" } else { "DISAGREES" }));
        out.claims.push(claim);
    }
    out.results = results;
    Ok(out)
}

fn cayley_build(target: &Target, g6: Option<&std::path::Path>, limits: &Limits) -> Result<Outcome, Error> {
    let (g, set) = load(target, limits)?;
    let mut out = Outcome::new(
        "cayley build",
        json!({"spec": target.spec, "set": target.set, "g6": g6.map(|p| p.display().to_string())}),
    );
    let gamma = build_cayley_graph(&g, &set, limits)?;
    let graph = gamma.graph();
    let text = graph.to_graph6();
    if let Some(path) = g6 {
        std::fs::write(path, format!("{text}\n"))?;
    }
    out.results = json!({
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "degree": graph.regular_degree(),
        "connected": graph.is_connected(),
        "graph6": text,
        "edge_list": graph.edges(),
    });
    out.line(format!("vertices   {}", graph.vertex_count()));
    out.line(format!("edges      {}", graph.edge_count()));
    out.line(format!("degree     {}", graph.regular_degree().map_or("irregular".into(), |d| d.to_string())));
    out.line(format!("connected  {}", graph.is_connected()));
    out.line(format!("graph6     {text}"));
    Ok(out)
}

fn net_test(target: &Target, limits: &Limits) -> Result<Outcome, Error> {
    let (g, set) = load(target, limits)?;
    let mut out = Outcome::new("net test", target_inputs(target));
    let gamma = build_cayley_graph(&g, &set, limits)?;
    let net = cayley::is_normal_edge_transitive(&gamma)?;
    let c = gamma.connection();
    out.results = json!({
        "normal_edge_transitive": net,
        "aut_gc_order": c.aut_gc().order(),
        "orbits": c.orbits(),
    });
    out.line(format!("normal edge-transitive  {net}"));
    for orbit in c.orbits() {
        out.line(format!("orbit                   {}", fmt_set(&g, orbit)));
    }
    Ok(out)
}

fn decompose_cmd(target: &Target, all: bool, limits: &Limits) -> Result<Outcome, Error> {
    let (g, set) = load(target, limits)?;
    let mut out = Outcome::new(
        "decompose",
        json!({"spec": target.spec, "set": target.set, "all_factorizations": all}),
    );
    let gamma = build_cayley_graph(&g, &set, limits)?;
    let report = cayley::decompose_with(&gamma, limits, all)?;
    out.results = report.to_json();
    out.claims.push(Claim::new(
        "image of Γ_Φ is a full subdirect product of the factors",
        true,
        report.subdirect.full,
        "decomposition invariant",
    ));
    out.line(format!("Φ(G;C)     {}", fmt_subgroup(&g, &report.phi)));
    out.line(format!("Γ_Φ        {}", report.phi_quotient.graph.graph().to_graph6()));
    for f in &report.factors {
        out.line(format!(
            "factor     N = {}  |G/N| = {}  graph6 {}",
            fmt_subgroup(&g, &f.kernel),
            f.quotient.map.quotient().order(),
            f.quotient.graph.graph().to_graph6()
        ));
    }
    out.line(format!("subdirect  {}", report.subdirect.full));
    if let Some(all) = &report.all_factorizations {
        out.line(format!("choices    {}", all.len()));
    }
    Ok(out)
}

fn family_text(f: &FourValentFamily) -> String {
    match f {
        FourValentFamily::FamilyA { i } => format!("family (a), i = {i}"),
        FourValentFamily::FamilyB { k } => format!("family (b), k = {k}"),
        FourValentFamily::NewFamily(p) => format!(
            "new family, (i, j, k, ℓ, m) = ({}, {}, {}, {}, {})",
            p.i, p.j, p.k, p.ell, p.m
        ),
        FourValentFamily::Overlap { i_a, k_b } => format!("both families, i = {i_a}, k = {k_b}"),
        FourValentFamily::NotNet => "not normal edge-transitive".into(),
    }
}

fn dihedral_classify(n: usize, text: &str, limits: &Limits) -> Result<Outcome, Error> {
    let g = FiniteGroup::dihedral(n.max(2));
    limits.check_order(2 * n)?;
    let set = parse_connection_set(&g, text)?;
    let mut out = Outcome::new("dihedral classify", json!({"n": n, "set": text}));
    let class = dihedral::classify_4valent(n, &set)?;
    let structure = match class.family {
        FourValentFamily::NotNet => None,
        _ => Some(dihedral::aut_gc_structure(n, &class)?),
    };
    out.results = json!({
        "class": class,
        "sigma": class.sigma.map(|s| s.to_string()),
        "representative": class.representative(n),
        "aut_gc": structure,
    });
    out.line(format!("C          {}", fmt_set(&g, &set)));
    out.line(format!("class      {}", family_text(&class.family)));
    if let (Some(s), Some(rep)) = (class.sigma, class.representative(n)) {
        out.line(format!("σ          {s}  maps C to {}", fmt_set(&g, &rep)));
    }
    if let Some(s) = structure {
        out.line(format!("Aut(G;C)   {} of order {}", s.label, s.order));
    }
    Ok(out)
}

fn dihedral_enumerate(n: usize, limits: &Limits) -> Result<Outcome, Error> {
    let mut out = Outcome::new("dihedral enumerate", json!({"n": n}));
    let classes = dihedral::enumerate_4valent(n, limits)?;
    let g = FiniteGroup::dihedral(n.max(2));
    out.results = json!({ "classes": classes });
    out.line(format!("{} classes of 4-valent normal edge-transitive Cayley graphs of D_{}", classes.len(), 2 * n));
    for c in &classes {
        out.line(format!(
            "{}  orbit {}  {}",
            fmt_set(&g, &c.canonical),
            c.orbit_size,
            family_text(&c.class.family)
        ));
    }
    Ok(out)
}

fn dihedral_mersenne(p: usize, q: usize) -> Result<Outcome, Error> {
    let mut out = Outcome::new("dihedral mersenne", json!({"p": p, "q": q}));
    let params = dihedral::mersenne_family(p, q)?;
    let check = dihedral::new_family_valid(&params);
    let class = dihedral::classify_4valent(params.n, &params.set())?;
    let new_family = matches!(class.family, FourValentFamily::NewFamily(_));
    let not_classical = dihedral::new_family_not_classical(&params)?;
    out.claims.push(Claim::new("parameters satisfy every condition", true, check.valid, "construction"));
    out.claims.push(Claim::new("classified in the new family", true, new_family, "construction"));
    out.claims.push(Claim::new("no automorphic image is a family (a) or (b) set", true, not_classical, "construction"));
    out.results = json!({"params": params, "clauses": check.clauses, "class": class});
    out.line(format!(
        "(n, i, j, k, ℓ, m) = ({}, {}, {}, {}, {}, {})",
        params.n, params.i, params.j, params.k, params.ell, params.m
    ));
    for clause in &check.clauses {
        out.line(format!("  {} {}", if clause.holds { "ok  " } else { "FAIL" }, clause.clause));
    }
    out.line(format!("class      {}", family_text(&class.family)));
    out.line(format!("not (a)/(b) {not_classical}"));
    Ok(out)
}

fn casebook_run(case_id: Option<&str>, limits: &Limits) -> Result<Outcome, Error> {
    let mut out = Outcome::new("casebook run", json!({"case": case_id}));
    let reports = match case_id {
        Some(id) => vec![harness::run_case(id, limits)?],
        None => harness::run_all(limits),
    };
    for r in &reports {
        let failed = r.claims.iter().filter(|c| !c.pass).count();
        out.line(format!(
            "{:<10} {}  {} claims, {} failed{}",
            r.case_id,
            if r.passed() { "PASS" } else { "FAIL" },
            r.claims.len(),
            failed,
            r.error.as_ref().map(|e| format!(", error: {e}")).unwrap_or_default()
        ));
        for c in r.claims.iter().filter(|c| !c.pass) {
            out.line(format!("    {}: expected {}, computed {}", c.description, c.expected, c.computed));
        }
        out.claims.extend(r.claims.iter().cloned());
        if let Some(e) = &r.error {
            out.claims.push(Claim::new(format!("{} completes", r.case_id), "ok", e, "casebook"));
        }
    }
    out.results = json!({ "cases": reports });
    Ok(out)
}

fn run(cli: &Cli, limits: &Limits) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Group(GroupCmd::Show { spec }) => group_show(spec, limits),
        Command::Frattini { target, oracle } => frattini_cmd(target, *oracle, limits),
        Command::Cayley(CayleyCmd::Build { target, g6 }) => cayley_build(target, g6.as_deref(), limits),
        Command::Net(NetCmd::Test { target }) => net_test(target, limits),
        Command::Decompose { target, all_factorizations } => decompose_cmd(target, *all_factorizations, limits),
        Command::Dihedral(DihedralCmd::Classify { n, set }) => dihedral_classify(*n, set, limits),
        Command::Dihedral(DihedralCmd::Enumerate { n }) => dihedral_enumerate(*n, limits),
        Command::Dihedral(DihedralCmd::Mersenne { p, q }) => dihedral_mersenne(*p, *q),
        Command::Casebook(CasebookCmd::Run { case_id }) => casebook_run(case_id.as_deref(), limits),
    }
}

fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::BadParameters(_)
            | Error::UnknownCase(_)
            | Error::ElementOutOfRange(_)
            | Error::NotInverseClosed(_)
            | Error::ContainsIdentity
            | Error::Empty
            | Error::Io(_)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut limits = Limits::default();
    if let Some(cap) = cli.order_cap {
        limits = limits.with_order_cap(cap);
    }
    let start = Instant::now();
    match run(&cli, &limits) {
        Ok(mut out) => {
            let mut inputs = std::mem::take(&mut out.inputs);
            inputs["order_cap"] = json!(limits.order_cap);
            inputs["seed"] = json!(cli.seed);
            let report = Report {
                command: out.command,
                inputs,
                results: out.results,
                claims: out.claims,
                timing_ms: start.elapsed().as_millis() as u64,
            };
            if cli.json {
                println!("{}", report.to_json_string());
            } else {
                for line in &out.text {
                    println!("{line}");
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                eprintln!("{}", json!({"error": error_kind(&e), "message": e.to_string()}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
