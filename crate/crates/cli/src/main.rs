//! `vcolor`: command-line front end over vcolor-core. Every verb parses its
//! inputs, calls one library operation and prints a JSON (or DOT) report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use vcolor_core::catalog::Catalog;
use vcolor_core::coloring::VectorColoring;
use vcolor_core::complex::boundary_complex;
use vcolor_core::gf2::BitVector;
use vcolor_core::hamiltonian::{
    branch_set, cycles_from_coloring, enumerate_hamiltonian_cnk, four_color_cycles_check, four_coloring_from_cycles,
    fvector_identity_check, geometry_report, hyperelliptic_involutions, involutions_from_subcomplexes,
    quotient_is_closed, subcomplex_from_defining_set, HamiltonianSubcomplex,
};
use vcolor_core::homology::{is_rational_homology_sphere, is_sphere, quotient_betti, quotient_betti_table};
use vcolor_core::polytope::{cube, cut_face, polygon, product, simplex, FacetSet, SimplePolytope};
use vcolor_core::Error;

#[derive(Parser)]
#[command(name = "vcolor", version, about = "Vector-colorings of simple polytopes and hyperelliptic involutions")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Worker threads for enumeration; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args, Clone)]
struct Input {
    #[arg(long)]
    polytope: PathBuf,
    /// A coloring file, `identity` or `opposite-pairs`.
    #[arg(long, default_value = "identity")]
    coloring: String,
}

#[derive(Args, Clone)]
struct SubInput {
    #[arg(long)]
    polytope: PathBuf,
    /// Defining faces as facet-index pairs, e.g. `0,4 1,5`.
    #[arg(long, num_args = 1.., required = true)]
    faces: Vec<String>,
}

#[derive(Subcommand)]
enum Verb {
    /// Build a polytope from `simplex:N`, `cube:N`, `polygon:K`; several are multiplied.
    Construct {
        #[arg(long, num_args = 1.., required = true)]
        product: Vec<String>,
        /// Facet indices of a face to cut off afterwards, e.g. `0,1`.
        #[arg(long)]
        cut: Option<String>,
    },
    /// Check a polytope file, and a coloring if given.
    Validate {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long)]
        coloring: Option<String>,
    },
    Betti(Input),
    CheckManifold(Input),
    CheckSphere(Input),
    Hyperelliptic {
        #[command(flatten)]
        input: Input,
        /// Only examine this τ, written as a bit string.
        #[arg(long)]
        tau: Option<String>,
    },
    Enumerate {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        kind: Vec<usize>,
    },
    BranchSet(SubInput),
    FvectorCheck(SubInput),
    GeometryReport,
    /// Check and 4-color from vertex cycles, or extract cycles from a rank-3 coloring and τ.
    FourColor {
        #[arg(long)]
        polytope: PathBuf,
        /// Cycles as `a,b,c,d;e,f,g,h`.
        #[arg(long)]
        cycles: Option<String>,
        #[arg(long)]
        coloring: Option<String>,
        #[arg(long)]
        tau: Option<String>,
    },
    /// Build and verify the full catalog.
    Catalog {
        /// Write the catalog bundle to this path.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Check a previously exported bundle against a fresh build.
        #[arg(long)]
        verify_bundle: Option<PathBuf>,
    },
}

/// A report and whether its check passed.
struct Report {
    body: Value,
    pass: bool,
    dot: Option<String>,
}

impl Report {
    fn ok(body: Value) -> Self {
        Report { body, pass: true, dot: None }
    }

    fn check(body: Value, pass: bool) -> Self {
        Report { body, pass, dot: None }
    }
}

#[derive(Debug)]
enum Fail {
    Input(String),
    Check(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Hypothesis(_) | Error::Invariant(_) | Error::CutMismatch(_) => Fail::Check(e.to_string()),
            _ => Fail::Input(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Fail>;

#[derive(Default)]
struct Digests(BTreeMap<String, String>);

impl Digests {
    fn read(&mut self, path: &Path) -> Res<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
        self.0.insert(path.display().to_string(), format!("{:x}", Sha256::digest(text.as_bytes())));
        Ok(text)
    }

    fn polytope(&mut self, path: &Path) -> Res<Arc<SimplePolytope>> {
        let text = self.read(path)?;
        SimplePolytope::from_json_str(&text)
            .map(Arc::new)
            .map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
    }

    fn coloring(&mut self, p: &Arc<SimplePolytope>, spec: &str) -> Res<VectorColoring> {
        match spec {
            "identity" => Ok(VectorColoring::identity(p.clone())),
            "opposite-pairs" => Ok(VectorColoring::opposite_pairs(p.clone())?),
            path => {
                let text = self.read(Path::new(path))?;
                VectorColoring::from_json_str(p.clone(), &text).map_err(|e| Fail::Input(format!("{path}: {e}")))
            }
        }
    }
}

fn topological(p: &SimplePolytope) -> Res<()> {
    if p.dim() > 4 {
        return Err(Error::UnsupportedDimension(p.dim()).into());
    }
    Ok(())
}

fn parse_spec(s: &str) -> Res<SimplePolytope> {
    let (kind, n) = s.split_once(':').ok_or_else(|| Fail::Input(format!("bad polytope spec {s:?}")))?;
    let n: usize = n.parse().map_err(|_| Fail::Input(format!("bad size in {s:?}")))?;
    Ok(match kind {
        "simplex" => simplex(n)?,
        "cube" => cube(n)?,
        "polygon" => polygon(n)?,
        _ => return Err(Fail::Input(format!("unknown polytope family {kind:?}"))),
    })
}

fn parse_indices(s: &str) -> Res<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Fail::Input(format!("bad index {x:?} in {s:?}"))))
        .collect()
}

fn parse_tau(s: &str, rank: usize) -> Res<BitVector> {
    let bits: Vec<bool> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Fail::Input(format!("τ must be a bit string, got {s:?}"))),
        })
        .collect::<Res<_>>()?;
    if bits.len() != rank {
        return Err(Fail::Input(format!("τ has {} bits, the coloring has rank {rank}", bits.len())));
    }
    Ok(BitVector::from_bits(&bits))
}

fn subcomplex(d: &mut Digests, input: &SubInput) -> Res<HamiltonianSubcomplex> {
    let p = d.polytope(&input.polytope)?;
    topological(&p)?;
    let n = p.dim();
    if n < 3 {
        return Err(Fail::Input(format!("defining-face reports need n ≥ 3, got {n}")));
    }
    let c1 = Arc::new(boundary_complex(p.clone()));
    let mut ids = Vec::new();
    for f in input.faces.iter().flat_map(|s| s.split_whitespace()) {
        let s = FacetSet::from_indices(parse_indices(f)?);
        let i = c1
            .faces(n - 2)
            .iter()
            .position(|g| g.p_faces.contains(&s))
            .ok_or_else(|| Fail::Input(format!("{f} is not an (n-2)-face")))?;
        ids.push(i);
    }
    let mut h = subcomplex_from_defining_set(c1, &ids)?;
    if h.classify()?.is_none() {
        return Err(Fail::Check("the coarse complex is not C(n, k) for any k".into()));
    }
    Ok(h)
}

fn run(cli: &Cli, d: &mut Digests) -> Res<Report> {
    Ok(match &cli.verb {
        Verb::Construct { product: specs, cut } => {
            let mut p = parse_spec(&specs[0])?;
            for s in &specs[1..] {
                p = product(&p, &parse_spec(s)?)?;
            }
            if let Some(c) = cut {
                p = cut_face(&p, FacetSet::from_indices(parse_indices(c)?))?;
            }
            let mut body = p.to_json_value();
            body["f_vector"] = json!(p.f_vector());
            Report::ok(body)
        }
        Verb::Validate { polytope, coloring } => {
            let text = d.read(polytope)?;
            let p = match SimplePolytope::from_json_str(&text) {
                Ok(p) => Arc::new(p),
                Err(Error::InvalidPolytope(why)) => return Ok(Report::check(json!({ "valid": false, "violation": why }), false)),
                Err(e) => return Err(e.into()),
            };
            let mut body = json!({ "valid": true, "dim": p.dim(), "f_vector": p.f_vector() });
            if let Some(c) = coloring {
                let l = d.coloring(&p, c)?;
                body["coloring"] = json!({ "rank": l.rank(), "free": l.is_free(), "closed_manifold": l.is_closed_manifold() });
            }
            Report::ok(body)
        }
        Verb::Betti(i) => {
            let p = d.polytope(&i.polytope)?;
            let l = d.coloring(&p, &i.coloring)?;
            let table: Vec<Value> =
                quotient_betti_table(&l).into_iter().map(|s| json!({ "omega": s.omega, "reduced": s.reduced })).collect();
            Report::ok(json!({ "betti": quotient_betti(&l), "summands": table }))
        }
        Verb::CheckManifold(i) => {
            let p = d.polytope(&i.polytope)?;
            let l = d.coloring(&p, &i.coloring)?;
            let closed = l.is_closed_manifold();
            Report::check(json!({ "closed_manifold": closed, "orientable": l.is_orientable(), "free": l.is_free() }), closed)
        }
        Verb::CheckSphere(i) => {
            let p = d.polytope(&i.polytope)?;
            topological(&p)?;
            let l = d.coloring(&p, &i.coloring)?;
            let sphere = is_sphere(&l)?;
            Report::check(json!({ "sphere": sphere, "rational_homology_sphere": is_rational_homology_sphere(&l) }), sphere)
        }
        Verb::Hyperelliptic { input, tau } => {
            let p = d.polytope(&input.polytope)?;
            topological(&p)?;
            let l = d.coloring(&p, &input.coloring)?;
            let scan = hyperelliptic_involutions(&l)?;
            let oracle = involutions_from_subcomplexes(&l)?;
            let agree = scan.iter().map(|i| &i.tau).eq(oracle.iter().map(|i| &i.tau));
            match tau {
                Some(t) => {
                    let t = parse_tau(t, l.rank())?;
                    let found = scan.iter().find(|i| i.tau == t);
                    Report::check(
                        json!({
                            "tau": t,
                            "hyperelliptic": found.is_some(),
                            "quotient_closed": quotient_is_closed(&l, &t),
                            "involution": found.map(|i| i.to_json_value()),
                        }),
                        found.is_some(),
                    )
                }
                None => Report::check(
                    json!({
                        "count": scan.len(),
                        "oracle_agrees": agree,
                        "involutions": scan.iter().map(|i| i.to_json_value()).collect::<Vec<_>>(),
                    }),
                    agree,
                ),
            }
        }
        Verb::Enumerate { polytope, kind } => {
            let p = d.polytope(polytope)?;
            topological(&p)?;
            let parallel = cli.jobs.map_or(true, |j| j > 1);
            let mut kinds = Vec::new();
            let mut dots = String::new();
            let mut total = 0;
            for &k in kind {
                let e = enumerate_hamiltonian_cnk(p.clone(), k, parallel)?;
                total += e.subcomplexes.len();
                for h in &e.subcomplexes {
                    dots.push_str(&h.adjacency().to_dot(h.ambient()));
                }
                kinds.push(e.to_json_value());
            }
            Report { body: json!({ "count": total, "kinds": kinds }), pass: true, dot: Some(dots) }
        }
        Verb::BranchSet(s) => {
            let h = subcomplex(d, s)?;
            let comps = branch_set(&h)?;
            let consistent = comps.iter().all(|c| c.consistent());
            Report {
                body: json!({
                    "kind": h.kind(),
                    "consistent": consistent,
                    "components": comps.iter().map(|c| c.to_json_value()).collect::<Vec<_>>(),
                }),
                pass: consistent,
                dot: Some(h.adjacency().to_dot(h.ambient())),
            }
        }
        Verb::FvectorCheck(s) => {
            let h = subcomplex(d, s)?;
            let r = fvector_identity_check(&h)?;
            Report::check(serde_json::to_value(&r).unwrap(), r.holds)
        }
        Verb::GeometryReport => {
            let c = Catalog::build()?;
            let r = geometry_report(&c)?;
            Report::ok(serde_json::to_value(&r).unwrap())
        }
        Verb::FourColor { polytope, cycles, coloring, tau } => {
            let p = d.polytope(polytope)?;
            let cycles = match (cycles, coloring, tau) {
                (Some(c), _, _) => c.split(';').map(parse_indices).collect::<Res<Vec<_>>>()?,
                (None, Some(c), Some(t)) => {
                    let l = d.coloring(&p, c)?;
                    let t = parse_tau(t, l.rank())?;
                    cycles_from_coloring(&l, &t)?
                }
                _ => return Err(Fail::Input("give --cycles, or --coloring with --tau".into())),
            };
            let check = four_color_cycles_check(&p, &cycles)?;
            let colors = if check { Some(four_coloring_from_cycles(&p, &cycles)?) } else { None };
            Report::check(json!({ "cycles": cycles, "check": check, "coloring": colors }), check)
        }
        Verb::Catalog { export, verify_bundle } => {
            if let Some(path) = verify_bundle {
                let text = d.read(path)?;
                let bundle: Value =
                    serde_json::from_str(&text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
                return match Catalog::verify_bundle(&bundle) {
                    Ok(names) => Ok(Report::ok(json!({ "bundle": "ok", "entries": names }))),
                    Err(Error::Invariant(why)) => Ok(Report::check(json!({ "bundle": "mismatch", "failure": why }), false)),
                    Err(e) => Err(e.into()),
                };
            }
            let c = Catalog::build()?;
            if let Some(path) = export {
                let text = serde_json::to_string_pretty(&c.to_json_value()).unwrap();
                std::fs::write(path, text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
            }
            let reports = c.reports()?;
            let geometry = geometry_report(&c)?;
            let first_failure =
                reports.iter().find(|r| !r.pass()).map(|r| format!("{}: {}", r.name, r.failures.join(", ")));
            let pass = first_failure.is_none();
            Report::check(
                json!({
                    "entries": reports,
                    "geometry": geometry,
                    "first_failure": first_failure,
                }),
                pass,
            )
        }
    })
}

fn emit(cli: &Cli, text: &str) -> std::result::Result<(), String> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("vcolor: could not set up {j} workers: {e}");
        }
    }
    let mut digests = Digests::default();
    let outcome = run(&cli, &mut digests);
    let meta = json!({ "tool": "vcolor", "version": env!("CARGO_PKG_VERSION"), "inputs": digests.0 });
    match outcome {
        Ok(r) => {
            let text = match (cli.format, &r.dot) {
                (Format::Dot, Some(dot)) => dot.clone(),
                (Format::Dot, None) => {
                    eprintln!("vcolor: this verb has no DOT output");
                    return ExitCode::from(2);
                }
                (Format::Json, _) => {
                    let mut body = r.body;
                    if let Value::Object(m) = &mut body {
                        m.insert("meta".into(), meta);
                    }
                    serde_json::to_string_pretty(&body).unwrap()
                }
            };
            if let Err(e) = emit(&cli, &text) {
                eprintln!("vcolor: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if r.pass { 0 } else { 1 })
        }
        Err(Fail::Check(why)) => {
            eprintln!("vcolor: check failed: {why}");
            let _ = emit(&cli, &serde_json::to_string_pretty(&json!({ "error": why, "meta": meta })).unwrap());
            ExitCode::from(1)
        }
        Err(Fail::Input(why)) => {
            eprintln!("vcolor: {why}");
            ExitCode::from(2)
        }
    }
}
