//! qmat: command-line front-end for exact q-matroid computation.
//!
//! Exit codes: 0 success, 1 domain failure (axiom violations, counterexample
//! findings), 2 usage or parse errors.

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use qmatroid::analysis::{
    circuit_relation, conjecture_harness, generate_catalogue, hyperplane_relation,
    nonuniqueness_demo, random_matroids, RelationClasses, DIM3_NAMES,
};
use qmatroid::construct::{add_loop, direct_sum, intersection, union};
use qmatroid::gf::factor_prime_power;
use qmatroid::io::{read_qmatroid, read_repmatrix, write_qmatroid};
use qmatroid::lattice::{enumerate_lattice, set_default_lattice_cap, Subspace};
use qmatroid::matroid::{check_rank_axioms, Colour, QMatroid};
use qmatroid::repr::{from_matrix, nonrep_search};
use qmatroid::FieldSpec;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qmat",
    about = "Exact computation with q-matroids over small finite fields",
    version
)]
struct Cli {
    /// Seed for randomized checks (connect --random).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the rank axioms of a q-matroid file.
    Check { input: PathBuf },
    /// Print the derived families (independents, bases, circuits, ...).
    Families { input: PathBuf },
    /// Write the dual q-matroid.
    Dual {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Restrict to a subspace (rows as base-q digits, e.g. 100,010).
    Restrict {
        input: PathBuf,
        #[arg(long)]
        space: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Contract by a subspace.
    Contract {
        input: PathBuf,
        #[arg(long)]
        space: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Matroid union of two q-matroids on the same ground space.
    Union {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Matroid intersection (dual of the union of the duals).
    Intersect {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Direct sum: loop extensions followed by matroid union.
    Sum {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Extend by one loop on a new trailing coordinate.
    AddLoop {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the q-matroid represented by a generator matrix file.
    FromMatrix {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate all q-matroids of dimension up to n over GF(q), up to
    /// isomorphism, and write one file per class.
    Catalogue {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "catalogue")]
        out_dir: PathBuf,
    },
    /// Exhaustive non-representability search over GF(2^m), m <= m-max.
    Nonrep {
        #[arg(long = "m-max", default_value_t = 6)]
        m_max: u32,
    },
    /// Connectedness relations and conjecture evaluation.
    Connect {
        /// q-matroid file; omit when using --random.
        input: Option<PathBuf>,
        /// Evaluate the conjectures on N random valid q-matroids instead.
        #[arg(long)]
        random: Option<usize>,
        /// Ambient dimension for --random.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Field size for --random.
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// The four inequivalent completions of the naive direct sum on F_2^4.
    DemoNonunique {
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Emit the bicoloured Hasse diagram as a DOT graph file.
    Dot {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Allow diagrams beyond the legibility cap of 1000 subspaces.
        #[arg(long)]
        force: bool,
    },
}

fn main() -> ExitCode {
    if let Some(cap) = std::env::var("QMAT_LATTICE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        set_default_lattice_cap(cap);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> anyhow::Result<QMatroid> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    read_qmatroid(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(m: &QMatroid, output: Option<&Path>) -> anyhow::Result<()> {
    let text = write_qmatroid(m);
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_space(m: &QMatroid, s: &str) -> anyhow::Result<Subspace> {
    let l = m.lattice();
    Subspace::parse(l.field(), l.ambient_dim(), s).map_err(|e| anyhow!("--space: {e}"))
}

fn render_relation(rel: &RelationClasses, label: &str) -> String {
    let mut out = format!(
        "{label}: {} related pairs, transitive: {}",
        rel.pairs.len(),
        rel.is_equivalence
    );
    if rel.is_equivalence {
        out.push_str(&format!(", classes: {}", rel.classes.len()));
    }
    out.push('\n');
    for note in &rel.notes {
        out.push_str(&format!("  note: {note}\n"));
    }
    out
}

/// Ok(true) on success, Ok(false) for domain-level failures.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Check { input } => {
            // run the axiom scan directly so violations are reported, not
            // swallowed by the loader
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            match read_qmatroid(&text) {
                Ok(m) => {
                    let report = check_rank_axioms(m.lattice(), m.rank_table())?;
                    println!(
                        "ok: q={} n={} rank={} ({} subspaces)",
                        m.lattice().field().order(),
                        m.lattice().ambient_dim(),
                        m.rank(),
                        m.lattice().len()
                    );
                    println!("axioms: {}", report.summary());
                    Ok(true)
                }
                Err(qmatroid::Error::AxiomsFailed(summary)) => {
                    println!("axiom violations: {summary}");
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Families { input } => {
            let m = load(&input)?;
            let l = m.lattice();
            let f = l.field();
            let fam = m.derive_families();
            let names = |v: &[u32]| -> String {
                v.iter()
                    .map(|&i| l.space(i).text(f))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            println!("rank: {}", m.rank());
            println!("independent: {}", names(&fam.independent));
            println!("bases: {}", names(&fam.bases));
            println!("circuits: {}", names(&fam.circuits));
            println!("spanning: {}", names(&fam.spanning));
            println!("flats: {}", names(&fam.flats));
            println!("hyperplanes: {}", names(&fam.hyperplanes));
            println!(
                "cocircuits: {}",
                names(&m.dual().derive_families().circuits)
            );
            println!("loopspace: {}", fam.loopspace.text(f));
            Ok(true)
        }
        Command::Dual { input, output } => {
            let m = load(&input)?;
            emit(&m.dual(), output.as_deref())?;
            Ok(true)
        }
        Command::Restrict {
            input,
            space,
            output,
        } => {
            let m = load(&input)?;
            let x = parse_space(&m, &space)?;
            emit(&m.restrict(&x)?, output.as_deref())?;
            Ok(true)
        }
        Command::Contract {
            input,
            space,
            output,
        } => {
            let m = load(&input)?;
            let x = parse_space(&m, &space)?;
            emit(&m.contract(&x)?, output.as_deref())?;
            Ok(true)
        }
        Command::Union {
            first,
            second,
            output,
        } => {
            let a = load(&first)?;
            let b = load(&second)?;
            emit(&union(&a, &b)?, output.as_deref())?;
            Ok(true)
        }
        Command::Intersect {
            first,
            second,
            output,
        } => {
            let a = load(&first)?;
            let b = load(&second)?;
            emit(&intersection(&a, &b)?, output.as_deref())?;
            Ok(true)
        }
        Command::Sum {
            first,
            second,
            output,
        } => {
            let a = load(&first)?;
            let b = load(&second)?;
            emit(&direct_sum(&a, &b)?, output.as_deref())?;
            Ok(true)
        }
        Command::AddLoop { input, output } => {
            let m = load(&input)?;
            emit(&add_loop(&m)?, output.as_deref())?;
            Ok(true)
        }
        Command::FromMatrix { input, output } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let rep = read_repmatrix(&text)?;
            emit(&from_matrix(&rep)?, output.as_deref())?;
            Ok(true)
        }
        Command::Catalogue { q, n, out_dir } => {
            let (p, m) = factor_prime_power(q)?;
            let field = FieldSpec::new(p, m, None)?;
            std::fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            let mut total = 0usize;
            for dim in 0..=n {
                let entries = generate_catalogue(field.clone(), dim, 10_000_000)?;
                println!("n={dim}: {} isomorphism classes", entries.len());
                for e in &entries {
                    let fname = format!("{}.qm", file_stem(&e.name));
                    let path = out_dir.join(&fname);
                    std::fs::write(&path, write_qmatroid(&e.matroid))
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!(
                        "  {} (class of {} rank tables) -> {}",
                        e.name,
                        e.class_size,
                        path.display()
                    );
                    total += 1;
                }
            }
            println!("wrote {total} files to {}", out_dir.display());
            if q == 2 && n >= 3 {
                println!(
                    "dimension-3 classes in catalogue order: {}",
                    DIM3_NAMES.join(", ")
                );
            }
            Ok(true)
        }
        Command::Nonrep { m_max } => {
            let report = nonrep_search(m_max)?;
            print!("{}", report.render());
            let ok = report.disagreements.is_empty() && report.four_circuit_pairs.is_empty();
            Ok(ok)
        }
        Command::Connect {
            input,
            random,
            n,
            q,
        } => {
            let ms: Vec<(String, QMatroid)> = match (input, random) {
                (Some(path), None) => vec![(path.display().to_string(), load(&path)?)],
                (None, Some(count)) => {
                    let (p, m) = factor_prime_power(q)?;
                    let field = FieldSpec::new(p, m, None)?;
                    let lattice = enumerate_lattice(field, n)?;
                    random_matroids(&lattice, count, cli.seed)
                        .into_iter()
                        .enumerate()
                        .map(|(i, m)| (format!("random#{i}"), m))
                        .collect()
                }
                _ => {
                    return Err(anyhow!(
                        "connect needs exactly one of an input file or --random N"
                    ))
                }
            };
            for (name, m) in &ms {
                println!("{name}:");
                print!("{}", render_relation(&circuit_relation(m), "  circuit relation"));
                print!(
                    "{}",
                    render_relation(&hyperplane_relation(m), "  hyperplane relation")
                );
            }
            let report = conjecture_harness(&ms);
            print!("{}", report.render());
            let ok = report.counterexamples_either_side.is_empty()
                && report.counterexamples_precondition.is_empty();
            Ok(ok)
        }
        Command::DemoNonunique { out_dir } => {
            let report = nonuniqueness_demo()?;
            print!("{}", report.render());
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                for v in &report.variants {
                    let path = dir.join(format!("u12_sum_u12_{}circuits.qm", v.two_dim_circuits));
                    std::fs::write(&path, write_qmatroid(&v.matroid))
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("wrote {}", path.display());
                }
            }
            let ok = report.pairwise_non_isomorphic
                && report.two_circuit_matches_direct_sum
                && report
                    .variants
                    .iter()
                    .all(|v| v.circuit_axioms_ok && v.four_minor_ok);
            Ok(ok)
        }
        Command::Dot {
            input,
            output,
            force,
        } => {
            let m = load(&input)?;
            const DIAGRAM_CAP: usize = 1000;
            if m.lattice().len() > DIAGRAM_CAP && !force {
                return Err(qmatroid::Error::TooLargeForDiagram {
                    size: m.lattice().len(),
                    cap: DIAGRAM_CAP,
                }
                .into());
            }
            let text = render_dot(&m);
            match output {
                Some(p) => std::fs::write(&p, text)
                    .with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
    }
}

fn file_stem(name: &str) -> String {
    match name {
        "mixed" => "mixed".into(),
        "P1" => "p1".into(),
        "P2" => "p2".into(),
        "P1*" => "p1_star".into(),
        "P2*" => "p2_star".into(),
        _ => {
            // U_{k,n} -> uk_n
            if let Some(body) = name
                .strip_prefix("U_{")
                .and_then(|s| s.strip_suffix('}'))
            {
                format!("u{}", body.replace(',', "_"))
            } else {
                name.to_lowercase()
            }
        }
    }
}

/// Bicoloured Hasse diagram in DOT: one node per subspace labelled by its
/// basis rows and rank, one edge per cover with a red/green colour.
fn render_dot(m: &QMatroid) -> String {
    let l = m.lattice();
    let f = l.field();
    let mut out = String::from("graph qmatroid {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, s) in l.spaces().iter().enumerate() {
        let label = if s.is_zero() {
            "0".to_string()
        } else {
            s.text(f)
        };
        out.push_str(&format!(
            "  n{i} [label=\"{label} (r={})\"];\n",
            m.rank_table()[i]
        ));
    }
    for (lo, hi, colour) in m.bicolour().edges {
        let c = match colour {
            Colour::Red => "red",
            Colour::Green => "green",
        };
        out.push_str(&format!("  n{lo} -- n{hi} [color={c}];\n"));
    }
    out.push_str("}\n");
    out
}
