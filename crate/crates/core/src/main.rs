use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use agplat::agp::verify_all;
use agplat::doc::{read_doc, write_doc, LatticeDoc};
use agplat::dot::{export_dot, DotOptions};
use agplat::enumerate::{enumerate, verify_census, EnumSpec};
use agplat::kfamily::{
    certify_theorem_size, construct_family, member_meta, pad_atoms, reconstruct_k1, KFixture, KLattice,
};
use agplat::planar::find_realizer;

#[derive(Parser)]
#[command(name = "agplat", version, about = "Toolkit and verifier for atom-generated planar lattices")]
struct Cli {
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full AGP check suite on a lattice document.
    Verify {
        file: PathBuf,
        /// Skip the checks under the mirrored realizer.
        #[arg(long)]
        no_mirror: bool,
    },
    /// List AGP lattices with a given atom count up to isomorphism.
    Enumerate(EnumerateArgs),
    /// Build a member of the four-atom family.
    ConstructK(ConstructArgs),
    /// Convert a lattice document to another format.
    Export {
        file: PathBuf,
        /// Graphviz output.
        #[arg(long, required = true)]
        dot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun the search that recovers K_1 and print the fixture.
    ReconstructK1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    atoms: usize,
    #[arg(long)]
    max_size: usize,
    /// Raise the default ceiling on --max-size.
    #[arg(long)]
    size_guard: Option<usize>,
    /// Write one DOT file per lattice into this directory.
    #[arg(long)]
    dot_dir: Option<PathBuf>,
    /// Also run the check suite on every lattice.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
#[group(id = "target", multiple = false)]
struct Target {
    /// Family index n.
    #[arg(long)]
    n: Option<usize>,
    /// Smallest member with at least this many elements.
    #[arg(long)]
    min_size: Option<usize>,
    /// Certify the size theorem: a member with more than K elements.
    #[arg(long)]
    certify: Option<usize>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    target: Target,
    /// Atom count; values above 4 pad the lattice with extra atoms.
    #[arg(long, default_value_t = 4)]
    atoms: usize,
    /// K_1 fixture to start from instead of the built-in one.
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Also write a DOT drawing with the last step's elements filled.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Input(String),
    Verification,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Verify { file, no_mirror } => {
            let (lattice, doc) = read_doc(&read_file(file)?).map_err(input)?;
            let realizer = match doc.realizer() {
                Some(r) => r,
                None => find_realizer(&lattice).map_err(input)?,
            };
            let report = verify_all(&lattice, &realizer, !no_mirror);
            if cli.json {
                println!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            if report.all_pass() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Enumerate(args) => run_enumerate(cli, args),
        Command::ConstructK(args) => run_construct(cli, args),
        Command::Export { file, out, .. } => {
            let (lattice, doc) = read_doc(&read_file(file)?).map_err(input)?;
            let realizer = match doc.realizer() {
                Some(r) => Some(r),
                None => find_realizer(&lattice).ok(),
            };
            let opts = DotOptions {
                realizer: realizer.as_ref(),
                labels: (!doc.labels.is_empty()).then_some(&doc.labels),
                ..DotOptions::default()
            };
            emit(out.as_deref(), &export_dot(&lattice, &opts))
        }
        Command::ReconstructK1 { out } => {
            let (fixture, search) = reconstruct_k1().map_err(input)?;
            if out.is_some() || cli.json {
                emit(out.as_deref(), &fixture.doc.to_json())?;
            }
            if !cli.json {
                for (size, (census, stages)) in &search.stages {
                    eprintln!("size {size}: {census} lattices in the four-atom census");
                    for s in stages {
                        eprintln!("  {:>3} survive: {}", s.survivors, s.constraint);
                    }
                }
            }
            Ok(())
        }
    }
}

fn run_enumerate(cli: &Cli, args: &EnumerateArgs) -> Result<(), Failure> {
    let mut spec = EnumSpec::new(args.atoms, args.max_size);
    if let Some(g) = args.size_guard {
        spec.size_guard = g;
    }
    let census = enumerate(&spec).map_err(input)?;
    if let Some(dir) = &args.dot_dir {
        std::fs::create_dir_all(dir).map_err(input)?;
        for (i, l) in census.lattices.iter().enumerate() {
            let r = find_realizer(l).ok();
            let opts = DotOptions {
                realizer: r.as_ref(),
                ..DotOptions::default()
            };
            let path = dir.join(format!("atoms{}_{:02}_n{}.dot", args.atoms, i + 1, l.len()));
            std::fs::write(&path, export_dot(l, &opts)).map_err(input)?;
        }
    }
    let report = args.verify.then(|| verify_census(&census));
    if cli.json {
        let docs: Vec<LatticeDoc> = census
            .lattices
            .iter()
            .map(|l| match find_realizer(l) {
                Ok(r) => LatticeDoc::from_lattice(l).with_realizer(l, &r),
                Err(_) => LatticeDoc::from_lattice(l),
            })
            .collect();
        let mut value = json!({
            "atoms": args.atoms,
            "max_size": args.max_size,
            "count": census.len(),
            "counts_by_size": census.counts_by_size,
            "lattices": docs,
        });
        if let Some(r) = &report {
            value["report"] = serde_json::to_value(r).expect("report serializes");
        }
        println!("{}", serde_json::to_string_pretty(&value).expect("json serializes"));
    } else {
        println!(
            "{} lattices with {} atoms and at most {} elements",
            census.len(),
            args.atoms,
            args.max_size
        );
        for (size, count) in &census.counts_by_size {
            println!("  size {size}: {count}");
        }
        for (i, l) in census.lattices.iter().enumerate() {
            println!("#{} n={} covers={:?}", i + 1, l.len(), l.covers());
        }
        if let Some(r) = &report {
            println!(
                "verification: {} checks, {} passed, {} failed",
                r.summary.total, r.summary.passed, r.summary.failed
            );
            for f in r.failures() {
                println!("FAIL {} [{}] {:?}", f.check, f.params, f.witness);
            }
        }
    }
    match report {
        Some(r) if !r.all_pass() => Err(Failure::Verification),
        _ => Ok(()),
    }
}

fn load_fixture(path: Option<&Path>) -> Result<KFixture, Failure> {
    match path {
        Some(p) => KFixture::read(&read_file(p)?).map_err(input),
        None => Ok(KFixture::builtin()),
    }
}

fn run_construct(cli: &Cli, args: &ConstructArgs) -> Result<(), Failure> {
    let fixture = load_fixture(args.fixture.as_deref())?;
    if args.atoms < 4 {
        return Err(Failure::Input(format!("--atoms must be at least 4, got {}", args.atoms)));
    }
    if let Some(k) = args.target.certify {
        let cert = certify_theorem_size(&fixture, k, args.atoms).map_err(input)?;
        if cli.json {
            println!("{}", cert.report.render_json());
        } else {
            println!(
                "K_{} padded to {} atoms: {} elements > {}",
                cert.member,
                cert.n_atoms,
                cert.lattice.len(),
                k
            );
            print!("{}", cert.report.render_text());
        }
        if let Some(out) = &args.out {
            let mut doc = LatticeDoc::from_lattice(&cert.lattice);
            if let Some(r) = &cert.realizer {
                doc = doc.with_realizer(&cert.lattice, r);
            }
            emit(Some(out), &String::from_utf8(write_doc(&cert.lattice, &doc)).expect("utf8"))?;
        }
        return if cert.holds() { Ok(()) } else { Err(Failure::Verification) };
    }

    let family = match (args.target.n, args.target.min_size) {
        (Some(0), _) => return Err(Failure::Input("--n must be at least 1".into())),
        (Some(n), _) => construct_family(&fixture, n).map_err(input)?,
        (None, Some(size)) => {
            let mut fam = construct_family(&fixture, 1).map_err(input)?;
            while fam.last().expect("nonempty").lattice.len() < size {
                let next = agplat::kfamily::extend_step(fam.last().expect("nonempty")).map_err(input)?;
                fam.push(next);
            }
            fam
        }
        (None, None) => construct_family(&fixture, 1).map_err(input)?,
    };
    let k: &KLattice = family.last().expect("nonempty");
    let (lattice, labels) = if args.atoms > 4 {
        let padded = pad_atoms(k, args.atoms - 4).map_err(input)?;
        let mut labels = k.label_map();
        for (j, x) in (k.lattice.len()..padded.len()).enumerate() {
            labels.insert(x, format!("p{}", j + 1));
        }
        (padded, labels)
    } else {
        (k.lattice.clone(), k.label_map())
    };
    let realizer = find_realizer(&lattice).map_err(input)?;
    let doc = LatticeDoc::from_lattice(&lattice)
        .with_realizer(&lattice, &realizer)
        .with_labels(labels.clone())
        .with_meta(member_meta(k));
    if let Some(path) = &args.dot {
        let highlight: Vec<usize> = k
            .steps
            .last()
            .map(|s| s.new_elements.as_array().to_vec())
            .unwrap_or_default();
        let opts = DotOptions {
            realizer: Some(&realizer),
            labels: Some(&labels),
            highlight: &highlight,
            name: Some("K"),
        };
        std::fs::write(path, export_dot(&lattice, &opts)).map_err(input)?;
    }
    emit(args.out.as_deref(), &doc.to_json())
}
