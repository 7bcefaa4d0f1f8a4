//! Single-binary interface to the polygon moduli space computations.
//!
//! Exit codes: 0 success; 2 invalid input; 3 the length vector lies on a
//! wall where smoothness is required; 4 empty moduli space or polytope;
//! 5 equilateral input where a bending pair is required (pass --epsilon).

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use polyspace::polygon::DEFAULT_CLOSURE_TOL;
use polyspace::polytope;
use polyspace::{
    cobordism, enumerate_admissible_threaded, CobordismClass, Error, IndexSet, LengthVector,
    Pivot, Polygon, Rational,
};

#[derive(Parser)]
#[command(
    name = "polyspace",
    version,
    about = "Polygon moduli spaces: cobordism classes, bending flows, moment polytopes",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Signed count of projective-space summands for the bending action
    Class(ClassArgs),
    /// Enumerate the admissible index sets (closing pair = last two sides)
    Admissible(AdmissibleArgs),
    /// Wall test: is the moduli space a smooth manifold?
    Smooth(VectorArgs),
    /// Signs of all inner-wall expressions (the chamber signature)
    Chamber(VectorArgs),
    /// Exact moment polytope of a pentagon space (n = 5)
    Polytope(PolytopeArgs),
    /// Bend a planar polygon around a diagonal; `bend orbit` samples a period
    Bend(BendArgs),
    /// Isolated bending fixed points and the reduced fixed submanifolds
    FixedPoints(FixedPointsArgs),
    /// Closed-form equilateral class for odd n, optionally cross-checked
    Equilateral(EquilateralArgs),
}

#[derive(Args)]
struct ClassArgs {
    /// Side lengths: integers, fractions p/q, or exact decimals
    #[arg(required = true)]
    lengths: Vec<String>,
    /// Bend around sides I and J instead of the default pair
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pivot: Option<Vec<usize>>,
    /// Perturb the last side by (1 + EPS) when the input is equilateral
    #[arg(long, value_name = "EPS")]
    epsilon: Option<String>,
    /// Worker threads for the subset sweep
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AdmissibleArgs {
    #[arg(required = true)]
    lengths: Vec<String>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VectorArgs {
    #[arg(required = true)]
    lengths: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PolytopeArgs {
    /// Exactly five side lengths
    #[arg(required = true)]
    lengths: Vec<String>,
    /// Write an SVG rendering to this path
    #[arg(long, value_name = "PATH")]
    svg: Option<std::path::PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BendArgs {
    #[command(subcommand)]
    mode: Option<BendMode>,
    /// Diagonal index, 1-based
    #[arg(long)]
    k: Option<usize>,
    /// Bend angle in radians
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Closure tolerance for the simulated polygon
    #[arg(long, default_value_t = DEFAULT_CLOSURE_TOL)]
    tol: f64,
    #[arg(long)]
    json: bool,
    lengths: Vec<String>,
}

#[derive(Subcommand)]
enum BendMode {
    /// Export one full flow period as JSON lines, one polygon per sample
    Orbit(OrbitArgs),
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(required = true)]
    lengths: Vec<String>,
    /// Diagonal index, 1-based
    #[arg(long)]
    k: usize,
    /// Samples per period
    #[arg(long, default_value_t = 64)]
    steps: usize,
    #[arg(long, default_value_t = DEFAULT_CLOSURE_TOL)]
    tol: f64,
}

#[derive(Args)]
struct FixedPointsArgs {
    #[arg(required = true)]
    lengths: Vec<String>,
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pivot: Option<Vec<usize>>,
    /// Collinearity tolerance for classification
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EquilateralArgs {
    /// Number of sides (odd)
    n: usize,
    /// Also compute the class of (1, ..., 1, 1+EPS) and compare
    #[arg(long, value_name = "EPS")]
    epsilon: Option<String>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NotSmooth(_) => 3,
        Error::EmptyModuliSpace(_) | Error::EmptyPolytope => 4,
        Error::Equilateral => 5,
        _ => 2,
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Class(args) => run_class(args),
        Command::Admissible(args) => run_admissible(args),
        Command::Smooth(args) => run_smooth(args),
        Command::Chamber(args) => run_chamber(args),
        Command::Polytope(args) => run_polytope(args),
        Command::Bend(args) => run_bend(args),
        Command::FixedPoints(args) => run_fixed_points(args),
        Command::Equilateral(args) => run_equilateral(args),
    }
}

fn parse_lengths(strs: &[String]) -> Result<LengthVector, Error> {
    let entries = strs
        .iter()
        .map(|s| Rational::from_str(s))
        .collect::<Result<Vec<_>, _>>()?;
    LengthVector::new(entries)
}

fn parse_pivot(pivot: &Option<Vec<usize>>) -> Result<Option<Pivot>, Error> {
    match pivot {
        None => Ok(None),
        Some(ij) => {
            let (i, j) = (ij[0], ij[1]);
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            Pivot::new(i, j).map(Some)
        }
    }
}

fn rational_strings(r: &LengthVector) -> Vec<String> {
    r.entries().iter().map(|e| e.to_string()).collect()
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable output"));
}

#[derive(Serialize)]
struct ClassOut {
    n: usize,
    r: Vec<String>,
    pivot: [usize; 2],
    dimension: usize,
    coefficient: i64,
    null: bool,
    histogram: BTreeMap<u32, u64>,
}

fn run_class(args: ClassArgs) -> Result<(), Error> {
    let mut r = parse_lengths(&args.lengths)?;
    if r.is_equilateral() {
        match &args.epsilon {
            Some(eps) => {
                let eps = Rational::from_str(eps)?;
                if !eps.is_positive() {
                    return Err(Error::InvalidInput("--epsilon must be positive".into()));
                }
                let n = r.n();
                let mut entries = r.entries().to_vec();
                let bump = Rational::one() + eps;
                entries[n - 1] = &entries[n - 1] * &bump;
                r = LengthVector::new(entries)?;
            }
            None => {
                // Even equilateral vectors are walls; report that first.
                if let Some(partition) = r.degenerate_partition() {
                    return Err(Error::NotSmooth(partition));
                }
                return Err(Error::Equilateral);
            }
        }
    }
    let pivot = match parse_pivot(&args.pivot)? {
        Some(p) => p,
        None => cobordism::default_pivot(&r)?,
    };
    let class = cobordism::cobordism_class_threaded(&r, Some(pivot), args.threads)?;
    let out = ClassOut {
        n: class.n,
        r: rational_strings(&r),
        pivot: [pivot.i, pivot.j],
        dimension: class.complex_dimension,
        coefficient: class.coefficient,
        null: class.is_null,
        histogram: class.summand_histogram.clone(),
    };
    if args.json {
        print_json(&out);
    } else {
        println!("r = {r}, pivot = ({}, {})", pivot.i, pivot.j);
        println!("{}", describe_class(&class));
        if !class.summand_histogram.is_empty() {
            let hist: Vec<String> = class
                .summand_histogram
                .iter()
                .map(|(card, count)| format!("|I| = {card}: {count}"))
                .collect();
            println!("admissible sets: {}", hist.join(", "));
        }
    }
    Ok(())
}

fn describe_class(class: &CobordismClass) -> String {
    let d = class.complex_dimension;
    let m = class.coefficient;
    if class.is_null {
        if m == 0 {
            format!("M_r ~ 0 (signed count of CP^{d} summands is 0)")
        } else {
            format!("M_r ~ 0 (n even; raw signed count {m} of CP^{d} summands)")
        }
    } else {
        format!("M_r ~ {m} CP^{d}")
    }
}

#[derive(Serialize)]
struct AdmissibleOut {
    n: usize,
    r: Vec<String>,
    sets: Vec<IndexSet>,
    count: usize,
    histogram: BTreeMap<u32, u64>,
}

fn run_admissible(args: AdmissibleArgs) -> Result<(), Error> {
    let r = parse_lengths(&args.lengths)?;
    let family = enumerate_admissible_threaded(&r, args.threads)?;
    if args.json {
        print_json(&AdmissibleOut {
            n: family.n,
            r: rational_strings(&r),
            count: family.len(),
            sets: family.sets,
            histogram: family.histogram,
        });
    } else {
        println!("r = {r}");
        if family.is_empty() {
            println!("no admissible index sets");
        } else {
            for set in &family.sets {
                println!("{set}  (cardinality {})", set.cardinality());
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SmoothOut {
    n: usize,
    r: Vec<String>,
    smooth: bool,
    offending_partition: Option<Vec<usize>>,
}

fn run_smooth(args: VectorArgs) -> Result<(), Error> {
    let r = parse_lengths(&args.lengths)?;
    let partition = r.degenerate_partition();
    if args.json {
        print_json(&SmoothOut {
            n: r.n(),
            r: rational_strings(&r),
            smooth: partition.is_none(),
            offending_partition: partition,
        });
    } else {
        match partition {
            None => println!("r = {r} is smooth"),
            Some(side) => {
                let rest: Vec<usize> = (1..=r.n()).filter(|i| !side.contains(i)).collect();
                println!("r = {r} lies on a wall: sides {side:?} balance sides {rest:?}");
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ChamberEntry {
    subset: Vec<usize>,
    sign: i8,
}

#[derive(Serialize)]
struct ChamberOut {
    n: usize,
    r: Vec<String>,
    smooth: bool,
    partitions: Vec<ChamberEntry>,
}

fn run_chamber(args: VectorArgs) -> Result<(), Error> {
    let r = parse_lengths(&args.lengths)?;
    // One sign per canonical partition: 2^(n-1)-ish of them.
    if r.n() > 26 {
        return Err(Error::InvalidInput(format!(
            "chamber signatures are materialized in full; n = {} is too large (max 26)",
            r.n()
        )));
    }
    let signature = r.chamber_signature();
    let partitions: Vec<ChamberEntry> = signature
        .partitions()
        .map(|(subset, sign)| ChamberEntry { subset, sign })
        .collect();
    if args.json {
        print_json(&ChamberOut {
            n: r.n(),
            r: rational_strings(&r),
            smooth: r.is_smooth(),
            partitions,
        });
    } else {
        println!("r = {r}");
        for e in &partitions {
            let sign = match e.sign {
                1 => "+",
                -1 => "-",
                _ => "0",
            };
            println!("{sign}  {:?}", e.subset);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PolytopeOut {
    n: usize,
    r: Vec<String>,
    vertices: Vec<[String; 2]>,
    edges: usize,
    degenerate: bool,
    shape: polytope::ShapeReport,
}

fn run_polytope(args: PolytopeArgs) -> Result<(), Error> {
    let r = parse_lengths(&args.lengths)?;
    let planes = polytope::halfplanes(&r)?;
    let poly = polytope::intersect(&planes).ok_or(Error::EmptyPolytope)?;
    let shape = polytope::classify_shape(&poly);
    if let Some(path) = &args.svg {
        let svg = polytope::emit_svg(&poly, &planes);
        std::fs::write(path, svg)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    if args.json {
        print_json(&PolytopeOut {
            n: r.n(),
            r: rational_strings(&r),
            vertices: poly
                .vertices
                .iter()
                .map(|(x, y)| [x.to_string(), y.to_string()])
                .collect(),
            edges: poly.edge_count(),
            degenerate: poly.degenerate,
            shape,
        });
    } else {
        println!("r = {r}");
        if poly.degenerate {
            println!("degenerate polytope (r lies on a wall)");
        }
        println!(
            "{} vertices, {} edges, parallel opposite pairs: {:?}",
            shape.vertex_count, shape.edge_count, shape.parallel_opposite_pairs
        );
        for (x, y) in &poly.vertices {
            println!("({x}, {y})");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BendOut {
    n: usize,
    r: Vec<String>,
    k: usize,
    theta: f64,
    edges: Vec<[f64; 3]>,
    diagonal_lengths: Vec<f64>,
}

#[derive(Serialize)]
struct OrbitSample {
    t: f64,
    edges: Vec<[f64; 3]>,
}

fn run_bend(args: BendArgs) -> Result<(), Error> {
    if let Some(BendMode::Orbit(orbit)) = args.mode {
        return run_orbit(orbit);
    }
    let k = args
        .k
        .ok_or_else(|| Error::InvalidInput("--k is required".into()))?;
    let theta = args
        .theta
        .ok_or_else(|| Error::InvalidInput("--theta is required".into()))?;
    if args.lengths.is_empty() {
        return Err(Error::InvalidInput("side lengths are required".into()));
    }
    let r = parse_lengths(&args.lengths)?;
    let base = Polygon::planar_fan(&r)?.with_closure_tol(args.tol)?;
    let bent = base.bend_action(k, theta)?;
    if args.json {
        print_json(&BendOut {
            n: bent.n(),
            r: rational_strings(&r),
            k,
            theta,
            edges: bent.edge_coords(),
            diagonal_lengths: bent.diagonal_lengths(),
        });
    } else {
        println!("r = {r}, bend k = {k}, theta = {theta}");
        for e in bent.edge_coords() {
            println!("[{:+.9}, {:+.9}, {:+.9}]", e[0], e[1], e[2]);
        }
    }
    Ok(())
}

fn run_orbit(args: OrbitArgs) -> Result<(), Error> {
    if args.steps == 0 {
        return Err(Error::InvalidInput("--steps must be positive".into()));
    }
    let r = parse_lengths(&args.lengths)?;
    let base = Polygon::planar_fan(&r)?.with_closure_tol(args.tol)?;
    let len = base.diagonal(args.k)?.norm();
    if len <= args.tol {
        return Err(Error::UndefinedAction(args.k));
    }
    let period = std::f64::consts::TAU / len;
    for i in 0..args.steps {
        let t = period * (i as f64) / (args.steps as f64);
        let sample = base.bend_flow(args.k, t)?;
        print_json(&OrbitSample {
            t,
            edges: sample.edge_coords(),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct Type1Out {
    index_set: IndexSet,
    cardinality: u32,
    sign: i64,
    edges: Vec<[f64; 3]>,
}

#[derive(Serialize)]
struct FixedPointsOut {
    n: usize,
    r: Vec<String>,
    pivot: [usize; 2],
    permuted_r: Vec<String>,
    type1: Vec<Type1Out>,
    type2: Vec<Vec<String>>,
}

fn run_fixed_points(args: FixedPointsArgs) -> Result<(), Error> {
    let r = parse_lengths(&args.lengths)?;
    if let Some(side) = r.violating_side() {
        return Err(Error::EmptyModuliSpace(side));
    }
    let pivot = match parse_pivot(&args.pivot)? {
        Some(p) => p,
        None => cobordism::default_pivot(&r)?,
    };
    let permuted = r.with_pair_last(pivot.i, pivot.j)?;
    let n = permuted.n();
    let family = enumerate_admissible_threaded(&permuted, 1)?;
    let mut type1 = Vec::with_capacity(family.len());
    for &set in &family.sets {
        let polygon = Polygon::type1_model(&permuted, set)?;
        debug_assert!(matches!(
            polygon.classify_fixed(args.tol),
            polyspace::FixedPointKind::TypeI { .. }
        ));
        let card = set.cardinality();
        type1.push(Type1Out {
            index_set: set,
            cardinality: card,
            sign: if (n as u32 - card).is_multiple_of(2) { 1 } else { -1 },
            edges: polygon.edge_coords(),
        });
    }
    let type2 = cobordism::type2_submanifolds(&r, pivot)?;
    if args.json {
        print_json(&FixedPointsOut {
            n,
            r: rational_strings(&r),
            pivot: [pivot.i, pivot.j],
            permuted_r: rational_strings(&permuted),
            type1,
            type2: type2.iter().map(rational_strings).collect(),
        });
    } else {
        println!("r = {r}, pivot = ({}, {}), permuted = {permuted}", pivot.i, pivot.j);
        if type1.is_empty() {
            println!("no isolated fixed points");
        }
        for t in &type1 {
            println!(
                "type I at I = {}, sign {:+}",
                t.index_set,
                t.sign
            );
        }
        for v in &type2 {
            println!("type II submanifold: polygons with lengths {v}");
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PerturbedOut {
    epsilon: String,
    coefficient: i64,
    matches: bool,
}

#[derive(Serialize)]
struct EquilateralOut {
    n: usize,
    m: usize,
    dimension: usize,
    coefficient: i64,
    histogram: BTreeMap<u32, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    perturbed: Option<PerturbedOut>,
}

fn run_equilateral(args: EquilateralArgs) -> Result<(), Error> {
    let class = cobordism::equilateral_class(args.n)?;
    let perturbed = match &args.epsilon {
        Some(eps) => {
            let eps = Rational::from_str(eps)?;
            let check = cobordism::perturbed_equilateral_check(args.n, &eps)?;
            Some(PerturbedOut {
                epsilon: eps.to_string(),
                coefficient: check.coefficient,
                matches: check.coefficient == class.coefficient,
            })
        }
        None => None,
    };
    if args.json {
        print_json(&EquilateralOut {
            n: class.n,
            m: (class.n - 1) / 2,
            dimension: class.complex_dimension,
            coefficient: class.coefficient,
            histogram: class.summand_histogram.clone(),
            perturbed,
        });
    } else {
        println!("equilateral n = {}: {}", class.n, describe_class(&class));
        if let Some(p) = perturbed {
            println!(
                "perturbed by epsilon = {}: coefficient {} ({})",
                p.epsilon,
                p.coefficient,
                if p.matches { "matches" } else { "differs" }
            );
        }
    }
    Ok(())
}
