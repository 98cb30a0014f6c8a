use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cubic_torsion::correspondence::stabilizer_order_sl2;
use cubic_torsion::enumeration::{
    classes_with_disc, count_proj_reducible, cubic_census_squarefree, proj_reducible_exact_total, tally_classes, Sign,
    STREAM_BOUND,
};
use cubic_torsion::harness::report::{self, Format};
use cubic_torsion::harness::{
    order_count_check, scan, verify_cache, verify_identities_with, Cache, ScanOptions, VerifyReport, MASS_CUTOFF,
};
use cubic_torsion::local_mass::{lemma26_factor, mass, mass_factor, mu_maximal, mu_projective, FamilySpec};
use cubic_torsion::quad::{cl3_count, class_number, ideal3_count, sigma_factor, u3_correction};
use cubic_torsion::{Error, Result};

#[derive(Parser)]
#[command(name = "cubic-torsion", version, about = "Binary cubic forms and 3-torsion in quadratic orders")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Bound X on |disc|.
    #[arg(short = 'X', long = "bound", global = true)]
    bound: Option<u64>,
    /// Discriminant sign: pos or neg (both when omitted, where it applies).
    #[arg(long, global = true)]
    sign: Option<Sign>,
    /// Family specification (JSON file).
    #[arg(long, global = true)]
    family: Option<PathBuf>,
    /// Per-discriminant cache (line-delimited JSON).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    threads: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Class totals over 0 < ±disc < X, or the classes of one discriminant.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i64>,
    },
    /// |Cl₃(O)| and the projective classes of disc D.
    Classgroup {
        #[arg(allow_hyphen_values = true)]
        disc: i64,
    },
    /// |I₃(O)| and the reducible projective classes of disc D.
    Idealgroup {
        #[arg(allow_hyphen_values = true)]
        disc: i64,
    },
    /// Local densities and mass factors at small primes.
    Densities {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        primes: Vec<u64>,
    },
    /// The mass M_Σ of the family.
    Mass,
    /// Mean values of |Cl₃|, |I₃| and their difference over the family.
    Average {
        /// Also report the count of family discriminants.
        #[arg(long)]
        orders: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-discriminant identities (and cached rows when --cache is given).
    Verify {
        #[arg(long)]
        no_census: bool,
    },
    /// Cubic fields of squarefree discriminant D.
    Census {
        #[arg(allow_hyphen_values = true)]
        disc: i64,
    },
}

fn family(g: &Global) -> Result<FamilySpec> {
    match &g.family {
        Some(p) => FamilySpec::parse(&std::fs::read_to_string(p)?),
        None => Ok(FamilySpec::all()),
    }
}

fn signs(g: &Global) -> Vec<Sign> {
    match g.sign {
        Some(s) => vec![s],
        None => vec![Sign::Neg, Sign::Pos],
    }
}

fn emit(g: &Global, value: serde_json::Value, text: String) {
    match g.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json")),
        _ => print!("{text}"),
    }
}

fn enumerate(g: &Global, disc: Option<i64>) -> Result<bool> {
    if let Some(d) = disc {
        let (forms, rec) = classes_with_disc(d)?;
        let mut text = format!(
            "D = {d}: {} classes, {} projective, {} reducible projective, {} irreducible\n",
            rec.n_total, rec.n_proj, rec.n_proj_red, rec.n_irred
        );
        let mut rows = Vec::new();
        for f in &forms {
            let (proj, red) = (f.is_projective()?, f.is_reducible());
            text += &format!("  {f}  projective={proj} reducible={red}\n");
            rows.push(json!({"form": [f.a, f.b, f.c, f.d], "projective": proj, "reducible": red}));
        }
        emit(g, json!({"record": rec, "classes": rows}), text);
        return Ok(true);
    }
    let x = g.bound.unwrap_or(10_000);
    let mut out = Vec::new();
    let mut text = String::new();
    for sign in signs(g) {
        let (tally, _) = tally_classes(x, sign, 0, g.threads, STREAM_BOUND.max(x), &|_| {})?;
        let (exact, exact_sq, _) = proj_reducible_exact_total(x, sign, 0)?;
        let a0 = count_proj_reducible(x, sign)?;
        text += &format!(
            "X = {x} {sign}: classes {} (irreducible {}, projective {}, maximal {}), reducible {} (projective {}), square disc {}\n  a = 0 path: exact reducible projective {exact} (+{exact_sq} square), Möbius count {}\n",
            tally.total,
            tally.irreducible,
            tally.irreducible_projective,
            tally.irreducible_maximal,
            tally.reducible,
            tally.reducible_projective,
            tally.square_disc,
            a0.forms
        );
        out.push(json!({"tally": tally, "a0_exact": exact, "a0_exact_square": exact_sq, "a0_moebius": a0}));
    }
    emit(g, json!(out), text);
    Ok(true)
}

fn classgroup(g: &Global, d: i64) -> Result<bool> {
    let (forms, rec) = classes_with_disc(d)?;
    let (h, cl3, sigma) = (class_number(d)?, cl3_count(d)?, sigma_factor(d)?);
    let mut text = format!("D = {d}: h = {h}, |Cl3| = {cl3}, sigma = {sigma}, projective classes = {}\n", rec.n_proj);
    let mut rows = Vec::new();
    for f in forms.iter().filter(|f| f.is_projective().unwrap_or(false)) {
        let stab = stabilizer_order_sl2(f)?;
        text += &format!("  {f}  stabilizer={stab} reducible={}\n", f.is_reducible());
        rows.push(json!({"form": [f.a, f.b, f.c, f.d], "stabilizer": stab, "reducible": f.is_reducible()}));
    }
    emit(g, json!({"D": d, "h": h, "cl3": cl3, "sigma": sigma, "n_proj": rec.n_proj, "classes": rows}), text);
    Ok(rec.n_proj == sigma * cl3)
}

fn idealgroup(g: &Global, d: i64) -> Result<bool> {
    let (forms, rec) = classes_with_disc(d)?;
    let (i3, u3) = (ideal3_count(d)?, u3_correction(d)?);
    let mut text = format!("D = {d}: |I3| = {i3}, u3 = {u3}, reducible projective classes = {}\n", rec.n_proj_red);
    let mut rows = Vec::new();
    for f in forms.iter().filter(|f| f.is_reducible() && f.is_projective().unwrap_or(false)) {
        text += &format!("  {f}\n");
        rows.push(json!([f.a, f.b, f.c, f.d]));
    }
    emit(g, json!({"D": d, "i3": i3, "u3": u3, "n_proj_red": rec.n_proj_red, "classes": rows}), text);
    Ok(rec.n_proj_red * u3 == i3)
}

fn densities(g: &Global, primes: &[u64]) -> Result<bool> {
    let mut rows = Vec::new();
    let mut text = String::new();
    for &p in primes {
        let (mp, mm) = (mu_projective(p)?, mu_maximal(p)?);
        let mf = mass_factor(p, &cubic_torsion::local_mass::Condition::All)?;
        text += &format!(
            "p = {p}: mu_projective = {mp}, mu_maximal = {mm}, unit cube ratio = {}, mass factor (all orders) = {mf}\n",
            lemma26_factor(p)
        );
        rows.push(json!({"p": p, "mu_projective": mp.to_string(), "mu_maximal": mm.to_string(),
            "unit_cube_ratio": lemma26_factor(p), "mass_factor_all": mf.to_string()}));
    }
    emit(g, json!(rows), text);
    Ok(true)
}

fn mass_cmd(g: &Global) -> Result<bool> {
    let spec = family(g)?;
    let m = mass(&spec, MASS_CUTOFF)?;
    let exact = if m.is_exact() { format!(" = {}", m.partial) } else { String::new() };
    let text = format!("family {}: M in [{:.8}, {:.8}]{exact} (primes up to {})\n", spec.hash(), m.lo, m.hi, m.cutoff);
    emit(
        g,
        json!({"family": spec.hash(), "spec": spec.to_json(), "lo": m.lo, "hi": m.hi, "exact": m.is_exact(),
            "partial": m.partial.to_string(), "cutoff": m.cutoff}),
        text,
    );
    Ok(true)
}

fn average(g: &Global, orders: bool, out: Option<&PathBuf>) -> Result<bool> {
    let spec = family(g)?;
    let x = g.bound.unwrap_or(100_000);
    let mut cache = g.cache.as_ref().map(Cache::open).transpose()?;
    let opts = ScanOptions { threads: g.threads, ..Default::default() };
    let mut rows = Vec::new();
    for sign in signs(g) {
        rows.push(scan(x, sign, &spec, cache.as_mut(), &opts)?);
    }
    let rendered = report::render(&rows, g.format)?;
    match out {
        Some(p) => std::fs::write(p, &rendered)?,
        None => print!("{rendered}"),
    }
    if orders {
        for sign in signs(g) {
            let oc = order_count_check(x, sign, &spec)?;
            eprintln!(
                "orders {sign}: {} / X = {:.6}, predicted [{:.6}, {:.6}]",
                oc.count, oc.ratio, oc.predicted_lo, oc.predicted_hi
            );
        }
    }
    Ok(true)
}

fn print_report(g: &Global, label: &str, rep: &VerifyReport) {
    let text = format!(
        "{label}: {} discriminants, {} census checks, {} failures\n{}",
        rep.discriminants,
        rep.census_checked,
        rep.failures.len(),
        rep.failures.iter().map(|f| format!("  {f}\n")).collect::<String>()
    );
    emit(g, serde_json::to_value(rep).expect("json"), text);
}

fn verify(g: &Global, no_census: bool) -> Result<bool> {
    let bound = g.bound.unwrap_or(3000);
    if bound > 3000 {
        return Err(Error::BoundExceeded(format!("verify bound {bound} exceeds 3000")));
    }
    let rep = verify_identities_with(bound, !no_census)?;
    print_report(g, "identities", &rep);
    let mut ok = rep.passed();
    if let Some(p) = &g.cache {
        let cache = Cache::open(p)?;
        let rep = verify_cache(&cache)?;
        print_report(g, "cache", &rep);
        ok &= rep.passed();
    }
    Ok(ok)
}

fn census(g: &Global, d: i64) -> Result<bool> {
    let n = cubic_census_squarefree(d)?;
    let cl3 = cl3_count(d)?;
    emit(
        g,
        json!({"D": d, "fields": n, "cl3": cl3}),
        format!("D = {d}: {n} cubic fields, (|Cl3| - 1)/2 = {}\n", (cl3 - 1) / 2),
    );
    Ok(2 * n + 1 == cl3)
}

fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Enumerate { disc } => enumerate(g, *disc),
        Cmd::Classgroup { disc } => classgroup(g, *disc),
        Cmd::Idealgroup { disc } => idealgroup(g, *disc),
        Cmd::Densities { primes } => densities(g, primes),
        Cmd::Mass => mass_cmd(g),
        Cmd::Average { orders, out } => average(g, *orders, out.as_ref()),
        Cmd::Verify { no_census } => verify(g, *no_census),
        Cmd::Census { disc } => census(g, *disc),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("assertion failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
