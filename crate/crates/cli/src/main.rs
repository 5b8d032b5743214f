//! Batch front-end: configuration parsing, command dispatch, JSON/tabular
//! report emission.
//!
//! Exit status: 0 on success with zero violations/mismatches, 1 when a
//! verification or comparison found failures, 2 on usage or configuration
//! errors, 3 when a budget was exceeded (with a partial report on stdout).

use clap::{Args, Parser, Subcommand};
use parahoric::apartment::{profile, ApartmentPoint};
use parahoric::chartable::character_table;
use parahoric::commutator::{
    alcove_points, certify_duality_remark, certify_jump_filtration, certify_lemma_comm,
    certify_pairings, ContainmentReport,
};
use parahoric::dl::{
    borel_torus_tally, induced_from_tally, induction_dimension, trace_prediction,
};
use parahoric::error::Error as CoreError;
use parahoric::group::{
    enumerate, level_quotient, serialize_element, GroupElement, GroupFamily, GroupSpec,
    SubgroupDescriptor,
};
use parahoric::report::{parse_rat, profile_report};
use parahoric::root_datum::{build_root_datum, Family, Rat};
use parahoric::tori::{
    characters_of, is_regular, realize_torus, weyl_wx, Character, RationalTorusPoints,
    VeryRegular, VeryRegularTable,
};
use serde::Deserialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "parahoric", about = "Parahoric filtration profiles, commutator certification, and character-formula oracles", version)]
struct Cli {
    /// Number of worker threads for parallel sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Enumeration budget (canonical forms scanned).
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget_elems: u64,
    /// Write the JSON report to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Filtration profile of an apartment point.
    Profile(ProfileArgs),
    /// Certify the commutator lemmas symbolically and/or in group models.
    Verify(VerifyArgs),
    /// Trace predictions on very regular elements.
    Trace(ConfigArg),
    /// Fixed-point scans against the predicted cosets.
    FixedPoints(ConfigArg),
    /// Compare the trace prediction with the induced-character oracle.
    OracleCompare(ConfigArg),
    /// Character table of the rational group.
    Chartable(ConfigArg),
    /// Induced dimensions across a level change.
    LevelCompare(ConfigArg),
}

#[derive(Args)]
struct ProfileArgs {
    /// Root system family: GL, SL, Sp, A, C, G.
    #[arg(long)]
    family: String,
    /// Rank label (e.g. 2 for GL_2, 1 for A_1).
    #[arg(long)]
    rank: usize,
    /// Apartment offset, comma-separated exact rationals like 1/4,-1/4.
    #[arg(long)]
    point: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run the symbolic certification sweeps.
    #[arg(long)]
    symbolic: bool,
    /// Run the finite-group suites (generated-vs-pattern).
    #[arg(long)]
    group: bool,
    /// Run everything.
    #[arg(long)]
    all: bool,
    /// Maximum denominator of swept apartment points.
    #[arg(long, default_value_t = 6)]
    max_denom: i64,
    /// Maximum level r.
    #[arg(long, default_value_t = 5)]
    max_level: i64,
}

#[derive(Args)]
struct ConfigArg {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
}

/// Run configuration for the model-level commands. Rationals are strings to
/// keep the input exact.
#[derive(Deserialize)]
struct RunConfig {
    family: String,
    n: usize,
    q: u32,
    r: i64,
    #[serde(default)]
    x: Vec<String>,
    /// Weyl-twist index of the torus (0 = split in the deterministic order).
    #[serde(default)]
    torus: usize,
    /// Character exponent vector; defaults to the trivial character.
    #[serde(default)]
    theta: Vec<u64>,
    /// Deterministic sample size for element sweeps.
    #[serde(default = "default_sample")]
    sample: usize,
    /// Field levels for fixed-point scans.
    #[serde(default = "default_levels")]
    levels: Vec<u32>,
    /// Budget for character tables.
    #[serde(default = "default_table_budget")]
    table_budget: u64,
}

fn default_sample() -> usize {
    20
}

fn default_levels() -> Vec<u32> {
    vec![1]
}

fn default_table_budget() -> u64 {
    10_000
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "GL" => Ok(Family::GL),
        "SL" => Ok(Family::SL),
        "Sp" => Ok(Family::Sp),
        "A" => Ok(Family::A),
        "C" => Ok(Family::C),
        "G" => Ok(Family::G),
        _ => Err(format!("unknown family {s}")),
    }
}

fn group_family(s: &str, n: usize) -> Result<GroupFamily, String> {
    match (s, n) {
        ("GL", n) => Ok(GroupFamily::GL(n)),
        ("SL", n) => Ok(GroupFamily::SL(n)),
        ("Sp", 4) => Ok(GroupFamily::Sp4),
        _ => Err(format!("unsupported group family {s}_{n}")),
    }
}

fn parse_point(s: &str) -> Result<Vec<Rat>, String> {
    s.split(',')
        .map(|p| parse_rat(p).ok_or_else(|| format!("bad rational {p}")))
        .collect()
}

enum RunError {
    Usage(String),
    Budget(String),
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Resource { .. } => RunError::Budget(e.to_string()),
            CoreError::Config(_) | CoreError::Domain(_) => RunError::Usage(e.to_string()),
            other => RunError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()
            .ok();
    }
    let result = run(&cli);
    match result {
        Ok((value, ok)) => {
            emit(&cli, &value);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit(cli: &Cli, value: &serde_json::Value) {
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable"),
        Format::Table => render_table(value),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, rendered + "\n").expect("writable output path"),
        None => println!("{rendered}"),
    }
}

/// Minimal tabular rendering: arrays of flat objects become aligned rows.
fn render_table(value: &serde_json::Value) -> String {
    fn rows(value: &serde_json::Value, out: &mut Vec<String>, prefix: &str) {
        match value {
            serde_json::Value::Array(items) => {
                for it in items {
                    rows(it, out, prefix);
                }
            }
            serde_json::Value::Object(map) => {
                let flat: Vec<String> = map
                    .iter()
                    .map(|(k, v)| format!("{k}={}", serde_json::to_string(v).unwrap()))
                    .collect();
                out.push(format!("{prefix}{}", flat.join("  ")));
            }
            other => out.push(format!("{prefix}{other}")),
        }
    }
    let mut out = Vec::new();
    rows(value, &mut out, "");
    out.join("\n")
}

fn run(cli: &Cli) -> Result<(serde_json::Value, bool), RunError> {
    match &cli.command {
        Command::Profile(args) => cmd_profile(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Trace(cfg) => with_config(cfg, cli, cmd_trace),
        Command::FixedPoints(cfg) => with_config(cfg, cli, cmd_fixed_points),
        Command::OracleCompare(cfg) => with_config(cfg, cli, cmd_oracle_compare),
        Command::Chartable(cfg) => with_config(cfg, cli, cmd_chartable),
        Command::LevelCompare(cfg) => with_config(cfg, cli, cmd_level_compare),
    }
}

fn with_config(
    cfg: &ConfigArg,
    cli: &Cli,
    f: impl Fn(&RunConfig, &Cli) -> Result<(serde_json::Value, bool), RunError>,
) -> Result<(serde_json::Value, bool), RunError> {
    let text = std::fs::read_to_string(&cfg.config)
        .map_err(|e| RunError::Usage(format!("cannot read config: {e}")))?;
    let config: RunConfig =
        serde_json::from_str(&text).map_err(|e| RunError::Usage(format!("bad config: {e}")))?;
    f(&config, cli)
}

fn cmd_profile(args: &ProfileArgs) -> Result<(serde_json::Value, bool), RunError> {
    let family = parse_family(&args.family).map_err(RunError::Usage)?;
    let datum = build_root_datum(family, args.rank).map_err(RunError::from)?;
    let point = parse_point(&args.point).map_err(RunError::Usage)?;
    if point.len() != datum.dim {
        return Err(RunError::Usage(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            datum.dim
        )));
    }
    let p = profile(&datum, &ApartmentPoint::new(point.clone()));
    let report = profile_report(&datum, &point, &p);
    Ok((serde_json::to_value(report).unwrap(), true))
}

fn cmd_verify(args: &VerifyArgs) -> Result<(serde_json::Value, bool), RunError> {
    let symbolic = args.symbolic || args.all || !args.group;
    let group = args.group || args.all;
    let mut ok = true;
    let mut out = serde_json::Map::new();
    if symbolic {
        let mut lemmas: Vec<(&str, ContainmentReport)> = vec![
            ("depth_commutators", ContainmentReport::default()),
            ("jump_filtration", ContainmentReport::default()),
            ("block_pairings", ContainmentReport::default()),
            ("duality_remark", ContainmentReport::default()),
        ];
        for (fam, n) in [
            (Family::A, 1),
            (Family::A, 2),
            (Family::A, 3),
            (Family::C, 2),
            (Family::G, 2),
        ] {
            let datum = build_root_datum(fam, n).map_err(RunError::from)?;
            for pt in alcove_points(&datum, args.max_denom) {
                let p = profile(&datum, &ApartmentPoint::new(pt));
                for r in 2..=args.max_level {
                    lemmas[0].1.merge(certify_lemma_comm(&datum, &p, r));
                    lemmas[1].1.merge(certify_jump_filtration(&datum, &p, r));
                    lemmas[2].1.merge(certify_pairings(&datum, &p, r));
                    lemmas[3].1.merge(certify_duality_remark(&datum, &p, r));
                }
            }
        }
        for (name, rep) in &lemmas {
            if !rep.experimental && !rep.certified() {
                ok = false;
            }
            out.insert((*name).to_string(), serde_json::to_value(rep).unwrap());
        }
    }
    if group {
        let mut checks = Vec::new();
        for (family, q, r, x) in [
            (GroupFamily::SL(2), 2u32, 2i64, vec![Rat::new(0, 1); 2]),
            (GroupFamily::GL(2), 3, 2, vec![Rat::new(0, 1); 2]),
            (GroupFamily::SL(2), 3, 2, vec![Rat::new(1, 4), Rat::new(-1, 4)]),
            (GroupFamily::Sp4, 2, 1, vec![Rat::new(1, 2), Rat::new(0, 1)]),
        ] {
            let spec = GroupSpec::new(family, q, r, ApartmentPoint::new(x))
                .map_err(RunError::from)?;
            let mut descriptors = vec![
                SubgroupDescriptor::Group { a: 0 },
                SubgroupDescriptor::Torus { a: 0 },
            ];
            if r >= 2 {
                descriptors.push(SubgroupDescriptor::Group { a: 1 });
            }
            for d in descriptors {
                let res = enumerate(&spec, &d, 1, 1 << 26);
                let passed = res.is_ok();
                ok &= passed;
                checks.push(json!({
                    "family": format!("{family:?}"),
                    "q": q,
                    "r": r,
                    "descriptor": format!("{d:?}"),
                    "count": res.as_ref().map(|v| v.len()).unwrap_or(0),
                    "generated_matches_pattern": passed,
                }));
            }
        }
        out.insert("group_suites".into(), serde_json::Value::Array(checks));
    }
    Ok((serde_json::Value::Object(out), ok))
}

struct ModelSetup {
    spec: GroupSpec,
    wx: Vec<parahoric::root_datum::WeylElement>,
    tori: Vec<RationalTorusPoints>,
    group: Vec<GroupElement>,
    vr: VeryRegularTable,
}

fn build_model(config: &RunConfig, cli: &Cli) -> Result<ModelSetup, RunError> {
    let family = group_family(&config.family, config.n).map_err(RunError::Usage)?;
    let dim = match family {
        GroupFamily::GL(n) | GroupFamily::SL(n) => n,
        GroupFamily::Sp4 => 2,
    };
    let x = if config.x.is_empty() {
        ApartmentPoint::origin(dim)
    } else {
        ApartmentPoint::new(
            config
                .x
                .iter()
                .map(|s| parse_rat(s).ok_or_else(|| RunError::Usage(format!("bad rational {s}"))))
                .collect::<Result<Vec<Rat>, RunError>>()?,
        )
    };
    let spec = GroupSpec::new(family, config.q, config.r, x).map_err(RunError::from)?;
    let wx = weyl_wx(&spec.datum, &spec.profile);
    let mut tori = Vec::new();
    for (i, w) in wx.iter().enumerate() {
        let t = realize_torus(&spec, i, w, 4).map_err(RunError::from)?;
        tori.push(RationalTorusPoints::new(&spec, t).map_err(RunError::from)?);
    }
    let group = enumerate(&spec, &SubgroupDescriptor::Group { a: 0 }, 1, cli.budget_elems)
        .map_err(RunError::from)?;
    let vr = VeryRegularTable::build(&spec, &tori, &group).map_err(RunError::from)?;
    Ok(ModelSetup {
        spec,
        wx,
        tori,
        group,
        vr,
    })
}

fn pick_theta(config: &RunConfig, points: &RationalTorusPoints) -> Character {
    if config.theta.is_empty() {
        Character::trivial(points)
    } else {
        let mut exps = config.theta.clone();
        exps.resize(points.gens.len(), 0);
        Character { exps }
    }
}

fn vr_sample(setup: &ModelSetup, n: usize) -> Vec<GroupElement> {
    let mut keys: Vec<&GroupElement> = setup.vr.map.keys().collect();
    keys.sort();
    keys.into_iter().take(n).cloned().collect()
}

fn cmd_trace(config: &RunConfig, cli: &Cli) -> Result<(serde_json::Value, bool), RunError> {
    let setup = build_model(config, cli)?;
    if config.torus >= setup.tori.len() {
        return Err(RunError::Usage("torus index out of range".into()));
    }
    let tp = &setup.tori[config.torus];
    let theta = pick_theta(config, tp);
    let (regular, bound) = is_regular(&setup.spec, tp, &theta).map_err(RunError::from)?;
    let mut rows = Vec::new();
    for g in vr_sample(&setup, config.sample) {
        let VeryRegular::Yes(cert) = setup.vr.classify(&g) else {
            continue;
        };
        let tr = trace_prediction(&setup.spec, tp, &theta, &setup.tori, &cert, &setup.wx)
            .map_err(RunError::from)?;
        let pred = parahoric::dl::Prediction {
            kind: if tr.is_zero() { "vanishing".into() } else { "trace".into() },
            value: tr,
        };
        rows.push(json!({
            "element": serialize_element(&setup.spec, &g),
            "centralizer_twist": cert.torus_index,
            "prediction": pred,
        }));
    }
    Ok((
        json!({
            "torus_twist": config.torus,
            "theta": theta.exps,
            "theta_regular": regular,
            "regularity_bound_m": bound,
            "very_regular_sampled": rows.len(),
            "traces": rows,
        }),
        true,
    ))
}

fn cmd_fixed_points(config: &RunConfig, cli: &Cli) -> Result<(serde_json::Value, bool), RunError> {
    use parahoric::dl::{
        coset_of_rational_points, fixed_point_set, query_degree, rational_lift, FixedPointQuery,
    };
    use parahoric::tori::torsor;
    let setup = build_model(config, cli)?;
    let tp = &setup.tori[config.torus.min(setup.tori.len() - 1)];
    let mut ok = true;
    let mut rows = Vec::new();
    for g in vr_sample(&setup, config.sample.min(4)) {
        let VeryRegular::Yes(cert) = setup.vr.classify(&g) else {
            continue;
        };
        let z = parahoric::dl::centralizer_torus(&setup.spec, &setup.tori, &cert)
            .map_err(RunError::from)?;
        let classes = torsor(&setup.spec, &tp.torus, &z, &setup.wx).map_err(RunError::from)?;
        for te in &classes {
            for &level in &config.levels {
                let q = FixedPointQuery {
                    t_points: tp,
                    g: g.clone(),
                    level,
                    restrict: Some(te.rep.clone()),
                    zeta: None,
                    budget: cli.budget_elems,
                };
                let found = fixed_point_set(&setup.spec, &q).map_err(RunError::from)?;
                let expected = if te.sigma_fixed {
                    let lift = rational_lift(&setup.spec, tp, &te.rep).map_err(RunError::from)?;
                    coset_of_rational_points(
                        &setup.spec,
                        tp,
                        &lift,
                        query_degree(&setup.spec, &q),
                    )
                    .map_err(RunError::from)?
                } else {
                    Vec::new()
                };
                let equal = found == expected;
                ok &= equal;
                rows.push(json!({
                    "w": te.w_index,
                    "sigma_fixed": te.sigma_fixed,
                    "level": level,
                    "found": found.len(),
                    "expected": expected.len(),
                    "equal": equal,
                }));
            }
        }
    }
    Ok((json!({ "scans": rows }), ok))
}

fn cmd_oracle_compare(config: &RunConfig, cli: &Cli) -> Result<(serde_json::Value, bool), RunError> {
    let setup = build_model(config, cli)?;
    let tp = &setup.tori[0];
    let thetas = characters_of(tp);
    let mut rows = Vec::new();
    let mut ok = true;
    for g in vr_sample(&setup, config.sample) {
        let VeryRegular::Yes(cert) = setup.vr.classify(&g) else {
            continue;
        };
        let (tally, b_order) =
            borel_torus_tally(&setup.spec, tp, &setup.group, &g).map_err(RunError::from)?;
        for theta in thetas.iter().take(config.sample.max(10)) {
            let ind = induced_from_tally(tp, theta, &tally, b_order).map_err(RunError::from)?;
            let tr = trace_prediction(&setup.spec, tp, theta, &setup.tori, &cert, &setup.wx)
                .map_err(RunError::from)?;
            let equal = ind.eq(&tr);
            ok &= equal;
            rows.push(json!({
                "theta": theta.exps,
                "prediction": tr,
                "induced": ind,
                "equal": equal,
            }));
        }
    }
    Ok((json!({ "comparisons": rows }), ok))
}

fn cmd_chartable(config: &RunConfig, cli: &Cli) -> Result<(serde_json::Value, bool), RunError> {
    let setup = build_model(config, cli)?;
    let table = character_table(&setup.spec, &setup.group, config.table_budget)
        .map_err(RunError::from)?;
    let values: Vec<Vec<parahoric::cyclotomic::Cyc>> = table.irreducibles.clone();
    Ok((
        json!({
            "summary": table.summary(),
            "class_sizes": table.classes.iter().map(|c| c.members.len()).collect::<Vec<_>>(),
            "irreducibles": values,
        }),
        true,
    ))
}

fn cmd_level_compare(config: &RunConfig, cli: &Cli) -> Result<(serde_json::Value, bool), RunError> {
    let family = group_family(&config.family, config.n).map_err(RunError::Usage)?;
    let dim = match family {
        GroupFamily::GL(n) | GroupFamily::SL(n) => n,
        GroupFamily::Sp4 => 2,
    };
    let spec_s = GroupSpec::new(family, config.q, config.r, ApartmentPoint::origin(dim))
        .map_err(RunError::from)?;
    if spec_s.profile.any_nonreductive() {
        return Err(RunError::Usage(
            "level comparison requires the hyperspecial point".into(),
        ));
    }
    let gs = enumerate(&spec_s, &SubgroupDescriptor::Group { a: 0 }, 1, cli.budget_elems)
        .map_err(RunError::from)?;
    let dim_s = induction_dimension(&spec_s, &gs);
    let mut rows = vec![json!({"level": config.r, "index": dim_s})];
    let mut ok = true;
    for r in 1..config.r {
        let spec_r = level_quotient(&spec_s, r).map_err(RunError::from)?;
        let gr = enumerate(&spec_r, &SubgroupDescriptor::Group { a: 0 }, 1, cli.budget_elems)
            .map_err(RunError::from)?;
        let dim_r = induction_dimension(&spec_r, &gr);
        ok &= dim_s > dim_r;
        rows.push(json!({"level": r, "index": dim_r}));
    }
    Ok((
        json!({ "indices": rows, "strictly_increasing_to_top": ok }),
        ok,
    ))
}
