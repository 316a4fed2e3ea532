//! Command-line front end.
//!
//! Configs are JSON, tables are CSV. Every CSV starts with a comment line carrying the
//! tool version and the SHA-256 of the config bytes, then a header row. Exit codes:
//! 0 success, 1 config or I/O error, 2 domain error, 3 verification failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::bie::{self, assemble_with, BieSystem, DensityPair, Formulation, MIN_NODES};
use crate::error::Error;
use crate::field::{self, manufactured_case, ManufacturedCase};
use crate::geometry::{Contour, ContourSpec};
use crate::halfplane::{halfplane_solve, BoundaryData, HankelConfig};
use crate::kernels::{ring_jets, FieldPoint, RingPole};
use crate::material::{
    characteristic_data, validate_constants, CharacteristicData, ElasticConstants, ValidatedMaterial,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Interior relative error allowed at the finest level of `verify`.
pub const VERIFY_INTERIOR_TOL: f64 = 1e-6;
/// Sup-norm tolerance on the boundary-limit check.
pub const VERIFY_JUMP_TOL: f64 = 1e-3;
pub const VERIFY_MIN_ORDER: f64 = 3.0;

#[derive(Debug, Parser)]
#[command(
    name = "axibie",
    version,
    about = "Axisymmetric boundary-integral solver for transversely isotropic solids"
)]
pub struct Cli {
    /// Config file (material JSON for `roots` and `halfplane`, case JSON otherwise).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true, env = "AXIBIE_THREADS")]
    pub threads: Option<usize>,
    /// Seed for randomised probe placement.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the characteristic roots of a material as JSON.
    Roots,
    /// Solve the boundary integral equations and write densities and a report.
    Solve,
    /// Evaluate the solution at probe points.
    Eval(EvalArgs),
    /// Run the manufactured-solution checks on a convergence ladder.
    Verify,
    /// Solve the half-plane problem for sampled boundary profiles.
    Halfplane(HalfplaneArgs),
    /// Tabulate the ring kernels.
    KernelTable(KernelTableArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// CSV with columns r,z.
    #[arg(long)]
    pub probes: PathBuf,
    /// Also write gradients and stresses.
    #[arg(long)]
    pub stress: bool,
}

#[derive(Debug, Args)]
pub struct HalfplaneArgs {
    /// CSV with columns r,f1,f2.
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, default_value_t = 5.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 51)]
    pub nr: usize,
    /// Depths of the output grid; `0` gives the extrapolated boundary trace.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1")]
    pub z: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct KernelTableArgs {
    /// CSV with columns r,z,a,zeta.
    #[arg(long, conflicts_with = "at")]
    pub points: Option<PathBuf>,
    /// A single point `r,z,a,zeta`; may be repeated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, action = clap::ArgAction::Append)]
    pub at: Vec<f64>,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: msg.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::config(format!("I/O error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::config(format!("CSV error: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    /// CSV with columns g1,g2, one row per node in node order.
    Csv {
        path: PathBuf,
    },
    Manufactured {
        pole: [f64; 2],
        coeffs: [f64; 2],
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub densities: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub field: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub material: ElasticConstants,
    pub contour: ContourSpec,
    #[serde(rename = "N")]
    pub n: usize,
    pub data: DataSource,
    #[serde(default)]
    pub outputs: OutputPaths,
    #[serde(default)]
    pub probes: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub formulation: Formulation,
}

/// Raw config bytes plus where relative paths resolve.
struct Loaded {
    bytes: Vec<u8>,
    dir: PathBuf,
}

impl Loaded {
    fn read(path: Option<&Path>) -> CliResult<Self> {
        let path = path.ok_or_else(|| CliError::config("--config is required for this subcommand"))?;
        let bytes = fs::read(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { bytes, dir })
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> CliResult<T> {
        serde_json::from_slice(&self.bytes).map_err(|e| CliError::config(format!("parse error: {e}")))
    }

    fn hash(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.dir.join(p)
        }
    }
}

fn comment_line(hash: &str) -> String {
    format!("# axibie {VERSION} config-sha256={hash}\n")
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a CSV with the provenance comment and `header`.
fn write_table(path: &Path, hash: &str, header: &[&str], rows: &[Vec<f64>]) -> CliResult<()> {
    let mut s = comment_line(hash);
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| num(*v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, s)?;
    Ok(())
}

fn write_json(path: &Path, value: &serde_json::Value) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut s = serde_json::to_string_pretty(value).expect("serialisable report");
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

/// Reads numeric columns by name, skipping `#` comment lines.
fn read_columns(path: &Path, names: &[&str]) -> CliResult<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let headers = rdr.headers()?.clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            headers
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| CliError::config(format!("{}: missing column {n}", path.display())))
        })
        .collect::<CliResult<_>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        for (c, &i) in idx.iter().enumerate() {
            let cell = rec.get(i).unwrap_or("");
            let v: f64 = cell
                .parse()
                .map_err(|_| CliError::config(format!("{}: row {}: bad number {cell:?}", path.display(), line + 1)))?;
            cols[c].push(v);
        }
    }
    Ok(cols)
}

/// Material from either a bare material object or a case config.
fn load_material(cfg: &Loaded) -> CliResult<ValidatedMaterial> {
    let v: serde_json::Value = cfg.parse()?;
    let m = v.get("material").cloned().unwrap_or(v);
    let c: ElasticConstants = serde_json::from_value(m).map_err(|e| CliError::config(format!("parse error: {e}")))?;
    Ok(validate_constants(c)?)
}

/// Everything derived from a case config.
struct Case {
    material: ValidatedMaterial,
    cd: CharacteristicData,
    contour: Contour,
    config: CaseConfig,
}

fn check_nodes(n: usize) -> CliResult<()> {
    if n < MIN_NODES || !n.is_multiple_of(2) {
        return Err(CliError::config(format!(
            "N = {n}: need an even node count ≥ {MIN_NODES}"
        )));
    }
    Ok(())
}

fn load_case(cfg: &Loaded) -> CliResult<Case> {
    let config: CaseConfig = cfg.parse()?;
    check_nodes(config.n)?;
    if let DataSource::Csv { path } = &config.data {
        let p = cfg.resolve(path);
        if !p.is_file() {
            return Err(CliError::config(format!("data file {} does not exist", p.display())));
        }
    }
    let material = validate_constants(config.material)?;
    let cd = characteristic_data(&material)?;
    let contour = Contour::from_spec(&config.contour)?;
    Ok(Case {
        material,
        cd,
        contour,
        config,
    })
}

impl Case {
    fn manufactured(&self) -> CliResult<Option<ManufacturedCase>> {
        match self.config.data {
            DataSource::Manufactured { pole, coeffs } => Ok(Some(manufactured_case(
                (pole[0], pole[1]),
                coeffs,
                &self.contour,
                &self.cd,
            )?)),
            DataSource::Csv { .. } => Ok(None),
        }
    }

    fn boundary_data(&self, cfg: &Loaded, sys: &BieSystem) -> CliResult<(Vec<f64>, Vec<f64>)> {
        match &self.config.data {
            DataSource::Manufactured { .. } => {
                let m = self.manufactured()?.expect("manufactured source");
                Ok(m.boundary_data(&sys.grid)?)
            }
            DataSource::Csv { path } => {
                let mut cols = read_columns(&cfg.resolve(path), &["g1", "g2"])?;
                if cols[0].len() != sys.n() {
                    return Err(CliError::config(format!(
                        "data file has {} rows, expected N = {}",
                        cols[0].len(),
                        sys.n()
                    )));
                }
                let g2 = cols.pop().expect("two columns");
                let g1 = cols.pop().expect("two columns");
                Ok((g1, g2))
            }
        }
    }

    fn solve_at(&self, cfg: &Loaded, n: usize) -> CliResult<(BieSystem, DensityPair, f64)> {
        let sys = assemble_with(&self.contour, &self.cd, n, self.config.formulation)?;
        let (g1, g2) = self.boundary_data(cfg, &sys)?;
        let h = bie::solve(&sys, &g1, &g2)?;
        let res = bie::residual(&sys, &h, &g1, &g2);
        Ok((sys, h, res))
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(CliError::config("--threads must be positive"));
        }
        // a pool built by an earlier call in the same process is kept
        if rayon::ThreadPoolBuilder::new().num_threads(k).build_global().is_err() {
            log::debug!("global thread pool already initialised");
        }
    }
    match &cli.command {
        Command::Roots => cmd_roots(cli),
        Command::Solve => cmd_solve(cli),
        Command::Eval(a) => cmd_eval(cli, a),
        Command::Verify => cmd_verify(cli),
        Command::Halfplane(a) => cmd_halfplane(cli, a),
        Command::KernelTable(a) => cmd_kernel_table(cli, a),
    }
}

fn out_path(cli: &Cli, chosen: &Option<PathBuf>, default: &str) -> PathBuf {
    cli.out.join(chosen.as_deref().unwrap_or(Path::new(default)))
}

fn cmd_roots(cli: &Cli) -> CliResult<()> {
    let cfg = Loaded::read(cli.config.as_deref())?;
    let cd = characteristic_data(&load_material(&cfg)?)?;
    let v = json!({
        "lambda1": cd.lambda1,
        "lambda2": cd.lambda2,
        "k1": cd.k1,
        "k2": cd.k2,
        "delta": cd.delta,
    });
    println!("{}", serde_json::to_string_pretty(&v).expect("serialisable roots"));
    Ok(())
}

fn cmd_solve(cli: &Cli) -> CliResult<()> {
    let cfg = Loaded::read(cli.config.as_deref())?;
    let case = load_case(&cfg)?;
    let t0 = Instant::now();
    let (sys, h, res) = case.solve_at(&cfg, case.config.n)?;
    let cond = sys.condition_number();
    let wall = t0.elapsed().as_secs_f64();
    let hash = cfg.hash();
    let rows: Vec<Vec<f64>> = sys
        .grid
        .nodes
        .iter()
        .enumerate()
        .map(|(j, nd)| vec![nd.s, nd.r, nd.z, h.h1[j], h.h2[j]])
        .collect();
    let dens_path = out_path(cli, &case.config.outputs.densities, "densities.csv");
    write_table(&dens_path, &hash, &["s", "r", "z", "h1", "h2"], &rows)?;
    let report = json!({
        "version": VERSION,
        "config_sha256": hash,
        "N": sys.n(),
        "formulation": case.config.formulation,
        "condition": cond,
        "residual": res,
        "max_density": h.max_abs(),
        "wall_time_s": wall,
    });
    write_json(&out_path(cli, &case.config.outputs.report, "report.json"), &report)?;
    log::info!("N = {}, condition {cond:.3e}, residual {res:.3e}, {wall:.2} s", sys.n());
    Ok(())
}

fn cmd_eval(cli: &Cli, args: &EvalArgs) -> CliResult<()> {
    let cfg = Loaded::read(cli.config.as_deref())?;
    let case = load_case(&cfg)?;
    let cols = read_columns(&args.probes, &["r", "z"])?;
    let pts: Vec<(f64, f64)> = cols[0].iter().copied().zip(cols[1].iter().copied()).collect();
    let (sys, h, _) = case.solve_at(&cfg, case.config.n)?;
    let path = out_path(cli, &case.config.outputs.field, "field.csv");
    let hash = cfg.hash();
    if args.stress {
        let rows = pts
            .iter()
            .map(|&(r, z)| {
                let s = field::stress(&sys.grid, &h, &case.material, r, z)?;
                let st = s.stress.expect("stress requested");
                Ok(vec![r, z, s.u_r, s.u_z, st.rr, st.hoop, st.rz, st.zz])
            })
            .collect::<crate::Result<Vec<_>>>()?;
        let header = [
            "r",
            "z",
            "u_r",
            "u_z",
            "sigma_rr",
            "sigma_phiphi",
            "sigma_rz",
            "sigma_zz",
        ];
        write_table(&path, &hash, &header, &rows)
    } else {
        let rows: Vec<Vec<f64>> = field::displacements(&sys.grid, &h, &pts)?
            .into_iter()
            .map(|s| vec![s.r, s.z, s.u_r, s.u_z])
            .collect();
        write_table(&path, &hash, &["r", "z", "u_r", "u_z"], &rows)
    }
}

/// Interior probes: the configured ones, or seeded random points set back from the boundary.
fn verify_probes(case: &Case, seed: u64) -> CliResult<Vec<(f64, f64)>> {
    if let Some(p) = &case.config.probes {
        return Ok(p.iter().map(|q| (q[0], q[1])).collect());
    }
    let c = &case.contour;
    let scale = c.scale();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::new();
    for _ in 0..10_000 {
        if pts.len() == 10 {
            break;
        }
        let s = rng.random_range(0.0..c.period());
        let f = crate::geometry::frame(c, s)?;
        let p = c.eval(s);
        let depth = rng.random_range(0.2..0.6) * scale;
        let (r, z) = (p.r + depth * f.normal[0], p.z + depth * f.normal[1]);
        if c.contains(r, z) && c.distance(r, z) >= 0.15 * scale {
            pts.push((r, z));
        }
    }
    if pts.is_empty() {
        return Err(CliError {
            code: 2,
            message: "could not place interior probes".into(),
        });
    }
    Ok(pts)
}

/// Observed order `log(e_coarse/e_fine)/log(N_fine/N_coarse)`.
pub fn observed_order(n_coarse: usize, e_coarse: f64, n_fine: usize, e_fine: f64) -> f64 {
    (e_coarse / e_fine).ln() / (n_fine as f64 / n_coarse as f64).ln()
}

fn cmd_verify(cli: &Cli) -> CliResult<()> {
    let cfg = Loaded::read(cli.config.as_deref())?;
    let case = load_case(&cfg)?;
    let m = case
        .manufactured()?
        .ok_or_else(|| CliError::config("verify needs a manufactured data source"))?;
    let probes = verify_probes(&case, cli.seed)?;
    let exact: Vec<_> = probes
        .iter()
        .map(|&(r, z)| m.exact(r, z))
        .collect::<crate::Result<_>>()?;
    let n = case.config.n;
    let ladder: Vec<usize> = [n / 4, n / 2, n]
        .into_iter()
        .filter(|&k| k >= MIN_NODES && k.is_multiple_of(2))
        .collect();
    let mut levels = Vec::new();
    let mut errors = Vec::new();
    let mut finest = None;
    for &k in &ladder {
        let (sys, h, res) = case.solve_at(&cfg, k)?;
        let mut e = 0.0f64;
        for (&(r, z), x) in probes.iter().zip(&exact) {
            let u = field::displacement_with(&sys.grid, &h, case.config.formulation, r, z)?;
            e = e.max((u.u_r - x.u_r).hypot(u.u_z - x.u_z) / x.u_r.hypot(x.u_z));
        }
        levels.push(json!({ "N": k, "max_rel_error": e, "residual": res }));
        errors.push(e);
        finest = Some((sys, h));
    }
    let (sys, h) = finest.expect("at least one level");
    let order = (ladder.len() >= 2).then(|| {
        let last = ladder.len() - 1;
        observed_order(ladder[0], errors[0], ladder[last], errors[last])
    });
    let jump_nodes: Vec<usize> = (0..8).map(|i| i * sys.n() / 8).collect();
    let mut jumps = Vec::new();
    for &i in &jump_nodes {
        jumps.push(bie::jump_check(&sys, &h, i)?.jump_error);
    }
    let jump_max = jumps.iter().fold(0.0f64, |a, b| a.max(*b));
    let e_fine = *errors.last().expect("at least one level");
    let mut failures = Vec::new();
    if !(e_fine <= VERIFY_INTERIOR_TOL) {
        failures.push(format!("interior error {e_fine:.3e} > {VERIFY_INTERIOR_TOL:e}"));
    }
    match order {
        Some(p) if p >= VERIFY_MIN_ORDER || e_fine == 0.0 => {}
        Some(p) => failures.push(format!("observed order {p:.2} < {VERIFY_MIN_ORDER}")),
        None => failures.push("convergence ladder too short to estimate an order".into()),
    }
    if !(jump_max <= VERIFY_JUMP_TOL) {
        failures.push(format!("jump error {jump_max:.3e} > {VERIFY_JUMP_TOL:e}"));
    }
    let report = json!({
        "version": VERSION,
        "config_sha256": cfg.hash(),
        "probes": probes.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>(),
        "levels": levels,
        "observed_order": order,
        "jump": { "nodes": jump_nodes, "errors": jumps, "max": jump_max },
        "tolerances": {
            "interior": VERIFY_INTERIOR_TOL,
            "jump": VERIFY_JUMP_TOL,
            "order": VERIFY_MIN_ORDER,
        },
        "pass": failures.is_empty(),
        "failures": failures,
    });
    write_json(&out_path(cli, &case.config.outputs.report, "verify.json"), &report)?;
    let mut table = String::from("N      max_rel_error\n");
    for (k, e) in ladder.iter().zip(&errors) {
        let _ = writeln!(table, "{k:<6} {e:.3e}");
    }
    if failures.is_empty() {
        print!("{table}");
        println!("verification passed");
        Ok(())
    } else {
        eprint!("{table}");
        Err(CliError {
            code: 3,
            message: format!("verification failed: {}", failures.join("; ")),
        })
    }
}

fn cmd_halfplane(cli: &Cli, args: &HalfplaneArgs) -> CliResult<()> {
    let cfg = Loaded::read(cli.config.as_deref())?;
    let cd = characteristic_data(&load_material(&cfg)?)?;
    if args.nr < 2 || !(args.r_max > 0.0) {
        return Err(CliError::config("need --nr ≥ 2 and --r-max > 0"));
    }
    if args.z.iter().any(|z| !(*z >= 0.0)) {
        return Err(CliError::config("output depths must be ≥ 0"));
    }
    let mut cols = read_columns(&args.profile, &["r", "f1", "f2"])?;
    let f2 = cols.pop().expect("three columns");
    let f1 = cols.pop().expect("three columns");
    let r = cols.pop().expect("three columns");
    let bd = BoundaryData::from_samples(r, f1, f2)?;
    let sol = halfplane_solve(&bd, &cd, &HankelConfig::default())?;
    let mut rows = Vec::new();
    for &z in &args.z {
        for i in 0..args.nr {
            let r = args.r_max * i as f64 / (args.nr - 1) as f64;
            let (ur, uz) = if z == 0.0 {
                sol.boundary_limit(r, 0.005)
            } else {
                sol.displacement(r, z)
            };
            rows.push(vec![r, z, ur, uz]);
        }
    }
    write_table(
        &cli.out.join("halfplane.csv"),
        &cfg.hash(),
        &["r", "z", "u_r", "u_z"],
        &rows,
    )
}

fn cmd_kernel_table(cli: &Cli, args: &KernelTableArgs) -> CliResult<()> {
    let (pts, hash) = match &args.points {
        Some(p) => {
            let c = read_columns(p, &["r", "z", "a", "zeta"])?;
            let bytes = fs::read(p)?;
            let pts: Vec<[f64; 4]> = (0..c[0].len()).map(|i| [c[0][i], c[1][i], c[2][i], c[3][i]]).collect();
            (pts, hex::encode(Sha256::digest(&bytes)))
        }
        None => {
            if args.at.is_empty() {
                return Err(CliError::config("give --points FILE or at least one --at r,z,a,zeta"));
            }
            if !args.at.len().is_multiple_of(4) {
                return Err(CliError::config("--at takes four comma-separated values r,z,a,zeta"));
            }
            let pts: Vec<[f64; 4]> = args.at.chunks_exact(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
            let text: Vec<String> = pts.iter().map(|p| p.map(num).join(",")).collect();
            (pts, hex::encode(Sha256::digest(text.join(";").as_bytes())))
        }
    };
    let rows = pts
        .iter()
        .map(|&[r, z, a, zeta]| {
            let j = ring_jets(FieldPoint::new(r, z), RingPole::new(a, zeta))?;
            Ok(vec![r, z, a, zeta, j.w0.v, j.w1.v, j.w0.r, j.w0.z])
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let header = ["r", "z", "a", "zeta", "w0", "w1", "dw0_dr", "dw0_dz"];
    write_table(&cli.out.join("kernel_table.csv"), &hash, &header, &rows)
}
