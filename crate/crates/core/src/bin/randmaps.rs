use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use randmaps::continuum::{metric_sample, read_snake_csv, sample_snake, write_metric_binary, write_snake_csv};
use randmaps::dmgb::{build_dmgb, write_boundary_sidecar};
use randmaps::experiments::{
    emit_report, run_experiment, run_verify, sample_q_angulation, ExperimentConfig, ExperimentRecord,
};
use randmaps::maps::{read_edge_list, read_map_binary, write_edge_list, write_map_binary, PlanarMap, MAP_MAGIC};
use randmaps::rng::from_seed;
use randmaps::trees::{contour_and_labels, sample_labeled_ptree, write_contour};
use randmaps::tri::{
    sample_admissible_tlabels, sample_uniform_ttree, ttree_to_triangulation, verify_tri_constants, RootType,
};
use randmaps::{Error, Result};

#[derive(Parser)]
#[command(name = "randmaps", version, about = "Uniform random planar maps and their scaling limits")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapFormat {
    /// `V E F p n` header, one `u v` line per edge, then `root u v` and `point w`.
    Edges,
    /// RMMP permutation arrays.
    Binary,
}

#[derive(Clone, Copy, ValueEnum)]
enum TriClass {
    Pos,
    Null,
}

#[derive(Subcommand)]
enum Cmd {
    /// Uniform labeled p-tree with n black vertices, as an RMLT contour file.
    SampleTree {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Uniform rooted pointed q-angulation with n faces.
    SampleMap {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "edges")]
        format: MapFormat,
    },
    /// Structural checks on a stored map (either format).
    VerifyMap {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// 2p-angulation cut along its root geodesic, plus a `.boundary` sidecar.
    BuildDmgb {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "edges")]
        format: MapFormat,
    },
    /// Uniform triangulation with n vertices from the positive or null class.
    SampleTri {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "pos")]
        class: TriClass,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "edges")]
        format: MapFormat,
    },
    /// Prints the scaling constants as JSON.
    TriConstants,
    /// Excursion and labels on an m-grid as CSV; optionally the metric matrices.
    SampleSnake {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the RMDM matrices of this grid here.
        #[arg(long)]
        metric: Option<PathBuf>,
    },
    /// Monte Carlo experiments.
    Experiment {
        #[command(subcommand)]
        action: ExperimentCmd,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Runs the configured experiment; reports go to <out>/<experiment>/<timestamp>/.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the `out` key of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs only the exact-identity suites.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn io_at(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::Format { path: path.to_path_buf(), reason: e.to_string() }
}

fn write_map(map: &PlanarMap, p: usize, n: usize, format: MapFormat, out: &Path) -> Result<()> {
    let mut w = create(out)?;
    match format {
        MapFormat::Edges => write_edge_list(map, p, n, &mut w),
        MapFormat::Binary => write_map_binary(map, p, n, &mut w),
    }
    .and_then(|_| w.flush())
    .map_err(io_at(out))
}

/// Structural problems of a stored map; empty when it is fine.
fn verify_map_file(path: &Path) -> Result<Vec<String>> {
    let mut bytes = Vec::new();
    File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(|e| Error::io(path, e))?;
    let mut problems = Vec::new();
    // a cut map carries one extra boundary face of degree 2δ
    let side = path.with_extension("boundary");
    let delta: Option<usize> = match std::fs::read_to_string(&side) {
        Ok(text) => Some(
            text.lines()
                .find_map(|l| l.strip_prefix("delta "))
                .and_then(|d| d.trim().parse().ok())
                .ok_or_else(|| Error::Format { path: side.clone(), reason: "missing delta line".into() })?,
        ),
        Err(_) => None,
    };
    let extra = delta.is_some() as usize;
    if bytes.starts_with(MAP_MAGIC) {
        let s = read_map_binary(&bytes[..])?;
        let m = &s.map;
        if let Err(e) = m.check_planar() {
            problems.push(e.to_string());
        }
        let want = if s.p == 0 { 3 } else { 2 * s.p };
        let mut degrees = m.face_degrees();
        if let Some(d) = delta {
            match degrees.iter().position(|&x| x == 2 * d) {
                Some(i) => {
                    degrees.swap_remove(i);
                }
                None => problems.push(format!("no boundary face of degree {}", 2 * d)),
            }
        }
        let off = degrees.iter().filter(|&&d| d != want).count();
        if off > 0 {
            problems.push(format!("{off} faces of degree other than {want}"));
        }
        if m.euler_characteristic() != 2 {
            problems.push(format!("Euler characteristic {}", m.euler_characteristic()));
        }
        let faces = if s.p == 0 { 2 * (s.n - 2) } else { s.n } + extra;
        if m.face_count() != faces {
            problems.push(format!("{} faces, header says {faces}", m.face_count()));
        }
        println!("binary map: V={} E={} F={} p={} n={}", m.vertex_count(), m.edge_count(), m.face_count(), s.p, s.n);
    } else {
        let el = read_edge_list(&bytes[..]).map_err(|e| match e {
            Error::Format { reason, .. } => Error::Format { path: path.to_path_buf(), reason },
            other => other,
        })?;
        if el.edges.len() != el.e {
            problems.push("edge count differs from header".into());
        }
        if el.v as i64 - el.e as i64 + el.f as i64 != 2 {
            problems.push(format!("V − E + F = {}", el.v as i64 - el.e as i64 + el.f as i64));
        }
        let (q, faces) = if el.p == 0 { (3, 2 * el.n.saturating_sub(2)) } else { (2 * el.p, el.n) };
        let boundary = delta.map_or(0, |d| 2 * d);
        if el.f != faces + extra || q * faces + boundary != 2 * el.e {
            problems.push(format!("face count {} inconsistent with q = {q}, n = {}", el.f, el.n));
        }
        // connectivity and the root edge
        let mut adj = vec![Vec::new(); el.v];
        for &(a, b) in &el.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let mut seen = vec![false; el.v];
        let mut stack = vec![el.root.0];
        seen[el.root.0 as usize] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            problems.push("map is disconnected".into());
        }
        if !adj[el.root.0 as usize].contains(&el.root.1) {
            problems.push("root is not an edge".into());
        }
        if el.point as usize >= el.v {
            problems.push("pointed vertex out of range".into());
        }
        println!("edge list: V={} E={} F={} p={} n={}", el.v, el.e, el.f, el.p, el.n);
    }
    Ok(problems)
}

fn print_checks(rec: &ExperimentRecord) {
    for c in &rec.checks {
        let bound = match (c.lower, c.upper) {
            (Some(l), Some(u)) => format!("in [{l}, {u}]"),
            (None, Some(u)) if c.exact => format!("= {u}"),
            (None, Some(u)) => format!("< {u}"),
            (Some(l), None) => format!("> {l}"),
            (None, None) => String::new(),
        };
        println!("{} {}: {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, bound);
    }
    for p in &rec.partial {
        println!("PARTIAL {p}");
    }
}

fn run_and_report(config: &Path, out: Option<PathBuf>, verify: bool) -> Result<bool> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(o) = out {
        cfg.out = o;
    }
    let started = Instant::now();
    let rec = if verify { run_verify(&cfg)? } else { run_experiment(&cfg)? };
    let seconds = started.elapsed().as_secs_f64();
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%SZ").to_string();
    let dir = cfg.out.join(&rec.experiment).join(stamp);
    let written = emit_report(std::slice::from_ref(&rec), &dir)?;
    // wall-clock lives in a sidecar so the reports stay byte-identical
    let timing = dir.join("timing.json");
    let body = serde_json::json!({ "experiment": rec.experiment, "seconds": seconds, "threads": rayon::current_num_threads() });
    std::fs::write(&timing, format!("{body}\n")).map_err(|e| Error::io(&timing, e))?;
    print_checks(&rec);
    println!("wrote {} files to {} in {seconds:.1} s", written.len() + 1, dir.display());
    Ok(if verify { rec.exact_violations() == 0.0 && rec.partial.is_empty() } else { rec.passed() })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::SampleTree { p, n, seed, out } => {
            let theta = sample_labeled_ptree(p, n, &mut from_seed(seed))?;
            let mut w = create(&out)?;
            write_contour(&contour_and_labels(&theta), &mut w).and_then(|_| w.flush()).map_err(io_at(&out))?;
            println!("p-tree: p={p} n={n} vertices={} min label={}", theta.tree().len(), theta.min_label());
        }
        Cmd::SampleMap { q, n, seed, out, format } => {
            let s = sample_q_angulation(q, n, &mut from_seed(seed))?;
            let (p, size) = if q == 3 { (0, s.map.vertex_count()) } else { (q as usize / 2, n) };
            write_map(&s.map, p, size, format, &out)?;
            println!("q={q}: V={} E={} F={}", s.map.vertex_count(), s.map.edge_count(), s.map.face_count());
        }
        Cmd::VerifyMap { input } => {
            let problems = verify_map_file(&input)?;
            for p in &problems {
                println!("violation: {p}");
            }
            println!("{}", if problems.is_empty() { "ok" } else { "FAILED" });
            return Ok(problems.is_empty());
        }
        Cmd::BuildDmgb { p, n, seed, out, format } => {
            let mut rng = from_seed(seed);
            let theta = sample_labeled_ptree(p, n, &mut rng)?;
            let d = build_dmgb(&theta, 1)?;
            write_map(&d.map, p, n, format, &out)?;
            let side = out.with_extension("boundary");
            let mut w = create(&side)?;
            write_boundary_sidecar(&d, &mut w).and_then(|_| w.flush()).map_err(io_at(&side))?;
            println!("cut map: V={} E={} δ={}", d.map.vertex_count(), d.map.edge_count(), d.delta);
        }
        Cmd::SampleTri { n, class, seed, out, format } => {
            let mut rng = from_seed(seed);
            let root = match class {
                TriClass::Pos => RootType::One,
                TriClass::Null => RootType::Two,
            };
            let shape = sample_uniform_ttree(n, root, &mut rng)?;
            let t = ttree_to_triangulation(&sample_admissible_tlabels(shape, &mut rng))?;
            write_map(&t.map, 0, n, format, &out)?;
            println!("triangulation: V={} E={} F={}", t.map.vertex_count(), t.map.edge_count(), t.map.face_count());
        }
        Cmd::TriConstants => {
            println!("{}", serde_json::to_string_pretty(&verify_tri_constants())?);
        }
        Cmd::SampleSnake { m, seed, out, metric } => {
            let g = sample_snake(m, &mut from_seed(seed))?;
            let mut w = create(&out)?;
            write_snake_csv(&g, &mut w).and_then(|_| w.flush()).map_err(io_at(&out))?;
            let back = read_snake_csv(BufReader::new(File::open(&out).map_err(|e| Error::io(&out, e))?))?;
            if back.m != g.m {
                return Err(Error::Internal("snake CSV did not read back".into()));
            }
            if let Some(path) = metric {
                let ms = metric_sample(&g);
                let mut w = create(&path)?;
                write_metric_binary(&ms, &mut w).and_then(|_| w.flush()).map_err(io_at(&path))?;
            }
            println!("snake: m={m} Δ={} s*={}", g.delta, g.s_star);
        }
        Cmd::Experiment { action } => {
            return match action {
                ExperimentCmd::Run { config, out } => run_and_report(&config, out, false),
                ExperimentCmd::Verify { config, out } => run_and_report(&config, out, true),
            };
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
