//! `m4d`: build, verify and export Minkowski quaternionic point sets.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use m4d_core::gallery;
use m4d_core::obj::write_obj;
use m4d_core::projection::{PerspectiveConfig, ProjectionMode, Rotor4};
use m4d_core::quat::Quaternion;
use m4d_core::scene::{self, default_resolutions, Scene, SceneError};
use m4d_core::tessellate::{project_grid, sample};
use m4d_core::verify::{self, CheckOutcome};

/// Rotor quaternions may deviate this much from unit length before they are
/// rejected; within it they are normalized.
const ROTOR_FLAG_TOLERANCE: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "m4d",
    version,
    about = "Minkowski quaternionic point sets in R^4"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and compile a scene file, reporting the first error.
    Check { file: PathBuf },
    /// Sample, project and write OBJ meshes.
    Build {
        /// Scene file or gallery id.
        input: String,
        /// Resolutions, e.g. `64,64`; a single value applies to every axis.
        #[arg(long, value_delimiter = ',')]
        res: Vec<usize>,
        /// `dop`, `persp` or `ortho:<axes>` (e.g. `ortho:xy`, `ortho:xyz`).
        #[arg(long)]
        project: Option<String>,
        /// Focal distance for the perspective.
        #[arg(long)]
        d: Option<f64>,
        /// Left and right rotor quaternions: `l0,l1,l2,l3,r0,r1,r2,r3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rotor: Option<Vec<f64>>,
        /// Build only these sets (default: sets not used as operands).
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(short = 'o', long = "out", default_value = ".")]
        out: PathBuf,
    },
    /// Run verification checks on a gallery entry, `all`, or a scene JSON.
    Verify {
        target: String,
        #[arg(long)]
        json: bool,
    },
    /// Write the scene JSON (schema v1).
    ExportScene {
        input: String,
        out: PathBuf,
        /// Also write `<stem>.fixtures.json` with reference evaluations.
        #[arg(long)]
        with_fixtures: bool,
    },
    /// List or export gallery sources.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    List,
    /// Write the DSL source of an entry to `<dir>/<id>.m4d`.
    Export {
        id: String,
        #[arg(short = 'o', long = "out", default_value = ".")]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Scene(String),
    Verify,
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Scene(_) => 2,
            Failure::Verify => 3,
            Failure::Io(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Scene(m) | Failure::Io(m) => f.write_str(m),
            Failure::Verify => f.write_str("verification failed"),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// A scene file or gallery entry with a name for output files.
struct Loaded {
    stem: String,
    scene: Scene,
}

fn scene_failure(origin: &str, e: SceneError) -> Failure {
    Failure::Scene(format!("{origin}:{e}"))
}

fn load(input: &str) -> Result<Loaded, Failure> {
    let path = Path::new(input);
    if path.is_file() {
        let text = read(path)?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scene".into());
        let scene = if path.extension().is_some_and(|e| e == "json") {
            scene::from_json(&text)
        } else {
            scene::compile_source(&text)
        }
        .map_err(|e| scene_failure(input, e))?;
        return Ok(Loaded { stem, scene });
    }
    match gallery::get(input) {
        Ok(entry) => Ok(Loaded {
            stem: entry.id.to_string(),
            scene: entry.scene().map_err(|e| Failure::Scene(e.to_string()))?,
        }),
        Err(_) => Err(Failure::Io(format!(
            "{input}: no such file or gallery entry"
        ))),
    }
}

fn cmd_check(file: &Path) -> Result<(), Failure> {
    let origin = file.display().to_string();
    let scene = scene::compile_source(&read(file)?).map_err(|e| scene_failure(&origin, e))?;
    println!("{origin}: ok, {} sets", scene.sets.len());
    Ok(())
}

fn parse_rotor(v: &[f64]) -> Result<Rotor4, Failure> {
    if v.len() != 8 {
        return Err(Failure::Usage(format!(
            "--rotor needs 8 values, got {}",
            v.len()
        )));
    }
    let q = |s: &[f64]| {
        Quaternion::new(s[0], s[1], s[2], s[3]).map_err(|e| Failure::Usage(format!("--rotor: {e}")))
    };
    Rotor4::normalized(q(&v[..4])?, q(&v[4..])?, ROTOR_FLAG_TOLERANCE)
        .map_err(|e| Failure::Usage(format!("--rotor: {e}")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_build(
    input: &str,
    res: &[usize],
    project: Option<&str>,
    d: Option<f64>,
    rotor: Option<&[f64]>,
    only: &[String],
    out: &Path,
) -> Result<(), Failure> {
    let Loaded { stem, scene } = load(input)?;
    let focal = d.unwrap_or(scene.focal_distance);
    let mode = match project {
        Some(p) => ProjectionMode::parse(p, focal).map_err(|e| Failure::Usage(e.to_string()))?,
        None => match scene.projection {
            ProjectionMode::Perspective(_) => ProjectionMode::Perspective(
                PerspectiveConfig::new(focal).map_err(|e| Failure::Usage(e.to_string()))?,
            ),
            ref m => m.clone(),
        },
    };
    if let Some(&r) = res.iter().find(|&&r| r < 2) {
        return Err(Failure::Usage(format!(
            "--res values must be at least 2, got {r}"
        )));
    }
    let rotor = rotor.map(parse_rotor).transpose()?;
    let sets = if only.is_empty() {
        scene.top_level()
    } else {
        only.iter()
            .map(|n| scene.set(n))
            .collect::<Result<_, _>>()
            .map_err(|e| scene_failure(input, e))?
    };
    let mut images: Vec<Vec<m4d_core::Mesh3>> = Vec::new();
    for s in sets {
        let dim = s.dimension();
        let r = match res.len() {
            0 => default_resolutions(dim),
            1 => vec![res[0]; dim],
            n if n == dim => res.to_vec(),
            _ => default_resolutions(dim),
        };
        let g = sample(s, &r)
            .map_err(|e| Failure::Scene(format!("{input}: set `{}`: {e}", s.name())))?;
        for (k, mesh) in project_grid(&g, &mode, rotor.as_ref())
            .into_iter()
            .enumerate()
        {
            if images.len() <= k {
                images.push(Vec::new());
            }
            images[k].push(mesh);
        }
    }
    let suffixes: Vec<String> = match &mode {
        ProjectionMode::Dop => vec!["z".into(), "w".into()],
        ProjectionMode::Perspective(_) => vec!["persp".into()],
        ProjectionMode::Ortho(t) => vec![format!("ortho-{}", t.label())],
    };
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    for (meshes, suffix) in images.iter().zip(&suffixes) {
        let path = out.join(format!("{stem}.{suffix}.obj"));
        write(&path, &write_obj(meshes))?;
        let vertices: usize = meshes.iter().map(|m| m.vertices.len()).sum();
        println!("{} ({vertices} vertices)", path.display());
    }
    Ok(())
}

fn print_outcome(c: &CheckOutcome) {
    let status = if c.ok { "ok  " } else { "FAIL" };
    let detail = match (&c.report, &c.error) {
        (Some(r), _) => format!("residual {:.3e} (tol {:e})", r.max_residual, r.tolerance),
        (None, Some(e)) => e.clone(),
        _ => String::new(),
    };
    println!(
        "{status} {:<42} expect {:<10} {detail}",
        c.check_id,
        format!("{:?}", c.expect).to_lowercase()
    );
}

fn cmd_verify(target: &str, json: bool) -> Result<(), Failure> {
    let results = if target == "all" {
        verify::run_all().map_err(|e| Failure::Scene(e.to_string()))?
    } else {
        let Loaded { stem, scene } = load(target)?;
        let checks = verify::run_scene(&scene);
        vec![verify::EntryResult {
            entry: stem,
            ok: checks.iter().all(|c| c.ok),
            checks,
        }]
    };
    let ok = results.iter().all(|r| r.ok);
    if json {
        let doc = serde_json::json!({ "ok": ok, "entries": results });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        );
    } else {
        for r in &results {
            println!("{} [{}]", r.entry, if r.ok { "pass" } else { "FAIL" });
            r.checks.iter().for_each(print_outcome);
        }
        let passed = results.iter().filter(|r| r.ok).count();
        println!("{passed}/{} entries pass", results.len());
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn cmd_export_scene(input: &str, out: &Path, with_fixtures: bool) -> Result<(), Failure> {
    let Loaded { scene, .. } = load(input)?;
    let text = scene::to_json(&scene).map_err(|e| scene_failure(input, e))?;
    write(out, &text)?;
    println!("{}", out.display());
    if with_fixtures {
        let stem = out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let path = out.with_file_name(format!("{stem}.fixtures.json"));
        write(
            &path,
            &scene::fixtures_json(&scene).map_err(|e| scene_failure(input, e))?,
        )?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_gallery(action: &GalleryAction) -> Result<(), Failure> {
    match action {
        GalleryAction::List => {
            for e in gallery::ENTRIES {
                println!("{:<18} {}", e.id, e.caption);
            }
            Ok(())
        }
        GalleryAction::Export { id, out } => {
            let entry = gallery::get(id).map_err(|e| Failure::Usage(e.to_string()))?;
            fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
            let path = out.join(format!("{}.m4d", entry.id));
            write(&path, entry.source)?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Check { file } => cmd_check(file),
        Command::Build {
            input,
            res,
            project,
            d,
            rotor,
            sets,
            out,
        } => cmd_build(
            input,
            res,
            project.as_deref(),
            *d,
            rotor.as_deref(),
            sets,
            out,
        ),
        Command::Verify { target, json } => cmd_verify(target, *json),
        Command::ExportScene {
            input,
            out,
            with_fixtures,
        } => cmd_export_scene(input, out, *with_fixtures),
        Command::Gallery { action } => cmd_gallery(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(3),
        Err(f) => {
            eprintln!("m4d: {f}");
            ExitCode::from(f.code())
        }
    }
}
