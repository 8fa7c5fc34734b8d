use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use discplan::free_space::FreeSpace;
use discplan::planner::{check_with, plan_statistics, solve, FeasibilityReport, PlanError, Verdict};
use discplan::validator::{validate, ValidationReport, EPS_VAL};
use discplan_cli::gen::{generate, GenKind, GenParams};
use discplan_cli::io::{load_plan, load_scene, write_json, PlanFile, SceneFile};
use discplan_cli::render::render_svg;
use serde_json::json;

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_INVALID_PLAN: u8 = 3;

#[derive(Parser)]
#[command(name = "discplan", version, about = "Motion planning for unlabeled unit-disc robots in a simple polygon")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a scene meets the planner's preconditions.
    Check { scene: PathBuf },
    /// Plan a scene and write the plan file.
    Solve {
        scene: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Check the plan with the independent validator.
        #[arg(long)]
        validate: bool,
        /// Print move count, path length and piece count.
        #[arg(long)]
        stats: bool,
    },
    /// Draw a scene, and optionally a plan, as SVG.
    Render {
        scene: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate a scene file.
    Gen {
        /// random, corridor, dumbbell, path-worstcase or pinched
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Target vertex count for random polygons.
        #[arg(long, default_value_t = 40)]
        n: usize,
        /// Number of robots.
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Start separation minus 2 for the corridor scene.
        #[arg(long)]
        rho: Option<f64>,
        /// Corridor width for the corridor and dumbbell scenes.
        #[arg(long)]
        width: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn report_json(r: &FeasibilityReport) -> serde_json::Value {
    json!({
        "verdict": r.verdict.to_string(),
        "components": r.components.iter().map(|c| json!({
            "id": c.id, "starts": c.starts, "targets": c.targets,
        })).collect::<Vec<_>>(),
        "separation_ok": r.separation_ok,
        "min_separation": r.min_separation,
        "outside": r.outside.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "on_boundary": r.on_boundary.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
    })
}

fn validation_json(r: &ValidationReport) -> serde_json::Value {
    json!({
        "valid": r.is_valid(),
        "min_obstacle_clearance": r.min_obstacle_clearance,
        "min_robot_clearance": r.min_robot_clearance,
        "max_sample_gap": r.max_sample_gap,
        "boundary_configs": r.boundary_configs.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "violations": r.violations.iter().map(|v| json!({
            "move_index": v.move_index, "kind": v.kind.to_string(), "worst_value": v.worst_value,
        })).collect::<Vec<_>>(),
    })
}

/// Prints to stdout, ignoring a reader that went away.
fn say(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_json(v: &serde_json::Value) {
    say(&serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn cmd_check(path: &Path) -> Result<u8> {
    let (_, scene) = load_scene(path)?;
    let fs = FreeSpace::compute(&scene.polygon).context("computing free space")?;
    let report = check_with(&fs, &scene);
    print_json(&report_json(&report));
    Ok(if report.verdict == Verdict::Feasible { 0 } else { EXIT_INFEASIBLE })
}

fn cmd_solve(path: &Path, out: &Path, check: bool, stats: bool) -> Result<u8> {
    let (_, scene) = load_scene(path)?;
    let plan = match solve(&scene) {
        Ok(plan) => plan,
        Err(PlanError::Infeasible(report)) => {
            eprintln!("scene is infeasible: {}", report.verdict);
            print_json(&report_json(&report));
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e.into()),
    };
    write_json(out, &PlanFile::from_plan(&plan))?;
    if stats {
        let s = plan_statistics(&plan);
        say(&format!(
            "moves {}  path length {:.6}  pieces {}",
            s.move_count, s.total_path_length, s.piece_count
        ));
    }
    if check {
        let report = validate(&scene, &plan, EPS_VAL)?;
        print_json(&validation_json(&report));
        if !report.is_valid() {
            eprintln!("plan failed validation with {} violations", report.violations.len());
            return Ok(EXIT_INVALID_PLAN);
        }
    }
    Ok(0)
}

fn cmd_render(scene_path: &Path, plan_path: Option<&Path>, out: &Path) -> Result<u8> {
    let (_, scene) = load_scene(scene_path)?;
    let plan = plan_path.map(load_plan).transpose()?;
    // A scene whose free space cannot be built is still drawn.
    let fs = FreeSpace::compute(&scene.polygon).ok();
    let svg = render_svg(&scene, fs.as_ref(), plan.as_ref());
    std::fs::write(out, svg).with_context(|| format!("writing {}", out.display()))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { scene } => cmd_check(&scene),
        Command::Solve {
            scene,
            output,
            validate,
            stats,
        } => cmd_solve(&scene, &output, validate, stats),
        Command::Render { scene, plan, output } => cmd_render(&scene, plan.as_deref(), &output),
        Command::Gen {
            kind,
            seed,
            n,
            m,
            rho,
            width,
            output,
        } => {
            let defaults = GenParams::default();
            let params = GenParams {
                seed,
                n,
                m,
                rho: rho.unwrap_or(defaults.rho),
                width,
            };
            let g = generate(kind, &params)?;
            for w in &g.warnings {
                eprintln!("warning: {w}");
            }
            let seed = (kind == GenKind::Random).then_some(seed);
            write_json(&output, &SceneFile::from_scene(&g.scene, Some(g.name), seed))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
