//! The `doomsight` command line.
//!
//! Summaries go to stdout; diagnostics go to stderr. Domain errors exit
//! with status 1 and usage errors with status 2.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use doomsight_core::coco::{
    CategoryTable, EpisodeMap, ExportConfig, SplitMode, DEFAULT_FRAME_STRIDE, DEFAULT_MIN_AREA,
    DEFAULT_MIN_CATEGORY_IMAGES,
};
use doomsight_core::level::map_names;
use doomsight_core::render::RenderConfig;
use doomsight_core::session::parse_pose_script;
use doomsight_core::things::thing_info;
use doomsight_core::{load_level, WadArchive};

use crate::export::{build_datasets, load_manifest, write_datasets};
use crate::session::{run_session, SessionConfig};
use crate::validate::validate_dataset;
use crate::{io_err, Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "doomsight",
    version,
    about = "Render Doom maps into annotated frames and Coco datasets"
)]
pub struct Cli {
    /// Worker threads for rendering and extraction [default: available parallelism]
    #[arg(long, global = true, env = "DOOMSIGHT_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarize a WAD file, or one map in it
    Info(InfoArgs),
    /// Render a camera track into frame triples and an event log
    Render(RenderArgs),
    /// Build Coco instance files from rendered sessions
    ExportCoco(ExportArgs),
    /// Check a Coco instances file
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    pub wad: PathBuf,
    #[arg(long)]
    pub map: Option<String>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub wad: PathBuf,
    #[arg(long)]
    pub map: String,
    /// Pose script, one `tic x y z yaw` sample per line
    #[arg(long)]
    pub track: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = RenderConfig::default().width)]
    pub width: u32,
    #[arg(long, default_value_t = RenderConfig::default().height)]
    pub height: u32,
    /// Horizontal field of view in degrees
    #[arg(long, default_value_t = RenderConfig::default().hfov)]
    pub hfov: f64,
    /// Depth image counts per map unit
    #[arg(long, default_value_t = RenderConfig::default().depth_scale)]
    pub depth_scale: f64,
    /// Playthrough number of this session
    #[arg(long, default_value_t = 1)]
    pub run: u32,
    /// Render at full brightness
    #[arg(long)]
    pub no_light: bool,
    /// Thing type to category table, lines of `<type> <name>`
    #[arg(long)]
    pub categories: Option<PathBuf>,
    /// Map to episode table, lines of `<map> <episode>`
    #[arg(long)]
    pub episodes: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SplitArg {
    Run,
    Episode,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Lines of `run <n> <session_dir>`
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = SplitArg::Run)]
    pub split: SplitArg,
    /// Keep every n-th frame of each run and map
    #[arg(long, default_value_t = DEFAULT_FRAME_STRIDE, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub stride: usize,
    /// Drop instances with fewer pixels
    #[arg(long, default_value_t = DEFAULT_MIN_AREA)]
    pub min_area: u64,
    /// Drop categories present in fewer training images
    #[arg(long, default_value_t = DEFAULT_MIN_CATEGORY_IMAGES)]
    pub min_cat_images: usize,
    #[arg(long)]
    pub categories: Option<PathBuf>,
    #[arg(long)]
    pub episodes: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub dataset: PathBuf,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn read_categories(path: Option<&Path>) -> Result<Option<CategoryTable>> {
    path.map(|p| Ok(CategoryTable::parse(&read_text(p)?)?))
        .transpose()
}

fn read_episodes(path: Option<&Path>) -> Result<EpisodeMap> {
    match path {
        Some(p) => Ok(EpisodeMap::parse(&read_text(p)?)?),
        None => Ok(EpisodeMap::default()),
    }
}

fn read_wad(path: &Path) -> Result<WadArchive> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    Ok(WadArchive::parse(bytes)?)
}

/// Runs a parsed command line on a worker pool of the requested size.
pub fn run(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Info(a) => cmd_info(&a),
        Command::Render(a) => cmd_render(&a),
        Command::ExportCoco(a) => cmd_export(&a),
        Command::Validate(a) => cmd_validate(&a),
    })
}

fn cmd_info(a: &InfoArgs) -> Result<()> {
    let wad = read_wad(&a.wad)?;
    println!("kind: {}", wad.kind());
    println!("lumps: {}", wad.lumps().len());
    println!("maps: {}", map_names(&wad).join(" "));
    if let Some(name) = &a.map {
        let level = load_level(&wad, name)?;
        println!("map: {}", level.name);
        println!("vertices: {}", level.vertices.len());
        println!("linedefs: {}", level.linedefs.len());
        println!("sectors: {}", level.sectors.len());
        println!("things: {}", level.things.len());
        let mut histogram: BTreeMap<u16, usize> = BTreeMap::new();
        for t in &level.things {
            *histogram.entry(t.doomed_type).or_default() += 1;
        }
        for (ty, n) in histogram {
            let name = thing_info(ty).map_or("unknown", |i| i.name);
            println!("thing {ty} {name} {n}");
        }
    }
    Ok(())
}

fn cmd_render(a: &RenderArgs) -> Result<()> {
    let wad = read_wad(&a.wad)?;
    let track = parse_pose_script(&read_text(&a.track)?)?;
    let mut cfg = SessionConfig::new(&a.out, &a.map);
    cfg.render = RenderConfig {
        width: a.width,
        height: a.height,
        hfov: a.hfov,
        depth_scale: a.depth_scale,
        apply_light: !a.no_light,
        ..RenderConfig::default()
    };
    cfg.run_id = a.run;
    if let Some(t) = read_categories(a.categories.as_deref())? {
        cfg.categories = t;
    }
    cfg.episodes = read_episodes(a.episodes.as_deref())?;
    let summary = run_session(&wad, &cfg, &track)?;
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    println!("run: {}", cfg.run_id);
    println!("frames: {}", summary.frames_written);
    Ok(())
}

fn cmd_export(a: &ExportArgs) -> Result<()> {
    let cfg = ExportConfig {
        min_area: a.min_area,
        frame_stride: a.stride,
        min_category_images: a.min_cat_images,
        split: match a.split {
            SplitArg::Run => SplitMode::Run,
            SplitArg::Episode => SplitMode::Episode,
        },
        episodes: read_episodes(a.episodes.as_deref())?,
        category_table: read_categories(a.categories.as_deref())?,
    };
    let entries = load_manifest(&a.manifest)?;
    let sets = build_datasets(&entries, &cfg)?;
    write_datasets(&a.out, &sets)?;
    for split in doomsight_core::coco::Split::ALL {
        let ds = sets.get(split);
        println!(
            "{}: images {} annotations {}",
            split.name(),
            ds.images.len(),
            ds.annotations.len()
        );
    }
    println!("categories: {}", sets.train.categories.len());
    Ok(())
}

fn cmd_validate(a: &ValidateArgs) -> Result<()> {
    let bytes = fs::read(&a.dataset).map_err(io_err(&a.dataset))?;
    let report = validate_dataset(&bytes);
    println!("images: {}", report.stats.images);
    println!("annotations: {}", report.stats.annotations);
    println!("categories: {}", report.stats.categories);
    for (name, n) in &report.stats.category_images {
        println!("category {name} {n}");
    }
    for e in &report.errors {
        eprintln!("error: {e}");
    }
    if report.is_valid() {
        println!("valid");
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "{} validation errors",
            report.errors.len()
        )))
    }
}
