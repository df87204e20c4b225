use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "autocine", version, about = "Automatic virtual camera editing for 360 degree video")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan an edit list from object tracks.
    Plan(PlanArgs),
    /// Render an edit list into perspective frames and a contact sheet.
    Render(RenderArgs),
    /// Generate a synthetic equirectangular scene with exact tracks.
    Synth(SynthArgs),
    /// Summarise and audit an edit list.
    Inspect(InspectArgs),
}

/// Planner settings in degrees and seconds. Unset flags fall back to the
/// config file, then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct PlannerFlags {
    /// TOML file with [planner], [saliency] and [priors] tables.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Shot length in seconds.
    #[arg(long, value_name = "SECONDS")]
    pub shot_len: Option<f64>,
    /// Override the frame rate recorded in the tracks file.
    #[arg(long)]
    pub fps: Option<f64>,
    #[arg(long, value_name = "DEG")]
    pub fov_tracking: Option<f64>,
    #[arg(long, value_name = "DEG")]
    pub fov_static: Option<f64>,
    #[arg(long, value_name = "DEG")]
    pub fov_medium: Option<f64>,
    #[arg(long, value_name = "DEG")]
    pub fov_pan: Option<f64>,
    /// Hypotheses per shot type (clamped to 2..=4).
    #[arg(long)]
    pub hyps_per_type: Option<usize>,
    /// Maximum share of shots of any one type.
    #[arg(long)]
    pub type_quota: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Object tracks JSON.
    #[arg(long)]
    pub tracks: PathBuf,
    /// Viewer preference JSON; enables recommender shots.
    #[arg(long)]
    pub prefs: Option<PathBuf>,
    /// Where to write the edit list.
    #[arg(long, default_value = "edit.json")]
    pub edl: PathBuf,
    #[command(flatten)]
    pub planner: PlannerFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ImageFormat {
    Png,
    Ppm,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Directory of frame_NNNNNN.png/.ppm files, or a raw RGB24 file.
    #[arg(long)]
    pub frames: PathBuf,
    #[arg(long)]
    pub edl: PathBuf,
    /// Output directory for rendered frames.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1280)]
    pub width: u32,
    #[arg(long, default_value_t = 720)]
    pub height: u32,
    #[arg(long, value_enum, default_value_t = ImageFormat::Png)]
    pub format: ImageFormat,
    /// Contact sheet path (default: contact_sheet.<format> in the output directory).
    #[arg(long)]
    pub sheet: Option<PathBuf>,
    /// Thumbnails per shot on the contact sheet.
    #[arg(long, default_value_t = 3)]
    pub thumbs: usize,
    /// Skip the contact sheet.
    #[arg(long)]
    pub no_sheet: bool,
    /// Frame width when --frames is a raw RGB24 file.
    #[arg(long)]
    pub raw_width: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scene description JSON; without it a random scene is generated.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Output directory; receives frames/ and tracks.json.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub actors: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "SECONDS", default_value_t = 10.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 25.0)]
    pub fps: f64,
    /// Equirectangular width; height is half of it.
    #[arg(long, default_value_t = 1024)]
    pub width: u32,
    #[arg(long, value_enum, default_value_t = ImageFormat::Png)]
    pub format: ImageFormat,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub edl: PathBuf,
    /// Print the audit as JSON instead of tables.
    #[arg(long)]
    pub json: bool,
}
