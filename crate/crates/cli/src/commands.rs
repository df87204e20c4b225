use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use autocine::frames::{encode_image, frame_file_name, write_atomic, FrameDir, FrameFormat, FrameSource, RawRgbFile, StagedDir};
use autocine::planner::{audit, plan_edit_detailed, EditList, ShotType};
use autocine::renderer::{check_frame_count, render_contact_sheet, render_edit, ContactSheetSpec, RenderSpec};
use autocine::sphere::angular_distance;
use autocine::synth::{random_scene, SynthScene, SynthSpec};
use autocine::{parse_tracks, sha256_hex, PreferenceMap, TrackSet};
use log::info;

use crate::cli::{ImageFormat, InspectArgs, PlanArgs, RenderArgs, SynthArgs};
use crate::config::RunConfig;
use crate::Failure;

impl From<ImageFormat> for FrameFormat {
    fn from(f: ImageFormat) -> Self {
        match f {
            ImageFormat::Png => FrameFormat::Png,
            ImageFormat::Ppm => FrameFormat::Ppm,
        }
    }
}

fn read(path: &Path, what: &str) -> Result<Vec<u8>, Failure> {
    fs::read(path).with_context(|| format!("cannot read {what} {}", path.display())).map_err(Failure::Input)
}

fn load_tracks(path: &Path, fps: Option<f64>) -> Result<(TrackSet, Vec<u8>), Failure> {
    let bytes = read(path, "tracks")?;
    let mut ts = parse_tracks(&bytes)
        .with_context(|| format!("invalid tracks {}", path.display()))
        .map_err(Failure::Input)?;
    if let Some(fps) = fps {
        ts.fps = fps;
    }
    Ok((ts, bytes))
}

fn load_edl(path: &Path) -> Result<EditList, Failure> {
    let bytes = read(path, "edit list")?;
    EditList::from_json(&bytes)
        .with_context(|| format!("invalid edit list {}", path.display()))
        .map_err(Failure::Input)
}

pub fn plan(args: PlanArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&args.planner).map_err(Failure::Input)?;
    let (ts, track_bytes) = load_tracks(&args.tracks, args.planner.fps)?;
    let prefs = match &args.prefs {
        Some(p) => {
            let bytes = read(p, "preferences")?;
            let map = PreferenceMap::from_json(&bytes)
                .with_context(|| format!("invalid preferences {}", p.display()))
                .map_err(Failure::Input)?;
            Some((map, sha256_hex(&bytes)))
        }
        None => None,
    };

    let (mut edit, _) =
        plan_edit_detailed(&ts, &cfg.planner, &cfg.saliency, &cfg.priors, prefs.as_ref().map(|(m, _)| m))
            .context("planning failed")
            .map_err(Failure::Plan)?;
    edit.provenance.tracks_sha256 = Some(sha256_hex(&track_bytes));
    edit.provenance.prefs_sha256 = prefs.map(|(_, h)| h);

    write_atomic(&args.edl, edit.to_json().as_bytes()).map_err(|e| Failure::Input(e.into()))?;

    println!("{:>4}  {:>11}  {:<11}  {:>5}  {:>6}  focus", "shot", "frames", "type", "fov", "score");
    for (i, s) in edit.shots.iter().enumerate() {
        let mut classes: Vec<&str> = s.chosen.focus_ids.iter().filter_map(|id| ts.class_of(*id)).collect();
        classes.sort_unstable();
        classes.dedup();
        println!(
            "{i:>4}  {:>5}-{:<5}  {:<11}  {:>5.1}  {:>6.3}  {}",
            s.start_frame,
            s.end_frame,
            s.chosen.shot_type.as_str(),
            s.chosen.hfov.to_degrees(),
            s.chosen.score,
            if classes.is_empty() { "-".to_string() } else { classes.join(",") }
        );
    }
    if !edit.provenance.fallbacks.is_empty() {
        println!("fallbacks: {}", edit.provenance.fallbacks.len());
    }
    println!("wrote {} ({} shots, {} frames)", args.edl.display(), edit.shots.len(), edit.n_frames());
    Ok(())
}

fn open_frames(path: &Path, raw_width: Option<u32>) -> Result<Box<dyn FrameSource>, Failure> {
    let source: Box<dyn FrameSource> = if path.is_dir() {
        Box::new(FrameDir::open(path).map_err(|e| Failure::Input(e.into()))?)
    } else {
        let width = raw_width
            .with_context(|| format!("{} is a file; pass --raw-width for raw RGB24 input", path.display()))
            .map_err(Failure::Input)?;
        Box::new(RawRgbFile::open(path, width, width / 2).map_err(|e| Failure::Input(e.into()))?)
    };
    Ok(source)
}

pub fn render(args: RenderArgs) -> Result<(), Failure> {
    let edit = load_edl(&args.edl)?;
    let source = open_frames(&args.frames, args.raw_width)?;
    let spec = RenderSpec::new(args.width, args.height).map_err(|e| Failure::Input(e.into()))?;
    check_frame_count(source.as_ref(), &edit)
        .with_context(|| format!("{} does not match {}", args.frames.display(), args.edl.display()))
        .map_err(Failure::Plan)?;

    let format = FrameFormat::from(args.format);
    let staged = StagedDir::new(&args.out).map_err(|e| Failure::Input(e.into()))?;
    let total = edit.n_frames() as usize;
    let step = (total / 10).max(1);
    render_edit(source.as_ref(), &edit, &spec, |i, img| {
        let path = staged.path().join(frame_file_name(i, format));
        autocine::frames::save_image(&img, &path, format)?;
        if (i + 1) % step == 0 || i + 1 == total {
            info!("rendered {}/{total} frames", i + 1);
        }
        Ok(())
    })
    .map_err(|e| Failure::Input(e.into()))?;

    let mut sheet_path: Option<PathBuf> = None;
    if !args.no_sheet {
        let layout = ContactSheetSpec { thumbs_per_shot: args.thumbs.max(1), ..Default::default() };
        let sheet = render_contact_sheet(source.as_ref(), &edit, &spec, &layout).map_err(|e| Failure::Input(e.into()))?;
        let bytes = encode_image(&sheet, format).map_err(|e| Failure::Input(e.into()))?;
        match &args.sheet {
            Some(p) => {
                let sheet_format = FrameFormat::from_path(p).unwrap_or(format);
                let bytes = if sheet_format == format { bytes } else { encode_image(&sheet, sheet_format).map_err(|e| Failure::Input(e.into()))? };
                write_atomic(p, &bytes).map_err(|e| Failure::Input(e.into()))?;
                sheet_path = Some(p.clone());
            }
            None => {
                let name = format!("contact_sheet.{}", format.extension());
                fs::write(staged.path().join(&name), bytes)
                    .with_context(|| format!("cannot write {name}"))
                    .map_err(Failure::Input)?;
                sheet_path = Some(args.out.join(name));
            }
        }
    }
    staged.commit().map_err(|e| Failure::Input(e.into()))?;
    println!("wrote {total} frames to {}", args.out.display());
    if let Some(p) = sheet_path {
        println!("contact sheet: {}", p.display());
    }
    Ok(())
}

pub fn synth(args: SynthArgs) -> Result<(), Failure> {
    let spec: SynthSpec = match &args.spec {
        Some(p) => {
            let bytes = read(p, "scene spec")?;
            serde_json::from_slice(&bytes)
                .with_context(|| format!("invalid scene spec {}", p.display()))
                .map_err(Failure::Input)?
        }
        None => random_scene(args.seed, args.actors, args.duration, args.fps, args.width),
    };
    let scene = SynthScene::new(spec).context("invalid scene").map_err(Failure::Input)?;
    let format = FrameFormat::from(args.format);

    let staged = StagedDir::new(&args.out).map_err(|e| Failure::Input(e.into()))?;
    let frames_dir = staged.path().join("frames");
    fs::create_dir(&frames_dir).context("cannot create frames directory").map_err(Failure::Input)?;
    let n = scene.n_frames();
    for f in 0..n {
        let img = scene.render_frame(f).into_image();
        autocine::frames::save_image(&img, &frames_dir.join(frame_file_name(f as usize, format)), format)
            .map_err(|e| Failure::Input(e.into()))?;
    }
    fs::write(staged.path().join("tracks.json"), scene.tracks().to_json())
        .context("cannot write tracks.json")
        .map_err(Failure::Input)?;
    fs::write(
        staged.path().join("scene.json"),
        serde_json::to_string_pretty(scene.spec()).expect("scene spec serialises"),
    )
    .context("cannot write scene.json")
    .map_err(Failure::Input)?;
    staged.commit().map_err(|e| Failure::Input(e.into()))?;
    println!(
        "wrote {n} frames ({}x{}) and tracks.json to {}",
        scene.spec().width,
        scene.spec().height(),
        args.out.display()
    );
    Ok(())
}

pub fn inspect(args: InspectArgs) -> Result<(), Failure> {
    let edit = load_edl(&args.edl)?;
    let report = audit(&edit);
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
        return Ok(());
    }
    let fps = edit.provenance.fps;
    println!("{:>4}  {:>11}  {:<11}  {:>5}  {:>6}  {:>8}  {:>9}  focus", "shot", "frames", "type", "fov", "score", "travel", "peak/s");
    for (i, s) in edit.shots.iter().enumerate() {
        let steps: Vec<f64> = s.chosen.keyframes.windows(2).map(|w| angular_distance(w[0], w[1]).to_degrees()).collect();
        let travel: f64 = steps.iter().sum();
        let peak = steps.iter().copied().fold(0.0, f64::max);
        let ids: Vec<String> = s.chosen.focus_ids.iter().map(|id| id.to_string()).collect();
        println!(
            "{i:>4}  {:>5}-{:<5}  {:<11}  {:>5.1}  {:>6.3}  {:>7.1}°  {:>9}  {}",
            s.start_frame,
            s.end_frame,
            s.chosen.shot_type.as_str(),
            s.chosen.hfov.to_degrees(),
            s.chosen.score,
            travel,
            fps.map_or("-".to_string(), |f| format!("{:.1}°", peak * f)),
            if ids.is_empty() { "-".to_string() } else { ids.join(",") }
        );
    }
    println!();
    println!("histogram ({} shots):", edit.shots.len());
    for t in ShotType::ALL {
        println!("  {:<11} {}", t.as_str(), report.histogram[t.index()]);
    }
    println!("fallbacks:");
    if edit.provenance.fallbacks.is_empty() {
        println!("  none");
    }
    for ev in &edit.provenance.fallbacks {
        println!("  shot {}: {:?}", ev.shot, ev.kind);
    }
    let list = |v: &[usize]| if v.is_empty() { "none".to_string() } else { format!("{v:?}") };
    println!("audit:");
    println!("  jump-cut violations  {}", list(&report.jump_cut_violations));
    println!("  tiled                {}", report.tiled);
    println!("  longest run          {}", report.longest_run);
    let over: Vec<&str> = report.quota_violations.iter().map(|t| t.as_str()).collect();
    println!("  over quota           {}", if over.is_empty() { "none".to_string() } else { over.join(",") });
    if let Some(s) = report.max_speed_deg_s {
        println!("  max camera speed     {s:.2} deg/s");
    }
    Ok(())
}
