//! Equirectangular frames and the on-disk frame conventions:
//! `frame_%06d.png` / `frame_%06d.ppm` directories and raw RGB24 streams.

use std::fs::{self, File};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use image::{ImageFormat, RgbImage};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Image { path: PathBuf, source: image::ImageError },
    #[error("equirectangular frame must be 2:1, got {width}x{height}")]
    NotEquirect { width: u32, height: u32 },
    #[error("{0}")]
    Layout(String),
}

impl FrameError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        FrameError::Io { path: path.to_path_buf(), source }
    }
}

/// One 8-bit RGB equirectangular video frame.
#[derive(Debug, Clone, PartialEq)]
pub struct EquirectFrame {
    image: RgbImage,
}

impl EquirectFrame {
    pub fn new(image: RgbImage) -> Result<Self, FrameError> {
        let (width, height) = image.dimensions();
        if height == 0 || width != 2 * height {
            return Err(FrameError::NotEquirect { width, height });
        }
        Ok(Self { image })
    }

    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Result<Self, FrameError> {
        let image = RgbImage::from_raw(width, height, data).ok_or_else(|| {
            FrameError::Layout(format!("buffer does not hold a {width}x{height} RGB image"))
        })?;
        Self::new(image)
    }

    pub fn width(&self) -> u32 {
        self.image.width()
    }

    pub fn height(&self) -> u32 {
        self.image.height()
    }

    pub fn image(&self) -> &RgbImage {
        &self.image
    }

    pub fn into_image(self) -> RgbImage {
        self.image
    }
}

/// Random-access supply of input frames.
pub trait FrameSource {
    fn len(&self) -> usize;

    fn frame(&self, index: usize) -> Result<EquirectFrame, FrameError>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl FrameSource for [EquirectFrame] {
    fn len(&self) -> usize {
        <[EquirectFrame]>::len(self)
    }

    fn frame(&self, index: usize) -> Result<EquirectFrame, FrameError> {
        self.get(index)
            .cloned()
            .ok_or_else(|| FrameError::Layout(format!("frame {index} out of range")))
    }
}

impl FrameSource for Vec<EquirectFrame> {
    fn len(&self) -> usize {
        self.as_slice().len()
    }

    fn frame(&self, index: usize) -> Result<EquirectFrame, FrameError> {
        self.as_slice().frame(index)
    }
}

/// Image file flavour for numbered frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameFormat {
    Png,
    Ppm,
}

impl FrameFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FrameFormat::Png => "png",
            FrameFormat::Ppm => "ppm",
        }
    }

    fn image_format(self) -> ImageFormat {
        match self {
            FrameFormat::Png => ImageFormat::Png,
            FrameFormat::Ppm => ImageFormat::Pnm,
        }
    }

    /// Format implied by a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "png" => Some(FrameFormat::Png),
            "ppm" => Some(FrameFormat::Ppm),
            _ => None,
        }
    }
}

pub fn frame_file_name(index: usize, format: FrameFormat) -> String {
    format!("frame_{index:06}.{}", format.extension())
}

/// Encodes an image to bytes.
pub fn encode_image(image: &RgbImage, format: FrameFormat) -> Result<Vec<u8>, image::ImageError> {
    let mut buf = std::io::Cursor::new(Vec::new());
    image.write_to(&mut buf, format.image_format())?;
    Ok(buf.into_inner())
}

pub fn save_image(image: &RgbImage, path: &Path, format: FrameFormat) -> Result<(), FrameError> {
    let bytes = encode_image(image, format)
        .map_err(|source| FrameError::Image { path: path.to_path_buf(), source })?;
    fs::write(path, bytes).map_err(|e| FrameError::io(path, e))
}

pub fn load_image(path: &Path) -> Result<RgbImage, FrameError> {
    let img = image::open(path).map_err(|source| FrameError::Image { path: path.to_path_buf(), source })?;
    Ok(img.to_rgb8())
}

/// Numbered frames in a directory, contiguous from `frame_000000`.
#[derive(Debug, Clone)]
pub struct FrameDir {
    paths: Vec<PathBuf>,
}

impl FrameDir {
    pub fn open(dir: &Path) -> Result<Self, FrameError> {
        let mut found: Vec<(usize, PathBuf)> = Vec::new();
        for entry in fs::read_dir(dir).map_err(|e| FrameError::io(dir, e))? {
            let path = entry.map_err(|e| FrameError::io(dir, e))?.path();
            if FrameFormat::from_path(&path).is_none() {
                continue;
            }
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let Some(digits) = stem.strip_prefix("frame_") else {
                continue;
            };
            if digits.len() != 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
                continue;
            }
            found.push((digits.parse().expect("six digits"), path));
        }
        found.sort();
        for (expect, (index, path)) in found.iter().enumerate() {
            if *index != expect {
                return Err(FrameError::Layout(format!(
                    "{}: expected frame {expect}, found {}",
                    dir.display(),
                    path.display()
                )));
            }
        }
        Ok(Self { paths: found.into_iter().map(|(_, p)| p).collect() })
    }
}

impl FrameSource for FrameDir {
    fn len(&self) -> usize {
        self.paths.len()
    }

    fn frame(&self, index: usize) -> Result<EquirectFrame, FrameError> {
        let path = self
            .paths
            .get(index)
            .ok_or_else(|| FrameError::Layout(format!("frame {index} out of range")))?;
        EquirectFrame::new(load_image(path)?)
    }
}

/// Headerless RGB24 stream of fixed-size frames.
#[derive(Debug, Clone)]
pub struct RawRgbFile {
    path: PathBuf,
    width: u32,
    height: u32,
    frames: usize,
}

impl RawRgbFile {
    pub fn open(path: &Path, width: u32, height: u32) -> Result<Self, FrameError> {
        if height == 0 || width != 2 * height {
            return Err(FrameError::NotEquirect { width, height });
        }
        let len = fs::metadata(path).map_err(|e| FrameError::io(path, e))?.len();
        let frame_bytes = width as u64 * height as u64 * 3;
        if len % frame_bytes != 0 {
            return Err(FrameError::Layout(format!(
                "{}: {len} bytes is not a whole number of {width}x{height} RGB24 frames",
                path.display()
            )));
        }
        Ok(Self { path: path.to_path_buf(), width, height, frames: (len / frame_bytes) as usize })
    }
}

impl FrameSource for RawRgbFile {
    fn len(&self) -> usize {
        self.frames
    }

    fn frame(&self, index: usize) -> Result<EquirectFrame, FrameError> {
        if index >= self.frames {
            return Err(FrameError::Layout(format!("frame {index} out of range")));
        }
        let frame_bytes = self.width as usize * self.height as usize * 3;
        let mut file = File::open(&self.path).map_err(|e| FrameError::io(&self.path, e))?;
        file.seek(SeekFrom::Start((index * frame_bytes) as u64))
            .map_err(|e| FrameError::io(&self.path, e))?;
        let mut data = vec![0u8; frame_bytes];
        file.read_exact(&mut data).map_err(|e| FrameError::io(&self.path, e))?;
        EquirectFrame::from_raw(self.width, self.height, data)
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), FrameError> {
    let dir = parent_dir(path);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| FrameError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| FrameError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| FrameError::io(path, e.error))?;
    Ok(())
}

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

/// A scratch directory whose contents move to the destination on
/// [`StagedDir::commit`]. Dropping it uncommitted deletes everything.
pub struct StagedDir {
    tmp: tempfile::TempDir,
    dest: PathBuf,
}

impl StagedDir {
    pub fn new(dest: &Path) -> Result<Self, FrameError> {
        let parent = parent_dir(dest);
        fs::create_dir_all(parent).map_err(|e| FrameError::io(parent, e))?;
        let tmp = tempfile::Builder::new()
            .prefix(".autocine-staging")
            .tempdir_in(parent)
            .map_err(|e| FrameError::io(parent, e))?;
        Ok(Self { tmp, dest: dest.to_path_buf() })
    }

    pub fn path(&self) -> &Path {
        self.tmp.path()
    }

    /// Moves staged files into the destination, creating it if needed.
    pub fn commit(self) -> Result<(), FrameError> {
        if !self.dest.exists() {
            let staged = self.tmp.keep();
            return fs::rename(&staged, &self.dest).map_err(|e| FrameError::io(&self.dest, e));
        }
        for entry in fs::read_dir(self.tmp.path()).map_err(|e| FrameError::io(self.tmp.path(), e))? {
            let entry = entry.map_err(|e| FrameError::io(self.tmp.path(), e))?;
            let target = self.dest.join(entry.file_name());
            fs::rename(entry.path(), &target).map_err(|e| FrameError::io(&target, e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(w: u32, h: u32, fill: u8) -> RgbImage {
        RgbImage::from_pixel(w, h, image::Rgb([fill, fill / 2, 255 - fill]))
    }

    #[test]
    fn rejects_non_equirect() {
        assert!(matches!(EquirectFrame::new(frame(10, 10, 0)), Err(FrameError::NotEquirect { .. })));
        assert!(EquirectFrame::from_raw(4, 2, vec![0; 5]).is_err());
    }

    #[test]
    fn frame_dir_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for i in 0..3 {
            let fmt = if i == 1 { FrameFormat::Ppm } else { FrameFormat::Png };
            save_image(&frame(8, 4, i as u8 * 40), &dir.path().join(frame_file_name(i, fmt)), fmt).unwrap();
        }
        fs::write(dir.path().join("notes.txt"), "x").unwrap();
        let src = FrameDir::open(dir.path()).unwrap();
        assert_eq!(src.len(), 3);
        assert_eq!(src.frame(1).unwrap().image(), &frame(8, 4, 40));
        assert_eq!(src.frame(2).unwrap().image(), &frame(8, 4, 80));
    }

    #[test]
    fn frame_dir_gap_is_error() {
        let dir = tempfile::tempdir().unwrap();
        for i in [0, 2] {
            save_image(&frame(8, 4, 0), &dir.path().join(frame_file_name(i, FrameFormat::Png)), FrameFormat::Png)
                .unwrap();
        }
        assert!(matches!(FrameDir::open(dir.path()), Err(FrameError::Layout(_))));
    }

    #[test]
    fn raw_file_frames() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("video.rgb");
        let mut bytes = frame(8, 4, 10).into_raw();
        bytes.extend(frame(8, 4, 20).into_raw());
        fs::write(&path, &bytes).unwrap();
        let src = RawRgbFile::open(&path, 8, 4).unwrap();
        assert_eq!(src.len(), 2);
        assert_eq!(src.frame(1).unwrap().image(), &frame(8, 4, 20));
        assert!(RawRgbFile::open(&path, 6, 3).is_err());
    }

    #[test]
    fn staged_dir_commits_or_vanishes() {
        let root = tempfile::tempdir().unwrap();
        let dest = root.path().join("out");
        let staged = StagedDir::new(&dest).unwrap();
        fs::write(staged.path().join("a.txt"), "a").unwrap();
        drop(staged);
        assert!(!dest.exists());
        assert_eq!(fs::read_dir(root.path()).unwrap().count(), 0);

        let staged = StagedDir::new(&dest).unwrap();
        fs::write(staged.path().join("a.txt"), "a").unwrap();
        staged.commit().unwrap();
        assert_eq!(fs::read_to_string(dest.join("a.txt")).unwrap(), "a");

        let staged = StagedDir::new(&dest).unwrap();
        fs::write(staged.path().join("b.txt"), "b").unwrap();
        staged.commit().unwrap();
        assert!(dest.join("a.txt").exists() && dest.join("b.txt").exists());
    }
}
