//! Perspective rendering of edit lists from equirectangular frames.

use std::f64::consts::{FRAC_1_PI, FRAC_PI_2, PI};

use image::{imageops, Rgb, RgbImage};
use rayon::prelude::*;
use thiserror::Error;

use crate::frames::{EquirectFrame, FrameError, FrameSource};
use crate::planner::{EditList, Shot};
use crate::sphere::{GeomError, SphericalPoint, Viewport};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("edit list covers {edit} frames but the input has {input}")]
    FrameCount { edit: u32, input: usize },
    #[error("invalid render size {0}x{1}")]
    Size(u32, u32),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Output raster settings. Sampling is always bilinear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderSpec {
    pub out_width: u32,
    pub out_height: u32,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self { out_width: 1280, out_height: 720 }
    }
}

impl RenderSpec {
    pub fn new(out_width: u32, out_height: u32) -> Result<Self, RenderError> {
        if out_width == 0 || out_height == 0 {
            return Err(RenderError::Size(out_width, out_height));
        }
        Ok(Self { out_width, out_height })
    }

    pub fn aspect(&self) -> f64 {
        self.out_width as f64 / self.out_height as f64
    }

    /// Viewport with this spec's aspect ratio.
    pub fn viewport(&self, center: SphericalPoint, hfov: f64) -> Result<Viewport, GeomError> {
        Viewport::new(center, hfov, self.aspect())
    }
}

/// Bilinear sample at a continuous equirectangular coordinate. Columns wrap
/// around the seam; rows clamp at the poles.
#[inline]
pub fn sample_bilinear(img: &RgbImage, x: f64, y: f64) -> [f64; 3] {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let fx = x - 0.5;
    let fy = y - 0.5;
    let x0f = fx.floor();
    let y0f = fy.floor();
    let tx = fx - x0f;
    let ty = fy - y0f;
    let x0 = (x0f as i64).rem_euclid(w);
    let x1 = (x0 + 1) % w;
    let y0 = (y0f as i64).clamp(0, h - 1);
    let y1 = (y0f as i64 + 1).clamp(0, h - 1);
    let raw = img.as_raw();
    let at = |xx: i64, yy: i64| ((yy * w + xx) * 3) as usize;
    let (a, b, c, d) = (at(x0, y0), at(x1, y0), at(x0, y1), at(x1, y1));
    let mut out = [0.0; 3];
    for (ch, o) in out.iter_mut().enumerate() {
        let top = raw[a + ch] as f64 * (1.0 - tx) + raw[b + ch] as f64 * tx;
        let bottom = raw[c + ch] as f64 * (1.0 - tx) + raw[d + ch] as f64 * tx;
        *o = top * (1.0 - ty) + bottom * ty;
    }
    out
}

#[inline]
pub fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Renders the perspective view `view` of `frame` at the spec's resolution.
pub fn render_viewport(frame: &EquirectFrame, view: &Viewport, spec: &RenderSpec) -> RgbImage {
    let (ow, oh) = (spec.out_width as usize, spec.out_height as usize);
    let src = frame.image();
    let (sw, sh) = (src.width() as f64, src.height() as f64);
    let basis = view.basis();
    let (tx, ty) = view.half_extents();

    // direction = row term + column term; both precomputed
    let cols: Vec<[f64; 3]> = (0..ow)
        .map(|i| {
            let u = 2.0 * (i as f64 + 0.5) / ow as f64 - 1.0;
            let r = basis.right.scale(u * tx);
            [r.x, r.y, r.z]
        })
        .collect();

    let mut buf = vec![0u8; ow * oh * 3];
    buf.par_chunks_mut(ow * 3).enumerate().for_each(|(j, row)| {
        let v = 1.0 - 2.0 * (j as f64 + 0.5) / oh as f64;
        let base = basis.forward + basis.up.scale(v * ty);
        for (i, c) in cols.iter().enumerate() {
            let (dx, dy, dz) = (base.x + c[0], base.y + c[1], base.z + c[2]);
            let yaw = dx.atan2(dz);
            let pitch = dy.atan2(dx.hypot(dz));
            let x = (yaw + PI) * (0.5 * FRAC_1_PI) * sw;
            let y = (FRAC_PI_2 - pitch) * FRAC_1_PI * sh;
            let px = sample_bilinear(src, x, y);
            let o = &mut row[i * 3..i * 3 + 3];
            o[0] = to_u8(px[0]);
            o[1] = to_u8(px[1]);
            o[2] = to_u8(px[2]);
        }
    });
    RgbImage::from_raw(spec.out_width, spec.out_height, buf).expect("buffer sized to spec")
}

fn shot_viewport(shot: &Shot, frame: u32, spec: &RenderSpec) -> Result<Viewport, RenderError> {
    let center = shot.center_at(frame).expect("frame lies inside the shot");
    Ok(spec.viewport(center, shot.chosen.hfov)?)
}

/// Renders every frame of `edit` in order, handing each image to `sink`.
/// The frame count is checked before anything is rendered.
pub fn render_edit<S, F>(
    source: &S,
    edit: &EditList,
    spec: &RenderSpec,
    mut sink: F,
) -> Result<(), RenderError>
where
    S: FrameSource + ?Sized,
    F: FnMut(usize, RgbImage) -> Result<(), FrameError>,
{
    check_frame_count(source, edit)?;
    for shot in &edit.shots {
        for f in shot.start_frame..shot.end_frame {
            let view = shot_viewport(shot, f, spec)?;
            let frame = source.frame(f as usize)?;
            sink(f as usize, render_viewport(&frame, &view, spec))?;
        }
    }
    Ok(())
}

pub fn check_frame_count<S: FrameSource + ?Sized>(source: &S, edit: &EditList) -> Result<(), RenderError> {
    if edit.n_frames() as usize != source.len() || source.is_empty() {
        return Err(RenderError::FrameCount { edit: edit.n_frames(), input: source.len() });
    }
    Ok(())
}

/// Layout of the preview grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactSheetSpec {
    pub thumbs_per_shot: usize,
    pub thumb_width: u32,
    /// Spacing between and around cells, pixels.
    pub gutter: u32,
}

impl Default for ContactSheetSpec {
    fn default() -> Self {
        Self { thumbs_per_shot: 3, thumb_width: 320, gutter: 4 }
    }
}

impl ContactSheetSpec {
    /// Sheet dimensions for `shots` shot rows plus the input row.
    pub fn sheet_size(&self, shots: usize, render: &RenderSpec) -> (u32, u32) {
        let k = self.thumbs_per_shot.max(1) as u32;
        let rows = shots as u32 + 1;
        let cell_h = self.cell_height(render);
        (k * self.thumb_width + (k + 1) * self.gutter, rows * cell_h + (rows + 1) * self.gutter)
    }

    fn render_thumb(&self, render: &RenderSpec) -> RenderSpec {
        let h = (self.thumb_width as f64 / render.aspect()).round().max(1.0) as u32;
        RenderSpec { out_width: self.thumb_width, out_height: h }
    }

    fn cell_height(&self, render: &RenderSpec) -> u32 {
        self.render_thumb(render).out_height.max((self.thumb_width / 2).max(1))
    }
}

/// `k` frames of `[start, end)`: first, last and evenly spaced between.
pub fn thumb_frames(start: u32, end: u32, k: usize) -> Vec<u32> {
    if end <= start || k == 0 {
        return Vec::new();
    }
    if k == 1 {
        return vec![start];
    }
    let span = (end - 1 - start) as f64;
    (0..k)
        .map(|i| start + (i as f64 * span / (k - 1) as f64).round() as u32)
        .collect()
}

const SHEET_BACKGROUND: Rgb<u8> = Rgb([24, 24, 24]);

/// Preview grid: the first row shows input frames, each further row the
/// rendered thumbnails of one shot, left to right in time.
pub fn render_contact_sheet<S: FrameSource + ?Sized>(
    source: &S,
    edit: &EditList,
    render: &RenderSpec,
    sheet: &ContactSheetSpec,
) -> Result<RgbImage, RenderError> {
    let (w, h) = sheet.sheet_size(edit.shots.len(), render);
    let mut out = RgbImage::from_pixel(w, h, SHEET_BACKGROUND);
    let k = sheet.thumbs_per_shot.max(1);
    let cell_h = sheet.cell_height(render);
    let place = |out: &mut RgbImage, img: &RgbImage, row: u32, col: u32| {
        let x = sheet.gutter + col * (sheet.thumb_width + sheet.gutter);
        let y = sheet.gutter + row * (cell_h + sheet.gutter) + (cell_h - img.height()) / 2;
        imageops::replace(out, img, x as i64, y as i64);
    };

    let n_input = if edit.shots.is_empty() { source.len() as u32 } else { edit.n_frames() };
    let eq_w = sheet.thumb_width;
    let eq_h = (eq_w / 2).max(1);
    for (col, f) in thumb_frames(0, n_input, k).into_iter().enumerate() {
        let frame = source.frame(f as usize)?;
        let thumb = imageops::resize(frame.image(), eq_w, eq_h, imageops::FilterType::Triangle);
        place(&mut out, &thumb, 0, col as u32);
    }

    let thumb_spec = sheet.render_thumb(render);
    for (row, shot) in edit.shots.iter().enumerate() {
        for (col, f) in thumb_frames(shot.start_frame, shot.end_frame, k).into_iter().enumerate() {
            let view = shot_viewport(shot, f, &thumb_spec)?;
            let frame = source.frame(f as usize)?;
            place(&mut out, &render_viewport(&frame, &view, &thumb_spec), row as u32 + 1, col as u32);
        }
    }
    Ok(out)
}
