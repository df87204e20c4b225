//! Per-pixel reference renderer: unproject, map to the equirect raster,
//! interpolate. No precomputation, no parallelism.

use autocine::sphere::{gnomonic_unproject, sph_to_pix};
use autocine::{EquirectFrame, Viewport};
use image::{Rgb, RgbImage};

fn texel(img: &RgbImage, col: i64, row: i64) -> [f64; 3] {
    let w = img.width() as i64;
    let h = img.height() as i64;
    let c = ((col % w) + w) % w;
    let r = row.max(0).min(h - 1);
    let p = img.get_pixel(c as u32, r as u32).0;
    [p[0] as f64, p[1] as f64, p[2] as f64]
}

pub fn render(frame: &EquirectFrame, view: &Viewport, out_w: u32, out_h: u32) -> RgbImage {
    let src = frame.image();
    let mut out = RgbImage::new(out_w, out_h);
    for j in 0..out_h {
        for i in 0..out_w {
            let u = (i as f64 + 0.5) / out_w as f64 * 2.0 - 1.0;
            let v = 1.0 - (j as f64 + 0.5) / out_h as f64 * 2.0;
            let p = gnomonic_unproject(view, u, v);
            let (x, y) = sph_to_pix(p, src.width(), src.height());
            // texel centres sit at integer + 0.5
            let gx = x - 0.5;
            let gy = y - 0.5;
            let c0 = gx.floor();
            let r0 = gy.floor();
            let (ax, ay) = (gx - c0, gy - r0);
            let (c0, r0) = (c0 as i64, r0 as i64);
            let q00 = texel(src, c0, r0);
            let q10 = texel(src, c0 + 1, r0);
            let q01 = texel(src, c0, r0 + 1);
            let q11 = texel(src, c0 + 1, r0 + 1);
            let mut px = [0u8; 3];
            for k in 0..3 {
                let val = q00[k] * (1.0 - ax) * (1.0 - ay)
                    + q10[k] * ax * (1.0 - ay)
                    + q01[k] * (1.0 - ax) * ay
                    + q11[k] * ax * ay;
                px[k] = val.round().clamp(0.0, 255.0) as u8;
            }
            out.put_pixel(i, j, Rgb(px));
        }
    }
    out
}

pub fn max_channel_diff(a: &RgbImage, b: &RgbImage) -> u8 {
    assert_eq!(a.dimensions(), b.dimensions());
    a.as_raw()
        .iter()
        .zip(b.as_raw())
        .map(|(x, y)| x.abs_diff(*y))
        .max()
        .unwrap_or(0)
}
