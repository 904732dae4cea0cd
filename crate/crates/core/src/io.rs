//! 8-bit PNG and binary PPM (P6) reading and writing.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ColorType, DynamicImage, ExtendedColorType, ImageEncoder, ImageReader};

use crate::error::{Result, SirError};
use crate::image::{ImagePlane, ImageRGB};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Png,
    Ppm,
}

fn output_format(path: &Path) -> Result<OutputFormat> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("png") => Ok(OutputFormat::Png),
        Some("ppm") => Ok(OutputFormat::Ppm),
        _ => Err(SirError::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: "output extension must be .png or .ppm".into(),
        }),
    }
}

pub(crate) fn decode(path: &Path) -> Result<DynamicImage> {
    let read_err = |source| SirError::Read {
        path: path.to_path_buf(),
        source,
    };
    let reader = ImageReader::open(path)
        .map_err(|source| SirError::Io {
            path: path.to_path_buf(),
            source,
        })?
        .with_guessed_format()
        .map_err(|source| SirError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    let img = reader.decode().map_err(read_err)?;
    if img.width() == 0 || img.height() == 0 {
        return Err(SirError::ZeroDimension {
            width: img.width() as usize,
            height: img.height() as usize,
        });
    }
    Ok(img)
}

/// Reads an 8-bit RGB or grayscale PNG/PPM. Grayscale data is replicated into
/// all three planes.
pub fn load_image(path: impl AsRef<Path>) -> Result<ImageRGB> {
    let path = path.as_ref();
    let img = decode(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img.color() {
        ColorType::L8 => {
            let buf = img.into_luma8();
            let plane = ImagePlane::new(w, h, buf.as_raw().iter().map(|&v| f64::from(v)).collect())?;
            Ok(ImageRGB::from_gray(plane))
        }
        ColorType::Rgb8 => {
            let buf = img.into_rgb8();
            let raw = buf.as_raw();
            let channel =
                |c: usize| ImagePlane::new(w, h, raw.iter().skip(c).step_by(3).map(|&v| f64::from(v)).collect());
            ImageRGB::new(channel(0)?, channel(1)?, channel(2)?)
        }
        other => Err(SirError::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: format!("expected 8-bit RGB or grayscale, found {other:?}"),
        }),
    }
}

/// Rounds half-up and clamps a working intensity to a byte.
pub fn quantize(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Writes the image as 8-bit PNG or binary PPM depending on the extension.
pub fn save_image(img: &ImageRGB, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let format = output_format(path)?;
    let (w, h) = img.dims();
    let mut bytes = Vec::with_capacity(w * h * 3);
    for ((r, g), b) in img.r.data().iter().zip(img.g.data()).zip(img.b.data()) {
        bytes.extend_from_slice(&[quantize(*r), quantize(*g), quantize(*b)]);
    }
    let file = File::create(path).map_err(|source| SirError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let out = BufWriter::new(file);
    let result = match format {
        OutputFormat::Png => PngEncoder::new(out).write_image(&bytes, w as u32, h as u32, ExtendedColorType::Rgb8),
        OutputFormat::Ppm => PnmEncoder::new(out)
            .with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary))
            .write_image(&bytes, w as u32, h as u32, ExtendedColorType::Rgb8),
    };
    result.map_err(|source| SirError::Write {
        path: path.to_path_buf(),
        source,
    })
}
