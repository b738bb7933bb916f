//! PNG convenience codec (8-bit gray and RGB only).

use crate::error::{Error, Result};
use crate::image::Image;

pub fn decode(bytes: &[u8]) -> Result<Image> {
    let decoder = png::Decoder::new(bytes);
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::format(format!("png: {e}")))?;
    let mut buf = vec![0u8; reader.output_buffer_size()];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::format(format!("png: {e}")))?;
    if info.bit_depth != png::BitDepth::Eight {
        return Err(Error::unsupported(format!("png bit depth {:?}", info.bit_depth)));
    }
    buf.truncate(info.buffer_size());
    let (w, h) = (info.width as usize, info.height as usize);
    match info.color_type {
        png::ColorType::Grayscale => Image::new(w, h, 1, buf),
        png::ColorType::Rgb => Image::new(w, h, 3, buf),
        // Drop alpha; the pipeline has no use for it.
        png::ColorType::GrayscaleAlpha => {
            let data = buf.chunks_exact(2).map(|px| px[0]).collect();
            Image::new(w, h, 1, data)
        }
        png::ColorType::Rgba => {
            let data = buf
                .chunks_exact(4)
                .flat_map(|px| [px[0], px[1], px[2]])
                .collect();
            Image::new(w, h, 3, data)
        }
        other => Err(Error::unsupported(format!("png color type {other:?}"))),
    }
}

pub fn encode(image: &Image) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, image.width() as u32, image.height() as u32);
        encoder.set_color(if image.channels() == 1 {
            png::ColorType::Grayscale
        } else {
            png::ColorType::Rgb
        });
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::format(format!("png: {e}")))?;
        writer
            .write_image_data(image.data())
            .map_err(|e| Error::format(format!("png: {e}")))?;
    }
    Ok(out)
}
