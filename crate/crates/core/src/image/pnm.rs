//! Binary PGM (P5) / PPM (P6) codec, maxval 255.
//!
//! This is the crate's bit-exact interchange format: decode(encode(x)) == x
//! for every valid 8-bit image.

use crate::error::{Error, Result};
use crate::image::Image;

pub fn encode(image: &Image) -> Vec<u8> {
    let magic = if image.channels() == 1 { "P5" } else { "P6" };
    let header = format!("{magic}\n{} {}\n255\n", image.width(), image.height());
    let mut out = header.into_bytes();
    out.extend_from_slice(image.data());
    out
}

pub fn decode(bytes: &[u8]) -> Result<Image> {
    let mut cursor = 2;
    let channels = match &bytes[..2] {
        b"P5" => 1,
        b"P6" => 3,
        _ => return Err(Error::format("not a binary PGM/PPM file")),
    };
    let width = read_header_int(bytes, &mut cursor)?;
    let height = read_header_int(bytes, &mut cursor)?;
    let maxval = read_header_int(bytes, &mut cursor)?;
    if maxval != 255 {
        return Err(Error::unsupported(format!("maxval {maxval}, only 8-bit (255) handled")));
    }
    // Exactly one whitespace byte separates the header from the payload.
    match bytes.get(cursor) {
        Some(b) if b.is_ascii_whitespace() => cursor += 1,
        _ => return Err(Error::format("missing whitespace after maxval")),
    }
    if width == 0 || height == 0 {
        return Err(Error::format("zero image dimension in header"));
    }
    let expected = width * height * channels;
    let payload = &bytes[cursor..];
    if payload.len() < expected {
        return Err(Error::format(format!(
            "truncated payload: expected {expected} bytes, found {}",
            payload.len()
        )));
    }
    Image::new(width, height, channels, payload[..expected].to_vec())
}

/// Reads the next ASCII integer, skipping whitespace and `#` comments.
fn read_header_int(bytes: &[u8], cursor: &mut usize) -> Result<usize> {
    loop {
        match bytes.get(*cursor) {
            Some(b) if b.is_ascii_whitespace() => *cursor += 1,
            Some(b'#') => {
                while let Some(&b) = bytes.get(*cursor) {
                    *cursor += 1;
                    if b == b'\n' {
                        break;
                    }
                }
            }
            Some(b) if b.is_ascii_digit() => break,
            _ => return Err(Error::format("malformed PNM header")),
        }
    }
    let start = *cursor;
    while bytes.get(*cursor).is_some_and(|b| b.is_ascii_digit()) {
        *cursor += 1;
    }
    std::str::from_utf8(&bytes[start..*cursor])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::format("invalid integer in PNM header"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodes_single_gray_pixel() {
        let img = Image::new(1, 1, 1, vec![7]).unwrap();
        assert_eq!(encode(&img), b"P5\n1 1\n255\n\x07");
    }

    #[test]
    fn decodes_p5_example() {
        let bytes = b"P5\n2 2\n255\n\x00\x40\x80\xff";
        let img = decode(bytes).unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (2, 2, 1));
        assert_eq!(img.data(), &[0, 64, 128, 255]);
    }

    #[test]
    fn decodes_header_with_comment() {
        let bytes = b"P5\n# a comment\n1 1\n255\n\x05";
        let img = decode(bytes).unwrap();
        assert_eq!(img.data(), &[5]);
    }

    #[test]
    fn truncated_p6_payload_is_format_error() {
        let bytes = b"P6\n2 2\n255\n\x01\x02\x03";
        assert!(matches!(decode(bytes), Err(Error::Format(_))));
    }

    #[test]
    fn maxval_other_than_255_is_unsupported() {
        let bytes = b"P5\n1 1\n65535\n\x00\x00";
        assert!(matches!(decode(bytes), Err(Error::Unsupported(_))));
    }

    #[test]
    fn roundtrip_rgb() {
        let img = Image::new(3, 2, 3, (0..18).map(|v| (v * 13) as u8).collect()).unwrap();
        assert_eq!(decode(&encode(&img)).unwrap(), img);
    }
}
