use std::path::Path;

use super::Rgb;
use crate::{Error, Result};

/// 8-bit RGB raster, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Rgb>,
}

impl Image {
    pub fn new(width: usize, height: usize, fill: Rgb) -> Result<Image> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be nonzero"));
        }
        if width > u32::MAX as usize || height > u32::MAX as usize {
            return Err(Error::invalid("image is too large"));
        }
        Ok(Image {
            width,
            height,
            pixels: vec![fill; width * height],
        })
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: i64, y: i64, c: Rgb) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            self.pixels[y as usize * self.width + x as usize] = c;
        }
    }

    /// PNG bytes. Identical images always encode to identical bytes.
    pub fn encode_png(&self) -> Result<Vec<u8>> {
        if self.width == 0 || self.height == 0 || self.pixels.len() != self.width * self.height {
            return Err(Error::invalid("cannot encode an empty image"));
        }
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width as u32, self.height as u32);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header().map_err(|e| Error::Encode(e.to_string()))?;
            let flat: Vec<u8> = self.pixels.iter().flatten().copied().collect();
            w.write_image_data(&flat).map_err(|e| Error::Encode(e.to_string()))?;
        }
        Ok(out)
    }

    pub fn write_png(&self, path: &Path) -> Result<()> {
        let bytes = self.encode_png()?;
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decode(bytes: &[u8]) -> (u32, u32, Vec<u8>) {
        let dec = png::Decoder::new(bytes);
        let mut reader = dec.read_info().unwrap();
        let mut buf = vec![0; reader.output_buffer_size()];
        let info = reader.next_frame(&mut buf).unwrap();
        buf.truncate(info.buffer_size());
        (info.width, info.height, buf)
    }

    #[test]
    fn single_white_pixel_round_trip() {
        let img = Image::new(1, 1, [247, 247, 247]).unwrap();
        let (w, h, data) = decode(&img.encode_png().unwrap());
        assert_eq!((w, h, data), (1, 1, vec![247, 247, 247]));
    }

    #[test]
    fn encoding_is_deterministic() {
        let mut img = Image::new(7, 3, [1, 2, 3]).unwrap();
        img.set(2, 1, [200, 0, 9]);
        assert_eq!(img.encode_png().unwrap(), img.clone().encode_png().unwrap());
    }

    #[test]
    fn zero_size_is_an_error() {
        assert!(Image::new(0, 4, [0, 0, 0]).is_err());
        let empty = Image {
            width: 0,
            height: 0,
            pixels: vec![],
        };
        assert!(empty.encode_png().is_err());
    }

    #[test]
    fn out_of_bounds_set_is_ignored() {
        let mut img = Image::new(2, 2, [0, 0, 0]).unwrap();
        img.set(-1, 0, [9, 9, 9]);
        img.set(2, 1, [9, 9, 9]);
        assert!(img.pixels.iter().all(|&p| p == [0, 0, 0]));
    }
}
