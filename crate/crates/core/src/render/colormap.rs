use serde::{Deserialize, Serialize};

use super::Image;
use crate::field::ScalarField;
use crate::{Error, Result};

pub type Rgb = [u8; 3];

pub const BLUE: Rgb = [0x21, 0x66, 0xAC];
pub const WHITE: Rgb = [0xF7, 0xF7, 0xF7];
pub const RED: Rgb = [0xB2, 0x18, 0x2B];

/// Diverging blue-white-red ramp, clamped outside `[low, high]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorMap {
    pub low: f64,
    pub center: f64,
    pub high: f64,
    pub low_color: Rgb,
    pub center_color: Rgb,
    pub high_color: Rgb,
}

impl Default for ColorMap {
    fn default() -> Self {
        ColorMap::new(0.95, 1.0, 1.05)
    }
}

impl ColorMap {
    pub fn new(low: f64, center: f64, high: f64) -> Self {
        ColorMap {
            low,
            center,
            high,
            low_color: BLUE,
            center_color: WHITE,
            high_color: RED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.low < self.center && self.center < self.high) || !self.high.is_finite() || !self.low.is_finite() {
            return Err(Error::invalid("colormap bounds must satisfy low < center < high"));
        }
        Ok(())
    }

    pub fn color(&self, v: f64) -> Rgb {
        self.color_exact(v).map(|x| x.round().clamp(0.0, 255.0) as u8)
    }

    /// Channel values before rounding to 8 bits.
    pub fn color_exact(&self, v: f64) -> [f64; 3] {
        let v = v.clamp(self.low, self.high);
        if v <= self.center {
            lerp(self.low_color, self.center_color, (v - self.low) / (self.center - self.low))
        } else {
            lerp(self.center_color, self.high_color, (v - self.center) / (self.high - self.center))
        }
    }
}

fn lerp(a: Rgb, b: Rgb, t: f64) -> [f64; 3] {
    std::array::from_fn(|c| f64::from(a[c]) + t * (f64::from(b[c]) - f64::from(a[c])))
}

pub fn hex_color(c: Rgb) -> String {
    format!("#{:02X}{:02X}{:02X}", c[0], c[1], c[2])
}

/// One pixel per raster cell; undefined cells get `background`.
pub fn apply_colormap(field: &ScalarField, map: &ColorMap, background: Rgb) -> Result<Image> {
    map.validate()?;
    let mut img = Image::new(field.grid.n_cols, field.grid.n_rows, background)?;
    for (px, &v) in img.pixels.iter_mut().zip(&field.values) {
        if !v.is_nan() {
            *px = map.color(v);
        }
    }
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchors() {
        let m = ColorMap::default();
        assert_eq!(m.color(1.0), WHITE);
        assert_eq!(m.color(0.95), BLUE);
        assert_eq!(m.color(1.05), RED);
        assert_eq!(m.color(0.90), m.color(0.95));
        assert_eq!(m.color(1.2), RED);
    }

    #[test]
    fn higher_voltage_is_never_bluer() {
        // Blueness is measured as blue minus red; the raw red channel rises
        // from the blue end to white and falls again toward the red end.
        // Rounding each channel can wobble the 8-bit difference by one.
        let m = ColorMap::default();
        let exact = |v: f64| {
            let c = m.color_exact(v);
            c[2] - c[0]
        };
        let rounded = |v: f64| {
            let c = m.color(v);
            i32::from(c[2]) - i32::from(c[0])
        };
        let (mut prev, mut prev_r) = (exact(0.95), rounded(0.95));
        for i in 1..=1000 {
            let v = 0.95 + 0.1 * i as f64 / 1000.0;
            assert!(exact(v) <= prev);
            assert!(rounded(v) <= prev_r + 1);
            prev = exact(v);
            prev_r = prev_r.min(rounded(v));
        }
    }

    #[test]
    fn each_half_is_channelwise_monotone() {
        let m = ColorMap::default();
        let mut prev = m.color(0.95);
        for i in 1..=500 {
            let c = m.color(0.95 + 0.05 * i as f64 / 500.0);
            assert!(c[0] >= prev[0] && c[1] >= prev[1] && c[2] >= prev[2]);
            prev = c;
        }
        for i in 1..=500 {
            let c = m.color(1.0 + 0.05 * i as f64 / 500.0);
            assert!(c[0] <= prev[0] && c[1] <= prev[1] && c[2] <= prev[2]);
            prev = c;
        }
    }

    #[test]
    fn hex_formatting() {
        assert_eq!(hex_color(BLUE), "#2166AC");
    }

    #[test]
    fn bad_bounds() {
        assert!(ColorMap::new(1.0, 1.0, 1.05).validate().is_err());
    }
}
