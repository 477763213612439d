//! 16.16 fixed-point map coordinates and binary angles.

use core::fmt;
use core::ops::{Add, Neg, Sub};

pub const FRACBITS: u32 = 16;
pub const FRACUNIT: i32 = 1 << FRACBITS;

/// A 16.16 fixed-point value in map units.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed(pub i32);

impl Fixed {
    pub const ZERO: Fixed = Fixed(0);

    pub const fn from_int(v: i32) -> Fixed {
        Fixed(v << FRACBITS)
    }

    /// Nearest representable value; saturates outside the 16.16 range.
    pub fn from_f64(v: f64) -> Fixed {
        let raw = libm::round(v * FRACUNIT as f64);
        if raw.is_nan() {
            Fixed(0)
        } else if raw >= i32::MAX as f64 {
            Fixed(i32::MAX)
        } else if raw <= i32::MIN as f64 {
            Fixed(i32::MIN)
        } else {
            Fixed(raw as i32)
        }
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / FRACUNIT as f64
    }

    /// Value in thousandths of a map unit, rounded half away from zero.
    pub fn to_milli(self) -> i64 {
        let scaled = self.0 as i64 * 1000;
        let half = (FRACUNIT / 2) as i64;
        if scaled >= 0 {
            (scaled + half) >> FRACBITS
        } else {
            -((-scaled + half) >> FRACBITS)
        }
    }
}

impl Add for Fixed {
    type Output = Fixed;
    fn add(self, rhs: Fixed) -> Fixed {
        Fixed(self.0.wrapping_add(rhs.0))
    }
}

impl Sub for Fixed {
    type Output = Fixed;
    fn sub(self, rhs: Fixed) -> Fixed {
        Fixed(self.0.wrapping_sub(rhs.0))
    }
}

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(self.0.wrapping_neg())
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_milli(f, self.to_milli())
    }
}

/// Writes a thousandths count as a decimal with exactly three fraction digits.
pub(crate) fn fmt_milli(f: &mut impl fmt::Write, milli: i64) -> fmt::Result {
    let sign = if milli < 0 { "-" } else { "" };
    let abs = milli.unsigned_abs();
    write!(f, "{}{}.{:03}", sign, abs / 1000, abs % 1000)
}

/// Binary angle: the full turn maps onto the `u32` range, 0 = east,
/// counter-clockwise positive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(pub u32);

const TURN: f64 = 4_294_967_296.0;

impl Angle {
    pub const ANG45: Angle = Angle(0x2000_0000);
    pub const ANG90: Angle = Angle(0x4000_0000);

    /// Any finite degree value, wrapped into one turn.
    pub fn from_degrees(deg: f64) -> Angle {
        let turns = deg / 360.0;
        let frac = turns - libm::floor(turns);
        let raw = libm::round(frac * TURN);
        Angle((raw as u64 & 0xffff_ffff) as u32)
    }

    pub fn degrees(self) -> f64 {
        self.0 as f64 * (360.0 / TURN)
    }

    pub fn radians(self) -> f64 {
        self.0 as f64 * (core::f64::consts::TAU / TURN)
    }

    pub fn wrapping_add(self, rhs: Angle) -> Angle {
        Angle(self.0.wrapping_add(rhs.0))
    }

    pub fn wrapping_sub(self, rhs: Angle) -> Angle {
        Angle(self.0.wrapping_sub(rhs.0))
    }

    /// Angle of the vector `(dx, dy)`.
    pub fn of_vector(dx: f64, dy: f64) -> Angle {
        let rad = libm::atan2(dy, dx);
        Angle::from_degrees(rad.to_degrees())
    }
}
