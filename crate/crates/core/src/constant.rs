use serde::Serialize;

use crate::synthesis::SynthError;

/// Largest register width the crate handles; data registers are packed into
/// a `u64` by the simulator.
pub const MAX_WIDTH: usize = 64;

/// A classical addend reduced modulo `2^width` and split as
/// `odd_part << shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Constant {
    /// The value as supplied by the caller, before reduction.
    pub raw: u64,
    pub width: usize,
    /// `raw mod 2^width`.
    pub value: u64,
    /// Trailing zeros of `value`; equals `width` for the identity constant.
    pub shift: usize,
    /// Odd factor of `value`, or 0 for the identity constant.
    pub odd_part: u64,
}

pub(crate) fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

impl Constant {
    pub fn normalize(raw: u64, width: usize) -> Result<Self, SynthError> {
        if width == 0 {
            return Err(SynthError::WidthZero);
        }
        if width > MAX_WIDTH {
            return Err(SynthError::WidthTooLarge { width, max: MAX_WIDTH });
        }
        let value = raw & low_mask(width);
        if value == 0 {
            return Ok(Self {
                raw,
                width,
                value,
                shift: width,
                odd_part: 0,
            });
        }
        let shift = value.trailing_zeros() as usize;
        Ok(Self {
            raw,
            width,
            value,
            shift,
            odd_part: value >> shift,
        })
    }

    /// Adding zero: the adder is the empty circuit.
    pub fn is_identity(&self) -> bool {
        self.value == 0
    }

    /// Number of high data qubits the adder actually acts on.
    pub fn effective_width(&self) -> usize {
        self.width - self.shift
    }

    /// Bit `i` of the odd part, i.e. bit `i + shift` of the reduced value.
    pub fn bit(&self, i: usize) -> bool {
        i < 64 && (self.odd_part >> i) & 1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_constant_splits_into_shift_and_odd_part() {
        let c = Constant::normalize(12, 4).unwrap();
        assert_eq!((c.shift, c.odd_part, c.effective_width()), (2, 3, 2));
    }

    #[test]
    fn zero_is_identity() {
        let c = Constant::normalize(0, 5).unwrap();
        assert!(c.is_identity());
        assert_eq!(c.effective_width(), 0);
        assert!(Constant::normalize(64, 6).unwrap().is_identity());
    }

    #[test]
    fn oversized_constant_reduces_modulo_width() {
        let c = Constant::normalize(37, 5).unwrap();
        assert_eq!(
            (c.raw, c.value, c.shift, c.odd_part, c.effective_width()),
            (37, 5, 0, 5, 5)
        );
    }

    #[test]
    fn width_bounds() {
        assert_eq!(Constant::normalize(3, 0), Err(SynthError::WidthZero));
        assert!(matches!(
            Constant::normalize(3, 65),
            Err(SynthError::WidthTooLarge { .. })
        ));
        let full = Constant::normalize(u64::MAX, 64).unwrap();
        assert_eq!((full.odd_part, full.shift), (u64::MAX, 0));
    }

    #[test]
    fn reduction_invariant_holds() {
        for width in 1..=8usize {
            for raw in 0..600u64 {
                let c = Constant::normalize(raw, width).unwrap();
                assert_eq!(raw % (1 << width), c.value);
                if !c.is_identity() {
                    assert_eq!(c.odd_part & 1, 1);
                    assert_eq!(c.odd_part << c.shift, c.value);
                    assert!(c.effective_width() >= 1);
                }
            }
        }
    }
}
