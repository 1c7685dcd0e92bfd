//! Kronecker symbols and the quadratic character of `ℚ(√−d)`.

use crate::arith;
use crate::error::{Error, Result};

/// Squarefree `d` for which `𝒪_K` is a principal ideal domain.
pub const CLASS_NUMBER_ONE: [u64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// Kronecker symbol `(a/n)` for arbitrary integers, with `(a/0) = 1` for
/// `a = ±1` and `0` otherwise.
pub fn kronecker(a: i64, n: i64) -> i32 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return (a == 1 || a == -1) as i32;
    }
    let mut result = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // (a/2) supplement
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= twos;
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a/n), n odd and positive
    a = a.rem_euclid(n);
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Discriminant bookkeeping for `K = ℚ(√−d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldParams {
    pub d: u64,
    pub discriminant: i64,
    pub conductor: u64,
    pub two_unramified: bool,
    pub class_number_one: bool,
}

pub fn field_params(d: u64) -> Result<FieldParams> {
    if !arith::is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    let two_unramified = d % 4 == 3;
    let discriminant = if two_unramified {
        -(d as i64)
    } else {
        -4 * d as i64
    };
    Ok(FieldParams {
        d,
        discriminant,
        conductor: discriminant.unsigned_abs(),
        two_unramified,
        class_number_one: CLASS_NUMBER_ONE.contains(&d),
    })
}

impl FieldParams {
    pub fn character(&self) -> QuadChar {
        QuadChar { params: *self }
    }
}

/// `χ_D(m) = (D/m)` for the fundamental discriminant `D < 0` of `ℚ(√−d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadChar {
    pub params: FieldParams,
}

impl QuadChar {
    pub fn for_field(d: u64) -> Result<Self> {
        Ok(field_params(d)?.character())
    }

    /// Character of a negative fundamental discriminant `D`.
    pub fn from_discriminant(disc: i64) -> Result<Self> {
        if disc >= 0 {
            return Err(Error::InvalidDiscriminant(disc));
        }
        let m = disc.unsigned_abs();
        let d = match m % 4 {
            3 => m,
            0 if matches!((m / 4) % 4, 1 | 2) => m / 4,
            _ => return Err(Error::InvalidDiscriminant(disc)),
        };
        let params = field_params(d).map_err(|_| Error::InvalidDiscriminant(disc))?;
        debug_assert_eq!(params.discriminant, disc);
        Ok(params.character())
    }

    pub fn discriminant(&self) -> i64 {
        self.params.discriminant
    }

    pub fn conductor(&self) -> u64 {
        self.params.conductor
    }

    pub fn eval(&self, m: i64) -> i32 {
        kronecker(self.params.discriminant, m)
    }
}

pub fn chi(character: &QuadChar, m: i64) -> i32 {
    character.eval(m)
}
