//! Scalar types the point-level machinery is generic over.
//!
//! `f64` (and `f32`) are the working types. [`Dyadic`] is an exact binary
//! rational, `m · 2^e` with an arbitrary-size integer mantissa. Every finite
//! float is dyadic and affine maps with float coefficients keep points dyadic,
//! so orbits of the gallery maps can be iterated without any rounding. That
//! matters when an orbit accumulates on the discontinuity set: in `f64` such
//! an orbit lands on the boundary after ~50 steps purely through rounding.

use num_bigint::{BigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Arithmetic needed to evaluate affine maps and boundary functions at a point.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True when ring operations never round.
    const EXACT: bool;

    /// Converts a finite float. `None` for NaN and infinities.
    fn from_f64(v: f64) -> Option<Self>;

    /// Nearest (or near) `f64`; lossy for exact types.
    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `log₂ |x|`, `-inf` at zero. Exact types stay accurate far below the
    /// `f64` range.
    fn log2_abs(&self) -> f64;

    /// `⌊x · 2^bits⌋`, exactly. `None` for non-finite floats.
    fn floor_scaled(&self, bits: u32) -> Option<BigInt>;

    /// `y · sin(−ln |y|)`, extended by 0 at `y = 0`.
    ///
    /// Not representable for exact types, which return `None`.
    fn osc_log_term(y: &Self) -> Option<Self>;
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_f64(v: f64) -> Option<Self> {
                v.is_finite().then_some(v as $t)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }

            fn log2_abs(&self) -> f64 {
                (*self as f64).abs().log2()
            }

            fn floor_scaled(&self, bits: u32) -> Option<BigInt> {
                Dyadic::from_f64(*self as f64)?.floor_scaled(bits)
            }

            fn osc_log_term(y: &Self) -> Option<Self> {
                if *y == 0.0 {
                    Some(0.0)
                } else {
                    Some(*y * (-(y.abs().ln())).sin())
                }
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

/// Exact binary rational `mant · 2^exp`.
///
/// Kept normalized: the mantissa is odd, or zero with `exp == 0`, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Self { mant, exp }
        } else {
            Self {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Size of the mantissa in bits; grows by about one bit per affine step.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    pub fn signum(&self) -> Ordering {
        match self.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    fn aligned(a: &Self, b: &Self) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        let am = &a.mant << ((a.exp - e) as u64);
        let bm = &b.mant << ((b.exp - e) as u64);
        (am, bm, e)
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    e = e.clamp(-2400, 2400);
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Self {
            mant: BigInt::one(),
            exp: 0,
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        // shift only the operand with the larger exponent
        let (hi, lo) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let shift = (hi.exp - lo.exp) as u64;
        Dyadic::new((hi.mant << shift) + lo.mant, lo.exp)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;

    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;

    fn mul(self, rhs: Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // odd * odd is odd, so the product is already normalized
        Dyadic {
            mant: self.mant * rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb || sa == Ordering::Equal {
            return sa.cmp(&sb);
        }
        // |x| lies in [2^(bits+exp-1), 2^(bits+exp)), so differing tops decide
        let ta = self.mant.bits() as i64 + self.exp;
        let tb = other.mant.bits() as i64 + other.exp;
        if ta != tb {
            let mag = ta.cmp(&tb);
            return if sa == Ordering::Less { mag.reverse() } else { mag };
        }
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mant.bits() <= 64 {
            write!(f, "{}*2^{}", self.mant, self.exp)
        } else {
            write!(f, "~{:e} ({} bits)", self.to_f64(), self.mant.bits())
        }
    }
}

impl Scalar for Dyadic {
    const EXACT: bool = true;

    fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = v.to_bits();
        let negative = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(m);
        Some(Dyadic::new(if negative { -m } else { m }, e))
    }

    fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let mag = self.mant.magnitude();
        let bits = mag.bits();
        let (top, shift) = if bits > 64 {
            let shift = bits - 64;
            ((mag >> shift).to_u64().unwrap_or(u64::MAX), shift as i64)
        } else {
            (mag.to_u64().unwrap_or(u64::MAX), 0)
        };
        let v = ldexp(top as f64, self.exp + shift);
        if self.mant.sign() == Sign::Minus {
            -v
        } else {
            v
        }
    }

    fn abs(&self) -> Self {
        Dyadic {
            mant: BigInt::from_biguint(Sign::Plus, self.mant.magnitude().clone()),
            exp: self.exp,
        }
    }

    fn log2_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        let mag = self.mant.magnitude();
        let bits = mag.bits();
        let shift = bits.saturating_sub(64);
        let top = (mag >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        top.log2() + (self.exp + shift as i64) as f64
    }

    fn floor_scaled(&self, bits: u32) -> Option<BigInt> {
        let e = self.exp + bits as i64;
        // BigInt's right shift rounds toward negative infinity
        Some(if e >= 0 { &self.mant << (e as u64) } else { &self.mant >> ((-e) as u64) })
    }

    fn osc_log_term(_y: &Self) -> Option<Self> {
        None
    }
}
