//! Exact rational scalar with a machine-word fast path.
//!
//! Values whose reduced numerator and denominator fit in `i64` are kept
//! inline; anything larger is promoted to a boxed [`BigRational`]. Results
//! are demoted again whenever they fit, so long runs of small arithmetic
//! never allocate.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub(crate) enum Q {
    /// Reduced `num/den` with `den > 0` and `num != i64::MIN`.
    S(i64, i64),
    B(Box<BigRational>),
}

pub(crate) const ZERO: Q = Q::S(0, 1);
pub(crate) const ONE: Q = Q::S(1, 1);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn from_i128(n: i128, d: i128) -> Q {
    debug_assert!(d != 0);
    let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
    if n == 0 {
        return ZERO;
    }
    let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
    if g > 1 {
        n /= g;
        d /= g;
    }
    if n > i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128 {
        Q::S(n as i64, d as i64)
    } else {
        Q::B(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
    }
}

fn demote(r: BigRational) -> Q {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) if n != i64::MIN => Q::S(n, d),
        _ => Q::B(Box::new(r)),
    }
}

impl Q {
    pub(crate) fn from_rational(r: &BigRational) -> Q {
        demote(r.clone())
    }

    pub(crate) fn to_rational(&self) -> BigRational {
        match self {
            Q::S(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::B(b) => (**b).clone(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Q::S(0, _))
    }

    pub(crate) fn signum(&self) -> i32 {
        match self {
            Q::S(n, _) => n.signum() as i32,
            Q::B(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub(crate) fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub(crate) fn neg(&self) -> Q {
        match self {
            Q::S(n, d) => Q::S(-n, *d),
            Q::B(b) => demote(-(**b).clone()),
        }
    }

    pub(crate) fn add(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::S(0, _), _) => o.clone(),
            (_, Q::S(0, _)) => self.clone(),
            (Q::S(a, b), Q::S(c, d)) => {
                if b == d {
                    from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    from_i128(
                        *a as i128 * *d as i128 + *c as i128 * *b as i128,
                        *b as i128 * *d as i128,
                    )
                }
            }
            _ => demote(self.to_rational() + o.to_rational()),
        }
    }

    pub(crate) fn sub(&self, o: &Q) -> Q {
        self.add(&o.neg())
    }

    pub(crate) fn mul(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::S(0, _), _) | (_, Q::S(0, _)) => ZERO,
            (Q::S(1, 1), _) => o.clone(),
            (_, Q::S(1, 1)) => self.clone(),
            (Q::S(a, b), Q::S(c, d)) => from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => demote(self.to_rational() * o.to_rational()),
        }
    }

    pub(crate) fn div(&self, o: &Q) -> Q {
        assert!(!o.is_zero(), "division by zero");
        match (self, o) {
            (Q::S(0, _), _) => ZERO,
            (_, Q::S(1, 1)) => self.clone(),
            (Q::S(a, b), Q::S(c, d)) => from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128),
            _ => demote(self.to_rational() / o.to_rational()),
        }
    }

    /// `self - f * o`, the tableau row update.
    pub(crate) fn sub_mul(&self, f: &Q, o: &Q) -> Q {
        self.sub(&f.mul(o))
    }
}

impl PartialEq for Q {
    fn eq(&self, o: &Q) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Q {}

impl PartialOrd for Q {
    fn partial_cmp(&self, o: &Q) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Q {
    fn cmp(&self, o: &Q) -> Ordering {
        match (self, o) {
            (Q::S(a, b), Q::S(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_rational().cmp(&o.to_rational()),
        }
    }
}

impl Zero for Q {
    fn zero() -> Q {
        ZERO
    }
    fn is_zero(&self) -> bool {
        Q::is_zero(self)
    }
}

impl std::ops::Add for Q {
    type Output = Q;
    fn add(self, o: Q) -> Q {
        Q::add(&self, &o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big() -> Q {
        Q::from_rational(&crate::rational::Rational::from_integer(BigInt::from(i64::MAX) * 4))
    }

    #[test]
    fn promotes_and_demotes() {
        let b = big();
        assert!(matches!(b, Q::B(_)));
        let back = b.div(&Q::S(4, 1));
        assert!(matches!(back, Q::S(i64::MAX, 1)));
        assert!(b.sub(&b).is_zero());
        let m = Q::S(i64::MAX, 1).add(&Q::S(1, 1));
        assert!(matches!(m, Q::B(_)));
        assert_eq!(m.sub(&Q::S(1, 1)), Q::S(i64::MAX, 1));
    }

    proptest! {
        #[test]
        fn agrees_with_big_rationals(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000,
                                      scale in 0u32..3) {
            let k = BigInt::from(10).pow(scale * 9);
            let x = crate::rational::Rational::new(BigInt::from(a) * &k, BigInt::from(b));
            let y = crate::rational::Rational::new(BigInt::from(c), BigInt::from(d) * &k);
            let (qx, qy) = (Q::from_rational(&x), Q::from_rational(&y));
            prop_assert_eq!(qx.add(&qy).to_rational(), &x + &y);
            prop_assert_eq!(qx.sub(&qy).to_rational(), &x - &y);
            prop_assert_eq!(qx.mul(&qy).to_rational(), &x * &y);
            if !y.is_zero() {
                prop_assert_eq!(qx.div(&qy).to_rational(), &x / &y);
            }
            prop_assert_eq!(qx.cmp(&qy), x.cmp(&y));
            prop_assert_eq!(qx.neg().to_rational(), -x.clone());
        }
    }
}
