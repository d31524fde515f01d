//! Closed-interval arithmetic with outward rounding, and interval evaluation
//! of [`Expr`] over a box.
//!
//! Every operation widens its result by one ulp on each side, which keeps the
//! enclosure valid under round-to-nearest for `+ - *` and gives a comfortable
//! margin for the library `sin`, `cos`, `exp`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::ToPrimitive;

use crate::symbolic::Expr;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn outward(lo: f64, hi: f64) -> Interval {
    if lo.is_nan() || hi.is_nan() {
        return Interval::ENTIRE;
    }
    Interval {
        lo: lo.next_down(),
        hi: hi.next_up(),
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Largest absolute value.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn recip(self) -> Interval {
        if self.contains_zero() {
            return Interval::ENTIRE;
        }
        outward(1.0 / self.hi, 1.0 / self.lo)
    }

    pub fn powi(self, n: i64) -> Interval {
        if n == 0 {
            return Interval::point(1.0);
        }
        if n < 0 {
            return self.powi(-n).recip();
        }
        let p = |x: f64| match i32::try_from(n) {
            Ok(k) => x.powi(k),
            Err(_) => x.powf(n as f64),
        };
        if n % 2 == 1 || self.lo >= 0.0 {
            outward(p(self.lo), p(self.hi))
        } else if self.hi <= 0.0 {
            outward(p(self.hi), p(self.lo))
        } else {
            outward(0.0, p(self.mag())).clamp_below(0.0)
        }
    }

    fn clamp_below(self, floor: f64) -> Interval {
        Interval {
            lo: self.lo.max(floor),
            hi: self.hi,
        }
    }

    pub fn exp(self) -> Interval {
        let i = outward(self.lo.exp(), self.hi.exp());
        i.clamp_below(0.0)
    }

    pub fn sin(self) -> Interval {
        if !self.is_finite() || self.width() >= TAU {
            return Interval::new(-1.0, 1.0);
        }
        let (a, b) = (self.lo.sin(), self.hi.sin());
        let mut lo = a.min(b);
        let mut hi = a.max(b);
        // maxima at pi/2 + 2 pi k, minima at -pi/2 + 2 pi k
        let k = ((self.lo - FRAC_PI_2) / TAU).ceil();
        if FRAC_PI_2 + k * TAU <= self.hi + 1e-15 * self.mag().max(1.0) {
            hi = 1.0;
        }
        let k = ((self.lo + FRAC_PI_2) / TAU).ceil();
        if -FRAC_PI_2 + k * TAU <= self.hi + 1e-15 * self.mag().max(1.0) {
            lo = -1.0;
        }
        let i = outward(lo, hi);
        Interval {
            lo: i.lo.max(-1.0),
            hi: i.hi.min(1.0),
        }
    }

    pub fn cos(self) -> Interval {
        (self + Interval::point(FRAC_PI_2)).sin()
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        outward(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        outward(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let prods = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        // 0 * inf is NaN; a zero factor makes the product zero.
        let clean = |p: f64| if p.is_nan() { 0.0 } else { p };
        let lo = prods.iter().copied().map(clean).fold(f64::INFINITY, f64::min);
        let hi = prods.iter().copied().map(clean).fold(f64::NEG_INFINITY, f64::max);
        outward(lo, hi)
    }
}

fn const_interval(c: &num_rational::BigRational) -> Interval {
    let v = c.to_f64().unwrap_or(f64::NAN);
    outward(v, v)
}

/// Enclosure of `e` over the box `x` (`x[i]` is the range of `x_{i+1}`).
pub fn eval_interval(e: &Expr, x: &[Interval]) -> Interval {
    match e {
        Expr::Const(c) => {
            if c.is_integer() && c.numer().bits() < 53 {
                Interval::point(c.to_f64().unwrap_or(f64::NAN))
            } else {
                const_interval(c)
            }
        }
        Expr::Var(i) => x[*i - 1],
        Expr::Pow(b, n) => eval_interval(b, x).powi(*n),
        Expr::Mul(fs) => fs
            .iter()
            .fold(Interval::point(1.0), |acc, f| acc * eval_interval(f, x)),
        Expr::Add(ts) => ts
            .iter()
            .fold(Interval::point(0.0), |acc, t| acc + eval_interval(t, x)),
        Expr::Neg(b) => -eval_interval(b, x),
        Expr::Sin(u) => eval_interval(u, x).sin(),
        Expr::Cos(u) => eval_interval(u, x).cos(),
        Expr::Exp(u) => eval_interval(u, x).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{eval, parse, Point};
    use proptest::prelude::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b)
    }

    #[test]
    fn even_power_straddling_zero() {
        let r = iv(-2.0, 1.0).powi(2);
        assert_eq!(r.lo, 0.0);
        assert!(r.hi >= 4.0 && r.hi < 4.0 + 1e-12);
    }

    #[test]
    fn reciprocal_through_zero_is_entire() {
        assert_eq!(iv(-1.0, 1.0).powi(-1), Interval::ENTIRE);
        let r = iv(2.0, 4.0).powi(-1);
        assert!(r.contains(0.25) && r.contains(0.5));
    }

    #[test]
    fn sin_picks_up_extrema() {
        let r = iv(0.0, 2.0).sin();
        assert!(r.hi >= 1.0);
        assert!(r.lo <= 0.0 && r.lo > -1e-12);
        let r = iv(3.0, 7.0).sin();
        assert_eq!(r.lo, -1.0);
        let r = iv(0.0, 7.0).cos();
        assert_eq!((r.lo, r.hi), (-1.0, 1.0));
    }

    #[test]
    fn constant_is_tight() {
        let e = parse("4", 1).unwrap();
        assert_eq!(eval_interval(&e, &[iv(0.0, 1.0)]), Interval::point(4.0));
    }

    proptest! {
        #[test]
        fn enclosure_contains_samples(
            a in -2.0f64..2.0, w in 0.0f64..1.5, b in -2.0f64..2.0, v in 0.0f64..1.5,
            s in 0.0f64..=1.0, t in 0.0f64..=1.0, which in 0usize..4,
        ) {
            let texts = [
                "x1^2*x2 - 3*x1 + exp(x2)",
                "sin(3*x1 - x2)*cos(x1*x2)",
                "(x1 - x2)^3 - x1^4/5",
                "exp(x1)*sin(10*x2)/10",
            ];
            let e = parse(texts[which], 2).unwrap();
            let bx = [iv(a, a + w), iv(b, b + v)];
            let p = Point(vec![a + s * w, b + t * v]);
            let val = eval(&e, &p).unwrap();
            let r = eval_interval(&e, &bx);
            prop_assert!(r.lo <= val && val <= r.hi, "{val} not in {r:?}");
        }
    }
}
