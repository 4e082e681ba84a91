//! Minimal double-double (~31 significant digits) arithmetic.
//!
//! The Maclaurin branch of the Airy evaluator needs more than f64 working
//! precision: on the positive axis the two series sums cancel to a result
//! e^{-2ζ} smaller than the sums themselves, so the last bits of an f64
//! accumulation are already noise near the series/asymptotic switch point.
//! Only the operations the series recurrences need are implemented.

/// Unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, f: f64) -> Dd {
        self.mul(Dd::from_f64(f))
    }

    /// Quotient by an f64 divisor, one Newton correction.
    #[inline]
    pub fn div_f64(self, d: f64) -> Dd {
        let q0 = self.hi / d;
        let (p, e) = two_prod(q0, d);
        let (s, e2) = two_sum(self.hi, -p);
        let r = s + (e2 + self.lo - e);
        let q1 = r / d;
        let (hi, lo) = two_sum(q0, q1);
        Dd { hi, lo }
    }
}
