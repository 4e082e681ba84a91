//! Extended-precision Maclaurin oracle for Ai, independent of the library
//! implementation: its own float-float arithmetic (Dekker splitting, no
//! FMA), its own recurrence code. Accuracy is limited by the largest series
//! term times ~1e-32, i.e. well under 1e-14 absolute on [-15, 8].

/// Unevaluated `hi + lo` pair, ~31 significant digits.
#[derive(Clone, Copy)]
pub struct F2 {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    (s, (a - (s - v)) + (b - v))
}

const SPLITTER: f64 = 134217729.0; // 2^27 + 1

fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl F2 {
    pub fn of(v: f64) -> F2 {
        F2 { hi: v, lo: 0.0 }
    }

    fn add(self, o: F2) -> F2 {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = two_sum(s, e + self.lo + o.lo);
        F2 { hi, lo }
    }

    fn mul(self, o: F2) -> F2 {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
        F2 { hi, lo }
    }

    fn div_int(self, d: f64) -> F2 {
        let q0 = self.hi / d;
        let (p, e) = two_prod(q0, d);
        let (s, e2) = two_sum(self.hi, -p);
        let q1 = (s + (e2 + self.lo - e)) / d;
        let (hi, lo) = two_sum(q0, q1);
        F2 { hi, lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

// Ai(0) and Ai'(0) as hi/lo pairs (36-digit references rounded to
// double-double).
const AI_AT_0: F2 = F2 { hi: 0.3550280538878172, lo: 2.05233632436212e-17 };
const AIP_AT_0: F2 = F2 { hi: -0.2588194037928068, lo: 2.522243111610832e-17 };

/// Applies `absorb(k, f_k x^{3k}, g_k x^{3k+1})` over the Maclaurin terms of
/// the two fundamental solutions.
fn sweep(x: f64, mut absorb: impl FnMut(usize, F2, F2)) {
    let xd = F2::of(x);
    let x3 = xd.mul(xd).mul(xd);
    let mut f = F2::of(1.0);
    let mut g = xd;
    absorb(0, f, g);
    for k in 1..140 {
        f = f.mul(x3).div_int(((3 * k - 1) * 3 * k) as f64);
        g = g.mul(x3).div_int((3 * k * (3 * k + 1)) as f64);
        absorb(k, f, g);
        if f.hi.abs() < 1e-45 && g.hi.abs() < 1e-45 {
            break;
        }
    }
}

/// Ai(x) from the extended-precision Maclaurin series.
pub fn airy_series(x: f64) -> f64 {
    let mut fs = F2::of(0.0);
    let mut gs = F2::of(0.0);
    sweep(x, |_, f, g| {
        fs = fs.add(f);
        gs = gs.add(g);
    });
    AI_AT_0.mul(fs).add(AIP_AT_0.mul(gs)).value()
}

/// Ai'(x) from the term-wise differentiated series.
pub fn airy_prime_series(x: f64) -> f64 {
    if x == 0.0 {
        return AIP_AT_0.value();
    }
    let mut fps = F2::of(0.0);
    let mut gps = F2::of(0.0);
    sweep(x, |k, f, g| {
        if k > 0 {
            fps = fps.add(f.mul(F2::of(3.0 * k as f64)).div_int(x));
        }
        gps = gps.add(g.mul(F2::of((3 * k + 1) as f64)).div_int(x));
    });
    AI_AT_0.mul(fps).add(AIP_AT_0.mul(gps)).value()
}

/// Root of `f` in `[lo, hi]` by bisection; requires a sign change.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fmid = f(mid);
        if flo * fmid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    0.5 * (lo + hi)
}
