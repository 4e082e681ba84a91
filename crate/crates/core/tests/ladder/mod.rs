//! Truncated ladder-operator (harmonic-oscillator basis) representation of
//! x and p, plus a dense complex matrix exponential. In a K-dimensional
//! truncation `[x, p] = i hbar (I - K |K-1><K-1|)`: exactly canonical
//! everywhere except the last basis state, which makes the low-index block
//! a faithful arena for operator identities.

use airy_evolve::operator::OperatorExpr;
use num_complex::Complex64;

/// Dense square complex matrix, row major.
#[derive(Clone)]
pub struct CMat {
    n: usize,
    a: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> CMat {
        CMat { n, a: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> CMat {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    fn get(&self, r: usize, c: usize) -> Complex64 {
        self.a[r * self.n + c]
    }

    fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.a[r * self.n + c] = v;
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let lhs = self.a[r * n + k];
                if lhs.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.a[r * n + c] += lhs * o.a[k * n + c];
                }
            }
        }
        out
    }

    fn add_scaled(&mut self, o: &CMat, s: Complex64) {
        for (d, v) in self.a.iter_mut().zip(&o.a) {
            *d += s * v;
        }
    }

    fn scale(&mut self, s: f64) {
        for v in &mut self.a {
            *v *= s;
        }
    }

    fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Matrix exponential by scaling-and-squaring with a Taylor series.
    pub fn expm(&self) -> CMat {
        let norm = self.max_row_sum();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let mut scaled = self.clone();
        scaled.scale(0.5_f64.powi(squarings as i32));

        let mut result = CMat::identity(self.n);
        let mut term = CMat::identity(self.n);
        for k in 1..200 {
            term = term.mul(&scaled);
            term.scale(1.0 / k as f64);
            result.add_scaled(&term, Complex64::new(1.0, 0.0));
            if term.max_row_sum() < 1e-20 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.mul(&result);
        }
        result
    }

    /// Largest entry-wise deviation from `o` over the leading
    /// `k x k` block.
    pub fn max_block_distance(&self, o: &CMat, k: usize) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..k {
            for c in 0..k {
                worst = worst.max((self.get(r, c) - o.get(r, c)).norm());
            }
        }
        worst
    }
}

/// Position operator `sqrt(hbar/2) (a + a^dag)` in the K-dim ladder basis.
pub fn x_matrix(k: usize, hbar: f64) -> CMat {
    let mut m = CMat::zeros(k);
    for n in 0..k - 1 {
        let v = Complex64::new((hbar * (n as f64 + 1.0) / 2.0).sqrt(), 0.0);
        m.set(n, n + 1, v);
        m.set(n + 1, n, v);
    }
    m
}

/// Momentum operator `i sqrt(hbar/2) (a^dag - a)` in the K-dim ladder basis.
pub fn p_matrix(k: usize, hbar: f64) -> CMat {
    let mut m = CMat::zeros(k);
    for n in 0..k - 1 {
        let v = (hbar * (n as f64 + 1.0) / 2.0).sqrt();
        m.set(n, n + 1, Complex64::new(0.0, -v));
        m.set(n + 1, n, Complex64::new(0.0, v));
    }
    m
}

/// Evaluates a normal-ordered polynomial at the given x and p matrices.
pub fn represent(expr: &OperatorExpr, x: &CMat, p: &CMat) -> CMat {
    let n = x.n;
    let mut out = CMat::zeros(n);
    for ((m_pow, n_pow), coeff) in expr.terms() {
        let mut term = CMat::identity(n);
        for _ in 0..m_pow {
            term = term.mul(x);
        }
        for _ in 0..n_pow {
            term = term.mul(p);
        }
        out.add_scaled(&term, coeff);
    }
    out
}
