//! Dense tensor containers used by the pointwise operations.
//!
//! Antisymmetric arrays store the full coefficient hypercube with no 1/r!
//! weights: a wedge monomial `c * e^A ∧ e^B` contributes `+c` at `(A, B)`
//! and `-c` at `(B, A)`; combinatorial weights appear only inside
//! contraction operations.

/// Rank-2 antisymmetric coefficient array over a `width`-dimensional basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Antisym2 {
    width: usize,
    data: Vec<f64>,
}

impl Antisym2 {
    pub fn zeros(width: usize) -> Self {
        Antisym2 {
            width,
            data: vec![0.0; width * width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.width + b]
    }

    #[inline]
    pub fn set_raw(&mut self, a: usize, b: usize, value: f64) {
        self.data[a * self.width + b] = value;
    }

    /// Adds the wedge monomial `c * e^a ∧ e^b`.
    #[inline]
    pub fn scatter(&mut self, a: usize, b: usize, c: f64) {
        self.data[a * self.width + b] += c;
        self.data[b * self.width + a] -= c;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_matrix(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.width, self.width, |r, c| self.get(r, c))
    }

    /// Projects onto the antisymmetric part. A fixed point of the
    /// projection is returned unchanged, entry for entry.
    pub fn antisymmetrize(&self) -> Antisym2 {
        let w = self.width;
        let mut out = Antisym2::zeros(w);
        for a in 0..w {
            for b in (a + 1)..w {
                let p = self.get(a, b);
                let q = self.get(b, a);
                let m = if p == -q { p } else { (p - q) / 2.0 };
                out.set_raw(a, b, m);
                out.set_raw(b, a, -m);
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        for a in 0..self.width {
            for b in 0..self.width {
                if self.get(a, b) != -self.get(b, a) {
                    return false;
                }
            }
        }
        true
    }
}

/// Rank-3 antisymmetric coefficient array over a `width`-dimensional basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Antisym3 {
    width: usize,
    data: Vec<f64>,
}

/// Permutations of three slots with their signs.
const PERM3: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([1, 0, 2], -1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
];

impl Antisym3 {
    pub fn zeros(width: usize) -> Self {
        Antisym3 {
            width,
            data: vec![0.0; width * width * width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.width + b) * self.width + c
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[self.idx(a, b, c)]
    }

    #[inline]
    pub fn set_raw(&mut self, a: usize, b: usize, c: usize, value: f64) {
        let i = self.idx(a, b, c);
        self.data[i] = value;
    }

    /// Adds the wedge monomial `coef * e^a ∧ e^b ∧ e^c`.
    pub fn scatter(&mut self, a: usize, b: usize, c: usize, coef: f64) {
        if coef == 0.0 {
            return;
        }
        let slots = [a, b, c];
        for (perm, sign) in PERM3 {
            let i = self.idx(slots[perm[0]], slots[perm[1]], slots[perm[2]]);
            self.data[i] += sign * coef;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Projects onto the antisymmetric part; exact on fixed points.
    pub fn antisymmetrize(&self) -> Antisym3 {
        let w = self.width;
        let mut out = Antisym3::zeros(w);
        for a in 0..w {
            for b in (a + 1)..w {
                for c in (b + 1)..w {
                    let slots = [a, b, c];
                    let terms: Vec<f64> = PERM3
                        .iter()
                        .map(|(perm, sign)| {
                            sign * self.get(slots[perm[0]], slots[perm[1]], slots[perm[2]])
                        })
                        .collect();
                    let first = terms[0];
                    let m = if terms.iter().all(|t| *t == first) {
                        first
                    } else {
                        terms.iter().sum::<f64>() / 6.0
                    };
                    for (perm, sign) in PERM3 {
                        let i = out.idx(slots[perm[0]], slots[perm[1]], slots[perm[2]]);
                        out.data[i] = sign * m;
                    }
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        let w = self.width;
        for a in 0..w {
            for b in 0..w {
                for c in 0..w {
                    let v = self.get(a, b, c);
                    if v != -self.get(b, a, c) || v != -self.get(a, c, b) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Plain rank-3 array with no symmetry assumptions.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    pub n: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, value: f64) {
        self.data[(a * self.n + b) * self.n + c] = value;
    }

    #[inline]
    pub fn add(&mut self, a: usize, b: usize, c: usize, value: f64) {
        self.data[(a * self.n + b) * self.n + c] += value;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Plain rank-4 array.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    pub n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Tensor4 {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[((a * self.n + b) * self.n + c) * self.n + d]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, value: f64) {
        self.data[((a * self.n + b) * self.n + c) * self.n + d] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}
