//! Deterministic pseudo-random frame charts for the property suites. Frames
//! are lower triangular with nonvanishing polynomial diagonals, so they are
//! symbolically invertible by construction; the generator is a fixed
//! xorshift, so every suite run sees the same charts.

use crate::chart::FramedChart;
use crate::expr::Expr;
use crate::matrix::ExprMat;
use crate::poly::Symbol;

pub struct DeterministicRng {
    state: u64,
}

impl DeterministicRng {
    pub fn new(seed: u64) -> Self {
        DeterministicRng {
            state: if seed == 0 { 0x9e3779b97f4a7c15 } else { seed },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Small signed integer in `[-3, 3]` excluding 0.
    pub fn small_nonzero(&mut self) -> i64 {
        let v = (self.below(6) as i64) - 3;
        if v >= 0 {
            v + 1
        } else {
            v
        }
    }
}

fn coordinate_symbols(dim: usize) -> Vec<Symbol> {
    (1..=dim).map(|i| Symbol::new(&format!("x{i}"))).collect()
}

/// A random lower-triangular polynomial frame on `dim` coordinates. The
/// diagonal entries are `1 + c x_j^e` with positive square contributions,
/// hence never the zero expression; determinant is their product.
pub fn random_triangular_chart(rng: &mut DeterministicRng, dim: usize) -> FramedChart {
    let coords = coordinate_symbols(dim);
    // Exactly one diagonal row carries a non-unit polynomial so a genuine
    // quotient reaches the curvature; the rest stay 1 to keep the symbolic
    // inverse from piling up dense multivariate denominators.
    let fancy_row = rng.below(dim as u64) as usize;
    let mut rows = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut row = vec![Expr::zero(); dim];
        for slot in row.iter_mut().take(i) {
            // sparse off-diagonal entries: 0, small constant, c * x_k, and in
            // dimension 3 also c / x_k (quotients on 625-component charts
            // cost more than they test)
            match rng.below(4) {
                0 => {}
                1 => *slot = Expr::int(rng.small_nonzero()),
                3 if dim <= 3 => {
                    let k = rng.below(dim as u64) as usize;
                    *slot = Expr::int(rng.small_nonzero())
                        .div(&Expr::sym(coords[k].clone()))
                        .expect("coordinate symbol is nonzero");
                }
                _ => {
                    let k = rng.below(dim as u64) as usize;
                    *slot = Expr::int(rng.small_nonzero()).mul(&Expr::sym(coords[k].clone()));
                }
            }
        }
        row[i] = if i == fancy_row {
            let c = rng.below(3) as i64 + 1;
            let j = rng.below(dim as u64) as usize;
            let xj = Expr::sym(coords[j].clone());
            Expr::one().add(&Expr::int(c).mul(&xj.pow(2).expect("positive power")))
        } else {
            Expr::one()
        };
        rows.push(row);
    }
    FramedChart::from_frame(coords, ExprMat::from_rows(rows).expect("square"), vec![])
        .expect("triangular frame with nonvanishing diagonal is invertible")
}
