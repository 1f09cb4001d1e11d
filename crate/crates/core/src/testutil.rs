//! Shared helpers for the in-crate test suites.

use rand::Rng;

use crate::fplinalg::{FpMatrix, PrimeField};

/// Random symplectic `2n x 2n` matrix built as a word in the generators
/// (shears, per-mode fourier maps, scalings, mode swaps).
pub fn random_symplectic(rng: &mut impl Rng, field: PrimeField, n: usize) -> FpMatrix {
    let dim = 2 * n;
    let mut s = FpMatrix::identity(field, dim);
    let d = field.order();
    for _ in 0..12 {
        let mode = rng.random_range(0..n);
        let kind = rng.random_range(0..4u8);
        let mut rows = vec![vec![0u64; dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = 1;
        }
        let (q, p) = (2 * mode, 2 * mode + 1);
        match kind {
            0 => {
                let c = rng.random_range(0..d);
                rows[p][q] = c;
            }
            1 => {
                rows[q][q] = 0;
                rows[q][p] = field.neg(1);
                rows[p][q] = 1;
                rows[p][p] = 0;
            }
            2 => {
                let a = rng.random_range(1..d);
                rows[q][q] = a;
                rows[p][p] = field.inv(a);
            }
            _ => {
                if n > 1 {
                    let other = (mode + 1) % n;
                    let (q2, p2) = (2 * other, 2 * other + 1);
                    rows[q][q] = 0;
                    rows[p][p] = 0;
                    rows[q2][q2] = 0;
                    rows[p2][p2] = 0;
                    rows[q][q2] = 1;
                    rows[q2][q] = 1;
                    rows[p][p2] = 1;
                    rows[p2][p] = 1;
                }
            }
        }
        let refs: Vec<&[u64]> = rows.iter().map(|r| r.as_slice()).collect();
        let g = FpMatrix::from_rows(field, &refs).unwrap();
        s = g.mul(&s).unwrap();
    }
    assert!(s.is_symplectic().unwrap());
    s
}
