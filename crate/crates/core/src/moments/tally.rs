//! Trace tallies `N_a(c) = #{x in F_q^x : tr(x + a/x) = c}` for every `a`.
//!
//! With `T[i] = tr(g^i)`, the row for `a = g^j` is `N(c) = #{i : T[i] + T[j-i] = c}`,
//! a cyclic convolution over `Z/(q-1)` of the indicator vectors of `T = c`.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::arith::ExtField;
use crate::error::{Error, Result};

/// Cap on `p * (q - 1)`, the number of complex cells held by the FFT route.
pub const DEFAULT_FFT_BUDGET: u64 = 1 << 24;

/// `counts[j * p + c] = N_{g^j}(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTallies {
    p: u64,
    q: u64,
    counts: Vec<u32>,
}

impl TraceTallies {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn rows(&self) -> impl IndexedParallelIterator<Item = &[u32]> {
        self.counts.par_chunks(self.p as usize)
    }

    /// Tally for `a = g^j`.
    pub fn row(&self, j: u64) -> &[u32] {
        let p = self.p as usize;
        &self.counts[j as usize * p..(j as usize + 1) * p]
    }
}

/// Direct `O(q)`-per-row tally; the reference.
pub fn tallies_direct(field: &ExtField) -> TraceTallies {
    let p = field.characteristic();
    let q = field.order();
    let n = (q - 1) as usize;
    let tr = field.trace_of_powers();
    let mut counts = vec![0u32; n * p as usize];
    counts
        .par_chunks_mut(p as usize)
        .enumerate()
        .for_each(|(j, row)| tally_row_into(tr, j, p, row));
    TraceTallies { p, q, counts }
}

/// Tally of a single `a = g^j`.
pub fn tally_row(field: &ExtField, j: u64) -> Vec<u32> {
    let p = field.characteristic();
    let mut row = vec![0; p as usize];
    let n = field.order() - 1;
    tally_row_into(field.trace_of_powers(), (j % n) as usize, p, &mut row);
    row
}

fn tally_row_into(tr: &[u32], j: usize, p: u64, row: &mut [u32]) {
    let n = tr.len();
    let p = p as u32;
    for i in 0..n {
        let k = if j >= i { j - i } else { j + n - i };
        let c = tr[i] + tr[k];
        row[(if c >= p { c - p } else { c }) as usize] += 1;
    }
}

/// All tallies through `p` forward FFTs of length `q - 1`, a length-`p`
/// cyclic convolution at each frequency and `p` inverse FFTs. The integer
/// results are certified by their rounding margin and by row sums.
pub fn tallies_fft(field: &ExtField, budget: u64) -> Result<TraceTallies> {
    let p = field.characteristic();
    let q = field.order();
    let n = (q - 1) as usize;
    let pu = p as usize;
    let cells = p as u128 * n as u128;
    if cells > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "tally convolution",
            size: cells,
            budget: budget as u128,
        });
    }
    let tr = field.trace_of_powers();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);

    let spectra: Vec<Vec<Complex64>> = (0..p as u32)
        .into_par_iter()
        .map(|c| {
            let mut v: Vec<Complex64> = tr
                .iter()
                .map(|&t| Complex64::new(if t == c { 1.0 } else { 0.0 }, 0.0))
                .collect();
            fwd.process(&mut v);
            v
        })
        .collect();

    // Frequency-wise cyclic convolution over c, written column by column.
    let mut conv: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; pu];
    {
        let chunk = 4096;
        let pieces: Vec<(usize, Vec<Complex64>)> = (0..n)
            .into_par_iter()
            .step_by(chunk)
            .map(|start| {
                let end = (start + chunk).min(n);
                let mut out = vec![Complex64::new(0.0, 0.0); (end - start) * pu];
                let mut col = vec![Complex64::new(0.0, 0.0); pu];
                for w in start..end {
                    for (c, s) in spectra.iter().enumerate() {
                        col[c] = s[w];
                    }
                    let base = (w - start) * pu;
                    for c1 in 0..pu {
                        let a = col[c1];
                        if a.norm_sqr() == 0.0 {
                            continue;
                        }
                        for c2 in 0..pu {
                            let c = (c1 + c2) % pu;
                            out[base + c] += a * col[c2];
                        }
                    }
                }
                (start, out)
            })
            .collect();
        drop(spectra);
        for (start, out) in pieces {
            for (off, cell) in out.chunks(pu).enumerate() {
                for (c, &v) in cell.iter().enumerate() {
                    conv[c][start + off] = v;
                }
            }
        }
    }
    conv.par_iter_mut().for_each(|v| inv.process(v));

    let scale = 1.0 / n as f64;
    let mut counts = vec![0u32; n * pu];
    let mut worst = 0.0f64;
    for (c, v) in conv.iter().enumerate() {
        for (j, z) in v.iter().enumerate() {
            let x = z.re * scale;
            let r = x.round();
            worst = worst.max((x - r).abs()).max((z.im * scale).abs());
            if r < 0.0 {
                return Err(Error::check("tally-fft", format!("negative count at j={j}, c={c}")));
            }
            counts[j * pu + c] = r as u32;
        }
    }
    if worst >= 0.25 {
        return Err(Error::check(
            "tally-fft",
            format!("rounding margin {worst:.3e} too large for q={q}"),
        ));
    }
    if let Some(j) = counts
        .chunks(pu)
        .position(|row| row.iter().map(|&x| x as u64).sum::<u64>() != q - 1)
    {
        return Err(Error::check("tally-fft", format!("row {j} does not sum to q-1")));
    }
    Ok(TraceTallies { p, q, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::build_extension;

    #[test]
    fn fft_matches_direct() {
        for (p, n) in [(2, 1), (2, 4), (3, 1), (3, 4), (5, 3), (7, 2), (13, 2)] {
            let f = build_extension(p, n).unwrap();
            assert_eq!(tallies_direct(&f), tallies_fft(&f, DEFAULT_FFT_BUDGET).unwrap());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = build_extension(5, 3).unwrap();
        assert!(matches!(tallies_fft(&f, 100), Err(Error::BudgetExceeded { .. })));
    }
}
