use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Cubic 3-D FFT built from 1-D transforms along each axis.
pub(crate) struct Fft3 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft3 {
    pub fn new(n: usize) -> Self {
        let mut p = FftPlanner::new();
        Fft3 {
            n,
            fwd: p.plan_fft_forward(n),
            inv: p.plan_fft_inverse(n),
        }
    }

    fn run(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        // Contiguous axis.
        data.par_chunks_mut(n).for_each(|line| plan.process(line));
        // Middle axis: each i-slab is independent.
        data.par_chunks_mut(n * n).for_each(|slab| {
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for k in 0..n {
                for j in 0..n {
                    buf[j] = slab[j * n + k];
                }
                plan.process(&mut buf);
                for j in 0..n {
                    slab[j * n + k] = buf[j];
                }
            }
        });
        // Outer axis: gather columns of stride n².
        let nn = n * n;
        let cols: Vec<Vec<Complex64>> = (0..nn)
            .into_par_iter()
            .map(|jk| {
                let mut buf: Vec<Complex64> = (0..n).map(|i| data[i * nn + jk]).collect();
                plan.process(&mut buf);
                buf
            })
            .collect();
        for (jk, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                data[i * nn + jk] = v;
            }
        }
    }

    pub fn forward_real(&self, v: &[f64]) -> Vec<Complex64> {
        let mut d: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.run(&mut d, &self.fwd);
        d
    }

    pub fn inverse_real(&self, v: &[Complex64]) -> Vec<f64> {
        let mut d = v.to_vec();
        self.run(&mut d, &self.inv);
        let s = 1.0 / (self.n * self.n * self.n) as f64;
        d.into_iter().map(|c| c.re * s).collect()
    }
}
