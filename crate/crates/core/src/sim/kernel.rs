// Copyright 2026 The qdb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Amplitude kernels.
//!
//! Every kernel splits the amplitude array into fixed blocks whose size only
//! depends on the gate, and each output amplitude is computed from the same
//! inputs in the same order regardless of scheduling. Results are therefore
//! bit-identical between sequential and parallel runs.

use rayon::prelude::*;

use super::C64;

/// Below this many amplitudes everything runs on the calling thread.
const PAR_THRESHOLD: usize = 1 << 14;
/// Minimum number of blocks handed to one rayon task.
const MIN_BLOCKS_PER_TASK: usize = 16;

/// Bit mask and required value for a set of controls.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct ControlMask {
    pub mask: usize,
    pub value: usize,
}

impl ControlMask {
    #[inline]
    fn fires(&self, idx: usize) -> bool {
        idx & self.mask == self.value
    }
}

/// Apply a 2×2 matrix to `target`.
pub(crate) fn apply_single(amps: &mut [C64], target: usize, m: [[C64; 2]; 2], ctl: ControlMask) {
    let half = 1usize << target;
    let block = half << 1;
    let body = |base: usize, chunk: &mut [C64]| {
        let (lo, hi) = chunk.split_at_mut(half);
        for (i, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
            if ctl.fires(base + i) {
                let (x, y) = (*a, *b);
                *a = m[0][0] * x + m[0][1] * y;
                *b = m[1][0] * x + m[1][1] * y;
            }
        }
    };
    run_blocks(amps, block, body);
}

/// Exchange the values of qubits `q1` and `q2`.
pub(crate) fn apply_swap(amps: &mut [C64], q1: usize, q2: usize, ctl: ControlMask) {
    let (lo_q, hi_q) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
    let half = 1usize << hi_q;
    let block = half << 1;
    let lo_bit = 1usize << lo_q;
    let body = |base: usize, chunk: &mut [C64]| {
        let (lo, hi) = chunk.split_at_mut(half);
        // hi half has the high bit set; pair |..1..0..⟩ with |..0..1..⟩
        for i in 0..half {
            if i & lo_bit != 0 {
                continue;
            }
            let upper = base + half + i;
            if ctl.fires(upper) {
                std::mem::swap(&mut hi[i], &mut lo[i | lo_bit]);
            }
        }
    };
    run_blocks(amps, block, body);
}

/// Givens rotation between the sub-register basis states whose embedded
/// offsets are `off_a` and `off_b`. `target_mask` covers all target bits.
pub(crate) fn apply_two_level(
    amps: &mut [C64],
    target_mask: usize,
    off_a: usize,
    off_b: usize,
    theta: f64,
    ctl: ControlMask,
) {
    let top = usize::BITS - 1 - target_mask.leading_zeros();
    let block = 1usize << (top + 1);
    let (s, c) = theta.sin_cos();
    let body = |base: usize, chunk: &mut [C64]| {
        for rest in 0..block {
            if rest & target_mask != 0 {
                continue;
            }
            if !ctl.fires(base + rest) {
                continue;
            }
            let ia = rest | off_a;
            let ib = rest | off_b;
            let (a, b) = (chunk[ia], chunk[ib]);
            chunk[ia] = a * c - b * s;
            chunk[ib] = a * s + b * c;
        }
    };
    run_blocks(amps, block, body);
}

fn run_blocks<F>(amps: &mut [C64], block: usize, body: F)
where
    F: Fn(usize, &mut [C64]) + Sync,
{
    let block = block.min(amps.len());
    if amps.len() < PAR_THRESHOLD {
        for (n, chunk) in amps.chunks_mut(block).enumerate() {
            body(n * block, chunk);
        }
    } else {
        amps.par_chunks_mut(block)
            .with_min_len(MIN_BLOCKS_PER_TASK.max(PAR_THRESHOLD / block / 4).max(1))
            .enumerate()
            .for_each(|(n, chunk)| body(n * block, chunk));
    }
}

/// Sum of `f` over the amplitudes with a fixed reduction tree.
pub(crate) fn reduce_sum<F>(amps: &[C64], f: F) -> f64
where
    F: Fn(usize, &C64) -> f64 + Sync,
{
    const CHUNK: usize = 1 << 12;
    let partial: Vec<f64> = if amps.len() < PAR_THRESHOLD {
        amps.chunks(CHUNK)
            .enumerate()
            .map(|(n, c)| c.iter().enumerate().map(|(i, a)| f(n * CHUNK + i, a)).sum())
            .collect()
    } else {
        amps.par_chunks(CHUNK)
            .enumerate()
            .map(|(n, c)| c.iter().enumerate().map(|(i, a)| f(n * CHUNK + i, a)).sum())
            .collect()
    };
    partial.iter().sum()
}
