//! Shared input builders for the criterion benchmarks.

use std::sync::Arc;

use dsmfuse_core::frame::Model;
use dsmfuse_core::mass::{MassFunction, RationalAlgebra, World};
use dsmfuse_core::{ratio, Frame};

/// Deterministic pseudo-random sources: `count` mass functions over a frame
/// of `atoms` atoms (Shafer's model), each with `focals` focal elements built
/// from a tiny linear-congruential stream so runs are reproducible.
pub fn synthetic_sources(
    atoms: usize,
    count: usize,
    focals: usize,
) -> Vec<MassFunction<RationalAlgebra>> {
    let names: Vec<String> = (0..atoms).map(|i| format!("H{i}")).collect();
    let frame: Arc<Frame> = Frame::new(names).unwrap();
    let model = Model::shafer(&frame);
    let mut state = 0x2545f4914f6cdd1du64;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as i64
    };
    let mut sources = Vec::with_capacity(count);
    for _ in 0..count {
        let mut m = MassFunction::new(frame.clone(), model.clone(), World::Closed, RationalAlgebra);
        let mut exprs = Vec::new();
        while exprs.len() < focals {
            let mask = 1 + (next().unsigned_abs() as usize) % ((1 << atoms) - 1);
            let expr = (0..atoms)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| format!("H{i}"))
                .collect::<Vec<_>>()
                .join("|");
            if !exprs.contains(&expr) {
                exprs.push(expr);
            }
        }
        let weights: Vec<i64> = (0..focals).map(|_| 1 + next() % 97).collect();
        let total: i64 = weights.iter().sum();
        for (expr, w) in exprs.iter().zip(&weights) {
            m.insert_expr(expr, ratio(*w, total)).unwrap();
        }
        sources.push(m);
    }
    sources
}
