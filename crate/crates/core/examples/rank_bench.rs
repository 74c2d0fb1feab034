//! Times dense rank over GF(32003) on a random matrix of the given shape.
//!
//! `cargo run --release --example rank_bench -- 11200 9100`

use std::time::Instant;

use extmrc::exactfield::{streamed_rank, SeededRng, DEFAULT_PRIME};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (nrows, ncols) = (args.first().copied().unwrap_or(2000), args.get(1).copied().unwrap_or(1500));
    let start = Instant::now();
    let rank = streamed_rank(DEFAULT_PRIME, nrows, ncols, |r, buf| {
        let mut rng = SeededRng::new(r as u64);
        for x in buf.iter_mut() {
            *x = rng.next_residue(DEFAULT_PRIME);
        }
    });
    println!("{nrows}x{ncols}: rank {rank} in {:.2?}", start.elapsed());
}
