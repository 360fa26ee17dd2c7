#![allow(dead_code)]

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use dioph_core::arith::rat;
use dioph_core::partition::Executor;
use dioph_core::variety::MultiPolynomial;
use dioph_core::{CfTail, RealSource};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Scoped worker threads pulling task indices from a shared counter.
pub struct Threads(pub usize);

impl Executor for Threads {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..n).map(|_| None).collect());
        std::thread::scope(|s| {
            for _ in 0..self.0.max(1) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= n {
                        break;
                    }
                    let v = f(i);
                    slots.lock().unwrap()[i] = Some(v);
                });
            }
        });
        slots.into_inner().unwrap().into_iter().map(|v| v.expect("every task ran")).collect()
    }
}

pub fn threads() -> Threads {
    Threads(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(4))
}

/// `[0; a_1, ..., a_len]` followed by 1's, quotients in `1..=max`.
pub fn random_cf(rng: &mut ChaCha8Rng, len: usize, max: i64) -> RealSource {
    let mut q = vec![0i64];
    q.extend((0..len).map(|_| rng.gen_range(1..=max)));
    RealSource::cf_small(&q, CfTail::Ones).unwrap()
}

pub fn circle(r: i64) -> MultiPolynomial {
    MultiPolynomial::new(2, [(vec![2, 0], rat(1, 1)), (vec![0, 2], rat(1, 1)), (vec![0, 0], rat(-r, 1))]).unwrap()
}
