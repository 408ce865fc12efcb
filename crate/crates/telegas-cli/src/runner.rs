//! Deterministic replica fan-out: replica `i` always uses stream id `i`
//! (plus a per-phase block offset), and results come back in replica order,
//! so the outputs are identical for any worker count.

use telegas::sim::RngStream;

/// Runs `f(replica_index)` for `0..replicas`, fanned across `workers`
/// threads in contiguous index ranges. The returned vector is in replica
/// order regardless of scheduling.
pub fn run_replicas<T, F>(replicas: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    let workers = workers.max(1).min(replicas.max(1) as usize);
    let mut out: Vec<Option<T>> = (0..replicas).map(|_| None).collect();
    let chunk = (replicas as usize).div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slice) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                let base = (w * chunk) as u64;
                for (i, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(base + i as u64));
                }
            });
        }
    });
    out.into_iter().map(|x| x.expect("all replicas ran")).collect()
}

/// Stream for replica `i` of phase `phase`: phases own disjoint stream-id
/// blocks so multi-phase experiments stay reproducible.
pub fn phase_stream(seed: u64, phase: u64, replica: u64) -> RngStream {
    const PHASE_BLOCK: u64 = 1 << 32;
    RngStream::new(seed, phase * PHASE_BLOCK + replica)
}
