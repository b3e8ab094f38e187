//! Order-preserving parallel map over scoped threads.

use std::thread;

/// `f` applied to every item. Items are dealt round-robin to `jobs` workers
/// and results are put back in input order, so the output never depends on
/// the job count.
pub fn par_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = jobs.max(1).min(items.len());
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let mut slots: Vec<Option<R>> = items.iter().map(|_| None).collect();
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..items.len())
                        .step_by(workers)
                        .map(|i| (i, f(&items[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every slot filled")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn same_result_for_any_job_count(xs in proptest::collection::vec(any::<u32>(), 0..50), jobs in 0usize..9) {
            let seq: Vec<u64> = xs.iter().map(|&x| u64::from(x) * 3 + 1).collect();
            prop_assert_eq!(par_map(&xs, jobs, |&x| u64::from(x) * 3 + 1), seq);
        }
    }
}
