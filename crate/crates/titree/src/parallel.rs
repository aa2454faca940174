//! Multi-threaded driver with a single serialized output consumer.
//!
//! Phase one runs on the calling thread (the WTI pool is built one order at
//! a time, joins within an order spread over the worker pool). Phase two is
//! split into tasks of one target order, one subtree-order sequence and a
//! slice of the largest subtree's candidates. Workers format their trees
//! into private buffers and hand them over a bounded channel to the calling
//! thread, which is the only writer.

use std::io::{self, Write};
use std::ops::Range;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::sync_channel;

use rayon::prelude::*;
use titree_core::{
    generate_increasing, CandidateTable, GenerationPlan, SubtreePool, TiCensus, WtiPool, WtiTree,
};

use crate::codecs::{encode, Format};

/// Appends zero or more bytes describing one tree to a buffer.
pub type LineWriter = dyn Fn(&WtiTree, &mut Vec<u8>) + Sync;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads for the parallel path.
    pub threads: usize,
    /// Single-threaded, fixed reporting order.
    pub deterministic: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            deterministic: false,
        }
    }
}

/// Bound on buffers in flight between workers and the writer.
const CHANNEL_CAPACITY: usize = 256;

/// Generates all TI trees for `plan`, writing `format` lines to `out`
/// (`None` only counts).
pub fn generate_formatted<W: Write>(
    plan: &GenerationPlan,
    format: Option<Format>,
    options: &RunOptions,
    out: &mut W,
) -> io::Result<TiCensus> {
    match format {
        None => generate_lines(plan, None, options, out),
        Some(format) => {
            let line = move |tree: &WtiTree, buf: &mut Vec<u8>| {
                buf.extend_from_slice(&encode(tree, format).bytes);
                buf.push(b'\n');
            };
            generate_lines(plan, Some(&line), options, out)
        }
    }
}

/// Generates all TI trees for `plan`, passing each to `line` and writing
/// what it produces to `out`. Stops early on the first write error.
pub fn generate_lines<W: Write>(
    plan: &GenerationPlan,
    line: Option<&LineWriter>,
    options: &RunOptions,
    out: &mut W,
) -> io::Result<TiCensus> {
    if options.deterministic {
        return generate_sequential(plan, line, out);
    }
    let workers = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads.max(1))
        .build()
        .map_err(io::Error::other)?;

    let mut census = TiCensus::new(plan.max_order());
    let pool = workers.install(|| build_wti_pool(plan.phase_one_cap(), plan.max_degree()));
    let mut buf = Vec::new();
    let subtrees = plan.phase_one_from_pool(&pool, &mut census, |tree| {
        if let Some(line) = line {
            line(tree, &mut buf);
        }
    });
    drop(pool);
    out.write_all(&buf)?;

    let orders: Vec<usize> = plan.phase_two_orders().collect();
    let tables: Vec<CandidateTable<'_>> = workers.install(|| {
        orders
            .par_iter()
            .map(|&k| CandidateTable::new(&subtrees, k))
            .collect()
    });
    let tasks = phase_two_tasks(plan, &tables, options.threads.max(1));

    let abort = AtomicBool::new(false);
    let mut result = Ok(());
    std::thread::scope(|scope| {
        let (tx, rx) = sync_channel::<(usize, u64, Vec<u8>)>(CHANNEL_CAPACITY);
        let tables = &tables;
        let abort = &abort;
        let workers = &workers;
        let tasks = &tasks;
        scope.spawn(move || {
            workers.install(|| {
                tasks.par_iter().for_each_with(tx, |tx, task| {
                    if abort.load(Ordering::Relaxed) {
                        return;
                    }
                    let table = &tables[task.table];
                    let mut buf = Vec::new();
                    let found = table.search(&task.sizes, task.outer.clone(), |tree| {
                        if let Some(line) = line {
                            line(tree, &mut buf);
                        }
                    });
                    if found > 0 {
                        // A closed channel means the writer gave up.
                        let _ = tx.send((table.order(), found, buf));
                    }
                });
            });
        });
        for (k, found, bytes) in rx {
            census.add(k, found);
            if let Err(e) = out.write_all(&bytes) {
                abort.store(true, Ordering::Relaxed);
                result = Err(e);
                break;
            }
        }
    });
    result?;
    Ok(census)
}

/// Phase-two work unit.
struct Task {
    table: usize,
    sizes: Vec<usize>,
    outer: Range<usize>,
}

fn phase_two_tasks(
    plan: &GenerationPlan,
    tables: &[CandidateTable<'_>],
    threads: usize,
) -> Vec<Task> {
    let mut tasks = Vec::new();
    for (index, table) in tables.iter().enumerate() {
        plan.phase_two_sequences(table.order(), |sizes| {
            let len = table.column_len(*sizes.last().unwrap());
            let chunk = (len / (4 * threads)).max(16);
            let mut start = 0;
            while start < len {
                let end = (start + chunk).min(len);
                tasks.push(Task {
                    table: index,
                    sizes: sizes.to_vec(),
                    outer: start..end,
                });
                start = end;
            }
        });
    }
    tasks
}

/// Builds the WTI pool order by order, spreading each order's joins over
/// the current rayon pool. The result is identical to the sequential build.
pub fn build_wti_pool(max_order: usize, max_children: usize) -> WtiPool {
    let mut pool = WtiPool::seed();
    for k in 2..=max_order {
        let mut sequences = Vec::new();
        generate_increasing(k - 1, k - 1, max_children, |s| sequences.push(s.to_vec()));
        let parts: Vec<(Vec<WtiTree>, u64)> = sequences
            .par_iter()
            .map(|sizes| {
                let mut trees = Vec::new();
                let mut failed = 0;
                pool.join_all(sizes, |outcome| match outcome {
                    Some(tree) => trees.push(tree),
                    None => failed += 1,
                });
                (trees, failed)
            })
            .collect();
        let failed = parts.iter().map(|p| p.1).sum();
        let trees = parts.into_iter().flat_map(|p| p.0).collect();
        pool.push_order(trees, failed);
    }
    pool
}

/// Single-threaded run in the fixed reporting order. Checks for write
/// errors between subtree-order sequences.
fn generate_sequential<W: Write>(
    plan: &GenerationPlan,
    line: Option<&LineWriter>,
    out: &mut W,
) -> io::Result<TiCensus> {
    let mut census = TiCensus::new(plan.max_order());
    let mut buf = Vec::new();
    let subtrees: SubtreePool = plan.phase_one(&mut census, |tree| {
        if let Some(line) = line {
            line(tree, &mut buf);
        }
    });
    out.write_all(&buf)?;
    buf.clear();

    let mut failure: Option<io::Error> = None;
    for k in plan.phase_two_orders() {
        let table = CandidateTable::new(&subtrees, k);
        plan.phase_two_sequences(k, |sizes| {
            if failure.is_some() {
                return;
            }
            let found = table.search(sizes, 0..usize::MAX, |tree| {
                if let Some(line) = line {
                    line(tree, &mut buf);
                }
            });
            census.add(k, found);
            if let Err(e) = out.write_all(&buf) {
                failure = Some(e);
            }
            buf.clear();
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(census)
}
