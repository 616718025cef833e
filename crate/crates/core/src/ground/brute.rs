use std::collections::HashMap;

use rayon::prelude::*;

use super::{CountError, GroundFormula, GroundProblem};
use crate::logic::{Scalar, Weight, WeightPair};

/// Default brute-force cap on the Herbrand base size.
pub const DEFAULT_MAX_ATOMS: usize = 26;

/// Largest histogram, in cells, kept as a dense array per worker.
const DENSE_HISTOGRAM: usize = 1 << 16;

/// Blocks of 64 assignments handed to a worker at a time.
const BLOCKS_PER_TASK: usize = 256;

/// The brute-force cap: `WFOMC_MAX_ATOMS` when set to a number, otherwise
/// [`DEFAULT_MAX_ATOMS`].
pub fn brute_force_cap() -> usize {
    std::env::var("WFOMC_MAX_ATOMS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ATOMS)
}

/// Formula compiled to postfix over local variable indices, evaluated on 64
/// assignments at once.
enum Op {
    Const(u64),
    Var(usize),
    Not,
    And(usize),
    Or(usize),
    Implies,
    Iff,
}

fn compile(f: &GroundFormula, local: &[usize], out: &mut Vec<Op>) {
    match f {
        GroundFormula::Const(b) => out.push(Op::Const(if *b { !0 } else { 0 })),
        GroundFormula::Var(i) => out.push(Op::Var(local[*i])),
        GroundFormula::Not(a) => {
            compile(a, local, out);
            out.push(Op::Not);
        }
        GroundFormula::And(k) | GroundFormula::Or(k) => {
            k.iter().for_each(|c| compile(c, local, out));
            out.push(match f {
                GroundFormula::And(_) => Op::And(k.len()),
                _ => Op::Or(k.len()),
            });
        }
        GroundFormula::Implies(a, b) | GroundFormula::Iff(a, b) => {
            compile(a, local, out);
            compile(b, local, out);
            out.push(match f {
                GroundFormula::Implies(..) => Op::Implies,
                _ => Op::Iff,
            });
        }
    }
}

/// Lane masks of the six low variables.
const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn eval_block(ops: &[Op], block: u64, stack: &mut Vec<u64>) -> u64 {
    stack.clear();
    for op in ops {
        match *op {
            Op::Const(c) => stack.push(c),
            Op::Var(j) if j < 6 => stack.push(LANE_PATTERNS[j]),
            Op::Var(j) => stack.push(if block >> (j - 6) & 1 == 1 { !0 } else { 0 }),
            Op::Not => {
                let a = stack.pop().expect("operand");
                stack.push(!a);
            }
            Op::And(n) | Op::Or(n) => {
                let at = stack.len() - n;
                let v = if matches!(op, Op::And(_)) {
                    stack[at..].iter().fold(!0, |acc, x| acc & x)
                } else {
                    stack[at..].iter().fold(0, |acc, x| acc | x)
                };
                stack.truncate(at);
                stack.push(v);
            }
            Op::Implies | Op::Iff => {
                let b = stack.pop().expect("operand");
                let a = stack.pop().expect("operand");
                stack.push(if matches!(op, Op::Implies) {
                    !a | b
                } else {
                    !(a ^ b)
                });
            }
        }
    }
    stack.pop().expect("result")
}

/// Weights shared by several atoms; the count only depends on how many
/// atoms of each class are true.
struct Classes {
    /// Class of each local variable, `None` for weight `(1, 1)`.
    of_var: Vec<Option<usize>>,
    pairs: Vec<WeightPair>,
    sizes: Vec<usize>,
}

fn classes(weights: &[WeightPair], used: &[usize]) -> Classes {
    let mut index: HashMap<&WeightPair, usize> = HashMap::new();
    let mut pairs = Vec::new();
    let mut sizes = Vec::new();
    let of_var = used
        .iter()
        .map(|&a| {
            let w = &weights[a];
            if w.pos.is_one() && w.neg.is_one() {
                return None;
            }
            let c = *index.entry(w).or_insert_with(|| {
                pairs.push(w.clone());
                sizes.push(0);
                pairs.len() - 1
            });
            sizes[c] += 1;
            Some(c)
        })
        .collect();
    Classes {
        of_var,
        pairs,
        sizes,
    }
}

/// Tally key contributed by the low variables in each of the 64 lanes.
fn split_key(contrib: &[u64], low: usize) -> Vec<u64> {
    (0..64u64)
        .map(|lane| {
            (0..low)
                .filter(|&j| lane >> j & 1 == 1)
                .map(|j| contrib[j])
                .sum()
        })
        .collect()
}

/// Tally key contributed by the high variables in block `block`.
fn block_key(contrib: &[u64], low: usize, block: u64) -> u64 {
    contrib[low..]
        .iter()
        .enumerate()
        .filter(|(j, _)| block >> j & 1 == 1)
        .map(|(_, c)| *c)
        .sum()
}

fn scale_factor<S: Scalar>(scale: &[(Weight, u64)]) -> Result<S, CountError> {
    let mut acc = S::one();
    for (w, e) in scale {
        acc = acc * S::from_weight(w)?.pow_u64(*e);
    }
    Ok(acc)
}

/// Product of `(w_true + w_false)` over atoms the formula does not mention,
/// and the indices of the atoms it does.
fn split_free<S: Scalar>(g: &GroundProblem) -> Result<(S, Vec<usize>), CountError> {
    let mut mentioned = vec![false; g.base.len()];
    g.formula.collect_vars(&mut mentioned);
    let mut free = S::one();
    let mut used = Vec::new();
    for (a, m) in mentioned.into_iter().enumerate() {
        if m {
            used.push(a);
        } else {
            let w = &g.weights[a];
            free = free * (S::from_weight(&w.pos)? + S::from_weight(&w.neg)?);
        }
    }
    Ok((free, used))
}

/// Weighted model count by enumerating assignments, with the cap from
/// [`brute_force_cap`].
pub fn wmc_bruteforce<S: Scalar>(g: &GroundProblem) -> Result<S, CountError> {
    wmc_bruteforce_capped(g, brute_force_cap())
}

/// Weighted model count by enumerating every assignment of the atoms the
/// formula mentions, 64 at a time. Atoms it does not mention contribute
/// `w_true + w_false` each. When there are few distinct weights, satisfying
/// assignments are tallied by how many atoms of each weight class they make
/// true, so the field arithmetic runs once per tally cell rather than once
/// per model. Partial results are combined in a fixed order.
pub fn wmc_bruteforce_capped<S: Scalar>(g: &GroundProblem, cap: usize) -> Result<S, CountError> {
    if g.base.len() > cap {
        return Err(CountError::TooManyAtoms {
            atoms: g.base.len(),
            cap,
        });
    }
    let scale = scale_factor::<S>(&g.scale)?;
    let (free, used) = split_free::<S>(g)?;
    let m = used.len();
    let mut local = vec![usize::MAX; g.base.len()];
    for (j, &a) in used.iter().enumerate() {
        local[a] = j;
    }
    let mut ops = Vec::new();
    compile(&g.formula, &local, &mut ops);

    let cls = classes(&g.weights, &used);
    let total = if cells(&cls.sizes) <= DENSE_HISTOGRAM as u64 {
        by_tally::<S>(&ops, m, &cls)?
    } else {
        by_weight::<S>(&ops, m, &g.weights, &used)?
    };
    Ok(total * free * scale)
}

fn cells(sizes: &[usize]) -> u64 {
    sizes
        .iter()
        .fold(1u64, |acc, &s| acc.saturating_mul(s as u64 + 1))
}

/// Ranges of blocks, one per task, in order.
fn tasks(m: usize) -> (Vec<std::ops::Range<u64>>, u64) {
    let low = m.min(6);
    let blocks: u64 = 1 << (m - low);
    let task = BLOCKS_PER_TASK as u64;
    let ranges = (0..blocks.div_ceil(task))
        .map(|t| t * task..((t + 1) * task).min(blocks))
        .collect();
    let lanes_mask: u64 = if m >= 6 { !0 } else { (1u64 << (1 << m)) - 1 };
    (ranges, lanes_mask)
}

/// Counts satisfying assignments per tally cell, then weighs each cell.
fn by_tally<S: Scalar>(ops: &[Op], m: usize, cls: &Classes) -> Result<S, CountError> {
    let mut stride = Vec::with_capacity(cls.sizes.len());
    let mut n_cells = 1usize;
    for &s in &cls.sizes {
        stride.push(n_cells as u64);
        n_cells *= s + 1;
    }
    let contrib: Vec<u64> = cls
        .of_var
        .iter()
        .map(|c| c.map_or(0, |c| stride[c]))
        .collect();
    let low = m.min(6);
    let lane_key = split_key(&contrib, low);
    let (ranges, lanes_mask) = tasks(m);
    let hist = ranges
        .into_par_iter()
        .fold(
            || (vec![0u64; n_cells], Vec::new()),
            |(mut h, mut stack), range| {
                for b in range {
                    let mut sat = eval_block(ops, b, &mut stack) & lanes_mask;
                    let base = block_key(&contrib, low, b);
                    while sat != 0 {
                        let lane = sat.trailing_zeros() as usize;
                        sat &= sat - 1;
                        h[(base + lane_key[lane]) as usize] += 1;
                    }
                }
                (h, stack)
            },
        )
        .map(|(h, _)| h)
        .reduce(
            || vec![0u64; n_cells],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let mut powers = Vec::with_capacity(cls.pairs.len());
    for (pair, &n) in cls.pairs.iter().zip(&cls.sizes) {
        let wt = S::from_weight(&pair.pos)?;
        let wf = S::from_weight(&pair.neg)?;
        let row: Vec<S> = (0..=n as u64)
            .map(|k| wt.pow_u64(k) * wf.pow_u64(n as u64 - k))
            .collect();
        powers.push(row);
    }
    let mut total = S::zero();
    for (key, n) in hist.into_iter().enumerate().filter(|(_, n)| *n > 0) {
        let mut term = S::from_count(n);
        let mut rest = key;
        for (c, row) in powers.iter().enumerate() {
            let radix = cls.sizes[c] + 1;
            term = term * row[rest % radix].clone();
            rest /= radix;
        }
        total = total + term;
    }
    Ok(total)
}

/// Literal-weight product of every assignment of the given variables,
/// indexed so that bit `j` is variable `j`.
fn weight_table<S: Scalar>(w: &[(S, S)]) -> Vec<S> {
    let mut table = vec![S::one()];
    for (wt, wf) in w {
        let mut next = Vec::with_capacity(table.len() * 2);
        next.extend(table.iter().map(|x| x.clone() * wf.clone()));
        next.extend(table.iter().map(|x| x.clone() * wt.clone()));
        table = next;
    }
    table
}

/// Sums literal-weight products of satisfying assignments directly, for
/// problems with too many weight classes to tally.
fn by_weight<S: Scalar>(
    ops: &[Op],
    m: usize,
    weights: &[WeightPair],
    used: &[usize],
) -> Result<S, CountError> {
    let mut w = Vec::with_capacity(m);
    for &a in used {
        w.push((
            S::from_weight(&weights[a].pos)?,
            S::from_weight(&weights[a].neg)?,
        ));
    }
    let low = m.min(6);
    let lane_w = weight_table(&w[..low]);
    let high = &w[low..];
    let split = high.len() / 2;
    let table_a = weight_table(&high[..split]);
    let table_b = weight_table(&high[split..]);
    let (ranges, lanes_mask) = tasks(m);
    let partial: Vec<S> = ranges
        .into_par_iter()
        .map(|range| {
            let mut stack = Vec::new();
            let mut acc = S::zero();
            for b in range {
                let mut sat = eval_block(ops, b, &mut stack) & lanes_mask;
                if sat == 0 {
                    continue;
                }
                let mut lanes = S::zero();
                while sat != 0 {
                    let lane = sat.trailing_zeros() as usize;
                    sat &= sat - 1;
                    lanes = lanes + lane_w[lane].clone();
                }
                let bw = table_a[(b & ((1 << split) - 1)) as usize].clone()
                    * table_b[(b >> split) as usize].clone();
                acc = acc + bw * lanes;
            }
            acc
        })
        .collect();
    Ok(partial.into_iter().fold(S::zero(), |a, b| a + b))
}
