//! Exact minimization over the chain of XOR gadgets.
//!
//! Gadget `i` couples only `(x_i, x_{i+1}, o_i, a_i)`, so after minimizing
//! each gadget over its private `(o_i, a_i)` for every value of its two
//! inputs, the remaining problem is a path over the inputs whose frontier is
//! the single bit `x_{i+1}`. A forward sweep computes the best energy and the
//! number of optimal completions per frontier value; a backward pass expands
//! every tying choice so the ground set is complete.

use super::{ExactSolution, ExactSolver, SolveMethod};
use crate::error::{Error, Result};
use crate::oracle::{Assignment, OracleSpec};
use crate::qubo::QuboModel;

// Local gadget slots.
const XL: usize = 0;
const XR: usize = 1;
const OUT: usize = 2;
const ANC: usize = 3;

/// Minimum over `(o, a)` of one gadget for fixed `(x_l, x_r)`, with every
/// minimizing `(o, a)`.
#[derive(Debug, Clone, Default)]
struct Cell {
    min: f64,
    argmins: Vec<(u8, u8)>,
}

#[derive(Debug, Clone)]
struct GadgetTable {
    cells: [[Cell; 2]; 2],
}

struct Gadget {
    out_linear: f64,
    anc_linear: f64,
    terms: Vec<(usize, usize, f64)>,
}

impl Gadget {
    fn energy(&self, local: [u8; 4]) -> f64 {
        let mut e = self.out_linear * f64::from(local[OUT]) + self.anc_linear * f64::from(local[ANC]);
        for &(u, v, w) in &self.terms {
            if local[u] & local[v] == 1 {
                e += w;
            }
        }
        e
    }

    fn table(&self, model: &QuboModel) -> GadgetTable {
        let mut cells: [[Cell; 2]; 2] = Default::default();
        for xl in 0..2u8 {
            for xr in 0..2u8 {
                let mut cell = Cell {
                    min: f64::INFINITY,
                    argmins: Vec::with_capacity(4),
                };
                for (o, a) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
                    let e = self.energy([xl, xr, o, a]);
                    if cell.min.is_infinite() || (e < cell.min && !model.same_energy(e, cell.min)) {
                        cell.min = e;
                        cell.argmins.clear();
                        cell.argmins.push((o, a));
                    } else if model.same_energy(e, cell.min) {
                        cell.argmins.push((o, a));
                    }
                }
                cells[xl as usize][xr as usize] = cell;
            }
        }
        GadgetTable { cells }
    }
}

/// Splits the model into per-gadget terms, rejecting any coupling that is
/// not inside a single gadget.
fn decompose(model: &QuboModel, spec: &OracleSpec) -> Result<Vec<Gadget>> {
    let n = spec.n();
    let g = spec.gadgets();
    if model.num_vars() != spec.total_vars() {
        return Err(Error::LengthMismatch {
            expected: spec.total_vars(),
            got: model.num_vars(),
        });
    }
    if model.labels() != crate::qubo::Label::canonical(spec) {
        return Err(Error::NotChain("labels are not in x, o, a block order".into()));
    }
    let lin = model.linear();
    let mut gadgets: Vec<Gadget> = (0..g)
        .map(|i| Gadget {
            out_linear: lin[spec.output_index(i)],
            anc_linear: lin[spec.ancilla_index(i)],
            terms: Vec::new(),
        })
        .collect();

    // (gadget, slot) for a private variable.
    let private = |v: usize| -> Option<(usize, usize)> {
        if v >= n && v < 2 * n - 1 {
            Some((v - n, OUT))
        } else if v >= 2 * n - 1 {
            Some((v - (2 * n - 1), ANC))
        } else {
            None
        }
    };
    let slot_of_input = |x: usize, gadget: usize| -> Option<usize> {
        if x == gadget {
            Some(XL)
        } else if x == gadget + 1 {
            Some(XR)
        } else {
            None
        }
    };
    let labels = model.labels();
    for &(i, j, w) in model.quadratic() {
        let reject = || {
            Error::NotChain(format!(
                "coupling {}-{} spans more than one gadget",
                labels[i], labels[j]
            ))
        };
        let placed = match (private(i), private(j)) {
            (None, None) => {
                if j == i + 1 {
                    Some((i, XL, XR))
                } else {
                    None
                }
            }
            (Some((gi, si)), Some((gj, sj))) => (gi == gj).then_some((gi, si, sj)),
            (Some((gi, si)), None) => slot_of_input(j, gi).map(|sj| (gi, si, sj)),
            (None, Some((gj, sj))) => slot_of_input(i, gj).map(|si| (gj, si, sj)),
        };
        let (gadget, su, sv) = placed.ok_or_else(reject)?;
        gadgets[gadget].terms.push((su, sv, w));
    }
    Ok(gadgets)
}

/// Exact ground energy and complete ground set of a chain-structured model,
/// in time linear in `n` plus the size of the ground set.
pub fn solve_chain_dp(
    model: &QuboModel,
    spec: &OracleSpec,
    max_ground_states: usize,
) -> Result<ExactSolution> {
    let gadgets = decompose(model, spec)?;
    let tables: Vec<GadgetTable> = gadgets.iter().map(|g| g.table(model)).collect();
    let lin = model.linear();
    let n = spec.n();
    let x_lin = |i: usize, v: usize| if v == 1 { lin[spec.input_index(i)] } else { 0.0 };

    // cost[i][v]: best energy of everything left of and including x_i = v.
    let mut cost = vec![[0.0f64; 2]; n];
    let mut count = vec![[0u128; 2]; n];
    let mut preds: Vec<[Vec<usize>; 2]> = vec![Default::default(); n];
    cost[0] = [model.offset(), model.offset() + x_lin(0, 1)];
    count[0] = [1, 1];
    for i in 0..spec.gadgets() {
        for xr in 0..2 {
            let cand = [0, 1].map(|xl| cost[i][xl] + tables[i].cells[xl][xr].min);
            let best = cand[0].min(cand[1]);
            let tied: Vec<usize> = (0..2).filter(|&xl| model.same_energy(cand[xl], best)).collect();
            count[i + 1][xr] = tied.iter().fold(0u128, |acc, &xl| {
                let ways = count[i][xl]
                    .saturating_mul(tables[i].cells[xl][xr].argmins.len() as u128);
                acc.saturating_add(ways)
            });
            cost[i + 1][xr] = best + x_lin(i + 1, xr);
            preds[i + 1][xr] = tied;
        }
    }
    let last = n - 1;
    let ground_energy = cost[last][0].min(cost[last][1]);
    let finals: Vec<usize> = (0..2)
        .filter(|&v| model.same_energy(cost[last][v], ground_energy))
        .collect();
    let degeneracy = finals
        .iter()
        .fold(0u128, |acc, &v| acc.saturating_add(count[last][v]));
    if degeneracy > max_ground_states as u128 {
        return Err(Error::DegeneracyTooLarge {
            count: degeneracy,
            limit: max_ground_states,
        });
    }

    let mut partial: Vec<(usize, Vec<u8>)> = finals
        .into_iter()
        .map(|v| {
            let mut bits = vec![0u8; spec.total_vars()];
            bits[spec.input_index(last)] = v as u8;
            (v, bits)
        })
        .collect();
    for i in (1..n).rev() {
        let gadget = i - 1;
        let mut next = Vec::with_capacity(partial.len());
        for (xr, bits) in partial {
            for &xl in &preds[i][xr] {
                for &(o, a) in &tables[gadget].cells[xl][xr].argmins {
                    let mut b = bits.clone();
                    b[spec.input_index(gadget)] = xl as u8;
                    b[spec.output_index(gadget)] = o;
                    b[spec.ancilla_index(gadget)] = a;
                    next.push((xl, b));
                }
            }
        }
        partial = next;
    }
    let mut ground_states: Vec<Assignment> = partial
        .into_iter()
        .map(|(_, bits)| Assignment::from(bits))
        .collect();
    ground_states.sort();
    debug_assert_eq!(ground_states.len() as u128, degeneracy);
    Ok(ExactSolution {
        ground_energy,
        ground_states,
        degeneracy,
        method: SolveMethod::ChainDp,
    })
}

pub struct ChainDp {
    max_ground_states: usize,
}

impl ChainDp {
    pub fn new(max_ground_states: usize) -> Self {
        Self { max_ground_states }
    }
}

impl ExactSolver for ChainDp {
    fn name(&self) -> &'static str {
        "chain_dp"
    }

    fn solve(&self, model: &QuboModel, spec: &OracleSpec) -> Result<ExactSolution> {
        solve_chain_dp(model, spec, self.max_ground_states)
    }
}
