use serde::Serialize;

use super::{AssignmentProblem, ClassicError};
use crate::transport::{is_integer, SimplifiedPlan, TransportProblem};

/// Default cap on predicted expanded arc storage: 256 MB.
pub const DEFAULT_EXPANSION_CAP: u64 = 256 << 20;
/// Bytes counted per expanded arc.
pub const ARC_BYTES: u64 = 16;

/// Predicted size of the assignment problem a transport problem expands to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpansionSize {
    /// `2L`: one person per unit of demand, one object per unit of supply.
    pub vertices: u64,
    /// `Σ_i Σ_{j in A(i)} d_i s_j`.
    pub arcs: u64,
    pub bytes: u64,
}

/// Which original vertex each person and object copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionMap {
    pub person_sink: Vec<usize>,
    pub object_source: Vec<usize>,
    /// First person of each sink; sink `i` owns persons `sink_offset[i]..sink_offset[i + 1]`.
    pub sink_offset: Vec<usize>,
    pub source_offset: Vec<usize>,
}

impl ExpansionMap {
    pub fn sink_copies(&self, sink: usize) -> usize {
        self.sink_offset[sink + 1] - self.sink_offset[sink]
    }

    pub fn source_copies(&self, source: usize) -> usize {
        self.source_offset[source + 1] - self.source_offset[source]
    }

    pub fn num_sinks(&self) -> usize {
        self.sink_offset.len() - 1
    }

    pub fn num_sources(&self) -> usize {
        self.source_offset.len() - 1
    }

    /// Lowest price among each source's copies.
    pub fn lot_prices(&self, object_prices: &[f64]) -> Vec<f64> {
        (0..self.num_sources())
            .map(|j| {
                object_prices[self.source_offset[j]..self.source_offset[j + 1]]
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }
}

fn integral_weights(problem: &TransportProblem) -> Result<(Vec<usize>, Vec<usize>), ClassicError> {
    if !problem.weights_integral() {
        return Err(ClassicError::NonIntegerWeights);
    }
    let round = |w: &f64| w.round() as usize;
    Ok((
        problem.demands().iter().map(round).collect(),
        problem.supplies().iter().map(round).collect(),
    ))
}

pub fn predict_expansion(problem: &TransportProblem) -> Result<ExpansionSize, ClassicError> {
    let (d, s) = integral_weights(problem)?;
    let total: u64 = d.iter().map(|&x| x as u64).sum();
    let arcs: u64 = (0..problem.num_sinks())
        .map(|i| {
            problem
                .adjacent(i)
                .iter()
                .map(|&(j, _)| d[i] as u64 * s[j] as u64)
                .sum::<u64>()
        })
        .sum();
    Ok(ExpansionSize {
        vertices: 2 * total,
        arcs,
        bytes: arcs.saturating_mul(ARC_BYTES),
    })
}

/// Splits every sink into `d_i` persons and every source into `s_j` objects.
/// Persons of one sink form a similarity class, as do objects of one source.
pub fn expand_to_assignment(
    problem: &TransportProblem,
    cap_bytes: u64,
) -> Result<(AssignmentProblem, ExpansionMap), ClassicError> {
    problem.ensure_valid()?;
    let size = predict_expansion(problem)?;
    if problem.arcs().any(|a| !is_integer(a.cost)) {
        return Err(ClassicError::NonIntegerCosts);
    }
    if size.bytes > cap_bytes {
        return Err(ClassicError::CapExceeded {
            size,
            cap: cap_bytes,
        });
    }
    let (d, s) = integral_weights(problem)?;
    let offsets = |w: &[usize]| {
        let mut out = vec![0];
        for &x in w {
            out.push(out.last().unwrap() + x);
        }
        out
    };
    let sink_offset = offsets(&d);
    let source_offset = offsets(&s);
    let person_sink: Vec<usize> = (0..d.len())
        .flat_map(|i| std::iter::repeat(i).take(d[i]))
        .collect();
    let object_source: Vec<usize> = (0..s.len())
        .flat_map(|j| std::iter::repeat(j).take(s[j]))
        .collect();
    let mut adjacency = Vec::with_capacity(person_sink.len());
    for &i in &person_sink {
        let row: Vec<(usize, f64)> = problem
            .adjacent(i)
            .iter()
            .flat_map(|&(j, c)| (source_offset[j]..source_offset[j + 1]).map(move |o| (o, c)))
            .collect();
        adjacency.push(row);
    }
    let ap =
        AssignmentProblem::with_classes(adjacency, person_sink.clone(), object_source.clone())?;
    Ok((
        ap,
        ExpansionMap {
            person_sink,
            object_source,
            sink_offset,
            source_offset,
        },
    ))
}

/// Aggregates a complete assignment back onto the original arcs.
pub fn collapse_assignment(
    assignment: &[Option<usize>],
    map: &ExpansionMap,
) -> Result<SimplifiedPlan, ClassicError> {
    if assignment.len() != map.person_sink.len() {
        return Err(ClassicError::Incomplete {
            person: assignment.len().min(map.person_sink.len()),
        });
    }
    let mut plan = SimplifiedPlan::new();
    for (person, object) in assignment.iter().enumerate() {
        let object = object.ok_or(ClassicError::Incomplete { person })?;
        plan.add(map.person_sink[person], map.object_source[object], 1.0);
    }
    Ok(plan)
}
