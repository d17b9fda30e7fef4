//! Splitting a tagged tensor network into one Clifford tensor and one
//! matchgate tensor joined by bridge legs, by brute-force contraction.

use crate::compile::DenseTensor;
use crate::error::{QuonError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Largest open-plus-bridge leg count accepted.
pub const MAX_NETWORK_LEGS: usize = 12;
const MAX_INTERMEDIATE_RANK: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorKind {
    Clifford,
    Matchgate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedTensor {
    pub tensor: DenseTensor,
    pub kind: Option<TensorKind>,
}

/// A leg is `(tensor index, leg index)`.
pub type Leg = (usize, usize);

/// Tensors plus the contraction plan: each edge joins two legs. Uncontracted
/// legs are open, ordered by tensor and then by leg. A plan that glues
/// neighboring legs of consecutive tensors keeps this order planar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorNetwork {
    pub tensors: Vec<TaggedTensor>,
    pub edges: Vec<(Leg, Leg)>,
}

impl TensorNetwork {
    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for &(a, b) in &self.edges {
            for (t, l) in [a, b] {
                if self.tensors.get(t).is_none_or(|x| l >= x.tensor.rank) {
                    return Err(QuonError::InvalidDiagram(format!("edge leg ({t}, {l}) out of range")));
                }
                if !seen.insert((t, l)) {
                    return Err(QuonError::InvalidDiagram(format!("leg ({t}, {l}) used twice")));
                }
            }
        }
        Ok(())
    }

    pub fn open_legs(&self) -> Vec<Leg> {
        let used: HashSet<Leg> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        self.tensors
            .iter()
            .enumerate()
            .flat_map(|(t, x)| (0..x.tensor.rank).map(move |l| (t, l)))
            .filter(|leg| !used.contains(leg))
            .collect()
    }

    fn kind(&self, t: usize) -> Result<TensorKind> {
        self.tensors[t].kind.ok_or(QuonError::UntaggedTensor(t))
    }
}

/// Contracts the tensors in `members` (in order) over every edge internal to
/// them. Returns the tensor and the labels of its legs.
fn contract_group(net: &TensorNetwork, members: &[usize]) -> Result<(DenseTensor, Vec<Leg>)> {
    let inside: HashSet<usize> = members.iter().copied().collect();
    let internal: Vec<(Leg, Leg)> = net.edges.iter().copied().filter(|(a, b)| inside.contains(&a.0) && inside.contains(&b.0)).collect();
    let mut acc = DenseTensor::scalar(Complex64::new(1.0, 0.0));
    let mut labels: Vec<Leg> = Vec::new();
    for &t in members {
        let x = &net.tensors[t].tensor;
        if acc.rank + x.rank > MAX_INTERMEDIATE_RANK {
            return Err(QuonError::TooLarge(format!("intermediate rank {}", acc.rank + x.rank)));
        }
        acc = acc.outer(x);
        labels.extend((0..x.rank).map(|l| (t, l)));
        let ready: Vec<(usize, usize)> = internal
            .iter()
            .filter_map(|(a, b)| Some((labels.iter().position(|l| l == a)?, labels.iter().position(|l| l == b)?)))
            .collect();
        if !ready.is_empty() {
            acc = acc.trace(&ready);
            let gone: HashSet<usize> = ready.iter().flat_map(|&(a, b)| [a, b]).collect();
            labels = labels.into_iter().enumerate().filter(|(i, _)| !gone.contains(i)).map(|(_, l)| l).collect();
        }
    }
    Ok((acc, labels))
}

/// Brute-force contraction of the whole network, legs in open-leg order.
pub fn contract_network(net: &TensorNetwork) -> Result<DenseTensor> {
    net.validate()?;
    let all: Vec<usize> = (0..net.tensors.len()).collect();
    let (t, labels) = contract_group(net, &all)?;
    let open = net.open_legs();
    let order: Vec<usize> = open.iter().map(|l| labels.iter().position(|x| x == l).expect("open leg survives")).collect();
    Ok(t.permuted(&order))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub clifford: DenseTensor,
    pub clifford_legs: Vec<Leg>,
    pub matchgate: DenseTensor,
    pub matchgate_legs: Vec<Leg>,
    /// Edges between the parts as `(clifford end, matchgate end)`.
    pub bridge_legs: Vec<(Leg, Leg)>,
    pub open_legs: Vec<Leg>,
}

impl Decomposition {
    /// Contracts the two parts over the bridge legs, in open-leg order.
    pub fn recombine(&self) -> DenseTensor {
        let pos = |legs: &[Leg], l: &Leg| legs.iter().position(|x| x == l).expect("bridge leg present");
        let pairs: Vec<(usize, usize)> = self.bridge_legs.iter().map(|(c, m)| (pos(&self.clifford_legs, c), pos(&self.matchgate_legs, m))).collect();
        let joined = self.clifford.contract(&self.matchgate, &pairs);
        let bridged: HashSet<Leg> = self.bridge_legs.iter().flat_map(|&(c, m)| [c, m]).collect();
        let labels: Vec<Leg> = self.clifford_legs.iter().chain(&self.matchgate_legs).copied().filter(|l| !bridged.contains(l)).collect();
        let order: Vec<usize> = self.open_legs.iter().map(|l| pos(&labels, l)).collect();
        joined.permuted(&order)
    }
}

/// Contracts the Clifford tensors and the matchgate tensors separately; the
/// edges between the two groups become bridge legs.
pub fn clifford_matchgate_decompose(net: &TensorNetwork) -> Result<Decomposition> {
    net.validate()?;
    let kinds: Vec<TensorKind> = (0..net.tensors.len()).map(|t| net.kind(t)).collect::<Result<_>>()?;
    let group = |k: TensorKind| -> Vec<usize> { (0..kinds.len()).filter(|&t| kinds[t] == k).collect() };
    let bridge_legs: Vec<(Leg, Leg)> = net
        .edges
        .iter()
        .filter(|(a, b)| kinds[a.0] != kinds[b.0])
        .map(|&(a, b)| if kinds[a.0] == TensorKind::Clifford { (a, b) } else { (b, a) })
        .collect();
    let open_legs = net.open_legs();
    if open_legs.len() + bridge_legs.len() > MAX_NETWORK_LEGS {
        return Err(QuonError::TooLarge(format!("{} open and {} bridge legs", open_legs.len(), bridge_legs.len())));
    }
    let (clifford, clifford_legs) = contract_group(net, &group(TensorKind::Clifford))?;
    let (matchgate, matchgate_legs) = contract_group(net, &group(TensorKind::Matchgate))?;
    Ok(Decomposition { clifford, clifford_legs, matchgate, matchgate_legs, bridge_legs, open_legs })
}
