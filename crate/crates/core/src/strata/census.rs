//! A slow, independent stable-graph census and the census checks.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::report::{Check, Mismatch};
use crate::strata::{enumerate_stable_graphs, StableGraph};

/// Independent census: all vertex genera, symmetric multiplicity matrices and leg maps.
pub fn brute_force_graphs(g: u32, n: usize) -> BTreeSet<StableGraph> {
    let mut out = BTreeSet::new();
    let max_v = (2 * g as usize + n).saturating_sub(2).max(1);
    for nv in 1..=max_v {
        let genera_all = tuples(nv, g);
        for genera in genera_all {
            let sum: u32 = genera.iter().sum();
            if sum > g {
                continue;
            }
            let e_count = (g - sum) as usize + nv - 1;
            let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
            for mult in multisets(pairs.len(), e_count) {
                let mut edges = Vec::new();
                for (i, &m) in mult.iter().enumerate() {
                    for _ in 0..m {
                        edges.push(pairs[i]);
                    }
                }
                for leg_code in 0..nv.pow(n as u32) {
                    let mut legs = Vec::new();
                    let mut c = leg_code;
                    for _ in 0..n {
                        legs.push(c % nv);
                        c /= nv;
                    }
                    if let Ok(graph) = StableGraph::new(genera.clone(), legs, edges.clone()) {
                        out.insert(graph.canonical());
                    }
                }
            }
        }
    }
    out
}

fn tuples(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| (0..=max).map(move |x| {
                let mut t = t.clone();
                t.push(x);
                t
            }))
            .collect();
    }
    out
}

fn multisets(slots: usize, total: usize) -> Vec<Vec<usize>> {
    if slots == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in multisets(slots - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Counts from the fast enumerator against the brute-force census, plus a few
/// automorphism orders.
pub fn verify() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (g, n, count) in [(0u32, 3usize, 1usize), (1, 1, 2), (2, 0, 7), (0, 4, 4), (1, 2, 5)] {
        let fast: BTreeSet<StableGraph> = enumerate_stable_graphs(g, n)?.into_iter().collect();
        let slow = brute_force_graphs(g, n);
        let mismatch = if fast != slow {
            Some(Mismatch { location: format!("({g},{n}) graph set"), expected: slow.len().to_string(), computed: fast.len().to_string() })
        } else if fast.len() != count {
            Some(Mismatch { location: format!("({g},{n}) count"), expected: count.to_string(), computed: fast.len().to_string() })
        } else {
            None
        };
        out.push(Check::from_mismatch(
            format!("stable graphs of type ({g},{n})"),
            "stable graph census",
            format!("{} graphs, same set as the brute-force census", fast.len()),
            mismatch,
        ));
    }
    let listed = [
        ("smooth (0,3)", StableGraph::smooth(0, 3)?, 1u64),
        ("genus-one vertex with a loop", StableGraph::new(vec![1], vec![], vec![(0, 0)])?, 2),
        ("theta graph", StableGraph::new(vec![0, 0], vec![], vec![(0, 1), (0, 1), (0, 1)])?, 12),
    ];
    for (name, graph, expect) in listed {
        let got = graph.automorphism_order();
        out.push(Check::from_mismatch(
            format!("automorphisms of the {name}"),
            "stable graph census",
            format!("|Aut| = {got}"),
            (got != expect).then(|| Mismatch { location: name.into(), expected: expect.to_string(), computed: got.to_string() }),
        ));
    }
    Ok(out)
}
