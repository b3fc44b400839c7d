//! Prints the derivation tree of a decomposition and re-checks every step.
//!
//! `cargo run --example derivation_trace`

use std::collections::HashSet;
use std::sync::Arc;

use polyloop::complex::SimplicialComplex;
use polyloop::engine::{decompose_loop, verify_trace, PairSpec, TraceNode};

fn show(node: &Arc<TraceNode>, depth: usize, seen: &mut HashSet<*const TraceNode>) {
    let shared = !seen.insert(Arc::as_ptr(node));
    let split = node.split.as_ref().map(|s| format!(" at vertex {}", s.vertex)).unwrap_or_default();
    println!("{}{:?}{split}: {}{}", "  ".repeat(depth), node.rule, node.output, if shared { " (shared)" } else { "" });
    if !shared {
        for child in &node.children {
            show(child, depth + 1, seen);
        }
    }
}

fn main() -> polyloop::error::Result<()> {
    let k = SimplicialComplex::from_facets(5, &[vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![1, 5]])?;
    let (p, trace) = decompose_loop(&k, &PairSpec::disks(3, 5)?, 12)?;
    show(&trace, 0, &mut HashSet::new());
    println!("result {p}");
    println!("{} distinct nodes, {} failing identities", trace.distinct_nodes(), verify_trace(&trace).len());
    Ok(())
}
