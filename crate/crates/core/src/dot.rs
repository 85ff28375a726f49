//! Graphviz export of Hasse diagrams.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::lattice::FiniteLattice;
use crate::planar::Realizer;

#[derive(Clone, Debug, Default)]
pub struct DotOptions<'a> {
    pub realizer: Option<&'a Realizer>,
    pub labels: Option<&'a BTreeMap<usize, String>>,
    /// Elements drawn filled.
    pub highlight: &'a [usize],
    pub name: Option<&'a str>,
}

/// Hasse diagram with one rank per height. With a realizer, elements of a
/// rank are laid out in left-right order, pinned by invisible edges.
pub fn export_dot(lattice: &FiniteLattice, opts: &DotOptions<'_>) -> String {
    let heights = lattice.poset().heights();
    let pos: Vec<usize> = match opts.realizer {
        Some(r) => r.positions().0,
        None => (0..lattice.len()).collect(),
    };
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..lattice.len() {
        ranks.entry(heights[x]).or_default().push(x);
    }
    for row in ranks.values_mut() {
        row.sort_by_key(|&x| pos[x]);
    }

    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", opts.name.unwrap_or("lattice"));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=circle, width=0.3, fixedsize=false];");
    for x in 0..lattice.len() {
        let label = opts
            .labels
            .and_then(|l| l.get(&x))
            .cloned()
            .unwrap_or_else(|| x.to_string());
        let style = if opts.highlight.contains(&x) {
            ", style=filled, fillcolor=black, fontcolor=white"
        } else {
            ""
        };
        let _ = writeln!(out, "  n{x} [label=\"{}\"{style}];", label.replace('"', "\\\""));
    }
    for &(a, b) in lattice.covers() {
        let _ = writeln!(out, "  n{a} -> n{b} [arrowhead=none];");
    }
    for row in ranks.values() {
        let names: Vec<String> = row.iter().map(|x| format!("n{x}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", names.join("; "));
        if opts.realizer.is_some() {
            for w in row.windows(2) {
                let _ = writeln!(out, "  n{} -> n{} [style=invis];", w[0], w[1]);
            }
        }
    }
    out.push_str("}\n");
    out
}
