//! Walk-through of the worked example: every intermediate weight and score
//! for the unlabeled point (b, f, b) under all three resemblance rules.

use std::fmt::Write as _;

use crate::fixture;
use crate::labeling::{
    combination_frequency, enumerate_combinations, expected_combination_importance, expected_combination_weight,
    label_point, resemblance_nir, Method,
};
use crate::model::{project_point, NodesetCombination};
use crate::representative::{PruningPolicy, RepresentativeModel};

/// Four significant digits, trailing zeros kept; zero prints as `0`.
pub fn sig4(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (3 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn cluster_name(i: usize) -> String {
    format!("c_{} (cluster {i})", i + 1)
}

fn short(i: usize) -> String {
    format!("c_{}", i + 1)
}

fn truncate3(x: f64) -> f64 {
    (x * 1000.0).trunc() / 1000.0
}

pub fn demo_example1() -> String {
    let clustering = fixture::example_clustering();
    let model = RepresentativeModel::build(&clustering, PruningPolicy::None).expect("example builds");
    let point = fixture::bfb();
    let k = model.k();
    let mut out = String::new();

    writeln!(out, "Example dataset: attributes A1, A2, A3; {k} clusters of 5 points").unwrap();
    for (i, cluster) in clustering.clusters().iter().enumerate() {
        let rows: Vec<String> = cluster.iter().map(ToString::to_string).collect();
        writeln!(out, "  {}: {}", cluster_name(i), rows.join(" ")).unwrap();
    }
    let unlabeled: Vec<String> = clustering.unlabeled().iter().map(ToString::to_string).collect();
    writeln!(out, "  unlabeled: {}", unlabeled.join(" ")).unwrap();
    writeln!(out, "Point p = {point}").unwrap();
    writeln!(out).unwrap();

    writeln!(out, "Entropy weighting f of the nodesets of p").unwrap();
    for mask in 1u32..(1 << point.len()) {
        let attrs: Vec<usize> = (0..point.len()).filter(|a| mask & (1 << a) != 0).collect();
        let nodeset = project_point(&point, &attrs).expect("attributes in range");
        match model.nnir().get(&nodeset) {
            Some(s) => {
                let counts: Vec<String> = s.counts().iter().map(u64::to_string).collect();
                writeln!(out, "  f({nodeset}) = {}  counts ({})", sig4(s.f()), counts.join(",")).unwrap();
            }
            None => writeln!(out, "  {nodeset} occurs in no cluster").unwrap(),
        }
    }
    writeln!(out).unwrap();

    let describe = |c: &NodesetCombination, i: usize| -> (f64, f64, f64) {
        (
            combination_frequency(c, i, &model).expect("enumerated combination"),
            expected_combination_weight(c, i, &model).expect("enumerated combination"),
            expected_combination_importance(c, i, &model).expect("enumerated combination"),
        )
    };

    writeln!(out, "nnir-product: product of block frequencies times expected f").unwrap();
    for i in 0..k {
        writeln!(out, "  {}", cluster_name(i)).unwrap();
        for c in enumerate_combinations(&point, i, &model).expect("valid point") {
            let (freq, ef, _) = describe(&c, i);
            writeln!(out, "    {c}: {} * {} = {}", sig4(freq), sig4(ef), sig4(freq * ef)).unwrap();
        }
        let best = crate::labeling::resemblance_nnir(&point, i, &model).expect("valid point");
        let via = best.combination.map(|c| format!(" via {c}")).unwrap_or_default();
        writeln!(out, "    R_NNIR({}) = {}{via}", short(i), sig4(best.value)).unwrap();
    }
    writeln!(out).unwrap();

    writeln!(out, "nir-sum: sum of single-node importances w").unwrap();
    for i in 0..k {
        let terms: Vec<f64> = point.nodes().map(|n| model.nir().weight(i, &n)).collect();
        let total = resemblance_nir(&point, i, &model).expect("valid point").value;
        let shown: Vec<String> = terms.iter().map(|&t| sig4(t)).collect();
        writeln!(out, "  R_NIR({}) = {} = {}", short(i), shown.join(" + "), sig4(total)).unwrap();
        let cut: Vec<f64> = terms.iter().map(|&t| truncate3(t)).collect();
        let cut_shown: Vec<String> = cut.iter().map(|&t| format!("{t:.3}")).collect();
        writeln!(
            out,
            "  R_NIR({}) = {:.3} with each term truncated to 3 decimals ({})",
            short(i),
            cut.iter().sum::<f64>(),
            cut_shown.join(" + ")
        )
        .unwrap();
    }
    writeln!(out).unwrap();

    writeln!(out, "max-sum: expected block importance w, best combination").unwrap();
    for i in 0..k {
        writeln!(out, "  {}", cluster_name(i)).unwrap();
        for c in enumerate_combinations(&point, i, &model).expect("valid point") {
            let (_, _, ew) = describe(&c, i);
            writeln!(out, "    {c}: {}", sig4(ew)).unwrap();
        }
        let best = crate::labeling::resemblance_maxsum(&point, i, &model).expect("valid point");
        let via = best.combination.map(|c| format!(" via {c}")).unwrap_or_default();
        writeln!(out, "    R_MAXSUM({}) = {}{via}", short(i), sig4(best.value)).unwrap();
    }
    writeln!(out).unwrap();

    writeln!(out, "Labels for p = {point}").unwrap();
    let mut chosen = Vec::new();
    for method in Method::ALL {
        let label = label_point(&point, &model, method).expect("valid point");
        let target = label.cluster.map_or("unassigned".to_string(), cluster_name);
        let tie = if label.tie { " (tie)" } else { "" };
        writeln!(out, "  {:<13} -> {target}{tie}", method.as_str()).unwrap();
        chosen.push(label.cluster);
    }
    let verdict = |a: usize, b: usize| if chosen[a] == chosen[b] { "agree" } else { "disagree" };
    writeln!(out, "nir-sum and nnir-product {} on {point}", verdict(0, 1)).unwrap();
    writeln!(out, "max-sum and nnir-product {} on {point}", verdict(2, 1)).unwrap();
    out
}
