use tiercast_core::correlation::{analysis_matrix, correlation_matrix};
use tiercast_core::dataset::{generate_synthetic, GeneratorConfig};
use tiercast_core::preprocess::derive_labels;
use tiercast_core::tiering::TierThresholds;

fn main() {
    let config = GeneratorConfig::default();
    let ds = generate_synthetic(&config).unwrap();
    let (m, _) = analysis_matrix(&ds).unwrap();
    let cm = correlation_matrix(&m).unwrap().matrix;
    println!("r vs microcomputer:");
    for c in cm.columns() {
        if c != "microcomputer" {
            println!("  {:<18} {:+.4}", c, cm.by_name(c, "microcomputer").unwrap());
        }
    }
    let labels = derive_labels(&ds, &TierThresholds::default()).unwrap();
    let mut counts = [0usize; 3];
    for l in &labels { counts[l.index()] += 1; }
    let n = labels.len() as f64;
    println!("tiers: A {:.1}%  B {:.1}%  C {:.1}%", 100.0*counts[0] as f64/n, 100.0*counts[1] as f64/n, 100.0*counts[2] as f64/n);
    let scores: Vec<f64> = ds.records().iter().map(|r| r.microcomputer.unwrap()).collect();
    let mean = scores.iter().sum::<f64>() / n;
    let sd = (scores.iter().map(|s| (s-mean).powi(2)).sum::<f64>() / n).sqrt();
    println!("target mean {mean:.1} sd {sd:.1}");
}
