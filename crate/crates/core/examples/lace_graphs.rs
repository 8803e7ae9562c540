//! Laces on a short interval: the prescription, compatible edges and counts.

use cubesaw::lace::{all_laces, compatible_edges, enumerate_laces, lace_prescription, IntervalGraph};

fn main() -> cubesaw::Result<()> {
    let g = IntervalGraph::from_pairs(0, 6, &[(0, 2), (0, 3), (1, 4), (2, 5), (3, 6), (4, 6)])?;
    let lace = lace_prescription(&g)?;
    println!("graph {:?}", g.edges().iter().map(|e| e.to_string()).collect::<Vec<_>>());
    println!("lace  {lace}");
    let compat: Vec<String> = compatible_edges(&lace).iter().map(|e| e.to_string()).collect();
    println!("compatible edges: {}", compat.join(" "));
    for m in 2..=8 {
        let by_size: Vec<usize> = (1..m as usize).map(|k| enumerate_laces(m, k).len()).collect();
        println!("[0, {m}]: {} laces, by size {:?}", all_laces(m).len(), by_size);
    }
    Ok(())
}
