use canopy::consensus::{estimate_stable, EstimateOptions, SampleSet};
use canopy::msc::{simulate_rooted, SpeciesTree};
use canopy::newick::to_topology;
use canopy::similarity::RhoCache;
use canopy::{Rational, Universe};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let t1 = SpeciesTree::from_newick(
        "(((A:1,B:1):0.2,G:1):4.8,(C:1,D:1):5,(E:1,F:1):5);",
    )
    .unwrap();
    let t2 = SpeciesTree::from_newick(
        "((A:1,B:1):5,(C:1,D:1):5,((E:1,F:1):0.2,G:1):4.8);",
    )
    .unwrap();
    let mut universe = Universe::from_names(["A", "B", "C", "D", "E", "F", "G"]).unwrap();
    let n = 1000;
    let seed = 424242u64;
    let mut trees = Vec::new();
    for i in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let sp = if rng.gen_bool(0.5) { &t1 } else { &t2 };
        let rooted = simulate_rooted(sp, &mut rng);
        trees.push(to_topology(&rooted, &mut universe).unwrap());
    }
    let d = SampleSet::new(universe.clone(), trees).unwrap();
    println!("distinct topologies: {}", d.distinct().len());
    let cache = RhoCache::new();
    let start = std::time::Instant::now();
    let out = estimate_stable(&d, &EstimateOptions::new(Rational::new(9, 10)), &cache).unwrap();
    println!("took {:?}", start.elapsed());
    println!("tree: {}", out.tree.debug_string(&universe));
    println!("has G: {}", out.tree.leaves().contains(canopy::LeafId(6)));
    for e in &out.report.entries {
        println!("  {} {} = {}", e.feature.kind(), e.feature.display(&universe), e.stability);
    }
}
