use canopy::fdr::discoveries;
use canopy::msc::{random_species_tree, simulate_gene_trees, LengthLaw, SimConfig};
use canopy::pipeline::{run_fdr_pipeline, FdrPipelineConfig};
use canopy::similarity::RhoCache;
use canopy::Rational;

fn main() {
    let law = LengthLaw { mean: 2.0, variance: 4.0 };
    for q in [(1u64, 20u64), (1, 5)] {
        let start = std::time::Instant::now();
        let mut fdp_sum = Rational::new(0, 1);
        let mut fd_zero = 0;
        let mut tds = Vec::new();
        for rep in 0..20u64 {
            let sp = random_species_tree(8, 1000 + rep, law).unwrap();
            let (reference, _) = sp.topology().unwrap();
            let samples = simulate_gene_trees(&sp, &SimConfig::new(100, 1.0, 2000 + rep)).unwrap();
            let cfg = FdrPipelineConfig::new(
                Rational::new(q.0, q.1),
                Rational::new(17, 20),
                Rational::new(3, 4),
                3000 + rep,
            );
            let cache = RhoCache::new();
            let out = match run_fdr_pipeline(&samples, &cfg, &cache) { Ok(o) => o, Err(e) => { println!("rep {rep} q {:?} error: {e}", q); continue; } };
            let d = discoveries(&out.tree, &reference, &cache);
            fdp_sum += d.fdp;
            if d.false_discoveries == 0 { fd_zero += 1; }
            tds.push(d.true_discoveries);
        }
        println!(
            "q={}/{}: mean FDP = {} ({:.4}), FD=0 in {}/20, TDs {:?}, took {:?}",
            q.0, q.1,
            fdp_sum / Rational::new(20, 1),
            (*(fdp_sum / Rational::new(20, 1)).numer() as f64) / (*(fdp_sum / Rational::new(20, 1)).denom() as f64),
            fd_zero, tds,
            start.elapsed()
        );
    }
}
