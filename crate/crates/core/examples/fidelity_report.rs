//! Distribution statistics of every method against the data, plus violin
//! density curves.

use std::path::Path;

use gridviz::eval::evaluate;
use gridviz::model::{gen_synthetic, Profile};
use gridviz::pipeline::Method;
use gridviz::render::RenderConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "gridviz-out".into());
    std::fs::create_dir_all(&out)?;
    let snap = gen_synthetic(2000, 9, Profile::Clustered)?;
    let report = evaluate(&snap, &RenderConfig::default(), &Method::ALL)?;

    println!("{:<11} {:>8} {:>9} {:>8} {:>8} {:>8}", "", "median", "kurtosis", "sd", "min", "max");
    let rows = std::iter::once(("data", &report.data)).chain(report.methods.iter().map(|(k, v)| (k.as_str(), v)));
    for (name, s) in rows {
        let k = s.kurtosis.map_or("-".to_owned(), |k| format!("{k:.2}"));
        println!("{name:<11} {:>8.4} {k:>9} {:>8.4} {:>8.4} {:>8.4}", s.median, s.sd, s.min, s.max);
    }

    let dir = Path::new(&out);
    std::fs::write(dir.join("stats.json"), report.stats_json()?)?;
    std::fs::write(dir.join("violin.csv"), report.violin_csv())?;
    Ok(())
}
