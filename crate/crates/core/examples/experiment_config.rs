//! Driving the experiment runner from code: build a run configuration,
//! execute the Melnikov experiment into a temporary directory and print
//! the zeros table it wrote.

use subharmonic::cli::{cmd_melnikov, RunConfig};

fn main() {
    let dir = std::env::temp_dir().join("subharm-example");
    let mut cfg = RunConfig::from_json(
        r#"{
            "system": { "forcing": "1*sin(1),4*cos(2)" },
            "experiment": { "m": 3, "n": 2, "v0": 1.7, "samples": 64 },
            "output": { "precision": 8 }
        }"#,
    )
    .expect("valid config");
    cfg.output.dir = dir;
    match cmd_melnikov(&cfg) {
        Ok(files) => {
            for f in &files {
                println!("wrote {}", f.display());
            }
            let zeros = files.iter().find(|f| f.ends_with("melnikov_zeros.csv")).expect("zeros file");
            print!("{}", std::fs::read_to_string(zeros).expect("readable"));
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
