//! Regenerates the bundled synthetic images.
//!
//! ```text
//! cargo run -p heatgraph --example make_synthetic [OUT_DIR]
//! ```
//!
//! `OUT_DIR` defaults to `data/synthetic` at the workspace root.

use std::path::PathBuf;

use heatgraph::bench::synthetic::bundled_set;
use heatgraph::image::{write_pgm, PgmMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/synthetic"));
    std::fs::create_dir_all(&out)?;
    for (name, img) in bundled_set()? {
        let path = out.join(format!("{name}.pgm"));
        std::fs::write(&path, write_pgm(&img, PgmMode::Binary))?;
        println!("{}", path.display());
    }
    Ok(())
}
