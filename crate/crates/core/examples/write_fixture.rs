//! Writes the judged fixture collection to `tests/fixtures/`.
//!
//! cargo run -p mathrelax --example write_fixture

use std::fs;
use std::path::Path;

use mathrelax::synthetic::fixture;
use mathrelax::trec::write_qrels;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    fs::create_dir_all(&dir)?;
    let f = fixture();
    let corpus: String = f.corpus.iter().map(|d| format!("{}\t{}\n", d.doc_id, d.body)).collect();
    fs::write(dir.join("corpus.tsv"), corpus)?;
    fs::write(dir.join("topics.tsv"), f.topics)?;
    fs::write(dir.join("qrels.txt"), write_qrels(&f.qrels))?;
    println!("wrote {}", dir.display());
    Ok(())
}
