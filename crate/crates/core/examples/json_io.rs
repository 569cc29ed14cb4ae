//! Reading matrices in the JSON exchange format and running the command
//! line front end in-process.

use semidw::io::{matrix_to_json, parse_matrix, BlockJson};

fn main() -> semidw::Result<()> {
    let a = parse_matrix(r#"{"rows": 2, "cols": 2, "re": [[1, 0], [0, 2]]}"#)?;
    let t = parse_matrix(r#"{"rows": 2, "cols": 2, "re": [[0, 1], [0, 0]], "im": [[0, 0], [0.5, 0]]}"#)?;
    println!("A = {}", matrix_to_json(&a));
    println!("T = {}", matrix_to_json(&t));

    let block: BlockJson = serde_json::from_str(&format!(
        r#"{{"t11": {z}, "t12": {x}, "t21": {z}, "t22": {z}}}"#,
        z = r#"{"rows":2,"cols":2,"re":[[0,0],[0,0]]}"#,
        x = r#"{"rows":2,"cols":2,"re":[[0,1],[0,0]]}"#
    ))?;
    let [_, x, _, _] = block.to_operators()?;
    println!("block entry t12 = {}", matrix_to_json(x.matrix()));

    let dir = std::env::temp_dir().join("semidw-json-io");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("a.json"), matrix_to_json(&a))?;
    std::fs::write(dir.join("t.json"), matrix_to_json(&t))?;
    let args = ["semidw", "compute", "--metric", "a.json", "--operator", "t.json", "--samples", "20000"];
    let args: Vec<String> = args.iter().map(|s| if s.ends_with(".json") { dir.join(s).display().to_string() } else { s.to_string() }).collect();
    let code = semidw::cli::run_from(args, &mut std::io::stdout(), &mut std::io::stderr());
    println!("exit code {code}");
    Ok(())
}
