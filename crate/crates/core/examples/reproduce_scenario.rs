//! Drive the command-line front end from code: run a bundled scenario into a
//! directory and list what it wrote.

use std::env;

fn main() {
    let target = env::args().nth(1).unwrap_or_else(|| "fig3".into());
    let out = env::temp_dir().join(format!("fluxmag-{target}"));
    let code = fluxmag::cli::main_with_args(["fluxmag", "reproduce", &target, "--out", out.to_str().unwrap()]);
    if code != 0 {
        std::process::exit(code);
    }
    let mut names: Vec<_> =
        std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    println!("{}:", out.display());
    for n in names {
        println!("  {n}");
    }
}
