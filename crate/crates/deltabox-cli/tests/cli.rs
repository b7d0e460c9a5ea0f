//! End-to-end runs of the compiled binary: exit codes, output shape,
//! parameter precedence, and byte determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltabox"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr should be UTF-8")
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|line| !line.starts_with('#') && !line.is_empty())
        .skip(1)
        .collect()
}

#[test]
fn spectrum_reports_the_reference_ground_state() {
    let out = run(&[
        "spectrum", "--sigma", "+1", "--pi", "+1", "--g", "1", "--c", "0", "--nmax", "50", "--k",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# basis_size"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2);
    let ground: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
    // Converges to 22.532 from above as the cutoff grows.
    assert!((ground - 22.533).abs() < 0.02, "ground = {ground}");
}

#[test]
fn spectrum_accepts_fractional_displacement() {
    let out = run(&["spectrum", "--c", "1/2", "--nmax", "12", "--k", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("# c 5.00000000000e-1"));
}

#[test]
fn invalid_parameters_exit_with_code_2() {
    for args in [
        &["spectrum", "--sigma", "+2"][..],
        &["spectrum", "--g", "-1", "--nmax", "10"][..],
        &["spectrum", "--nonsense"][..],
        &["dark", "--c", "0.5"][..],
        &["dark", "--c", "4/6"][..],
        &["spectrum", "--format", "yaml", "--nmax", "10"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
    }
}

#[test]
fn dark_default_catalog_is_the_four_reference_rows() {
    let out = run(&["dark"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(
        rows,
        vec![
            "1,3,4,2,1,6,3,45,+1,-1",
            "1,2,2,1,1,4,2,20,+1,+1",
            "1,2,3,1,1,6,2,40,-1,+1",
            "2,3,2,1,1,6,3,45,-1,-1",
        ]
    );
}

#[test]
fn dark_tower_scales_quadratically() {
    let out = run(&["dark", "--c", "1/2", "--tower", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let energies: Vec<&str> = data_rows(&text)
        .iter()
        .map(|row| row.split(',').nth(7).unwrap())
        .collect();
    assert_eq!(energies, vec!["20", "80", "180"]);
}

#[test]
fn dark_verify_appends_small_residuals() {
    let out = run(&["dark", "--c", "1/2", "--verify", "--nmax", "30"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains(",residual"));
    for row in data_rows(&text) {
        let residual: f64 = row.split(',').last().unwrap().parse().unwrap();
        assert!(residual <= 1e-12, "row: {row}");
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let first = run(&["sweep-c", "--nmax", "16", "--steps", "2", "--c-min", "0.1", "--c-max",
        "0.3", "--k", "3"]);
    let second = run(&["sweep-c", "--nmax", "16", "--steps", "2", "--c-min", "0.1", "--c-max",
        "0.3", "--k", "3"]);
    assert!(first.status.success(), "{}", stderr(&first));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.contains("# c_dagger"));
    assert!(text.contains(",out,") || text.contains(",in,") || text.contains(",mixed,"));
}

#[test]
fn config_file_fills_gaps_and_flags_win() {
    let dir = std::env::temp_dir().join("deltabox-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    std::fs::write(&path, "nmax = 14\ng = 2.5\n# comment line\n").unwrap();
    let path = path.to_str().unwrap();

    let from_file = run(&["spectrum", "--config", path, "--k", "1"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let text = stdout(&from_file);
    assert!(text.contains("# nmax 14"), "{text}");
    assert!(text.contains("# g 2.50000000000e0"), "{text}");

    let overridden = run(&["spectrum", "--config", path, "--k", "1", "--nmax", "16"]);
    assert!(stdout(&overridden).contains("# nmax 16"));

    std::fs::write(dir.join("bad.cfg"), "unknown-key = 1\n").unwrap();
    let rejected = run(&["spectrum", "--config", dir.join("bad.cfg").to_str().unwrap()]);
    assert_eq!(rejected.status.code(), Some(2));

    let switches = dir.join("switches.cfg");
    std::fs::write(&switches, "nmax = 8\nvectors = true\nresolution = 3\n").unwrap();
    let switches = switches.to_str().unwrap();
    let with_vectors = run(&["spectrum", "--config", switches, "--k", "1"]);
    assert!(with_vectors.status.success(), "{}", stderr(&with_vectors));
    assert!(stdout(&with_vectors).contains("# eigenvectors"));
    let coarse = run(&["wavefunction", "--config", switches, "--c", "0.5"]);
    assert!(coarse.status.success(), "{}", stderr(&coarse));
    assert!(stdout(&coarse).contains("# resolution 3"));
    assert_eq!(data_rows(&stdout(&coarse)).len(), 9);
}

#[test]
fn json_documents_embed_the_config() {
    let out = run(&["spectrum", "--nmax", "12", "--k", "1", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("{\"command\":\"spectrum\",\"config\":{"));
    assert!(text.contains("\"energies\":["));
    assert!(text.trim_end().ends_with('}'));
    let opens = text.matches('{').count();
    let closes = text.matches('}').count();
    assert_eq!(opens, closes);
}

#[test]
fn wavefunction_grid_has_full_resolution_and_weights() {
    let out = run(&[
        "wavefunction", "--g", "0", "--c", "0.5", "--nmax", "8", "--resolution", "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# p_in"));
    assert!(text.contains("# p_out"));
    assert!(text.contains("# energy"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 25);
}

#[test]
fn verify_subset_passes_and_prints_summaries() {
    let out = run(&["verify", "--only", "1", "--only", "5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("criterion 1 (Bethe reference energies): PASS"));
    assert!(text.contains("criterion 5 (matrix-element oracle): PASS"));
    let rejected = run(&["verify", "--only", "12"]);
    assert_eq!(rejected.status.code(), Some(2));
}

#[test]
fn output_file_flag_writes_the_same_bytes_as_stdout() {
    let dir = std::env::temp_dir().join("deltabox-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.csv");
    let to_stdout = run(&["dark"]);
    let to_file = run(&["dark", "--out", path.to_str().unwrap()]);
    assert!(to_file.status.success(), "{}", stderr(&to_file));
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}
