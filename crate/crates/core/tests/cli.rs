use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use smlc::cli::{ModelFile, SearchFile};
use smlc::harness::EvalReport;

const IRIS_LIKE: &str = "\
sepal,petal,colour,species
5.1,1.4,red,setosa
4.9,1.3,red,setosa
4.7,1.5,blue,setosa
5.0,1.4,red,setosa
6.4,4.5,blue,versicolor
6.9,4.9,green,versicolor
5.5,4.0,blue,versicolor
6.5,4.6,green,versicolor
6.3,6.0,green,virginica
5.8,5.1,green,virginica
7.1,5.9,blue,virginica
6.3,5.6,green,virginica
";

fn smlc(args: &[&str], files: &[&Path]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_smlc"));
    cmd.args(args);
    for f in files {
        cmd.arg(f);
    }
    cmd.output().unwrap()
}

fn fixture(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn missing_input_file_is_an_input_error() {
    let out = smlc(
        &[
            "eval",
            "--class-col",
            "y",
            "--classifiers",
            "nb",
            "--out",
            "/dev/null",
            "--data",
            "/nonexistent/data.csv",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ragged_row_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = fixture(dir.path(), "bad.csv", "a,b,y\n1,2,x\n3,z\n");
    let out = smlc(
        &[
            "eval",
            "--class-col",
            "y",
            "--classifiers",
            "nb",
            "--out",
            "/dev/null",
            "--data",
        ],
        &[&data],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn unknown_class_column_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = fixture(dir.path(), "d.csv", IRIS_LIKE);
    let out = smlc(
        &["search", "--class-col", "label", "--out", "/dev/null", "--data"],
        &[&data],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_configuration_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = fixture(dir.path(), "d.csv", IRIS_LIKE);
    let out_path = dir.path().join("r.json");
    let base = ["eval", "--class-col", "species", "--trials", "2"];
    for extra in [
        &["--train-frac", "1.5"][..],
        &["--prior", "uniform:-1"],
        &["--prior", "dirichlet:1"],
        &["--classifiers", "nb,tan"],
        &["--classifiers", "om9"],
        &["--patience", "0"],
        &["--bins", "0"],
    ] {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        args.extend(["--out", out_path.to_str().unwrap(), "--data", data.to_str().unwrap()]);
        let out = smlc(&args, &[]);
        assert_eq!(
            out.status.code(),
            Some(3),
            "{extra:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn unknown_flag_is_a_config_error_and_help_succeeds() {
    assert_eq!(smlc(&["eval", "--frobnicate"], &[]).status.code(), Some(3));
    assert_eq!(smlc(&["--help"], &[]).status.code(), Some(0));
}

#[test]
fn eval_report_has_every_classifier_and_gains() {
    let dir = tempfile::tempdir().unwrap();
    let data = fixture(dir.path(), "d.csv", IRIS_LIKE);
    let report = dir.path().join("r.json");
    let out = smlc(
        &[
            "eval",
            "--class-col",
            "species",
            "--trials",
            "4",
            "--train-frac",
            "0.5",
            "--restarts",
            "2",
            "--classifiers",
            "nb,om1,om2,pm,anb",
            "--data",
        ],
        &[&data, Path::new("--out"), &report],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: EvalReport = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(r.trials.len(), 4);
    assert_eq!(r.config.n_rows, 12);
    for name in ["nb", "om1", "om2", "pm", "anb"] {
        assert!(r.mean(name).is_some(), "{name}");
    }
    let gains = r.gains.as_ref().unwrap();
    assert_eq!(gains.len(), 5);
    assert_eq!(gains[0].classifier, "nb");
    assert_eq!(gains[0].zero_one.difference, 0.0);
    for t in &r.trials {
        assert_eq!(t.n_train, 6);
        assert_eq!(t.results.len(), 5);
    }
}

#[test]
fn eval_without_global_discretization_runs() {
    let dir = tempfile::tempdir().unwrap();
    let data = fixture(dir.path(), "d.csv", IRIS_LIKE);
    let report = dir.path().join("r.json");
    let out = smlc(
        &[
            "eval",
            "--class-col",
            "species",
            "--trials",
            "3",
            "--global-discretize",
            "false",
            "--classifiers",
            "nb,pm",
            "--data",
        ],
        &[&data, Path::new("--out"), &report],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: EvalReport = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(r.config.global_discretize, Some(false));
}

#[test]
fn search_writes_named_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let data = fixture(dir.path(), "d.csv", IRIS_LIKE);
    let path = dir.path().join("s.json");
    let out = smlc(
        &["search", "--class-col", "species", "--prior", "bdeu:2", "--data"],
        &[&data, Path::new("--out"), &path],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s: SearchFile = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let mut names: Vec<String> = s.named_blocks.concat();
    names.sort();
    assert_eq!(names, ["colour", "petal", "sepal"]);
    assert_eq!(s.named_blocks.len(), s.result.best_partition.n_blocks());
}

#[test]
fn train_then_predict_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = fixture(dir.path(), "d.csv", IRIS_LIKE);
    let queries = fixture(
        dir.path(),
        "q.csv",
        "colour,petal,sepal\nred,1.4,5.0\ngreen,5.8,6.5\npurple,4.4,6.1\n",
    );
    for classifier in ["nb", "om1", "om2", "pm", "anb"] {
        let model = dir.path().join(format!("{classifier}.json"));
        let preds = dir.path().join(format!("{classifier}.csv"));
        let out = smlc(
            &["train", "--class-col", "species", "--classifier", classifier, "--data"],
            &[&data, Path::new("--out"), &model],
        );
        assert!(
            out.status.success(),
            "{classifier}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let file: ModelFile = serde_json::from_slice(&std::fs::read(&model).unwrap()).unwrap();
        file.validate().unwrap();

        let out = smlc(
            &["predict", "--model"],
            &[&model, Path::new("--input"), &queries, Path::new("--out"), &preds],
        );
        assert!(
            out.status.success(),
            "{classifier}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let mut rdr = csv::Reader::from_path(&preds).unwrap();
        let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(header, ["p_setosa", "p_versicolor", "p_virginica", "predicted"]);
        let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            let p: Vec<f64> = (0..3).map(|i| row[i].parse().unwrap()).collect();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(&rows[0][3], "setosa", "{classifier}");
        assert_eq!(&rows[1][3], "virginica", "{classifier}");
    }
}

#[test]
fn predict_rejects_missing_predictor_column() {
    let dir = tempfile::tempdir().unwrap();
    let data = fixture(dir.path(), "d.csv", IRIS_LIKE);
    let queries = fixture(dir.path(), "q.csv", "sepal,petal\n5.0,1.4\n");
    let model = dir.path().join("m.json");
    assert!(smlc(
        &["train", "--class-col", "species", "--classifier", "nb", "--data"],
        &[&data, Path::new("--out"), &model]
    )
    .status
    .success());
    let out = smlc(
        &["predict", "--model"],
        &[
            &model,
            Path::new("--input"),
            &queries,
            Path::new("--out"),
            &dir.path().join("p.csv"),
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}
