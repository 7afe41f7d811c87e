//! C ABI over the `smlc` toolkit.
//!
//! Datasets and models are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`SmlcStatus`]; on failure the
//! calling thread's message is available from [`smlc_last_error_message`].
//! Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use smlc::classifiers::Predictor;
use smlc::cli::{CliError, ModelFile, MODEL_FORMAT_VERSION};
use smlc::data::{fit_discretization, load_csv, ColumnEncoder, Encoder};
use smlc::harness::{ClassifierKind, ClassifierSpec};
use smlc::scoring::{log_sml_counts, ConfigSpace, ScoringError};
use smlc::{Dataset, PriorSpec, Schema, SearchConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmlcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed or unreadable data, model JSON, or query.
    InputError = 3,
    /// Rejected classifier, prior, or search settings.
    ConfigError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmlcPriorMode {
    /// Every cell gets the same pseudo-count.
    UniformCell = 0,
    /// A total prior strength spread evenly over all cells.
    EquivalentSampleSize = 1,
}

/// Settings for partition search; used by `pm` and `anb` only.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmlcSearchOptions {
    pub seed: u64,
    pub restarts: u32,
    pub patience: u32,
    /// 0 means unbounded.
    pub max_block_size: u32,
}

/// An encoded dataset and the encoder that produced it.
pub struct SmlcDataset {
    encoder: Encoder,
    data: Dataset,
}

/// A trained classifier together with its schema and encoder.
pub struct SmlcModel {
    file: ModelFile,
}

struct Failure(SmlcStatus, String);

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e {
            CliError::Input(_) => SmlcStatus::InputError,
            CliError::Config(_) => SmlcStatus::ConfigError,
        };
        Failure(status, e.to_string())
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure(SmlcStatus::InputError, msg.into())
}

fn config(msg: impl Into<String>) -> Failure {
    Failure(SmlcStatus::ConfigError, msg.into())
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, converting failures and panics into a status plus message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SmlcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SmlcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SmlcStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(SmlcStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be null or a NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    non_null(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SmlcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` must be null or valid for `len` reads.
unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, what)?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// Message for the last failed call on this thread, or `""`. The pointer
/// stays valid until the next `smlc_*` call on the same thread.
#[no_mangle]
pub extern "C" fn smlc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn smlc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn smlc_search_options_default() -> SmlcSearchOptions {
    let d = SearchConfig::default();
    SmlcSearchOptions {
        seed: d.seed,
        restarts: d.restarts as u32,
        patience: d.patience as u32,
        max_block_size: 0,
    }
}

/// Loads a CSV file with a header row. Numeric columns are discretized into
/// `bins` equal-frequency bins over all rows.
///
/// # Safety
/// `path` and `class_column` must be NUL-terminated strings; `out` must be
/// valid for one write.
#[no_mangle]
pub unsafe extern "C" fn smlc_dataset_from_csv(
    path: *const c_char,
    class_column: *const c_char,
    bins: u32,
    out: *mut *mut SmlcDataset,
) -> SmlcStatus {
    guard(|| {
        non_null(out, "out")?;
        let path = str_arg(path, "path")?;
        let class = str_arg(class_column, "class_column")?;
        if bins == 0 {
            return Err(config("bins must be at least 1"));
        }
        let file = File::open(path).map_err(|e| input(format!("{path}: {e}")))?;
        let table = load_csv(file, class).map_err(CliError::from)?;
        let encoder = Encoder::fit(&table, &fit_discretization(&table, bins as usize, None)).map_err(CliError::from)?;
        let data = encoder.encode(&table).map_err(CliError::from)?;
        *out = Box::into_raw(Box::new(SmlcDataset { encoder, data }));
        Ok(())
    })
}

fn code_encoder(schema: &Schema) -> Encoder {
    let vocab = |arity: u32| (0..arity).map(|v| v.to_string()).collect();
    Encoder {
        predictors: schema
            .predictor_names
            .iter()
            .zip(&schema.predictor_arities)
            .map(|(name, &a)| ColumnEncoder::Categorical {
                name: name.clone(),
                vocab: vocab(a),
            })
            .collect(),
        class_name: schema.class_name.clone(),
        class_values: vocab(schema.class_arity),
    }
}

/// Builds a dataset from pre-encoded values. `rows` is row-major,
/// `n_rows × n_predictors`; predictor `i` takes values `0..arities[i]` and
/// labels take `0..class_arity`. Columns are named `X1..Xn` and `Y`.
///
/// # Safety
/// `rows` must be valid for `n_rows * n_predictors` reads, `arities` for
/// `n_predictors`, `labels` for `n_rows`; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn smlc_dataset_from_codes(
    rows: *const u32,
    n_rows: usize,
    n_predictors: usize,
    arities: *const u32,
    labels: *const u32,
    class_arity: u32,
    out: *mut *mut SmlcDataset,
) -> SmlcStatus {
    guard(|| {
        non_null(out, "out")?;
        let cells = n_rows
            .checked_mul(n_predictors)
            .ok_or_else(|| input("n_rows * n_predictors overflows"))?;
        let flat = slice_arg(rows, cells, "rows")?;
        let arities = slice_arg(arities, n_predictors, "arities")?;
        let labels = slice_arg(labels, n_rows, "labels")?;
        let schema = Schema::anonymous(arities.to_vec(), class_arity).map_err(CliError::from)?;
        let rows = if n_predictors == 0 {
            vec![Vec::new(); n_rows]
        } else {
            flat.chunks(n_predictors).map(<[u32]>::to_vec).collect()
        };
        let encoder = code_encoder(&schema);
        let data = Dataset::new(schema, rows, labels.to_vec()).map_err(CliError::from)?;
        *out = Box::into_raw(Box::new(SmlcDataset { encoder, data }));
        Ok(())
    })
}

/// # Safety
/// `dataset` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn smlc_dataset_free(dataset: *mut SmlcDataset) {
    if !dataset.is_null() {
        drop(Box::from_raw(dataset));
    }
}

/// # Safety
/// `dataset` must be null or a live handle. Null gives 0.
#[no_mangle]
pub unsafe extern "C" fn smlc_dataset_n_rows(dataset: *const SmlcDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.data.len())
}

/// # Safety
/// `dataset` must be null or a live handle. Null gives 0.
#[no_mangle]
pub unsafe extern "C" fn smlc_dataset_n_predictors(dataset: *const SmlcDataset) -> usize {
    dataset.as_ref().map_or(0, |d| d.data.n_predictors())
}

/// # Safety
/// `dataset` must be null or a live handle. Null gives 0.
#[no_mangle]
pub unsafe extern "C" fn smlc_dataset_class_arity(dataset: *const SmlcDataset) -> u32 {
    dataset.as_ref().map_or(0, |d| d.data.class_arity())
}

/// Copies the encoded predictors of row `index` into `out`, which holds
/// `out_len` values.
///
/// # Safety
/// `dataset` must be a live handle; `out` valid for `out_len` writes and
/// `label` for one write (or null).
#[no_mangle]
pub unsafe extern "C" fn smlc_dataset_row(
    dataset: *const SmlcDataset,
    index: usize,
    out: *mut u32,
    out_len: usize,
    label: *mut u32,
) -> SmlcStatus {
    guard(|| {
        non_null(dataset, "dataset")?;
        let d = &(*dataset).data;
        let row = d
            .rows()
            .get(index)
            .ok_or_else(|| input(format!("row {index} out of range ({} rows)", d.len())))?;
        if out_len < row.len() {
            return Err(Failure(
                SmlcStatus::BufferTooSmall,
                format!("need {} values", row.len()),
            ));
        }
        if !row.is_empty() {
            non_null(out, "out")?;
            ptr::copy_nonoverlapping(row.as_ptr(), out, row.len());
        }
        if !label.is_null() {
            *label = d.labels()[index];
        }
        Ok(())
    })
}

fn search_config(opts: &SmlcSearchOptions) -> SearchConfig {
    SearchConfig {
        seed: opts.seed,
        restarts: opts.restarts as usize,
        patience: opts.patience as usize,
        max_block_size: (opts.max_block_size > 0).then_some(opts.max_block_size as usize),
        ..SearchConfig::default()
    }
}

/// Trains `classifier` (`nb`, `om<i>`, `pm`, or `anb`) on every row of
/// `dataset`. `prior` is `uniform:<alpha>` or `bdeu:<ess>`; null means
/// `uniform:1`. Null `search` uses [`smlc_search_options_default`].
///
/// # Safety
/// `dataset` must be a live handle; `classifier` and non-null `prior` must
/// be NUL-terminated; `search` null or valid; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn smlc_model_train(
    dataset: *const SmlcDataset,
    classifier: *const c_char,
    prior: *const c_char,
    search: *const SmlcSearchOptions,
    out: *mut *mut SmlcModel,
) -> SmlcStatus {
    guard(|| {
        non_null(dataset, "dataset")?;
        non_null(out, "out")?;
        let d = &*dataset;
        let kind: ClassifierKind = str_arg(classifier, "classifier")?
            .parse()
            .map_err(|e| config(format!("{e}")))?;
        let prior: PriorSpec = if prior.is_null() {
            PriorSpec::default()
        } else {
            str_arg(prior, "prior")?.parse().map_err(|e| config(format!("{e}")))?
        };
        let opts = search
            .as_ref()
            .copied()
            .unwrap_or_else(|| smlc_search_options_default());
        let spec = ClassifierSpec::new(kind, prior, Some(search_config(&opts)));
        spec.validate(d.data.n_predictors()).map_err(CliError::from)?;
        let (model, search) = spec.train(&d.data, None).map_err(CliError::from)?;
        let file = ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            schema: d.encoder.schema(),
            encoder: d.encoder.clone(),
            classifier: spec,
            search,
            model,
        };
        *out = Box::into_raw(Box::new(SmlcModel { file }));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn smlc_model_free(model: *mut SmlcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be null or a live handle. Null gives 0.
#[no_mangle]
pub unsafe extern "C" fn smlc_model_class_arity(model: *const SmlcModel) -> u32 {
    model.as_ref().map_or(0, |m| m.file.model.class_arity())
}

/// # Safety
/// `model` must be null or a live handle. Null gives 0.
#[no_mangle]
pub unsafe extern "C" fn smlc_model_n_predictors(model: *const SmlcModel) -> usize {
    model.as_ref().map_or(0, |m| m.file.schema.n_predictors())
}

/// Writes the class distribution for the encoded query `x` (`n` values)
/// into `out`, which holds `out_len` doubles. Values outside a predictor's
/// training range count as unseen.
///
/// # Safety
/// `model` must be a live handle; `x` valid for `n` reads; `out` for
/// `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn smlc_model_predict(
    model: *const SmlcModel,
    x: *const u32,
    n: usize,
    out: *mut f64,
    out_len: usize,
) -> SmlcStatus {
    guard(|| {
        non_null(model, "model")?;
        let file = &(*model).file;
        let want = file.schema.n_predictors();
        if n != want {
            return Err(input(format!("query has {n} values, model expects {want}")));
        }
        let x = slice_arg(x, n, "x")?;
        let r = file.model.class_arity() as usize;
        if out_len < r {
            return Err(Failure(SmlcStatus::BufferTooSmall, format!("need {r} doubles")));
        }
        non_null(out, "out")?;
        let p = file.model.predict(x);
        ptr::copy_nonoverlapping(p.probs().as_ptr(), out, r);
        Ok(())
    })
}

/// Serializes the model in the same JSON format the `smlc` command line
/// reads. Release the string with [`smlc_string_free`].
///
/// # Safety
/// `model` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn smlc_model_to_json(model: *const SmlcModel, out: *mut *mut c_char) -> SmlcStatus {
    guard(|| {
        non_null(model, "model")?;
        non_null(out, "out")?;
        let json = serde_json::to_string(&(*model).file).map_err(|e| input(e.to_string()))?;
        *out = CString::new(json).map_err(|e| input(e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Loads a model from JSON written by [`smlc_model_to_json`] or by
/// `smlc train`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn smlc_model_from_json(json: *const c_char, out: *mut *mut SmlcModel) -> SmlcStatus {
    guard(|| {
        non_null(out, "out")?;
        let file: ModelFile =
            serde_json::from_str(str_arg(json, "json")?).map_err(|e| input(format!("model JSON: {e}")))?;
        file.validate()?;
        *out = Box::into_raw(Box::new(SmlcModel { file }));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn smlc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Log supervised marginal likelihood of a count table. `counts` is
/// row-major `n_configs × class_arity`, one row per observed predictor
/// configuration. `arities` (`n_arities` values) describe the full
/// configuration space, which sets the per-cell prior under
/// `EquivalentSampleSize`. `prior_mode` is an [`SmlcPriorMode`] value.
///
/// # Safety
/// `counts` must be valid for `n_configs * class_arity` reads, `arities`
/// for `n_arities`, and `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn smlc_log_sml(
    counts: *const u64,
    n_configs: usize,
    class_arity: u32,
    arities: *const u32,
    n_arities: usize,
    prior_mode: u32,
    prior_param: f64,
    out: *mut f64,
) -> SmlcStatus {
    guard(|| {
        non_null(out, "out")?;
        if class_arity == 0 {
            return Err(input("class_arity must be at least 1"));
        }
        let len = n_configs
            .checked_mul(class_arity as usize)
            .ok_or_else(|| input("table size overflows"))?;
        let counts = slice_arg(counts, len, "counts")?;
        let arities = slice_arg(arities, n_arities, "arities")?;
        let space = ConfigSpace::of(arities);
        if space.size().is_some_and(|q| (n_configs as u64) > q) {
            return Err(input(format!("{n_configs} configurations exceed the space size")));
        }
        let prior = match prior_mode {
            m if m == SmlcPriorMode::UniformCell as u32 => PriorSpec::UniformCell { alpha: prior_param },
            m if m == SmlcPriorMode::EquivalentSampleSize as u32 => {
                PriorSpec::EquivalentSampleSize { ess: prior_param }
            }
            m => return Err(config(format!("unknown prior mode {m}"))),
        };
        let value =
            log_sml_counts(counts.chunks(class_arity as usize), &space, class_arity, &prior).map_err(|e| match e {
                ScoringError::InvalidTable(_) => input(e.to_string()),
                _ => config(e.to_string()),
            })?;
        *out = value;
        Ok(())
    })
}
