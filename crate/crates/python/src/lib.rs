//! Python bindings.
//!
//! ```python
//! import groundness_py as g
//! prog = g.Program("app([],Y,Y).\napp([X|Xs],Y,[X|Zs]) :- app(Xs,Y,Zs).")
//! a = prog.analyze(entries=["app(g,g,any)"])
//! a.answer_patterns   # ['app(g, g, g).']
//! ```

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use groundness::bool_core::{join_positional, VarStore};
use groundness::engine::{self, Options, Strategy, Switches};
use groundness::frontend::{load, parse_entry, AbstractOptions, EntrySpec, Loaded};
use groundness::oracle::reference::reference_analysis;
use groundness::oracle::{formula_of, models_over, ModelSet};
use groundness::Domain;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

/// A parsed and abstracted program.
#[pyclass(module = "groundness_py", frozen)]
struct Program {
    loaded: Loaded,
    name: String,
}

impl Program {
    fn entries(&self, entries: Option<Vec<String>>) -> PyResult<Vec<EntrySpec>> {
        let Some(es) = entries else {
            return Ok(self.loaded.entries.clone());
        };
        let mut out = Vec::new();
        for e in es {
            let spec = parse_entry(&e).map_err(value_err)?;
            if self.loaded.program.find(&spec.pred, spec.modes.len()).is_none() {
                return Err(PyKeyError::new_err(format!("unknown entry predicate {spec}")));
            }
            out.push(spec);
        }
        Ok(out)
    }
}

#[pymethods]
impl Program {
    #[new]
    #[pyo3(signature = (source, name = "program", assume_clpr_ground = false))]
    fn new(source: &str, name: &str, assume_clpr_ground: bool) -> PyResult<Self> {
        let loaded = load(source, AbstractOptions { assume_clpr_ground }).map_err(value_err)?;
        Ok(Program { loaded, name: name.to_string() })
    }

    /// Reads a program from a file.
    #[staticmethod]
    #[pyo3(signature = (path, assume_clpr_ground = false))]
    fn from_file(path: &str, assume_clpr_ground: bool) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| pyo3::exceptions::PyOSError::new_err(e.to_string()))?;
        let name = std::path::Path::new(path).file_name().map_or(path.to_string(), |s| s.to_string_lossy().into_owned());
        Self::new(&text, &name, assume_clpr_ground)
    }

    /// Source predicates as "name/arity".
    #[getter]
    fn predicates(&self) -> Vec<String> {
        self.loaded.program.preds.iter().filter(|p| !p.aux).map(|p| p.key()).collect()
    }

    #[getter]
    fn entries_declared(&self) -> Vec<String> {
        self.loaded.entries.iter().map(|e| e.to_string()).collect()
    }

    /// Number of abstract clauses.
    #[getter]
    fn size(&self) -> usize {
        self.loaded.program.size()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.loaded.program.warnings.clone()
    }

    #[pyo3(signature = (entries = None, domain = "def-gep", strategy = "ord", switches = "egpr"))]
    fn analyze(&self, entries: Option<Vec<String>>, domain: &str, strategy: &str, switches: &str) -> PyResult<Analysis> {
        let entries = self.entries(entries)?;
        let options = Options {
            domain: domain.parse::<Domain>().map_err(value_err)?,
            strategy: strategy.parse::<Strategy>().map_err(value_err)?,
            switches: switches.parse::<Switches>().map_err(value_err)?,
        };
        let inner = engine::analyze(&self.loaded.program, &entries, options).map_err(value_err)?;
        let report = inner.report(&self.name, &self.loaded.program, &entries);
        Ok(Analysis { inner, report })
    }

    /// Ground argument count from the truth-table reference analyzer.
    #[pyo3(signature = (entries = None, domain = "def-gep"))]
    fn reference_ground_args(&self, entries: Option<Vec<String>>, domain: &str) -> PyResult<usize> {
        let entries = self.entries(entries)?;
        let domain = domain.parse::<Domain>().map_err(value_err)?;
        let t = reference_analysis(&self.loaded.program, &entries, domain).map_err(value_err)?;
        Ok(t.ground_args(&self.loaded.program))
    }

    fn __repr__(&self) -> String {
        format!("Program({:?}, {} clauses)", self.name, self.size())
    }
}

/// Fixpoint tables and tallies of one run.
#[pyclass(module = "groundness_py", frozen)]
struct Analysis {
    inner: engine::Analysis,
    report: engine::Report,
}

#[pymethods]
impl Analysis {
    #[getter]
    fn domain(&self) -> String {
        self.report.domain.to_string()
    }

    #[getter]
    fn strategy(&self) -> String {
        self.report.strategy.to_string()
    }

    #[getter]
    fn switches(&self) -> String {
        self.report.switches.to_string()
    }

    #[getter]
    fn call_patterns(&self) -> Vec<String> {
        self.report.call_patterns.clone()
    }

    #[getter]
    fn answer_patterns(&self) -> Vec<String> {
        self.report.answer_patterns.clone()
    }

    #[getter]
    fn ground_args(&self) -> usize {
        self.report.ground_args
    }

    #[getter]
    fn total_updates(&self) -> u64 {
        self.report.updates.total
    }

    #[getter]
    fn chain_histogram(&self) -> Vec<u64> {
        self.report.chain_histogram.clone()
    }

    /// Counters keyed as in the JSON report.
    fn counters<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let text = serde_json::to_string(&self.report.counters).map_err(value_err)?;
        Ok(json_to_py(py, &text)?.cast_into::<PyDict>()?)
    }

    /// The full report as a dict.
    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.to_json()?)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.report).map_err(value_err)
    }

    /// Same reached keys with equivalent patterns.
    fn equivalent(&self, other: &Analysis) -> bool {
        self.inner.equivalent(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Analysis({} {} {}, {} updates)",
            self.report.domain, self.report.strategy, self.report.switches, self.report.updates.total
        )
    }
}

fn model_set(width: usize, models: Vec<u32>) -> PyResult<ModelSet> {
    if width > 8 || models.iter().any(|&m| m >> width != 0) {
        return Err(PyValueError::new_err("models must be bit masks over at most 8 variables"));
    }
    let m = ModelSet::new(width, models);
    if !m.is_definite() {
        return Err(PyValueError::new_err("not a definite function"));
    }
    Ok(m)
}

/// Join of two definite functions given as model bit masks, computed on
/// clauses by renaming, meet and projection.
#[pyfunction]
fn def_join(width: usize, a: Vec<u32>, b: Vec<u32>) -> PyResult<Vec<u32>> {
    let (ma, mb) = (model_set(width, a)?, model_set(width, b)?);
    let mut s = VarStore::new();
    let (va, vb, ys) = (s.fresh_vars(width), s.fresh_vars(width), s.fresh_vars(width));
    let (fa, fb) = (formula_of(&mut s, &ma, &va), formula_of(&mut s, &mb, &vb));
    let j = join_positional(&mut s, &fa, &va, &fb, &vb, &ys);
    Ok(models_over(&s, &j, &ys).map_err(value_err)?.models().to_vec())
}

#[pyfunction]
fn strategies() -> Vec<&'static str> {
    Strategy::ALL.iter().map(|s| s.name()).collect()
}

/// The ten standard switch settings.
#[pyfunction]
fn switch_sweep() -> Vec<&'static str> {
    Switches::SWEEP.to_vec()
}

#[pymodule]
fn groundness_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Program>()?;
    m.add_class::<Analysis>()?;
    m.add_function(wrap_pyfunction!(def_join, m)?)?;
    m.add_function(wrap_pyfunction!(strategies, m)?)?;
    m.add_function(wrap_pyfunction!(switch_sweep, m)?)?;
    m.add("DOMAINS", vec!["def-gep", "epos"])?;
    Ok(())
}
