//! Python bindings: profiles travel as labelled objects, outcomes as labels
//! (or `None` when there is no consensus).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use consensus_md_core::analysis::{classify_all, control_search_many, OrderSource};
use consensus_md_core::consensus::{parse_notions, ConsensusNotion, ConsensusOutcome, OutcomeVector};
use consensus_md_core::dynamics::{md_run, UpdateOrder};
use consensus_md_core::gen::{counterexample_catalog, find_fixture};
use consensus_md_core::prefcore::{parse_profile, render_profile, AltSet, LabeledProfile, Profile as CoreProfile};
use consensus_md_core::Error;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A profile of strict partial orders with alternative labels.
#[pyclass(name = "Profile", module = "consensus_md", frozen)]
pub struct PyProfile {
    inner: LabeledProfile,
}

impl PyProfile {
    fn label(&self, o: ConsensusOutcome) -> Option<String> {
        o.winner().map(|a| self.inner.label(a).to_string())
    }

    fn order(&self, order: Option<&str>) -> PyResult<UpdateOrder> {
        let prefix = UpdateOrder::parse_pairs(order.unwrap_or(""), &self.inner.labels).map_err(err)?;
        UpdateOrder::complete(self.inner.profile.m(), &prefix).map_err(err)
    }
}

#[pymethods]
impl PyProfile {
    /// `agents` holds one list of `(better, worse)` label pairs per agent.
    #[new]
    #[pyo3(signature = (labels, agents))]
    fn new(labels: Vec<String>, agents: Vec<Vec<(String, String)>>) -> PyResult<Self> {
        let index = |l: &str| {
            labels.iter().position(|x| x == l).ok_or_else(|| PyValueError::new_err(format!("unknown label {l:?}")))
        };
        let pairs = agents
            .iter()
            .map(|a| a.iter().map(|(x, y)| Ok((index(x)?, index(y)?))).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        let profile = CoreProfile::from_pair_lists(labels.len(), &pairs).map_err(err)?;
        Ok(Self { inner: LabeledProfile { labels, profile } })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_profile(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        render_profile(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.profile.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.profile.m()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels.clone()
    }

    /// Every ordered pair each agent holds, after transitive closure.
    fn relations(&self) -> Vec<Vec<(String, String)>> {
        let l = |a| self.inner.label(a).to_string();
        self.inner
            .profile
            .prefs()
            .iter()
            .map(|p| p.relation().pairs().map(|(a, b)| (l(a), l(b))).collect())
            .collect()
    }

    fn is_complete(&self) -> bool {
        self.inner.profile.is_complete()
    }

    /// Outcome of every notion, keyed by its tag.
    fn consensus<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let v = OutcomeVector::of(self.m(), self.inner.profile.prefs());
        let d = PyDict::new(py);
        for notion in ConsensusNotion::ALL {
            d.set_item(notion.tag(), self.label(v.get(notion)))?;
        }
        Ok(d)
    }

    /// Runs the dynamics along `order` (comma-separated pairs such as
    /// "ab,ca"), completed lexicographically.
    #[pyo3(signature = (order=None))]
    fn run_md(&self, order: Option<&str>) -> PyResult<Self> {
        let (fin, _) = md_run(&self.inner.profile, &self.order(order)?).map_err(err)?;
        Ok(Self { inner: LabeledProfile { labels: self.inner.labels.clone(), profile: fin } })
    }

    /// Effect of the dynamics on each notion under `order`.
    #[pyo3(signature = (order=None))]
    fn classify<'py>(&self, py: Python<'py>, order: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for r in classify_all(&self.inner.profile, &self.order(order)?).map_err(err)? {
            let e = PyDict::new(py);
            e.set_item("initial", self.label(r.initial))?;
            e.set_item("final", self.label(r.final_outcome))?;
            e.set_item("effect", r.effect.label())?;
            d.set_item(r.notion.tag(), e)?;
        }
        Ok(d)
    }

    /// Outcomes reachable by choosing the update order, over every order or
    /// `sample` random ones.
    #[pyo3(signature = (notions="all", sample=None, seed=0, targets=None))]
    fn control_search<'py>(
        &self,
        py: Python<'py>,
        notions: &str,
        sample: Option<u64>,
        seed: u64,
        targets: Option<Vec<String>>,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let notions = parse_notions(notions).map_err(err)?;
        let source = match sample {
            Some(count) => OrderSource::Sampled { count, seed },
            None => OrderSource::Exhaustive,
        };
        let targets = targets
            .map(|t| t.iter().map(|l| self.inner.lookup(l)).collect::<Result<AltSet, _>>())
            .transpose()
            .map_err(err)?;
        let profile = &self.inner.profile;
        let reports = py
            .detach(|| control_search_many(&notions, profile, source, targets))
            .map_err(err)?;
        reports
            .iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("notion", r.notion.tag())?;
                d.set_item("initial", self.label(r.initial))?;
                d.set_item("orders_examined", r.orders_examined)?;
                d.set_item("exhaustive", r.exhaustive)?;
                let outcomes = PyDict::new(py);
                for (o, c) in r.outcome_multiset() {
                    outcomes.set_item(self.label(o), c)?;
                }
                d.set_item("outcomes", outcomes)?;
                d.set_item("can_preserve_existence", r.can_preserve_existence())?;
                d.set_item("can_preserve_identity", r.can_preserve_identity())?;
                d.set_item("can_lose", r.can_lose())?;
                d.set_item("can_lose_identity", r.can_lose_identity())?;
                d.set_item("can_generate", r.can_generate())?;
                d.set_item("can_prevent_generation", r.can_prevent_generation())?;
                d.set_item("negative_control_available", r.negative_control_available())?;
                let choosable: Vec<String> = r.choosable().iter().map(|a| self.inner.label(a).to_string()).collect();
                d.set_item("choosable", choosable)?;
                Ok(d)
            })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.n()
    }

    fn __repr__(&self) -> String {
        format!("Profile(n={}, m={})", self.n(), self.m())
    }
}

/// Names of the built-in counterexample profiles.
#[pyfunction]
fn fixture_names() -> Vec<String> {
    counterexample_catalog().into_iter().map(|f| f.name.to_string()).collect()
}

#[pyfunction]
fn fixture(name: &str) -> PyResult<PyProfile> {
    Ok(PyProfile { inner: find_fixture(name).map_err(err)?.labeled_profile() })
}

/// Checks every recorded fact of every fixture; returns the failures.
#[pyfunction]
#[pyo3(signature = (seed=0))]
fn verify_fixtures(seed: u64) -> PyResult<Vec<String>> {
    let mut failed = Vec::new();
    for f in counterexample_catalog() {
        for c in f.verify(seed).map_err(err)? {
            if !c.passed {
                failed.push(format!("{}: {}", c.fixture, c.fact));
            }
        }
    }
    Ok(failed)
}

#[pymodule]
fn consensus_md(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(fixture_names, m)?)?;
    m.add_function(wrap_pyfunction!(fixture, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fixtures, m)?)?;
    m.add("NOTIONS", ConsensusNotion::ALL.iter().map(|n| n.tag()).collect::<Vec<_>>())?;
    Ok(())
}
