use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use poisson_koszul::arith::{Poly, WeightSystem};
use poisson_koszul::cli::{self, Command, Settings};
use poisson_koszul::dgalgebra::{check_differential_squares_to_zero, koszul_resolution, KoszulData};
use poisson_koszul::homology::{canonical_homology_dims, milnor_algebra, HomologyError};
use poisson_koszul::multivec::{index_tuples, Multivector};
use poisson_koszul::poisson::{self as engine, PTensor, PoissonError};
use poisson_koszul::schouten::{is_homotopy_poisson, HomotopyPoisson};

create_exception!(poisson_koszul, ObstructedError, PyException);

fn input_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn poisson_err(e: PoissonError) -> PyErr {
    if e.is_obstruction() {
        ObstructedError::new_err(e.to_string())
    } else {
        input_err(e)
    }
}

fn homology_err(e: HomologyError) -> PyErr {
    match e {
        HomologyError::InfiniteDimensional { .. } | HomologyError::BracketDoesNotDescend { .. } => {
            ObstructedError::new_err(e.to_string())
        }
        e => input_err(e),
    }
}

/// Koszul resolution of a complete intersection.
#[pyclass(name = "Algebra", module = "poisson_koszul", frozen)]
struct PyAlgebra {
    inner: Arc<KoszulData>,
}

#[pymethods]
impl PyAlgebra {
    #[new]
    #[pyo3(signature = (variables, equations, weights=None))]
    fn new(variables: Vec<String>, equations: Vec<String>, weights: Option<Vec<u64>>) -> PyResult<Self> {
        let eqs = equations
            .iter()
            .map(|s| Poly::parse(s, &variables))
            .collect::<Result<Vec<_>, _>>()
            .map_err(input_err)?;
        let w = weights.map(WeightSystem::new).transpose().map_err(input_err)?;
        let a = koszul_resolution(eqs, variables, w).map_err(input_err)?;
        Ok(PyAlgebra { inner: Arc::new(a) })
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.vars().to_vec()
    }

    #[getter]
    fn odd_names(&self) -> Vec<String> {
        self.inner.odd_names().to_vec()
    }

    #[getter]
    fn equations(&self) -> Vec<String> {
        self.inner.equations().iter().map(|h| self.inner.format_poly(h)).collect()
    }

    fn differential(&self, element: &str) -> PyResult<String> {
        let e = self.inner.parse(element).map_err(input_err)?;
        Ok(self.inner.format(&self.inner.differential(&e)))
    }

    fn multiply(&self, a: &str, b: &str) -> PyResult<String> {
        let a = self.inner.parse(a).map_err(input_err)?;
        let b = self.inner.parse(b).map_err(input_err)?;
        let p = self.inner.multiply(&a, &b).map_err(input_err)?;
        Ok(self.inner.format(&p))
    }

    fn augment(&self, element: &str) -> PyResult<String> {
        let e = self.inner.parse(element).map_err(input_err)?;
        Ok(self.inner.format_poly(&self.inner.augment(&e)))
    }

    fn homology_rank(&self, k: usize, w: u64) -> PyResult<usize> {
        self.inner.homology_rank(k, w).map_err(input_err)
    }

    fn differential_squares_to_zero(&self, max_weight: u64) -> PyResult<bool> {
        Ok(check_differential_squares_to_zero(&self.inner, max_weight)
            .map_err(input_err)?
            .is_none())
    }

    fn __repr__(&self) -> String {
        format!("Algebra(variables={:?}, equations={:?})", self.variables(), self.equations())
    }
}

/// A homotopy Poisson structure, component by component.
#[pyclass(name = "Structure", module = "poisson_koszul", frozen)]
struct PyStructure {
    inner: HomotopyPoisson,
}

#[pymethods]
impl PyStructure {
    /// `{order: [(args, value), ...]}` over canonical tuples.
    fn components(&self) -> BTreeMap<usize, Vec<(Vec<String>, String)>> {
        let a = self.inner.algebra();
        self.inner
            .components()
            .map(|(s, c)| {
                let rows = c
                    .values()
                    .iter()
                    .map(|(t, v)| (c.format_tuple(t), a.format(v)))
                    .collect();
                (*s, rows)
            })
            .collect()
    }

    /// Nonzero residual values `(order, args, value)` through `max_order`.
    fn residuals(&self, max_order: usize) -> Vec<(usize, Vec<String>, String)> {
        let a = self.inner.algebra();
        is_homotopy_poisson(&self.inner, max_order)
            .entries
            .iter()
            .map(|e| {
                let args = e.tuple.iter().map(|&g| a.generator_name(g).to_string()).collect();
                (e.order, args, a.format(&e.value))
            })
            .collect()
    }

    fn is_homotopy_poisson(&self, max_order: usize) -> bool {
        is_homotopy_poisson(&self.inner, max_order).holds()
    }
}

/// `p` from `{(i, j, k, ..): value}` with 1-based indices.
fn p_tensor(alg: &KoszulData, p: BTreeMap<Vec<usize>, String>) -> PyResult<PTensor> {
    let n = alg.nvars();
    let mut t = PTensor::new(2 + alg.nodd(), n);
    for (idx, v) in p {
        if idx.iter().any(|&i| i == 0 || i > n) {
            return Err(input_err(format!("index out of range in {idx:?}")));
        }
        let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        let value = alg.parse_poly(&v).map_err(input_err)?;
        t.add(&zero_based, value).map_err(poisson_err)?;
    }
    Ok(t)
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

/// Jacobi defect of the bracket at every increasing coordinate triple.
#[pyfunction]
fn jacobi_defects(alg: &PyAlgebra, p: BTreeMap<Vec<usize>, String>) -> PyResult<BTreeMap<Vec<usize>, String>> {
    let a = &alg.inner;
    let t = p_tensor(a, p)?;
    let mut out = BTreeMap::new();
    for tr in index_tuples(a.nvars(), 3) {
        let d = engine::jacobi_defect(&t, a.equations(), [tr[0], tr[1], tr[2]]).map_err(poisson_err)?;
        if !d.is_zero() {
            out.insert(one_based(&tr), a.format_poly(&d));
        }
    }
    Ok(out)
}

#[pyfunction]
fn bracket(alg: &PyAlgebra, p: BTreeMap<Vec<usize>, String>, f: &str, g: &str) -> PyResult<String> {
    let a = &alg.inner;
    let t = p_tensor(a, p)?;
    let f = a.parse_poly(f).map_err(input_err)?;
    let g = a.parse_poly(g).map_err(input_err)?;
    let b = engine::bracket_from_p(&t, a.equations(), &f, &g).map_err(poisson_err)?;
    Ok(a.format_poly(&b))
}

#[pyfunction]
#[pyo3(signature = (alg, p, degree=6))]
fn solve_q(alg: &PyAlgebra, p: BTreeMap<Vec<usize>, String>, degree: u32) -> PyResult<BTreeMap<Vec<usize>, String>> {
    let a = &alg.inner;
    let t = p_tensor(a, p)?;
    let q = engine::solve_q(&t, a.equations(), a.weights(), degree).map_err(poisson_err)?;
    Ok(q.values().iter().map(|(i, v)| (one_based(i), a.format_poly(v))).collect())
}

#[pyfunction]
#[pyo3(signature = (alg, p, max_order=4, degree=6))]
fn build_reduced_structure(
    alg: &PyAlgebra,
    p: BTreeMap<Vec<usize>, String>,
    max_order: usize,
    degree: u32,
) -> PyResult<PyStructure> {
    let t = p_tensor(&alg.inner, p)?;
    let pi = engine::build_reduced_structure(&t, alg.inner.clone(), max_order, degree).map_err(poisson_err)?;
    Ok(PyStructure { inner: pi })
}

/// Structure from `{order: [(args, value), ...]}`.
#[pyfunction]
fn structure(alg: &PyAlgebra, components: BTreeMap<usize, Vec<(Vec<String>, String)>>) -> PyResult<PyStructure> {
    let a = &alg.inner;
    let mut pi = HomotopyPoisson::new(a.clone());
    for (s, rows) in components {
        let mut table = Vec::new();
        for (args, value) in rows {
            let tuple = args
                .iter()
                .map(|g| a.generator_index(g).ok_or_else(|| input_err(format!("unknown generator `{g}`"))))
                .collect::<PyResult<Vec<_>>>()?;
            table.push((tuple, a.parse(&value).map_err(input_err)?));
        }
        let m = Multivector::from_values(a.clone(), s, 2, table).map_err(input_err)?;
        pi.insert(m).map_err(input_err)?;
    }
    Ok(PyStructure { inner: pi })
}

/// `(mu, basis)` of the Milnor algebra of `h`.
#[pyfunction]
#[pyo3(signature = (h, variables, weights, ceiling=16))]
fn milnor(h: &str, variables: Vec<String>, weights: Vec<u64>, ceiling: u64) -> PyResult<(usize, Vec<String>)> {
    let hp = Poly::parse(h, &variables).map_err(input_err)?;
    let w = WeightSystem::new(weights).map_err(input_err)?;
    let m = milnor_algebra(&hp, &w, ceiling).map_err(homology_err)?;
    let basis = m
        .basis()
        .into_iter()
        .map(|b| Poly::term(b, num_traits::One::one()).to_string_with(&variables))
        .collect();
    Ok((m.mu(), basis))
}

/// `({(k, w): dim}, {k: total})` for `k = 0..=n`, `w <= w_max`.
#[pyfunction]
#[pyo3(signature = (alg, p, w_max=16))]
fn canonical_homology(
    alg: &PyAlgebra,
    p: BTreeMap<Vec<usize>, String>,
    w_max: u64,
) -> PyResult<(BTreeMap<(usize, u64), usize>, BTreeMap<usize, usize>)> {
    let a = &alg.inner;
    let t = p_tensor(a, p)?;
    let hc = canonical_homology_dims(a, &t, 0..=a.nvars(), w_max).map_err(homology_err)?;
    let rows = hc.rows.iter().map(|&(k, w, d)| ((k, w), d)).collect();
    Ok((rows, hc.totals.into_iter().collect()))
}

/// Runs a command-line command on a problem file given as JSON text;
/// returns `(exit_code, report_json)`.
#[pyfunction]
#[pyo3(signature = (command, problem, order=None, degree=None, weight_ceiling=None))]
fn run(
    command: &str,
    problem: &str,
    order: Option<usize>,
    degree: Option<u32>,
    weight_ceiling: Option<u64>,
) -> PyResult<(i32, String)> {
    let cmd = <Command as clap::ValueEnum>::from_str(command, false).map_err(input_err)?;
    let file = match cli::parse_problem(problem) {
        Ok(f) => f,
        Err(e) => return Err(input_err(e)),
    };
    let st = Settings::resolve(&file.options, order, degree, weight_ceiling);
    let out = cli::execute(cmd, &file, st);
    Ok((out.code, cli::render(&out.report)))
}

#[pymodule]
#[pyo3(name = "poisson_koszul")]
fn poisson_koszul_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyStructure>()?;
    m.add("ObstructedError", m.py().get_type::<ObstructedError>())?;
    m.add_function(wrap_pyfunction!(jacobi_defects, m)?)?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(solve_q, m)?)?;
    m.add_function(wrap_pyfunction!(build_reduced_structure, m)?)?;
    m.add_function(wrap_pyfunction!(structure, m)?)?;
    m.add_function(wrap_pyfunction!(milnor, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_homology, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
