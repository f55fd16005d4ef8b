//! Python bindings. Structured values (elements, functionals, matrices,
//! reports) cross the boundary as plain dicts and lists in the same JSON
//! shapes the command-line tool reads and writes.

#[pyo3::pymodule]
mod dvrdual {
    use dvr_duality::fingen::{snf as snf_of, InvariantFactors};
    use dvr_duality::flood::{self, ZDelta};
    use dvr_duality::io;
    use dvr_duality::verify::{run_suite, VerifyConfig};
    use dvr_duality::{Error, RingCtx};
    use pyo3::exceptions::{PyRuntimeError, PyValueError};
    use pyo3::prelude::*;
    use pyo3::types::PyString;
    use serde_json::{json, Value};

    fn err(e: Error) -> PyErr {
        match e {
            Error::BudgetExceeded { .. } | Error::PrecisionExhausted(_) => {
                PyRuntimeError::new_err(e.to_string())
            }
            _ => PyValueError::new_err(e.to_string()),
        }
    }

    fn to_value(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
        let text: String = if let Ok(s) = obj.cast::<PyString>() {
            s.to_string()
        } else {
            obj.py()
                .import("json")?
                .call_method1("dumps", (obj,))?
                .extract()?
        };
        serde_json::from_str(&text).map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))
    }

    fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
        py.import("json")?.call_method1("loads", (v.to_string(),))
    }

    /// A base ring `Z_p` or `F_q[[x]]` at a fixed precision.
    #[pyclass(frozen, eq, str, skip_from_py_object)]
    #[derive(Clone, PartialEq)]
    struct Ring {
        ctx: RingCtx,
    }

    impl std::fmt::Display for Ring {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str(&self.ctx.spec_string())
        }
    }

    #[pymethods]
    impl Ring {
        #[new]
        fn new(spec: &str) -> PyResult<Self> {
            Ok(Ring {
                ctx: spec.parse().map_err(err)?,
            })
        }

        #[getter]
        fn spec(&self) -> String {
            self.ctx.spec_string()
        }

        #[getter]
        fn p(&self) -> u32 {
            self.ctx.p()
        }

        #[getter]
        fn q(&self) -> u32 {
            self.ctx.q()
        }

        #[getter]
        fn precision(&self) -> usize {
            self.ctx.precision()
        }

        #[getter]
        fn equal_characteristic(&self) -> bool {
            self.ctx.mode() == dvr_duality::Mode::Equal
        }

        fn __repr__(&self) -> String {
            format!("Ring('{}')", self.ctx.spec_string())
        }
    }

    /// `prod R/pi^e_i x R^f`.
    #[pyclass(frozen, eq, str, skip_from_py_object)]
    #[derive(Clone, PartialEq)]
    struct Module {
        m: InvariantFactors,
    }

    impl std::fmt::Display for Module {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            self.m.fmt(f)
        }
    }

    #[pymethods]
    impl Module {
        #[new]
        fn new(spec: &str) -> PyResult<Self> {
            Ok(Module {
                m: spec.parse().map_err(err)?,
            })
        }

        #[getter]
        fn torsion_exps(&self) -> Vec<usize> {
            self.m.torsion_exps().to_vec()
        }

        #[getter]
        fn free_rank(&self) -> usize {
            self.m.free_rank()
        }

        /// Number of elements, or `None` for a module with free part.
        fn cardinality(&self, ring: &Ring) -> Option<u128> {
            self.m.cardinality(&ring.ctx)
        }

        #[pyo3(signature = (ring, budget = 1 << 16))]
        fn elements<'py>(
            &self,
            py: Python<'py>,
            ring: &Ring,
            budget: u128,
        ) -> PyResult<Vec<Bound<'py, PyAny>>> {
            let elems = ring.ctx.module_elements(&self.m, budget).map_err(err)?;
            elems
                .iter()
                .map(|x| to_py(py, &io::modelem_to_json(x)))
                .collect()
        }

        /// Every functional `M -> T`, in dual coordinates.
        #[pyo3(signature = (ring, budget = 1 << 16))]
        fn dual_elements<'py>(
            &self,
            py: Python<'py>,
            ring: &Ring,
            budget: u128,
        ) -> PyResult<Vec<Bound<'py, PyAny>>> {
            let phis = ring.ctx.dual_elements(&self.m, budget).map_err(err)?;
            phis.iter()
                .map(|phi| to_py(py, &io::dualelem_to_json(phi)))
                .collect()
        }

        fn __repr__(&self) -> String {
            format!("Module('{}')", self.m)
        }
    }

    /// `Z[delta]` with `delta^2 = a + b delta`.
    #[pyclass(frozen, name = "ZDeltaRing")]
    struct PyZDeltaRing {
        ring: flood::ZDeltaRing,
    }

    #[pymethods]
    impl PyZDeltaRing {
        #[new]
        fn new(a: i64, b: i64) -> PyResult<Self> {
            Ok(PyZDeltaRing {
                ring: flood::zdelta_validate(a, b).map_err(err)?,
            })
        }

        #[getter]
        fn discriminant(&self) -> i128 {
            self.ring.discriminant()
        }

        fn add(&self, z: (i128, i128), w: (i128, i128)) -> (i128, i128) {
            let s = self
                .ring
                .add(ZDelta { x: z.0, y: z.1 }, ZDelta { x: w.0, y: w.1 });
            (s.x, s.y)
        }

        fn mul(&self, z: (i128, i128), w: (i128, i128)) -> (i128, i128) {
            let s = self
                .ring
                .mul(ZDelta { x: z.0, y: z.1 }, ZDelta { x: w.0, y: w.1 });
            (s.x, s.y)
        }

        fn norm(&self, z: (i128, i128)) -> i128 {
            self.ring.norm(ZDelta { x: z.0, y: z.1 })
        }
    }

    #[pyfunction]
    fn zdelta_accepts(a: i64, b: i64) -> bool {
        flood::zdelta_validate(a, b).is_ok()
    }

    /// Smith normal form of `{"ring": ..., "rows": [...]}`.
    #[pyfunction]
    fn snf<'py>(py: Python<'py>, matrix: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let (ctx, m) = io::parse_matrix(&to_value(matrix)?.to_string()).map_err(err)?;
        let s = snf_of(&ctx, &m).map_err(err)?;
        let v = json!({
            "module": s.factors.to_string(),
            "torsion_exps": s.factors.torsion_exps(),
            "free_rank": s.factors.free_rank(),
            "pivots": s.pivots,
        });
        to_py(py, &v)
    }

    #[pyfunction]
    fn pair<'py>(
        py: Python<'py>,
        ring: &Ring,
        module: &Module,
        phi: &Bound<'py, PyAny>,
        elem: &Bound<'py, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let ctx = &ring.ctx;
        let phi = io::dualelem_from_json(ctx, &module.m, &to_value(phi)?).map_err(err)?;
        let x = io::modelem_from_json(ctx, &module.m, &to_value(elem)?, ctx.precision())
            .map_err(err)?;
        let t = ctx.eval_pairing(&module.m, &phi, &x).map_err(err)?;
        to_py(py, &io::telem_to_json(&t))
    }

    #[pyfunction]
    fn double_dual<'py>(
        py: Python<'py>,
        ring: &Ring,
        module: &Module,
        elem: &Bound<'py, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let ctx = &ring.ctx;
        let x = io::modelem_from_json(ctx, &module.m, &to_value(elem)?, ctx.precision())
            .map_err(err)?;
        let image = ctx.double_dual_map(&module.m, &x).map_err(err)?;
        to_py(py, &io::modelem_to_json(&image))
    }

    /// Whether the inflation/restriction square commutes for one functional
    /// on `R/pi^b`.
    #[pyfunction]
    fn square(ring: &Ring, a: usize, b: usize, phi: &Bound<'_, PyAny>) -> PyResult<bool> {
        let ctx = &ring.ctx;
        let mb = InvariantFactors::torsion(&[b]).map_err(err)?;
        let phi = io::dualelem_from_json(ctx, &mb, &to_value(phi)?).map_err(err)?;
        ctx.check_inf_res_square(a, b, &phi).map_err(err)
    }

    #[pyfunction]
    fn ell<'py>(
        py: Python<'py>,
        ring: &Ring,
        phi: &Bound<'py, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let phi = io::zdual_from_json(&ring.ctx, &to_value(phi)?).map_err(err)?;
        let t = ring.ctx.ell(&phi).map_err(err)?;
        to_py(py, &io::telem_to_json(&t))
    }

    #[pyfunction]
    fn ell_inv<'py>(
        py: Python<'py>,
        ring: &Ring,
        t: &Bound<'py, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let t = io::telem_from_json(&ring.ctx, &to_value(t)?).map_err(err)?;
        let phi = ring.ctx.ell_inv(&t).map_err(err)?;
        to_py(py, &io::zdual_to_json(&ring.ctx, &phi).map_err(err)?)
    }

    /// `(#T[p^n], p^n)` for `R = Z_p`.
    #[pyfunction]
    fn torsion_count(ring: &Ring, n: usize) -> PyResult<(u128, u128)> {
        flood::torsion_count(&ring.ctx, n).map_err(err)
    }

    /// Runs the property suite and returns the report.
    #[pyfunction]
    #[pyo3(signature = (config = None))]
    fn verify<'py>(
        py: Python<'py>,
        config: Option<&Bound<'py, PyAny>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let cfg = match config {
            Some(c) => VerifyConfig::from_json(&to_value(c)?.to_string()).map_err(err)?,
            None => VerifyConfig::default(),
        };
        let report = py.detach(|| run_suite(&cfg)).map_err(err)?;
        to_py(
            py,
            &serde_json::to_value(&report).expect("report serializes"),
        )
    }
}
