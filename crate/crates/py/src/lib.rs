//! Python bindings. Numbers cross as Python `complex`, test data as JSON
//! strings in the CLI encoding, errors as `ValueError("Name: message")`.

#![allow(clippy::useless_conversion)]

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::transfer_lab as core;
use core::local_field::{AdditiveCharacter, MultiplicativeCharacter, PAdicNumber};
use core::schwartz::{Ball, SchwartzFunction};
use core::spectra::{self, LFactorSpec, SatakeParameter};
use core::transfer::{self, TransferKernelG, TransferKernelT, XTestData};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.name()))
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(format!("Json: {e}"))
}

#[pyclass(frozen)]
#[derive(Clone, Copy)]
struct FieldParams(core::local_field::FieldParams);

#[pymethods]
impl FieldParams {
    #[new]
    #[pyo3(signature = (p, precision = 10))]
    fn new(p: u64, precision: u32) -> PyResult<Self> {
        core::local_field::FieldParams::new(p, precision).map(FieldParams).map_err(err)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.q()
    }

    #[getter]
    fn precision(&self) -> u32 {
        self.0.precision()
    }

    fn __repr__(&self) -> String {
        format!("FieldParams(p={}, precision={})", self.0.p(), self.0.precision())
    }
}

#[pyclass(frozen)]
#[derive(Clone)]
struct PAdic(PAdicNumber);

#[pymethods]
impl PAdic {
    #[staticmethod]
    fn from_int(params: &FieldParams, n: i64) -> Self {
        PAdic(PAdicNumber::from_int(params.0, n))
    }

    #[staticmethod]
    fn from_rational(params: &FieldParams, num: i64, den: i64) -> PyResult<Self> {
        PAdicNumber::from_rational(params.0, num, den).map(PAdic).map_err(err)
    }

    #[getter]
    fn valuation(&self) -> Option<i64> {
        self.0.valuation()
    }

    #[getter]
    fn unit(&self) -> u64 {
        self.0.unit()
    }

    fn abs(&self) -> f64 {
        self.0.abs()
    }

    fn __add__(&self, other: &PAdic) -> PyResult<Self> {
        self.0.add(&other.0).map(PAdic).map_err(err)
    }

    fn __mul__(&self, other: &PAdic) -> PyResult<Self> {
        self.0.mul(&other.0).map(PAdic).map_err(err)
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0.inv().map(PAdic).map_err(err)
    }

    fn __repr__(&self) -> String {
        core::json::padic(&self.0).to_string()
    }
}

#[pyclass(frozen)]
#[derive(Clone)]
struct Schwartz(SchwartzFunction);

#[pymethods]
impl Schwartz {
    /// Indicator of the ball `center + p^radius Z_p`.
    #[staticmethod]
    fn indicator(center: &PAdic, radius: i64) -> PyResult<Self> {
        Ball::new(center.0, radius).map(|b| Schwartz(SchwartzFunction::indicator(b))).map_err(err)
    }

    /// Indicator of the shell `v(x) = k`.
    #[staticmethod]
    fn shell(params: &FieldParams, k: i64) -> Self {
        Schwartz(SchwartzFunction::shell(params.0, k))
    }

    #[staticmethod]
    fn from_json(params: &FieldParams, text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
        core::json::schwartz_from(params.0, &v).map(Schwartz).map_err(err)
    }

    fn to_json(&self) -> String {
        core::json::schwartz(&self.0).to_string()
    }

    fn __call__(&self, x: &PAdic) -> PyResult<Complex64> {
        self.0.evaluate(&x.0).map_err(err)
    }

    fn __add__(&self, other: &Schwartz) -> Self {
        Schwartz(self.0.add(&other.0))
    }

    fn __sub__(&self, other: &Schwartz) -> Self {
        Schwartz(self.0.sub(&other.0))
    }

    fn scale(&self, c: Complex64) -> Self {
        Schwartz(self.0.scale(c))
    }

    fn sup_distance(&self, other: &Schwartz) -> f64 {
        self.0.sup_distance(&other.0)
    }

    fn __len__(&self) -> usize {
        self.0.terms().len()
    }
}

fn psi(phi: &Schwartz) -> AdditiveCharacter {
    AdditiveCharacter::standard(phi.0.params())
}

#[pyfunction]
fn fourier_transform(phi: &Schwartz) -> PyResult<Schwartz> {
    core::schwartz::fourier_transform(&phi.0, &psi(phi)).map(Schwartz).map_err(err)
}

#[pyfunction]
fn inverse_fourier_transform(phi: &Schwartz) -> PyResult<Schwartz> {
    core::schwartz::inverse_fourier_transform(&phi.0, &psi(phi)).map(Schwartz).map_err(err)
}

/// Local zeta integral as JSON `{"variable", "num", "den"}` in `t = q^-s`.
#[pyfunction]
#[pyo3(signature = (phi, character = None))]
fn mellin_transform(phi: &Schwartz, character: Option<&str>) -> PyResult<String> {
    let params = phi.0.params();
    let chi = match character {
        Some(text) => {
            let v: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
            core::json::character_from(params, &v).map_err(err)?
        }
        None => MultiplicativeCharacter::trivial(params),
    };
    core::schwartz::mellin_transform(&phi.0, &chi).map(|m| m.to_json().to_string()).map_err(err)
}

#[pyfunction]
fn transfer_g(phi: &Schwartz, d: u32) -> PyResult<Schwartz> {
    let k = TransferKernelG::new(d).map_err(err)?;
    transfer::transfer_g(&phi.0, &k, &psi(phi)).map(Schwartz).map_err(err)
}

#[pyfunction]
fn inverse_transfer_g(f: &Schwartz, d: u32) -> PyResult<Schwartz> {
    let k = TransferKernelG::new(d).map_err(err)?;
    transfer::inverse_transfer_g(&f.0, &k, &psi(f)).map(Schwartz).map_err(err)
}

/// Returns the output and its support window `(lo, hi)`, if bounded.
#[pyfunction]
fn transfer_t(phi: &Schwartz, d: u32, d_prime: u32) -> PyResult<(Schwartz, Option<(i64, i64)>)> {
    let k = TransferKernelT::new(d, d_prime).map_err(err)?;
    let x = transfer::transfer_t(&phi.0, &k, &psi(phi)).map_err(err)?;
    Ok((Schwartz(x.f), x.window))
}

#[pyfunction]
#[pyo3(signature = (f, d, d_prime, window = None))]
fn inverse_transfer_t(f: &Schwartz, d: u32, d_prime: u32, window: Option<(i64, i64)>) -> PyResult<Schwartz> {
    let k = TransferKernelT::new(d, d_prime).map_err(err)?;
    let x = XTestData { f: f.0.clone(), window };
    transfer::inverse_transfer_t(&x, &k, &psi(f)).map(Schwartz).map_err(err)
}

/// Symmetric-square transfer of JSON sym-square data with an unramified
/// (or, with `ramified=True`, ramified) quadratic `eta`.
#[pyfunction]
#[pyo3(signature = (params, data, ramified = false))]
fn transfer_sym_square(params: &FieldParams, data: &str, ramified: bool) -> PyResult<Schwartz> {
    let v: serde_json::Value = serde_json::from_str(data).map_err(json_err)?;
    let data = core::json::symsq_data_from(params.0, &v).map_err(err)?;
    let eta = if ramified {
        MultiplicativeCharacter::ramified_quadratic(params.0)
    } else {
        MultiplicativeCharacter::unramified_quadratic(params.0)
    };
    let k = transfer::SymSqKernel::new(eta, None).map_err(err)?;
    transfer::transfer_sym_square(&data, &k, &AdditiveCharacter::standard(params.0)).map(|x| Schwartz(x.f)).map_err(err)
}

#[pyfunction]
fn identities() -> Vec<&'static str> {
    core::jx::IDENTITIES.to_vec()
}

/// `(pass, witnesses)` for one registered identity.
#[pyfunction]
fn verify_identity(name: &str) -> PyResult<(bool, Vec<String>)> {
    core::jx::verify_identity(name).map(|c| (c.pass, c.witnesses)).map_err(err)
}

fn satake(alpha: Complex64, q: f64) -> PyResult<SatakeParameter> {
    SatakeParameter::new(alpha, q).map_err(err)
}

#[pyfunction]
fn spherical_function(alpha: Complex64, q: f64, n: u32) -> PyResult<Complex64> {
    Ok(spectra::spherical_function(&satake(alpha, q)?, n))
}

#[pyfunction]
fn whittaker_function(alpha: Complex64, q: f64, n: i64) -> PyResult<Complex64> {
    Ok(spectra::whittaker_function(&satake(alpha, q)?, n))
}

#[pyfunction]
fn l_factor(alpha: Complex64, q: f64, spec: &str, s: Complex64) -> PyResult<Complex64> {
    let spec = LFactorSpec::parse(spec).map_err(err)?;
    spectra::l_factor(&satake(alpha, q)?, &spec, s).map_err(err)
}

#[pyfunction]
fn plancherel_density(alpha: Complex64, q: f64) -> PyResult<f64> {
    spectra::plancherel_density(&satake(alpha, q)?).map_err(err)
}

/// `(value, certified_tail)` of the truncated torus period.
#[pyfunction]
#[pyo3(signature = (alpha, q, truncation = 60))]
fn torus_period(alpha: Complex64, q: f64, truncation: u32) -> PyResult<(Complex64, f64)> {
    let t = spectra::torus_period(&satake(alpha, q)?, truncation).map_err(err)?;
    Ok((t.value, t.certified_tail))
}

#[pyfunction]
fn lvalue_quotient(alpha: Complex64, q: f64) -> PyResult<Complex64> {
    spectra::lvalue_quotient(&satake(alpha, q)?).map_err(err)
}

/// `(constant, max_relative_deviation)` over the reference parameters.
#[pyfunction]
#[pyo3(signature = (q, truncation = 60))]
fn period_check(q: f64, truncation: u32) -> PyResult<(Complex64, f64)> {
    let c = spectra::period_check(q, truncation, &spectra::reference_alphas()).map_err(err)?;
    Ok((c.constant, c.max_relative_deviation))
}

/// `(mass, residual, refined_residual)`.
#[pyfunction]
#[pyo3(signature = (q, points = 2048))]
fn plancherel_check(q: f64, points: usize) -> PyResult<(f64, f64, f64)> {
    let c = spectra::plancherel_inversion_check(q, points).map_err(err)?;
    Ok((c.mass, c.residual, c.refined_residual))
}

/// Runs the command line; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = core::cli::run(std::iter::once("transfer-lab".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn transfer_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<FieldParams>()?;
    m.add_class::<PAdic>()?;
    m.add_class::<Schwartz>()?;
    m.add_function(wrap_pyfunction!(fourier_transform, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_fourier_transform, m)?)?;
    m.add_function(wrap_pyfunction!(mellin_transform, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_g, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_transfer_g, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_t, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_transfer_t, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_sym_square, m)?)?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_function, m)?)?;
    m.add_function(wrap_pyfunction!(whittaker_function, m)?)?;
    m.add_function(wrap_pyfunction!(l_factor, m)?)?;
    m.add_function(wrap_pyfunction!(plancherel_density, m)?)?;
    m.add_function(wrap_pyfunction!(torus_period, m)?)?;
    m.add_function(wrap_pyfunction!(lvalue_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(period_check, m)?)?;
    m.add_function(wrap_pyfunction!(plancherel_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
