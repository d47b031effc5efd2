use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "ninner").unwrap();
        ninner::register(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("ninner", m).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python check failed: {e}");
        }
    });
}

#[test]
fn counterexample_values_are_fractions() {
    run(r#"
from fractions import Fraction
s = ninner.Space(3)
x, u, v = ninner.symmetry_counterexample()
assert s.iterated(x, x, [u, v]) == 9
assert isinstance(s.iterated(x, x, [u, v]), Fraction)
value, top = s.iterated_expanded(v, v, [u, x])
assert (value, top) == (1, [[5, 3], [3, 2]])
assert s.standard(x, x, [u, v]) == 1
assert s.e_factor([u, v]) == 9
assert s.representation(x, x, [u, v])["residual"] == 0
assert s.lupu_gap(x, u, v) == 1
assert s.n_chebyshev(x, x, [u, v]) == 9
"#);
}

#[test]
fn exact_inputs_accept_strings_and_floats() {
    run(r#"
from fractions import Fraction
s = ninner.Space(2)
assert s.inner(["1/2", 0.25], [2, Fraction(4)]) == Fraction(2)
assert ninner.determinant([["1/3", 0], [0, 3]]) == 1
try:
    s.inner([1, "one"], [1, 1])
except ValueError:
    pass
else:
    raise AssertionError("bad literal accepted")
"#);
}

#[test]
fn float_mode_returns_floats() {
    run(r#"
s = ninner.Space(3, mode="float")
x, u, v = ninner.symmetry_counterexample(mode="float")
r = s.iterated(x, x, [u, v])
assert isinstance(r, float) and abs(r - 9) < 1e-12
assert s.mode == "float" and s.dim == 3
"#);
}

#[test]
fn errors_map_to_module_exceptions() {
    run(r#"
s = ninner.Space(3)
try:
    s.inner([1, 2], [1, 2, 3])
except ninner.DimensionError:
    pass
else:
    raise AssertionError("dimension mismatch accepted")
try:
    ninner.regress([1, 2, 3, 4], [1, 2, 3, 4], [3, 1, 4, 0])
except ninner.SingularError:
    pass
else:
    raise AssertionError("collinear predictors accepted")
assert issubclass(ninner.SingularError, ninner.NinnerError)
try:
    ninner.Space()
except TypeError:
    pass
else:
    raise AssertionError("Space without dim or weight")
"#);
}

#[test]
fn weighted_space_dodgson_regression_and_suites() {
    run(r#"
s = ninner.Space(weight=[[2, 1], [1, 2]])
assert s.inner([1, 0], [0, 1]) == 1
m = [[1, 2, 0, 4], [3, 0, 1, 1], [0, 5, 0, 2], [2, 1, 3, "1/2"]]
c = ninner.condense(m)
assert c["value"] == ninner.determinant(m)
assert ninner.dodgson_residuals(m) == (0, 0)
x = [0, 1, 2, 3, 4]
y = [1, 0, 4, 1, 2]
z = [2 * a + 3 * b + 5 for a, b in zip(x, y)]
r = ninner.regress(x, y, z)
assert r["agree"] and all((f["a"], f["b"], f["c"]) == (2, 3, 5) for f in r["fits"])
assert ninner.variance([1, 2, 3, 4]) == ninner.covariance([1, 2, 3, 4], [1, 2, 3, 4])
a = ninner.axiom_check("I2", n=3, product="iterated", samples=3)
assert not a["passed"] and not a["expected_to_hold"]
assert (a["counterexample"]["lhs"], a["counterexample"]["rhs"]) == (9, 1)
rep = ninner.verify("dodgson", dim=4, trials=4, seed=1)
assert rep["ok"] and len(rep["checks"]) == 6
"#);
}
