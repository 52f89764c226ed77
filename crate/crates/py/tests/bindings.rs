use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn with_module(code: &std::ffi::CStr) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "conicline_py").unwrap();
        conicline_py::conicline_py(&m).unwrap();
        let locals = PyDict::new(py);
        locals.set_item("cl", m).unwrap();
        if let Err(e) = py.run(code, None, Some(&locals)) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn fermat_cubic_through_bindings() {
    with_module(
        c"
f, g = cl.family('fermat', d=3)
p = cl.Pencil(f, g, seed=1)
assert p.degree == 3
assert len(p.base_points()) == 9
r = p.analyze()
assert (r.m, r.p, r.balance) == (3, 3, 0), r
assert [e for _, _, e, _ in r.fibers()] == [4, 4, 4]
",
    );
}

#[test]
fn json_analysis_and_errors() {
    with_module(
        c"
import json
data = json.loads(cl.analyze('(x-2*y)(x^2+y^2-z^2)', '(x-y)(x^2-x*y+y^2-z^2)', seed=3))
assert data['summary']['m'] == 4 and data['ledger']['balance'] == 0
try:
    cl.Form('x^3 +')
except ValueError:
    pass
else:
    raise AssertionError('bad form accepted')
assert cl.format_complex(1.5) == cl.format_complex(complex(1.5, 0))
assert str(cl.Form('x*y - z^2')) == 'x*y - z^2'
",
    );
}
