use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>)>(f: F) {
    use char2py::char2py as module;
    pyo3::append_to_inittab!(module);
    Python::initialize();
    Python::attach(|py| {
        let globals = PyDict::new(py);
        py.run(c"import char2py", Some(&globals), None).unwrap();
        f(py, &globals);
    });
}

fn eval<'py>(py: Python<'py>, g: &Bound<'py, PyDict>, expr: &std::ffi::CStr) -> Bound<'py, PyAny> {
    py.eval(expr, Some(g), None).unwrap()
}

#[test]
fn module_round_trip() {
    with_module(|py, g| {
        let n: usize = eval(py, g, c"len(char2py.gamma_generators()[1])").extract().unwrap();
        assert_eq!(n, 6);
        let deg: i64 = eval(py, g, c"char2py.deg_r(2, {'H^2': 1, 'c1*H': 3, 'c1^2': 9, 'c2': 3}, 3)['degree']")
            .extract()
            .unwrap();
        assert_eq!(deg, 12);
        let rep = eval(py, g, c"char2py.SingularJet('vars: x1, x2, xi1, xi2\\nx1*x2 + xi1^3\\n').classify()");
        let type_c: bool = rep.get_item("typeC").unwrap().extract().unwrap();
        let type_r: bool = rep.get_item("typeR").unwrap().extract().unwrap();
        assert!(!type_c && !type_r);
        let s: String = eval(py, g, c"str(char2py.Polynomial('x*y + 1', ['x', 'y']) * char2py.Polynomial('x', ['x', 'y']))")
            .extract()
            .unwrap();
        assert_eq!(s, "x^2*y + x");
        let r: usize = eval(py, g, c"char2py.AlternatingMatrix([[0, 1, 0], [0, 0], [0]]).rank()").extract().unwrap();
        assert_eq!(r, 2);
        assert!(py.eval(c"char2py.Polynomial('x +', ['x'])", Some(g), None).is_err());
    });
}
