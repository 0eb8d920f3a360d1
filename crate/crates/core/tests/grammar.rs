use tropsolve::algebra::{parse_poly, render_rational};

const VARS: [&str; 3] = ["x", "y", "z"];

fn render(s: &str) -> String {
    render_rational(&parse_poly(s, &VARS).unwrap(), &VARS)
}

#[test]
fn documented_examples() {
    assert_eq!(render("x^2 + y^2"), "x^2 + y^2");
    assert_eq!(render("z - x^2 - y^2"), "-x^2 - y^2 + z");
    assert_eq!(render("1/2 x y - 3"), "1/2*x*y - 3");
    assert_eq!(parse_poly("(x + 1)^3", &VARS).unwrap().len(), 4);
    assert_eq!(render("2.5x"), "5/2*x");
    assert_eq!(render("0.25"), render("1/4"));
    assert_eq!(render("-x^2"), "-x^2");
    assert_eq!(render("x y"), render("x*y"));
    assert_eq!(render("3(x + y)"), "3*x + 3*y");
    assert_eq!(render("(x + y)/2"), "1/2*x + 1/2*y");
    assert!(parse_poly("x - x", &VARS).unwrap().is_zero());
}

#[test]
fn documented_errors() {
    for bad in ["1/x", "w + 1", "x^", "x^-1", "(x + 1", "", "x +", "1/0"] {
        assert!(parse_poly(bad, &VARS).is_err(), "{bad:?} parsed");
    }
}

#[test]
fn rendering_round_trips() {
    for s in ["x^3*y - 7/3*z^2 + 1", "(x - y)^4 + 2.125", "-(x + 2y)(z - 1)"] {
        let p = parse_poly(s, &VARS).unwrap();
        assert_eq!(parse_poly(&render_rational(&p, &VARS), &VARS).unwrap(), p);
    }
}
