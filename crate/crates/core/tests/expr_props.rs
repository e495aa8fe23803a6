mod common;

use proptest::prelude::*;
use qslice::cli::{lower, parse, Expr};
use qslice::Quaternion;

fn literal() -> impl Strategy<Value = Quaternion> {
    prop_oneof![
        (-3i32..=3).prop_map(|n| Quaternion::real(n as f64)),
        (0..4usize, -2.5..2.5f64).prop_map(|(k, x)| {
            let mut c = [0.0; 4];
            c[k] = (x * 8.0).round() / 8.0;
            Quaternion::from_components(c)
        }),
        common::quat(2.0),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::Var), literal().prop_map(Expr::Lit)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |a| Expr::Neg(b(a))),
            inner.clone().prop_map(move |a| Expr::Conj(b(a))),
            inner.clone().prop_map(move |a| Expr::Sym(b(a))),
            inner.clone().prop_map(move |a| Expr::Inv(b(a))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Add(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Sub(b(x), b(y))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| Expr::Mul(b(x), b(y))),
            (inner, -2i32..=3).prop_map(move |(x, n)| Expr::Pow(b(x), n)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printed_form_is_a_fixpoint(e in expr()) {
        let once = parse(&e.to_string()).unwrap();
        let twice = parse(&once.to_string()).unwrap();
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(twice.to_string(), once.to_string());
    }

    #[test]
    fn printing_preserves_meaning(e in expr(), q in common::quat(1.5)) {
        let once = parse(&e.to_string()).unwrap();
        if let (Ok(a), Ok(b)) = (lower(&e), lower(&once)) {
            match (a.eval(q), b.eval(q)) {
                (Ok(x), Ok(y)) => prop_assert!(x.dist(&y) <= 1e-9 * (1.0 + x.norm()), "{} vs {}", x, y),
                (Err(_), Err(_)) => {}
                (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
            }
        }
    }
}

#[test]
fn whitespace_is_ignored() {
    let a = parse("( q - i ) * ( q + i )").unwrap();
    let b = parse("(q-i)*(q+i)").unwrap();
    assert_eq!(a, b);
    assert_eq!(parse(" q ^ 2 ").unwrap(), parse("q^2").unwrap());
}
