use proptest::prelude::*;

use conicline::euler::{euler_conic_line, euler_fiber, node_count_general_position};
use conicline::forms::{exact_divide, monomial_count, parse_form, random_transform, ExactForm, TernaryForm};
use conicline::roots::solve_univariate;
use conicline::scalar::{qi_int, C64};

fn form_strategy(d: u32) -> impl Strategy<Value = ExactForm> {
    prop::collection::vec(-4i64..=4, monomial_count(d))
        .prop_filter("nonzero form", |c| c.iter().any(|&v| v != 0))
        .prop_map(move |c| TernaryForm::new(d, c.into_iter().map(|v| qi_int(v, 0)).collect()).unwrap())
}

fn point_strategy() -> impl Strategy<Value = [C64; 3]> {
    prop::array::uniform3((-2.0f64..2.0, -2.0f64..2.0)).prop_map(|p| p.map(|(re, im)| C64::new(re, im)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn forms_are_homogeneous(f in form_strategy(3), p in point_strategy(), t in (0.3f64..3.0, -1.0f64..1.0)) {
        let f = f.to_float();
        let t = C64::new(t.0, t.1);
        let lhs = f.evaluate(&p.map(|c| c * t));
        let rhs = f.evaluate(&p) * t.powu(3);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn exact_division_inverts_multiplication(f in form_strategy(2), g in form_strategy(2)) {
        let h = f.mul(&g);
        prop_assert_eq!(exact_divide(&h, &g), Some(f));
    }

    #[test]
    fn printed_forms_parse_back(f in form_strategy(4)) {
        prop_assert_eq!(parse_form(&f.to_expr(), Some(4)).unwrap(), f);
    }

    #[test]
    fn univariate_roots_are_recovered(roots in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..7), seed in 0u64..1000) {
        let roots: Vec<C64> = roots.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        prop_assume!(roots.iter().enumerate().all(|(i, a)| roots[..i].iter().all(|b| (a - b).norm() > 0.1)));
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        for r in &roots {
            let mut next = vec![C64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        let found = solve_univariate(&coeffs, seed).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        for r in &roots {
            let best = found.iter().map(|z| (z - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(best < 1e-6, "root {} missed by {}", r, best);
        }
    }

    #[test]
    fn transforms_invert_on_points(seed in 0u64..10_000, p in prop::array::uniform3(-5i64..5)) {
        let t = random_transform(seed);
        let p = p.map(|v| qi_int(v, 0));
        prop_assert_eq!(t.unapply_point(&t.apply_point(&p)), p);
    }

    #[test]
    fn line_arrangement_euler_counts_agree(d in 1u32..9) {
        // d lines in general position: C(d,2) nodes, each joining two branches
        let nodes = node_count_general_position(d, 0) as usize;
        prop_assert_eq!(nodes, (d * (d - 1) / 2) as usize);
        prop_assert_eq!(euler_conic_line(d as usize, &vec![2; nodes]), euler_fiber(d, &vec![1; nodes]));
        // d concurrent lines: one ordinary d-fold point with μ = (d-1)²
        prop_assert_eq!(euler_conic_line(d as usize, &[d as usize]), euler_fiber(d, &[((d - 1) * (d - 1)) as usize]));
    }
}
