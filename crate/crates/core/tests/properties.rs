use avgtime::engines::{co_problem, min_n, rewrite_cost, sat_scan, tabulate};
use avgtime::{ConnectiveTable, Formula, Token};
use proptest::prelude::*;

/// Random well-formed STANDARD formulas over `p_0..p_{vars-1}`.
fn formula_strategy(vars: u32) -> impl Strategy<Value = Formula> {
    let leaf = (0..vars).prop_map(|v| vec![Token::Var(v)]);
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|mut t| {
                t.push(Token::Conn(0));
                t
            }),
            (inner.clone(), inner, 1u16..=2).prop_map(|(mut a, b, c)| {
                a.extend(b);
                a.push(Token::Conn(c));
                a
            }),
        ]
    })
    .prop_map(|tokens| Formula::new(tokens, &ConnectiveTable::standard()).unwrap())
}

proptest! {
    #[test]
    fn render_parse_round_trip(x in formula_strategy(12)) {
        let t = ConnectiveTable::standard();
        prop_assert_eq!(Formula::parse(&x.render(&t), &t).unwrap(), x.clone());
        prop_assert_eq!(x.size_bits(&t), 8 * x.render(&t).chars().count() as u64);
    }

    #[test]
    fn model_set_agrees_with_evaluate(x in formula_strategy(4)) {
        let t = ConnectiveTable::standard();
        let k = x.model_set(&t, 4).unwrap();
        for m in 0..16 {
            prop_assert_eq!(k.contains(m), x.evaluate(&t, m, 4).unwrap());
        }
    }

    #[test]
    fn alpha_bounded_by_size(x in formula_strategy(12)) {
        let t = ConnectiveTable::standard();
        prop_assert!(x.alpha() as u64 <= x.size_bits(&t) / 8);
    }

    #[test]
    fn scanner_against_tabulator(x in formula_strategy(4)) {
        let t = ConnectiveTable::standard();
        let scan = sat_scan(&x, &t);
        let tab = tabulate(&x, &t);
        let f = x.size_bits(&t) as u128;
        prop_assert_eq!(tab.time_units, (1u128 << x.alpha()) * rewrite_cost(&x, &t).time_units);
        match scan.payload {
            Some(w) => {
                prop_assert!(scan.time_units <= tab.time_units);
                prop_assert!(tab.payload.contains(w));
                // nothing smaller satisfies the compacted formula
                prop_assert!((0..w).all(|m| !tab.payload.contains(m)));
            }
            None => {
                prop_assert!(tab.payload.is_empty());
                prop_assert_eq!(scan.time_units, tab.time_units + f);
            }
        }
        prop_assert_eq!(scan.time_units, f * (min_n(&tab.payload) as u128 + 1));
    }

    #[test]
    fn co_problem_scans_the_complement(x in formula_strategy(3)) {
        let t = ConnectiveTable::standard();
        let nx = co_problem(&x, &t).unwrap();
        let k = tabulate(&x, &t).payload;
        prop_assert_eq!(tabulate(&nx, &t).payload, k.complement());
        let expected = nx.size_bits(&t) as u128 * (min_n(&k.complement()) as u128 + 1);
        prop_assert_eq!(sat_scan(&nx, &t).time_units, expected);
    }
}
