use eigenrand::specfun::{hermite_all, hermite_h};

const DATA: &str = include_str!("data/hermite_oracle.csv");

fn rows() -> Vec<(usize, f64, f64)> {
    DATA.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn matches_high_precision_values() {
    let rows = rows();
    assert!(rows.len() > 600);
    let mut worst = 0.0f64;
    for (n, x, want) in rows {
        let got: f64 = hermite_h(n, x);
        if want.abs() < 1e-280 {
            // below the normal range of f64 only the magnitude can be compared
            assert!(got.abs() < 1e-270, "n={n} x={x}: {got} vs {want}");
            continue;
        }
        let rel = ((got - want) / want).abs();
        worst = worst.max(rel);
        assert!(rel <= 1e-10, "n={n} x={x}: {got} vs {want} (rel {rel:e})");
    }
    println!("worst relative error {worst:e}");
}

#[test]
fn table_agrees_with_single_evaluation() {
    for (n, x, _) in rows().into_iter().filter(|r| r.0 <= 144) {
        let all = hermite_all::<f64>(n, x);
        assert_eq!(all[n], hermite_h::<f64>(n, x));
    }
}
