use std::path::PathBuf;

use la_eval::report::CSV_HEADER;
use la_eval::{emit_report, exact_match, load_predictions, Aggregate, Format, Row};
use proptest::prelude::*;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn seven_of_ten() {
    let rows = load_predictions(&fixtures().join("metrics/predictions_7_of_10.jsonl")).unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(exact_match(&rows), Ok(0.7));
    let a = Aggregate::from_rows("fixtures/metrics", "cot", "mock", &rows);
    let csv = emit_report(std::slice::from_ref(&a), Format::Csv);
    assert_eq!(csv, format!("{CSV_HEADER}\nfixtures/metrics,cot,mock,10,7,0.7000\n"));
    let md = emit_report(&[a], Format::Markdown);
    assert!(md.lines().nth(2).unwrap().ends_with("| 7 | 70.00 |"), "{md}");
}

#[test]
fn one_of_three_rounds_to_four_places() {
    let rows: Vec<Row> = ["Yes", "No", "No"]
        .iter()
        .enumerate()
        .map(|(i, p)| Row::new(&i.to_string(), "direct", Some(p.to_string()), "No", "Yes", 1))
        .collect();
    let csv = emit_report(&[Aggregate::from_rows("d", "direct", "m", &rows)], Format::Csv);
    assert!(csv.ends_with(",3,1,0.3333\n"), "{csv}");
}

fn row() -> impl Strategy<Value = Row> {
    (any::<bool>(), any::<bool>(), 0usize..20).prop_map(|(right, abstain, steps)| {
        let prediction = if abstain { None } else { Some(if right { "Yes" } else { "No" }.to_string()) };
        Row::new("r", "la", prediction, "No", "Yes", steps)
    })
}

/// The decimal expansion of `num / den` to `places`, rounded half up, by
/// long division.
fn long_division(num: usize, den: usize, places: usize) -> String {
    let mut digits = vec![num / den];
    let mut rem = num % den;
    for _ in 0..=places {
        rem *= 10;
        digits.push(rem / den);
        rem %= den;
    }
    let round = digits.pop().unwrap() >= 5;
    if round {
        let mut i = digits.len();
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < 10 || i == 0 {
                break;
            }
            digits[i] = 0;
        }
    }
    let frac: String = digits[1..].iter().map(|d| d.to_string()).collect();
    format!("{}.{frac}", digits[0])
}

proptest! {
    #[test]
    fn shuffling_changes_no_aggregate(rows in proptest::collection::vec(row(), 1..60), seed in any::<u64>()) {
        let mut shuffled = rows.clone();
        let n = shuffled.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = Aggregate::from_rows("d", "la", "m", &rows);
        let b = Aggregate::from_rows("d", "la", "m", &shuffled);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(emit_report(&[a], Format::Csv), emit_report(&[b], Format::Csv));
        prop_assert_eq!(exact_match(&rows), exact_match(&shuffled));
    }

    #[test]
    fn reported_accuracy_is_exactly_correct_over_n(correct in 0usize..500, extra in 0usize..500) {
        let n = correct + extra;
        prop_assume!(n > 0);
        let a = Aggregate { dataset: "d".into(), mode: "la".into(), model: "m".into(), n, correct };
        let acc = a.accuracy();
        prop_assert!((0.0..=1.0).contains(&acc));
        prop_assert_eq!((acc * n as f64).round() as usize, correct);
        let csv = emit_report(std::slice::from_ref(&a), Format::Csv);
        let line = csv.lines().nth(1).unwrap();
        prop_assert_eq!(line.rsplit(',').next().unwrap(), long_division(correct, n, 4));
        let md = emit_report(&[a], Format::Markdown);
        let pct = md.lines().nth(2).unwrap().trim_end_matches(" |").rsplit("| ").next().unwrap().to_string();
        prop_assert_eq!(pct, long_division(100 * correct, n, 2));
    }
}
