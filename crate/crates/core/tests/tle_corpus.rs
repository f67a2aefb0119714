//! TLE text round trips and checksum enforcement over a generated corpus.

use streakbench_core::catalog::{checksum, parse_tle, parse_tle_file};
use streakbench_core::synthetic::{synthetic_rso_population, write_tle_file};
use streakbench_core::{Epoch, TleError};

/// Independent checksum: digits by value, minus signs count one.
fn oracle(line: &str) -> u8 {
    (line[..68]
        .chars()
        .map(|c| match c {
            '0'..='9' => c as u32 - '0' as u32,
            '-' => 1,
            _ => 0,
        })
        .sum::<u32>()
        % 10) as u8
}

fn corpus() -> Vec<streakbench_core::catalog::TleRecord> {
    let epoch: Epoch = "2020-02-29T23:59:59Z".parse().unwrap();
    synthetic_rso_population(50, 10_000, epoch, 99).unwrap()
}

#[test]
fn checksum_matches_oracle() {
    for rec in corpus() {
        let (l1, l2) = rec.to_lines();
        assert_eq!(checksum(&l1), oracle(&l1));
        assert_eq!(checksum(&l2), oracle(&l2));
        assert_eq!(l1.len(), 69);
        assert_eq!(l2.len(), 69);
    }
}

#[test]
fn text_round_trip_is_identity() {
    for rec in corpus() {
        let (l1, l2) = rec.to_lines();
        let again = parse_tle(&rec.name, &l1, &l2).unwrap();
        assert_eq!(again, rec);
        assert_eq!(again.to_lines(), (l1, l2));
    }
    let mut buf = Vec::new();
    write_tle_file(&mut buf, &corpus()).unwrap();
    assert_eq!(parse_tle_file(buf.as_slice()).unwrap(), corpus());
}

#[test]
fn digit_mutations_are_rejected() {
    let rec = &corpus()[7];
    let (l1, l2) = rec.to_lines();
    for (which, line) in [(1u8, &l1), (2u8, &l2)] {
        for col in 0..68 {
            let c = line.as_bytes()[col];
            if !c.is_ascii_digit() {
                continue;
            }
            for d in b'0'..=b'9' {
                if d == c {
                    continue;
                }
                let mut bytes = line.clone().into_bytes();
                bytes[col] = d;
                let bad = String::from_utf8(bytes).unwrap();
                let result = if which == 1 {
                    parse_tle("", &bad, &l2)
                } else {
                    parse_tle("", &l1, &bad)
                };
                assert!(result.is_err(), "line {which} col {col} -> {}", d as char);
            }
        }
    }
}

#[test]
fn wrong_checksum_reports_both_digits() {
    let (l1, l2) = corpus()[0].to_lines();
    let expected = oracle(&l2);
    let mut bad = l2.clone();
    let wrong = (expected + 1) % 10;
    bad.replace_range(68..69, &wrong.to_string());
    assert_eq!(
        parse_tle("", &l1, &bad).unwrap_err(),
        TleError::Checksum {
            line: 2,
            expected,
            found: wrong
        }
    );
}
