//! Plain-text instance files.
//!
//! ```text
//! # comment
//! m n p [k]
//! <n lines of p characters over {0,1}>   # set 1
//!
//! <n lines>                              # set 2
//! ...
//! ```
//!
//! Blank lines and `#` comment lines are ignored anywhere. With `p = 0` no
//! vector lines are expected.

use std::fmt::Write as _;

use crate::bits::BitVec;
use crate::error::{parse_err, Result};
use crate::instance::Instance;

/// Numbered, non-blank, non-comment lines.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_numbers(line_no: usize, line: &str, what: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| parse_err(line_no, format!("{what}: {tok:?} is not a nonnegative integer")))
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header line \"m n p [k]\""))?;
    let nums = parse_numbers(hline, header, "header")?;
    if !(3..=4).contains(&nums.len()) {
        return Err(parse_err(
            hline,
            format!("header must be \"m n p [k]\", found {} fields", nums.len()),
        ));
    }
    let (m, n, p) = (nums[0] as usize, nums[1] as usize, nums[2] as usize);
    let k = nums.get(3).copied();
    if m == 0 {
        return Err(parse_err(hline, "m must be at least 1"));
    }

    let expected = if p == 0 { 0 } else { m * n };
    let mut vectors = Vec::with_capacity(expected);
    let mut last_line = hline;
    for (line_no, line) in lines {
        last_line = line_no;
        if vectors.len() == expected {
            return Err(parse_err(
                line_no,
                format!("unexpected extra line; header declares {m} sets of {n} vectors"),
            ));
        }
        if line.chars().count() != p {
            return Err(parse_err(
                line_no,
                format!("vector has {} components, expected {p}", line.chars().count()),
            ));
        }
        let v: BitVec = line.parse().map_err(|e| match e {
            crate::Error::Parse { message, .. } => parse_err(line_no, message),
            other => other,
        })?;
        vectors.push(v);
    }
    if vectors.len() != expected {
        return Err(parse_err(
            last_line,
            format!(
                "expected {expected} vector lines ({m} sets of {n}), found {}",
                vectors.len()
            ),
        ));
    }

    let sets: Vec<Vec<BitVec>> = if p == 0 {
        vec![vec![BitVec::ones(0); n]; m]
    } else {
        vectors.chunks(n.max(1)).map(<[BitVec]>::to_vec).collect()
    };
    let sets = if n == 0 { vec![Vec::new(); m] } else { sets };
    Ok(Instance::new(p, sets)?.with_budget(k))
}

pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    match instance.budget() {
        Some(k) => writeln!(out, "{} {} {} {k}", instance.m(), instance.n(), instance.p()),
        None => writeln!(out, "{} {} {}", instance.m(), instance.n(), instance.p()),
    }
    .unwrap();
    if instance.p() > 0 {
        for (i, set) in instance.sets().iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            for v in set {
                writeln!(out, "{v}").unwrap();
            }
        }
    }
    out
}
