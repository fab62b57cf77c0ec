/// Renders a finite number for a data row.
///
/// Without `decimals` the shortest decimal that parses back to the same
/// `f64` is used, always with a fractional part (`25.0`, `8.75`). With
/// `decimals = d` the value is rounded half away from zero at `d`
/// fractional digits, and trailing zeros are then dropped down to a single
/// fractional digit, so `14.125` renders as `14.13` and `25` as `25.0`.
/// `decimals = 0` renders an integer.
///
/// Rounding operates on the shortest decimal representation, so a value
/// written as `1.005` rounds to `1.01` even though its binary value is
/// slightly below it.
pub fn format_number(x: f64, decimals: Option<u32>) -> String {
    debug_assert!(x.is_finite());
    // Display for f64 never uses exponent notation.
    let shortest = format!("{}", x.abs());
    let negative = x.is_sign_negative();
    let (int_part, frac_part) = match shortest.split_once('.') {
        Some((i, f)) => (i.to_string(), f.to_string()),
        None => (shortest, String::new()),
    };

    let (int_part, frac_part) = match decimals {
        Some(d) if frac_part.len() > d as usize => round_half_up(&int_part, &frac_part, d as usize),
        _ => (int_part, frac_part),
    };

    let frac = frac_part.trim_end_matches('0');
    let mut out = String::with_capacity(int_part.len() + frac.len() + 3);
    let is_zero = int_part.bytes().all(|b| b == b'0') && frac.is_empty();
    if negative && !is_zero {
        out.push('-');
    }
    out.push_str(&int_part);
    if decimals == Some(0) {
        return out;
    }
    out.push('.');
    if frac.is_empty() {
        out.push('0');
    } else {
        out.push_str(frac);
    }
    out
}

/// Rounds the non-negative decimal `int.frac` to `d` fractional digits.
fn round_half_up(int: &str, frac: &str, d: usize) -> (String, String) {
    let round_up = frac.as_bytes()[d] >= b'5';
    let mut digits: Vec<u8> = int.bytes().chain(frac.bytes().take(d)).collect();
    if round_up {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, b'1');
                break;
            }
            i -= 1;
            if digits[i] == b'9' {
                digits[i] = b'0';
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let split = digits.len() - d;
    let int = String::from_utf8(digits[..split].to_vec()).expect("ascii digits");
    let frac = String::from_utf8(digits[split..].to_vec()).expect("ascii digits");
    (int, frac)
}
