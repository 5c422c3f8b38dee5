/// Parses a sweep grid: `v` (single point), `a:b:n` (n evenly spaced points,
/// inclusive) or `log:a:b:n` (n log-spaced points).
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| -> Result<f64, String> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid number '{s}' in grid '{text}'"))
    };
    let count = |s: &str| -> Result<usize, String> {
        match s.trim().parse::<usize>() {
            Ok(n) if n >= 2 => Ok(n),
            _ => Err(format!("grid '{text}' needs an integer point count >= 2")),
        }
    };
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, n] => {
            let (a, b, n) = (num(a)?, num(b)?, count(n)?);
            let step = (b - a) / (n - 1) as f64;
            Ok((0..n)
                .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
                .collect())
        }
        ["log", a, b, n] => {
            let (a, b, n) = (num(a)?, num(b)?, count(n)?);
            if !(a > 0.0 && b > 0.0) {
                return Err(format!("log grid '{text}' needs positive endpoints"));
            }
            let (la, lb) = (a.ln(), b.ln());
            let step = (lb - la) / (n - 1) as f64;
            Ok((0..n)
                .map(|i| match i {
                    0 => a,
                    i if i == n - 1 => b,
                    i => (la + step * i as f64).exp(),
                })
                .collect())
        }
        _ => Err(format!("unrecognised grid '{text}'")),
    }
}

/// Parses an order grid: `n` or the inclusive range `a:b`.
pub fn parse_order_grid(text: &str) -> Result<Vec<usize>, String> {
    let int = |s: &str| -> Result<usize, String> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid order '{s}' in '{text}'"))
    };
    match text.split(':').collect::<Vec<_>>().as_slice() {
        [n] => Ok(vec![int(n)?]),
        [a, b] => {
            let (a, b) = (int(a)?, int(b)?);
            if a > b {
                return Err(format!("empty order range '{text}'"));
            }
            Ok((a..=b).collect())
        }
        _ => Err(format!("unrecognised order grid '{text}'")),
    }
}
