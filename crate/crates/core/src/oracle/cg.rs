//! Clebsch–Gordan coefficients, Condon–Shortley phase, twice-value arguments.

const FACTORIALS: [f64; 171] = {
    let mut table = [1.0f64; 171];
    let mut i = 1;
    while i < 171 {
        table[i] = table[i - 1] * i as f64;
        i += 1;
    }
    table
};

fn fact(n: i64) -> f64 {
    FACTORIALS[n as usize]
}

/// `<j1 m1; j2 m2 | j m>` with every argument given as twice its value.
///
/// Racah's closed form in `f64`. Returns 0 for any forbidden combination.
pub fn clebsch_gordan(tj1: u32, tm1: i32, tj2: u32, tm2: i32, tj: u32, tm: i32) -> f64 {
    let (j1, j2, j) = (i64::from(tj1), i64::from(tj2), i64::from(tj));
    let (m1, m2, m) = (i64::from(tm1), i64::from(tm2), i64::from(tm));
    if m1 + m2 != m || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return 0.0;
    }
    if (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (j + m) % 2 != 0 {
        return 0.0;
    }
    if j < (j1 - j2).abs() || j > j1 + j2 || (j1 + j2 + j) % 2 != 0 {
        return 0.0;
    }
    // halve everything now that parities are known
    let a = (j1 + j2 - j) / 2;
    let b = (j1 - j2 + j) / 2;
    let c = (-j1 + j2 + j) / 2;
    let total = (j1 + j2 + j) / 2 + 1;
    let norm = (fact(a) * fact(b) * fact(c) / fact(total) * (j + 1) as f64).sqrt();
    let mags = (fact((j + m) / 2)
        * fact((j - m) / 2)
        * fact((j1 - m1) / 2)
        * fact((j1 + m1) / 2)
        * fact((j2 - m2) / 2)
        * fact((j2 + m2) / 2))
    .sqrt();
    let d1 = a;
    let d2 = (j1 - m1) / 2;
    let d3 = (j2 + m2) / 2;
    let d4 = (j - j2 + m1) / 2;
    let d5 = (j - j1 - m2) / 2;
    let k_min = 0.max(-d4).max(-d5);
    let k_max = d1.min(d2).min(d3);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom =
            fact(k) * fact(d1 - k) * fact(d2 - k) * fact(d3 - k) * fact(d4 + k) * fact(d5 + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    norm * mags * sum
}
