use crate::spectral::{is_undefined, UNDEFINED};

/// Lower median: the `⌈d/2⌉`-th smallest of `d` values. `None` if empty.
pub fn lower_median<T: Copy + PartialOrd>(values: &mut [T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("values are totally ordered"));
    Some(values[(values.len() - 1) / 2])
}

/// Lower median of the defined entries, plus how many were undefined.
pub fn median_defined(values: &[f64]) -> (f64, usize) {
    let mut defined: Vec<f64> = values.iter().copied().filter(|v| !is_undefined(*v)).collect();
    let skipped = values.len() - defined.len();
    (lower_median(&mut defined).unwrap_or(UNDEFINED), skipped)
}

/// Elementwise median over equally shaped `rows × cols` matrices.
pub fn elementwise_median(samples: &[&Vec<Vec<f64>>]) -> (Vec<Vec<f64>>, Vec<Vec<usize>>) {
    let rows = samples.first().map_or(0, |s| s.len());
    let mut values = Vec::with_capacity(rows);
    let mut skipped = Vec::with_capacity(rows);
    let mut buf = Vec::with_capacity(samples.len());
    for r in 0..rows {
        let cols = samples[0][r].len();
        let mut vrow = Vec::with_capacity(cols);
        let mut srow = Vec::with_capacity(cols);
        for c in 0..cols {
            buf.clear();
            buf.extend(samples.iter().map(|s| s[r][c]));
            let (m, k) = median_defined(&buf);
            vrow.push(m);
            srow.push(k);
        }
        values.push(vrow);
        skipped.push(srow);
    }
    (values, skipped)
}

pub fn vector_median(samples: &[&Vec<f64>]) -> Vec<f64> {
    let len = samples.first().map_or(0, |s| s.len());
    (0..len)
        .map(|i| median_defined(&samples.iter().map(|s| s[i]).collect::<Vec<_>>()).0)
        .collect()
}

pub fn count_median(samples: &[&Vec<usize>]) -> Vec<usize> {
    let len = samples.first().map_or(0, |s| s.len());
    (0..len)
        .map(|i| lower_median(&mut samples.iter().map(|s| s[i]).collect::<Vec<_>>()).unwrap_or(0))
        .collect()
}
