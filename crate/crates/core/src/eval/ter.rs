use super::{EvalError, MatchOptions};

/// Word-level Levenshtein distance with unit costs.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = diag + usize::from(x != y);
            diag = row[j + 1];
            row[j + 1] = sub.min(row[j] + 1).min(diag + 1);
        }
    }
    row[b.len()]
}

const MAX_SHIFT_SPAN: usize = 10;

/// Edits to turn `hyp` into `reference`. With `shifts`, a greedy pass first
/// moves hypothesis blocks that occur verbatim in the reference, one edit
/// per move, while a move lowers the total.
pub fn ter_edits<T: PartialEq + Clone>(hyp: &[T], reference: &[T], shifts: bool) -> usize {
    let mut current = hyp.to_vec();
    let mut dist = edit_distance(&current, reference);
    let mut moves = 0;
    while shifts && dist > 1 {
        let mut best: Option<(usize, Vec<T>)> = None;
        for start in 0..current.len() {
            for len in 1..=MAX_SHIFT_SPAN.min(current.len() - start) {
                let span = &current[start..start + len];
                if !reference.windows(len).any(|w| w == span) {
                    break;
                }
                let mut rest = current[..start].to_vec();
                rest.extend_from_slice(&current[start + len..]);
                for dest in 0..=rest.len() {
                    if dest == start {
                        continue;
                    }
                    let mut moved = rest[..dest].to_vec();
                    moved.extend_from_slice(span);
                    moved.extend_from_slice(&rest[dest..]);
                    let d = edit_distance(&moved, reference);
                    if d + 1 < best.as_ref().map_or(dist, |b| b.0 + 1) {
                        best = Some((d, moved));
                    }
                }
            }
        }
        match best {
            Some((d, moved)) => {
                current = moved;
                dist = d;
                moves += 1;
            }
            None => break,
        }
    }
    moves + dist
}

/// Fewest edits against any reference over the average reference length.
pub fn ter<H: AsRef<str>, R: AsRef<str>>(
    hyp: &[H],
    refs: &[Vec<R>],
    opts: &MatchOptions,
    shifts: bool,
) -> Result<f64, EvalError> {
    let (edits, avg) = ter_parts(hyp, refs, opts, shifts)?;
    Ok(edits as f64 / avg)
}

pub(crate) fn ter_parts<H: AsRef<str>, R: AsRef<str>>(
    hyp: &[H],
    refs: &[Vec<R>],
    opts: &MatchOptions,
    shifts: bool,
) -> Result<(usize, f64), EvalError> {
    if refs.is_empty() {
        return Err(EvalError::NoReferences);
    }
    let hyp = opts.prepare(hyp);
    let refs: Vec<Vec<String>> = refs.iter().map(|r| opts.prepare(r)).collect();
    let avg = refs.iter().map(Vec::len).sum::<usize>() as f64 / refs.len() as f64;
    if avg == 0.0 {
        return Err(EvalError::EmptyReference);
    }
    let edits = refs
        .iter()
        .map(|r| ter_edits(&hyp, r, shifts))
        .min()
        .unwrap_or(0);
    Ok((edits, avg))
}
