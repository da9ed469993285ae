use super::{Atom, ShiftProgram};
use crate::Result;

/// Rewrites a program with the composition laws of the shift operators:
///
/// * `σ_1 → σ`;
/// * `σ_{k_1}, …, σ_{k_n}` with `k_1 ≤ … ≤ k_n`, followed by `k_n − 1`
///   copies of σ, becomes `σ^{k_n + n − 1}`. With every `k_i = 2` this is
///   `σ_2^m, σ → σ^{m+1}`.
///
/// The output is extensionally equal to the input on every string deep
/// enough for both. The generator, if any, is expanded.
pub fn normalize_program(program: &ShiftProgram) -> Result<ShiftProgram> {
    let mut atoms: Vec<Atom> = program
        .atoms()?
        .into_iter()
        .map(|a| if a == Atom::Gen(1) { Atom::Sigma } else { a })
        .collect();
    while let Some((start, end, power)) = find_collapsible(&atoms) {
        atoms.splice(start..end, std::iter::repeat_n(Atom::Sigma, power));
    }
    Ok(ShiftProgram::new(atoms))
}

/// Leftmost run of generalized shifts that the sigmas after it absorb:
/// returns the replaced range and the resulting power of σ.
fn find_collapsible(atoms: &[Atom]) -> Option<(usize, usize, usize)> {
    let mut i = 0;
    while i < atoms.len() {
        if atoms[i] == Atom::Sigma {
            i += 1;
            continue;
        }
        let run_end = i + atoms[i..]
            .iter()
            .take_while(|a| matches!(a, Atom::Gen(_)))
            .count();
        let sigmas = atoms[run_end..]
            .iter()
            .take_while(|a| **a == Atom::Sigma)
            .count();
        let index = |j: usize| match atoms[j] {
            Atom::Gen(m) => m,
            Atom::Sigma => unreachable!(),
        };
        let last = index(run_end - 1);
        if sigmas >= last - 1 {
            let mut start = run_end - 1;
            while start > i && index(start - 1) <= index(start) {
                start -= 1;
            }
            let n = run_end - start;
            return Some((start, run_end + last - 1, last + n - 1));
        }
        i = run_end + sigmas;
    }
    None
}
