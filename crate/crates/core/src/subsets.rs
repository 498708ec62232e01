//! Subset enumeration in increasing size, lexicographic within a size.

/// Iterator over the subsets of `items` with at most `max_size` elements.
///
/// Subsets are produced smallest first; within one size they follow the
/// lexicographic order of positions in `items`, so a sorted input gives
/// lexicographic order by value.
#[derive(Debug, Clone)]
pub struct Subsets<'a> {
    items: &'a [usize],
    max_size: usize,
    size: usize,
    positions: Vec<usize>,
    exhausted: bool,
}

pub fn subsets_up_to(items: &[usize], max_size: usize) -> Subsets<'_> {
    Subsets {
        items,
        max_size: max_size.min(items.len()),
        size: 0,
        positions: Vec::new(),
        exhausted: false,
    }
}

impl Iterator for Subsets<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.exhausted {
            return None;
        }
        let out = self.positions.iter().map(|&p| self.items[p]).collect();
        self.advance();
        Some(out)
    }
}

impl Subsets<'_> {
    fn advance(&mut self) {
        let n = self.items.len();
        let k = self.size;
        // rightmost position that can still move
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.positions[i] < n - k + i {
                self.positions[i] += 1;
                for j in i + 1..k {
                    self.positions[j] = self.positions[j - 1] + 1;
                }
                return;
            }
        }
        if self.size < self.max_size {
            self.size += 1;
            self.positions = (0..self.size).collect();
        } else {
            self.exhausted = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_in_order() {
        let all: Vec<Vec<usize>> = subsets_up_to(&[1, 4, 7], 3).collect();
        assert_eq!(
            all,
            vec![
                vec![],
                vec![1],
                vec![4],
                vec![7],
                vec![1, 4],
                vec![1, 7],
                vec![4, 7],
                vec![1, 4, 7]
            ]
        );
    }

    #[test]
    fn respects_cap_and_empty_input() {
        assert_eq!(subsets_up_to(&[0, 1, 2, 3], 1).count(), 5);
        assert_eq!(subsets_up_to(&[], 3).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(subsets_up_to(&[0, 1, 2, 3, 4], 5).count(), 32);
        assert_eq!(subsets_up_to(&[0, 1, 2, 3, 4], 2).count(), 1 + 5 + 10);
    }
}
