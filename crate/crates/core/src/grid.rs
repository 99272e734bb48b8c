use serde::{Deserialize, Serialize};

/// Dense bidder-by-item table stored row-major (one row per bidder).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    bidders: usize,
    items: usize,
    cells: Vec<T>,
}

impl<T> Grid<T> {
    /// Builds a grid by evaluating `f(bidder, item)` for every cell.
    pub fn from_fn(bidders: usize, items: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut cells = Vec::with_capacity(bidders * items);
        for i in 0..bidders {
            for j in 0..items {
                cells.push(f(i, j));
            }
        }
        Grid { bidders, items, cells }
    }

    /// Wraps a row-major vector. Panics if the length does not match.
    pub fn from_vec(bidders: usize, items: usize, cells: Vec<T>) -> Self {
        assert_eq!(cells.len(), bidders * items, "grid shape mismatch");
        Grid { bidders, items, cells }
    }

    pub fn bidders(&self) -> usize {
        self.bidders
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, bidder: usize, item: usize) -> &T {
        debug_assert!(bidder < self.bidders && item < self.items);
        &self.cells[bidder * self.items + item]
    }

    pub fn get_mut(&mut self, bidder: usize, item: usize) -> &mut T {
        debug_assert!(bidder < self.bidders && item < self.items);
        &mut self.cells[bidder * self.items + item]
    }

    /// Cells of one item, in bidder order.
    pub fn column(&self, item: usize) -> impl Iterator<Item = &T> + '_ {
        self.cells.iter().skip(item).step_by(self.items.max(1))
    }

    pub fn row(&self, bidder: usize) -> &[T] {
        &self.cells[bidder * self.items..(bidder + 1) * self.items]
    }

    /// Iterates `(bidder, item, cell)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let items = self.items;
        self.cells
            .iter()
            .enumerate()
            .map(move |(k, c)| (k / items, k % items, c))
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn map<U>(&self, mut f: impl FnMut(usize, usize, &T) -> U) -> Grid<U> {
        Grid::from_fn(self.bidders, self.items, |i, j| f(i, j, self.get(i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_walks_bidders() {
        let g = Grid::from_fn(3, 2, |i, j| i * 10 + j);
        assert_eq!(g.column(1).copied().collect::<Vec<_>>(), vec![1, 11, 21]);
        assert_eq!(g.row(2), &[20, 21]);
        assert_eq!(*g.get(1, 0), 10);
    }

    #[test]
    fn iter_reports_coordinates() {
        let g = Grid::from_fn(2, 3, |i, j| (i, j));
        assert!(g.iter().all(|(i, j, c)| *c == (i, j)));
    }
}
