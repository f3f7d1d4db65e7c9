//! Disjoint-set forest used to track strand identity through a presentation.

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new() -> Self {
        Self {
            parent: Vec::new(),
            rank: Vec::new(),
        }
    }

    pub(crate) fn make_set(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.rank.push(0);
        id
    }

    pub(crate) fn len(&self) -> usize {
        self.parent.len()
    }

    pub(crate) fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return a;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] = self.rank[a].saturating_add(1);
        }
        a
    }

    pub(crate) fn count_roots(&mut self) -> usize {
        (0..self.len()).filter(|&n| self.find(n) == n).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unions_merge_roots() {
        let mut uf = UnionFind::new();
        let ids: Vec<_> = (0..5).map(|_| uf.make_set()).collect();
        assert_eq!(uf.count_roots(), 5);
        uf.union(ids[0], ids[1]);
        uf.union(ids[3], ids[4]);
        uf.union(ids[1], ids[4]);
        assert_eq!(uf.count_roots(), 2);
        assert_eq!(uf.find(ids[0]), uf.find(ids[3]));
        assert_ne!(uf.find(ids[2]), uf.find(ids[0]));
    }
}
