"""
Link-cut trees on splay trees.

Every represented tree is split into preferred paths; each path is kept in a
splay tree ordered by depth, and the root of each splay tree carries a
path-parent pointer into the path above it. Rerooting reverses a whole path,
which is recorded as a lazy ``rev`` flag and pushed down on the way to a node.

Next to the splay bookkeeping every node keeps the set of its tree neighbors.
Relative to the current root, a node's children are its neighbors minus its
represented parent; the set never needs to be touched by a reroot.

Splaying, rotation and access run on every walk step, so they work on local
list references and drive the rotations from the ancestor chain collected
while clearing reversals, instead of re-testing for the splay root.
"""

from dataclasses import dataclass

from core.exceptions import ForestError

NIL = -1


@dataclass(frozen=True)
class PathMassProfile:
    """Vertices along a tree path with the mass hanging off each of them"""

    vertices: tuple
    masses: tuple

    def __iter__(self):
        return iter(zip(self.vertices, self.masses))

    def __len__(self):
        return len(self.vertices)

    @property
    def total(self):
        return sum(self.masses)


class DynamicForest:
    """
    Forest over vertices ``0..n-1`` supporting link, cut, reroot and path queries.

    ``link`` trusts its caller to join two different trees; with
    ``checked=True`` it verifies that first and raises ForestError.
    """

    def __init__(self, masses, checked=False):
        n = len(masses)
        self.masses = [int(m) for m in masses]
        self.checked = checked
        self._left = [NIL] * n
        self._right = [NIL] * n
        self._parent = [NIL] * n
        self._rev = [False] * n
        self.neighbors = [set() for _ in range(n)]
        self.edge_count = 0

    def __len__(self):
        return len(self.masses)

    # Splay-tree bookkeeping

    def _push(self, x):
        rev = self._rev
        if rev[x]:
            left, right = self._left, self._right
            a, b = left[x], right[x]
            left[x], right[x] = b, a
            if a != NIL:
                rev[a] = not rev[a]
            if b != NIL:
                rev[b] = not rev[b]
            rev[x] = False

    def _rotate(self, x, p, attached):
        """Lift ``x`` over ``p``; ``attached`` says ``p`` has a splay parent"""
        left, right, parent = self._left, self._right, self._parent
        above = parent[p]
        if attached:
            if left[above] == p:
                left[above] = x
            else:
                right[above] = x
        parent[x] = above
        if left[p] == x:
            b = right[x]
            left[p] = b
            right[x] = p
        else:
            b = left[x]
            right[p] = b
            left[x] = p
        if b != NIL:
            parent[b] = p
        parent[p] = x

    def _splay(self, x):
        left, right, parent, rev = self._left, self._right, self._parent, self._rev

        # Splay ancestors of x, nearest first
        chain = []
        y = x
        p = parent[y]
        while p != NIL and (left[p] == y or right[p] == y):
            chain.append(p)
            y = p
            p = parent[y]

        # Pending reversals above x must land before any rotation
        for y in reversed(chain):
            if rev[y]:
                a, b = left[y], right[y]
                left[y], right[y] = b, a
                if a != NIL:
                    rev[a] = not rev[a]
                if b != NIL:
                    rev[b] = not rev[b]
                rev[y] = False
        if rev[x]:
            a, b = left[x], right[x]
            left[x], right[x] = b, a
            if a != NIL:
                rev[a] = not rev[a]
            if b != NIL:
                rev[b] = not rev[b]
            rev[x] = False

        rotate = self._rotate
        depth = len(chain)
        i = 0
        while i + 1 < depth:
            p, g = chain[i], chain[i + 1]
            attached = i + 2 < depth
            if (left[g] == p) == (left[p] == x):
                rotate(p, g, attached)
                rotate(x, p, attached)
            else:
                rotate(x, p, True)
                rotate(x, g, attached)
            i += 2
        if i < depth:
            rotate(x, chain[i], False)

    def _access(self, x):
        """Make root..x the preferred path; x ends up as its splay root"""
        right, parent = self._right, self._parent
        splay = self._splay
        last = NIL
        y = x
        while y != NIL:
            splay(y)
            right[y] = last
            last = y
            y = parent[y]
        splay(x)

    # Represented-forest operations

    def reroot(self, u):
        self._access(u)
        self._rev[u] = not self._rev[u]

    def find_root(self, u):
        self._access(u)
        left = self._left
        y = u
        while True:
            self._push(y)
            if left[y] == NIL:
                break
            y = left[y]
        self._splay(y)
        return y

    def connected(self, u, v):
        return u == v or self.find_root(u) == self.find_root(v)

    def link(self, u, v):
        if self.checked and self.connected(u, v):
            raise ForestError(f"link({u}, {v}): vertices already share a tree")
        self.reroot(u)
        self._parent[u] = v
        self.neighbors[u].add(v)
        self.neighbors[v].add(u)
        self.edge_count += 1

    def cut(self, u, v):
        if v not in self.neighbors[u]:
            raise ForestError(f"cut({u}, {v}): not a tree edge")
        self.reroot(u)
        self._access(v)
        # Path u..v has two nodes, so u is exactly v's left child
        if self._left[v] != u:
            raise ForestError(f"cut({u}, {v}): corrupted splay structure")
        self._left[v] = NIL
        self._parent[u] = NIL
        self.neighbors[u].discard(v)
        self.neighbors[v].discard(u)
        self.edge_count -= 1

    def has_edge(self, u, v):
        return v in self.neighbors[u]

    def represented_parent(self, u):
        """Parent of ``u`` relative to the current root, or None at the root"""
        self._access(u)
        y = self._left[u]
        if y == NIL:
            return None
        while True:
            self._push(y)
            if self._right[y] == NIL:
                break
            y = self._right[y]
        self._splay(y)
        return y

    def children(self, u):
        parent = self.represented_parent(u)
        return {w for w in self.neighbors[u] if w != parent}

    def tree_path(self, u, v):
        """Vertices of the unique path from ``u`` to ``v``"""
        if u == v:
            return [u]
        self.reroot(u)
        self._access(v)

        # In-order walk of v's splay tree lists root .. v; the root is u
        # exactly when both share a tree
        left, right, rev = self._left, self._right, self._rev
        path = []
        stack = []
        node = v
        while stack or node != NIL:
            while node != NIL:
                if rev[node]:
                    self._push(node)
                stack.append(node)
                node = left[node]
            node = stack.pop()
            path.append(node)
            node = right[node]
        if path[0] != u:
            raise ForestError(f"tree_path({u}, {v}): vertices are in different trees")
        return path

    def component(self, u):
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for w in self.neighbors[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def path_mass_profile(self, u, v):
        """
        Hanging masses along the path u..v.

        One depth-first pass from ``u`` records the first and last time each
        node is entered; the mass of a subtree is the mass accumulated between
        those two times. Along the path, a vertex's hanging mass is its subtree
        mass minus that of the next path vertex.
        """
        path = self.tree_path(u, v)
        masses = self.masses
        neighbors = self.neighbors

        enter = {}
        leave = {}
        accumulated = [0]
        stack = [(u, NIL)]
        while stack:
            x, parent = stack.pop()
            if x >= 0:
                enter[x] = len(accumulated) - 1
                accumulated.append(accumulated[-1] + masses[x])
                stack.append((~x, parent))
                for w in neighbors[x]:
                    if w != parent:
                        stack.append((w, x))
            else:
                leave[~x] = len(accumulated) - 1

        def subtree(x):
            return accumulated[leave[x]] - accumulated[enter[x]]

        hanging = [subtree(path[i]) - subtree(path[i + 1]) for i in range(len(path) - 1)]
        hanging.append(subtree(path[-1]))
        return PathMassProfile(tuple(path), tuple(hanging))

    def tree_edges(self):
        """All tree edges as ``(u, v)`` with ``u < v``"""
        return sorted((u, w) for u, ws in enumerate(self.neighbors) for w in ws if u < w)
