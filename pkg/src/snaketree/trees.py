"""Contact trees of finite sets of Puiseux polynomials.

Vertices are small integers; ``0`` is always the root ``O``.  An internal
vertex is the wedge of some pair of leaves and carries the valuation of
their difference as its exponent ``E``; leaves carry ``INFINITY``.

Outgoing edges at a vertex ``P`` are named by their far endpoint, so
``tree.children[P]`` is also the ordered list of outgoing edges at ``P``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from itertools import combinations

from .errors import (ConjugationClosureViolated, DuplicateRoot, FieldMismatch, NotRational,
                     NotRightReduced, NonPositiveValuation, ValidationError)
from .exact import QQ, Rational
from .puiseux import INFINITY, PuiseuxPoly, real_less

__all__ = [
    "RootSystem",
    "ContactTree",
    "BasicInterval",
    "WedgeMap",
    "build_contact_tree",
    "build_embedded_trees",
    "wedge",
    "wedge_map",
    "is_planar_order",
]


def _cmp_real(a: PuiseuxPoly, b: PuiseuxPoly) -> int:
    return -1 if real_less(a, b) else 1


class RootSystem:
    """Validated real and non-real roots of ``f``.

    Real roots are sorted by the real order on construction, so label ``i``
    (0-based) always denotes the ``(i+1)``-th smallest real root.  Non-real
    roots keep their input order; repeated entries are merged by adding
    multiplicities.
    """

    def __init__(self, real_roots, complex_roots=()):
        reals = []
        for xi in real_roots:
            _check_valuation(xi)
            if not xi.is_real():
                raise NotRational(f"real root {xi} has a non-rational coefficient")
            reals.append(xi.to_rational_field())
        seen = set()
        for xi in reals:
            if xi in seen:
                raise NotRightReduced(f"real root {xi} is repeated")
            seen.add(xi)
        self.real_roots = tuple(sorted(reals, key=cmp_to_key(_cmp_real)))

        merged: dict = {}
        for item in complex_roots:
            eta, mult = item if isinstance(item, tuple) else (item, 1)
            mult = int(mult)
            if mult < 1:
                raise ValidationError(f"multiplicity {mult} of {eta} is not positive")
            _check_valuation(eta)
            if eta in merged:
                merged[eta] += mult
            else:
                merged[eta] = mult
        fields = {eta.field for eta in merged}
        if len(fields) > 1:
            raise FieldMismatch("non-real roots use different number fields")
        for eta, mult in merged.items():
            bar = eta.conj()
            if bar == eta:
                raise ConjugationClosureViolated(f"{eta} is its own conjugate; list it as a real root")
            if merged.get(bar) != mult:
                raise ConjugationClosureViolated(f"conjugate of {eta} is missing or has another multiplicity")
        self.complex_roots = tuple(merged.items())
        self.field = next(iter(fields)) if fields else QQ

    @property
    def n(self) -> int:
        return len(self.real_roots)

    def conjugate_index(self, l: int) -> int:
        bar = self.complex_roots[l][0].conj()
        for k, (eta, _) in enumerate(self.complex_roots):
            if eta == bar:
                return k
        raise ConjugationClosureViolated("conjugate missing")

    def all_roots(self):
        """``(series, multiplicity, is_real)`` for every leaf, reals first."""
        out = [(xi, 1, True) for xi in self.real_roots]
        out.extend((eta, m, False) for eta, m in self.complex_roots)
        return out

    def __repr__(self):
        return f"RootSystem(real={list(map(str, self.real_roots))}, complex={[(str(e), m) for e, m in self.complex_roots]})"


def _check_valuation(gamma: PuiseuxPoly):
    if not gamma.val() > 0:
        raise NonPositiveValuation(f"root {gamma} does not vanish at x = 0")


@dataclass(frozen=True, order=True)
class BasicInterval:
    """Two successive elements ``lower < upper`` of a totally ordered set."""

    lower: int
    upper: int


class ContactTree:
    """Rooted tree with exponent function and an ordering of children.

    Attributes
    ----------
    parent : tuple
        ``parent[v]``; ``None`` for the root.
    exponent : tuple
        ``E(v)``: ``0`` at the root, ``INFINITY`` at leaves.
    children : tuple of tuples
        Outgoing edges of each vertex.  Among real-marked children the order
        is the planar structure; non-real children come after them in a
        fixed but meaningless order.
    leaf_label : dict
        Leaf vertex to root label.
    multiplicity : dict
        Leaf vertex to multiplicity (1 for real roots).
    real_marker : tuple of bool
        ``True`` on the points of the real subtree.
    """

    def __init__(self, parent, exponent, children, leaf_label, multiplicity=None, real_marker=None):
        self.parent = tuple(parent)
        self.exponent = tuple(exponent)
        self.children = tuple(tuple(c) for c in children)
        self.leaf_label = dict(leaf_label)
        self.multiplicity = dict(multiplicity) if multiplicity else {v: 1 for v in self.leaf_label}
        self.real_marker = tuple(real_marker) if real_marker is not None else (True,) * len(self.parent)
        self.leaf_of = {lab: v for v, lab in self.leaf_label.items()}
        self.depth = [0] * len(self.parent)
        for v in self.bfs():
            if v:
                self.depth[v] = self.depth[self.parent[v]] + 1
        self._clade = {}
        # set by ContactTree.real_part(): vertex of the enclosing tree
        self.embedding: dict | None = None

    root = 0

    def __len__(self):
        return len(self.parent)

    def bfs(self):
        order = [0]
        for v in order:
            order.extend(self.children[v])
        return order

    def is_leaf(self, v: int) -> bool:
        return v in self.leaf_label

    def internal_vertices(self) -> list:
        return [v for v in self.bfs() if v != 0 and v not in self.leaf_label]

    def leaf_order(self) -> list:
        """Leaf labels in planar (depth-first) order."""
        out = []
        stack = [0]
        while stack:
            v = stack.pop()
            if v in self.leaf_label:
                out.append(self.leaf_label[v])
            stack.extend(reversed(self.children[v]))
        return out

    def real_children(self, v: int) -> tuple:
        return tuple(c for c in self.children[v] if self.real_marker[c])

    def ancestors(self, v: int) -> list:
        """Path from ``v`` up to the root, both included."""
        out = [v]
        while self.parent[v] is not None:
            v = self.parent[v]
            out.append(v)
        return out

    def precedes(self, p: int, q: int) -> bool:
        """``p`` lies on the segment from the root to ``q``."""
        while self.depth[q] > self.depth[p]:
            q = self.parent[q]
        return p == q

    def wedge(self, p: int, q: int) -> int:
        while self.depth[p] > self.depth[q]:
            p = self.parent[p]
        while self.depth[q] > self.depth[p]:
            q = self.parent[q]
        while p != q:
            p, q = self.parent[p], self.parent[q]
        return p

    def edge_towards(self, p: int, v: int) -> int:
        """Outgoing edge at ``p`` on the way to its descendant ``v``."""
        if v == p or not self.precedes(p, v):
            raise ValueError(f"{v} is not a strict descendant of {p}")
        while self.parent[v] != p:
            v = self.parent[v]
        return v

    def clade(self, v: int) -> frozenset:
        """Labels of the leaves above ``v``."""
        if v not in self._clade:
            if v in self.leaf_label:
                self._clade[v] = frozenset([self.leaf_label[v]])
            else:
                acc = frozenset()
                for c in self.children[v]:
                    acc |= self.clade(c)
                self._clade[v] = acc
        return self._clade[v]

    def reordered(self, orders: dict) -> "ContactTree":
        """Same tree with the children of some vertices permuted."""
        children = list(self.children)
        for v, new in orders.items():
            if sorted(new) != sorted(children[v]):
                raise ValueError(f"new order at {v} is not a permutation of its children")
            children[v] = tuple(new)
        tree = ContactTree(self.parent, self.exponent, children, self.leaf_label,
                           self.multiplicity, self.real_marker)
        tree.embedding = self.embedding
        return tree

    def canonical_form(self, key=None):
        """Nested tuple independent of vertex numbering and children order."""
        key = key or (lambda label: label)

        def canon(v):
            if v in self.leaf_label:
                return ("leaf", key(self.leaf_label[v]), self.multiplicity[v])
            return (str(self.exponent[v]), tuple(sorted((canon(c) for c in self.children[v]), key=repr)))

        return canon(0)

    def real_part(self) -> "ContactTree":
        """The real subtree with valency-2 points suppressed.

        The result records in ``embedding`` the vertex of ``self`` that each
        of its vertices corresponds to.
        """
        keep = [v for v in self.bfs() if self.real_marker[v]
                and (v == 0 or v in self.leaf_label or len(self.real_children(v)) >= 2)]
        new_id = {v: k for k, v in enumerate(keep)}
        parent, exponent, children = [], [], [[] for _ in keep]
        for v in keep:
            exponent.append(self.exponent[v])
            if v == 0:
                parent.append(None)
                continue
            p = self.parent[v]
            while p not in new_id:
                p = self.parent[p]
            parent.append(new_id[p])
        # children in the planar order of the enclosing tree
        for v in keep:
            for c in self._real_descendant_tops(v, new_id):
                children[new_id[v]].append(new_id[c])
        leaf_label = {new_id[v]: lab for v, lab in self.leaf_label.items() if v in new_id}
        tree = ContactTree(parent, exponent, children, leaf_label)
        tree.embedding = {k: v for v, k in new_id.items()}
        return tree

    def _real_descendant_tops(self, v, kept):
        out = []
        for c in self.real_children(v):
            while c not in kept:
                (c,) = self.real_children(c)
            out.append(c)
        return out

    def __repr__(self):
        return f"ContactTree({self.canonical_form()})"


def _build(series, labels, mults, reals, planar_key):
    m = len(series)
    vals = {}
    for i, j in combinations(range(m), 2):
        d = (series[j] - series[i]).val()
        if d == INFINITY:
            raise DuplicateRoot(f"root {series[i]} is repeated")
        vals[i, j] = vals[j, i] = d

    parent, exponent, children = [None], [Rational(0)], [[]]
    leaf_label, multiplicity, marker = {}, {}, [any(reals)]

    def new_vertex(p, e, is_real):
        parent.append(p)
        exponent.append(e)
        children.append([])
        marker.append(is_real)
        v = len(parent) - 1
        children[p].append(v)
        return v

    def grow(p, idxs):
        if len(idxs) == 1:
            (i,) = idxs
            v = new_vertex(p, INFINITY, reals[i])
            leaf_label[v] = labels[i]
            multiplicity[v] = mults[i]
            return
        low = min(vals[i, j] for i, j in combinations(idxs, 2))
        v = new_vertex(p, low, any(reals[i] for i in idxs))
        classes = []
        for i in idxs:
            for cls in classes:
                if vals[i, cls[0]] > low:
                    cls.append(i)
                    break
            else:
                classes.append([i])
        classes.sort(key=planar_key)
        for cls in classes:
            grow(v, cls)

    if m:
        grow(0, list(range(m)))
    return ContactTree(parent, exponent, children, leaf_label, multiplicity, marker)


def _planar_key(series, reals):
    """Sort key on classes: real classes by the real order, then the rest."""
    real_idx = [i for i in range(len(series)) if reals[i]]
    ranked = sorted(real_idx, key=cmp_to_key(lambda i, j: _cmp_real(series[i], series[j])))
    rank = {i: k for k, i in enumerate(ranked)}

    def key(cls):
        rs = [rank[i] for i in cls if i in rank]
        if rs:
            return (0, min(rs))
        return (1, min(cls))

    return key


def build_contact_tree(roots, labels=None) -> ContactTree:
    """Contact tree of pairwise distinct roots, all vanishing at ``x = 0``.

    Leaf labels default to the position in ``roots``.  When every root has
    rational coefficients the children are ordered by the real order.
    """
    roots = list(roots)
    for g in roots:
        _check_valuation(g)
    if len(set(roots)) < len(roots):
        raise DuplicateRoot("roots must be pairwise distinct")
    labels = list(range(len(roots))) if labels is None else list(labels)
    reals = [g.is_real() for g in roots]
    return _build(roots, labels, [1] * len(roots), reals, _planar_key(roots, reals))


def build_embedded_trees(rs: RootSystem) -> ContactTree:
    """Complex contact tree ``T_C`` with the real subtree marked.

    Real root ``i`` is labelled ``i``; non-real root ``l`` is labelled
    ``n + l`` and its leaf carries the multiplicity.
    """
    entries = rs.all_roots()
    series = [g for g, _, _ in entries]
    mults = [m for _, m, _ in entries]
    reals = [r for _, _, r in entries]
    return _build(series, list(range(len(series))), mults, reals, _planar_key(series, reals))


def wedge(tree: ContactTree, p: int, q: int) -> int:
    return tree.wedge(p, q)


class WedgeMap:
    """Bijection from basic intervals of leaves to basic intervals of edges.

    ``forward[BasicInterval(a, b)]`` is ``(P, BasicInterval(e, e'))`` for
    consecutive leaf labels ``a, b``; ``inverse[(P, k)]`` is the leaf
    interval whose image is the ``k``-th edge interval (0-based) at ``P``.
    """

    def __init__(self, tree: ContactTree, forward: dict):
        self.tree = tree
        self.forward = forward
        self.inverse = {}
        for leaves, (p, edges) in forward.items():
            k = tree.children[p].index(edges.lower)
            self.inverse[p, k] = leaves

    def image(self, interval: BasicInterval):
        return self.forward[interval]

    def preimage(self, p: int, k: int) -> BasicInterval:
        return self.inverse[p, k]

    def target(self) -> list:
        out = []
        for p in self.tree.internal_vertices():
            ch = self.tree.real_children(p)
            out.extend((p, BasicInterval(ch[k], ch[k + 1])) for k in range(len(ch) - 1))
        return out

    def is_bijective(self) -> bool:
        images = list(self.forward.values())
        return (len(set(images)) == len(images)
                and set(images) == set(self.target())
                and len(images) == len(self.target()))


def wedge_map(tree: ContactTree) -> WedgeMap:
    """Wedge map of the real planar structure of ``tree``."""
    order = [lab for lab in tree.leaf_order() if tree.real_marker[tree.leaf_of[lab]]]
    forward = {}
    for a, b in zip(order, order[1:]):
        va, vb = tree.leaf_of[a], tree.leaf_of[b]
        p = tree.wedge(va, vb)
        forward[BasicInterval(a, b)] = (p, BasicInterval(tree.edge_towards(p, va), tree.edge_towards(p, vb)))
    return WedgeMap(tree, forward)


def is_planar_order(tree: ContactTree, order) -> bool:
    """Whether a total order on the leaves comes from a planar structure.

    ``order`` lists leaf labels from smallest to largest.  For every two
    incomparable vertices, all leaves above one must precede all leaves
    above the other.
    """
    order = list(order)
    pos = {lab: k for k, lab in enumerate(order)}
    if len(pos) != len(order) or set(pos) != set(tree.leaf_of):
        raise ValueError("order must list every leaf exactly once")
    span = {}
    for v in range(len(tree)):
        ps = [pos[lab] for lab in tree.clade(v)]
        span[v] = (min(ps), max(ps))
    for p, q in combinations(range(len(tree)), 2):
        if tree.precedes(p, q) or tree.precedes(q, p):
            continue
        (lo_p, hi_p), (lo_q, hi_q) = span[p], span[q]
        if not (hi_p < lo_q or hi_q < lo_p):
            return False
    return True

