"""Finite permutation groups by full element enumeration.

Groups are stored as the lexicographically sorted list of all element
image tuples together with a composition table, which keeps every
downstream index (conjugacy classes, cosets, subgroups, reports)
reproducible byte for byte.  The identity is always element 0: any
non-identity permutation first differs from the identity at some point
it moves, and must move it upward.  No Schreier-Sims machinery; the
intended scale is |G| in the hundreds, with a hard configurable cap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from . import _kernels
from .errors import (
    BudgetExceededError,
    GroupSizeError,
    NotASubgroupError,
    ParseError,
)

DEFAULT_MAX_ORDER = 20000
DEFAULT_SUBGROUP_BUDGET = 500_000


class Permutation:
    """A permutation of {0..n-1}, stored by its image tuple.

    Composition is function composition: ``(a * b)(x) == a(b(x))``.
    """

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on 0..{len(images) - 1}: {images}")
        self.images = images

    @property
    def degree(self):
        return len(self.images)

    @classmethod
    def identity(cls, degree):
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree, cycles):
        """Build from disjoint cycles given as iterables of points."""
        images = list(range(degree))
        seen = set()
        for cycle in cycles:
            cycle = list(cycle)
            for p in cycle:
                if not 0 <= p < degree:
                    raise ValueError(f"point {p} out of range for degree {degree}")
                if p in seen:
                    raise ValueError(f"point {p} repeated across cycles")
                seen.add(p)
            for i, p in enumerate(cycle):
                images[p] = cycle[(i + 1) % len(cycle)]
        return cls(images)

    def __call__(self, x):
        return self.images[x]

    def __mul__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(self.images[j] for j in other.images)

    def inverse(self):
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def cycles(self):
        """Disjoint cycles (fixed points omitted), each starting at its minimum."""
        out, seen = [], set()
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cycle, x = [], start
            while x not in seen:
                seen.add(x)
                cycle.append(x)
                x = self.images[x]
            out.append(cycle)
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other):
        return self.images < other.images

    def __str__(self):
        return cycle_string(self)

    def __repr__(self):
        return f"Permutation({list(self.images)})"


def cycle_string(perm):
    """Disjoint-cycle notation, fixed points omitted; identity is '()'."""
    cycles = perm.cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycles)


_CYCLE_TOKEN = re.compile(r"\(([^()]*)\)")


def parse_cycles(text, degree):
    """Parse disjoint-cycle notation like ``(0 1)(2 3)`` at the given degree."""
    text = text.strip()
    if not text:
        raise ValueError("empty permutation")
    stripped = _CYCLE_TOKEN.sub("", text)
    if stripped.strip():
        raise ValueError(f"malformed cycle token near {stripped.strip()[:20]!r}")
    cycles = []
    for body in _CYCLE_TOKEN.findall(text):
        if not body.strip():
            continue
        try:
            points = [int(tok) for tok in body.split()]
        except ValueError as exc:
            raise ValueError(f"malformed cycle token: ({body})") from exc
        if len(points) < 2:
            raise ValueError(f"cycle ({body}) must name at least two points")
        cycles.append(points)
    return Permutation.from_cycles(degree, cycles)


class PermutationGroup:
    """All elements of a finite permutation group, in canonical order.

    ``elements[0]`` is the identity.  ``table[i, j]`` indexes the
    composition ``elements[i] * elements[j]``; it and the inverse array
    are built lazily through the kernel backend.
    """

    def __init__(self, degree, generators, elements):
        self.degree = degree
        self.generators = list(generators)
        self.elements = list(elements)
        self.order = len(elements)
        self._images = np.array(
            [e.images for e in elements], dtype=np.int32
        ).reshape(self.order, degree)
        self._index = {self._images[i].tobytes(): i for i in range(self.order)}
        self._table = None
        self._inv = None
        self._classes = None
        self._all_subgroups = None

    @property
    def table(self):
        if self._table is None:
            self._table = _kernels.mul_table(self._images)
        return self._table

    @property
    def inverses(self):
        if self._inv is None:
            inv = np.empty(self.order, dtype=np.int64)
            for i in range(self.order):
                perm = self.elements[i].inverse()
                inv[i] = self.index_of(perm)
            self._inv = inv
        return self._inv

    def index_of(self, perm):
        key = np.asarray(perm.images, dtype=np.int32).tobytes()
        idx = self._index.get(key)
        if idx is None:
            raise KeyError(f"{perm} is not an element of this group")
        return idx

    def mul(self, i, j):
        return int(self.table[i, j])

    def inv(self, i):
        return int(self.inverses[i])

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a sorted tuple of element indices into the parent."""

    parent: PermutationGroup
    elements: tuple

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, idx):
        return idx in set(self.elements)

    def permutations(self):
        return [self.parent.elements[i] for i in self.elements]

    def indices(self):
        return np.asarray(self.elements, dtype=np.int64)

    def __repr__(self):
        return f"Subgroup(order={self.order}, elements={list(self.elements)})"


@dataclass(frozen=True)
class ConjugacyClassPartition:
    """Partition of a group into conjugacy classes.

    Classes are numbered by their minimal element index, so class 0 is
    the identity's class.
    """

    group: PermutationGroup
    class_of: np.ndarray
    representatives: tuple
    class_sizes: tuple

    @property
    def num_classes(self):
        return len(self.representatives)


@dataclass(frozen=True)
class CosetSpace:
    """Left cosets gH with the left-translation action of G.

    ``action[g, c]`` is the coset index of g * coset_reps[c] * H; coset 0
    is H itself.  ``coset_of[x]`` maps an element index to its coset.
    """

    subgroup: Subgroup
    coset_reps: tuple
    action: np.ndarray
    coset_of: np.ndarray

    @property
    def num_cosets(self):
        return len(self.coset_reps)


def generate_group(degree, generators, max_order=DEFAULT_MAX_ORDER):
    """Close a generator list under composition.

    Raises GroupSizeError as soon as the closure exceeds ``max_order``.
    """
    for g in generators:
        if g.degree != degree:
            raise ValueError(f"generator {g} has degree {g.degree}, expected {degree}")
    ident = Permutation.identity(degree)
    elems = {ident.images: ident}
    frontier = [ident]
    gens = list(generators)
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                for y in (x * g, g * x):
                    if y.images not in elems:
                        elems[y.images] = y
                        fresh.append(y)
                        if len(elems) > max_order:
                            raise GroupSizeError(
                                f"closure exceeds max order {max_order} "
                                f"(degree {degree}, {len(gens)} generators)"
                            )
        frontier = fresh
    ordered = [elems[key] for key in sorted(elems)]
    return PermutationGroup(degree, generators, ordered)


def conjugacy_classes(G):
    """Partition of G by g ~ x g x^{-1}; cached on the group."""
    if G._classes is None:
        class_of = _kernels.conjugacy_partition(G.table, G.inverses)
        num = int(class_of.max()) + 1
        reps, sizes = [], []
        for c in range(num):
            members = np.nonzero(class_of == c)[0]
            reps.append(int(members.min()))
            sizes.append(len(members))
        G._classes = ConjugacyClassPartition(
            group=G,
            class_of=class_of,
            representatives=tuple(reps),
            class_sizes=tuple(sizes),
        )
    return G._classes


def subgroup_generate(G, gens):
    """Smallest subgroup of G containing the given element indices."""
    seed = np.asarray(sorted(set(int(g) for g in gens)), dtype=np.int64)
    if seed.size and (seed.min() < 0 or seed.max() >= G.order):
        raise ValueError("generator index out of range")
    members = _kernels.closure(G.table, seed)
    return Subgroup(parent=G, elements=tuple(int(i) for i in members))


def subgroup_from_indices(G, indices):
    """Validate that an explicit element-index set is a subgroup of G."""
    idx = sorted(set(int(i) for i in indices))
    if idx and (idx[0] < 0 or idx[-1] >= G.order):
        raise NotASubgroupError("element index out of range for the parent group")
    if 0 not in idx:
        raise NotASubgroupError("identity missing from subgroup element set")
    idx_set = set(idx)
    for i in idx:
        for j in idx:
            if int(G.table[i, j]) not in idx_set:
                raise NotASubgroupError(
                    f"not closed: element {i} * element {j} falls outside the set"
                )
    return Subgroup(parent=G, elements=tuple(idx))


def coset_space(G, H):
    """Left coset space G/H with the left-translation action table."""
    _check_subgroup(G, H)
    h_idx = H.indices()
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in range(G.order):
        if coset_of[x] < 0:
            coset_of[np.asarray(G.table[x, h_idx], dtype=np.int64)] = len(reps)
            reps.append(x)
    action = coset_of[G.table[:, np.asarray(reps, dtype=np.int64)]]
    return CosetSpace(
        subgroup=H,
        coset_reps=tuple(reps),
        action=action,
        coset_of=coset_of,
    )


def conjugate_subgroup(G, H, g):
    """The subgroup g H g^{-1}."""
    g_inv = G.inv(g)
    conj = G.table[g, G.table[H.indices(), g_inv]]
    return Subgroup(parent=G, elements=tuple(int(i) for i in np.sort(conj)))


def are_conjugate_subgroups(G, H1, H2):
    """True iff some inner automorphism maps H1 onto H2 as a set."""
    _check_subgroup(G, H1)
    _check_subgroup(G, H2)
    if H1.order != H2.order:
        return False
    target = np.asarray(H2.elements, dtype=np.int64)
    h1 = H1.indices()
    for g in range(G.order):
        conj = np.sort(G.table[g, G.table[h1, G.inv(g)]])
        if np.array_equal(conj, target):
            return True
    return False


def _grow_subgroups(G, keep_order, budget):
    """DFS over closed subsets, adding one generator at a time.

    ``keep_order``: predicate on a subgroup order saying whether to record
    it; growth is pruned to orders dividing ``G.order`` (and dividing the
    target order when searching for a fixed order).  The budget counts
    closure computations.
    """
    table = G.table
    trivial = (0,)
    visited = {trivial}
    found = {} if not keep_order(1) else {trivial: None}
    stack = [trivial]
    closures = 0
    while stack:
        current = stack.pop()
        cur_set = set(current)
        for g in range(1, G.order):
            if g in cur_set:
                continue
            closures += 1
            if closures > budget:
                raise BudgetExceededError(
                    f"subgroup enumeration exceeded budget of {budget} closures"
                )
            grown = tuple(
                int(i)
                for i in _kernels.closure(
                    table, np.asarray(current + (g,), dtype=np.int64)
                )
            )
            if grown in visited:
                continue
            visited.add(grown)
            if keep_order(len(grown)):
                found[grown] = None
            stack.append(grown)
    return [Subgroup(parent=G, elements=e) for e in sorted(found)]


def subgroups_of_order(G, m, budget=DEFAULT_SUBGROUP_BUDGET):
    """All subgroups of order m, deduplicated, in deterministic order.

    Non-divisors of |G| yield an empty list (Lagrange), not an error.
    """
    if m < 1 or G.order % m:
        return []
    if m == 1:
        return [Subgroup(parent=G, elements=(0,))]
    # prune growth to subgroups whose order divides m (they sit inside a
    # candidate of order m by Lagrange), plus the trivial start
    table = G.table
    visited = {(0,)}
    found = set()
    stack = [(0,)]
    closures = 0
    while stack:
        current = stack.pop()
        cur_set = set(current)
        for g in range(1, G.order):
            if g in cur_set:
                continue
            closures += 1
            if closures > budget:
                raise BudgetExceededError(
                    f"subgroup search exceeded budget of {budget} closures"
                )
            grown = tuple(
                int(i)
                for i in _kernels.closure(
                    table, np.asarray(current + (g,), dtype=np.int64)
                )
            )
            if grown in visited or len(grown) > m or m % len(grown):
                continue
            visited.add(grown)
            if len(grown) == m:
                found.add(grown)
            else:
                stack.append(grown)
    return [Subgroup(parent=G, elements=e) for e in sorted(found)]


def all_subgroups(G, budget=DEFAULT_SUBGROUP_BUDGET):
    """Every subgroup of G, deterministic order; cached on the group."""
    if G._all_subgroups is None:
        G._all_subgroups = _grow_subgroups(G, lambda n: True, budget)
    return G._all_subgroups


def _check_subgroup(G, H):
    if H.parent is not G:
        raise NotASubgroupError("subgroup belongs to a different group object")


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_group_text(text, max_order=DEFAULT_MAX_ORDER, path=None):
    """Group file: ``degree n`` then one generator per line in cycle notation."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty group file", path=path)
    lineno, header = lines[0]
    m = re.fullmatch(r"degree\s+(\d+)", header)
    if not m:
        raise ParseError(f"expected 'degree n' header, got {header!r}", line=lineno, path=path)
    degree = int(m.group(1))
    if degree < 1:
        raise ParseError("degree must be positive", line=lineno, path=path)
    gens = []
    for lineno, line in lines[1:]:
        try:
            gens.append(parse_cycles(line, degree))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, path=path) from exc
    return generate_group(degree, gens, max_order=max_order)


def load_group_file(path, max_order=DEFAULT_MAX_ORDER):
    with open(path, encoding="utf-8") as fh:
        return parse_group_text(fh.read(), max_order=max_order, path=path)


def parse_subgroup_text(text, G, path=None):
    """Subgroup file: one element per line in cycle notation; must be closed."""
    indices = []
    for lineno, line in _content_lines(text):
        try:
            perm = parse_cycles(line, G.degree)
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, path=path) from exc
        try:
            indices.append(G.index_of(perm))
        except KeyError as exc:
            raise NotASubgroupError(
                f"{path or 'subgroup file'}:{lineno}: {perm} is not in the group"
            ) from exc
    indices.append(0)
    return subgroup_from_indices(G, indices)


def load_subgroup_file(path, G):
    with open(path, encoding="utf-8") as fh:
        return parse_subgroup_text(fh.read(), G, path=path)


def bundled_group_path(name):
    """Path to a bundled group/subgroup file, e.g. 'aff8.group'."""
    res = resources.files("sunadalab").joinpath("data", "groups", name)
    if not res.is_file():
        raise FileNotFoundError(f"no bundled file named {name!r}")
    return str(res)


def load_bundled_group(name, max_order=DEFAULT_MAX_ORDER):
    return load_group_file(bundled_group_path(name + ".group"), max_order=max_order)
