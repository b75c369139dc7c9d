"""Weighted graphs with isometric group actions and their spectra.

A G-space here is a finite weighted graph together with a vertex action
of a permutation group that preserves the weights.  The module computes
graph Laplacian spectra, spectra of quotients (as honest quotient graphs
when the action is free, as invariant-subspace spectra in general),
isotypic multiplicities of eigenspaces, the transplantation identity
relating invariant multiplicities to induced-representation
multiplicities, the support law for which irreducibles can appear, and
discrete Dirichlet fundamental domains.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .chartab import (
    CharacterTable,
    character_table,
    irreps_with_fixed_vectors,
)
from .errors import (
    DisconnectedGraphError,
    NonFreeActionError,
    NonIntegralError,
    NumericalError,
    ParseError,
    PreconditionError,
)
from .gassmann import induced_multiplicities
from .permgrp import (
    PermutationGroup,
    Subgroup,
    conjugacy_classes,
    coset_space,
    parse_cycles,
    subgroup_from_indices,
    subgroup_generate,
)

CLUSTER_TOL_SCALE = 1e-8
MULT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Symmetric non-negative weight matrix with zero diagonal."""

    n: int
    weights: np.ndarray
    connected: bool

    def edges(self):
        """Yield (u, v, w) with u < v over the positive-weight pairs."""
        us, vs = np.nonzero(np.triu(self.weights, k=1))
        for u, v in zip(us, vs):
            yield int(u), int(v), float(self.weights[u, v])


def weighted_graph(weights):
    w = np.array(weights, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise PreconditionError(f"weight matrix must be square, got {w.shape}")
    if not np.all(np.isfinite(w)):
        raise PreconditionError("weights must be finite")
    if np.any(w < 0):
        raise PreconditionError("weights must be non-negative")
    if not np.array_equal(w, w.T):
        raise PreconditionError("weight matrix must be exactly symmetric")
    if np.any(np.diagonal(w) != 0):
        raise PreconditionError("diagonal weights (self-loops) are not allowed")
    n = w.shape[0]
    return WeightedGraph(n=n, weights=w, connected=_is_connected(w))


def _is_connected(w):
    n = w.shape[0]
    if n == 0:
        return True
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for v in np.nonzero(w[u])[0]:
            if not seen[v]:
                seen[v] = True
                stack.append(int(v))
    return bool(seen.all())


def laplacian(graph):
    """Combinatorial Laplacian L = D - W."""
    w = graph.weights
    return np.diag(w.sum(axis=1)) - w


@dataclass(frozen=True, eq=False)
class GSpace:
    """A weighted graph with a weight-preserving group action.

    ``vertex_perms[g, v]`` is the image of vertex v under group element
    g (indexed as in the group's canonical element order).
    """

    group: PermutationGroup
    graph: WeightedGraph
    vertex_perms: np.ndarray

    @property
    def n(self):
        return self.graph.n


def gspace(G, graph, vertex_perms):
    """Validate and bundle an action given as one vertex permutation per
    group element."""
    perms = np.asarray(vertex_perms, dtype=np.int64)
    if perms.shape != (G.order, graph.n):
        raise PreconditionError(
            f"action table has shape {perms.shape}, expected {(G.order, graph.n)}"
        )
    ident = np.arange(graph.n)
    for g in range(G.order):
        if not np.array_equal(np.sort(perms[g]), ident):
            raise PreconditionError(f"row {g} of the action is not a permutation")
    if not np.array_equal(perms[0], ident):
        raise PreconditionError("identity element must act as the identity")
    table = G.table
    for i in range(G.order):
        if not np.array_equal(perms[table[i]], perms[i][perms]):
            raise PreconditionError(
                f"action is not a homomorphism at element {i}"
            )
    w = graph.weights
    for g in range(1, G.order):
        p = perms[g]
        if not np.array_equal(w[np.ix_(p, p)], w):
            raise PreconditionError(
                f"element {g} does not preserve the edge weights"
            )
    return GSpace(group=G, graph=graph, vertex_perms=perms)


def gspace_from_generator_images(G, graph, images):
    """Extend vertex permutations given for the group generators to the
    whole group by breadth-first factorization, then validate."""
    if len(images) != len(G.generators):
        raise PreconditionError(
            f"need one vertex permutation per generator: got {len(images)}, "
            f"expected {len(G.generators)}"
        )
    n = graph.n
    perms = np.full((G.order, n), -1, dtype=np.int64)
    perms[0] = np.arange(n)
    gen_rows = []
    for gen, img in zip(G.generators, images):
        img = np.asarray([img(v) if callable(img) else img[v] for v in range(n)])
        gen_rows.append((G.index_of(gen), img))
    queue = deque([0])
    done = np.zeros(G.order, dtype=bool)
    done[0] = True
    while queue:
        x = queue.popleft()
        for gi, img in gen_rows:
            y = int(G.table[gi, x])
            if not done[y]:
                perms[y] = img[perms[x]]
                done[y] = True
                queue.append(y)
    if not done.all():
        raise PreconditionError("generators do not generate the whole group")
    return gspace(G, graph, perms)


def cayley_graph(G, gen_indices=None, weights=None):
    """Cayley graph of G with edges x -> x*s, carried as a G-space under
    left translation.

    The connection set must exclude the identity and be closed under
    inversion, with equal weights on inverse pairs; the defaults use the
    group's own generators (symmetrized) with unit weights.
    """
    if gen_indices is None:
        gen_indices = sorted({G.index_of(g) for g in G.generators})
    gen_indices = [int(s) for s in gen_indices]
    if weights is None:
        weights = {s: 1.0 for s in gen_indices}
    conn = set(gen_indices)
    for s in list(conn):
        conn.add(G.inv(s))
        weights.setdefault(G.inv(s), weights.get(s, 1.0))
    if 0 in conn:
        raise PreconditionError("connection set must not contain the identity")
    for s in conn:
        if weights[s] != weights[G.inv(s)]:
            raise PreconditionError(
                f"weights on the inverse pair ({s}, {G.inv(s)}) differ"
            )
        if weights[s] <= 0:
            raise PreconditionError("connection weights must be positive")
    n = G.order
    w = np.zeros((n, n))
    for s in sorted(conn):
        # right multiplication by s; left translation then acts by isometries
        targets = G.table[:, s]
        w[np.arange(n), targets] = weights[s]
    graph = weighted_graph(w)
    return gspace(G, graph, np.asarray(G.table, dtype=np.int64))


def coset_gspace(G, subgroups, weight_seed=0):
    """Disjoint union of coset spaces G/H_i with a random invariant graph.

    Weights are constant on orbits of vertex pairs, so invariance is
    exact by construction.
    """
    spaces = [coset_space(G, H) for H in subgroups]
    n = sum(cs.num_cosets for cs in spaces)
    perms = np.zeros((G.order, n), dtype=np.int64)
    offset = 0
    for cs in spaces:
        perms[:, offset : offset + cs.num_cosets] = cs.action + offset
        offset += cs.num_cosets
    w = random_invariant_weights(perms, n, seed=weight_seed)
    return gspace(G, weighted_graph(w), perms)


def random_invariant_weights(perms, n, seed=0, keep_prob=0.7):
    """Random symmetric weights constant on each orbit of vertex pairs."""
    orbit = _pair_orbits(perms, n)
    rng = np.random.default_rng(seed)
    num = orbit.max() + 1 if orbit.size else 0
    values = rng.uniform(0.25, 1.0, size=max(num, 0))
    values[rng.uniform(size=values.shape) > keep_prob] = 0.0
    w = np.zeros((n, n))
    mask = orbit >= 0
    w[mask] = values[orbit[mask]]
    return w


def _pair_orbits(perms, n):
    """Orbit index of each off-diagonal vertex pair under the action and
    the swap (u, v) -> (v, u); the diagonal is marked -1."""
    orbit = np.full((n, n), -1, dtype=np.int64)
    next_id = 0
    rows = [np.asarray(p, dtype=np.int64) for p in perms]
    for x in range(n):
        for y in range(n):
            if x == y or orbit[x, y] >= 0:
                continue
            stack = [(x, y)]
            orbit[x, y] = next_id
            while stack:
                u, v = stack.pop()
                candidates = [(v, u)] + [(int(p[u]), int(p[v])) for p in rows]
                for uu, vv in candidates:
                    if orbit[uu, vv] < 0:
                        orbit[uu, vv] = next_id
                        stack.append((uu, vv))
            next_id += 1
    return orbit


def perturb_invariant_weights(space, seed=0, low=0.5, high=1.5):
    """Rescale each orbit of edge weights by an independent random factor.

    Returns a new G-space on the same action; invariance stays exact, so
    any isospectrality that came from the group structure survives.
    """
    orbit = _pair_orbits(space.vertex_perms, space.n)
    rng = np.random.default_rng(seed)
    factors = rng.uniform(low, high, size=orbit.max() + 1)
    w = space.graph.weights.copy()
    mask = orbit >= 0
    w[mask] = w[mask] * factors[orbit[mask]]
    return gspace(space.group, weighted_graph(w), space.vertex_perms)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues of a symmetric operator, clustered into multiplicities.

    ``values`` are the raw sorted eigenvalues; ``clusters`` is a tuple of
    (eigenvalue, multiplicity) pairs where the eigenvalue is the cluster
    mean.  Adjacent eigenvalues are merged when their gap is at most
    ``cluster_tol``.
    """

    values: np.ndarray
    clusters: tuple
    cluster_tol: float

    @property
    def dim(self):
        return len(self.values)

    def cluster_values(self):
        return tuple(v for v, _ in self.clusters)

    def multiplicities(self):
        return tuple(m for _, m in self.clusters)

    def pairs(self):
        return [[float(v), int(m)] for v, m in self.clusters]


def default_cluster_tol(values):
    radius = float(np.max(np.abs(values))) if len(values) else 0.0
    return CLUSTER_TOL_SCALE * max(1.0, radius)


def cluster_eigenvalues(values, cluster_tol=None):
    values = np.sort(np.asarray(values, dtype=np.float64))
    if cluster_tol is None:
        cluster_tol = default_cluster_tol(values)
    clusters = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > cluster_tol:
            block = values[start:i]
            clusters.append((float(block.mean()), len(block)))
            start = i
    return SpectralDecomposition(
        values=values, clusters=tuple(clusters), cluster_tol=float(cluster_tol)
    )


def spectrum(graph, cluster_tol=None):
    """Laplacian spectrum of a weighted graph."""
    values = np.linalg.eigvalsh(laplacian(graph))
    return cluster_eigenvalues(values, cluster_tol)


def averaging_projector(space, H):
    """Matrix of the averaging operator over H on functions of the
    vertices; its range is the H-invariant subspace."""
    _check_acting_subgroup(space, H)
    n = space.n
    p = np.zeros((n, n))
    cols = np.arange(n)
    for h in H.elements:
        p[space.vertex_perms[h], cols] += 1.0
    return p / H.order


def invariant_spectrum(space, H=None, cluster_tol=None):
    """Spectrum of the Laplacian restricted to the H-invariant functions.

    This is the quotient spectrum for any action, free or not.
    """
    if H is None:
        H = subgroup_from_indices(space.group, range(space.group.order))
    proj = averaging_projector(space, H)
    evals, evecs = np.linalg.eigh(proj)
    basis = evecs[:, evals > 0.5]
    lap = laplacian(space.graph)
    reduced = basis.T @ lap @ basis
    reduced = (reduced + reduced.T) / 2.0
    values = np.linalg.eigvalsh(reduced)
    return cluster_eigenvalues(values, cluster_tol)


def vertex_orbits(space, H=None):
    """Orbits of H (default: the whole group) on the vertex set, each a
    sorted tuple, listed by minimal vertex."""
    rows = space.vertex_perms if H is None else space.vertex_perms[H.indices()]
    n = space.n
    orbit_of = np.full(n, -1, dtype=np.int64)
    orbits = []
    for v in range(n):
        if orbit_of[v] >= 0:
            continue
        members = np.unique(rows[:, v])
        frontier = members
        while True:
            grown = np.unique(rows[:, members].ravel())
            if grown.size == members.size:
                break
            members = grown
        orbit_of[members] = len(orbits)
        orbits.append(tuple(int(x) for x in members))
    return orbits


def is_free(space, H=None):
    """True iff no non-identity element of H fixes a vertex."""
    idx = range(1, space.group.order) if H is None else (h for h in H.elements if h)
    fixed = space.vertex_perms == np.arange(space.n)[None, :]
    return not any(fixed[h].any() for h in idx)


def quotient_graph(space, H=None):
    """Quotient of a free action: vertices are H-orbits, and the weight
    between two orbits sums the weights from one representative into the
    entire other orbit.  Weights inside an orbit are dropped with the
    diagonal.  Non-free actions have no graph quotient with the right
    spectrum; use invariant_spectrum for those."""
    if H is None:
        H = subgroup_from_indices(space.group, range(space.group.order))
    _check_acting_subgroup(space, H)
    if not is_free(space, H):
        raise NonFreeActionError(
            "the action has a fixed vertex; the quotient is not a graph, "
            "use invariant_spectrum instead"
        )
    orbits = vertex_orbits(space, H)
    k = len(orbits)
    w = space.graph.weights
    q = np.zeros((k, k))
    for a, orb_a in enumerate(orbits):
        rep = orb_a[0]
        for b, orb_b in enumerate(orbits):
            if a != b:
                q[a, b] = w[rep, list(orb_b)].sum()
    if not np.array_equal(q, q.T):
        # row sums over a full orbit are representative-independent, so any
        # asymmetry is a float artifact
        q = (q + q.T) / 2.0
    return weighted_graph(q)


def _check_acting_subgroup(space, H):
    if H.parent is not space.group:
        raise PreconditionError("subgroup acts through a different group object")


# ---------------------------------------------------------------------------
# isotypic structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IsotypicTable:
    """Multiplicity of each irreducible inside each Laplacian eigenspace.

    ``counts[c, r]`` is the multiplicity of irreducible row r in the
    eigenspace of cluster c.
    """

    space: GSpace
    chartable: CharacterTable
    decomposition: SpectralDecomposition
    counts: np.ndarray

    def supported_rows(self):
        return tuple(int(r) for r in np.nonzero(self.counts.any(axis=0))[0])

    def cluster_rows(self, c):
        return tuple(int(r) for r in np.nonzero(self.counts[c])[0])


def _eigenspace_projectors(space, cluster_tol):
    lap = laplacian(space.graph)
    values, vectors = np.linalg.eigh(lap)
    decomp = cluster_eigenvalues(values, cluster_tol)
    projs = []
    start = 0
    for _, m in decomp.clusters:
        block = vectors[:, start : start + m]
        projs.append(block @ block.T)
        start += m
    return decomp, projs


def _class_traces(space, proj):
    """Trace of (action of one representative per class) restricted to the
    range of ``proj``; a class function because the projector commutes
    with the action."""
    cc = conjugacy_classes(space.group)
    idx = np.arange(space.n)
    traces = []
    for rep in cc.representatives:
        p = space.vertex_perms[rep]
        traces.append(complex(proj[idx, p].sum()))
    return np.asarray(traces)


def isotypic_multiplicities(space, ct=None, cluster_tol=None, tol=MULT_TOL):
    """Decompose each eigenspace of the Laplacian into irreducibles.

    Multiplicities are computed from traces of group elements on the
    eigenspace projectors and must come out as non-negative integers;
    each cluster's dimension must equal the degree-weighted sum of its
    multiplicities.
    """
    if ct is None:
        ct = character_table(space.group)
    decomp, projs = _eigenspace_projectors(space, cluster_tol)
    sizes = np.asarray(ct.partition.class_sizes, dtype=np.float64)
    order = space.group.order
    counts = np.zeros((len(projs), ct.num_irreps), dtype=np.int64)
    for c, proj in enumerate(projs):
        traces = _class_traces(space, proj)
        for r in range(ct.num_irreps):
            m = np.sum(sizes * np.conj(ct.table[r]) * traces) / order
            m_int = int(round(m.real))
            if m_int < 0 or abs(m - m_int) > tol:
                raise NonIntegralError(
                    f"cluster {c} pairs with irrep {r} at non-integer "
                    f"multiplicity {m}"
                )
            counts[c, r] = m_int
        dim = sum(counts[c, r] * ct.degrees[r] for r in range(ct.num_irreps))
        if dim != decomp.clusters[c][1]:
            raise NumericalError(
                f"cluster {c}: isotypic dimensions sum to {dim}, expected "
                f"{decomp.clusters[c][1]}; clusters may be split too finely"
            )
    return IsotypicTable(
        space=space, chartable=ct, decomposition=decomp, counts=counts
    )


@dataclass(frozen=True, eq=False)
class EquivarianceReport:
    """Outcome of comparing two G-spaces cluster by cluster."""

    equal: bool
    reason: str
    clusters_1: tuple
    clusters_2: tuple

    def __bool__(self):
        return self.equal


def equivariantly_isospectral(space1, space2, ct=None, tol=1e-9, cluster_tol=None):
    """Compare eigenvalues together with their isotypic decompositions.

    The two spaces must carry the same group.  Equality means equal
    cluster multiplicit structure with eigenvalues within ``tol`` and
    identical multiplicity rows.
    """
    if space1.group is not space2.group:
        raise PreconditionError("the spaces carry different group objects")
    t1 = isotypic_multiplicities(space1, ct=ct, cluster_tol=cluster_tol)
    t2 = isotypic_multiplicities(space2, ct=ct, cluster_tol=cluster_tol)
    c1, c2 = t1.decomposition.clusters, t2.decomposition.clusters
    if len(c1) != len(c2):
        return EquivarianceReport(
            equal=False,
            reason=f"cluster counts differ: {len(c1)} vs {len(c2)}",
            clusters_1=c1,
            clusters_2=c2,
        )
    for i, ((v1, m1), (v2, m2)) in enumerate(zip(c1, c2)):
        if abs(v1 - v2) > tol:
            return EquivarianceReport(
                equal=False,
                reason=f"cluster {i}: eigenvalues {v1} and {v2} differ by more than {tol}",
                clusters_1=c1,
                clusters_2=c2,
            )
        if m1 != m2:
            return EquivarianceReport(
                equal=False,
                reason=f"cluster {i}: multiplicities {m1} and {m2} differ",
                clusters_1=c1,
                clusters_2=c2,
            )
        if not np.array_equal(t1.counts[i], t2.counts[i]):
            return EquivarianceReport(
                equal=False,
                reason=f"cluster {i}: isotypic decompositions differ",
                clusters_1=c1,
                clusters_2=c2,
            )
    return EquivarianceReport(equal=True, reason="", clusters_1=c1, clusters_2=c2)


# ---------------------------------------------------------------------------
# the multiplicity identity and the support law
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SunadaIdentityReport:
    """Per-eigenvalue comparison of the invariant-dimension count against
    the induced-representation sum."""

    eigenvalues: tuple
    invariant_dims: tuple
    induced_sums: tuple
    k_rows: tuple
    holds: bool

    def __bool__(self):
        return self.holds


def sunada_identity_check(space, H, K=None, ct=None, cluster_tol=None, tol=MULT_TOL):
    """For each eigenvalue, compare the dimension of H-invariant
    eigenfunctions with the multiplicity sum over the irreducibles having
    a K-fixed vector, weighted by their multiplicity in the coset
    representation on G/H.

    Every irreducible supported on the space must have a K-fixed vector;
    otherwise the comparison is not meaningful and a precondition error
    names the first offending irreducible.
    """
    G = space.group
    if K is None:
        K = subgroup_generate(G, [])
    if ct is None:
        ct = character_table(G)
    table = isotypic_multiplicities(space, ct=ct, cluster_tol=cluster_tol, tol=tol)
    k_rows = tuple(irreps_with_fixed_vectors(ct, K))
    supported = table.supported_rows()
    outside = [r for r in supported if r not in k_rows]
    if outside:
        raise PreconditionError(
            f"irrep {outside[0]} appears in the spectrum but has no fixed "
            "vector under the chosen K; the identity does not apply"
        )
    ind = induced_multiplicities(G, H, ct)
    proj_h = averaging_projector(space, H)
    decomp, projs = table.decomposition, None
    # recompute eigenprojectors once; reuse the clustering from the table
    _, projs = _eigenspace_projectors(space, table.decomposition.cluster_tol)
    lhs, rhs = [], []
    for c, proj in enumerate(projs):
        raw = float(np.trace(proj_h @ proj).real)
        val = int(round(raw))
        if val < 0 or abs(raw - val) > tol:
            raise NonIntegralError(
                f"cluster {c}: invariant dimension {raw} is not an integer"
            )
        lhs.append(val)
        rhs.append(int(sum(table.counts[c, r] * ind[r] for r in k_rows)))
    holds = lhs == rhs
    return SunadaIdentityReport(
        eigenvalues=decomp.cluster_values(),
        invariant_dims=tuple(lhs),
        induced_sums=tuple(rhs),
        k_rows=k_rows,
        holds=holds,
    )


@dataclass(frozen=True, eq=False)
class DonnellyReport:
    """Which irreducibles appear in the function space of a G-space.

    The observed support always equals the union over vertex orbits of
    the irreducibles with fixed vectors under the orbit stabilizers.  A
    principal verdict is available when one stabilizer admits every
    other's fixed-vector irreducibles; its rows then give the whole
    support on their own.
    """

    orbit_representatives: tuple
    stabilizer_orders: tuple
    observed_rows: tuple
    union_rows: tuple
    law_holds: bool
    principal_rows: tuple | None
    principal_holds: bool | None

    def __bool__(self):
        return self.law_holds


def donnelly_support(space, ct=None, cluster_tol=None):
    if ct is None:
        ct = character_table(space.group)
    table = isotypic_multiplicities(space, ct=ct, cluster_tol=cluster_tol)
    observed = table.supported_rows()
    orbits = vertex_orbits(space)
    reps, stab_orders, row_sets = [], [], []
    for orb in orbits:
        v = orb[0]
        stab = [g for g in range(space.group.order) if space.vertex_perms[g, v] == v]
        K = subgroup_from_indices(space.group, stab)
        reps.append(v)
        stab_orders.append(K.order)
        row_sets.append(frozenset(irreps_with_fixed_vectors(ct, K)))
    union = frozenset().union(*row_sets) if row_sets else frozenset()
    principal_rows = None
    principal_holds = None
    for rows in row_sets:
        if all(other <= rows for other in row_sets):
            principal_rows = tuple(sorted(rows))
            principal_holds = frozenset(observed) == rows
            break
    return DonnellyReport(
        orbit_representatives=tuple(reps),
        stabilizer_orders=tuple(stab_orders),
        observed_rows=observed,
        union_rows=tuple(sorted(union)),
        law_holds=frozenset(observed) == union,
        principal_rows=principal_rows,
        principal_holds=principal_holds,
    )


# ---------------------------------------------------------------------------
# fundamental domains
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DirichletCells:
    """Discrete Dirichlet decomposition for a free subgroup action.

    ``cells[k]`` collects the vertices strictly closer (in hop distance)
    to ``centers[k]`` than to any other center; equidistant vertices land
    in ``boundary``.
    """

    base_vertex: int
    centers: tuple
    cells: tuple
    boundary: tuple


def _hop_distances(graph, source):
    n = graph.n
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in np.nonzero(graph.weights[u])[0]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(int(v))
    return dist


def fundamental_domain(space, H=None, base_vertex=0):
    """Dirichlet cells of the orbit of ``base_vertex`` under H.

    Requires a free action on a connected graph.  Cell k belongs to the
    k-th center in sorted order; the acting group permutes the cells the
    same way it permutes the centers.
    """
    if H is None:
        H = subgroup_from_indices(space.group, range(space.group.order))
    _check_acting_subgroup(space, H)
    if not space.graph.connected:
        raise DisconnectedGraphError(
            "hop distances are infinite across components"
        )
    if not is_free(space, H):
        raise NonFreeActionError("Dirichlet cells need a free action")
    centers = sorted(int(space.vertex_perms[h, base_vertex]) for h in H.elements)
    dists = np.stack([_hop_distances(space.graph, c) for c in centers])
    best = dists.min(axis=0)
    winners = dists == best[None, :]
    counts = winners.sum(axis=0)
    cells = []
    for k in range(len(centers)):
        members = np.nonzero(winners[k] & (counts == 1))[0]
        cells.append(tuple(int(v) for v in members))
    boundary = tuple(int(v) for v in np.nonzero(counts > 1)[0])
    return DirichletCells(
        base_vertex=int(base_vertex),
        centers=tuple(centers),
        cells=tuple(cells),
        boundary=boundary,
    )


def cover_degree(space, H=None, t=1e-8):
    """Number of sheets of the covering onto the quotient of a free action.

    The count n / (number of orbits) is cross-checked against the heat
    traces of the total space and the quotient graph at small time, where
    the trace ratio must approach the sheet count.
    """
    if H is None:
        H = subgroup_from_indices(space.group, range(space.group.order))
    _check_acting_subgroup(space, H)
    if not is_free(space, H):
        raise NonFreeActionError("sheet counting needs a free action")
    orbits = vertex_orbits(space, H)
    if space.n % len(orbits):
        raise NumericalError("orbit sizes are uneven for a free action")
    degree = space.n // len(orbits)
    quot = quotient_graph(space, H)
    t_grid = np.asarray([t], dtype=np.float64)
    top = _kernels.heat_sum(
        np.linalg.eigvalsh(laplacian(space.graph)),
        np.ones(space.n),
        t_grid,
    )[0]
    bottom = _kernels.heat_sum(
        np.linalg.eigvalsh(laplacian(quot)), np.ones(quot.n), t_grid
    )[0]
    if abs(top - degree * bottom) > 1e-6 * space.n:
        raise NumericalError(
            f"heat traces disagree with sheet count {degree}: "
            f"{top} vs {degree} * {bottom}"
        )
    return degree


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def parse_graph_tsv(text, path=None):
    """Edge list with one ``u v w`` line per edge.

    An optional leading ``vertices n`` line fixes the vertex count (needed
    only when trailing vertices are isolated).  Each undirected edge may
    appear in one orientation only.
    """
    n_declared = None
    edges = {}
    lines = [
        (lineno, raw.split("#", 1)[0].strip())
        for lineno, raw in enumerate(text.splitlines(), start=1)
    ]
    lines = [(no, ln) for no, ln in lines if ln]
    start = 0
    if lines:
        m = re.fullmatch(r"vertices\s+(\d+)", lines[0][1])
        if m:
            n_declared = int(m.group(1))
            start = 1
    max_vertex = -1
    for lineno, line in lines[start:]:
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(
                f"expected 'u v w', got {line!r}", line=lineno, path=path
            )
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, path=path) from exc
        if u < 0 or v < 0:
            raise ParseError("vertex indices must be non-negative", line=lineno, path=path)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line=lineno, path=path)
        if w <= 0 or not np.isfinite(w):
            raise ParseError(f"edge weight must be positive, got {w}", line=lineno, path=path)
        if (u, v) in edges or (v, u) in edges:
            raise ParseError(
                f"edge {{{u}, {v}}} listed twice", line=lineno, path=path
            )
        edges[(u, v)] = w
        max_vertex = max(max_vertex, u, v)
    n = max_vertex + 1 if n_declared is None else n_declared
    if max_vertex >= n:
        raise ParseError(
            f"vertex {max_vertex} exceeds declared count {n}", path=path
        )
    w = np.zeros((n, n))
    for (u, v), weight in edges.items():
        w[u, v] = w[v, u] = weight
    return weighted_graph(w)


def load_graph_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_graph_tsv(fh.read(), path=path)


def write_graph_tsv(graph, fh):
    fh.write(f"vertices {graph.n}\n")
    for u, v, w in graph.edges():
        fh.write(f"{u}\t{v}\t{w!r}\n")


def parse_action_text(text, G, graph, path=None):
    """Action file: one vertex permutation per group generator, in cycle
    notation on the graph's vertex indices."""
    perms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            perms.append(parse_cycles(line, graph.n))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, path=path) from exc
    if len(perms) != len(G.generators):
        raise ParseError(
            f"found {len(perms)} vertex permutations, expected one per group "
            f"generator ({len(G.generators)})",
            path=path,
        )
    return gspace_from_generator_images(G, graph, [p.images for p in perms])


def load_action_file(path, G, graph):
    with open(path, encoding="utf-8") as fh:
        return parse_action_text(fh.read(), G, graph, path=path)
