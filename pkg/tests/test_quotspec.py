import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import sunadalab as sl
from sunadalab import quotspec as qs
from sunadalab.errors import (
    DisconnectedGraphError,
    NonFreeActionError,
    ParseError,
    PreconditionError,
)


def _cycle_weights(n):
    w = np.zeros((n, n))
    for i in range(n):
        w[i, (i + 1) % n] = w[(i + 1) % n, i] = 1.0
    return w


# --- graphs and validation ---------------------------------------------------

def test_weighted_graph_validation():
    with pytest.raises(PreconditionError):
        qs.weighted_graph(np.ones((2, 3)))
    with pytest.raises(PreconditionError):
        qs.weighted_graph([[0.0, 1.0], [2.0, 0.0]])  # asymmetric
    with pytest.raises(PreconditionError):
        qs.weighted_graph([[0.0, -1.0], [-1.0, 0.0]])
    with pytest.raises(PreconditionError):
        qs.weighted_graph([[1.0, 0.0], [0.0, 0.0]])  # self loop
    with pytest.raises(PreconditionError):
        qs.weighted_graph([[0.0, np.inf], [np.inf, 0.0]])


def test_connectivity_flag():
    assert qs.weighted_graph(_cycle_weights(4)).connected
    w = np.zeros((4, 4))
    w[0, 1] = w[1, 0] = 1.0
    w[2, 3] = w[3, 2] = 1.0
    assert not qs.weighted_graph(w).connected


def test_laplacian_rows_sum_to_zero():
    g = qs.weighted_graph(_cycle_weights(5))
    lap = qs.laplacian(g)
    assert np.allclose(lap.sum(axis=1), 0.0)
    assert np.allclose(lap, lap.T)


def test_path_and_k2_spectra():
    w = np.zeros((3, 3))
    w[0, 1] = w[1, 0] = 1.0
    w[1, 2] = w[2, 1] = 1.0
    decomp = qs.spectrum(qs.weighted_graph(w))
    assert np.allclose(decomp.values, [0.0, 1.0, 3.0], atol=1e-12)
    k2 = qs.spectrum(qs.weighted_graph([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(k2.values, [0.0, 2.0], atol=1e-12)


def test_cycle_spectrum_closed_form():
    n = 6
    decomp = qs.spectrum(qs.weighted_graph(_cycle_weights(n)))
    expect = np.sort([2.0 - 2.0 * np.cos(2 * np.pi * k / n) for k in range(n)])
    assert np.max(np.abs(decomp.values - expect)) < 1e-12


def test_clustering_merges_repeats():
    decomp = qs.cluster_eigenvalues([0.0, 1.0, 1.0 + 1e-12, 3.0])
    assert decomp.multiplicities() == (1, 2, 1)
    tight = qs.cluster_eigenvalues([0.0, 1.0, 1.0 + 1e-12, 3.0], cluster_tol=1e-14)
    assert tight.multiplicities() == (1, 1, 1, 1)


# --- actions -----------------------------------------------------------------

def test_cayley_graph_structure(z6):
    space = qs.cayley_graph(z6)
    assert space.n == 6
    assert space.graph.connected
    assert np.allclose(space.graph.weights, _cycle_weights(6))


def test_cayley_rejects_identity_connection(z6):
    with pytest.raises(PreconditionError):
        qs.cayley_graph(z6, [0])


def test_cayley_rejects_lopsided_weights(z6):
    gen = 1  # index of the rotation in canonical order
    inv = z6.inv(gen)
    with pytest.raises(PreconditionError):
        qs.cayley_graph(z6, [gen], {gen: 1.0, inv: 2.0})


def test_gspace_validates_homomorphism(s3):
    graph = qs.weighted_graph(_cycle_weights(6))
    bad = np.tile(np.arange(6), (6, 1))
    bad[3] = np.roll(np.arange(6), 1)
    with pytest.raises(PreconditionError):
        qs.gspace(s3, graph, bad)


def test_gspace_validates_weight_preservation(z6):
    w = _cycle_weights(6)
    w[0, 1] = w[1, 0] = 2.0  # break the symmetry of the cycle
    with pytest.raises(PreconditionError):
        qs.gspace(z6, qs.weighted_graph(w), np.asarray(z6.table))


def test_generator_images_extension(z6):
    graph = qs.weighted_graph(_cycle_weights(6))
    rot = [(v + 1) % 6 for v in range(6)]
    space = qs.gspace_from_generator_images(z6, graph, [rot])
    assert np.array_equal(space.vertex_perms, np.asarray(z6.table))


def test_generator_images_wrong_count(z6):
    graph = qs.weighted_graph(_cycle_weights(6))
    with pytest.raises(PreconditionError):
        qs.gspace_from_generator_images(z6, graph, [])


def test_vertex_orbits_and_freeness(s3):
    triv = sl.subgroup_generate(s3, [])
    space = qs.coset_gspace(s3, [triv])  # regular action
    assert qs.is_free(space)
    assert qs.vertex_orbits(space) == [tuple(range(6))]
    H = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1)", 3))])
    mixed = qs.coset_gspace(s3, [H])
    assert not qs.is_free(mixed)


# --- quotients ---------------------------------------------------------------

@pytest.fixture
def c6_with_z3(z6):
    space = qs.cayley_graph(z6)
    z3 = sl.subgroup_generate(z6, [z6.index_of(sl.parse_cycles("(0 2 4)(1 3 5)", 6))])
    return space, z3


def test_quotient_matches_invariant(c6_with_z3):
    space, z3 = c6_with_z3
    quotient = qs.quotient_graph(space, z3)
    via_graph = qs.spectrum(quotient).values
    via_projection = qs.invariant_spectrum(space, z3).values
    assert np.allclose(via_graph, [0.0, 4.0], atol=1e-9)
    assert np.allclose(via_projection, [0.0, 4.0], atol=1e-9)


def test_quotient_requires_free_action(s3):
    H = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1)", 3))])
    space = qs.coset_gspace(s3, [H])
    whole = sl.subgroup_from_indices(s3, range(6))
    with pytest.raises(NonFreeActionError) as info:
        qs.quotient_graph(space, whole)
    assert "invariant_spectrum" in str(info.value)


def test_quotient_intertwines_on_random_invariant_weights(q8):
    # dual route: eigenvalues through the quotient graph must match the
    # invariant-subspace computation exactly for a free action
    triv = sl.subgroup_generate(q8, [])
    for seed in range(4):
        space = qs.coset_gspace(q8, [triv], weight_seed=seed)
        for H in sl.all_subgroups(q8):
            a = qs.spectrum(qs.quotient_graph(space, H)).values
            b = qs.invariant_spectrum(space, H).values
            assert len(a) == len(b)
            assert np.max(np.abs(a - b)) < 1e-9


def test_invariant_spectrum_trivial_subgroup_is_full(z6):
    space = qs.cayley_graph(z6)
    triv = sl.subgroup_generate(z6, [])
    full = qs.spectrum(space.graph)
    inv = qs.invariant_spectrum(space, triv)
    assert np.allclose(full.values, inv.values, atol=1e-9)


def test_averaging_projector_is_projector(aff8_triple):
    G, h1, _ = aff8_triple
    space = qs.cayley_graph(G)
    p = qs.averaging_projector(space, h1)
    assert np.allclose(p @ p, p, atol=1e-12)
    assert np.allclose(p, p.T, atol=1e-12)
    assert abs(np.trace(p) - space.n / h1.order) < 1e-9


def test_perturbation_preserves_invariance(aff8_triple):
    G, h1, h2 = aff8_triple
    space = qs.cayley_graph(G)
    for seed in range(3):
        pert = qs.perturb_invariant_weights(space, seed=seed)
        assert not np.allclose(pert.graph.weights, space.graph.weights)
        s1 = qs.invariant_spectrum(pert, h1)
        s2 = qs.invariant_spectrum(pert, h2)
        assert np.max(np.abs(s1.values - s2.values)) < 1e-9


# --- isotypic structure --------------------------------------------------------

def test_regular_action_isotypic_totals(s3):
    # functions on G carry each irreducible with multiplicity = degree
    triv = sl.subgroup_generate(s3, [])
    space = qs.coset_gspace(s3, [triv], weight_seed=1)
    table = qs.isotypic_multiplicities(space)
    totals = table.counts.sum(axis=0)
    assert tuple(totals) == table.chartable.degrees


def test_coset_action_isotypic_totals(s4):
    # totals must equal the induced multiplicities: the trace route and
    # the character route must agree
    from sunadalab.gassmann import induced_multiplicities

    ct = sl.character_table(s4)
    for H in sl.all_subgroups(s4)[:10]:
        space = qs.coset_gspace(s4, [H], weight_seed=2)
        table = qs.isotypic_multiplicities(space, ct=ct)
        assert tuple(table.counts.sum(axis=0)) == induced_multiplicities(s4, H, ct)


def test_cluster_dimension_identity(d4):
    space = qs.cayley_graph(d4)
    table = qs.isotypic_multiplicities(space)
    for c, (_, mult) in enumerate(table.decomposition.clusters):
        dim = sum(
            table.counts[c, r] * table.chartable.degrees[r]
            for r in range(table.chartable.num_irreps)
        )
        assert dim == mult


def test_equivariant_isospectral_reflexive(z6):
    space = qs.cayley_graph(z6)
    rep = qs.equivariantly_isospectral(space, space)
    assert bool(rep)


def test_equivariant_isospectral_detects_scaling(z6):
    a = qs.cayley_graph(z6)
    w = a.graph.weights * 2.0
    b = qs.gspace(z6, qs.weighted_graph(w), a.vertex_perms)
    rep = qs.equivariantly_isospectral(a, b)
    assert not rep
    assert "eigenvalue" in rep.reason


# --- the identity and the support law ------------------------------------------

def test_identity_c6_z3(c6_with_z3):
    space, z3 = c6_with_z3
    rep = qs.sunada_identity_check(space, z3)
    assert rep.invariant_dims == (1, 0, 0, 1)
    assert rep.induced_sums == (1, 0, 0, 1)
    assert bool(rep)


def test_identity_precondition_names_irrep(s3):
    triv = sl.subgroup_generate(s3, [])
    space = qs.coset_gspace(s3, [triv], weight_seed=0)
    A3 = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1 2)", 3))])
    with pytest.raises(PreconditionError) as info:
        qs.sunada_identity_check(space, A3, K=A3)
    assert "irrep 2" in str(info.value)


def test_identity_holds_with_valid_k(s3):
    # on the cosets of A3 only the trivial and sign characters appear,
    # both of which have A3-fixed vectors, so K = A3 is admissible
    A3 = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1 2)", 3))])
    space = qs.coset_gspace(s3, [A3], weight_seed=3)
    rep = qs.sunada_identity_check(space, A3, K=A3)
    assert bool(rep)
    rep2 = qs.sunada_identity_check(space, sl.subgroup_generate(s3, []), K=A3)
    assert bool(rep2)


def test_donnelly_regular_action(q8):
    triv = sl.subgroup_generate(q8, [])
    space = qs.coset_gspace(q8, [triv], weight_seed=4)
    rep = qs.donnelly_support(space)
    assert rep.law_holds
    ct = sl.character_table(q8)
    assert rep.observed_rows == tuple(range(ct.num_irreps))
    assert rep.principal_rows == tuple(range(ct.num_irreps))
    assert rep.principal_holds


def test_donnelly_trivial_action(z4):
    whole = sl.subgroup_from_indices(z4, range(4))
    space = qs.coset_gspace(z4, [whole, whole], weight_seed=5)
    rep = qs.donnelly_support(space)
    assert rep.law_holds
    assert rep.observed_rows == (0,)
    assert rep.stabilizer_orders == (4, 4)


def test_donnelly_mixed_stabilizers(s3):
    A3 = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1 2)", 3))])
    T = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1)", 3))])
    space = qs.coset_gspace(s3, [A3, T], weight_seed=6)
    rep = qs.donnelly_support(space)
    assert rep.law_holds
    assert set(rep.stabilizer_orders) == {3, 2}
    # neither stabilizer class dominates the other here
    assert rep.principal_rows is None


# --- Dirichlet cells -----------------------------------------------------------

def test_dirichlet_cells_c6(c6_with_z3):
    space, z3 = c6_with_z3
    cells = qs.fundamental_domain(space, z3)
    assert cells.centers == (0, 2, 4)
    assert cells.cells == ((0,), (2,), (4,))
    assert cells.boundary == (1, 3, 5)


def test_dirichlet_requires_connected(s3):
    # connection set = the rotations: left-invariant but splits into two triangles
    a = s3.index_of(sl.parse_cycles("(0 1 2)", 3))
    w = np.zeros((6, 6))
    for s in (a, s3.inv(a)):
        w[np.arange(6), np.asarray(s3.table)[:, s]] = 1.0
    triv = sl.subgroup_generate(s3, [])
    space = qs.coset_gspace(s3, [triv])
    broken = qs.gspace(s3, qs.weighted_graph(w), space.vertex_perms)
    assert not broken.graph.connected
    with pytest.raises(DisconnectedGraphError):
        qs.fundamental_domain(broken)


def test_dirichlet_requires_free(s3):
    H = sl.subgroup_generate(s3, [s3.index_of(sl.parse_cycles("(0 1)", 3))])
    space = qs.coset_gspace(s3, [H], weight_seed=8)
    whole = sl.subgroup_from_indices(s3, range(6))
    if space.graph.connected:
        with pytest.raises(NonFreeActionError):
            qs.fundamental_domain(space, whole)


def test_cover_degree(c6_with_z3, z6):
    space, z3 = c6_with_z3
    assert qs.cover_degree(space, z3) == 3
    whole = sl.subgroup_from_indices(z6, range(6))
    assert qs.cover_degree(space, whole) == 6


# --- file formats ----------------------------------------------------------------

def test_graph_tsv_roundtrip(tmp_path):
    g = qs.weighted_graph(_cycle_weights(5))
    path = tmp_path / "g.tsv"
    with open(path, "w") as fh:
        qs.write_graph_tsv(g, fh)
    back = qs.load_graph_file(path)
    assert back.n == 5
    assert np.array_equal(back.weights, g.weights)


def test_graph_tsv_rejects_duplicate_orientation():
    with pytest.raises(ParseError):
        qs.parse_graph_tsv("0 1 1.0\n1 0 2.0\n")
    with pytest.raises(ParseError):
        qs.parse_graph_tsv("0 1 1.0\n0 1 2.0\n")


def test_graph_tsv_rejects_bad_lines():
    for text in ["0 1\n", "0 0 1.0\n", "0 1 -2.0\n", "a b 1.0\n", "0 1 1.0 extra\n"]:
        with pytest.raises(ParseError):
            qs.parse_graph_tsv(text)


def test_graph_tsv_vertices_header():
    g = qs.parse_graph_tsv("vertices 4\n0 1 1.0\n")
    assert g.n == 4
    with pytest.raises(ParseError):
        qs.parse_graph_tsv("vertices 2\n0 3 1.0\n")


def test_action_file_parse(z6, tmp_path):
    graph = qs.weighted_graph(_cycle_weights(6))
    space = qs.parse_action_text("(0 1 2 3 4 5)\n", z6, graph)
    assert np.array_equal(space.vertex_perms, np.asarray(z6.table))
    with pytest.raises(ParseError):
        qs.parse_action_text("(0 1 2 3 4 5)\n(0 1)\n", z6, graph)


# --- properties -------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**31 - 1))
def test_spectrum_properties(n, seed):
    rng = np.random.default_rng(seed)
    w = np.triu(rng.uniform(0.0, 1.0, size=(n, n)) * (rng.uniform(size=(n, n)) < 0.6), 1)
    w = w + w.T
    decomp = qs.spectrum(qs.weighted_graph(w))
    values = decomp.values
    assert len(values) == n
    assert np.all(np.diff(values) >= -1e-12)
    assert values[0] > -1e-9  # positive semidefinite
    assert abs(values[0]) < 1e-9  # constant vector in the kernel
    assert sum(decomp.multiplicities()) == n


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000))
def test_invariant_dim_is_orbit_count(seed):
    s3 = sl.load_bundled_group("s3")
    rng = np.random.default_rng(seed)
    subs = sl.all_subgroups(s3)
    picks = [subs[i] for i in rng.integers(0, len(subs), size=rng.integers(1, 3))]
    space = qs.coset_gspace(s3, picks, weight_seed=seed)
    whole = sl.subgroup_from_indices(s3, range(6))
    inv = qs.invariant_spectrum(space, whole)
    assert inv.dim == len(qs.vertex_orbits(space))
