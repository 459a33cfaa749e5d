"""fermion-encodings: JW layouts and the graph-based (superfast) encoder."""

import numpy as np
import pytest

from lgtwave.encodings import (
    GraphError,
    GseGraph,
    JwLayout,
    gse_edge_op,
    gse_loop_op,
    gse_odd_majorana,
    gse_vertex_op,
    hypercubic_preset,
    jw_lower,
    jw_number,
    jw_raise,
    random_even_graph,
    stabilizer_projector,
)
from lgtwave.paulis import OperatorSum


def anticomm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


class TestJordanWigner:
    def test_mode_index_bijection(self):
        layout = JwLayout("SU3", 4)
        seen = {layout.mode_index(x, c) for x in range(4) for c in (1, 2, 3)}
        assert seen == set(range(12))

    def test_u1_site0_is_sigma_plus(self):
        layout = JwLayout("U1", 4)
        op = jw_lower(layout, 0)
        mat = op.materialize()
        # sigma^+ on qubit 0, identity elsewhere
        want = np.kron(np.eye(8), np.array([[0, 1], [0, 0]]))
        assert np.allclose(mat, want, atol=1e-15)

    def test_u1_site2_carries_z_string(self):
        layout = JwLayout("U1", 4)
        op = jw_lower(layout, 2)
        for t in op.terms:
            assert t.letters[:2] == "ZZ"
            assert t.letters[2] in "XY"
            assert t.letters[3] == "I"

    @pytest.mark.parametrize("theory,sites", [("U1", 6), ("SU2", 3), ("SU3", 2)])
    def test_car_algebra(self, theory, sites):
        layout = JwLayout(theory, sites)
        modes = [(x, c) for x in range(sites) for c in range(1, layout.n_colors + 1)]
        lowers = {m: jw_lower(layout, *m).materialize(sparse=True) for m in modes}
        raises = {m: jw_raise(layout, *m).materialize(sparse=True) for m in modes}
        for a in modes:
            for b in modes:
                anti = lowers[a] @ raises[b] + raises[b] @ lowers[a]
                want = np.eye(1 << layout.width) if a == b else 0.0
                assert abs(anti - want).max() < 1e-12 if a == b else abs(anti).max() < 1e-12
                zero = lowers[a] @ lowers[b] + lowers[b] @ lowers[a]
                assert abs(zero).max() < 1e-12

    def test_number_operator(self):
        layout = JwLayout("U1", 2)
        n0 = jw_number(layout, 0).materialize()
        direct = jw_raise(layout, 0).materialize() @ jw_lower(layout, 0).materialize()
        assert np.allclose(n0, direct, atol=1e-15)


def square_graph() -> GseGraph:
    # 4-cycle: every vertex degree 2, one qubit each
    return GseGraph(4, ((0, 1), (1, 2), (2, 3), (3, 0)))


def doubled_edge_graph() -> GseGraph:
    return GseGraph(2, ((0, 1), (0, 1)))


def degree4_graph() -> GseGraph:
    # two vertices joined by four parallel edges: degrees (4, 4)
    return GseGraph(2, ((0, 1), (0, 1), (1, 0), (0, 1)))


class TestGseBasics:
    def test_rejects_odd_degree(self):
        with pytest.raises(GraphError):
            GseGraph(3, ((0, 1), (1, 2)))

    def test_rejects_disconnected(self):
        with pytest.raises(GraphError):
            GseGraph(4, ((0, 1), (0, 1), (2, 3), (2, 3)))

    def test_local_majorana_sets(self):
        g = square_graph()
        modes = g.local_majorana_set(0).modes
        assert [m.letters[0] for m in modes] == ["X", "Y"]
        g4 = degree4_graph()
        four = g4.local_majorana_set(0).modes
        assert [m.letters[:2] for m in four] == ["XI", "YI", "ZX", "ZY"]

    def test_local_majoranas_anticommute(self):
        g = degree4_graph()
        mats = [OperatorSum.from_term(m).materialize() for m in g.local_majorana_set(0).modes]
        dim = mats[0].shape[0]
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                want = 2 * np.eye(dim) if i == j else np.zeros((dim, dim))
                assert np.allclose(anticomm(a, b), want, atol=1e-15)

    def test_edge_reversal_negates(self):
        g = square_graph()
        fwd = gse_edge_op(g, (0, 1)).materialize()
        rev = gse_edge_op(g, (1, 0)).materialize()
        assert np.allclose(fwd, -rev, atol=1e-15)

    def test_edge_op_hermitian_squares_to_one(self):
        g = square_graph()
        mat = gse_edge_op(g, (1, 2)).materialize()
        assert np.allclose(mat, mat.conj().T, atol=1e-15)
        assert np.allclose(mat @ mat, np.eye(mat.shape[0]), atol=1e-15)

    def test_missing_edge(self):
        with pytest.raises(GraphError):
            gse_edge_op(square_graph(), (0, 2))

    def test_vertex_op_degree2_is_z(self):
        g = square_graph()
        mat = gse_vertex_op(g, 0).materialize()
        letters = gse_vertex_op(g, 0).terms[0].letters
        assert letters == "ZIII"
        assert np.allclose(mat @ mat, np.eye(16), atol=1e-15)

    def test_vertex_op_degree4(self):
        g = degree4_graph()
        op = gse_vertex_op(g, 0)
        term = op.terms[0]
        assert term.letters == "ZZII"
        assert abs(term.coefficient - 1.0) < 1e-15 or abs(term.coefficient + 1.0) < 1e-15
        mat = op.materialize()
        assert np.allclose(mat, mat.conj().T, atol=1e-15)
        assert np.allclose(mat @ mat, np.eye(mat.shape[0]), atol=1e-15)

    def test_vertex_edge_sign_rule(self):
        # A_IJ B_K = (-1)^(delta_IK + delta_JK) B_K A_IJ
        g = square_graph()
        a01 = gse_edge_op(g, (0, 1)).materialize()
        for k in range(4):
            bk = gse_vertex_op(g, k).materialize()
            sign = (-1) ** ((k == 0) + (k == 1))
            assert np.allclose(a01 @ bk, sign * bk @ a01, atol=1e-15)

    def test_edge_edge_sign_rule(self):
        g = square_graph()
        edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
        for e1 in edges:
            for e2 in edges:
                m1 = gse_edge_op(g, e1).materialize()
                m2 = gse_edge_op(g, e2).materialize()
                shared = (e1[0] in e2) + (e1[1] in e2)
                assert np.allclose(m1 @ m2, (-1.0) ** shared * m2 @ m1, atol=1e-14)


class TestGseLoops:
    def test_same_edge_back_and_forth_is_identity(self):
        g = doubled_edge_graph()
        walk = [(0, 0), (0, 1)]
        mat = gse_loop_op(g, walk).materialize()
        assert np.allclose(mat, np.eye(mat.shape[0]), atol=1e-15)

    def test_plaquette_loop_squares_to_identity(self):
        g = square_graph()
        walk = [(0, 0), (1, 1), (2, 2), (3, 3)]
        mat = gse_loop_op(g, walk).materialize()
        assert np.allclose(mat @ mat, np.eye(mat.shape[0]), atol=1e-14)
        assert np.allclose(mat, mat.conj().T, atol=1e-14)

    def test_broken_loop_rejected(self):
        g = square_graph()
        with pytest.raises(GraphError):
            gse_loop_op(g, [(0, 0), (2, 2)])

    def test_stabilized_dimension(self):
        for g in (square_graph(), degree4_graph(), doubled_edge_graph()):
            proj = stabilizer_projector(g)
            rank = int(round(np.trace(proj).real))
            assert rank == 2 ** (g.num_vertices - 1)

    def test_loop_identity_on_subspace(self):
        g = degree4_graph()
        proj = stabilizer_projector(g)
        for cycle in g.fundamental_cycles():
            mat = gse_loop_op(g, cycle).materialize()
            assert np.allclose(mat @ proj, proj, atol=1e-12)

    def test_parity_identity_and_orientation_flip(self):
        g = square_graph()
        prod = np.eye(1 << g.width, dtype=complex)
        for v in range(g.num_vertices):
            prod = prod @ gse_vertex_op(g, v).materialize()
        euler = gse_loop_op(g, g.eulerian_cycle()).materialize()
        match_plus = np.allclose(prod, euler, atol=1e-13)
        match_minus = np.allclose(prod, -euler, atol=1e-13)
        assert match_plus or match_minus
        # flipping exactly one arrow flips the sign
        flipped = GseGraph(4, ((1, 0), (1, 2), (2, 3), (3, 0)))
        euler_f = gse_loop_op(flipped, flipped.eulerian_cycle()).materialize()
        prod_f = np.eye(1 << flipped.width, dtype=complex)
        for v in range(flipped.num_vertices):
            prod_f = prod_f @ gse_vertex_op(flipped, v).materialize()
        sign = 1.0 if match_plus else -1.0
        assert np.allclose(prod_f, -sign * euler_f, atol=1e-13)


class TestGseOddOperators:
    def test_root_path_trivial_at_s(self):
        g = square_graph()
        s = g.root_vertices[0]
        gp = gse_odd_majorana(g, s, "+")
        assert np.allclose(
            gp.materialize(),
            OperatorSum.from_term(g.root_majorana()).materialize(),
            atol=1e-15,
        )

    @pytest.mark.parametrize("maker", [square_graph, degree4_graph])
    def test_car_over_all_pairs(self, maker):
        g = maker()
        dim = 1 << g.width
        mats = {}
        for v in range(g.num_vertices):
            for sign in "+-":
                mats[v, sign] = gse_odd_majorana(g, v, sign).materialize()
        for (v1, s1), m1 in mats.items():
            assert np.allclose(m1, m1.conj().T, atol=1e-13), "odd majoranas are Hermitian"
            for (v2, s2), m2 in mats.items():
                want = 2 * np.eye(dim) if (v1, s1) == (v2, s2) else 0.0
                assert np.allclose(anticomm(m1, m2), want * np.eye(dim) if np.isscalar(want) else want, atol=1e-12)

    def test_vertex_op_recovered(self):
        g = square_graph()
        for v in range(g.num_vertices):
            gp = gse_odd_majorana(g, v, "+").materialize()
            gm = gse_odd_majorana(g, v, "-").materialize()
            bv = gse_vertex_op(g, v).materialize()
            assert np.allclose(-1j * gp @ gm, bv, atol=1e-13)

    def test_encoded_edge_matches_on_subspace(self):
        g = square_graph()
        proj = stabilizer_projector(g)
        for k, (i, j) in enumerate(g.edges):
            gp_i = gse_odd_majorana(g, i, "+").materialize()
            gp_j = gse_odd_majorana(g, j, "+").materialize()
            a_hat = -1j * gp_i @ gp_j
            a_tilde = gse_edge_op(g, k).materialize()
            assert np.allclose(a_hat @ proj, a_tilde @ proj, atol=1e-12)

    def test_odd_ops_swap_sectors(self):
        g = square_graph()
        p_plus = stabilizer_projector(g)
        p_minus = stabilizer_projector(g, flip_root=True)
        gp = gse_odd_majorana(g, 2, "+").materialize()
        # maps the +1 stabilized subspace into the flipped-root subspace
        image = gp @ p_plus
        assert np.allclose(p_minus @ image, image, atol=1e-12)
        back = gp @ p_minus
        assert np.allclose(p_plus @ back, back, atol=1e-12)


class TestHypercubicPreset:
    def test_qubits_per_site_2d_su3(self):
        g = hypercubic_preset(3, (2, 2))
        assert g.width == 4 * 4  # 4 sites, N + d - 1 = 4 qubits per site

    def test_qubits_per_site_3d_su3(self):
        g = hypercubic_preset(3, (2, 2, 2))
        assert g.width == 8 * 5  # N + d - 1 = 5

    def test_majorana_shapes_match_mixed_vertices(self):
        g = hypercubic_preset(3, (2, 2))
        per_site = [g.degrees[v] // 2 for v in range(3)]
        assert sorted(per_site) == [1, 1, 2]

    def test_1d_is_a_ring(self):
        g = hypercubic_preset(3, (2,))
        assert g.width == 6
        assert all(d == 2 for d in g.degrees)
        assert len(g.fundamental_cycles()) == 1

    def test_1d_matches_jw_spectrum(self):
        """Encoded free-fermion spectrum on the stabilized subspaces equals the
        Fock-space (JW) spectrum, split by fermion-number parity."""
        g = hypercubic_preset(1, (6,))
        layout = JwLayout("U1", 6)
        rng = np.random.default_rng(17)
        t_hop = rng.standard_normal(6)
        mu = rng.standard_normal(6)

        h_jw = OperatorSum.zero(6)
        h_gse = OperatorSum.zero(g.width)
        for i in range(6):
            j = (i + 1) % 6
            hop_jw = jw_raise(layout, i) @ jw_lower(layout, j)
            hop_gse = g.raise_(i) @ g.lower(j)
            h_jw = h_jw + (t_hop[i] * hop_jw) + (t_hop[i] * hop_jw).adjoint()
            h_gse = h_gse + (t_hop[i] * hop_gse) + (t_hop[i] * hop_gse).adjoint()
            h_jw = h_jw + mu[i] * (jw_raise(layout, i) @ jw_lower(layout, i))
            h_gse = h_gse + mu[i] * (g.raise_(i) @ g.lower(i))

        jw_mat = h_jw.materialize()
        parity = OperatorSum.from_letter_map(6, 1.0, {q: "Z" for q in range(6)}).materialize()
        evals, evecs = np.linalg.eigh(jw_mat)
        par = np.real(np.einsum("ij,jk,ki->i", evecs.conj().T, parity, evecs))
        spec_even = np.sort(evals[par > 0])
        spec_odd = np.sort(evals[par < 0])

        gse_mat = h_gse.materialize()
        specs = []
        for flip in (False, True):
            proj = stabilizer_projector(g, flip_root=flip)
            w, v = np.linalg.eigh(proj)
            basis = v[:, w > 0.5]
            specs.append(np.sort(np.linalg.eigvalsh(basis.conj().T @ gse_mat @ basis)))
        found_even = any(np.allclose(s, spec_even, atol=1e-10) for s in specs)
        found_odd = any(np.allclose(s, spec_odd, atol=1e-10) for s in specs)
        assert found_even and found_odd


class TestRandomGraphs:
    def test_generator_valid(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            g = random_even_graph(rng, int(rng.integers(2, 7)), int(rng.integers(6, 11)))
            assert all(d % 2 == 0 and d > 0 for d in g.degrees)

    def test_serialization_roundtrip(self):
        g = random_even_graph(np.random.default_rng(5), 5, 8)
        g2 = GseGraph.from_json(g.to_json())
        assert g2.edges == g.edges
        assert g2.root_edge == g.root_edge
        assert g2.slot_orders == g.slot_orders
