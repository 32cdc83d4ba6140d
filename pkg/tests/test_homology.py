import numpy as np
import pytest

from hommeas import codelib, f2la, homology, surgery
from hommeas.homology import ChainComplex, ChainMap

from conftest import random_chain_map, random_complex


def path_complex(n):
    """Vertices and edges of a path on ``n`` vertices: ``C_1 -> C_0``."""
    d = np.zeros((n, n - 1), np.uint8)
    for j in range(n - 1):
        d[j, j] = d[j + 1, j] = 1
    return ChainComplex({1: d})


class TestChainComplex:
    def test_dims_and_boundaries(self):
        c = path_complex(4)
        assert c.dims() == {0: 4, 1: 3}
        assert c.boundary(2).shape == (3, 0)
        assert c[1].shape == (4, 3)

    def test_rejects_nonzero_square(self):
        d1 = np.array([[1, 1]], np.uint8)
        d2 = np.array([[1], [0]], np.uint8)
        with pytest.raises(ValueError, match="!= 0"):
            ChainComplex({1: d1, 2: d2})

    def test_rejects_shape_clash(self):
        with pytest.raises(ValueError, match="dimension"):
            ChainComplex({1: np.ones((2, 3), np.uint8)}, dims={0: 4})

    def test_homology_of_path_and_cycle(self):
        assert homology.homology_dim(path_complex(5), 0) == 1
        assert homology.homology_dim(path_complex(5), 1) == 0
        cyc = np.array([[1, 0, 1], [1, 1, 0], [0, 1, 1]], np.uint8)
        c = ChainComplex({1: cyc})
        assert homology.homology_dim(c, 1) == 1

    @pytest.mark.parametrize("name,k", [("steane", 1), ("hamming15", 7)])
    def test_css_roundtrip(self, name, k):
        code = getattr(codelib, name)()
        chain = homology.css_to_chain(code)
        assert homology.homology_dim(chain, 1) == k
        back = homology.chain_to_css(chain)
        np.testing.assert_array_equal(back.hx, code.hx)
        np.testing.assert_array_equal(back.hz, code.hz)

    def test_equality(self):
        assert path_complex(3) == path_complex(3)
        assert path_complex(3) != path_complex(4)


class TestChainMap:
    def test_law_is_checked(self):
        a = path_complex(2)
        bad = {1: np.array([[1]], np.uint8), 0: np.zeros((2, 2), np.uint8)}
        with pytest.raises(ValueError, match="chain map law"):
            ChainMap(a, a, bad)

    def test_shape_is_checked(self):
        a = path_complex(2)
        with pytest.raises(ValueError, match="shape"):
            ChainMap(a, a, {1: np.ones((2, 2), np.uint8)})

    def test_missing_components_are_zero(self):
        a = path_complex(3)
        f = ChainMap(a, a, {})
        assert not f.component(0).any()


class TestConeAndCylinder:
    def test_cone_of_identity_is_exact(self):
        a = path_complex(4)
        ident = ChainMap(a, a, {i: np.eye(a.dim(i), dtype=np.uint8) for i in a.grades})
        cone = homology.mapping_cone(ident)
        assert homology.is_exact(cone)
        assert homology.alternating_dim_sum(cone) == 0

    def test_cone_block_layout(self):
        a = path_complex(2)
        c = path_complex(3)
        f = ChainMap(a, c, {0: np.array([[1, 0], [0, 1], [0, 0]], np.uint8),
                            1: np.array([[1], [0]], np.uint8)})
        cone = homology.mapping_cone(f)
        assert cone.dims() == {0: 3, 1: 4, 2: 1}
        np.testing.assert_array_equal(cone.boundary(1)[:, :2], c.boundary(1))
        np.testing.assert_array_equal(cone.boundary(1)[:, 2:], f.component(0))
        np.testing.assert_array_equal(cone.boundary(2), np.vstack([f.component(1), a.boundary(1)]))

    @pytest.mark.parametrize("seed", range(5))
    def test_cylinder_equals_auxiliary_cone(self, seed):
        rng = np.random.default_rng(seed)
        a = random_complex(rng, [2, 3, 2])
        c = random_complex(rng, [3, 2, 2])
        f = random_chain_map(rng, a, c)
        assert homology.mapping_cone(homology.cylinder_auxiliary(f)) == homology.mapping_cylinder(f)

    def test_cylinder_homology_matches_target(self):
        # the cylinder deformation retracts onto the target complex
        rng = np.random.default_rng(11)
        a = random_complex(rng, [2, 2, 1])
        c = random_complex(rng, [2, 3, 2])
        f = random_chain_map(rng, a, c)
        cyl = homology.mapping_cylinder(f)
        for i in c.grades:
            assert homology.homology_dim(cyl, i) == homology.homology_dim(c, i)


class TestGaugeCounts:
    def test_steane_measurement(self):
        code = codelib.steane()
        art = surgery.algorithm3_measure(code, surgery.PauliOperator.from_x([0, 1, 2], 7))
        anc = homology.ancilla_chain(art.d1, art.d0)
        f = homology.code_chain_map(code, anc, art.f1, art.f0)
        counts = homology.logical_gauge_counts(code, anc, f)
        assert counts == (0, 0)
        cone = homology.mapping_cone(f)
        assert homology.homology_dim(cone, 1) == counts.k + counts.r

    def test_unfixed_cycle_is_a_gauge(self):
        # a triangle with no cycle row leaves one gauge qubit behind
        code = codelib.steane()
        f1 = np.zeros((7, 3), np.uint8)
        f1[[0, 1, 2], [0, 1, 2]] = 1
        d1 = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], np.uint8)
        f0 = np.zeros((3, 3), np.uint8)
        # the cone needs hz f1 = f0 d1; solve for f0 one row at a time
        target = f2la.mat_mul(code.hz, f1)
        for r in range(3):
            x = f2la.solve(d1.T, target[r])
            assert x is not None
            f0[r] = x
        anc = homology.ancilla_chain(d1)
        f = homology.code_chain_map(code, anc, f1, f0)
        counts = homology.logical_gauge_counts(code, anc, f)
        assert counts.r == 1
        assert counts.k + counts.r == homology.homology_dim(homology.mapping_cone(f), 1)

    def test_equal_source_complex_is_accepted(self):
        code = codelib.steane()
        anc = homology.ancilla_chain(np.array([[1, 1]], np.uint8))
        other = homology.ancilla_chain(np.array([[1, 1]], np.uint8), np.zeros((0, 1), np.uint8))
        f = homology.code_chain_map(code, anc, np.zeros((7, 2), np.uint8), np.zeros((3, 1), np.uint8))
        assert homology.logical_gauge_counts(code, other, f).k == 1
