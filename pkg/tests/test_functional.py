import math

import numpy as np
import pytest

from caccioppoli import (
    ContractError,
    DomainError,
    LabelSet,
    Partition2D,
    QuadratureSpec,
    SurfaceIntegrand,
    check_symmetry,
    evaluate_functional,
    jump_set,
    make_integrand,
    perimeter,
    total_variation,
)
from caccioppoli.functional import functional_over_facets
from caccioppoli.generators import gen_inscribed_polygon

from conftest import centroid_refine


def diagonal_square():
    """Unit square split along its diagonal; one facet from (0,0) to (1,1)."""
    return Partition2D(
        [(0, 0), (1, 0), (1, 1), (0, 1)],
        [[0, 1, 2], [0, 2, 3]],
        [0, 1],
        LabelSet([[0.0], [1.0]]),
    )


class TestEvaluateFunctional:
    def test_constant_integrand_gives_perimeter(self, random_partitions):
        for u in random_partitions[:10]:
            g = make_integrand("one", u.labels, u.bounding_box(), 2)
            assert evaluate_functional(u, g) == pytest.approx(
                perimeter(u), abs=1e-12 * max(1.0, perimeter(u))
            )

    def test_jump_integrand_gives_total_variation(self, random_partitions):
        for u in random_partitions[:10]:
            g = make_integrand("jump", u.labels, u.bounding_box(), 2)
            assert evaluate_functional(u, g) == pytest.approx(
                total_variation(u), abs=1e-12 * max(1.0, total_variation(u))
            )

    def test_split_square_anisotropic(self, split_square):
        g = make_integrand("aniso-x", split_square.labels, split_square.bounding_box(), 2)
        assert evaluate_functional(split_square, g) == pytest.approx(1.0, abs=1e-12)

    def test_orientation_invariance(self, random_partitions):
        u = random_partitions[0]
        g = make_integrand("smooth-x", u.labels, u.bounding_box(), 2)
        quad = QuadratureSpec()
        fwd = functional_over_facets(jump_set(u), u.labels, g, quad)
        flipped = [f.flipped() for f in jump_set(u)]
        rev = functional_over_facets(flipped, u.labels, g, quad)
        assert abs(fwd - rev) < 1e-12 * max(1.0, abs(fwd))

    def test_linearity(self, random_partitions):
        u = random_partitions[1]
        bbox = u.bounding_box()
        g1 = make_integrand("one", u.labels, bbox, 2)
        g2 = make_integrand("smooth-x", u.labels, bbox, 2)
        alpha, beta = 0.3, -1.7
        combo = SurfaceIntegrand(
            fn=lambda x, a, b, nu: alpha * g1(x, a, b, nu) + beta * g2(x, a, b, nu),
            bound=abs(alpha) * g1.bound + abs(beta) * g2.bound,
            name="combo",
        )
        lhs = evaluate_functional(u, combo)
        rhs = alpha * evaluate_functional(u, g1) + beta * evaluate_functional(u, g2)
        assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))

    def test_bounded_by_declared_bound_times_perimeter(self, random_partitions):
        for u in random_partitions[:10]:
            for name in ("one", "jump", "aniso-x", "smooth-x"):
                g = make_integrand(name, u.labels, u.bounding_box(), 2)
                val = abs(evaluate_functional(u, g))
                assert val <= g.bound * perimeter(u) * (1 + 1e-12)

    def test_quadrature_exact_for_stated_degree(self):
        u = diagonal_square()
        for order in (1, 2, 3, 4):
            d = 2 * order - 1
            g = SurfaceIntegrand(
                fn=lambda x, a, b, nu, _d=d: x[0] ** _d, bound=1.0, name="mono"
            )
            val = evaluate_functional(u, g, QuadratureSpec(order=order))
            exact = math.sqrt(2.0) / (d + 1)
            assert val == pytest.approx(exact, rel=1e-13)

    def test_quadrature_spectral_convergence(self):
        u = gen_inscribed_polygon(6, 0.7)
        g = SurfaceIntegrand(
            fn=lambda x, a, b, nu: math.exp(math.sin(x[0] + x[1])),
            bound=math.e + 1e-9,
            name="analytic",
        )
        vals = {
            k: evaluate_functional(u, g, QuadratureSpec(order=k)) for k in (1, 2, 4, 8)
        }
        c1 = abs(vals[2] - vals[1])
        c2 = abs(vals[4] - vals[2])
        c3 = abs(vals[8] - vals[4])
        assert c2 < 0.5 * c1
        assert c3 < 0.5 * c2

    def test_refinement_invariance(self, random_partitions):
        u = random_partitions[2]
        g = make_integrand("smooth-x", u.labels, u.bounding_box(), 2)
        refined = centroid_refine(u)
        a = evaluate_functional(u, g)
        b = evaluate_functional(refined, g)
        assert abs(a - b) < 1e-10 * max(1.0, abs(a))

    def test_order_below_one_rejected(self):
        with pytest.raises(DomainError):
            QuadratureSpec(order=0)

    def test_non_finite_integrand_aborts(self, split_square):
        g = SurfaceIntegrand(
            fn=lambda x, a, b, nu: float("nan"), bound=1.0, name="nan"
        )
        with pytest.raises(ContractError):
            evaluate_functional(split_square, g)

    def test_asymmetric_integrand_aborts(self, split_square):
        g = SurfaceIntegrand(
            fn=lambda x, a, b, nu: float(nu[0]), bound=1.0, name="odd"
        )
        with pytest.raises(ContractError):
            evaluate_functional(split_square, g)

    def test_bound_violation_aborts(self, split_square):
        g = SurfaceIntegrand(
            fn=lambda x, a, b, nu: 5.0, bound=1.0, name="liar"
        )
        with pytest.raises(ContractError):
            evaluate_functional(split_square, g)


class TestCheckSymmetry:
    def test_constant_is_symmetric(self):
        Z = LabelSet([[0.0], [1.0]])
        g = make_integrand("one", Z, (0, 0, 1, 1), 2)
        rep = check_symmetry(g, Z, samples=64, seed=3)
        assert rep.max_asymmetry == 0.0
        assert rep.ok

    def test_jump_is_symmetric(self):
        Z = LabelSet([[0.0], [1.0], [2.0]])
        g = make_integrand("jump", Z, (0, 0, 1, 1), 2)
        rep = check_symmetry(g, Z, samples=128, seed=4)
        assert rep.max_asymmetry == 0.0

    def test_directional_integrand_is_flagged(self):
        Z = LabelSet([[0.0], [1.0]])
        g = SurfaceIntegrand(fn=lambda x, a, b, nu: float(nu[0]), bound=1.0, name="odd")
        rng = np.random.default_rng(5)
        max_nu1 = 0.0
        for _ in range(64):
            rng.random(2)
            rng.integers(0, 2, size=2)
            nu = rng.normal(size=2)
            nu /= np.linalg.norm(nu)
            max_nu1 = max(max_nu1, abs(nu[0]))
        rep = check_symmetry(g, Z, samples=64, seed=5)
        assert not rep.symmetric
        assert rep.max_asymmetry == pytest.approx(2.0 * max_nu1, abs=1e-12)

    def test_bound_reporting(self):
        Z = LabelSet([[0.0], [3.0]])
        g = SurfaceIntegrand(fn=lambda x, a, b, nu: 2.0, bound=1.0, name="tall")
        rep = check_symmetry(g, Z, samples=16, seed=0)
        assert not rep.bounded

    def test_sample_count_validated(self):
        Z = LabelSet([[0.0], [1.0]])
        g = make_integrand("one", Z, (0, 0, 1, 1), 2)
        with pytest.raises(DomainError):
            check_symmetry(g, Z, samples=0)


class TestRegistry:
    def test_all_builtin_names_resolve(self, split_square):
        bbox = split_square.bounding_box()
        for name in ("one", "jump", "aniso-x", "smooth-x"):
            g = make_integrand(name, split_square.labels, bbox, 2)
            assert g.bound > 0

    def test_unknown_name_rejected(self, split_square):
        with pytest.raises(DomainError):
            make_integrand("nope", split_square.labels, split_square.bounding_box(), 2)

    def test_polynomial_integrand(self, split_square):
        terms = [
            {"coef": 1.0, "x_powers": [0, 0], "nu_powers": [2, 0]},
            {"coef": 0.5, "x_powers": [1, 0], "nu_powers": [0, 0]},
        ]
        g = make_integrand(
            "poly", split_square.labels, split_square.bounding_box(), 2,
            params={"terms": terms},
        )
        rep = check_symmetry(g, split_square.labels, samples=128, seed=1)
        assert rep.ok
        # on the vertical interface nu = (-1, 0) and x1 = 1/2
        val = evaluate_functional(split_square, g)
        assert val == pytest.approx(1.0 + 0.5 * 0.5, abs=1e-12)

    def test_polynomial_odd_normal_degree_rejected(self, split_square):
        terms = [{"coef": 1.0, "x_powers": [0, 0], "nu_powers": [1, 0]}]
        with pytest.raises(DomainError):
            make_integrand(
                "poly", split_square.labels, split_square.bounding_box(), 2,
                params={"terms": terms},
            )

    def test_smooth_x_bound_covers_domain(self):
        u = gen_inscribed_polygon(8, 0.9)
        g = make_integrand("smooth-x", u.labels, u.bounding_box(), 2)
        # evaluating anywhere in the box stays within the declared bound
        evaluate_functional(u, g)
