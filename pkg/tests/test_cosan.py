from random import Random

import pytest

from cosan.coeff import (
    InjCoeff,
    InjNat,
    builtin_inj_coeff,
    random_inj_coeff,
    random_inj_nat,
    yoneda_inj_nat,
)
from cosan.cosan import (
    CosanElem,
    apply_nat,
    canonicalize_pair,
    cosan_map,
    evaluate,
    normalize_general_pair,
    tabulate_cosan,
    tabulate_nat,
)
from cosan.errors import IllTyped, LevelMismatch, NotEpi, OutOfWindow
from cosan.finset import FinFun, bell, compose, stirling2, window_functions
from cosan.tabular import validate_tab_functor, validate_tab_nat
from util import exp2_injection_levels, ff, orbit_quotient, powerset_subset, preimage


class TestCanonicalizePair:
    def test_swap_orbit_example(self):
        A = builtin_inj_coeff("exp:2", 3)
        swap = A.sets[2].index("2>2:2,1")
        e = canonicalize_pair(A, swap, ff("3>2:2,1,2"))
        assert e == CosanElem(2, A.sets[2].index("2>2:1,2"), ff("3>2:1,2,1"))

    def test_already_canonical_is_fixed(self):
        A = builtin_inj_coeff("exp:2", 3)
        e = canonicalize_pair(A, 0, ff("3>2:1,2,2"))
        assert e == CosanElem(2, 0, ff("3>2:1,2,2"))

    def test_singleton_coefficient(self):
        A = builtin_inj_coeff("partition", 3)
        e = canonicalize_pair(A, 0, ff("3>3:3,1,2"))
        assert e == CosanElem(3, 0, FinFun.identity(3))

    def test_identification_property(self):
        from cosan.coeff import act_inj
        from cosan.finset import enumerate_functions

        A = builtin_inj_coeff("exp:2", 3)
        for n in range(4):
            for k in range(n, 4):
                for x in enumerate_functions("sur", k, n):
                    for s in enumerate_functions("bij", n, n):
                        for a in range(A.size(n)):
                            assert canonicalize_pair(
                                A, a, compose(s, x)
                            ) == canonicalize_pair(A, act_inj(A, s, a), x)

    def test_errors(self):
        A = builtin_inj_coeff("exp:2", 2)
        with pytest.raises(NotEpi):
            canonicalize_pair(A, 0, ff("1>2:1"))
        with pytest.raises(LevelMismatch):
            canonicalize_pair(A, 5, ff("2>2:1,2"))


class TestNormalizeGeneralPair:
    def test_epi_input_reduces_to_canonicalize(self):
        A = builtin_inj_coeff("exp:2", 3)
        for x in ("3>2:2,1,2", "2>2:1,2"):
            assert normalize_general_pair(A, 0, ff(x)) == canonicalize_pair(
                A, 0, ff(x)
            )

    def test_constant_map_example(self):
        A = builtin_inj_coeff("exp:2", 3)
        a = A.sets[2].index("2>2:1,2")  # the identity element
        e = normalize_general_pair(A, a, ff("3>2:2,2,2"))
        assert e == CosanElem(1, A.sets[1].index("1>2:2"), ff("3>1:1,1,1"))

    def test_identity_like_input(self):
        A = builtin_inj_coeff("exp:2", 3)
        a = A.sets[2].index("2>2:1,2")
        e = normalize_general_pair(A, a, ff("2>2:1,2"))
        assert e == CosanElem(2, a, ff("2>2:1,2"))

    def test_out_of_window(self):
        A = builtin_inj_coeff("exp:2", 2)
        with pytest.raises(OutOfWindow):
            normalize_general_pair(A, 0, ff("2>3:1,2"))


class TestEvaluate:
    def test_builtin_counts(self):
        A = builtin_inj_coeff("exp:2", 3)
        assert len(evaluate(A, 3)) == 8
        P = builtin_inj_coeff("partition", 4)
        assert len(evaluate(P, 4)) == 15

    def test_size_zero(self):
        for name in ("exp:2", "partition", "constant"):
            A = builtin_inj_coeff(name, 3)
            elems = evaluate(A, 0)
            assert len(elems) == A.size(0)
            assert all(e.epi == FinFun(0, 0, ()) for e in elems)

    def test_empty_coefficients_evaluate_empty(self):
        from cosan.finset import window_injections

        empty = InjCoeff(2, ((), (), ()), {f: () for f in window_injections(2)})
        assert evaluate(empty, 2) == []

    def test_counting_identity_against_orbit_quotient(self):
        rng = Random(5)
        coeffs = [
            builtin_inj_coeff(n, 4)
            for n in ("exp:2", "exp:3", "partition", "constant")
        ] + [random_inj_coeff(rng, 4) for _ in range(5)]
        for A in coeffs:
            for k in range(5):
                elems = evaluate(A, k)
                formula = sum(
                    A.size(n) * stirling2(k, n) for n in range(A.window + 1)
                )
                count, reps = orbit_quotient(A, k)
                assert len(elems) == formula == count
                assert set(elems) == reps

    def test_ordering(self):
        A = builtin_inj_coeff("exp:2", 3)
        elems = evaluate(A, 3)
        keys = [(e.level, e.coeff, e.epi.values) for e in elems]
        assert keys == sorted(keys)


class TestCosanMap:
    def test_inclusion_inverse_image_example(self):
        A = builtin_inj_coeff("exp:2", 3)
        levels = exp2_injection_levels(3)
        # the element denoting the subset {1} of (3]
        one = A.sets[2].index("2>2:1,2")
        e = CosanElem(2, one, ff("3>2:1,2,2"))
        assert powerset_subset(levels, e) == frozenset({1})
        out = cosan_map(A, ff("2>3:1,2"), e)
        assert powerset_subset(levels, out) == frozenset({1})

    def test_point_inverse_image_example(self):
        A = builtin_inj_coeff("exp:2", 3)
        levels = exp2_injection_levels(3)
        one = A.sets[2].index("2>2:1,2")
        e = CosanElem(2, one, ff("3>2:1,2,2"))
        out = cosan_map(A, ff("1>3:2"), e)
        assert out.level == 1 and out.epi == ff("1>1:1")
        assert powerset_subset(levels, out) == frozenset()

    def test_identity_is_neutral(self):
        A = builtin_inj_coeff("exp:2", 3)
        for k in range(4):
            for e in evaluate(A, k):
                assert cosan_map(A, FinFun.identity(k), e) == e

    def test_inverse_image_oracle_everywhere(self):
        A = builtin_inj_coeff("exp:2", 3)
        levels = exp2_injection_levels(3)
        for f in window_functions(3):
            for e in evaluate(A, f.cod):
                expected = preimage(f, powerset_subset(levels, e))
                assert powerset_subset(levels, cosan_map(A, f, e)) == expected

    def test_contravariant_functoriality(self):
        for name in ("exp:2", "partition"):
            A = builtin_inj_coeff(name, 3)
            funs = window_functions(3)
            by_dom = {}
            for f in funs:
                by_dom.setdefault(f.dom, []).append(f)
            for u in funs:
                for v in by_dom.get(u.cod, ()):
                    vu = compose(v, u)
                    for e in evaluate(A, v.cod):
                        assert cosan_map(A, vu, e) == cosan_map(
                            A, u, cosan_map(A, v, e)
                        )


class TestApplyNat:
    def test_yoneda_full_subset_example(self):
        tau = yoneda_inj_nat(ff("1>2:1"), 2)
        elems = evaluate(tau.source, 2)
        assert len(elems) == 1
        out = apply_nat(tau, elems[0])
        levels = exp2_injection_levels(2)
        assert powerset_subset(levels, out) == frozenset({1, 2})

    def test_identity_transformation(self):
        from cosan.coeff import identity_inj_nat

        A = builtin_inj_coeff("exp:2", 3)
        tau = identity_inj_nat(A)
        for e in evaluate(A, 3):
            assert apply_nat(tau, e) == e

    def test_partial_family_raises(self):
        A = builtin_inj_coeff("partition", 2)
        B = builtin_inj_coeff("constant", 2)
        tau = InjNat(A, B, ((0,), (0,), None))
        e = evaluate(A, 2)[-1]
        assert e.level == 2
        with pytest.raises(IllTyped):
            apply_nat(tau, e)

    def test_commutes_with_cosan_map(self):
        rng = Random(17)
        nats = [yoneda_inj_nat(ff("1>2:1"), 3)]
        for _ in range(3):
            nats.append(random_inj_nat(rng, random_inj_coeff(rng, 3)))
        for tau in nats:
            for f in window_functions(3):
                for e in evaluate(tau.source, f.cod):
                    assert apply_nat(tau, cosan_map(tau.source, f, e)) == cosan_map(
                        tau.target, f, apply_nat(tau, e)
                    )


class TestTabulate:
    def test_sizes(self):
        assert tabulate_cosan(
            builtin_inj_coeff("exp:2", 3), 3
        ).tab.level_sizes() == [1, 2, 4, 8]
        assert tabulate_cosan(
            builtin_inj_coeff("partition", 4), 4
        ).tab.level_sizes() == [bell(k) for k in range(5)]
        assert tabulate_cosan(
            builtin_inj_coeff("constant", 3), 3
        ).tab.level_sizes() == [1, 1, 1, 1]

    def test_output_validates(self):
        for name in ("exp:2", "partition", "constant"):
            T = tabulate_cosan(builtin_inj_coeff(name, 3), 3)
            assert validate_tab_functor(T.tab).passed

    def test_index_maps_are_inverse(self):
        T = tabulate_cosan(builtin_inj_coeff("exp:2", 3), 3)
        for k in range(4):
            for i, e in enumerate(T.elems[k]):
                assert T.index[k][e] == i

    def test_tabulated_nat_is_natural(self):
        tau = yoneda_inj_nat(ff("1>2:1"), 3)
        psi = tabulate_nat(tau, 3)
        assert validate_tab_nat(psi) is None
