import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import naive_d_min
from qpam_pnc.constellation import JointSymbol, build_constellation, l_min, min_distance_difference, neighbor_report
from qpam_pnc.curve import turning_points
from qpam_pnc.gf import ConfigurationError
from qpam_pnc.ncmap import (
    DminResult,
    NcPair,
    all_pairs,
    cluster_of,
    cluster_partition,
    clustering_candidates_at_trough,
    clustering_pairs,
    d_min,
    nc_map,
    optimal_ab_bruteforce,
    optimal_ab_closed,
    partition_blocks,
    same_cluster_condition,
    ser_bound,
)
from test_constellation import eta_grid

Q_SMALL = [3, 5, 7, 11, 13]


def test_nc_map_examples():
    assert nc_map((4, 1), (5, 0), 7) == 6
    assert nc_map((4, 1), (0, 6), 7) == 6
    for q in Q_SMALL:
        assert nc_map((1, 1), (0, 0), q) == 0


def test_partition_examples():
    assert cluster_partition(5, (1, 1))[0] == {(0, 0), (1, 4), (2, 3), (3, 2), (4, 1)}
    p = cluster_partition(3, (1, 2))
    assert p[0] == {(0, 0), (1, 1), (2, 2)}
    assert partition_blocks(7, (3, 3)) == partition_blocks(7, (1, 1))


@pytest.mark.parametrize("q", Q_SMALL)
def test_partition_structure_exhaustive(q):
    for pair in all_pairs(q):
        part = cluster_partition(q, pair)
        assert len(part) == q
        for members in part.values():
            assert len(members) == q
            assert len({s.w_a for s in members}) == q
            assert len({s.w_b for s in members}) == q
            s = next(iter(members))
            assert cluster_of(s, pair, q) == members


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13])
def test_scaling_leaves_partition_and_distance_unchanged(q):
    c = build_constellation(q, F(2 * q + 1, q + 2))
    for pair in all_pairs(q):
        base = partition_blocks(q, pair)
        ref = d_min(c, pair)
        for k in range(2, q):
            scaled = NcPair(*pair).scaled(k, q)
            assert partition_blocks(q, scaled) == base
            r = d_min(c, scaled)
            assert (r.d_min, r.a_min) == (ref.d_min, ref.a_min)


def test_clustering_pairs_examples():
    assert clustering_pairs((0, 4), (1, 3), 5) == {(4, 4), (3, 3), (2, 2), (1, 1)}
    assert clustering_pairs((0, 6), (0, 5), 7) == set()
    assert (4, 1) in clustering_pairs((0, 6), (5, 0), 7)
    with pytest.raises(ValueError):
        clustering_pairs((1, 1), (1, 1), 7)


@given(st.sampled_from(Q_SMALL), st.data())
def test_clustering_pairs_really_cluster(q, data):
    s1 = data.draw(st.tuples(st.integers(0, q - 1), st.integers(0, q - 1)))
    s2 = data.draw(st.tuples(st.integers(0, q - 1), st.integers(0, q - 1)))
    if s1 == s2:
        return
    pairs = clustering_pairs(s1, s2, q)
    brute = {p for p in all_pairs(q) if nc_map(p, s1, q) == nc_map(p, s2, q)}
    assert pairs == brute
    assert len(pairs) in (0, q - 1)


def test_same_cluster_condition():
    assert same_cluster_condition((1, -1), (2, -2), 7)
    assert not same_cluster_condition((1, -1), (5, -6), 7)
    assert not same_cluster_condition((1, 0), (1, 3), 5)


@pytest.mark.parametrize("eta,pair,expected", [(1, (1, 1), 1), (F(7, 6), (1, 1), F(1, 6)),
                                               (F(6, 5), (4, 1), F(1, 5))])
def test_d_min_examples(eta, pair, expected):
    assert d_min(build_constellation(7, eta), pair).d_min == expected


def test_multiplicity_at_first_trough():
    c = build_constellation(7, F(7, 6))
    assert d_min(c, (4, 1)).a_min == 36
    assert d_min(c, (1, 1)).a_min == 2


@given(st.sampled_from([3, 5, 7]), st.integers(1, 200), st.integers(1, 60), st.data())
def test_d_min_and_multiplicity_match_naive(q, num, den, data):
    eta = F(num, den)
    if eta < 1:
        eta = 1 / eta
    pair = data.draw(st.sampled_from(all_pairs(q)))
    r = d_min(build_constellation(q, eta), pair)
    d, a = naive_d_min(q, eta, pair)
    assert r.d_min == d
    if d > 0:
        assert r.a_min == a


def test_mixed_overlap_gives_zero_distance():
    r = d_min(build_constellation(7, 1), (1, 2))
    assert r.d_min == 0 and r.a_min > 0


@pytest.mark.parametrize("q,eta,member", [(7, 1, (1, 1)), (7, F(6, 5), (4, 1)), (5, 4, (4, 1)),
                                          (5, 9, (4, 1))])
def test_bruteforce_optimum_examples(q, eta, member):
    opt = optimal_ab_bruteforce(build_constellation(q, eta))
    assert NcPair(*member) in opt.maximizers
    assert opt.pair == min(opt.maximizers)


def test_bruteforce_optimum_values():
    assert optimal_ab_bruteforce(build_constellation(7, 1)).result.d_min == 1
    assert optimal_ab_bruteforce(build_constellation(7, F(6, 5))).result.d_min == F(1, 5)
    assert optimal_ab_bruteforce(build_constellation(5, 4)).result.d_min == 1


def test_closed_form_examples():
    assert optimal_ab_closed(7, F(6, 5)) == (6, 5)
    assert NcPair(6, 5).canonical(7) == (4, 1)
    assert optimal_ab_closed(7, 1) == (1, 1)
    # 4a/5 - b over nonzero a, b: (1,1) and (4,3) tie at 1/5; lexicographic pick
    assert optimal_ab_closed(5, F(5, 4)) == (1, 1)


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_closed_form_agrees_with_bruteforce_off_troughs(q):
    troughs = {t.eta for t in turning_points(q) if t.parity == "odd"}
    for eta in eta_grid(q, 80):
        if eta in troughs or eta >= q - 1:
            continue
        c = build_constellation(q, eta)
        closed = optimal_ab_closed(q, eta).canonical(q)
        assert closed in optimal_ab_bruteforce(c).classes(q), eta


def test_trough_candidates():
    cands = clustering_candidates_at_trough(build_constellation(7, F(7, 6)))
    assert cands == {"left": (4, 1), "right": (1, 1)}
    five = clustering_candidates_at_trough(build_constellation(5, F(5, 4)))
    assert five["left"] != five["right"]
    with pytest.raises(ValueError):
        clustering_candidates_at_trough(build_constellation(7, F(6, 5)))


@pytest.mark.parametrize("q", Q_SMALL)
def test_optimum_clusters_a_minimising_difference(q):
    troughs = {t.eta for t in turning_points(q) if t.parity == "odd"}
    for eta in eta_grid(q, 60):
        if eta in troughs or eta >= q:
            continue
        c = build_constellation(q, eta)
        diffs = min_distance_difference(c)
        for a, b in optimal_ab_bruteforce(c).maximizers:
            assert any((da * a + db * b) % q == 0 for da, db in diffs), (eta, a, b)


@pytest.mark.parametrize("q", Q_SMALL)
def test_optimum_beats_l_min(q):
    for eta in eta_grid(q, 60):
        c = build_constellation(q, eta)
        best = optimal_ab_bruteforce(c).result.d_min
        lm = l_min(c)
        assert best >= lm
        if lm == 0:
            assert best > 0


@pytest.mark.parametrize("q", Q_SMALL)
def test_ratio_pair_clusters_every_overlap_group(q):
    for eta in eta_grid(q, 60):
        m, n = eta.numerator, eta.denominator
        if m % q == 0 or n % q == 0:
            continue
        c = build_constellation(q, eta)
        pair = (m % q, n % q)
        for group in c.overlap_groups():
            assert len({nc_map(pair, s, q) for s in group}) == 1


@pytest.mark.parametrize("q", Q_SMALL)
def test_no_pair_clusters_both_neighbours_with_reference(q):
    for eta in eta_grid(q, 60):
        if not 1 < eta < q - 1:
            continue
        rep = neighbor_report(build_constellation(q, eta))
        ref = rep.reference
        for pair in all_pairs(q):
            v = nc_map(pair, ref, q)
            for left in rep.left:
                for right in rep.right:
                    assert not (nc_map(pair, left, q) == v == nc_map(pair, right, q))


def test_ser_bound_value_against_direct_formula():
    c = build_constellation(5, 1)
    res = optimal_ab_bruteforce(c).result
    rho = 100.0
    arg = float(res.d_min) * math.sqrt(rho / (2 * (25 - 1) / 12))
    q_tail = 0.5 * math.erfc(arg / math.sqrt(2))
    got = ser_bound(5, rho, res)
    assert not got.vacuous
    assert got.value == pytest.approx(res.a_min * q_tail / 25, rel=1e-12)


def test_ser_bound_monotonicity_and_limits():
    r1 = DminResult(F(1, 4), 3)
    r2 = DminResult(F(1, 2), 3)
    assert ser_bound(7, 1e3, r2).value < ser_bound(7, 1e3, r1).value
    assert ser_bound(7, 1e12, r1).value < 1e-100
    assert ser_bound(7, 10, DminResult(F(0), 4)) == (1.0, True)
    with pytest.raises(ConfigurationError):
        ser_bound(7, 0, r1)


def test_pair_validation():
    with pytest.raises(ConfigurationError):
        NcPair(0, 1).validate(7)
    assert NcPair(3, 5).canonical(7).beta == 1
