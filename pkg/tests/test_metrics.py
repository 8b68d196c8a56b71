"""Agreement metrics against the scikit-learn reference implementations."""

import numpy as np
import pytest
from sklearn.metrics import (
    adjusted_mutual_info_score,
    adjusted_rand_score,
    normalized_mutual_info_score,
)

from wellconn.clustering import Clustering
from wellconn.errors import InvalidArgumentError
from wellconn.metrics import ami, ari, contingency, nmi


def from_labels(universe, labels):
    groups = {}
    for node, lab in zip(universe, labels):
        groups.setdefault(str(lab), set()).add(node)
    return Clustering(universe, groups)


UNIVERSE9 = [f"n{i}" for i in range(9)]
SPLIT = from_labels(UNIVERSE9, [0, 0, 0, 1, 1, 1, 2, 2, 2])


def test_identity_scores_one():
    assert nmi(SPLIT, SPLIT) == pytest.approx(1.0)
    assert ami(SPLIT, SPLIT) == pytest.approx(1.0)
    assert ari(SPLIT, SPLIT) == pytest.approx(1.0)


def test_label_names_are_ignored():
    renamed = from_labels(UNIVERSE9, ["x", "x", "x", "q", "q", "q", "z", "z", "z"])
    assert ari(SPLIT, renamed) == pytest.approx(1.0)
    assert ami(SPLIT, renamed) == pytest.approx(1.0)


def test_crossed_pairs_ari():
    # two 2-groupings sharing no pair: ARI is -1/2 for n=4
    u = from_labels(list("abcd"), [0, 0, 1, 1])
    v = from_labels(list("abcd"), [0, 1, 0, 1])
    assert ari(u, v) == pytest.approx(-0.5)
    assert adjusted_rand_score([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5)


def test_one_cluster_vs_singletons():
    universe = [f"n{i}" for i in range(12)]
    lump = from_labels(universe, [0] * 12)
    dust = from_labels(universe, range(12))
    assert nmi(lump, dust) == pytest.approx(0.0)
    assert ami(lump, dust) == pytest.approx(0.0)
    assert ari(lump, dust) == pytest.approx(0.0)


def test_two_trivial_clusterings_agree():
    universe = [f"n{i}" for i in range(5)]
    lump = from_labels(universe, [0] * 5)
    assert nmi(lump, lump) == 1.0
    assert ami(lump, lump) == 1.0
    assert ari(lump, lump) == 1.0


def test_contingency_marginals():
    u = from_labels(UNIVERSE9, [0, 0, 0, 1, 1, 1, 2, 2, 2])
    v = from_labels(UNIVERSE9, [0, 0, 1, 1, 1, 2, 2, 2, 2])
    ct = contingency(u, v)
    assert ct.n == 9
    assert int(ct.a.sum()) == 9 and int(ct.b.sum()) == 9
    assert sum(ct.cells.values()) == 9


def test_universe_mismatch_rejected():
    u = from_labels(["a", "b"], [0, 1])
    v = from_labels(["a", "c"], [0, 1])
    with pytest.raises(InvalidArgumentError):
        nmi(u, v)
    with pytest.raises(InvalidArgumentError):
        contingency(Clustering([], {}), Clustering([], {}))


def _random_case(rng, n, with_gaps):
    universe = [f"n{i}" for i in range(n)]
    ku = int(rng.integers(1, 7))
    kv = int(rng.integers(1, 7))
    lu = rng.integers(0, ku, size=n)
    lv = rng.integers(0, kv, size=n)
    if with_gaps:
        # leave some nodes unassigned on each side; they materialize as
        # singletons, which the flat label arrays mimic with unique ids
        mu = rng.random(n) < 0.7
        mv = rng.random(n) < 0.7
        cu = from_labels([x for x, m in zip(universe, mu) if m],
                         lu[mu]).clusters
        cv = from_labels([x for x, m in zip(universe, mv) if m],
                         lv[mv]).clusters
        u = Clustering(universe, cu)
        v = Clustering(universe, cv)
        lu = np.where(mu, lu, 100 + np.arange(n))
        lv = np.where(mv, lv, 100 + np.arange(n))
    else:
        u = from_labels(universe, lu)
        v = from_labels(universe, lv)
    return u, v, lu, lv


@pytest.mark.filterwarnings("ignore:The number of unique classes")
@pytest.mark.parametrize("with_gaps", [False, True])
def test_reference_parity_sweep(with_gaps):
    rng = np.random.default_rng(20240817)
    for _ in range(25):
        u, v, lu, lv = _random_case(rng, 60, with_gaps)
        assert nmi(u, v) == pytest.approx(
            normalized_mutual_info_score(lu, lv), abs=1e-9)
        assert ami(u, v) == pytest.approx(
            adjusted_mutual_info_score(lu, lv), abs=1e-9)
        assert ari(u, v) == pytest.approx(
            adjusted_rand_score(lu, lv), abs=1e-9)


def test_symmetry_and_permutation_invariance():
    rng = np.random.default_rng(7)
    for _ in range(10):
        u, v, _, _ = _random_case(rng, 40, False)
        assert nmi(u, v) == pytest.approx(nmi(v, u), abs=1e-12)
        assert ami(u, v) == pytest.approx(ami(v, u), abs=1e-12)
        assert ari(u, v) == pytest.approx(ari(v, u), abs=1e-12)


def test_ami_never_exceeds_nmi():
    # chance adjustment can only lower the score
    rng = np.random.default_rng(11)
    for _ in range(50):
        u, v, _, _ = _random_case(rng, 30, False)
        assert ami(u, v) <= nmi(u, v) + 1e-9
