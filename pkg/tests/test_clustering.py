import itertools
import json

import numpy as np
import pytest

from wcnet.api import DissimMatrix, BandMatrix, FrequencyBand, TimeWindow, dissimilarity_matrix, pam, dispersion, \
    gap_statistic, uniform_reference_panel, uniform_dissimilarities, reference_dissimilarities, gap_select_k, \
    clusters_to_json, band_matrices, REFERENCE_UNIFORM

from conftest import make_panel, band_limited


def _matrix(values) -> DissimMatrix:
    values = np.asarray(values, dtype=float)
    return DissimMatrix(assets=["A%d" % i for i in range(values.shape[0])], values=values)


def _euclidean(rng, n) -> np.ndarray:
    points = rng.random((n, 2))
    return np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2))


def _cost(d, medoids) -> float:
    return float(np.min(d[:, list(medoids)], axis=1).sum())


def _blocks() -> np.ndarray:
    d = np.full((6, 6), 0.9)
    d[:3, :3] = 0.1
    d[3:, 3:] = 0.1
    np.fill_diagonal(d, 0.0)
    return d


def test_dissimilarity_matrix():
    m = BandMatrix(band=FrequencyBand("b", 2.0, 5.0), window=None, assets=["x", "y"],
                   mean_r2=np.array([[1.0, 0.3], [0.3, 1.0]]), mean_oriented=np.eye(2))
    d = dissimilarity_matrix(m)
    assert d.assets == ["x", "y"]
    assert np.allclose(d.values, [[0.0, 0.7], [0.7, 0.0]])
    assert d.size == 2


def test_pam_against_exhaustive_search():
    matches = 0
    total = 0
    for trial in range(200):
        rng = np.random.default_rng(trial)
        n = int(rng.integers(4, 9))
        k = int(rng.integers(1, 4))
        d = _euclidean(rng, n)
        result = pam(_matrix(d), k)
        assert result.k == k
        assert result.medoids == sorted(result.medoids)
        assert result.total_cost == pytest.approx(_cost(d, result.medoids))
        # no single swap improves the result
        for m in result.medoids:
            for h in range(n):
                if h in result.medoids:
                    continue
                swapped = [x for x in result.medoids if x != m] + [h]
                assert _cost(d, swapped) >= result.total_cost - 1e-9
        best = min(_cost(d, c) for c in itertools.combinations(range(n), k))
        total += 1
        if result.total_cost <= best + 1e-9:
            matches += 1
    assert matches >= 0.95 * total


def test_pam_blocks():
    result = pam(_matrix(_blocks()), 2)
    assert result.labels[:3] == [result.labels[0]] * 3
    assert result.labels[3:] == [result.labels[3]] * 3
    assert result.labels[0] != result.labels[3]
    assert result.total_cost == pytest.approx(0.4)


def test_pam_edge_cases(rng):
    d = _euclidean(rng, 5)
    result = pam(_matrix(d), 5)
    assert result.total_cost == 0.0
    assert sorted(result.labels) == [0, 1, 2, 3, 4]
    single = pam(_matrix(d), 1)
    assert single.labels == [0] * 5
    with pytest.raises(ValueError):
        pam(_matrix(d), 0)
    with pytest.raises(ValueError):
        pam(_matrix(d), 6)


def test_pam_restarts_are_seeded(rng):
    d = _matrix(_euclidean(rng, 8))
    a = pam(d, 3, seed=7, restarts=5)
    b = pam(d, 3, seed=7, restarts=5)
    assert a == b
    assert a.total_cost <= pam(d, 3, restarts=0).total_cost + 1e-12


def test_pam_default_is_deterministic(rng):
    d = _matrix(_euclidean(rng, 8))
    assert pam(d, 3) == pam(d, 3)


def _partition(labels, assets):
    groups = {}
    for label, asset in zip(labels, assets):
        groups.setdefault(label, set()).add(asset)
    return sorted(sorted(g) for g in groups.values())


def test_pam_invariant_under_permutation():
    rng = np.random.default_rng(21)
    centers = np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0]])
    points = np.concatenate([c + 0.3 * rng.normal(size=(3, 2)) for c in centers])
    d = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=2))
    assets = ["A%d" % i for i in range(9)]
    original = pam(DissimMatrix(assets=assets, values=d), 3)
    order = rng.permutation(9)
    shuffled = pam(DissimMatrix(assets=[assets[i] for i in order], values=d[np.ix_(order, order)]), 3)
    assert shuffled.total_cost == pytest.approx(original.total_cost)
    assert _partition(shuffled.labels, [assets[i] for i in order]) == _partition(original.labels, assets)
    assert sorted(assets[order[m]] for m in shuffled.medoids) == sorted(assets[m] for m in original.medoids)


def test_dispersion():
    d = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]])
    assert dispersion(d, [0, 0, 0]) == pytest.approx(2.0)
    assert dispersion(d, [0, 0, 1]) == pytest.approx(0.5)
    assert dispersion(d, [0, 1, 2]) == 0.0


def test_gap_planted_blocks():
    d = _matrix(_blocks())
    refs = uniform_dissimilarities(d, num_refs=20, seed=1)
    result = gap_statistic(d, refs, 4)
    assert result.ks == [1, 2, 3, 4]
    assert result.k == 2
    assert len(result.gap) == 4
    assert result.num_refs == 20


def test_gap_all_zero():
    d = _matrix(np.zeros((4, 4)))
    result = gap_statistic(d, [np.zeros((4, 4))], 3)
    assert result.k == 1


def test_gap_preconditions():
    d = _matrix(_blocks())
    with pytest.raises(ValueError):
        gap_statistic(d, [d.values], 6)
    with pytest.raises(ValueError):
        gap_statistic(d, [d.values], 0)
    with pytest.raises(ValueError):
        gap_statistic(d, [], 2)


def test_uniform_dissimilarities():
    d = _matrix(_blocks())
    refs = uniform_dissimilarities(d, num_refs=3, seed=5)
    assert len(refs) == 3
    for ref in refs:
        assert np.allclose(ref, ref.T)
        assert np.all(np.diag(ref) == 0.0)
        off = ref[np.triu_indices(6, k=1)]
        assert np.all((off >= 0.1) & (off <= 0.9))
    again = uniform_dissimilarities(d, num_refs=3, seed=5)
    assert all(np.array_equal(a, b) for a, b in zip(refs, again))


def test_uniform_reference_panel(rng):
    panel = make_panel(rng.normal(size=(50, 4)))
    ref = uniform_reference_panel(panel, np.random.default_rng(0))
    assert ref.assets == panel.assets
    assert ref.dates == panel.dates
    values = ref.values
    assert np.all(values >= panel.values.min(axis=1)[:, None])
    assert np.all(values <= panel.values.max(axis=1)[:, None])


def test_reference_dissimilarities_shared_across_bands(rng):
    panel = make_panel(rng.normal(size=(128, 3)))
    bands = [FrequencyBand("short", 2.0, 5.0), FrequencyBand("medium", 5.0, 22.0)]
    refs = reference_dissimilarities(panel, bands, num_refs=2, seed=3)
    assert len(refs) == 2
    assert len(refs[0]) == 2
    assert refs[0][0].shape == (3, 3)
    single = reference_dissimilarities(panel, bands[1:], num_refs=2, seed=3)
    assert np.allclose(single[0][1], refs[1][1])


def test_gap_select_k_full_output():
    d = _matrix(_blocks())
    panel = make_panel(np.random.default_rng(0).normal(size=(64, 6)))
    k = gap_select_k(panel, d, 4, num_refs=20, seed=1, reference_mode=REFERENCE_UNIFORM)
    curve = gap_select_k(panel, d, 4, num_refs=20, seed=1, reference_mode=REFERENCE_UNIFORM, full_output=True)
    assert k == 2
    assert curve.k == k
    assert curve.ks == [1, 2, 3, 4]
    assert curve == gap_statistic(d, uniform_dissimilarities(d, num_refs=20, seed=1), 4)


def test_gap_select_k_uses_supplied_references():
    d = _matrix(_blocks())
    refs = uniform_dissimilarities(d, num_refs=10, seed=4)
    curve = gap_select_k(None, d, 3, refs=refs, full_output=True)
    assert curve.num_refs == 10
    assert curve == gap_statistic(d, refs, 3)
    with pytest.raises(ValueError):
        gap_select_k(None, d, 3, reference_mode="other")
    with pytest.raises(ValueError):
        gap_select_k(None, d, 3)


def _planted_panel(seed: int, n: int = 512):
    rng = np.random.default_rng(seed)
    factors = [band_limited(rng, n, 7, 16), band_limited(rng, n, 7, 16)]
    columns = [factors[i // 6] + 0.5 * rng.normal(size=n) for i in range(12)]
    return make_panel(np.column_stack(columns))


def _planted_outcome(seed: int, planted: bool):
    if planted:
        panel = _planted_panel(seed)
    else:
        panel = make_panel(np.random.default_rng(seed).normal(size=(512, 12)))
    band = FrequencyBand("medium", 5.0, 22.0)
    d = dissimilarity_matrix(band_matrices(panel, [band])[0])
    k = gap_select_k(panel, d, 6, num_refs=20, seed=seed, band=band, reference_mode=REFERENCE_UNIFORM)
    return k, pam(d, k).labels if k > 1 else None


def test_planted_structure_single_seed():
    k, labels = _planted_outcome(11, True)
    assert k == 2
    assert len(set(labels[:6])) == 1
    assert len(set(labels[6:])) == 1
    assert labels[0] != labels[6]


@pytest.mark.slow
def test_planted_structure_recovery():
    hits = 0
    for seed in range(10):
        k, labels = _planted_outcome(seed, True)
        if (k == 2) and (len(set(labels[:6])) == 1) and (len(set(labels[6:])) == 1) and (labels[0] != labels[6]):
            hits += 1
    assert hits >= 9


@pytest.mark.slow
def test_independent_noise_gives_single_cluster():
    hits = sum(1 for seed in range(10) if _planted_outcome(100 + seed, False)[0] == 1)
    assert hits >= 9


def test_clusters_to_json():
    d = _matrix(_blocks())
    assignment = pam(d, 2)
    gap = gap_statistic(d, uniform_dissimilarities(d, num_refs=5, seed=0), 3)
    report = json.loads(clusters_to_json(assignment, ["a", "b", "c", "d", "e", "f"], gap))
    assert report["schema"] == "wcnet.clusters/1"
    assert report["k"] == 2
    assert set(report["labels"].keys()) == {"a", "b", "c", "d", "e", "f"}
    assert report["gap"]["ks"] == [1, 2, 3]
    assert json.loads(clusters_to_json(assignment, ["a", "b", "c", "d", "e", "f"]))["gap"] is None
