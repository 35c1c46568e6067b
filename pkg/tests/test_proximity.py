import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from socialtrack.errors import ParameterError
from socialtrack.geometry import BoundingBox, depth_estimate
from socialtrack.proximity import (
    DistanceMatrix,
    FrameReport,
    PersonFeature,
    SocialGroup,
    TrackSnapshot,
    build_groups,
    closeness_graph,
    closeness_threshold,
    feature_of,
    frame_report,
    pairwise_l2,
    violation_stats,
)

from oracles import bfs_components, scalar_l2
from scenes import group_scene

FRAME_H = 1080.0


def _random_features(rng, n, spread=400.0):
    return [PersonFeature(i + 1, *rng.uniform(0, spread, 2), rng.uniform(3, 30)) for i in range(n)]


def _oracle_groups(features, frame_h):
    pts = [(f.x, f.y, f.d) for f in features]
    dist = scalar_l2(pts)

    def thr(f):
        return 90 + 80 * min(max(f.y, 0.0), frame_h) / frame_h

    comps = bfs_components(len(features),
                           lambda a, b: dist[a][b] < min(thr(features[a]), thr(features[b])))
    return sorted(tuple(sorted(features[i].track_id for i in c)) for c in comps if len(c) >= 2)


def test_feature_of_box():
    f = feature_of(BoundingBox(0, 0, 10, 10), 7)
    assert (f.track_id, f.x, f.y) == (7, 5, 5)
    assert f.d == depth_estimate(BoundingBox(0, 0, 10, 10))


def test_l2_345():
    m = pairwise_l2([PersonFeature(1, 0, 0, 0), PersonFeature(2, 3, 4, 0)]).values
    np.testing.assert_array_equal(m, [[0, 5], [5, 0]])


def test_l2_empty():
    assert pairwise_l2([]).n == 0


@pytest.mark.parametrize("n", [1, 6, 20, 100])
def test_l2_matches_double_loop(n, rng):
    feats = _random_features(rng, n, spread=2000)
    got = pairwise_l2(feats).values
    ref = scalar_l2([(f.x, f.y, f.d) for f in feats])
    assert np.max(np.abs(got - np.array(ref))) <= 1e-9


def test_threshold_endpoints():
    assert closeness_threshold(0, FRAME_H) == 90
    assert closeness_threshold(FRAME_H, FRAME_H) == 170
    assert closeness_threshold(FRAME_H / 2, FRAME_H) == 130
    assert closeness_threshold(-50, FRAME_H) == 90 and closeness_threshold(5000, FRAME_H) == 170
    with pytest.raises(ParameterError):
        closeness_threshold(1, 0)


def test_no_groups_when_far_apart():
    feats = [PersonFeature(i, 300.0 * i, 500, 5) for i in range(5)]
    assert build_groups(pairwise_l2(feats), feats, FRAME_H) == []


def test_identical_positions_form_pair():
    feats = [PersonFeature(3, 100, 100, 5), PersonFeature(9, 100, 100, 5)]
    assert build_groups(pairwise_l2(feats), feats, FRAME_H) == [SocialGroup((3, 9), 0)]


def test_chain_is_one_group():
    feats = [PersonFeature(1, 0, 0, 5), PersonFeature(2, 80, 0, 5), PersonFeature(3, 160, 0, 5)]
    groups = build_groups(pairwise_l2(feats), feats, FRAME_H)
    assert groups == [SocialGroup((1, 2, 3), 0)]


def test_edge_uses_smaller_endpoint_threshold():
    # threshold at y=0 is 90, at y=frame_h is 170; distance ~ 100 sits between
    a = PersonFeature(1, 0, 0, 5)
    b = PersonFeature(2, 0, 100, 5)
    adj = closeness_graph(pairwise_l2([a, b]), [a, b], 200.0)
    assert not adj[0, 1]
    c = PersonFeature(2, 0, 85, 5)
    assert closeness_graph(pairwise_l2([a, c]), [a, c], 200.0)[0, 1]


def test_color_index_by_smallest_member():
    feats = [PersonFeature(10, 0, 0, 5), PersonFeature(4, 1000, 0, 5),
             PersonFeature(11, 10, 0, 5), PersonFeature(5, 1010, 0, 5)]
    groups = build_groups(pairwise_l2(feats), feats, FRAME_H)
    assert groups == [SocialGroup((4, 5), 0), SocialGroup((10, 11), 1)]


def test_random_frames_match_bfs_oracle(rng):
    for _ in range(200):
        n = int(rng.integers(0, 21))
        feats = _random_features(rng, n)
        got = sorted(g.members for g in build_groups(pairwise_l2(feats), feats, FRAME_H))
        assert got == _oracle_groups(feats, FRAME_H)


@given(st.integers(0, 2**32 - 1), st.integers(0, 20))
@settings(max_examples=60)
def test_group_neighbourhood_properties(seed, n):
    rng = np.random.default_rng(seed)
    feats = _random_features(rng, n)
    matrix = pairwise_l2(feats)
    adj = closeness_graph(matrix, feats, FRAME_H)
    groups = build_groups(matrix, feats, FRAME_H)
    grouped = {m for g in groups for m in g.members}
    for i, f in enumerate(feats):
        assert (adj[i].sum() >= 1) == (f.track_id in grouped)
    stats = violation_stats(groups)
    if stats.n_g:
        assert stats.v_i >= 2 and stats.n_p >= 2 * stats.n_g
        assert stats.estimated_violations == pytest.approx(stats.n_p)


@given(st.integers(0, 2**32 - 1), st.floats(-500, 500))
@settings(max_examples=40)
def test_horizontal_translation_invariance(seed, dx):
    rng = np.random.default_rng(seed)
    feats = _random_features(rng, 12)
    moved = [PersonFeature(f.track_id, f.x + dx, f.y, f.d) for f in feats]
    a, b = pairwise_l2(feats), pairwise_l2(moved)
    np.testing.assert_allclose(a.values, b.values, atol=1e-9)
    assert build_groups(a, feats, FRAME_H) == build_groups(b, moved, FRAME_H)


@pytest.mark.parametrize("sizes,expected", [((3, 3), 3.0), ((2, 2), 2.0), ((3, 2, 2), 7 / 3)])
def test_violation_index_from_scene(sizes, expected):
    boxes = group_scene(sizes)
    feats = [feature_of(b, i + 1) for i, b in enumerate(boxes)]
    groups = build_groups(pairwise_l2(feats), feats, FRAME_H)
    assert sorted(len(g.members) for g in groups) == sorted(sizes)
    assert violation_stats(groups).v_i == pytest.approx(expected)


def test_violation_stats_empty():
    s = violation_stats([])
    assert (s.n_g, s.n_p, s.v_i, s.estimated_violations) == (0, 0, 0.0, 0.0)


def test_frame_report_flags_and_round_trip():
    tracks = [TrackSnapshot(1, BoundingBox(0, 0, 10, 20), "confirmed"),
              TrackSnapshot(2, BoundingBox(5, 0, 10, 20), "tentative")]
    groups = [SocialGroup((1, 2), 0), SocialGroup((3, 4), 1)]
    r = frame_report(tracks, groups, violation_stats(groups), 12, 480.0)
    assert r.violation and r.timestamp_ms == 480.0
    assert FrameReport.from_dict(r.to_dict()) == r
    quiet = frame_report(tracks, [], violation_stats([]), 13, 520.0)
    assert not quiet.violation


def test_mismatched_matrix_rejected():
    with pytest.raises(ParameterError):
        closeness_graph(DistanceMatrix(np.zeros((2, 2))), [PersonFeature(1, 0, 0, 0)], FRAME_H)
