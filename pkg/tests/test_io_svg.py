import pytest

from nlgap.graphs import cycle_graph, petersen_graph, random_regular
from nlgap.io import (graph_from_text, graph_to_text, map_assignment_from_text,
                      map_to_text, metric_from_text, metric_to_text,
                      read_manifest, write_manifest)
from nlgap.metrics import random_euclidean_metric, uniform_metric
from nlgap.poincare import VertexMap
from nlgap.svg import emit_svg


class TestGraphFormat:
    def test_round_trip_bit_exact(self):
        for g in (cycle_graph(5), petersen_graph(), random_regular(12, 3, seed=4)):
            text = graph_to_text(g)
            back = graph_from_text(text)
            assert back.edges == g.edges and back.n == g.n
            assert graph_to_text(back) == text

    def test_header_line(self):
        text = graph_to_text(cycle_graph(3))
        assert text.splitlines()[0] == "3 3"

    def test_edges_sorted(self):
        text = graph_to_text(petersen_graph())
        body = [tuple(map(int, line.split())) for line in text.splitlines()[1:]]
        assert body == sorted(body)


class TestMetricFormat:
    def test_round_trip_exact_floats(self):
        m = random_euclidean_metric(6, seed=9)
        text = metric_to_text(m)
        back = metric_from_text(text)
        assert (back.dist == m.dist).all()
        assert metric_to_text(back) == text

    def test_uniform(self):
        text = metric_to_text(uniform_metric(3))
        assert text.splitlines()[0] == "3"


class TestMapFormat:
    def test_round_trip(self):
        m = uniform_metric(3)
        f = VertexMap(m, (0, 2, 1, 1, 0))
        text = map_to_text(f)
        assert map_assignment_from_text(text) == (0, 2, 1, 1, 0)


class TestManifest:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "run.manifest"
        write_manifest(path, n=6, d=3, ell=2, trials=1000, seed=7)
        back = read_manifest(path)
        assert back == {"n": "6", "d": "3", "ell": "2", "trials": "1000", "seed": "7"}


class TestSvg:
    def test_deterministic_bytes(self):
        series = [("a", [(0.0, 1.0), (1.0, 2.0), (2.0, 1.5)])]
        assert emit_svg(series, title="t", config_echo="seed=1") == \
            emit_svg(series, title="t", config_echo="seed=1")

    def test_single_point_degenerate_chart(self):
        out = emit_svg([("only", [(1.0, 1.0)])])
        assert "<circle" in out and "<svg" in out

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            emit_svg([])
        with pytest.raises(ValueError):
            emit_svg([("empty", [])])

    def test_config_comment_embedded(self):
        out = emit_svg([("s", [(0, 0), (1, 1)])], config_echo="n=4 seed=2")
        assert "<!-- config: n=4 seed=2 -->" in out
