import pytest

from nlgap.graphs import (complete_bipartite_graph, complete_graph, cube_graph,
                          cycle_graph, path_graph, petersen_graph, prism_graph,
                          random_regular, star_graph)


def corpus_graphs():
    """Named connected graphs used across oracle tests."""
    return {
        "P2": path_graph(2), "P3": path_graph(3), "P5": path_graph(5),
        "C3": cycle_graph(3), "C4": cycle_graph(4), "C5": cycle_graph(5),
        "C6": cycle_graph(6), "C8": cycle_graph(8), "C10": cycle_graph(10),
        "K4": complete_graph(4), "K5": complete_graph(5), "K6": complete_graph(6),
        "K33": complete_bipartite_graph(3, 3), "prism": prism_graph(),
        "cube": cube_graph(), "petersen": petersen_graph(),
        "star6": star_graph(6),
    }


def regular_corpus_graphs():
    return {name: g for name, g in corpus_graphs().items()
            if g.regular_degree() is not None and g.regular_degree() >= 2}


@pytest.fixture(scope="session")
def corpus():
    return corpus_graphs()


@pytest.fixture(scope="session")
def regular_corpus():
    return regular_corpus_graphs()


@pytest.fixture(scope="session")
def small_random_regulars():
    return [random_regular(n, 3, seed=s) for n in (8, 10, 12) for s in (1, 2)]
