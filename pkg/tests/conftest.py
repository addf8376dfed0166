import numpy as np
import pytest

from caccioppoli import LabelSet, Partition1D, Partition2D
from caccioppoli.generators import random_partition_2d


@pytest.fixture(scope="session")
def random_partitions():
    """The first 50 seeded random fields, shared across test modules."""
    return [random_partition_2d(seed) for seed in range(50)]


@pytest.fixture
def split_square():
    """Unit square split at x = 1/2, labels 0 | 1."""
    return Partition2D(
        [(0, 0), (0.5, 0), (1, 0), (0, 1), (0.5, 1), (1, 1)],
        [[0, 1, 4, 3], [1, 2, 5, 4]],
        [0, 1],
        LabelSet([[0.0], [1.0]]),
    )


@pytest.fixture
def three_level_line():
    """1D field with breakpoints 1/4, 1/2 over labels {0, 1, 2}."""
    return Partition1D((-1.0, 1.0), [0.25, 0.5], [0, 1, 2], LabelSet([[0.0], [1.0], [2.0]]))


def centroid_refine(u: Partition2D) -> Partition2D:
    """Split every cell into a centroid fan; labels and facets unchanged."""
    vertices = [tuple(p) for p in u.vertices]
    cells, labels = [], []
    for c, cell in enumerate(u.cells):
        centroid = tuple(np.mean(u.vertices[cell], axis=0))
        vertices.append(centroid)
        ci = len(vertices) - 1
        m = len(cell)
        for k in range(m):
            cells.append([cell[k], cell[(k + 1) % m], ci])
            labels.append(u.cell_labels[c])
    return Partition2D(vertices, cells, labels, u.labels)
