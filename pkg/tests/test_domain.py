import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bivekua.domain import Domain, build_grid, domain_from_json
from bivekua.errors import ConfigError, DegenerateDomain, NodeNotOnGrid


def test_disk_area_at_64(disk64):
    area = disk64.size * disk64.cell_area
    assert abs(area - np.pi) <= 0.02 * np.pi


def test_area_refinement():
    errs = [abs(build_grid(Domain.disk(), n).size * (2 / n) ** 2 - np.pi) for n in (64, 128)]
    assert errs[1] < errs[0]


def test_unit_square_tiles_exactly():
    g = build_grid(Domain.rectangle(0, 1, 0, 1), 10)
    assert g.size == 100
    assert np.isclose(g.cell_area, 0.01)


def test_boundary_orientation():
    g = build_grid(Domain.disk(), 8)
    assert np.isclose(g.winding_number(0), 1.0)
    assert abs(np.sum(g.boundary_tangents * g.boundary_weights)) < 1e-12
    assert g.n_boundary >= 4 * g.n
    r = build_grid(Domain.rectangle(-1, 2, -0.5, 0.5), 16)
    assert np.isclose(r.winding_number(0.1j), 1.0)
    assert np.isclose(r.boundary_weights.sum(), 8.0)


def test_boundary_points_near_cells(disk32):
    # every boundary point is within one cell diagonal of a node
    d = np.abs(disk32.boundary_points[:, None] - disk32.nodes[None, :]).min(axis=1)
    assert d.max() <= np.sqrt(2) * disk32.h


def test_errors():
    with pytest.raises(ValueError):
        build_grid(Domain.disk(), 4)
    with pytest.raises(DegenerateDomain):
        Domain.disk(radius=0)
    with pytest.raises(DegenerateDomain):
        Domain.rectangle(0, 0, 0, 1)


def test_node_lookup(disk32):
    k = 17
    assert disk32.node_index(disk32.nodes[k]) == k
    with pytest.raises(NodeNotOnGrid):
        disk32.node_index(0.0123 + 0.0456j)


def test_json_round_trip():
    d = Domain.disk(0.1 - 0.2j, 0.7)
    text = json.dumps(dict(d.to_dict(), n=48))
    d2, n = domain_from_json(text)
    assert d2 == d and n == 48
    with pytest.raises(ConfigError, match="line 2"):
        domain_from_json('{"kind": "disk",\n "radius": }')


@given(st.floats(0, 2 * np.pi, exclude_max=True))
def test_boundary_parameter_inverse(s):
    dom = Domain.rectangle(-1, 1, -0.5, 0.5)
    s = s * 6 / (2 * np.pi)
    z = dom.boundary_point(s)
    assert np.isclose(dom.boundary_parameter(z), s, atol=1e-9) or np.isclose(abs(s - 6), 0)


@given(st.floats(-0.95, 0.95), st.floats(-0.95, 0.95), st.floats(0, 2 * np.pi))
def test_exit_distance_lands_on_boundary(x, y, a):
    for dom in (Domain.disk(), Domain.rectangle(-1, 1, -1, 1)):
        z = complex(x, y)
        if not dom.contains(z):
            continue
        d = np.exp(1j * a)
        t = dom.exit_distance(np.array([z]), d)[0]
        assert abs(dom.distance_to_boundary(z + t * d)) < 1e-9
