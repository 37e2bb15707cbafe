from collections import Counter

import numpy as np
import pytest

from diracsp import (
    NgfParams,
    betti_numbers,
    boundary_matrix,
    load_complex,
    load_flow,
    ngf_generate,
)
from diracsp.datasets import (
    coastal_flow,
    coastal_tessellation,
    dataset_path,
    florentine_marriage,
)
from diracsp.errors import DimensionMismatch, InvalidFlavor, ParseError


def test_seed_state_is_filled_triangle():
    K = ngf_generate(NgfParams(target_nodes=3, seed=0))
    assert K.counts == (3, 3, 1)
    assert K.triangles == ((0, 1, 2),)


@pytest.mark.parametrize("flavor", [-1, 0, 1])
@pytest.mark.parametrize("seed", [0, 1, 99])
def test_growth_counts(flavor, seed):
    # +1 node / +2 links / +1 triangle per step from the (3, 3, 1) seed state
    for n in (3, 10, 41):
        K = ngf_generate(NgfParams(target_nodes=n, flavor=flavor, seed=seed))
        assert K.counts == (n, 2 * n - 3, n - 2)
        assert K.euler_characteristic() == 1


def test_flavor_minus_one_is_manifold():
    for seed in range(5):
        K = ngf_generate(NgfParams(target_nodes=60, flavor=-1, seed=seed))
        per_link = Counter()
        for tri in K.triangles:
            i, j, k = tri
            per_link.update([(i, j), (i, k), (j, k)])
        assert max(per_link.values()) <= 2


def test_flavor_zero_can_oversubscribe_links():
    # without the saturation rule some link eventually joins > 2 triangles
    hit = False
    for seed in range(10):
        K = ngf_generate(NgfParams(target_nodes=60, flavor=0, seed=seed))
        per_link = Counter()
        for i, j, k in K.triangles:
            per_link.update([(i, j), (i, k), (j, k)])
        if max(per_link.values()) > 2:
            hit = True
            break
    assert hit


def test_generated_complexes_are_valid():
    for seed in (3, 4):
        K = ngf_generate(NgfParams(target_nodes=35, beta=1.5, seed=seed))
        B1, B2 = boundary_matrix(K, 1), boundary_matrix(K, 2)
        assert np.count_nonzero((B1 @ B2).toarray()) == 0
        assert betti_numbers(K)[0] == 1  # grown complexes are connected


def test_determinism():
    a = ngf_generate(NgfParams(target_nodes=50, seed=1234))
    b = ngf_generate(NgfParams(target_nodes=50, seed=1234))
    assert a == b
    c = ngf_generate(NgfParams(target_nodes=50, seed=1235))
    assert a != c


def test_invalid_params():
    with pytest.raises(InvalidFlavor):
        NgfParams(target_nodes=10, flavor=2)
    with pytest.raises(ValueError):
        NgfParams(target_nodes=2)
    with pytest.raises(ValueError):
        NgfParams(target_nodes=10, beta=-1.0)


def test_bundled_florentine():
    K = florentine_marriage()
    assert K.counts == (15, 20, 0)


def test_bundled_coastal():
    K = coastal_tessellation()
    assert K.counts == (133, 322, 186)


def test_load_complex_from_path():
    K = load_complex(dataset_path("coastal_tessellation.json"))
    assert K.counts == (133, 322, 186)


def test_load_flow(coastal):
    flow = coastal_flow(coastal)
    assert flow.s1.size == 322
    assert np.abs(flow.s0).max() == 0.0
    assert np.abs(flow.s2).max() == 0.0
    assert np.abs(flow.s1).max() > 0.0


def test_load_flow_rejects_unknown_link(tmp_path, ff_network):
    p = tmp_path / "flow.csv"
    p.write_text("block,index,value\nlink,25,1.0\n")
    with pytest.raises(DimensionMismatch):
        load_flow(p, ff_network)


def test_load_flow_rejects_non_link_rows(tmp_path, ff_network):
    p = tmp_path / "flow.csv"
    p.write_text("block,index,value\nnode,0,1.0\nlink,1,2.0\n")
    with pytest.raises(ParseError):
        load_flow(p, ff_network)
