import pytest

from k3strata.coverage import verify_remark
from k3strata.errors import PartBoundEmpty
from k3strata.fieldarith import EllipticCurveData, count_points
from k3strata.parallel import parallel_map


def test_parallel_map_keeps_order():
    ns = list(range(9, 16))
    assert parallel_map(verify_remark, ns, workers=3) == [verify_remark(n) for n in ns]


def test_parallel_map_in_process():
    curves = [EllipticCurveData.create(7, 1, b) for b in (0, 1, 3)]
    assert parallel_map(count_points, curves, workers=1) == [count_points(e) for e in curves]
    assert parallel_map(count_points, [], workers=4) == []


def test_domain_errors_cross_process_boundary():
    with pytest.raises(PartBoundEmpty):
        parallel_map(verify_remark, [9, 2, 10], workers=2)
