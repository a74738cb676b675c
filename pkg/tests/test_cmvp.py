import pytest

from esfme.cmvp import CuRect, MvGrid, ScheduleViolation, derive_cmvp
from esfme.rate import MotionVector


def test_record_and_read_back():
    g = MvGrid()
    g.record_mv((0, 0), (4, -8))
    assert g.get((0, 0)) == MotionVector(4, -8)


def test_double_write_is_a_schedule_bug():
    g = MvGrid()
    g.record_mv((3, 4), (0, 0))
    with pytest.raises(ScheduleViolation):
        g.record_mv((3, 4), (4, 0))


def test_single_slot_on_fresh_grid():
    g = MvGrid()
    g.record_mv((15, 15), (1, 1))
    present = [(x, y) for y in range(16) for x in range(16) if g.slots[y][x] is not None]
    assert present == [(15, 15)]


def test_record_outside_ctu():
    with pytest.raises(IndexError):
        MvGrid().record_mv((16, 0), (0, 0))


def test_cmvp_both_absent_is_zero():
    assert derive_cmvp(MvGrid(), CuRect(0, 0, 8, 8)) == (0, 0)


def test_cmvp_left_only():
    g = MvGrid()
    g.record_mv((1, 2), (4, -8))
    assert derive_cmvp(g, CuRect(16, 16, 16, 16)) == (4, -8)


def test_cmvp_left_has_priority():
    g = MvGrid()
    g.record_mv((1, 2), (4, 0))
    g.record_mv((2, 1), (0, 8))
    assert derive_cmvp(g, CuRect(16, 16, 8, 8)) == (4, 0)


def test_cmvp_falls_back_to_above():
    g = MvGrid()
    g.record_mv((2, 1), (0, 8))
    assert derive_cmvp(g, CuRect(16, 16, 16, 16)) == (0, 8)


def test_cmvp_uses_top_left_neighbours_only():
    g = MvGrid()
    # left of the CU's second row, not of its top-left block
    g.record_mv((1, 3), (12, 12))
    assert derive_cmvp(g, CuRect(16, 16, 16, 16)) == (0, 0)


def test_context_at_ctu_border():
    g = MvGrid(left=[MotionVector(4, 4)] * 16)
    assert derive_cmvp(g, CuRect(0, 64, 64, 64)) == (4, 4)
    g = MvGrid(above=[None] * 8 + [MotionVector(-4, 0)] * 8)
    assert derive_cmvp(g, CuRect(64, 0, 64, 32)) == (-4, 0)
    assert derive_cmvp(MvGrid(), CuRect(0, 0, 128, 128)) == (0, 0)


def test_absent_in_ctu_reads_are_counted():
    g = MvGrid()
    derive_cmvp(g, CuRect(8, 8, 8, 8))
    assert g.absent_reads == 2
    derive_cmvp(g, CuRect(0, 0, 8, 8))  # only context, never counted
    assert g.absent_reads == 2


def test_deterministic():
    writes = [((0, 0), (4, 0)), ((1, 0), (8, 4)), ((0, 1), (-4, 4))]
    outs = []
    for _ in range(2):
        g = MvGrid()
        for pos, mv in writes:
            g.record_mv(pos, mv)
        outs.append([derive_cmvp(g, CuRect(x, y, 8, 8)) for x in (0, 8, 16) for y in (0, 8, 16)])
    assert outs[0] == outs[1]


@pytest.mark.parametrize("args", [(4, 0, 8, 8), (0, 0, 12, 8), (64, 0, 128, 128), (120, 0, 16, 8)])
def test_cu_rect_validation(args):
    with pytest.raises(ValueError):
        CuRect(*args)


def test_cu_rect_corners():
    cu = CuRect(64, 32, 64, 32)
    assert cu.top_left == (8, 4)
    assert cu.bottom_right == (15, 7)
