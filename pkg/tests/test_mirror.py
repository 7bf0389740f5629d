import numpy as np

from fkmverify.fkm import eval_F
from fkmverify.mirror import (direct_sharp, direct_star, mirror_triple, sharp_frame, star_frame,
                              tensor_difference, transport_sharp, transport_star)
from fkmverify.suites import sharp_involution_defect

from conftest import mplus_data


def test_mirror_points_lie_on_focal_manifolds(poly):
    frame, _ = mplus_data(poly, 1)
    mt = mirror_triple(poly, frame)
    xs, _ = mt.x_sharp
    xst, _ = mt.x_star
    assert abs(eval_F(poly, xs) - 1) < 1e-12
    assert abs(eval_F(poly, xst) + 1) < 1e-12


def test_transport_matches_direct(poly):
    for seed in range(3):
        frame, _ = mplus_data(poly, seed)
        mt = mirror_triple(poly, frame)
        assert tensor_difference(mt.sharp, direct_sharp(poly, frame)) < 1e-10
        assert tensor_difference(mt.star, direct_star(poly, frame)) < 1e-10


def test_sharp_is_an_involution(poly):
    frame, _ = mplus_data(poly, 4)
    mt = mirror_triple(poly, frame)
    assert sharp_involution_defect(mt) == 0
    ff = sharp_frame(sharp_frame(frame))
    assert np.array_equal(ff.point, frame.point) and np.array_equal(ff.normals, frame.normals)


def test_star_frame_dimensions(poly):
    frame, _ = mplus_data(poly, 5)
    assert star_frame(frame).dims() == (7, 7, 8)


def test_transport_requires_mirror_components(poly):
    _, t = mplus_data(poly, 6, with_mirror=False)
    for fn in (transport_sharp, transport_star):
        try:
            fn(t)
        except ValueError:
            continue
        raise AssertionError("expected ValueError")


def test_transport_detects_corrupted_data(poly):
    frame, t = mplus_data(poly, 7, with_mirror=True)
    t.mirror[0] = t.mirror[0] + 1e-3
    assert tensor_difference(transport_sharp(t), direct_sharp(poly, frame)) > 1e-4
