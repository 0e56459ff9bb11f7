import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gsb.engine import Presentation  # noqa: E402
from gsb.groups import PartialIso, SubgroupWithCosets, cyclic  # noqa: E402
from gsb.hnn import HnnSpec  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def cyclic_presentation(n, label="a0"):
    return Presentation(("x",), [(("x",) * n, ())], {}, [label], f"C{n}")


def s3_presentation():
    return Presentation(("x", "y"), [("x x", "1"), ("y y", "1"), ("x y x", "y x y")], name="S3")


def hnn_base(H, C, D, phi, c_reps=None, d_reps=None):
    Cs = SubgroupWithCosets(H, C, c_reps) if c_reps else SubgroupWithCosets.with_default_reps(H, C)
    Ds = SubgroupWithCosets(H, D, d_reps) if d_reps else SubgroupWithCosets.with_default_reps(H, D)
    return HnnSpec(H, Cs, Ds, PartialIso(H, C, D, phi))


def z2_full_base():
    H = cyclic(2, "h")
    return hnn_base(H, H.elements, H.elements, {x: x for x in H.elements})


def z2_free_base():
    H = cyclic(2, "h")
    return hnn_base(H, ["1"], ["1"], {})


def z4_half_base():
    H = cyclic(4, "h")
    return hnn_base(H, ["1", "h2"], ["1", "h2"], {"1": "1", "h2": "h2"}, ["1", "h"], ["1", "h"])


@pytest.fixture
def fixtures_dir():
    return FIXTURES
