"""Ring layer: tags, derivations, element validation."""

import pytest

from diffmod.diffring import DiffRing, derive
from diffmod.exactalg import Poly


def test_tags_round_trip():
    for ring in DiffRing:
        assert DiffRing.from_tag(ring.tag) is ring
    with pytest.raises(ValueError):
        DiffRing.from_tag("galois")


def test_poly_ring_derivation():
    p = Poly([1, 2, 3])  # 3x^2 + 2x + 1
    assert derive(DiffRing.POLY_DX, p) == Poly([2, 6])


def test_const_ring_derivation_kills_everything():
    assert derive(DiffRing.CONST_ZERO, Poly([5])).is_zero()


def test_const_ring_rejects_nonconstant_elements():
    with pytest.raises(ValueError):
        DiffRing.CONST_ZERO.validate_element(Poly([0, 1]))
    DiffRing.CONST_ZERO.validate_element(Poly([7]))  # fine
    DiffRing.POLY_DX.validate_element(Poly([0, 1]))  # fine


def test_constants_subfield_description():
    for ring in DiffRing:
        info = ring.constants_description()
        assert info.field_name == "QQ"
        assert info.is_field
        assert info.projective_class_monoid_trivial
