import json
from fractions import Fraction

import pytest

from qrr.errors import ParameterError
from qrr.registry import (
    cross_entry_checks,
    list_identities,
    make_instance,
    parse_rationals,
    verify,
    verify_id,
)
from qrr.series import ExactSeries


def test_registry_contents():
    ids = {e.id: e for e in list_identities()}
    assert {"rr-1", "rr-2", "macdonald-a2n2-eta", "a2n-1-sum", "hua", "milne-specialized"} <= set(ids)
    assert "n" in ids["macdonald-a2n2-eta"].param_names
    assert ids["a2n-1-sum"].kind == "conjecture"
    assert ids["rr-1"].kind == "classical"


def test_unknown_id_and_params():
    with pytest.raises(ParameterError):
        make_instance("no-such-id")
    with pytest.raises(ParameterError):
        make_instance("rr-1", {"n": 1})
    with pytest.raises(ParameterError):
        make_instance("macdonald-a2n2-eta", {"n": "two"})
    with pytest.raises(ParameterError):
        make_instance("a2n-1-sum-k2", {"n": 1, "p": 3})


def test_parse_rationals():
    assert parse_rationals("0, 1/7") == (Fraction(0), Fraction(1, 7))
    assert parse_rationals("") == ()


def test_rr1_passes():
    rep = verify_id("rr-1", 50)
    assert rep.status == "pass" and rep.summary == "pass"
    assert rep.first_mismatch is None
    assert rep.effective_order == 50


def test_perturbation_is_detected():
    bump = lambda s: s + ExactSeries.monomial(3)  # noqa: E731
    rep = verify_id("rr-1", 50, rhs_hook=bump)
    assert rep.status == "fail"
    assert rep.first_mismatch["exponent_num"] == 3 and rep.first_mismatch["exponent_den"] == 1
    assert rep.summary == "mismatch at q^3"


def test_perturbation_on_fractional_grid():
    inst = make_instance("macdonald-a2n-1-2-eta", {"n": 2})
    exp = inst.prefactor + 4
    rep = verify(inst, 20, rhs_hook=lambda s: s - ExactSeries.monomial(exp))
    assert rep.status == "fail"
    assert Fraction(rep.first_mismatch["exponent_num"], rep.first_mismatch["exponent_den"]) == exp


def test_conjecture_reports_verified_order():
    rep = verify_id("a2n-1-sum", 30, n=2, k=3, p=3)
    assert rep.status == "pass"
    assert rep.summary == "verified to order 30"
    assert any("evidence" in note for note in rep.convention_notes)


def test_sides_are_built_independently():
    rep = verify_id("a2n-sum-p-equals-k", 20, n=1, k=2)
    engines = [n for n in rep.convention_notes if n.startswith("lhs engines")]
    assert engines == ["lhs engines: fermionic_sum; rhs engines: bosonic_sum"]


def test_determinism_and_json_schema():
    a = verify_id("bressoud", 40, k=3, p=2).to_dict()
    b = verify_id("bressoud", 40, k=3, p=2).to_dict()
    a.pop("wall_time_ms")
    b.pop("wall_time_ms")
    assert a == b
    assert set(a) == {
        "id", "kind", "params", "order", "effective_order", "status", "summary", "first_mismatch", "convention_notes",
    }
    json.loads(verify_id("rr-2", 10).to_json())


def test_eta_offsets():
    inst = make_instance("jacobi-cube")
    assert inst.prefactor == Fraction(1, 8)
    assert make_instance("macdonald-a2n2-eta", {"n": 1}).prefactor == Fraction(1, 24)


def test_alternate_sign_convention_is_recorded():
    rep = verify_id("a2n-1-sum-k2", 20, n=1, p=1)
    assert rep.status == "pass"
    assert any(n.startswith("alternate-sign-convention: (-1)^a convention") for n in rep.convention_notes)


def test_andrews_gordon_product_vs_lattice_extra():
    rep = verify_id("andrews-gordon", 40, k=3, p=2)
    assert rep.status == "pass"
    assert any(n.startswith("rhs-product-vs-lattice") for n in rep.convention_notes)


def test_cross_entry_checks_small():
    rows = cross_entry_checks(order=15)
    assert rows and all(ok for _, ok, _ in rows)


def test_retired_ids_resolve_to_current_names():
    from qrr.registry import _aliases, get_entry

    table = _aliases()
    assert table
    for old, new in table.items():
        assert get_entry(old).id == new
    old = next(k for k, v in table.items() if v == "a2n-sum-p-equals-k")
    assert verify_id(old, 10, n=1, k=2).id == "a2n-sum-p-equals-k"
