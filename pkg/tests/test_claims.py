import dataclasses
import json
from fractions import Fraction

import pytest

from mordell_bounds.claims import (
    COVERAGE,
    EXPRESSIONS,
    Claim,
    ClaimKind,
    catalog_text,
    claims_from_document,
    coverage_report,
    get_claim,
    load_catalog,
    parse_number,
    resolve_operation,
    unknown_topics,
)
from mordell_bounds.cli_verify import (
    Verdict,
    decide,
    render,
    render_interval,
    verify_all,
    verify_claim,
)
from mordell_bounds.errors import DomainError, UnknownClaim
from mordell_bounds.numerics import Interval

FLIP = {"<": ">", ">": "<", "<=": ">", ">=": "<"}


def _claim(**kw):
    base = {"id": "t.x", "kind": "strict_ineq", "expr": "pi", "target": "3", "relation": ">"}
    base.update(kw)
    return Claim(**base)


# parsing


@pytest.mark.parametrize(
    "text, value",
    [("3", Fraction(3)), ("0.0073593", Fraction(73593, 10**7)), ("11/495", Fraction(1, 45)), (7, Fraction(7)),
     ("-2.5", Fraction(-5, 2)), ("1e3", Fraction(1000))],
)
def test_parse_number(text, value):
    assert parse_number(text) == value


@pytest.mark.parametrize("bad", ["pi", "", True, "1/0x"])
def test_parse_number_rejects(bad):
    with pytest.raises(DomainError):
        parse_number(bad)


# claim validation


def test_claim_validation():
    with pytest.raises(DomainError):
        _claim(expr="nonexistent")
    with pytest.raises(DomainError):
        _claim(relation="<=")
    with pytest.raises(DomainError):
        _claim(target=None)
    with pytest.raises(DomainError):
        _claim(kind="decimal_approx", digits=None)
    with pytest.raises(DomainError):
        _claim(kind="table_row", relation="==")
    with pytest.raises(DomainError):
        _claim(kind="identity", target=None)
    with pytest.raises(ValueError):
        _claim(kind="opinion")


def test_identity_boolean_targets():
    c = _claim(kind="identity", expr="xi_relation", params={"g": 2, "which": "xi_ratio"}, target="true", relation=None)
    assert c.target_value is True


# catalog


def test_catalog_loads_with_unique_ids():
    claims = load_catalog()
    ids = [c.id for c in claims]
    assert len(ids) == len(set(ids)) > 500
    assert ids == sorted(ids)
    assert all(c.expr in EXPRESSIONS for c in claims)
    assert all(c.tags and c.topics and c.anchor for c in claims)


def test_catalog_text_is_versioned_json():
    doc = json.loads(catalog_text())
    assert doc["version"] == 1


def test_grid_expansion_ids():
    doc = [{"id": "g", "kind": "nonneg_gap", "expr": "rational", "params": {}, "grid": {"value": {"from": 8, "to": 11}}}]
    ids = [c.id for c in claims_from_document(doc)]
    assert ids == ["g.value08", "g.value09", "g.value10", "g.value11"]
    listed = claims_from_document([{**doc[0], "grid": {"value": [1, 200]}}])
    assert [c.params["value"] for c in listed] == [1, 200]


def test_duplicate_ids_rejected():
    entry = {"id": "dup", "kind": "strict_ineq", "expr": "pi", "target": "3", "relation": ">"}
    with pytest.raises(DomainError):
        claims_from_document({"claims": [entry, entry]})


def test_get_claim():
    first = load_catalog()[0]
    assert get_claim(first.id) == first
    with pytest.raises(UnknownClaim):
        get_claim("no.such.claim")


# coverage self-test


def test_every_topic_is_covered():
    report = coverage_report()
    missing = [t for t, r in report.items() if not r["covered"]]
    assert missing == []
    assert unknown_topics() == set()


def test_coverage_operations_resolve():
    for topic, ops in COVERAGE.items():
        for op in ops:
            assert callable(resolve_operation(op)) or resolve_operation(op) is not None, (topic, op)


def test_coverage_flags_a_missing_topic():
    report = coverage_report([])
    claim_only = [t for t, ops in COVERAGE.items() if not ops]
    assert claim_only
    assert all(not report[t]["covered"] for t in claim_only)


def test_unknown_topic_is_reported():
    c = _claim(topics=("not_a_topic",))
    assert unknown_topics([c]) == {"not_a_topic"}


# decisions


def test_decimal_rule_uses_decimal_places():
    c = _claim(kind="decimal_approx", target="0.0073593", digits=7, relation=None)
    assert decide(c, Interval("0.0073597"))[0] is Verdict.CERTIFIED
    assert decide(c, Interval("0.0073607"))[0] is Verdict.REFUTED
    assert decide(c, Interval("0.0073590", "0.0073610"))[0] is Verdict.UNDECIDED


def test_strict_and_gap_rules():
    lt = _claim(relation="<")
    assert decide(lt, Interval(2))[0] is Verdict.CERTIFIED
    assert decide(lt, Interval(3))[0] is Verdict.REFUTED
    assert decide(lt, Interval("2.9", "3.1"))[0] is Verdict.UNDECIDED
    gap = _claim(kind="nonneg_gap", target=None, relation=None)
    assert decide(gap, Interval(0))[0] is Verdict.CERTIFIED
    assert decide(gap, Interval(-1, "-0.5"))[0] is Verdict.REFUTED
    assert decide(gap, Interval(-1, 1))[0] is Verdict.UNDECIDED


def test_table_row_rule():
    row = _claim(kind="table_row", relation="<=", target=None)
    assert decide(row, (Fraction(1, 3), Fraction(1, 3)))[0] is Verdict.CERTIFIED
    verdict, margin = decide(row, (Interval(1), Interval(3)))
    assert verdict is Verdict.CERTIFIED and margin.contains(2)
    assert decide(row, (Interval(3), Interval(1)))[0] is Verdict.REFUTED
    assert decide(row, None)[0] is Verdict.UNDECIDED
    assert decide(row, True)[0] is Verdict.CERTIFIED


def test_identity_rule():
    c = _claim(kind="identity", target="4512412640736", relation=None)
    assert decide(c, 4512412640736)[0] is Verdict.CERTIFIED
    assert decide(c, 4512412640737)[0] is Verdict.REFUTED
    assert decide(c, Interval(4512412640736))[0] is Verdict.CERTIFIED
    assert decide(c, Interval(4512412640735, 4512412640737))[0] is Verdict.UNDECIDED
    assert decide(c, None)[0] is Verdict.UNDECIDED


# verification


def test_injected_false_claim_is_refuted():
    bogus = _claim(id="inject.pi_below_3", relation="<", tags=("constants",))
    cert = verify_claim(bogus, 64)
    assert cert.verdict is Verdict.REFUTED
    report = verify_all(filter=["constants"], prec=64, extra_claims=[bogus])
    assert report.summary["refuted"] == 1 and report.exit_status == 1


def test_true_claim_is_certified():
    cert = verify_claim(_claim(id="pi.above_3"), 64)
    assert cert.verdict is Verdict.CERTIFIED and cert.precision_used == 64
    assert cert.enclosure.contains(Fraction(314159, 100000)) is False
    assert cert.enclosure.certainly_gt(3)


def test_precision_doubles_until_decided():
    # pi vs its 40-digit truncation is only separable well above 64 bits
    tight = _claim(id="pi.tight", target="3.141592653589793238462643383279502884197", relation=">")
    cert = verify_claim(tight, 64)
    assert cert.verdict is Verdict.CERTIFIED
    assert cert.precision_used > 64


def test_precision_cap_is_respected():
    tight = _claim(id="pi.capped", target="3.141592653589793238462643383279502884197", relation=">", max_bits=64)
    cert = verify_claim(tight, 256)
    assert cert.verdict is Verdict.UNDECIDED and cert.precision_used == 64


def test_errors_become_undecided():
    broken = _claim(id="broken", expr="thick_value", params={"g": 1}, target="0", relation=">")
    cert = verify_claim(broken, 64)
    assert cert.verdict is Verdict.UNDECIDED and cert.error


def test_filter_selects_by_tag():
    report = verify_all(filter=["tables"], prec=64)
    assert report.certificates
    assert all("tables" in get_claim(c.claim_id).tags for c in report.certificates)
    assert report.summary["refuted"] == 0


def test_flipped_table_rows_are_refuted():
    claims = [c for c in load_catalog() if "tables" in c.tags and c.kind is ClaimKind.TABLE_ROW][:60]
    assert claims
    for c in claims:
        flipped = dataclasses.replace(c, relation=FLIP[c.relation])
        assert verify_claim(flipped, 64).verdict is Verdict.REFUTED, c.id


def test_parallel_matches_serial():
    serial = verify_all(filter=["decimals"], prec=128)
    parallel = verify_all(filter=["decimals"], prec=128, parallelism=2)
    assert serial.canonical() == parallel.canonical()


# rendering


def test_render_is_directed():
    assert render(Fraction(1, 3), up=False) == "3.3333333333333333333E-1"
    assert render(Fraction(1, 3), up=True) == "3.3333333333333333334E-1"
    assert render(Fraction(-1, 3), up=False) == "-3.3333333333333333334E-1"
    assert render(0, up=True) == "0"
    lo, hi = render_interval(Interval(Fraction(2, 3)))
    assert Fraction(lo) <= Fraction(2, 3) <= Fraction(hi)
