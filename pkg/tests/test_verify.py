import pytest

from coxshuffle import verify


def test_default_scope_passes():
    report = verify.verify_all()
    assert report["status"] == "PASS"
    statuses = {r.status for r in report["results"]}
    assert statuses <= {"PASS", "EXPECTED"}
    bad = [r for r in report["results"] if r.check == "good_prime" and r.detail["p"] == 3 and r.detail["group"] == "G2"]
    assert bad and bad[0].status == "EXPECTED"
    assert bad[0].detail["note"] == "negative face weight present: expected"


def test_empty_scope_warns():
    with pytest.warns(UserWarning):
        report = verify.verify_all([])
    assert report["status"] == "PASS" and report["results"] == []


def test_agreement_claims():
    from coxshuffle.coxeter import build_group
    claimed = {lbl: verify.agreement_claimed(build_group(lbl)) for lbl in
               ("A3", "B3", "C3", "G2", "I2(5)", "H3", "D4", "F4", "H4", "B2")}
    assert claimed == {"A3": True, "B3": True, "C3": True, "G2": True, "I2(5)": True, "H3": True,
                       "D4": False, "F4": False, "H4": False, "B2": True}


@pytest.mark.parametrize("label", ["D4", "F4"])
def test_unclaimed_agreement_is_info(label):
    res = verify.run_check({"check": "agree", "group": label})
    assert res.status == "INFO" and res.detail["equal"] is False


def test_unknown_check():
    with pytest.raises(ValueError):
        verify.run_check({"check": "nope"})
