"""Smoke test for the expgap Python extension."""

import json

import expgap_py as eg


def main():
    s2 = eg.AlgebraicNumber.sqrt("2")
    s3 = eg.AlgebraicNumber.sqrt("3")
    assert s2.degree == 2 and s2.minpoly == ["-2", "0", "1"]
    re, im = s2.approx()
    assert abs(re - 2 ** 0.5) < 1e-12 and im == 0.0

    cert = json.loads(eg.primitive_element([s2, s3]))
    assert cert["vartheta"]["minpoly"] == ["1", "0", "-10", "0", "1"]
    assert cert["T"] == "2"

    one = eg.AlgebraicNumber.rational("1")
    zero = eg.AlgebraicNumber.rational("0")
    minus_two = eg.AlgebraicNumber.rational("-2")
    form = eg.LinearForm([(one, one), (zero, minus_two)])
    assert form.verdict() == "positive-real"
    sign = json.loads(form.decide_sign(with_budget=True))
    assert sign["real_valued"] is True

    a = json.loads(eg.bound_a(1, 1, "0"))
    assert a["intermediates"]["r"]["mantissa"].startswith("369")
    b = json.loads(eg.bound_b(2, 1, "ln 3"))
    assert b["validity"] is False

    assert len(eg.enumerate(1, "2")) == 7
    assert len(eg.enumerate(1, "2", unit_disk_only=True)) == 5
    assert eg.lambda_count(4, 2, 2) == "32"

    rep = json.loads(eg.min_search(2, 1, "ln 3", cap_t=4))
    assert rep["collision"]["within_grid_bound"] is True

    try:
        eg.bound_a(1, 1, "-1")
    except ValueError:
        pass
    else:
        raise AssertionError("negative height accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
