"""Smoke test for the truncbin extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""

import json

import truncbin as tb


def expect_raises(exc, fn, *args):
    try:
        fn(*args)
    except exc:
        return
    raise AssertionError(f"{fn.__name__}{args} did not raise {exc.__name__}")


def main():
    assert tb.truncated2_direct(1, 2, 7) == 2058
    assert tb.truncated2_direct(1, 1, 3) == 6
    assert tb.truncated3(1, 1, 4, 3) == 150
    for form in ("mixed", "q_minus_a", "q_minus_b"):
        assert tb.truncated2_series(-4, 7, 11, form) == tb.truncated2_direct(-4, 7, 11)
    big = 10**40 + 7
    assert tb.truncated2_direct(big, 3, 5) == (big + 3) ** 5 - big**5 - 3**5
    assert tb.factored_u2(5, 9, 11) == tb.truncated2_direct(5, 9, 11)

    v = tb.padic_valuation(2058, 7)
    assert (v.exponent, v.cofactor) == (3, 6), v
    assert v.divisible_by_power(3) and not v.divisible_by_power(4)
    assert tb.padic_valuation(0, 7).is_infinite

    assert tb.binomial_equation_verdict(3, -3, 5).kind == "trivial_only"
    verdict = tb.case_a_verdict(1, 2, 11, 7)
    assert [t[1] for t in verdict.tiers] == ["undetermined", "incompatible"], verdict.tiers
    assert verdict.to_dict()["kind"] == verdict.kind

    e = tb.case_b_exponents(1, 5)
    assert (e.rho_c, e.rho_beta, e.rho_q) == (1, 0, 4)
    assert tb.case_b_consistency_check(1, 8, 3, 3)["exponents_match"] is True

    report = tb.scan_divisibility(11)
    assert report.witnesses == [] and report.modulus == 121
    assert json.loads(report.to_json())["n"] == 11
    assert tb.scan_divisibility(7).witnesses[0] == (1, 2)
    assert tb.scan_quadratic(5)["zero_set"] == []

    expect_raises(ValueError, tb.truncated2_direct, 1, 1, 9)
    expect_raises(tb.PreconditionError, tb.case_b_exponents, 0, 3)
    expect_raises(tb.PreconditionError, tb.case_a_verdict, 1, 3, 2, 3)
    expect_raises(tb.BudgetError, tb.scan_divisibility, 11, 2, True, 0, 10)
    assert issubclass(tb.PreconditionError, ValueError)

    outcomes = tb.verify(claim="expansion-11")
    assert len(outcomes) == 1 and outcomes[0]["passed"], outcomes
    print("smoke test passed")


if __name__ == "__main__":
    main()
