import pytest

from ordino.fgh import FghBudgetExceeded, NotALimit, fast_growing, fund_seq
from ordino.ordinal import (OMEGA, ONE, ZERO, add, compare, from_int, mul,
                            omega_term, parse_ord, print_ord)

W = OMEGA


def test_fund_seq_examples():
    assert fund_seq(W, 3) == from_int(3)
    assert fund_seq(omega_term(from_int(2)), 3) == parse_ord("w*3")
    assert fund_seq(omega_term(W), 2) == parse_ord("w^2")
    assert fund_seq(parse_ord("w^2 + w"), 4) == parse_ord("w^2 + 4")
    assert fund_seq(parse_ord("w*3"), 5) == parse_ord("w*2 + 5")


def test_fund_seq_rejects_non_limits():
    for bad in (ZERO, ONE, add(W, ONE)):
        with pytest.raises(NotALimit):
            fund_seq(bad, 3)


def _limits_up_to_w_to_w():
    out = []
    for e2 in range(3):
        for c2 in range(3):
            for c1 in range(1, 3):
                terms = []
                if e2 and c2:
                    terms.append((from_int(e2 + 1), c2))
                terms.append((ONE, c1))
                value = ZERO
                for exp, coeff in terms:
                    value = add(value, omega_term(exp, coeff))
                out.append(value)
    out += [omega_term(W), add(omega_term(W), omega_term(from_int(2), 2)),
            omega_term(add(W, ONE)), omega_term(mul(W, from_int(2)))]
    return out


def test_fund_seq_properties():
    for a in _limits_up_to_w_to_w():
        previous = None
        for n in range(51):
            member = fund_seq(a, n)
            assert compare(member, a) == -1, print_ord(a)
            if previous is not None and n >= 1:
                assert compare(previous, member) == -1, (print_ord(a), n)
            previous = member


# --- independent oracle: direct recursion without budgets ------------------------


def oracle_f(k: int, n: int) -> int:
    if k == 0:
        return n + 1
    value = n
    for _ in range(n):
        value = oracle_f(k - 1, value)
    return value


def test_spot_values_match_oracle():
    assert oracle_f(0, 7) == 8
    assert oracle_f(1, 5) == 10
    assert oracle_f(2, 3) == 24
    assert oracle_f(2, 8) == 2048 and oracle_f(2, 2) == 8
    assert fast_growing(ZERO, 7) == 8
    assert fast_growing(ONE, 5) == 10
    assert fast_growing(from_int(2), 3) == 24
    assert fast_growing(from_int(3), 2) == oracle_f(2, oracle_f(2, 2)) == 2048


def test_closed_forms_to_sixteen():
    for n in range(17):
        assert fast_growing(ONE, n, 10**7) == oracle_f(1, n) == 2 * n
    for n in range(17):
        expected = n * 2**n
        assert oracle_f(2, n) == expected
        got = fast_growing(from_int(2), n, 10**8)
        assert got == expected, n


def test_monotone_in_argument_and_index():
    for k in range(3):
        alpha = from_int(k)
        values = [fast_growing(alpha, n, 10**7) for n in range(1, 8)]
        assert values == sorted(values) and len(set(values)) == len(values)
    for n in range(1, 6):
        assert fast_growing(from_int(2), n) >= fast_growing(ONE, n)
        assert fast_growing(ONE, n) >= fast_growing(ZERO, n)


def test_limit_levels_use_fundamental_sequences():
    assert fast_growing(W, 2) == oracle_f(2, 2)
    assert fast_growing(add(W, ONE), 1) == oracle_f(1, 1)


def test_budget_exhaustion():
    result = fast_growing(from_int(3), 3, step_budget=10**4)
    assert isinstance(result, FghBudgetExceeded)
