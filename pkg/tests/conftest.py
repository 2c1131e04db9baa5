import pytest

from ultrafriable import build_table, modulus_context


@pytest.fixture(scope="session")
def table10():
    return build_table(10)


@pytest.fixture(scope="session")
def table50():
    return build_table(50)


@pytest.fixture(scope="session")
def table100():
    return build_table(100)


@pytest.fixture(scope="session")
def ctx1_100(table100):
    return modulus_context(1, table100)


def divisors_of(n: int) -> list[int]:
    """Brute-force sorted divisor list, for oracle checks on small n."""
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
        d += 1
    return sorted(out)
