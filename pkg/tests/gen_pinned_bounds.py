"""Regenerate tests/_pinned_bounds.py.

Evaluates every closed-form bound with mpmath at 50 significant digits,
independently of the library (plain formula transcription, no matconc
imports), and freezes 20 (params -> value) pairs per evaluator. Run from
the repository root:

    python3 tests/gen_pinned_bounds.py > tests/_pinned_bounds.py
"""

import itertools

import mpmath as mp

mp.mp.dps = 50


def bernstein(n, d, L, t):
    return 2 * d * mp.exp(-n * mp.mpf(t) ** 2 / (2 * mp.mpf(L) ** 2))


def main_tail(n, d, L, t, c):
    return 2 * d * mp.exp(-c * n * mp.mpf(t) ** 2 / (mp.mpf(L) ** 2 * mp.exp(2 * mp.mpf(L))))


def main_deviation(n, d, L, delta, c):
    return (
        mp.mpf(L)
        * mp.exp(mp.mpf(L))
        / mp.sqrt(mp.mpf(c) * n)
        * mp.sqrt(mp.log(2 * d / mp.mpf(delta)))
    )


def hw19_deviation(n, d, L, delta, hw):
    L = mp.mpf(L)
    logn = mp.log(n)
    lead = mp.mpf(hw) * L * mp.exp(L) * logn / mp.sqrt(n)
    return (
        lead * (mp.sqrt(mp.log(d / mp.mpf(delta)) + logn**2) + logn / mp.sqrt(n))
        + L**2 * mp.exp(L) / n
    )


def freedman(d, t, c, R, sigma2):
    t = mp.mpf(t)
    if t == 0:
        return mp.mpf(2 * d)
    denom = mp.mpf(R) * t + mp.mpf(sigma2)
    if denom == 0:
        return mp.mpf(0)
    return 2 * d * mp.exp(-mp.mpf(c) * t**2 / denom)


def take20(iterable):
    return list(itertools.islice(iterable, 20))


def emit(name, rows):
    print(f"{name} = [")
    for params, value in rows:
        print(f"    ({params!r}, {mp.nstr(value, 22)}),")
    print("]")
    print()


def main():
    print('"""Frozen high-precision bound values; regenerate with')
    print('gen_pinned_bounds.py. Do not edit by hand."""')
    print()

    rows = take20(
        ((dict(n=n, d=d, L=L, t=t), bernstein(n, d, L, t)))
        for n, d, L, t in itertools.product(
            (50, 400, 10**4), (1, 2, 8), (0.5, 1.0, 3.0), (0.0, 0.03, 0.2)
        )
    )
    emit("BERNSTEIN_TAIL", rows)

    rows = take20(
        ((dict(n=n, d=d, L=L, t=t, c=c), main_tail(n, d, L, t, c)))
        for n, d, L, t, c in itertools.product(
            (100, 4000), (2, 6), (0.5, 2.0), (0.01, 0.15), (0.125, 1.0)
        )
    )
    emit("MAIN_TAIL", rows)

    rows = take20(
        ((dict(n=n, d=d, L=L, delta=delta, c=c), main_deviation(n, d, L, delta, c)))
        for n, d, L, delta, c in itertools.product(
            (100, 10**4), (2, 4), (0.5, 1.0), (0.01, 0.2), (0.125, 1.0)
        )
    )
    emit("MAIN_DEVIATION", rows)

    rows = take20(
        ((dict(n=n, d=d, L=L, delta=delta, hw_constant=hw), hw19_deviation(n, d, L, delta, hw)))
        for n, d, L, delta, hw in itertools.product(
            (30, 1000, 10**6), (2, 8), (0.25, 1.0), (0.01, 0.1), (1.0, 2.5)
        )
    )
    emit("HW19_DEVIATION", rows)

    rows = take20(
        ((dict(d=d, t=t, c=c, R=R, sigma2=s2), freedman(d, t, c, R, s2)))
        for d, t, c, R, s2 in itertools.product(
            (1, 4), (0.0, 0.3, 1.0), (0.125, 1.0), (0.05, 1.0), (0.2, 1.0)
        )
    )
    emit("FREEDMAN_TAIL", rows)


if __name__ == "__main__":
    main()
