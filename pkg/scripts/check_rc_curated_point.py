#!/usr/bin/env python3
"""Recheck, without the package's coset or orbit code, that RC test (c) fires at [4,-1/2,3].

Minimal coset representatives are found by pushing simple roots through each
reduced word; exponents are moved one simple reflection at a time.  Both the
class-2 maximal partner and the first corank-2 partner (free nodes 3, 5) are checked:
r_T pi must have an exponent with larger multiplicity than in r_T sigma.
"""
from collections import Counter
from fractions import Fraction

from degps.exponent import Triple, initial_exponent
from degps.rootdata import build_root_datum
from degps.weyl import weyl_table

E6 = build_root_datum("E6")
A = E6.cartan.tolist()
N = 6


def reflect(i, real, tors, m):
    c, ct = real[i], tors[i]
    return ([real[j] - c * A[j][i] for j in range(N)], [(tors[j] - ct * A[j][i]) % m for j in range(N)])


def act(word, real, tors, m):
    for i in reversed(word):
        real, tors = reflect(i - 1, real, tors, m)
    return tuple(real), tuple(tors)


def root_reflect(i, beta):
    b = list(beta)
    b[i] -= sum(A[i][j] * beta[j] for j in range(N))
    return b


def min_reps(words, theta):
    out = []
    for w in words:
        good = True
        for j in theta:
            b = [int(k == j - 1) for k in range(N)]
            for i in reversed(w):
                b = root_reflect(i - 1, b)
            if min(b) < 0:
                good = False
                break
        if good:
            out.append(w)
    return out


def jacquet(words, theta, real, tors, m):
    return Counter(act(w, list(real), list(tors), m) for w in min_reps(words, theta))


def main():
    words = weyl_table(E6).words
    lam0 = initial_exponent(E6, Triple(4, Fraction(-1, 2), 3))
    pi = jacquet(words, [1, 2, 3, 5, 6], lam0.real, lam0.torsion, 3)
    print(f"|r_T pi| = {sum(pi.values())}")
    minus = Fraction(-1)
    partners = {
        "maximal [4,-1/2,3] (class 2)": ([1, 2, 3, 5, 6], [minus, minus, minus, Fraction(2), minus, minus],
                                         [0, 0, 0, 2, 0, 0]),
        "corank-2 [[3,5],[-1/2,-1/2],[1,1]]": ([1, 2, 4, 6], [minus, minus, Fraction(1), minus, Fraction(1), minus],
                                               [0, 0, 1, 0, 1, 0]),
    }
    lad = ([Fraction(x) for x in (0, 0, 0, -1, 0, 0)], [1] * N)
    orbit = {act(w, list(lad[0]), list(lad[1]), 3) for w in words}
    print(f"orbit of lam_ad: {len(orbit)} exponents; lam_0 in orbit: {(lam0.real, lam0.torsion) in orbit}")
    failures = 0
    for name, data in partners.items():
        theta, real, tors = data
        if (tuple(real), tuple(tors)) not in orbit:
            print(f"{name}: exponent not in the orbit of lam_ad")
            failures += 1
            continue
        sigma = jacquet(words, theta, real, tors, 3)
        excess = [(k, n, sigma[k]) for k, n in pi.items() if n > sigma[k]]
        print(f"{name}: |r_T sigma| = {sum(sigma.values())}, exponents with larger multiplicity in pi: {len(excess)}")
        failures += not excess
    return failures


if __name__ == "__main__":
    raise SystemExit(main())
