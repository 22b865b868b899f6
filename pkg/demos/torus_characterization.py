"""Two deciders, one answer, on the abelian case.

On a torus the almost automorphy question reduces to two exact linear
conditions: (U - I)^2 = 0, and (U - I)a landing in the lattice image
(U - I)Z^d.  The package also answers through the general nilmanifold
machinery; this script races both on worked examples and a seeded random
family and prints the certificates that back the verdicts.
"""

import random
from fractions import Fraction as F

from nilaa import QMatrix, full_decide, make_system, torus_decide
from nilaa.nilalg import LieAlgebraSpec


def abelian(dim):
    return LieAlgebraSpec(dim, {})


def describe(label, system):
    general = full_decide(system)
    special = torus_decide(system)
    agree = "agree" if general.status == special.status else "DISAGREE"
    print(f"{label}: general {general.status}, torus-only "
          f"{special.status} ({agree})")
    cert = general.certificate
    if cert is None:
        return
    if hasattr(cert, "subspace"):
        basis = [tuple(int(v) for v in row) for row in cert.subspace.basis]
        print(f"  witness subspace basis {basis}, shift {cert.shift}")
    elif hasattr(cert, "generators"):
        print(f"  defect constant {cert.vector} misses the lattice span of "
              f"{[tuple(int(v) for v in g) for g in cert.generators]}")
    else:
        print(f"  certificate: {cert}")


def main():
    skew = QMatrix([[1, 1], [0, 1]])
    describe("skew shear, a = (1/2, 0)",
             make_system(abelian(2), automorphism=skew,
                         translation=[F(1, 2), F(0)]))
    describe("skew shear, a = (0, 1/2)",
             make_system(abelian(2), automorphism=skew,
                         translation=[F(0), F(1, 2)]))
    describe("jordan block of size 3",
             make_system(abelian(3),
                         automorphism=QMatrix([[1, 1, 0], [0, 1, 1],
                                               [0, 0, 1]]),
                         translation=[F(1, 3)] * 3))
    print()

    rng = random.Random(99)
    trials, mismatches = 300, 0
    for _ in range(trials):
        d = rng.randint(1, 4)
        upper = QMatrix([[1 if i == j else
                          (rng.randint(-2, 2) if j > i else 0)
                          for j in range(d)] for i in range(d)])
        a = [F(rng.randint(-8, 8), rng.randint(1, 8)) for _ in range(d)]
        system = make_system(abelian(d), automorphism=upper, translation=a)
        if torus_decide(system).status != full_decide(system).status:
            mismatches += 1
    print(f"random family: {trials} systems, {mismatches} disagreements")


if __name__ == "__main__":
    main()
