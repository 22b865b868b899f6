"""The inverse-factorial signature of a two-generator system.

When U moves a generator xi by exactly eta, the curve
exp(-t xi) exp(t(xi + eta)) stays in the codimension-one ideal spanned by
eta and the derived algebra, and its coefficients along eta, [xi, eta],
[xi, [xi, eta]], ... follow the pattern (-1)^k / (k + 1)!.  The package
computes the coefficients from the group law and checks them against an
independent matrix realization; this script prints both.
"""

import math
from fractions import Fraction as F

from nilaa import corpus_file, parse_system, two_generator_analysis


def main():
    for name in ("heisenberg.json", "free_nilpotent_2_3.json"):
        system = parse_system(corpus_file(name))
        report = two_generator_analysis(system)
        print(f"{system.name}: chain length n = {report.n}")
        print("  k   group law      matrix oracle   (-1)^k/(k+1)!")
        for k in range(report.n):
            predicted = F((-1) ** k, math.factorial(k + 1))
            print(f"  {k}   {str(report.coefficients[k]):<14} "
                  f"{str(report.matrix_coefficients[k]):<15} "
                  f"{predicted}")
        print(f"  inverse-factorial pattern: "
              f"{'matches' if report.inverse_factorial_match else 'differs'}")
        print(f"  plain 1/k! pattern:        "
              f"{'matches' if report.plain_factorial_match else 'differs'}")
        for note in report.notes:
            print(f"  note: {note}")
        print()


if __name__ == "__main__":
    main()
