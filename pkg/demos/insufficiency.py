"""Why the first-order test cannot be the whole story.

The free 2-generator class-3 algebra carries an affine map that passes
every Lie-level necessary condition yet fails to be almost automorphic.
The failure is a bracket that refuses to vanish one level deeper than
the first-order test looks.
"""

from nilaa import corpus_file, full_decide, lie_necessary, parse_system


def main():
    system = parse_system(corpus_file("free_nilpotent_2_3.json"))
    print(f"system: {system.name} (dim {system.dim})")
    print()

    report = lie_necessary(system)
    print("first-order necessary condition")
    print(f"  (U - I)(Ad_a U - I) = 0 identically: {report.composite_zero}")
    print(f"  image of Ad_a U - I is abelian:      {report.image_abelian}")
    print(f"  verdict: {'pass' if report.passed else 'fail'}")
    print()

    verdict = full_decide(system)
    print(f"full characterization: {verdict.status}")
    cert = verdict.certificate

    def ints(vec):
        return tuple(int(x) for x in vec)

    print(f"  obstruction: [{ints(cert.left)}, {ints(cert.right)}] "
          f"= {ints(cert.bracket)}")
    print()
    print("the two coefficient directions of the defect map commute to a")
    print("nonzero central element, so the rational hull of the defect is")
    print("not abelian and no conjugation can repair it.  The first-order")
    print("test only sees brackets against the image of U - I and misses")
    print("this pairing entirely.")


if __name__ == "__main__":
    main()
