"""Minimal or not: translations and their invariant subtori.

A nilmanifold translation is minimal exactly when its abelianization
rotates every rational direction irrationally.  The decider returns the
offending covectors when it does not, and the translation criterion backs
an AA verdict with a normal abelian witness ideal.
"""

from nilaa import (corpus_file, minimality_check, parse_system,
                   system_from_dict, translation_decide)


def torus_translation(dim, params, entries):
    return system_from_dict({"dim": dim, "params": params,
                             "translation": entries})


def show(label, report):
    print(f"{label}: {report.status}")
    if report.certificate is not None:
        print(f"  constant covectors: {report.certificate.covectors}")
    for note in report.notes:
        print(f"  {note}")


def main():
    show("rotation by generic t", minimality_check(
        torus_translation(1, ["t"], ["t"])))
    show("rotation by 1/2", minimality_check(
        torus_translation(1, [], ["1/2"])))
    show("diagonal rotation (t, t)", minimality_check(
        torus_translation(2, ["t"], ["t", "t"])))
    show("independent rotation (s, t)", minimality_check(
        torus_translation(2, ["s", "t"], ["s", "t"])))
    print()

    heis = parse_system(corpus_file("heisenberg_translation.json"))
    show("heisenberg central-avoiding translation", minimality_check(heis))
    verdict = translation_decide(heis)
    print(f"translation criterion: {verdict.status}")
    print(f"  witness ideal basis: {verdict.certificate.subspace.basis}")
    for note in verdict.notes:
        print(f"  {note}")


if __name__ == "__main__":
    main()
