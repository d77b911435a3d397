"""Forms over the integers and categories with duality.

Run with ``python demos/forms_and_duality.py``.
"""
import numpy as np

from equibar.category import category_corpus, compare_sd_nerve, d_construction, sym_category
from equibar.forms import (K0Element, invariants, k0_is_invertible, random_unimodular,
                           standard_hyperbolic, symplectic_normalize, unit_form)


def main():
    print("symmetric forms")
    for label, F in (("<1>", unit_form()), ("H", standard_hyperbolic(1, 1))):
        ok, _ = k0_is_invertible(K0Element(F))
        print(f"  {label}: {invariants(F).to_json()} invertible={ok}")

    print("\nalternating forms: recover a symplectic basis from a scrambled copy")
    rng = np.random.default_rng(1)
    J = standard_hyperbolic(3, -1)
    A = J.congruent_by(random_unimodular(6, rng))
    P, n = symplectic_normalize(A)
    print(f"  rank {A.rank}, found n = {n}")
    print("  P^T A P =")
    print(np.array(A.congruent_by(P).gram))

    print("\ncategories with duality")
    for name, D in category_corpus().items():
        sd_ok = compare_sd_nerve(D.category, 2).ok
        sym = sym_category(D)
        dc = d_construction(D)
        print(f"  {name:8s} |Ob|={D.category.n_objects} |Mor|={D.category.n_morphisms} "
              f"Sd check={sd_ok} |Ob Sym|={sym.n_objects} |Ob D|={dc.category.n_objects}")


if __name__ == "__main__":
    main()
