"""Walk through the bar-construction side of the package on a few small monoids.

Run with ``python demos/bar_tour.py``.
"""
from equibar.bar import (bar, fixed_point_bijection_b, ji_contraction_check, real_bar,
                         verify_group_completion)
from equibar.homology import homology_groups
from equibar.monoid import corpus, cyclic, max_monoid


def main():
    print("homology of classifying spaces")
    for n in (2, 3, 4):
        groups = homology_groups(bar(cyclic(n), 5), 4)
        print(f"  B C{n}: " + ", ".join(str(g) for g in groups))

    print("\nreal structure on the bar construction, counts per degree")
    for name, M in corpus().items():
        rb = real_bar(M, 3)
        print(f"  {name:8s} {list(rb.base.counts)}")

    print("\nfixed points of the subdivided real bar construction")
    for name, M in corpus().items():
        res = fixed_point_bijection_b(M, 2)
        print(f"  {name:8s} fixed {res.fixed_counts} target {res.target_counts} ok={res.ok}")

    print("\nretraction r with r i = id")
    for M in (cyclic(2), cyclic(4)):
        rep = ji_contraction_check(M, 2)
        print(f"  {M.name}: exact={rep.retraction_exact} "
              + " ".join(f"H{d['degree']}={d['bar']}" for d in rep.degrees))

    print("\ngroup completion")
    for M in (cyclic(2), max_monoid()):
        rep = verify_group_completion(M, 2, 4)
        stages = [d["bar_side"]["stabilized_at"] for d in rep["degrees"]]
        print(f"  {M.name}: {rep['status']} generator {rep['generator']} "
              f"stabilized at stages {stages}")


if __name__ == "__main__":
    main()
