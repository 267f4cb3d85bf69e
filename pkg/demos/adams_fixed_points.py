"""Fixed points of an Adams operation on a rank 2 cohomology ring.

The four cells of the case table are keyed by whether p^(2k) and p^(lk) are
1 modulo q. For each cell we print the surviving generators and the first few
Poincare series coefficients, then run the rank 2 comparison.
"""

from kmcomb import classify_adams_case, e2_rank2_fixed, rank2_compare

witnesses = [(2, 1, 4, 3), (2, 1, 3, 3), (3, 1, 3, 13), (2, 1, 3, 5)]
for p, k, l, q in witnesses:
    cell = classify_adams_case(p, k, l, q)
    e2 = e2_rank2_fixed(p, k, l, q, 16)
    gens = ", ".join(f"{g.name}({g.degree})" for g in e2.algebra.generators)
    print(f"(p,k,l,q)={p, k, l, q} cell {cell.key}: generators {gens}")
    print(f"  series to degree 16: {e2.series.to_json()}")

print()
for l in (3, 4):
    comp = rank2_compare(2, 2, l, 3)
    print(f"l={l}: E2 count {comp.e2_count}, colimit count {comp.colimit_count} "
          f"(stated {comp.stated_colimit_count}), verdict {comp.verdict}")
