"""Cohomology of the unipotent group of a rank 3 all-(-2) Cartan matrix.

Chains in the Hasse tree index the products that survive, so the Hilbert
series is a sum over chains. The W3 presentation is printed as quoted, next to
the ideal read off from the tree.
"""

from kmcomb import GeneralizedCartanMatrix, build_tree, telescope_limit, tree_hilbert, w3_presentation
from kmcomb.trees import w3_ideal_from_tree

A = GeneralizedCartanMatrix(((2, -2, -2), (-2, 2, -2), (-2, -2, 2)))
for depth in (1, 2, 3):
    H = tree_hilbert(build_tree(A, depth), max_deg=6)
    print(f"depth {depth}: {H.series.to_json()}")

rep = w3_presentation(6)
print(f"\nW3 quoted relations: {['*'.join(r) for r in rep.ideal_printed]}")
missing = set(w3_ideal_from_tree()) - set(rep.ideal_printed)
print(f"relations forced by the tree but absent from the quoted list: {['*'.join(r) for r in missing]}")
print(f"series from the tree ideal: {rep.series_total.to_json()}")

tower = telescope_limit(range(1, 6), p=2, k=1, q=2, max_deg=6)
print(f"\nq = p tower dims in degree 1: {[tower.dims[m][1] for m in tower.stages]}")
print(f"every restriction map surjective: {tower.all_surjective}")
