"""Inversion sets and the graph-product model of the unipotent subgroup.

For the affine rank 2 Cartan matrix every pair of real roots either commutes
or generates a free product, so U_w is modelled by words in root groups
attached to the nodes of a Hasse tree.
"""

from kmcomb import GPElement, GeneralizedCartanMatrix, build_tree, gp_multiply, in_Uw, theta, uw_group_facts

A = GeneralizedCartanMatrix(((2, -2), (-2, 2)))
T = build_tree(A, 3)
S = T.system

w = S.element([1, 2, 1])
print(f"Inversion set of {w}: {sorted(str(r) for r in theta(w, A).as_set())}")

facts = uw_group_facts(w, p=3)
print(f"U_w over F_3: order {facts.order}, abelian {facts.abelian}")

x = GPElement.make([((1, 2), 1)], p=3)
y = GPElement.make([((2,), 2)], p=3)
print(f"\nx = {x}\ny = {y}")
print(f"x*y = {gp_multiply(x, y)}")
print(f"y*x = {gp_multiply(y, x)}")
print(f"x in U_(1,2,1): {in_Uw(x, w)}; y in U_(1,2,1): {in_Uw(y, w)}")
