"""Walk through the Coxeter layer and one contractibility certificate.

We take the infinite dihedral group, list a few normal forms, compute a meet
in the weak order, and certify that the preimage of a weak-order interval
under the longest-element map is contractible.
"""

from kmcomb import CoxeterMatrix, check_combin, meet, normal_form
from kmcomb.coxeter import INF, system_for
from kmcomb.davis import preimage_nodes

C = CoxeterMatrix.from_offdiagonal(2, {(1, 2): INF})
S = system_for(C)

print("Normal forms in the infinite dihedral group:")
for word in [(1, 1), (1, 2, 2, 1), (2, 1, 2)]:
    print(f"  {word} -> {normal_form(word, C)}")

v, w = S.element([1, 2, 1]), S.element([1, 2, 2, 2, 1, 2])
print(f"\nThe word (1, 2, 2, 2, 1, 2) reduces to {w}; meet({v}, {w}) = {meet(v, w)}")

low, high = S.element([1]), S.element([1, 2, 1])
print(f"\nCosets whose longest element lies in [{low}, {high}]:")
for node in preimage_nodes(low, high):
    print(f"  {node}")
report = check_combin(C, low, high)
cert = report.certificate
print(f"\n{cert.size} cosets dismantle to a core of size {cert.core_size}; contractible: {report.passed}")
