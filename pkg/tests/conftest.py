import pytest

from kmcomb.coxeter import INF, CoxeterMatrix, GeneralizedCartanMatrix, system_for


def coxeter(n, entries):
    return CoxeterMatrix.from_offdiagonal(n, entries)


M12_INF = coxeter(2, {(1, 2): INF})
RANK3_INF = coxeter(3, {(1, 2): INF, (1, 3): INF, (2, 3): INF})
AFFINE_A2 = coxeter(3, {(1, 2): 3, (1, 3): 3, (2, 3): 3})
FINITE_A2 = coxeter(2, {(1, 2): 3})
FINITE_B2 = coxeter(2, {(1, 2): 4})
FINITE_A3 = coxeter(3, {(1, 2): 3, (2, 3): 3})

SWEEP_SYSTEMS = {
    "m12=inf": M12_INF,
    "rank3-all-inf": RANK3_INF,
    "affine-A2": AFFINE_A2,
    "A2": FINITE_A2,
    "B2": FINITE_B2,
}


def gcm(rows):
    return GeneralizedCartanMatrix(tuple(tuple(r) for r in rows))


GCMS = {
    "A2": gcm([[2, -1], [-1, 2]]),
    "B2": gcm([[2, -2], [-1, 2]]),
    "G2": gcm([[2, -1], [-3, 2]]),
    "affine-A1": gcm([[2, -2], [-2, 2]]),
    "hyperbolic-3": gcm([[2, -3], [-3, 2]]),
    "affine-A2": gcm([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]),
    "rank3-all-2": gcm([[2, -2, -2], [-2, 2, -2], [-2, -2, 2]]),
}

TREE_GCMS = {k: GCMS[k] for k in ("affine-A1", "hyperbolic-3", "rank3-all-2")}


@pytest.fixture(params=sorted(SWEEP_SYSTEMS))
def sweep_system(request):
    return system_for(SWEEP_SYSTEMS[request.param])
