"""Walk through the 2-dimensional solution tables and a finite field count."""

from permlab.classify import PLANE, enumerate_symmetric_solutions, format_table, golden_algebra, verify_classification
from permlab.scalars import Poly
from permlab.tensors import Tensor
from permlab.ybe import coboundary_delta

reports = verify_classification(fields=(3, 5))
print(format_table(reports))

# the coproduct of e2 (x) e2 in algebra (a)
A = golden_algebra("a")
r = Tensor.from_terms((PLANE, PLANE), {("e2", "e2"): Poly.const(1, ("kappa", "lambda", "nu"))})
print("Delta(e1) =", coboundary_delta(A, r).table()["e1"])

for p in (3, 5, 7):
    sols = enumerate_symmetric_solutions(A, p, "a")
    print(f"GF({p}): {sols.count} symmetric solutions")
