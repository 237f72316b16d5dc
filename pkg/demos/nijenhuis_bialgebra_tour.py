"""Check the Nijenhuis bialgebra corpus bundle, then compare the three verdicts on random data."""

from permlab.bialgebra import PermBialgebra, check_bialgebra
from permlab.corpus import load_corpus
from permlab.sampling import Sampler, triangle_candidate, triangle_verdicts
from permlab.scalars import RewriteRule

b = load_corpus("example-2-26")
B = PermBialgebra(b.get("mul", "algebra"), b.get("cop", "coalgebra"), b.get("N", "map"), b.get("S", "map"))
print(check_bialgebra(B).render())

locus = [RewriteRule.parse("k4", "0", b.parameters)]
print("with k4 = 0:", check_bialgebra(B, locus).verdict)
print("three verdicts:", triangle_verdicts(B))

s = Sampler(5, seed=1)
for _ in range(5):
    print(triangle_verdicts(triangle_candidate(s)))
