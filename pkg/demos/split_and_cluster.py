"""
Proof surgery: restriction, splitting, clustering, degree rebalance
====================================================================

Demonstrates the four proof transformations on seeded random {+1,-1}
derivations.  Splitting eliminates a variable while keeping the
surviving pair products inside the original set; clustering merges
paired gadget copies and kills heavy terms at a predictable rate; the
degree rebalance caps line degree by twice the quadratic degree.
"""

from pclab.algebra import FOURIER, plain
from pclab.formulas import AxiomSystem, cnf_to_axioms, gen_bop_lifted, gen_cycle_tseitin
from pclab.proofs import check_pc, proof_lines, quadratic_degree, random_derivation
from pclab.transforms import (
    Restriction,
    cluster_retention,
    qdeg_to_deg,
    quadratic_containment_check,
    random_pairing,
    cluster_proof,
    restrict_proof,
    split,
)

# a parity system extended with a spare variable that no axiom mentions:
# exactly the situation in which a proof can be split at that variable
base = gen_cycle_tseitin(4)
w = plain("w1")
ax = AxiomSystem(base.field, base.basis, base.polys, base.universe + (w,), dict(base.groups))
proof = random_derivation(ax, 40, seed=4)
report = check_pc(proof)
print(f"random derivation: {report.num_lines} lines, size {report.size}, degree {report.degree}")

out = split(proof, w, prune_dead=True)
report2 = check_pc(out)
assert report2.valid
assert all(v.base != w for q in proof_lines(out) for v in q.variables())
print(f"after splitting at {w}: {report2.num_lines} lines, size {report2.size}; "
      f"pair products contained: {quadratic_containment_check(proof, out, w)}")

# restriction: assigning a variable rewrites every line and drops the
# lines that become identically zero
rho = Restriction({plain("x1"): True})
restricted, _ = restrict_proof(proof, rho)
print(f"after assigning x1=TRUE: {check_pc(restricted).num_lines} lines, "
      f"universe {len(restricted.axioms.universe)} variables")

# degree rebalance: line degree bounded by twice the quadratic degree
d = quadratic_degree(proof)
balanced = qdeg_to_deg(proof)
rb = check_pc(balanced)
assert rb.valid
print(f"degree rebalance: degree {report.degree} -> {rb.degree} "
      f"(quadratic degree {d}, bound {2 * max(d, 2)})")

# clustering pairs the ell gadget copies of every edge; a term holding
# one copy of each pair collapses, so heavy terms rarely survive
lax = cnf_to_axioms(gen_bop_lifted(2, 2), FOURIER)
lproof = random_derivation(lax, 30, seed=5)
cmap = random_pairing(2, 2, seed=7)
clustered = cluster_proof(lproof, cmap)
rc = check_pc(clustered)
assert rc.valid
print(f"\nclustered lifted derivation: {rc.num_lines} lines over "
      f"{len(clustered.axioms.universe)} cluster variables")

print("\nMonte Carlo survival of a degree-(ell/2) term under a random pairing")
for ell in (8, 12, 16):
    q = 0.75 ** (ell // 2)
    r = cluster_retention(ell, ell // 2, 20000, seed=11)
    print(f"  ell={ell:>2}: measured {r:.4f}, predicted upper bound {q:.4f}")
