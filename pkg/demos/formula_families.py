"""
Formula families and their polynomial translations
===================================================

Walks through the four generator families: the linear ordering
principle, its binary pointer variant, the OR-lifted pointer variant
with repeated gadget copies, and the odd-charge parity cycle.  Shows
clause growth, the two polynomial encodings, and brute-force
satisfiability checks at enumerable sizes.
"""

from pclab.algebra import BOOLEAN, FOURIER
from pclab.formulas import (
    cnf_to_axioms,
    gen_bop,
    gen_bop_lifted,
    gen_cycle_tseitin,
    gen_lop,
    sat_oracle,
)

# clause counts: the ordering principle is cubic in n, the pointer
# variant trades wide vertex clauses for binary code clauses
print("clause counts by family")
for n in (3, 5, 8, 12):
    print(f"  n={n:>2}  lop={len(gen_lop(n)):>5}  bop={len(gen_bop(n)):>5}", end="")
    for ell in (1, 2, 3):
        print(f"  lifted(ell={ell})={len(gen_bop_lifted(n, ell)):>5}", end="")
    print()

# every family is unsatisfiable; the diagonal lift variant loses that
print("\nbrute-force satisfiability at n=3")
print("  lop unsat:", sat_oracle(gen_lop(3)) is None)
print("  bop unsat:", sat_oracle(gen_bop(3)) is None)
print("  lifted(ell=2) unsat:", sat_oracle(gen_bop_lifted(3, 2)) is None)
print("  diagonal lift (2,2) satisfiable:", sat_oracle(gen_bop_lifted(2, 2, diagonal=True)) is not None)

# translating clauses to polynomials: TRUE encodes as 1 in the {0,1}
# basis and as -1 in the {+1,-1} basis, so the same clause becomes a
# different polynomial with a different notion of degree
cnf = gen_bop(3)
clause = cnf.clauses[0]
for basis in (BOOLEAN, FOURIER):
    ax = cnf_to_axioms(cnf, basis)
    print(f"\nfirst axiom in the {basis} encoding ({len(ax.polys)} axioms total):")
    print(" ", ax.polys[0])

# the parity cycle is born polynomial: one product constraint per edge
# with a single reversed sign that makes the charge odd
ax = gen_cycle_tseitin(5)
print(f"\nparity cycle n=5: {len(ax.polys)} axioms over {len(ax.universe)} variables")
for p in ax.polys:
    print(" ", p)
