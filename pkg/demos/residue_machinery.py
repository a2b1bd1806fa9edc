"""
Span bases and the reduction operator
======================================

Shows the linear-algebra core used by the degree lower-bound machinery:
spans of axiom families closed under multiplication, normal forms
against those spans, the vertex-indexed reduction operator R, and the
heavy-term split round that combines everything.
"""

from pclab.algebra import BOOLEAN, FOURIER, Poly, edge, make_term
from pclab.degreelab import (
    ResidueOracle,
    bop_context,
    heavy_split_round,
    heavy_term_selection,
    span_basis,
    verify_residue_properties,
)
from pclab.formulas import cnf_to_axioms, gen_bop_lifted
from pclab.proofs import check_pc, random_derivation

# the span of the ordering axioms on 3 vertices: its standard monomials
# count the strict partial orders that survive the constraints
context = bop_context(3, 1)
ordering = [context.polys[i] for i in context.groups["T"]]
sp = span_basis(ordering, universe=context.universe)
print(f"span of the ordering group: {len(sp.std_monomials)} standard monomials")
print("  leading terms of the border:",
      ["*".join(map(str, t)) for t in sp.leading_terms()[:3]], "...")

# transitivity closure: on every order with 1<2 and 2<3 the edge 1<3 is
# present, so the difference of the two products reduces to zero
x12, x23, x13 = edge(1, 2, 1), edge(2, 3, 1), edge(1, 3, 1)
p = Poly(context.field, BOOLEAN, {
    make_term([x12, x23]): 1,
    make_term([x12, x23, x13]): context.field.p - 1,
})
print("  reduce(x12*x23 - x12*x23*x13) =", sp.reduce(p))

# the reduction operator R reduces each term against the span picked
# out by the vertices that term touches
oracle = ResidueOracle(context)
print("\nreduction operator on the 3-vertex pointer system")
print("  R(1) =", oracle.R(Poly(context.field, BOOLEAN, {(): 1})))
for i, poly in enumerate(context.polys[:3]):
    print(f"  R(axiom {i}) =", oracle.R(poly))
anti = Poly(context.field, BOOLEAN, {make_term([x12, edge(2, 1, 1)]): 1})
print("  R(x(1,2,1)*x(2,1,1)) =", oracle.R(anti), " (antisymmetry)")

# the defining properties, verified on seeded random polynomial pairs
for report in verify_residue_properties(3, 1, pairs=50, seed=0, oracle=oracle):
    print(" ", report)

# heavy-term split round: find the vertex touched by the most quadratic
# products, freeze its surroundings, and split its private variables
ax = cnf_to_axioms(gen_bop_lifted(3, 2), FOURIER)
proof = random_derivation(ax, 30, seed=0)
sel = heavy_term_selection(proof, 2)
print(f"\nheavy products touching >=2 vertices: {len(sel.heavy)}; busiest vertex {sel.vertex}")
print("  split variables:", [str(v) for v in sel.split_vars])
out, rounds = heavy_split_round(proof, 2)
assert check_pc(out).valid
print(f"  after one round: {rounds.before} heavy products -> {rounds.after}, "
      f"split at {[str(v) for v in rounds.split_at]}")
