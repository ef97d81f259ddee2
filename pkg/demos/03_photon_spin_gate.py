"""The photon-spin controlled-NOT, ideal and lossy.

A circular splitter routes the photon through a two-arm cavity loop and back
out; the spin decides whether the photon's circular polarization survives the
round trip.  Truth table: spin Up leaves the photon alone, spin Down swaps
R and L.
"""

import numpy as np

from spinphoton import protocols as proto
from spinphoton.cavity import ContrastParams, InteractionModel

SQ = 1 / np.sqrt(2)
LABELS = ("R_Up", "R_Down", "L_Up", "L_Down")

print("ideal gate matrix (columns = inputs):")
mat = proto.cnot_gate_matrix()
print("        " + "  ".join(f"{c:>6}" for c in LABELS))
for i, row in enumerate(LABELS):
    cells = "  ".join(f"{mat[i, j].real:+6.3f}" for j in range(4))
    print(f"{row:>7} {cells}")

lossy = InteractionModel.from_contrast(ContrastParams(q_ratio_sq=0.8, purcell=6.0))
print("\nwith a realistic cavity ((Q/Q0)^2 = 0.8, Purcell factor 6):")
mat = proto.cnot_gate_matrix(lossy)
print("        " + "  ".join(f"{c:>6}" for c in LABELS))
for i, row in enumerate(LABELS):
    cells = "  ".join(f"{mat[i, j].real:+6.3f}" for j in range(4))
    print(f"{row:>7} {cells}")

print("\nheralded figures per input (photon exits alive at port D):")
for pol_label, pol in (("R", (1, 0)), ("L", (0, 1)), ("H", (SQ, SQ))):
    for spin_label, spin in (("Up", (1, 0)), ("+", (SQ, SQ))):
        res = proto.cnot(pol, spin, lossy)
        print(
            f"  photon {pol_label}, spin {spin_label:>2}: "
            f"success {res.success_probability:.4f}, fidelity {res.fidelity:.4f}"
        )

print()
print("the (H, +) row is exact: matched branch amplitudes satisfy ut+ur =")
print("ct+cr = 1, so the uniform superposition rides a lossless mode of the")
print("gate.  Inputs that tell the branches apart pay the full price.")
