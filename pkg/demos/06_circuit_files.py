"""Tabletop circuits as text: parse, inspect the plan, run, diagnose.

The circuit language covers the whole optical table - splitters, plates,
mirrors, the cavity - plus photon/spin preparation and measurement choices.
Compilation turns a file into a per-photon operator schedule that any
interaction model can execute.
"""

from spinphoton import circuits
from spinphoton.dsl import ParseError, compile_circuit, parse, pretty_print

source = circuits.load("cnot")
print("bundled gate circuit:")
print(source)

circ = parse(source)
compiled = compile_circuit(circ)
print("compiled schedule:")
for step in compiled.steps:
    extra = f" param={step.param:.4f}" if step.param else ""
    print(f"  photon {step.photon}: {step.op:<12} ports={step.ports}{extra}")

print("\nrun it:")
result = compiled.run()
for rec in sorted(result.distribution, key=str):
    print(f"  {rec}: {result.distribution[rec]:.3f}")

print("\nthe canonical printer normalises formatting:")
print(pretty_print(circ).splitlines()[0])

print("\nerrors point at the offending token:")
broken = "component gate cpbs in=[A, D] out=[C B]\n"
try:
    parse(broken)
except ParseError as e:
    print(f"  {e}")
    print("  " + broken.strip())
    print("  " + " " * (e.col - 1) + "^")
