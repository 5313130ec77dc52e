"""Amplitude of a Bell circuit through the full ZX pipeline, checked against a statevector."""

from zxcontract import AnnealConfig, parse_circuit, pipeline, statevector_amplitude

c = parse_circuit("qubits 2\nh 0\ncnot 0 1\n")
for x in ("00", "01", "10", "11"):
    res = pipeline(c, AnnealConfig(nb_steps=5), x=x)
    print(f"<{x}|C|00> = {res.amplitude:.6f}   statevector {statevector_amplitude(c, x):.6f}")
