"""Brute-force ground truth: statevector simulation and ZX-diagram evaluation.

Nothing here shares evaluation code with :mod:`zxcontract.engine` or the
hybrid evaluator in :mod:`zxcontract.zxgraph`; the two oracles exist to
cross-check each other and everything downstream.
"""

from __future__ import annotations

import cmath

import numpy as np

from .circuit import Circuit, gate_matrix
from .zxgraph import SQRT2, ZxDiagram

MAX_QUBITS = 22


def statevector(c: Circuit) -> np.ndarray:
    """Final state ``C|0...0>`` as a tensor of shape ``(2,) * n`` (axis q = qubit q)."""
    n = c.num_qubits
    if n > MAX_QUBITS:
        raise ValueError(f"statevector oracle limited to {MAX_QUBITS} qubits, got {n}")
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1.0
    for g in c.gates:
        k = len(g.qubits)
        u = gate_matrix(g).reshape((2,) * (2 * k))
        # contract the gate's input legs with the state's qubit axes
        psi = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(g.qubits)))
        psi = np.moveaxis(psi, list(range(k)), list(g.qubits))
    return psi


def statevector_amplitude(c: Circuit, x: str | None = None) -> complex:
    """``<x|C|0...0>`` by dense simulation."""
    if x is None:
        x = "0" * c.num_qubits
    if len(x) != c.num_qubits:
        raise ValueError("bitstring length must equal the number of qubits")
    psi = statevector(c)
    return complex(psi[tuple(int(b) for b in x)])


# ---------------------------------------------------------------------------
# diagram evaluation by exhaustive summation
#
# Every wire end is a binary variable. Each spider is a factor over its legs,
# each Hadamard wire a 2x2 factor between its two end variables. The value is
# the sum over all assignments of the product of factors, computed by summing
# variables out one at a time (smallest resulting factor first).


def _z_factor(n: int, phase: float) -> np.ndarray:
    if n == 0:
        return np.array(1 + cmath.exp(1j * phase))
    t = np.zeros((2,) * n, dtype=complex)
    t[(0,) * n] = 1.0
    t[(1,) * n] = cmath.exp(1j * phase)
    return t


def _x_factor(n: int, phase: float) -> np.ndarray:
    if n == 0:
        return np.array(1 + cmath.exp(1j * phase))
    grids = np.indices((2,) * n).sum(axis=0)
    sign = np.where(grids % 2 == 0, 1.0, -1.0)
    return (1 + cmath.exp(1j * phase) * sign) / SQRT2**n


_HAD = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2


def _factors(d: ZxDiagram):
    legs: dict[int, list[int]] = {v: [] for v in d.spiders}
    factors = []
    nvar = 0
    for w in d.wires:
        if w.hadamard:
            va, vb = nvar, nvar + 1
            nvar += 2
            factors.append(((va, vb), _HAD))
        else:
            va = vb = nvar
            nvar += 1
        legs[w.a].append(va)
        legs[w.b].append(vb)
    ports = []
    for node, had in d.boundary:
        leg = nvar
        nvar += 1
        legs[node].append(leg)
        if had:
            port = nvar
            nvar += 1
            factors.append(((leg, port), _HAD))
        else:
            port = leg
        ports.append(port)
    for v, sp in d.spiders.items():
        make = _z_factor if sp.kind == "Z" else _x_factor
        factors.append((tuple(legs[v]), make(len(legs[v]), sp.phase)))
    return factors, ports


def _einsum(factors, out_vars):
    local: dict[int, int] = {}
    args = []
    for vars_, arr in factors:
        for v in vars_:
            local.setdefault(v, len(local))
        args.extend([arr, [local[v] for v in vars_]])
    for v in out_vars:
        local.setdefault(v, len(local))
    if len(local) > 52:
        raise ValueError("factor too large for exhaustive evaluation")
    return np.einsum(*args, [local[v] for v in out_vars])


def zx_tensor(d: ZxDiagram) -> np.ndarray:
    """Tensor of a (possibly open) diagram, one axis per boundary port in order."""
    factors, ports = _factors(d)
    keep = set(ports)
    pending = {v for vars_, _ in factors for v in vars_} - keep
    while pending:
        best = None
        for v in sorted(pending):
            touched = set()
            for vars_, _ in factors:
                if v in vars_:
                    touched.update(vars_)
            size = len(touched)
            if best is None or size < best[0]:
                best = (size, v)
                if size <= 2:
                    break
        v = best[1]
        group = [f for f in factors if v in f[0]]
        rest = [f for f in factors if v not in f[0]]
        out = sorted({u for vars_, _ in group for u in vars_} - {v})
        rest.append((tuple(out), _einsum(group, out)))
        factors = rest
        pending.discard(v)
    result = _einsum(factors, ports) if factors else np.array(1.0 + 0j)
    return d.scalar * result


def eval_zx_diagram(d: ZxDiagram) -> complex:
    """Scalar value of a closed diagram."""
    if d.boundary:
        raise ValueError("eval_zx_diagram needs a closed diagram")
    return complex(zx_tensor(d))


def gadget_matrix(d: ZxDiagram, k: int) -> np.ndarray:
    """Read an open k-qubit gadget (ports: inputs then outputs) as a matrix."""
    t = zx_tensor(d)
    # axes are (in_0..in_{k-1}, out_0..out_{k-1}); rows are outputs
    t = np.moveaxis(t, list(range(k)), list(range(k, 2 * k)))
    return t.reshape(2**k, 2**k)
