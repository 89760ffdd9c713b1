"""Investigate the minimal polynomial degree of B(t) for cascade3."""
import numpy as np

from lindblad_pc import assemble, builtin, integral_at, vec

np.set_printoptions(precision=3, suppress=True, linewidth=160)


def power_singvals(a, mmax):
    n = a.shape[0]
    power = np.eye(n, dtype=complex)
    vecs = [vec(power) / np.linalg.norm(vec(power))]
    for m in range(1, mmax + 1):
        power = power @ a
        vecs.append(vec(power) / np.linalg.norm(vec(power)))
    basis = np.column_stack(vecs)
    return np.linalg.svd(basis, compute_uv=False)


for eps in (1.0, 0.5, 0.0):
    g = assemble(builtin("cascade3", {"eps": eps}))
    b = integral_at(g, 1.0)
    s = power_singvals(b, 9)
    print(f"eps={eps}: singular values of [I, B, ..., B^9] (normalized):")
    print(" ", s)
    # eigenvalues of B tell the story: minimal poly degree = number of
    # distinct eigenvalues weighted by largest Jordan block
    ev = np.linalg.eigvals(b)
    print("  eigenvalues of B(1):", np.sort_complex(ev.round(6)))
    print("  distinct (rounded 1e-8):", len(set(np.round(ev, 8))))
